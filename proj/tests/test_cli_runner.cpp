#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kreg/config.hpp"
#include "kreg/runner.hpp"

using namespace kreg;
using nlohmann::json;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(KREG_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_error_at(const ConfigParse& p, const std::string& path) {
  for (const auto& e : p.errors) {
    if (e.path == path) return true;
  }
  return false;
}

const json* find_check(const json& doc, const std::string& name) {
  for (const auto& c : doc["checks"]) {
    if (c["name"] == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("validation errors") {
  SUBCASE("empty input") {
    const auto p = validate_config("");
    CHECK_FALSE(p.ok());
    REQUIRE(p.errors.size() == 1);
    CHECK(p.errors[0].path == "mode");
  }
  SUBCASE("malformed json") {
    const auto p = validate_config("{\"mode\": ");
    CHECK_FALSE(p.ok());
    CHECK_FALSE(p.errors.empty());
  }
  SUBCASE("every problem is reported") {
    const auto p = validate_config(read_data("invalid.json"));
    CHECK_FALSE(p.ok());
    CHECK(has_error_at(p, "kernel.width"));
    CHECK(has_error_at(p, "kernel.colour"));
    CHECK(has_error_at(p, "gamma"));
    CHECK(p.errors.size() >= 3);
  }
  SUBCASE("unknown mode and top-level key") {
    const auto p = validate_config(json{{"mode", "train"}, {"sede", 3}});
    CHECK(has_error_at(p, "mode"));
    CHECK(has_error_at(p, "sede"));
  }
  SUBCASE("solve needs a loss") {
    json doc = json::parse(read_data("solve_rls.json"));
    doc.erase("loss");
    CHECK(has_error_at(validate_config(doc), "loss"));
  }
  SUBCASE("functional dimension must match the kernel") {
    json doc = json::parse(read_data("solve_rls.json"));
    doc["functionals"][1]["point"] = {0, 1, 2};
    const auto p = validate_config(doc);
    CHECK_FALSE(p.ok());
  }
}

TEST_CASE("defaults and round trip") {
  const auto minimal = validate_config(R"({"mode": "verify"})");
  REQUIRE(minimal.ok());
  const auto& c = *minimal.config;
  CHECK(c.seed == 0);
  CHECK(c.probe.dim == 2);
  CHECK(c.probe.trials == 1000);
  CHECK(c.regularizer == Regularizer::radial(RadialProfile::square()));
  CHECK(c.tolerances.check == 1e-9);
  CHECK(c.tolerances.radius == 1e-3);

  for (const char* name : {"solve_rls.json", "gram.json", "verify_square.json", "verify_anisotropic.json",
                           "probe_span_anisotropic.json"}) {
    const auto p = validate_config(read_data(name));
    INFO(name);
    REQUIRE(p.ok());
    const json canonical = to_json(*p.config);
    const auto again = validate_config(canonical);
    REQUIRE(again.ok());
    CHECK(*again.config == *p.config);
    CHECK(to_json(*again.config) == canonical);
  }
  const auto inf = validate_config(R"({"mode": "solve", "kernel": {"family": "linear", "input_dim": 1},
    "functionals": [{"type": "point", "point": [1]}], "loss": {"type": "squared", "targets": [1]}, "gamma": "inf"})");
  REQUIRE(inf.ok());
  CHECK(inf.config->gamma.is_infinite());
  CHECK(to_json(*inf.config)["gamma"] == "inf");
}

TEST_CASE("run: gram") {
  const auto p = validate_config(read_data("gram.json"));
  REQUIRE(p.ok());
  const auto r = run(*p.config);
  CHECK(r.exit_code() == 0);
  CHECK(r.document["results"]["size"] == 3);
  CHECK(r.document["results"]["gram"][0][0].get<double>() == 1.0);
  REQUIRE(find_check(r.document, "positive_semidefinite") != nullptr);
}

TEST_CASE("run: solve") {
  const auto p = validate_config(read_data("solve_rls.json"));
  REQUIRE(p.ok());
  const auto r = run(*p.config);
  CHECK(r.exit_code() == 0);
  CHECK(r.all_passed);
  const auto& c = r.document["results"]["coefficients"];
  CHECK(c[0].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c[1].get<double>() == doctest::Approx(0.0));
  CHECK(r.document["tool"] == "kreg");
  CHECK(r.document["version"] == kVersion);
  CHECK(r.document["status"] == "ok");
}

TEST_CASE("run: numerical failure is reported, not thrown") {
  const auto p = validate_config(read_data("solve_kpca_infeasible.json"));
  REQUIRE(p.ok());
  const auto r = run(*p.config);
  CHECK(r.exit_code() == 3);
  CHECK_FALSE(r.all_passed);
  CHECK(r.document.contains("error"));
}

TEST_CASE("run: verify") {
  const auto square = validate_config(read_data("verify_square.json"));
  REQUIRE(square.ok());
  const auto a = run(*square.config);
  CHECK(a.exit_code() == 0);
  for (const char* name : {"orthogonal_monotonicity", "radial_nondecreasing", "characterization_agreement",
                           "rotation_path_invariants", "monotone_chain", "sublevel_ball_like", "necessity_bound"}) {
    INFO(name);
    const json* c = find_check(a.document, name);
    REQUIRE(c != nullptr);
    CHECK((*c)["passed"].get<bool>());
  }
  const auto b = run(*square.config);
  CHECK(numerical_fields(a.document) == numerical_fields(b.document));
  CHECK(numerical_fields(a.document).dump() == numerical_fields(b.document).dump());
  CHECK(a.csv == b.csv);
  CHECK(a.csv.rfind("probe,index,x,y,scale,lhs,rhs,violated\n", 0) == 0);

  const auto aniso = validate_config(read_data("verify_anisotropic.json"));
  REQUIRE(aniso.ok());
  const auto bad = run(*aniso.config);
  CHECK(bad.exit_code() == 1);
  const json* c = find_check(bad.document, "orthogonal_monotonicity");
  REQUIRE(c != nullptr);
  CHECK_FALSE((*c)["passed"].get<bool>());
}

TEST_CASE("run: span probe") {
  const auto p = validate_config(read_data("probe_span_anisotropic.json"));
  REQUIRE(p.ok());
  const auto r = run(*p.config);
  CHECK(r.document["results"]["span_distance"].get<double>() == doctest::Approx(0.6522734369234372).epsilon(1e-8));
}

TEST_CASE("config error report") {
  const auto r = config_error_report({{"kernel.width", "must be positive"}});
  CHECK(r.exit_code() == 2);
  CHECK(r.document["status"] == "config_error");
  CHECK(r.document["error"]["kind"] == "config");
}
