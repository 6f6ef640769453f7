// kreg-cli: runs experiment configurations through the C interface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kreg/kreg.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return true;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

void print_config_errors(const kreg_config* config) {
  const size_t n = kreg_config_error_count(config);
  for (size_t i = 0; i < n; ++i) {
    const char* path = kreg_config_error_path(config, i);
    std::cerr << "config error: " << (*path ? path : "<root>") << ": " << kreg_config_error_message(config, i) << '\n';
  }
}

int load(const Options& opts, kreg_config** config) {
  std::string text;
  if (!read_file(opts.config, text)) {
    std::cerr << "cannot read " << opts.config << '\n';
    return KREG_CONFIG_ERROR;
  }
  if (kreg_config_parse(text.c_str(), config) != KREG_OK) {
    print_config_errors(*config);
    if (kreg_config_error_count(*config) == 0) std::cerr << kreg_last_error() << '\n';
    kreg_config_free(*config);
    *config = nullptr;
    return KREG_CONFIG_ERROR;
  }
  if (opts.seed) kreg_config_set_seed(*config, *opts.seed);
  return KREG_OK;
}

int run_mode(const std::string& mode, const Options& opts) {
  kreg_config* config = nullptr;
  if (const int rc = load(opts, &config); rc != KREG_OK) return rc;
  if (mode != kreg_config_mode(config)) {
    std::cerr << "config error: mode: configuration is for '" << kreg_config_mode(config) << "', not '" << mode << "'\n";
    kreg_config_free(config);
    return KREG_CONFIG_ERROR;
  }
  kreg_report* report = nullptr;
  const kreg_status status = kreg_run(config, &report);
  if (report == nullptr) {
    std::cerr << "error: " << kreg_last_error() << '\n';
    kreg_config_free(config);
    return status;
  }
  const std::string out = opts.out.empty() ? kreg_config_output_json(config) : opts.out;
  const std::string csv = opts.csv.empty() ? kreg_config_output_csv(config) : opts.csv;
  int rc = kreg_report_exit_code(report);
  if (out.empty()) {
    std::cout << kreg_report_json(report);
  } else if (!write_file(out, kreg_report_json(report))) {
    std::cerr << "cannot write " << out << '\n';
    rc = KREG_INTERNAL_ERROR;
  }
  if (!csv.empty() && !write_file(csv, kreg_report_csv(report))) {
    std::cerr << "cannot write " << csv << '\n';
    rc = KREG_INTERNAL_ERROR;
  }
  if (status != KREG_OK) std::cerr << kreg_last_error() << '\n';
  kreg_report_free(report);
  kreg_config_free(config);
  return rc;
}

int validate(const Options& opts) {
  kreg_config* config = nullptr;
  if (const int rc = load(opts, &config); rc != KREG_OK) return rc;
  std::cout << kreg_config_json(config) << '\n';
  kreg_config_free(config);
  return KREG_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel regularization experiments: solve, verify, probe, gram, validate"};
  app.set_version_flag("--version", kreg_version());
  app.require_subcommand(1);

  Options opts;
  auto add_common = [&](CLI::App* sub, bool outputs) {
    sub->add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "Override the configured seed");
    if (outputs) {
      sub->add_option("--out", opts.out, "Write the JSON report here instead of stdout");
      sub->add_option("--csv", opts.csv, "Write per-trial rows as CSV");
    }
  };
  for (const char* mode : {"solve", "verify", "probe", "gram"}) {
    add_common(app.add_subcommand(mode, std::string("Run a '") + mode + "' configuration"), true);
  }
  add_common(app.add_subcommand("validate", "Check a configuration and print its canonical form"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : KREG_CONFIG_ERROR;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "validate") return validate(opts);
  return run_mode(name, opts);
}
