#include "kreg/config.hpp"

#include <cmath>
#include <set>

#include "kreg/errors.hpp"
#include "overloaded.hpp"

namespace kreg {

using detail::overloaded;
using nlohmann::json;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::solve: return "solve";
    case Mode::verify: return "verify";
    case Mode::gram: return "gram";
    case Mode::probe: return "probe";
  }
  return "unknown";
}

json to_json(ExtendedReal value) {
  if (value.is_infinite()) return "inf";
  return value.value();
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

namespace {

const std::set<std::string> kProbeNames{"orthogonal", "ray",   "equal_norm", "equivalence", "rotation_path",
                                        "contraction", "chain", "sublevel",   "necessity",   "span"};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Reader {
 public:
  std::vector<ConfigError> errors;

  void error(std::string path, std::string message) { errors.push_back({std::move(path), std::move(message)}); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  void allow(const json& obj, const std::string& path, const std::set<std::string>& keys) {
    for (const auto& [key, value] : obj.items()) {
      if (!keys.contains(key)) error(join(path, key), "unknown key");
    }
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    error(path, "expected a number");
    return std::nullopt;
  }

  std::optional<ExtendedReal> extended(const json& j, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "inf") return ExtendedReal::infinity();
    if (j.is_number()) {
      const double v = j.get<double>();
      if (std::isfinite(v)) return ExtendedReal(v);
    }
    error(path, "expected a finite number or \"inf\"");
    return std::nullopt;
  }

  std::optional<long long> integer(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<long long>();
    error(path, "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    error(path, "expected a string");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
      error(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto v = number(j[i], index(path, i))) {
        out.push_back(*v);
      } else {
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<Eigen::VectorXd> vector(const json& j, const std::string& path) {
    auto v = numbers(j, path);
    if (!v) return std::nullopt;
    if (v->empty()) {
      error(path, "expected a nonempty vector");
      return std::nullopt;
    }
    return Eigen::Map<const Eigen::VectorXd>(v->data(), static_cast<Eigen::Index>(v->size()));
  }

  // Runs a constructor that may throw and files its message under `path`.
  template <typename F>
  auto guarded(const std::string& path, F&& f) -> std::optional<decltype(f())> {
    try {
      return f();
    } catch (const Error& e) {
      error(path, e.what());
      return std::nullopt;
    }
  }
};

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::optional<LinearFunctional> parse_functional(Reader& r, const json& j, const std::string& path) {
  if (!r.object(j, path)) return std::nullopt;
  const json* type_j = find(j, "type");
  if (type_j == nullptr) {
    r.error(join(path, "type"), "type missing");
    return std::nullopt;
  }
  const auto type = r.string(*type_j, join(path, "type"));
  if (!type) return std::nullopt;
  if (*type == "point") {
    r.allow(j, path, {"type", "point"});
    const json* p = find(j, "point");
    if (p == nullptr) {
      r.error(join(path, "point"), "point missing");
      return std::nullopt;
    }
    auto x = r.vector(*p, join(path, "point"));
    if (!x) return std::nullopt;
    return LinearFunctional::point_eval(*x);
  }
  if (*type == "expectation") {
    r.allow(j, path, {"type", "atoms", "weights"});
    const json* atoms_j = find(j, "atoms");
    const json* weights_j = find(j, "weights");
    if (atoms_j == nullptr) r.error(join(path, "atoms"), "atoms missing");
    if (weights_j == nullptr) r.error(join(path, "weights"), "weights missing");
    if (atoms_j == nullptr || weights_j == nullptr) return std::nullopt;
    if (!atoms_j->is_array() || atoms_j->empty()) {
      r.error(join(path, "atoms"), "expected a nonempty array of points");
      return std::nullopt;
    }
    std::vector<Point> atoms;
    bool ok = true;
    for (std::size_t i = 0; i < atoms_j->size(); ++i) {
      if (auto a = r.vector((*atoms_j)[i], index(join(path, "atoms"), i))) {
        atoms.push_back(*a);
      } else {
        ok = false;
      }
    }
    auto weights = r.numbers(*weights_j, join(path, "weights"));
    if (!ok || !weights) return std::nullopt;
    return r.guarded(path, [&] { return LinearFunctional::expectation(DiscreteMeasure(atoms, *weights)); });
  }
  if (*type == "convolution") {
    r.allow(j, path, {"type", "signal_grid", "signal_values", "eval_point"});
    const json* grid_j = find(j, "signal_grid");
    const json* values_j = find(j, "signal_values");
    const json* eval_j = find(j, "eval_point");
    if (grid_j == nullptr) r.error(join(path, "signal_grid"), "signal_grid missing");
    if (values_j == nullptr) r.error(join(path, "signal_values"), "signal_values missing");
    if (eval_j == nullptr) r.error(join(path, "eval_point"), "eval_point missing");
    if (grid_j == nullptr || values_j == nullptr || eval_j == nullptr) return std::nullopt;
    const std::string gpath = join(path, "signal_grid");
    if (!r.object(*grid_j, gpath)) return std::nullopt;
    r.allow(*grid_j, gpath, {"origin", "step", "shape"});
    UniformGrid grid;
    bool ok = true;
    if (const json* o = find(*grid_j, "origin")) {
      if (auto v = r.vector(*o, join(gpath, "origin"))) grid.origin = *v; else ok = false;
    } else {
      r.error(join(gpath, "origin"), "origin missing");
      ok = false;
    }
    if (const json* s = find(*grid_j, "step")) {
      if (auto v = r.number(*s, join(gpath, "step")); v && *v > 0) {
        grid.step = *v;
      } else {
        if (v) r.error(join(gpath, "step"), "must be positive");
        ok = false;
      }
    } else {
      r.error(join(gpath, "step"), "step missing");
      ok = false;
    }
    if (const json* s = find(*grid_j, "shape")) {
      if (!s->is_array()) {
        r.error(join(gpath, "shape"), "expected an array of positive integers");
        ok = false;
      } else {
        for (std::size_t i = 0; i < s->size(); ++i) {
          auto v = r.integer((*s)[i], index(join(gpath, "shape"), i));
          if (v && *v > 0) {
            grid.shape.push_back(static_cast<int>(*v));
          } else {
            if (v) r.error(index(join(gpath, "shape"), i), "must be positive");
            ok = false;
          }
        }
      }
    } else {
      r.error(join(gpath, "shape"), "shape missing");
      ok = false;
    }
    auto values = r.numbers(*values_j, join(path, "signal_values"));
    auto eval = r.vector(*eval_j, join(path, "eval_point"));
    if (!ok || !values || !eval) return std::nullopt;
    return r.guarded(path, [&] { return LinearFunctional::convolution(grid, *values, *eval); });
  }
  r.error(join(path, "type"), "unknown functional type '" + *type + "' (point, convolution, expectation)");
  return std::nullopt;
}

std::optional<Kernel> parse_kernel(Reader& r, const json& j, std::optional<int> inferred_dim) {
  const std::string path = "kernel";
  if (!r.object(j, path)) return std::nullopt;
  const json* family_j = find(j, "family");
  if (family_j == nullptr) {
    r.error("kernel.family", "family missing");
    return std::nullopt;
  }
  const auto family = r.string(*family_j, "kernel.family");
  if (!family) return std::nullopt;
  int dim = inferred_dim.value_or(1);
  bool ok = true;
  if (const json* d = find(j, "input_dim")) {
    auto v = r.integer(*d, "kernel.input_dim");
    if (v && *v >= 1) {
      dim = static_cast<int>(*v);
      if (inferred_dim && *inferred_dim != dim) {
        r.error("kernel.input_dim", "does not match the functionals (R^" + std::to_string(*inferred_dim) + ")");
        ok = false;
      }
    } else {
      if (v) r.error("kernel.input_dim", "must be a positive integer");
      ok = false;
    }
  }
  if (*family == "gaussian") {
    r.allow(j, path, {"family", "input_dim", "width"});
    double width = 1.0;
    if (const json* w = find(j, "width")) {
      auto v = r.number(*w, "kernel.width");
      if (v && *v > 0 && std::isfinite(*v)) {
        width = *v;
      } else {
        if (v) r.error("kernel.width", "gaussian width must be positive");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return Kernel::gaussian(dim, width);
  }
  if (*family == "polynomial") {
    r.allow(j, path, {"family", "input_dim", "degree", "offset"});
    int degree = 2;
    double offset = 1.0;
    if (const json* d = find(j, "degree")) {
      auto v = r.integer(*d, "kernel.degree");
      if (v && *v >= 1) {
        degree = static_cast<int>(*v);
      } else {
        if (v) r.error("kernel.degree", "degree must be a positive integer");
        ok = false;
      }
    }
    if (const json* o = find(j, "offset")) {
      auto v = r.number(*o, "kernel.offset");
      if (v && *v >= 0) {
        offset = *v;
      } else {
        if (v) r.error("kernel.offset", "offset must be nonnegative");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return r.guarded(path, [&] { return Kernel::polynomial(dim, degree, offset); });
  }
  if (*family == "linear") {
    r.allow(j, path, {"family", "input_dim"});
    if (!ok) return std::nullopt;
    return Kernel::linear(dim);
  }
  r.error("kernel.family", "unknown kernel family '" + *family + "' (gaussian, polynomial, linear)");
  return std::nullopt;
}

std::optional<Regularizer> parse_regularizer(Reader& r, const json& j, int dim) {
  const std::string path = "regularizer";
  if (!r.object(j, path)) return std::nullopt;
  const json* kind_j = find(j, "kind");
  if (kind_j == nullptr) {
    r.error("regularizer.kind", "kind missing");
    return std::nullopt;
  }
  const auto kind = r.string(*kind_j, "regularizer.kind");
  if (!kind) return std::nullopt;
  if (*kind == "radial") {
    r.allow(j, path, {"kind", "profile", "p", "radius", "knots", "values"});
    const json* profile_j = find(j, "profile");
    if (profile_j == nullptr) {
      r.error("regularizer.profile", "profile missing");
      return std::nullopt;
    }
    const auto profile = r.string(*profile_j, "regularizer.profile");
    if (!profile) return std::nullopt;
    auto forbid = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys) {
        if (find(j, k) != nullptr) r.error(join(path, k), "not used by the " + *profile + " profile");
      }
    };
    if (*profile == "square") {
      forbid({"p", "radius", "knots", "values"});
      return Regularizer::radial(RadialProfile::square());
    }
    if (*profile == "power") {
      forbid({"radius", "knots", "values"});
      const json* p = find(j, "p");
      if (p == nullptr) {
        r.error("regularizer.p", "p missing");
        return std::nullopt;
      }
      auto v = r.number(*p, "regularizer.p");
      if (!v) return std::nullopt;
      return r.guarded("regularizer.p", [&] { return Regularizer::radial(RadialProfile::power(*v)); });
    }
    if (*profile == "indicator_ball") {
      forbid({"p", "knots", "values"});
      const json* rad = find(j, "radius");
      if (rad == nullptr) {
        r.error("regularizer.radius", "radius missing");
        return std::nullopt;
      }
      auto v = r.number(*rad, "regularizer.radius");
      if (!v) return std::nullopt;
      return r.guarded("regularizer.radius", [&] { return Regularizer::radial(RadialProfile::indicator_ball(*v)); });
    }
    if (*profile == "table") {
      forbid({"p", "radius"});
      const json* knots_j = find(j, "knots");
      const json* values_j = find(j, "values");
      if (knots_j == nullptr) r.error("regularizer.knots", "knots missing");
      if (values_j == nullptr) r.error("regularizer.values", "values missing");
      if (knots_j == nullptr || values_j == nullptr) return std::nullopt;
      auto knots = r.numbers(*knots_j, "regularizer.knots");
      std::vector<ExtendedReal> values;
      bool ok = values_j->is_array();
      if (!ok) r.error("regularizer.values", "expected an array");
      for (std::size_t i = 0; ok && i < values_j->size(); ++i) {
        if (auto v = r.extended((*values_j)[i], index("regularizer.values", i))) values.push_back(*v); else ok = false;
      }
      if (!knots || !ok) return std::nullopt;
      return r.guarded(path, [&] { return Regularizer::radial(RadialProfile::table(*knots, values)); });
    }
    r.error("regularizer.profile", "unknown profile '" + *profile + "' (square, power, table, indicator_ball)");
    return std::nullopt;
  }
  if (*kind == "anisotropic_quadratic") {
    r.allow(j, path, {"kind", "weights"});
    const json* w = find(j, "weights");
    if (w == nullptr) {
      r.error("regularizer.weights", "weights missing");
      return std::nullopt;
    }
    auto v = r.vector(*w, "regularizer.weights");
    if (!v) return std::nullopt;
    return r.guarded("regularizer.weights", [&] { return Regularizer::anisotropic_quadratic(*v); });
  }
  if (*kind == "shifted_norm") {
    r.allow(j, path, {"kind", "center"});
    const json* c = find(j, "center");
    if (c == nullptr) {
      r.error("regularizer.center", "center missing");
      return std::nullopt;
    }
    auto v = r.vector(*c, "regularizer.center");
    if (!v) return std::nullopt;
    return r.guarded("regularizer.center", [&] { return Regularizer::shifted_norm(*v); });
  }
  if (*kind == "catalogue") {
    r.allow(j, path, {"kind", "name"});
    const json* n = find(j, "name");
    if (n == nullptr) {
      r.error("regularizer.name", "name missing");
      return std::nullopt;
    }
    auto name = r.string(*n, "regularizer.name");
    if (!name) return std::nullopt;
    std::string known;
    for (const auto& entry : regularizer_catalogue(std::max(dim, 2))) {
      if (entry.name == *name) return entry.regularizer;
      known += (known.empty() ? "" : ", ") + entry.name;
    }
    r.error("regularizer.name", "unknown catalogue entry '" + *name + "' (" + known + ")");
    return std::nullopt;
  }
  r.error("regularizer.kind", "unknown kind '" + *kind + "' (radial, anisotropic_quadratic, shifted_norm, catalogue)");
  return std::nullopt;
}

std::optional<LossDescriptor> parse_loss(Reader& r, const json& j) {
  const std::string path = "loss";
  if (!r.object(j, path)) return std::nullopt;
  const json* type_j = find(j, "type");
  if (type_j == nullptr) {
    r.error("loss.type", "type missing");
    return std::nullopt;
  }
  const auto type = r.string(*type_j, "loss.type");
  if (!type) return std::nullopt;
  if (*type == "squared") {
    r.allow(j, path, {"type", "targets"});
    const json* t = find(j, "targets");
    if (t == nullptr) {
      r.error("loss.targets", "targets missing");
      return std::nullopt;
    }
    auto v = r.numbers(*t, "loss.targets");
    if (!v) return std::nullopt;
    return LossDescriptor::squared(*v);
  }
  if (*type == "hinge") {
    r.allow(j, path, {"type", "labels"});
    const json* l = find(j, "labels");
    if (l == nullptr) {
      r.error("loss.labels", "labels missing");
      return std::nullopt;
    }
    auto v = r.numbers(*l, "loss.labels");
    if (!v) return std::nullopt;
    return r.guarded("loss.labels", [&] { return LossDescriptor::hinge(*v); });
  }
  if (*type == "kpca") {
    r.allow(j, path, {"type"});
    return LossDescriptor::kpca();
  }
  if (*type == "scalar") {
    r.allow(j, path, {"type", "f"});
    const json* f = find(j, "f");
    if (f == nullptr) {
      r.error("loss.f", "f missing");
      return std::nullopt;
    }
    auto name = r.string(*f, "loss.f");
    if (!name) return std::nullopt;
    if (auto loss = scalar_loss_by_name(*name)) return LossDescriptor::scalar(*loss);
    r.error("loss.f", "unknown scalar loss '" + *name + "' (squared, absolute, hinge_pair)");
    return std::nullopt;
  }
  r.error("loss.type", "unknown loss type '" + *type + "' (squared, hinge, kpca, scalar)");
  return std::nullopt;
}

void parse_probe(Reader& r, const json& j, ProbeSpec& probe) {
  const std::string path = "probe";
  if (!r.object(j, path)) return;
  r.allow(j, path, {"name", "dim", "trials", "samples", "level", "steps", "x", "y", "gamma_schedule", "vectors"});
  if (const json* n = find(j, "name")) {
    if (auto v = r.string(*n, "probe.name")) {
      if (kProbeNames.contains(*v)) {
        probe.name = *v;
      } else {
        std::string known;
        for (const auto& k : kProbeNames) known += (known.empty() ? "" : ", ") + k;
        r.error("probe.name", "unknown probe '" + *v + "' (" + known + ")");
      }
    }
  }
  auto positive_int = [&](const char* key, auto& target, long long min_value) {
    if (const json* v = find(j, key)) {
      auto x = r.integer(*v, join(path, key));
      if (x && *x >= min_value) {
        target = static_cast<std::remove_reference_t<decltype(target)>>(*x);
      } else if (x) {
        r.error(join(path, key), "must be at least " + std::to_string(min_value));
      }
    }
  };
  positive_int("dim", probe.dim, 2);
  positive_int("trials", probe.trials, 1);
  positive_int("samples", probe.samples, 1);
  positive_int("steps", probe.steps, 1);
  if (const json* v = find(j, "level")) {
    if (auto x = r.extended(*v, "probe.level")) probe.level = *x;
  }
  if (const json* v = find(j, "x")) probe.x = r.vector(*v, "probe.x");
  if (const json* v = find(j, "y")) probe.y = r.vector(*v, "probe.y");
  if (const json* v = find(j, "gamma_schedule")) {
    if (auto s = r.numbers(*v, "probe.gamma_schedule")) {
      for (std::size_t i = 0; i < s->size(); ++i) {
        if (!((*s)[i] >= 0)) r.error(index("probe.gamma_schedule", i), "must be nonnegative");
      }
      probe.gamma_schedule = *s;
    }
  }
  if (const json* v = find(j, "vectors")) {
    if (!v->is_array()) {
      r.error("probe.vectors", "expected an array of vectors");
    } else {
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (auto x = r.vector((*v)[i], index("probe.vectors", i))) probe.vectors.push_back(*x);
      }
    }
  }
  for (const auto* key : {"x", "y"}) {
    const auto& vec = std::string(key) == "x" ? probe.x : probe.y;
    if (vec && vec->size() != probe.dim) r.error(join(path, key), "must have probe.dim entries");
  }
  for (std::size_t i = 0; i < probe.vectors.size(); ++i) {
    if (probe.vectors[i].size() != probe.dim) r.error(index("probe.vectors", i), "must have probe.dim entries");
  }
}

}  // namespace

ConfigParse validate_config(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return validate_config(json::object());
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    return {std::nullopt, {{"", std::string("malformed JSON: ") + e.what()}}};
  }
  return validate_config(document);
}

ConfigParse validate_config(const json& document) {
  Reader r;
  if (!document.is_object()) {
    r.error("", "configuration must be a JSON object");
    return {std::nullopt, r.errors};
  }
  r.allow(document, "", {"mode", "seed", "kernel", "functionals", "regularizer", "loss", "gamma", "probe", "output",
                         "tolerances"});
  ExperimentConfig config;

  bool have_mode = false;
  if (const json* m = find(document, "mode")) {
    if (auto v = r.string(*m, "mode")) {
      if (*v == "solve") config.mode = Mode::solve;
      else if (*v == "verify") config.mode = Mode::verify;
      else if (*v == "gram") config.mode = Mode::gram;
      else if (*v == "probe") config.mode = Mode::probe;
      else r.error("mode", "unknown mode '" + *v + "' (solve, verify, gram, probe)");
      have_mode = true;
    }
  } else {
    r.error("mode", "mode missing");
  }

  if (const json* s = find(document, "seed")) {
    if (s->is_number_unsigned()) {
      config.seed = s->get<std::uint64_t>();
    } else if (s->is_number_integer() && s->get<long long>() >= 0) {
      config.seed = static_cast<std::uint64_t>(s->get<long long>());
    } else {
      r.error("seed", "expected a nonnegative integer");
    }
  }

  if (const json* p = find(document, "probe")) parse_probe(r, *p, config.probe);

  std::optional<int> functional_dim;
  if (const json* f = find(document, "functionals")) {
    if (!f->is_array()) {
      r.error("functionals", "expected an array");
    } else {
      for (std::size_t i = 0; i < f->size(); ++i) {
        const std::string path = index("functionals", i);
        if (auto lf = parse_functional(r, (*f)[i], path)) {
          if (functional_dim && lf->input_dim() != *functional_dim) {
            r.error(path, "input dimension differs from functionals[0]");
          }
          if (!functional_dim) functional_dim = lf->input_dim();
          config.functionals.push_back(*lf);
        }
      }
    }
  }
  if (const json* k = find(document, "kernel")) config.kernel = parse_kernel(r, *k, functional_dim);
  if (const json* reg = find(document, "regularizer")) {
    if (auto v = parse_regularizer(r, *reg, config.probe.dim)) config.regularizer = *v;
  }
  if (const json* l = find(document, "loss")) config.loss = parse_loss(r, *l);
  if (const json* g = find(document, "gamma")) {
    if (auto v = r.extended(*g, "gamma")) {
      if (*v < ExtendedReal(0.0)) r.error("gamma", "must be nonnegative");
      else config.gamma = *v;
    }
  }
  if (const json* o = find(document, "output")) {
    if (r.object(*o, "output")) {
      r.allow(*o, "output", {"json", "csv"});
      if (const json* v = find(*o, "json")) {
        if (auto s = r.string(*v, "output.json")) config.output_json = *s;
      }
      if (const json* v = find(*o, "csv")) {
        if (auto s = r.string(*v, "output.csv")) config.output_csv = *s;
      }
    }
  }
  if (const json* t = find(document, "tolerances")) {
    if (r.object(*t, "tolerances")) {
      r.allow(*t, "tolerances", {"check", "radius"});
      for (const auto* key : {"check", "radius"}) {
        if (const json* v = find(*t, key)) {
          auto x = r.number(*v, join("tolerances", key));
          if (x && *x > 0) {
            (std::string(key) == "check" ? config.tolerances.check : config.tolerances.radius) = *x;
          } else if (x) {
            r.error(join("tolerances", key), "must be positive");
          }
        }
      }
    }
  }

  // Mode-specific requirements.
  if (have_mode) {
    const bool needs_problem = config.mode == Mode::solve || config.mode == Mode::gram;
    if (needs_problem) {
      if (find(document, "kernel") == nullptr) r.error("kernel", "kernel missing");
      if (find(document, "functionals") == nullptr || (find(document, "functionals")->is_array() &&
                                                       find(document, "functionals")->empty())) {
        r.error("functionals", "at least one functional is required");
      }
    }
    if (config.mode == Mode::solve) {
      if (find(document, "loss") == nullptr) r.error("loss", "loss missing");
      if (!config.regularizer.is_radial()) r.error("regularizer", "solve mode needs a radial regularizer");
      if (config.loss) {
        if (const auto n = config.loss->expected_size(); n && *n != config.functionals.size()) {
          r.error("loss", "loss data has " + std::to_string(*n) + " entries for " +
                              std::to_string(config.functionals.size()) + " functionals");
        }
      }
    }
    if (config.mode == Mode::verify || config.mode == Mode::probe) {
      if (const auto d = config.regularizer.dimension(); d && *d != config.probe.dim) {
        r.error("probe.dim", "regularizer lives on R^" + std::to_string(*d));
      }
    }
    if (config.mode == Mode::probe) {
      if (config.probe.name.empty() && (find(document, "probe") == nullptr || find(*find(document, "probe"), "name") == nullptr)) {
        r.error("probe.name", "probe name missing");
      }
      if (config.probe.name == "span") {
        if (config.probe.vectors.empty()) r.error("probe.vectors", "span probe needs functional vectors");
        if (!config.loss) r.error("loss", "span probe needs a loss");
        if (config.probe.vectors.size() >= static_cast<std::size_t>(config.probe.dim)) {
          r.error("probe.vectors", "span probe needs fewer vectors than probe.dim");
        }
        if (config.loss) {
          if (const auto n = config.loss->expected_size(); n && *n != config.probe.vectors.size()) {
            r.error("loss", "loss data sized for a different number of vectors");
          }
        }
      }
    }
  }

  if (!r.errors.empty()) return {std::nullopt, r.errors};
  if (!config.kernel && functional_dim) {
    r.error("kernel", "kernel missing");
    return {std::nullopt, r.errors};
  }
  return {config, {}};
}

namespace {

json functional_to_json(const LinearFunctional& f) {
  return std::visit(overloaded{
                        [](const PointEvaluation& p) { return json{{"type", "point"}, {"point", to_json(p.point)}}; },
                        [](const Convolution& c) {
                          return json{{"type", "convolution"},
                                      {"signal_grid",
                                       {{"origin", to_json(c.grid.origin)}, {"step", c.grid.step}, {"shape", c.grid.shape}}},
                                      {"signal_values", c.signal},
                                      {"eval_point", to_json(c.eval_point)}};
                        },
                        [](const Expectation& e) {
                          json atoms = json::array();
                          for (const auto& a : e.measure.atoms()) atoms.push_back(to_json(a));
                          json weights = json::array();
                          for (double w : e.measure.weights()) weights.push_back(w);
                          return json{{"type", "expectation"}, {"atoms", atoms}, {"weights", weights}};
                        },
                    },
                    f.variant());
}

json regularizer_to_json(const Regularizer& r) {
  return std::visit(
      overloaded{
          [](const RadialProfile& p) {
            return std::visit(overloaded{
                                  [](const RadialProfile::Square&) { return json{{"kind", "radial"}, {"profile", "square"}}; },
                                  [](const RadialProfile::Power& q) {
                                    return json{{"kind", "radial"}, {"profile", "power"}, {"p", q.p}};
                                  },
                                  [](const RadialProfile::Table& t) {
                                    json values = json::array();
                                    for (auto v : t.values) values.push_back(to_json(v));
                                    return json{{"kind", "radial"}, {"profile", "table"}, {"knots", t.knots}, {"values", values}};
                                  },
                                  [](const RadialProfile::IndicatorBall& b) {
                                    return json{{"kind", "radial"}, {"profile", "indicator_ball"}, {"radius", b.radius}};
                                  },
                              },
                              p.variant());
          },
          [](const AnisotropicQuadratic& q) { return json{{"kind", "anisotropic_quadratic"}, {"weights", to_json(q.weights)}}; },
          [](const ShiftedNorm& s) { return json{{"kind", "shifted_norm"}, {"center", to_json(s.center)}}; },
          [](const CustomRegularizer& c) { return json{{"kind", "custom"}, {"name", c.name}}; },
      },
      r.variant());
}

json loss_to_json(const LossDescriptor& loss) {
  return std::visit(overloaded{
                        [](const SquaredLoss& s) { return json{{"type", "squared"}, {"targets", s.targets}}; },
                        [](const HingeLoss& h) { return json{{"type", "hinge"}, {"labels", h.labels}}; },
                        [](const KpcaConstraint&) { return json{{"type", "kpca"}}; },
                        [](const ScalarFamily& s) { return json{{"type", "scalar"}, {"f", s.f.name}}; },
                    },
                    loss.variant());
}

json kernel_to_json(const Kernel& k) {
  json out{{"family", to_string(k.family())}, {"input_dim", k.input_dim()}};
  if (k.family() == KernelFamily::gaussian) out["width"] = k.width();
  if (k.family() == KernelFamily::polynomial) {
    out["degree"] = k.degree();
    out["offset"] = k.offset();
  }
  return out;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json out;
  out["mode"] = to_string(c.mode);
  out["seed"] = c.seed;
  if (c.kernel) out["kernel"] = kernel_to_json(*c.kernel);
  if (!c.functionals.empty()) {
    out["functionals"] = json::array();
    for (const auto& f : c.functionals) out["functionals"].push_back(functional_to_json(f));
  }
  out["regularizer"] = regularizer_to_json(c.regularizer);
  if (c.loss) out["loss"] = loss_to_json(*c.loss);
  out["gamma"] = to_json(c.gamma);
  json probe{{"dim", c.probe.dim},
             {"trials", c.probe.trials},
             {"samples", c.probe.samples},
             {"level", to_json(c.probe.level)},
             {"steps", c.probe.steps}};
  if (!c.probe.name.empty()) probe["name"] = c.probe.name;
  if (c.probe.x) probe["x"] = to_json(*c.probe.x);
  if (c.probe.y) probe["y"] = to_json(*c.probe.y);
  if (!c.probe.gamma_schedule.empty()) probe["gamma_schedule"] = c.probe.gamma_schedule;
  if (!c.probe.vectors.empty()) {
    probe["vectors"] = json::array();
    for (const auto& v : c.probe.vectors) probe["vectors"].push_back(to_json(v));
  }
  out["probe"] = probe;
  json output = json::object();
  if (!c.output_json.empty()) output["json"] = c.output_json;
  if (!c.output_csv.empty()) output["csv"] = c.output_csv;
  out["output"] = output;
  out["tolerances"] = {{"check", c.tolerances.check}, {"radius", c.tolerances.radius}};
  return out;
}

}  // namespace kreg
