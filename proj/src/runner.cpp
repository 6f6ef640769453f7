#include "kreg/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kreg/errors.hpp"
#include "kreg/linalg.hpp"
#include "kreg/reduction.hpp"
#include "kreg/solvers.hpp"
#include "kreg/theorem_lab.hpp"

namespace kreg {

using nlohmann::json;

std::string to_string(Status status) {
  switch (status) {
    case Status::ok: return "ok";
    case Status::check_failure: return "check_failure";
    case Status::config_error: return "config_error";
    case Status::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
  return out;
}

class Run {
 public:
  explicit Run(const ExperimentConfig& config) : config_(config) {}

  void check(const std::string& name, bool passed, const std::string& detail = {}) {
    json c{{"name", name}, {"passed", passed}};
    if (!detail.empty()) c["detail"] = detail;
    checks_.push_back(std::move(c));
  }

  void row(const std::string& probe, std::size_t index, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
           double scale, ExtendedReal lhs, ExtendedReal rhs, bool violated) {
    csv_ << probe << ',' << index << ',' << format_vector(x) << ',' << format_vector(y) << ',' << format_double(scale)
         << ',' << format_double(lhs.to_double()) << ',' << format_double(rhs.to_double()) << ',' << (violated ? 1 : 0)
         << '\n';
  }

  json check_report(const CheckReport& r) {
    json out{{"check", r.check}, {"holds", r.holds}, {"seed", r.seed}, {"trials", r.trials}, {"violations", r.violations}};
    if (r.witness) {
      out["witness"] = {{"trial", r.witness->trial},   {"x", to_json(r.witness->x)},     {"y", to_json(r.witness->y)},
                        {"scale", r.witness->scale},   {"lhs", to_json(r.witness->lhs)}, {"rhs", to_json(r.witness->rhs)}};
    }
    for (const auto& t : r.rows) row(r.check, t.trial, t.x, t.y, t.scale, t.lhs, t.rhs, t.violated);
    return out;
  }

  Eigen::VectorXd unit(int i) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(config_.probe.dim);
    e[i] = 1.0;
    return e;
  }
  Eigen::VectorXd path_x() const { return config_.probe.x.value_or(unit(0)); }
  Eigen::VectorXd path_y() const { return config_.probe.y.value_or(Eigen::VectorXd(0.5 * unit(1))); }

  json rotation_path(bool record) {
    const RotationPath path = build_rotation_path(path_x(), path_y(), config_.probe.steps);
    const RotationPathAudit audit = audit_rotation_path(path);
    const double ratio = path.y.norm() / path.x.norm();
    if (record) check("rotation_path_invariants", audit.holds());
    for (std::size_t k = 0; k < path.steps.size(); ++k) {
      row("rotation_path", k, path.points[k], path.points[k + 1], path.steps[k], path.points[k].norm(),
          path.points[k + 1].norm(), false);
    }
    return {{"n", path.n},
            {"theta", path.theta},
            {"lambda", path.lambda},
            {"lambda_squared", path.lambda * path.lambda},
            {"lambda_squared_closed_form", lambda_squared(ratio, path.theta, path.n)},
            {"audit",
             {{"orthogonality", audit.orthogonality},
              {"unit_norm", audit.unit_norm},
              {"plane_residual", audit.plane_residual},
              {"min_forward", audit.min_forward},
              {"norm_recursion", audit.norm_recursion},
              {"terminal_alignment", audit.terminal_alignment},
              {"terminal_lambda", audit.terminal_lambda}}},
            {"holds", audit.holds()}};
  }

  json chain() {
    const RotationPath path = build_rotation_path(path_x(), path_y(), config_.probe.steps);
    const ChainReport r = monotone_chain_check(config_.regularizer, path, config_.tolerances.check, config_.probe.trials,
                                               config_.seed);
    check("monotone_chain", r.holds);
    json values = json::array();
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      values.push_back(to_json(r.values[k]));
      if (k + 1 < r.values.size()) {
        const bool failed = std::find(r.failures.begin(), r.failures.end(), static_cast<int>(k)) != r.failures.end();
        row("chain", k, path.points[k], path.points[k + 1], path.steps[k], r.values[k], r.values[k + 1], failed);
      }
    }
    return {{"holds", r.holds},
            {"premise_holds", r.premise_holds},
            {"endpoints_ordered", r.endpoints_ordered},
            {"failures", r.failures},
            {"values", values}};
  }

  json sublevel() {
    const SublevelReport r = sublevel_geometry_probe(config_.regularizer, config_.probe.dim, config_.probe.level,
                                                     config_.probe.samples, config_.seed, config_.tolerances.radius);
    check("sublevel_ball_like", r.ball_like);
    check("sublevel_star_shaped", r.star_shaped);
    json witnesses = json::array();
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
      const auto& w = r.witnesses[i];
      witnesses.push_back({{"point", to_json(w.point)}, {"t", w.t}, {"value", to_json(w.value)}});
      row("sublevel", i, w.point, w.t * w.point, w.t, w.value, r.level, true);
    }
    return {{"regularizer", r.regularizer}, {"level", to_json(r.level)}, {"samples", r.samples},
            {"r_in", r.r_in},               {"r_out", to_json(ExtendedReal(r.r_out))},
            {"ball_like", r.ball_like},     {"star_shaped", r.star_shaped},
            {"witnesses", witnesses}};
  }

  json necessity() {
    const Eigen::VectorXd x = config_.probe.x.value_or(unit(0));
    const Eigen::VectorXd y = config_.probe.y.value_or(unit(1));
    const auto schedule = config_.probe.gamma_schedule.empty() ? default_gamma_schedule() : config_.probe.gamma_schedule;
    const NecessityReport r = necessity_probe(config_.regularizer, x, y, schedule, squared_distance_to_one(),
                                              config_.tolerances.check);
    check("necessity_bound", r.bound_holds);
    check("necessity_liminf", r.liminf_holds);
    if (r.lambda_to_one) check("necessity_lambda_to_one", *r.lambda_to_one);
    json steps = json::array();
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      const auto& s = r.steps[k];
      steps.push_back({{"gamma", s.gamma}, {"lambda", s.lambda}, {"a", s.a}, {"omega_on_ray", to_json(s.omega_on_ray)}});
      row("necessity", k, Eigen::VectorXd(s.lambda * x), y, s.gamma, ExtendedReal(s.a), s.omega_on_ray, false);
    }
    json out{{"steps", steps},
             {"omega_sum", to_json(r.omega_sum)},
             {"omega_origin", to_json(r.omega_origin)},
             {"trivial", r.trivial},
             {"bound_holds", r.bound_holds},
             {"liminf_estimate", to_json(r.liminf_estimate)},
             {"liminf_holds", r.liminf_holds},
             {"note", r.note}};
    if (r.lambda_to_one) out["lambda_to_one"] = *r.lambda_to_one;
    return out;
  }

  json contraction() {
    const Eigen::VectorXd x = path_x();
    const Eigen::VectorXd y = path_y();
    const double ratio = y.norm() / x.norm();
    const double theta = angle_between(x, y);
    const long long n = min_n_for_contraction(ratio, theta);
    const double at_n = lambda_squared(ratio, theta, n);
    const double before = n > 1 ? lambda_squared(ratio, theta, n - 1) : HUGE_VAL;
    const bool minimal = at_n <= 1.0 && (n == 1 || before > 1.0);
    check("contraction_minimal", minimal);
    return {{"ratio", ratio},
            {"theta", theta},
            {"n", n},
            {"lambda_squared_at_n", at_n},
            {"lambda_squared_before", to_json(ExtendedReal(before))}};
  }

  json equivalence() {
    json rows = json::array();
    for (const auto& r : characterization_equivalence(config_.probe.dim, config_.probe.trials, config_.seed)) {
      check("agree:" + r.name, r.agree());
      rows.push_back({{"name", r.name},
                      {"orthogonal_monotonicity", r.orthogonal.holds},
                      {"radial_nondecreasing", r.radial.holds()},
                      {"agree", r.agree()}});
    }
    return rows;
  }

  json span() {
    const SpanExperimentReport r = representer_span_experiment(config_.regularizer, config_.probe.vectors, *config_.loss,
                                                               config_.gamma, config_.seed, config_.tolerances.check);
    check("span_oracle_converged", r.converged);
    if (config_.regularizer.is_radial()) check("span_projection_not_worse", r.projection_not_worse);
    return {{"method", r.method},
            {"minimizer", to_json(r.minimizer)},
            {"projection", to_json(r.projection)},
            {"span_distance", r.span_distance},
            {"j_at_min", to_json(r.j_at_min)},
            {"j_at_projection", to_json(r.j_at_projection)},
            {"projection_not_worse", r.projection_not_worse},
            {"converged", r.converged}};
  }

  json solve() {
    const ReducedProblem problem = reduce(*config_.kernel, config_.functionals, *config_.loss,
                                          *config_.regularizer.profile(), config_.gamma);
    const SolveResult r = kreg::solve(problem);
    const ExtendedReal reduced = problem.objective(r.coefficients);
    const ExtendedReal direct = problem.functional_objective(problem.reconstruct(r.coefficients));
    const double scale = reduced.is_finite() ? std::max(1.0, std::abs(reduced.value())) : 1.0;
    check("reduction_identity", nearly_equal(reduced, direct, 1e-9 * scale));
    check("objective_finite", r.objective.is_finite());
    check("converged", r.converged);
    if (std::holds_alternative<KpcaConstraint>(config_.loss->variant())) {
      check("unit_variance", r.residual <= kKpcaVarianceTolerance);
    }
    for (Eigen::Index i = 0; i < r.coefficients.size(); ++i) {
      row("solve", static_cast<std::size_t>(i), problem.gram().row(i).transpose(), Eigen::VectorXd(), r.coefficients[i],
          ExtendedReal((problem.gram() * r.coefficients)[i]), ExtendedReal(0.0), false);
    }
    return {{"method", r.method},
            {"coefficients", to_json(r.coefficients)},
            {"objective", to_json(r.objective)},
            {"functional_values", to_json(Eigen::VectorXd(problem.gram() * r.coefficients))},
            {"rkhs_norm", std::sqrt(std::max(0.0, r.coefficients.dot(problem.gram() * r.coefficients)))},
            {"residual", r.residual},
            {"iterations", r.iterations},
            {"jitter", r.jitter},
            {"converged", r.converged},
            {"gram", to_json(problem.gram())}};
  }

  json gram() {
    const Eigen::MatrixXd g = gram_matrix(*config_.kernel, config_.functionals);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    check("symmetric", is_symmetric(g, 1e-12 * scale));
    const double lmin = min_eigenvalue(g);
    check("positive_semidefinite", lmin >= -psd_tolerance(g));
    return {{"size", g.rows()}, {"gram", to_json(g)}, {"min_eigenvalue", lmin}};
  }

  json verify() {
    const Regularizer& r = config_.regularizer;
    const int dim = config_.probe.dim;
    const CheckReport orthogonal =
        check_orthogonal_monotonicity(r, dim, config_.probe.trials, config_.seed, config_.tolerances.check);
    const RadialityVerdict radial = check_radial_nondecreasing(r, dim, config_.probe.trials, config_.seed,
                                                               config_.tolerances.check);
    check("orthogonal_monotonicity", orthogonal.holds);
    check("radial_nondecreasing", radial.holds());
    check("characterization_agreement", orthogonal.holds == radial.holds());
    json out;
    out["orthogonal_monotonicity"] = check_report(orthogonal);
    out["equal_norm_invariance"] = check_report(radial.equal_norm);
    out["ray_monotonicity"] = check_report(radial.ray);
    out["rotation_path"] = rotation_path(true);
    out["chain"] = chain();
    out["sublevel"] = sublevel();
    out["necessity"] = necessity();
    return out;
  }

  json probe() {
    const auto& name = config_.probe.name;
    const int dim = config_.probe.dim;
    const auto trials = config_.probe.trials;
    const double tol = config_.tolerances.check;
    if (name == "orthogonal") {
      const auto r = check_orthogonal_monotonicity(config_.regularizer, dim, trials, config_.seed, tol);
      check("orthogonal_monotonicity", r.holds);
      return check_report(r);
    }
    if (name == "ray") {
      const auto r = check_ray_monotonicity(config_.regularizer, dim, trials, config_.seed, tol);
      check("ray_monotonicity", r.holds);
      return check_report(r);
    }
    if (name == "equal_norm") {
      const auto r = check_equal_norm_invariance(config_.regularizer, dim, trials, config_.seed, tol);
      check("equal_norm_invariance", r.holds);
      return check_report(r);
    }
    if (name == "equivalence") return equivalence();
    if (name == "rotation_path") return rotation_path(true);
    if (name == "contraction") return contraction();
    if (name == "chain") return chain();
    if (name == "sublevel") return sublevel();
    if (name == "necessity") return necessity();
    if (name == "span") return span();
    throw InvalidArgument("unknown probe '" + name + "'");
  }

  RunReport finish(json results, Status failure_status, const std::string& error_kind, const std::string& message,
                   double seconds) {
    RunReport report;
    bool all = !checks_.empty() || error_kind.empty();
    for (const auto& c : checks_) all = all && c["passed"].get<bool>();
    if (!error_kind.empty()) all = false;
    report.all_passed = all;
    report.status = !error_kind.empty() ? failure_status : (all ? Status::ok : Status::check_failure);
    json& d = report.document;
    d["tool"] = "kreg";
    d["version"] = kVersion;
    d["mode"] = to_string(config_.mode);
    d["seed"] = config_.seed;
    d["config"] = to_json(config_);
    d["results"] = std::move(results);
    d["checks"] = checks_;
    d["all_passed"] = all;
    d["status"] = to_string(report.status);
    d["exit_code"] = report.exit_code();
    if (!error_kind.empty()) d["error"] = {{"kind", error_kind}, {"message", message}};
    d["timing"] = {{"seconds", seconds}};
    report.csv = "probe,index,x,y,scale,lhs,rhs,violated\n" + csv_.str();
    return report;
  }

  RunReport execute() {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
      json results;
      switch (config_.mode) {
        case Mode::solve: results = solve(); break;
        case Mode::gram: results = gram(); break;
        case Mode::verify: results = verify(); break;
        case Mode::probe: results = probe(); break;
      }
      return finish(std::move(results), Status::ok, "", "", elapsed());
    } catch (const NumericalError& e) {
      return finish(json::object(), Status::numerical_failure, "numerical", e.what(), elapsed());
    } catch (const Error& e) {
      return finish(json::object(), Status::config_error, "invalid_problem", e.what(), elapsed());
    }
  }

 private:
  const ExperimentConfig& config_;
  json checks_ = json::array();
  std::ostringstream csv_;
};

}  // namespace

RunReport run(const ExperimentConfig& config) { return Run(config).execute(); }

RunReport config_error_report(const std::vector<ConfigError>& errors) {
  RunReport report;
  report.status = Status::config_error;
  report.all_passed = false;
  json list = json::array();
  for (const auto& e : errors) list.push_back({{"path", e.path}, {"message", e.message}});
  report.document = {{"tool", "kreg"},         {"version", kVersion},
                     {"status", "config_error"}, {"exit_code", report.exit_code()},
                     {"all_passed", false},    {"error", {{"kind", "config"}, {"errors", list}}}};
  report.csv = "probe,index,x,y,scale,lhs,rhs,violated\n";
  return report;
}

json numerical_fields(const json& report) {
  json copy = report;
  copy.erase("timing");
  return copy;
}

}  // namespace kreg
