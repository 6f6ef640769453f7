#include "kreg/theorem_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kreg/errors.hpp"
#include "kreg/linalg.hpp"
#include "kreg/oracle.hpp"
#include "kreg/rng.hpp"
#include "kreg/scalar_search.hpp"

namespace kreg {

double angle_between(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double cosine = x.dot(y) / (x.norm() * y.norm());
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

RotationPath build_rotation_path(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int n) {
  if (x.size() < 2) throw DimensionError("rotation path needs dimension at least 2");
  if (y.size() != x.size()) throw DimensionError("x and y must have the same dimension");
  if (n < 1) throw InvalidArgument("rotation path needs at least one step");
  const double nx = x.norm();
  const double ny = y.norm();
  if (!(ny > 0) || !(ny < nx)) throw InvalidArgument("rotation path needs 0 < |y| < |x|");
  const Eigen::VectorXd e1 = x / nx;
  const Eigen::VectorXd perp = y - y.dot(e1) * e1;
  if (perp.norm() <= 1e-12 * ny) {
    throw InvalidArgument(
        "y lies on the line through x; no rotation is needed, use the ray monotonicity check (closure argument) "
        "instead");
  }
  const Eigen::VectorXd e2 = perp.normalized();

  RotationPath path{.x = x, .y = y, .n = n};
  path.theta = angle_between(x, y);
  const double step_angle = path.theta / n;
  if (step_angle >= std::numbers::pi / 2) throw InvalidArgument("θ/n must be below π/2; use more steps");
  const double t = std::tan(step_angle);

  path.points.reserve(static_cast<std::size_t>(n) + 1);
  path.points.push_back(y);
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd& xk = path.points.back();
    const double phi = std::atan2(xk.dot(e2), xk.dot(e1));
    Eigen::VectorXd u = std::sin(phi) * e1 - std::cos(phi) * e2;
    const double a = xk.norm() * t;
    Eigen::VectorXd next = xk + a * u;
    path.steps.push_back(a);
    path.units.push_back(std::move(u));
    path.points.push_back(std::move(next));
  }
  path.lambda = path.points.back().norm() / nx;
  return path;
}

bool RotationPathAudit::holds(double recursion_tol, double terminal_tol) const {
  return orthogonality <= 1e-12 && unit_norm <= 1e-12 && plane_residual <= 1e-12 && min_forward > 0 &&
         norm_recursion <= recursion_tol && terminal_alignment <= terminal_tol && terminal_lambda <= terminal_tol;
}

RotationPathAudit audit_rotation_path(const RotationPath& path) {
  RotationPathAudit audit;
  const double nx = path.x.norm();
  const Eigen::VectorXd e1 = path.x / nx;
  const Eigen::VectorXd e2 = (path.y - path.y.dot(e1) * e1).normalized();
  const double growth = 1.0 + std::pow(std::tan(path.theta / path.n), 2);
  audit.min_forward = std::numeric_limits<double>::infinity();
  for (int k = 0; k < path.n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Eigen::VectorXd& u = path.units[i];
    const Eigen::VectorXd& xk = path.points[i];
    audit.orthogonality = std::max(audit.orthogonality, std::abs(u.dot(xk)) / xk.norm());
    audit.unit_norm = std::max(audit.unit_norm, std::abs(u.norm() - 1.0));
    audit.plane_residual = std::max(audit.plane_residual, (u - u.dot(e1) * e1 - u.dot(e2) * e2).norm());
    audit.min_forward = std::min(audit.min_forward, u.dot(path.x) / nx);
    const double expected = xk.squaredNorm() * growth;
    audit.norm_recursion =
        std::max(audit.norm_recursion, std::abs(path.points[i + 1].squaredNorm() - expected) / expected);
  }
  const Eigen::VectorXd& last = path.points.back();
  audit.terminal_alignment = (last - path.lambda * path.x).norm() / last.norm();
  const double closed_form = lambda_squared(path.y.norm() / nx, path.theta, path.n);
  audit.terminal_lambda = std::abs(path.lambda * path.lambda - closed_form) / closed_form;
  return audit;
}

double contraction_factor_squared(double theta, long long n) {
  if (n < 1) throw InvalidArgument("step count must be positive");
  const double step = theta / static_cast<double>(n);
  if (step >= std::numbers::pi / 2) return std::numeric_limits<double>::infinity();
  const double t = std::tan(step);
  return std::exp(static_cast<double>(n) * std::log1p(t * t));
}

double lambda_squared(double ratio, double theta, long long n) {
  return ratio * ratio * contraction_factor_squared(theta, n);
}

long long min_n_for_contraction(double ratio, double theta) {
  if (!(ratio > 0) || !(ratio < 1)) throw InvalidArgument("contraction needs 0 < |y|/|x| < 1");
  if (!(theta >= 0) || !(theta < std::numbers::pi)) throw InvalidArgument("angle must lie in [0, π)");
  long long hi = 1;
  while (lambda_squared(ratio, theta, hi) > 1.0) {
    if (hi > (1LL << 60)) throw NumericalError("no contracting step count below 2^60");
    hi *= 2;
  }
  if (hi == 1) return 1;
  long long lo = hi / 2;  // λ(lo) > 1
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (lambda_squared(ratio, theta, mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

long long min_n_for_contraction(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (y.size() != x.size()) throw DimensionError("x and y must have the same dimension");
  return min_n_for_contraction(y.norm() / x.norm(), angle_between(x, y));
}

ChainReport monotone_chain_check(const Regularizer& r, const RotationPath& path, double tol,
                                 std::size_t premise_trials, std::uint64_t seed) {
  ChainReport report;
  const int dim = static_cast<int>(path.x.size());
  if (premise_trials > 0) report.premise_holds = check_orthogonal_monotonicity(r, dim, premise_trials, seed, tol).holds;
  report.values.reserve(path.points.size());
  for (const auto& p : path.points) report.values.push_back(r(p));
  for (std::size_t k = 0; k + 1 < report.values.size(); ++k) {
    if (below_by_more_than(report.values[k + 1], report.values[k], tol)) report.failures.push_back(static_cast<int>(k));
  }
  report.endpoints_ordered = !below_by_more_than(report.values.back(), report.values.front(), tol);
  report.holds = report.failures.empty() && report.endpoints_ordered;
  return report;
}

SublevelReport sublevel_geometry_probe(const Regularizer& r, int dim, ExtendedReal level, std::size_t samples,
                                       std::uint64_t seed, double tol_radius) {
  if (dim < 2) throw InvalidArgument("sublevel probe needs dimension at least 2");
  constexpr int kRadii = 65;
  constexpr int kStarSteps = 64;
  constexpr std::size_t kMaxWitnesses = 16;

  SublevelReport report{.regularizer = r.name(), .level = level, .samples = samples};
  report.r_out = std::numeric_limits<double>::infinity();
  auto inside = [&](const Eigen::VectorXd& p) { return r(p) <= level; };
  auto check_star = [&](const Eigen::VectorXd& p) {
    for (int k = 0; k < kStarSteps; ++k) {
      const double t = static_cast<double>(k) / kStarSteps;
      const ExtendedReal v = r(t * p);
      if (below_by_more_than(level, v, kCheckTolerance)) {
        report.star_shaped = false;
        if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back({p, t, v});
        return;
      }
    }
  };
  auto record = [&](const Eigen::VectorXd& p, bool in) {
    if (in) {
      report.r_in = std::max(report.r_in, p.norm());
      check_star(p);
    } else {
      report.r_out = std::min(report.r_out, p.norm());
    }
  };

  std::vector<double> radii(kRadii);
  for (int j = 0; j < kRadii; ++j) radii[static_cast<std::size_t>(j)] = std::pow(10.0, -2.0 + 4.0 * j / (kRadii - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = substream(seed, streams::sublevel, s);
    Eigen::VectorXd d = sample_normal(rng, dim);
    while (d.norm() == 0.0) d = sample_normal(rng, dim);
    d.normalize();
    std::vector<bool> status(kRadii);
    for (int j = 0; j < kRadii; ++j) {
      const Eigen::VectorXd p = radii[static_cast<std::size_t>(j)] * d;
      status[static_cast<std::size_t>(j)] = inside(p);
      record(p, status[static_cast<std::size_t>(j)]);
    }
    for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
      if (status[j] == status[j + 1]) continue;
      double lo = radii[j];
      double hi = radii[j + 1];
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid * d) == status[j] ? lo : hi) = mid;
      }
      record(lo * d, status[j]);
      record(hi * d, status[j + 1]);
    }
  }
  report.ball_like = report.r_in <= report.r_out * (1.0 + tol_radius);
  return report;
}

namespace {

// min wᵀAw − 2bᵀw over the sphere |w| = ρ, A symmetric, via the secular
// equation Σ b̂_i² / (λ_i − μ)² = ρ², μ ≤ λ_min.
class SphereQuadratic {
 public:
  SphereQuadratic(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) : eig_(a), b_(b) {
    bhat_ = eig_.eigenvectors().transpose() * b;
    const auto& ev = eig_.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    min_space_ = 0;
    while (min_space_ < ev.size() && ev[min_space_] <= ev[0] + 1e-12 * scale) ++min_space_;
  }

  Eigen::VectorXd argmin(double rho) const {
    const auto& ev = eig_.eigenvalues();
    const auto n = ev.size();
    if (rho == 0.0) return Eigen::VectorXd::Zero(n);
    const double lmin = ev[0];
    const double bnorm = b_.norm();
    double min_space_weight = 0.0;
    for (Eigen::Index i = 0; i < min_space_; ++i) min_space_weight += bhat_[i] * bhat_[i];
    Eigen::VectorXd coords = Eigen::VectorXd::Zero(n);
    if (min_space_weight <= 1e-28 * std::max(1.0, bnorm * bnorm)) {
      // Hard case candidate: μ = λ_min, fill the remaining norm along the
      // lowest eigenvector.
      for (Eigen::Index i = min_space_; i < n; ++i) coords[i] = bhat_[i] / (ev[i] - lmin);
      const double partial = coords.squaredNorm();
      if (partial <= rho * rho) {
        coords[0] = std::sqrt(rho * rho - partial);
        return eig_.eigenvectors() * coords;
      }
    }
    auto secular = [&](double mu) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += bhat_[i] * bhat_[i] / ((ev[i] - mu) * (ev[i] - mu));
      return s;
    };
    double lo = lmin - bnorm / rho - 1.0;
    double hi = lmin;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (secular(mid) < rho * rho ? lo : hi) = mid;
    }
    for (Eigen::Index i = 0; i < n; ++i) coords[i] = bhat_[i] / (ev[i] - lo);
    Eigen::VectorXd w = eig_.eigenvectors() * coords;
    const double norm = w.norm();
    if (norm > 0) w *= rho / norm;
    return w;
  }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_;
  Eigen::VectorXd b_;
  Eigen::VectorXd bhat_;
  Eigen::Index min_space_ = 0;
};

bool tied_or_better(ExtendedReal a, ExtendedReal best) {
  if (a.is_infinite() || best.is_infinite()) return a <= best;
  return a.value() <= best.value() + 1e-14 * std::max(1.0, std::abs(best.value()));
}

}  // namespace

SpanExperimentReport representer_span_experiment(const Regularizer& omega, const std::vector<Eigen::VectorXd>& functionals,
                                                 const LossDescriptor& loss, ExtendedReal gamma, std::uint64_t seed,
                                                 double tol) {
  if (functionals.empty()) throw InvalidArgument("span experiment needs at least one functional");
  const auto n = functionals.front().size();
  const auto ell = static_cast<Eigen::Index>(functionals.size());
  if (ell >= n) throw InvalidArgument("span experiment needs fewer functionals than dimensions");
  if (const auto d = omega.dimension(); d && *d != n) throw DimensionError("regularizer dimension mismatch");
  Eigen::MatrixXd w_mat(n, ell);
  for (Eigen::Index j = 0; j < ell; ++j) {
    if (functionals[static_cast<std::size_t>(j)].size() != n) throw DimensionError("functionals differ in dimension");
    w_mat.col(j) = functionals[static_cast<std::size_t>(j)];
  }
  if (const auto size = loss.expected_size(); size && *size != functionals.size()) {
    throw DimensionError("loss data sized for a different number of functionals");
  }
  auto objective = [&](const Eigen::VectorXd& w) {
    return loss.evaluate(w_mat.transpose() * w, gamma) + omega(w);
  };

  SpanExperimentReport report;
  const auto* squared = std::get_if<SquaredLoss>(&loss.variant());
  const auto* aniso = std::get_if<AnisotropicQuadratic>(&omega.variant());
  if (squared != nullptr && gamma.is_finite() && (omega.is_radial() || aniso != nullptr)) {
    report.method = "polar_trust_region";
    const double g = gamma.value();
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(squared->targets.data(), ell);
    Eigen::MatrixXd a = g * w_mat * w_mat.transpose();
    if (aniso != nullptr) a.diagonal() += aniso->weights;
    const SphereQuadratic sphere(a, g * w_mat * y);
    auto on_sphere = [&](double rho) { return objective(sphere.argmin(rho)); };

    constexpr int kNodes = 601;
    std::vector<double> radii{0.0};
    for (int j = 0; j < kNodes; ++j) radii.push_back(std::pow(10.0, -6.0 + 10.0 * j / (kNodes - 1)));
    std::vector<ExtendedReal> values;
    ExtendedReal best = ExtendedReal::infinity();
    for (double rho : radii) {
      values.push_back(on_sphere(rho));
      best = min(best, values.back());
    }
    std::size_t pick = 0;
    while (!tied_or_better(values[pick], best)) ++pick;
    double rho_star = radii[pick];
    ExtendedReal value_star = values[pick];
    const bool plateau = pick + 1 < radii.size() && tied_or_better(values[pick + 1], best);
    if (best.is_finite() && plateau && pick > 0) {
      // Flat minimum (e.g. an inactive ball constraint): walk to its left edge.
      double lo = radii[pick - 1];
      double hi = rho_star;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (tied_or_better(on_sphere(mid), best) ? hi : lo) = mid;
      }
      rho_star = hi;
    } else if (best.is_finite() && !plateau) {
      const double left = radii[pick == 0 ? 0 : pick - 1];
      const double right = radii[std::min(pick + 1, radii.size() - 1)];
      const ScalarMinimum refined = golden_section(on_sphere, left, right);
      if (refined.value < value_star || (tied_or_better(refined.value, value_star) && refined.argmin < rho_star)) {
        rho_star = refined.argmin;
        value_star = refined.value;
      }
    }
    report.minimizer = sphere.argmin(rho_star);
  } else {
    report.method = "multistart";
    OracleOptions options;
    options.seed = seed;
    const OracleResult result = oracle_minimize(objective, static_cast<int>(n), options);
    report.minimizer = result.argmin;
    report.converged = result.converged;
  }

  const Eigen::MatrixXd wtw = w_mat.transpose() * w_mat;
  report.projection = w_mat * pseudo_solve(wtw, w_mat.transpose() * report.minimizer);
  const double norm = report.minimizer.norm();
  report.span_distance = norm == 0.0 ? 0.0 : (report.minimizer - report.projection).norm() / norm;
  report.j_at_min = objective(report.minimizer);
  report.j_at_projection = objective(report.projection);
  report.projection_not_worse = !below_by_more_than(report.j_at_min, report.j_at_projection, tol);
  return report;
}

std::vector<double> default_gamma_schedule() {
  std::vector<double> schedule;
  for (int k = 0; k <= 40; ++k) schedule.push_back(std::ldexp(1.0, k));
  return schedule;
}

NecessityReport necessity_probe(const Regularizer& omega, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                const std::vector<double>& schedule, const ScalarLoss& f, double tol) {
  if (x.size() != y.size()) throw DimensionError("x and y must have the same dimension");
  if (!(x.norm() > 0)) throw InvalidArgument("necessity probe needs x ≠ 0");
  if (std::abs(x.dot(y)) > 1e-12 * x.norm() * std::max(y.norm(), 1.0)) {
    throw InvalidArgument("necessity probe needs y orthogonal to x");
  }
  if (schedule.empty()) throw InvalidArgument("empty γ schedule");

  NecessityReport report;
  report.note = "finitely many (p, γ) are sampled: the probe demonstrates necessity, it does not prove it";
  report.omega_sum = omega(Eigen::VectorXd(x + y));
  report.omega_origin = omega(Eigen::VectorXd::Zero(x.size()));
  report.trivial = report.omega_sum.is_infinite();
  const double f_one = f(1.0);

  for (double gamma : schedule) {
    if (!(gamma >= 0) || !std::isfinite(gamma)) throw InvalidArgument("γ schedule entries must be finite and nonnegative");
    auto phi = [&](double lambda) { return ExtendedReal(gamma * f(lambda)) + omega(Eigen::VectorXd(lambda * x)); };
    std::function<std::optional<double>(double)> derivative;
    if (f.derivative) {
      derivative = [&](double lambda) -> std::optional<double> {
        const auto d = omega.ray_derivative(x, lambda);
        if (!d) return std::nullopt;
        return gamma * f.derivative(lambda) + *d;
      };
    }
    const ScalarMinimum m = minimize_scalar(phi, -2.0, 2.0, 4001, derivative);
    NecessityStep step{.gamma = gamma, .lambda = m.argmin, .a = gamma * (f(m.argmin) - f_one)};
    step.omega_on_ray = omega(Eigen::VectorXd(m.argmin * x));
    report.steps.push_back(step);
  }

  if (!report.trivial && report.omega_origin.is_finite()) {
    const double bound = report.omega_sum.value() - report.omega_origin.value();
    for (const auto& s : report.steps) {
      if (s.a > bound + tol) report.bound_holds = false;
    }
  }
  if (omega.is_radial() && !report.trivial) report.lambda_to_one = std::abs(report.steps.back().lambda - 1.0) <= 1e-3;
  report.liminf_estimate = ExtendedReal::infinity();
  const std::size_t tail = std::min<std::size_t>(10, report.steps.size());
  for (std::size_t i = report.steps.size() - tail; i < report.steps.size(); ++i) {
    report.liminf_estimate = min(report.liminf_estimate, report.steps[i].omega_on_ray);
  }
  report.liminf_holds = !below_by_more_than(report.omega_sum, report.liminf_estimate, tol);
  return report;
}

std::vector<EquivalenceRow> characterization_equivalence(int dim, std::size_t trials, std::uint64_t seed) {
  std::vector<EquivalenceRow> rows;
  for (const auto& entry : regularizer_catalogue(dim)) {
    rows.push_back({entry.name, check_orthogonal_monotonicity(entry.regularizer, dim, trials, seed),
                    check_radial_nondecreasing(entry.regularizer, dim, trials, seed)});
  }
  return rows;
}

}  // namespace kreg
