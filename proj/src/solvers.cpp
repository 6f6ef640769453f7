#include "kreg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kreg/errors.hpp"
#include "kreg/linalg.hpp"
#include "kreg/scalar_search.hpp"

namespace kreg {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double default_jitter(const Eigen::MatrixXd& gram) {
  return 1e-10 * gram.trace() / static_cast<double>(gram.rows());
}

std::string condition_report(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  std::ostringstream os;
  os.precision(6);
  os << "eigenvalues in [" << eig.eigenvalues().minCoeff() << ", " << eig.eigenvalues().maxCoeff()
     << "], condition ~ " << eig.eigenvalues().maxCoeff() / std::max(std::abs(eig.eigenvalues().minCoeff()), 1e-300);
  return os.str();
}

// Solves A c = b by Cholesky, retrying with εI added once. Returns the jitter used.
double cholesky_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& c, double jitter) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    c = llt.solve(b);
    if (c.allFinite()) return 0.0;
  }
  const Eigen::MatrixXd shifted = a + jitter * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  llt.compute(shifted);
  if (llt.info() != Eigen::Success) throw NumericalError("factorization failed even with jitter; " + condition_report(a));
  c = llt.solve(b);
  return jitter;
}

bool square_profile(const RadialProfile& p) { return std::holds_alternative<RadialProfile::Square>(p.variant()); }

// Smallest-norm representative, sign fixed so the first significant entry is negative.
Eigen::VectorXd canonical_sign(Eigen::VectorXd c) {
  const double scale = c.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-12 * scale) {
      if (c[i] > 0) c = -c;
      break;
    }
  }
  return c;
}

}  // namespace

SolveResult solve_rls(const ReducedProblem& problem) {
  if (!std::holds_alternative<SquaredLoss>(problem.loss().variant())) throw InvalidArgument("solve_rls needs a squared loss");
  if (!square_profile(problem.profile())) throw InvalidArgument("solve_rls needs the square profile");
  if (!(problem.gamma() > ExtendedReal(0.0))) throw InvalidArgument("solve_rls needs gamma > 0");
  const Eigen::MatrixXd& g = problem.gram();
  const Eigen::VectorXd y = to_vector(*problem.targets());
  const auto n = g.rows();

  SolveResult result{.method = "rls"};
  if (y.norm() == 0.0) {
    result.coefficients = Eigen::VectorXd::Zero(n);
    result.objective = problem.objective(result.coefficients);
    return result;
  }
  if (problem.gamma().is_infinite()) {
    result.method = "rls_interpolation";
    result.jitter = cholesky_solve(g, y, result.coefficients, default_jitter(g));
    result.residual = (g * result.coefficients - y).norm() / y.norm();
    if (result.residual > kHardConstraintTolerance) {
      throw InfeasibleError("interpolation constraint G c = y is not attainable; relative residual " +
                            std::to_string(result.residual) + "; " + condition_report(g));
    }
  } else {
    const Eigen::MatrixXd a = g + Eigen::MatrixXd::Identity(n, n) / problem.gamma().value();
    result.jitter = cholesky_solve(a, y, result.coefficients, default_jitter(g));
    result.residual = (a * result.coefficients - y).norm() / y.norm();
    if (result.residual > 1e-10) {
      throw NumericalError("regularized system residual " + std::to_string(result.residual) + " exceeds 1e-10; " +
                           condition_report(a));
    }
  }
  result.objective = problem.objective(result.coefficients);
  return result;
}

namespace {

struct DualSvm {
  Eigen::VectorXd alpha;
  std::size_t iterations = 0;
  double gap = 0.0;
};

// Minimizes ¼ αᵀQα − 1ᵀα over 0 ≤ α ≤ upper (upper = +inf allowed) by
// FISTA with gradient restart; stops on the primal-dual gap.
DualSvm svm_dual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, ExtendedReal gamma,
                 const SvmOptions& options) {
  const auto n = gram.rows();
  const Eigen::MatrixXd q = labels.asDiagonal() * gram * labels.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
  const double lipschitz = std::max(0.5 * eig.eigenvalues().maxCoeff(), 1e-300);
  const double upper = gamma.to_double();
  const double gamma_value = gamma.to_double();

  auto project = [&](Eigen::VectorXd a) {
    for (Eigen::Index i = 0; i < n; ++i) a[i] = std::clamp(a[i], 0.0, upper);
    return a;
  };
  auto dual_objective = [&](const Eigen::VectorXd& a) { return a.sum() - 0.25 * a.dot(q * a); };
  auto primal_objective = [&](const Eigen::VectorXd& a) {
    const Eigen::VectorXd c = labels.cwiseProduct(a) / 2.0;
    const Eigen::VectorXd v = gram * c;
    double hinge = 0.0;
    double worst_margin_gap = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - labels[i] * v[i]);
      worst_margin_gap = std::max(worst_margin_gap, 1.0 - labels[i] * v[i]);
    }
    if (std::isinf(gamma_value)) return worst_margin_gap <= 0.0 ? c.dot(v) : HUGE_VAL;
    return gamma_value * hinge + c.dot(v);
  };

  DualSvm out;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd momentum = alpha;
  double t = 1.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd grad = 0.5 * q * momentum - Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd next = project(momentum - grad / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    // Restart when the step opposes the gradient.
    if (grad.dot(next - alpha) > 0) {
      momentum = alpha;
      t = 1.0;
      continue;
    }
    momentum = next + ((t - 1.0) / t_next) * (next - alpha);
    alpha = next;
    t = t_next;
    out.iterations = it + 1;
    if (it % 16 == 0) {
      const double p = primal_objective(alpha);
      const double d = dual_objective(alpha);
      out.gap = p - d;
      if (std::isfinite(p) && out.gap <= options.gap_tolerance * std::max(1.0, std::abs(p))) break;
      if (!alpha.allFinite() || alpha.cwiseAbs().maxCoeff() > 1e14) {
        throw InfeasibleError("hard-margin constraints are infeasible (dual unbounded)");
      }
    }
  }
  out.alpha = alpha;
  const double p = primal_objective(alpha);
  out.gap = std::isfinite(p) ? p - dual_objective(alpha) : HUGE_VAL;
  return out;
}

}  // namespace

SolveResult solve_svm(const ReducedProblem& problem, const SvmOptions& options) {
  const auto* hinge = std::get_if<HingeLoss>(&problem.loss().variant());
  if (hinge == nullptr) throw InvalidArgument("solve_svm needs a hinge loss");
  if (!square_profile(problem.profile())) throw InvalidArgument("solve_svm needs the square profile");
  const Eigen::VectorXd labels = to_vector(hinge->labels);
  const Eigen::MatrixXd& g = problem.gram();

  SolveResult result{.method = problem.gamma().is_infinite() ? "svm_hard_margin_dual" : "svm_dual"};
  if (problem.gamma() == ExtendedReal(0.0)) {
    result.coefficients = Eigen::VectorXd::Zero(g.rows());
    result.objective = problem.objective(result.coefficients);
    return result;
  }
  const DualSvm dual = svm_dual(g, labels, problem.gamma(), options);
  result.coefficients = remove_null_component(g, labels.cwiseProduct(dual.alpha) / 2.0);
  result.iterations = dual.iterations;
  result.residual = dual.gap;
  result.objective = problem.objective(result.coefficients);
  result.converged = std::isfinite(dual.gap) && dual.gap <= 1e-8 * std::max(1.0, result.objective.to_double());
  if (result.objective.is_infinite()) throw InfeasibleError("hard-margin solution violates the margin constraints");
  return result;
}

SolveResult solve_kpca(const ReducedProblem& problem) {
  if (!std::holds_alternative<KpcaConstraint>(problem.loss().variant())) throw InvalidArgument("solve_kpca needs the kpca loss");
  const auto& profile = problem.profile().variant();
  const bool strictly_increasing = std::holds_alternative<RadialProfile::Square>(profile) ||
                                   (std::holds_alternative<RadialProfile::Power>(profile) &&
                                    std::get<RadialProfile::Power>(profile).p > 0);
  if (!strictly_increasing) throw InvalidArgument("solve_kpca needs a strictly increasing profile (square or power p > 0)");
  const Eigen::MatrixXd& g = problem.gram();
  const auto n = g.rows();
  if (n < 2) throw InvalidArgument("kernel PCA needs at least two functionals");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const double cutoff = 1e-12 * std::max(eig.eigenvalues().maxCoeff(), 0.0);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues()[i] > cutoff) kept.push_back(i);
  }
  if (kept.empty()) throw InfeasibleError("Gram matrix is zero: the unit-variance constraint is unattainable");
  const auto k = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd basis(n, k);  // U Λ^{1/2}
  Eigen::MatrixXd inverse_basis(n, k);  // U Λ^{-1/2}
  for (Eigen::Index j = 0; j < k; ++j) {
    const double lambda = eig.eigenvalues()[kept[static_cast<std::size_t>(j)]];
    basis.col(j) = eig.eigenvectors().col(kept[static_cast<std::size_t>(j)]) * std::sqrt(lambda);
    inverse_basis.col(j) = eig.eigenvectors().col(kept[static_cast<std::size_t>(j)]) / std::sqrt(lambda);
  }
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd m = basis.transpose() * centering * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> top(m);
  const double mu = top.eigenvalues()[k - 1];
  if (!(mu > 1e-12 * std::max(1.0, g.trace()))) {
    throw InfeasibleError("centered Gram matrix vanishes: every coefficient vector has zero empirical variance");
  }
  Eigen::VectorXd c = inverse_basis * top.eigenvectors().col(k - 1) * std::sqrt(static_cast<double>(n) / mu);
  c /= std::sqrt(empirical_variance(g * c));
  c = canonical_sign(c);

  SolveResult result{.method = "kpca_eigen"};
  result.coefficients = c;
  result.residual = std::abs(empirical_variance(g * c) - 1.0);
  result.objective = problem.objective(c);
  return result;
}

EllipsoidProjector::EllipsoidProjector(const Eigen::MatrixXd& gram, double radius) : gram_(gram), radius_(radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvalidArgument("ellipsoid radius must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  eigenvectors_ = eig.eigenvectors();
  eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
}

Eigen::VectorXd EllipsoidProjector::operator()(const Eigen::VectorXd& v) const {
  const double r2 = radius_ * radius_;
  if (v.dot(gram_ * v) <= r2) return v;
  const Eigen::VectorXd vh = eigenvectors_.transpose() * v;
  auto excess = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < vh.size(); ++i) {
      const double d = 1.0 + mu * eigenvalues_[i];
      s += eigenvalues_[i] * vh[i] * vh[i] / (d * d);
    }
    return s - r2;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) > 0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? lo : hi) = mid;
  }
  Eigen::VectorXd scaled(vh.size());
  for (Eigen::Index i = 0; i < vh.size(); ++i) scaled[i] = vh[i] / (1.0 + hi * eigenvalues_[i]);
  Eigen::VectorXd c = eigenvectors_ * scaled;
  const double q = c.dot(gram_ * c);
  if (q > r2) c *= radius_ / std::sqrt(q);
  return c;
}

namespace {

SolveResult ivanov_squared(const ReducedProblem& problem, double radius, const IvanovOptions& options) {
  const Eigen::MatrixXd& g = problem.gram();
  const Eigen::VectorXd y = to_vector(*problem.targets());
  const double gamma = problem.gamma().value();
  const EllipsoidProjector project(g, radius);
  auto loss = [&](const Eigen::VectorXd& c) { return gamma * (y - g * c).squaredNorm(); };

  SolveResult result{.method = "ivanov_projected_gradient"};
  const Eigen::VectorXd unconstrained = pseudo_solve(g, y);
  if (unconstrained.dot(g * unconstrained) <= radius * radius) {
    result.method = "ivanov_inactive_constraint";
    result.coefficients = unconstrained;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    const double lmax = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
    const double lipschitz = 2.0 * gamma * lmax * lmax;
    Eigen::VectorXd c = project(unconstrained);
    Eigen::VectorXd momentum = c;
    double fc = loss(c);
    double t = 1.0;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      const Eigen::VectorXd grad = -2.0 * gamma * g * (y - g * momentum);
      const Eigen::VectorXd next = project(momentum - grad / lipschitz);
      const double f_next = loss(next);
      result.iterations = it + 1;
      if (f_next > fc) {  // restart on nonmonotone step
        momentum = c;
        t = 1.0;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double moved = (next - c).norm();
      momentum = next + ((t - 1.0) / t_next) * (next - c);
      c = next;
      fc = f_next;
      t = t_next;
      if (moved <= options.step_tolerance * std::max(1.0, c.norm())) break;
    }
    result.converged = result.iterations < options.max_iterations;
    result.coefficients = c;
  }
  result.residual = std::max(0.0, result.coefficients.dot(g * result.coefficients) - radius * radius);
  result.objective = problem.objective(result.coefficients);
  return result;
}

SolveResult ivanov_hinge(const ReducedProblem& problem, double radius) {
  const auto& hinge = std::get<HingeLoss>(problem.loss().variant());
  const Eigen::MatrixXd& g = problem.gram();
  const Eigen::VectorXd labels = to_vector(hinge.labels);
  const double r2 = radius * radius;
  // Penalized problem γ' Σ hinge + cᵀGc; its solution norm grows with γ'.
  auto penalized = [&](ExtendedReal weight) {
    const DualSvm dual = svm_dual(g, labels, weight, {});
    return Eigen::VectorXd(remove_null_component(g, labels.cwiseProduct(dual.alpha) / 2.0));
  };
  auto norm_sq = [&](const Eigen::VectorXd& c) { return c.dot(g * c); };

  SolveResult result{.method = "ivanov_multiplier_search"};
  Eigen::VectorXd c;
  try {
    c = penalized(ExtendedReal::infinity());
  } catch (const InfeasibleError&) {
    c = penalized(ExtendedReal(1e12));
  }
  if (norm_sq(c) > r2) {
    double lo = std::log(1e-12);
    double hi = std::log(1e12);
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (norm_sq(penalized(ExtendedReal(std::exp(mid)))) > r2 ? hi : lo) = mid;
      result.iterations = static_cast<std::size_t>(it + 1);
    }
    c = penalized(ExtendedReal(std::exp(lo)));
  }
  if (const double q = norm_sq(c); q > r2) c *= radius / std::sqrt(q);
  result.coefficients = c;
  result.residual = std::max(0.0, norm_sq(c) - r2);
  result.objective = problem.objective(c);
  return result;
}

}  // namespace

SolveResult solve_ivanov(const ReducedProblem& problem, const IvanovOptions& options) {
  const auto* ball = std::get_if<RadialProfile::IndicatorBall>(&problem.profile().variant());
  if (ball == nullptr) throw InvalidArgument("solve_ivanov needs the indicator_ball profile");
  if (!(ball->radius > 0)) throw InvalidArgument("Ivanov radius must be positive");
  if (!problem.loss().is_convex()) throw InvalidArgument("solve_ivanov needs a squared or hinge loss");
  if (problem.gamma().is_infinite()) throw InvalidArgument("solve_ivanov needs a finite gamma");
  if (problem.gamma() == ExtendedReal(0.0)) {
    SolveResult result{.method = "ivanov_zero_loss"};
    result.coefficients = Eigen::VectorXd::Zero(problem.gram().rows());
    result.objective = problem.objective(result.coefficients);
    return result;
  }
  if (std::holds_alternative<SquaredLoss>(problem.loss().variant())) return ivanov_squared(problem, ball->radius, options);
  return ivanov_hinge(problem, ball->radius);
}

ScalarFamilyResult solve_scalar_family(const KernelExpansion& p, const ScalarLoss& f, const RadialProfile& profile,
                                       ExtendedReal gamma) {
  if (gamma < ExtendedReal(0.0) || gamma.is_infinite()) throw InvalidArgument("gamma must be a nonnegative real");
  if (!scan_unique_minimizer(f).unique_at_one) throw InvalidArgument("scalar loss '" + f.name + "' is not uniquely minimized at 1");
  ScalarFamilyResult result;
  result.p_norm = norm(p);
  if (result.p_norm == 0.0) {
    result.degenerate = true;
    result.lambda = 0.0;
    result.objective = scale(gamma, ExtendedReal(f(0.0))) + profile(0.0);
    return result;
  }
  const double x_norm = 1.0 / result.p_norm;
  const double g = gamma.value();
  auto objective = [&](double lambda) { return ExtendedReal(g * f(lambda)) + profile(std::abs(lambda) * x_norm); };
  std::function<std::optional<double>(double)> derivative;
  if (f.derivative) {
    derivative = [&](double lambda) -> std::optional<double> {
      const auto dh = profile.derivative(std::abs(lambda) * x_norm);
      if (!dh) return std::nullopt;
      if (lambda == 0.0 && *dh != 0.0) return std::nullopt;
      const double sign = lambda > 0 ? 1.0 : (lambda < 0 ? -1.0 : 0.0);
      return g * f.derivative(lambda) + sign * x_norm * *dh;
    };
  }
  const ScalarMinimum best = minimize_scalar(objective, -kScalarFamilyBracket, kScalarFamilyBracket, 4001, derivative);
  result.lambda = best.argmin;
  result.objective = best.value;
  result.derivative_refined = best.derivative_refined;
  return result;
}

SolveResult solve(const ReducedProblem& problem) {
  const auto& loss = problem.loss().variant();
  const auto& profile = problem.profile().variant();
  if (std::holds_alternative<KpcaConstraint>(loss)) return solve_kpca(problem);
  if (std::holds_alternative<RadialProfile::IndicatorBall>(profile)) return solve_ivanov(problem);
  if (std::holds_alternative<SquaredLoss>(loss) && square_profile(problem.profile())) return solve_rls(problem);
  if (std::holds_alternative<HingeLoss>(loss) && square_profile(problem.profile())) return solve_svm(problem);
  if (const auto* s = std::get_if<ScalarFamily>(&loss); s != nullptr && problem.size() == 1) {
    const ScalarFamilyResult r = solve_scalar_family(problem.representers()[0], s->f, problem.profile(), problem.gamma());
    SolveResult result{.method = "scalar_family"};
    // w = λ p / |p|² = (λ / G_11) w_1.
    const double g11 = problem.gram()(0, 0);
    result.coefficients = Eigen::VectorXd::Constant(1, r.degenerate ? 0.0 : r.lambda / g11);
    result.objective = problem.objective(result.coefficients);
    return result;
  }
  throw InvalidArgument("no solver for loss '" + problem.loss().name() + "' with profile '" + problem.profile().name() +
                        "'");
}

}  // namespace kreg
