#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "kreg/expansion.hpp"
#include "kreg/extended_real.hpp"
#include "kreg/loss.hpp"
#include "kreg/reduction.hpp"

namespace kreg {

struct SolveResult {
  std::string method;
  Eigen::VectorXd coefficients;
  ExtendedReal objective;
  /// Method-specific: linear-system residual (rls), duality gap (svm),
  /// |variance − 1| (kpca), max(0, cᵀGc − r²) (ivanov).
  double residual = 0.0;
  std::size_t iterations = 0;
  /// εI added to G when a factorization failed; 0 otherwise.
  double jitter = 0.0;
  bool converged = true;
};

/// Squared loss with h(t) = t²: c = (G + I/γ)⁻¹ y. γ = +∞ solves the
/// interpolation system G c = y.
SolveResult solve_rls(const ReducedProblem& problem);

struct SvmOptions {
  std::size_t max_iterations = 1'000'000;
  double gap_tolerance = 1e-12;
};

/// Hinge loss with h(t) = t², solved through its dual
///   max 1ᵀα − ¼ αᵀ Q α,  0 ≤ α ≤ γ,  Q = diag(y) G diag(y),
/// by accelerated projected gradient on the box; c = y∘α / 2.
/// γ = +∞ is the hard-margin problem.
SolveResult solve_svm(const ReducedProblem& problem, const SvmOptions& options = {});

/// Minimal-norm w subject to unit empirical variance of (G c), for
/// strictly increasing h; the top eigenvector of G^{1/2} H G^{1/2} with H
/// the centering matrix.
SolveResult solve_kpca(const ReducedProblem& problem);

struct IvanovOptions {
  std::size_t max_iterations = 200'000;
  double step_tolerance = 1e-14;
};

/// min f(G c) subject to cᵀ G c ≤ r², for the indicator_ball(r) profile.
/// Squared loss: accelerated projected gradient with Euclidean projection
/// onto the G-ellipsoid. Hinge loss: search on the constraint multiplier
/// over the hinge solver.
SolveResult solve_ivanov(const ReducedProblem& problem, const IvanovOptions& options = {});

/// Euclidean projection onto {c : cᵀ G c ≤ r²}: c = (I + μG)⁻¹ v with the
/// multiplier μ ≥ 0 found by bisection on
///   Σ λ_i v̂_i² / (1 + μ λ_i)² = r².
class EllipsoidProjector {
 public:
  EllipsoidProjector(const Eigen::MatrixXd& gram, double radius);
  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const;
  double radius() const { return radius_; }

 private:
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd gram_;
  double radius_;
};

struct ScalarFamilyResult {
  double lambda = 0.0;
  ExtendedReal objective;
  /// |p|; λ multiplies x = p / |p|², so w = λ x and <w, p> = λ.
  double p_norm = 0.0;
  /// p = 0: only the regularizer remains and λ = 0.
  bool degenerate = false;
  bool derivative_refined = false;
};

/// Bracket searched for λ.
inline constexpr double kScalarFamilyBracket = 2.0;

/// min over λ of γ f(λ) + h(|λ| |x|), x = p / |p|², i.e. the functional
/// γ f(<w, p>) + h(|w|) restricted to the ray through p. f must be uniquely
/// minimized at 1 (checked by a scan).
ScalarFamilyResult solve_scalar_family(const KernelExpansion& p, const ScalarLoss& f, const RadialProfile& profile,
                                       ExtendedReal gamma);

/// Picks the solver matching the loss and profile.
SolveResult solve(const ReducedProblem& problem);

}  // namespace kreg
