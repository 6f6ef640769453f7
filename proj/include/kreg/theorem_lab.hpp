#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kreg/extended_real.hpp"
#include "kreg/loss.hpp"
#include "kreg/regularizer.hpp"

namespace kreg {

/// Relative slack of the sublevel ball test (a sampling estimate).
inline constexpr double kRadiusTolerance = 1e-3;

/// Path x_0 = y, x_{k+1} = x_k + a_k u_k that turns y onto the ray of x in n
/// equal angular steps. Each u_k is a unit vector of span{x, y} orthogonal
/// to x_k with <u_k, x> > 0, and a_k = |x_k| tan(θ/n), so the norm grows by
/// the factor sqrt(1 + tan²(θ/n)) per step and x_n = λx.
struct RotationPath {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  int n = 0;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> steps;
  std::vector<Eigen::VectorXd> units;
  double theta = 0.0;
  /// |x_n| / |x|.
  double lambda = 0.0;
};

/// Requires dim ≥ 2, 0 < |y| < |x|, y not a multiple of x, θ/n < π/2.
RotationPath build_rotation_path(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int n);

/// Largest deviations from the path invariants.
struct RotationPathAudit {
  double orthogonality = 0.0;      // max |<u_k, x_k>| / |x_k|
  double unit_norm = 0.0;          // max ||u_k| − 1|
  double plane_residual = 0.0;     // max distance of u_k from span{x, y}
  double min_forward = 0.0;        // min <u_k, x> / |x|, must be > 0
  double norm_recursion = 0.0;     // max relative error of |x_{k+1}|² = |x_k|²(1 + tan²(θ/n))
  double terminal_alignment = 0.0; // |x_n − λx| / |x_n|
  double terminal_lambda = 0.0;    // relative error of λ² against the closed form
  bool holds(double recursion_tol = 1e-12, double terminal_tol = 1e-10) const;
};

RotationPathAudit audit_rotation_path(const RotationPath& path);

/// (1 + tan²(θ/n))ⁿ, +∞ when θ/n ≥ π/2.
double contraction_factor_squared(double theta, long long n);
/// λ²(n) = ratio² (1 + tan²(θ/n))ⁿ with ratio = |y| / |x|.
double lambda_squared(double ratio, double theta, long long n);
/// Smallest n with λ(n) ≤ 1; λ² decreases in n towards ratio² < 1.
long long min_n_for_contraction(double ratio, double theta);
long long min_n_for_contraction(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Angle between x and y, acos of the clamped cosine.
double angle_between(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct ChainReport {
  bool holds = true;
  /// Ω(x_0), ..., Ω(x_n).
  std::vector<ExtendedReal> values;
  /// Steps k with Ω(x_{k+1}) < Ω(x_k) − tol.
  std::vector<int> failures;
  /// Ω(λx) ≥ Ω(y) − tol.
  bool endpoints_ordered = true;
  /// Sampled orthogonal monotonicity of Ω, the premise of the chain.
  bool premise_holds = true;
};

/// Ω(x_{k+1}) ≥ Ω(x_k) − tol along the path and Ω(λx) ≥ Ω(y) − tol.
ChainReport monotone_chain_check(const Regularizer& r, const RotationPath& path, double tol = kCheckTolerance,
                                 std::size_t premise_trials = 1000, std::uint64_t seed = 0);

struct SublevelWitness {
  Eigen::VectorXd point;
  double t = 1.0;  // t·point left the sublevel set
  ExtendedReal value;
};

struct SublevelReport {
  std::string regularizer;
  ExtendedReal level;
  std::size_t samples = 0;
  /// sup |x| over sampled points with Ω(x) ≤ c (0 if none).
  double r_in = 0.0;
  /// inf |x| over sampled points with Ω(x) > c (+inf if none).
  double r_out = 0.0;
  bool ball_like = true;
  bool star_shaped = true;
  std::vector<SublevelWitness> witnesses;
};

/// Samples `samples` directions; along each, radii on a log grid in
/// [1e-2, 1e2] plus bisection at every sign change of Ω − c. ball_like is
/// r_in ≤ r_out (1 + tol_radius); star shape is tested on t·x, t = k/64.
SublevelReport sublevel_geometry_probe(const Regularizer& r, int dim, ExtendedReal level, std::size_t samples,
                                       std::uint64_t seed, double tol_radius = kRadiusTolerance);

struct SpanExperimentReport {
  Eigen::VectorXd minimizer;
  Eigen::VectorXd projection;
  /// |w* − P w*| / |w*| (0 for w* = 0).
  double span_distance = 0.0;
  ExtendedReal j_at_min;
  ExtendedReal j_at_projection;
  /// J(P w*) ≤ J(w*) + tol.
  bool projection_not_worse = true;
  /// "polar_trust_region" or "multistart".
  std::string method;
  bool converged = true;
};

/// J(w) = loss(<w_1, w>, ..., <w_ℓ, w>; γ) + Ω(w) on R^n, minimized by an
/// oracle that never looks at span{w_i}:
///
/// - squared loss with a radial or anisotropic quadratic Ω: for each radius
///   ρ the minimum over the sphere |w| = ρ is a trust-region subproblem
///   solved exactly (eigendecomposition plus secular equation); ρ is found
///   by a log grid and golden-section search, ties going to the smallest ρ,
///   so w* is the minimal-norm minimizer;
/// - anything else: grid plus multistart local search (oracle_minimize).
SpanExperimentReport representer_span_experiment(const Regularizer& omega, const std::vector<Eigen::VectorXd>& functionals,
                                                 const LossDescriptor& loss, ExtendedReal gamma, std::uint64_t seed,
                                                 double tol = kCheckTolerance);

struct NecessityStep {
  double gamma = 0.0;
  double lambda = 0.0;
  /// γ (f(λ) − f(1)).
  double a = 0.0;
  ExtendedReal omega_on_ray;  // Ω(λx)
};

struct NecessityReport {
  std::vector<NecessityStep> steps;
  ExtendedReal omega_sum;     // Ω(x + y)
  ExtendedReal omega_origin;  // Ω(0)
  /// Ω(x + y) = +∞: the inequality holds trivially.
  bool trivial = false;
  /// a_k ≤ Ω(x + y) − Ω(0) + tol for every k.
  bool bound_holds = true;
  /// Radial Ω with finite Ω(x + y): |λ(γ_K) − 1| ≤ 1e-3. Empty otherwise.
  std::optional<bool> lambda_to_one;
  /// min over the last ten steps of Ω(λ(γ_k) x).
  ExtendedReal liminf_estimate;
  /// Ω(x + y) ≥ liminf Ω(λ(γ_k) x) − tol.
  bool liminf_holds = true;
  std::string note;
};

/// γ_k = 2^k, k = 0..40.
std::vector<double> default_gamma_schedule();

/// For p = x/|x|², minimizes γ f(λ) + Ω(λx) over λ ∈ [−2, 2] for every γ in
/// the schedule (ties to the smallest λ ≥ 0), with f(z) = (z − 1)² unless
/// given. Requires y ⊥ x.
NecessityReport necessity_probe(const Regularizer& omega, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                const std::vector<double>& schedule = default_gamma_schedule(),
                                const ScalarLoss& f = squared_distance_to_one(), double tol = kCheckTolerance);

struct EquivalenceRow {
  std::string name;
  CheckReport orthogonal;
  RadialityVerdict radial;
  bool agree() const { return orthogonal.holds == radial.holds(); }
};

/// Orthogonal monotonicity against radial-and-nondecreasing, for every
/// catalogue entry on R^dim.
std::vector<EquivalenceRow> characterization_equivalence(int dim, std::size_t trials, std::uint64_t seed);

}  // namespace kreg
