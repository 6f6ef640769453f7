#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "kreg/extended_real.hpp"

namespace kreg {

/// Tolerance on the unit-variance constraint of the kernel PCA loss.
inline constexpr double kKpcaVarianceTolerance = 1e-8;
/// Slack on interpolation and hard-margin constraints (γ = +∞).
inline constexpr double kHardConstraintTolerance = 1e-8;

/// A scalar loss f: R → R meant to be uniquely minimized at z = 1.
/// `derivative` is optional; when present it is exact.
struct ScalarLoss {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double operator()(double z) const { return value(z); }
  friend bool operator==(const ScalarLoss& a, const ScalarLoss& b) { return a.name == b.name; }
};

/// f(z) = (z − 1)².
ScalarLoss squared_distance_to_one();
/// f(z) = |z − 1|.
ScalarLoss absolute_distance_to_one();
/// f(z) = max{0, 1 − z} + max{0, 1 + z/2}: the hinge loss with the pairs
/// (y, w) = (1, p) and (−1, p/2).
ScalarLoss hinge_pair();
/// Lookup by name: "squared", "absolute", "hinge_pair".
std::optional<ScalarLoss> scalar_loss_by_name(const std::string& name);

struct UniqueMinimizerScan {
  bool unique_at_one = false;
  double value_at_one = 0.0;
  double best_other_z = 0.0;
  double best_other_value = 0.0;
  std::size_t points = 0;
};

/// Scans z = lo + k·step over [lo, hi] and checks f(1) < f(z) at every node
/// with |z − 1| ≥ step/2.
UniqueMinimizerScan scan_unique_minimizer(const ScalarLoss& f, double lo = -10.0, double hi = 10.0,
                                          double step = 1e-3);

/// γ Σ (y_i − v_i)².
struct SquaredLoss {
  std::vector<double> targets;
  friend bool operator==(const SquaredLoss&, const SquaredLoss&) = default;
};
/// γ Σ max{0, 1 − y_i v_i} with labels ±1.
struct HingeLoss {
  std::vector<double> labels;
  friend bool operator==(const HingeLoss&, const HingeLoss&) = default;
};
/// 0 when the empirical variance (1/ℓ) Σ (v_i − mean v)² equals 1, +∞
/// otherwise. Not scaled by γ.
struct KpcaConstraint {
  friend bool operator==(const KpcaConstraint&, const KpcaConstraint&) = default;
};
/// γ Σ f(v_i).
struct ScalarFamily {
  ScalarLoss f;
  friend bool operator==(const ScalarFamily&, const ScalarFamily&) = default;
};

/// The error term f(L_1 w, ..., L_ℓ w) of a regularization functional.
/// γ = +∞ turns the squared and hinge losses into hard constraints
/// (interpolation, hard margin).
class LossDescriptor {
 public:
  using Variant = std::variant<SquaredLoss, HingeLoss, KpcaConstraint, ScalarFamily>;

  static LossDescriptor squared(std::vector<double> targets);
  static LossDescriptor hinge(std::vector<double> labels);
  static LossDescriptor kpca();
  static LossDescriptor scalar(ScalarLoss f);

  const Variant& variant() const { return variant_; }
  std::string name() const;
  bool is_convex() const;

  /// Number of functionals this loss expects, if fixed by its data.
  std::optional<std::size_t> expected_size() const;

  /// Error term at functional values v with weight γ.
  ExtendedReal evaluate(const Eigen::VectorXd& values, ExtendedReal gamma) const;

  friend bool operator==(const LossDescriptor&, const LossDescriptor&) = default;

 private:
  explicit LossDescriptor(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// (1/ℓ) Σ (v_i − mean v)².
double empirical_variance(const Eigen::VectorXd& values);

}  // namespace kreg
