#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "kreg/expansion.hpp"
#include "kreg/extended_real.hpp"

namespace kreg {

/// Absolute slack on finite comparisons in the condition checkers.
inline constexpr double kCheckTolerance = 1e-9;

/// A nondecreasing, lower semicontinuous h: [0, ∞) → R ∪ {+∞}.
class RadialProfile {
 public:
  /// h(t) = t².
  struct Square {
    friend bool operator==(const Square&, const Square&) = default;
  };
  /// h(t) = t^p, p ≥ 0 (0⁰ = 1).
  struct Power {
    double p = 1.0;
    friend bool operator==(const Power&, const Power&) = default;
  };
  /// Left-continuous step function: values[0] on [0, knots[0]],
  /// values[i] on (knots[i-1], knots[i]], values.back() beyond the last knot.
  struct Table {
    std::vector<double> knots;
    std::vector<ExtendedReal> values;
    friend bool operator==(const Table&, const Table&) = default;
  };
  /// 0 on [0, radius], +∞ beyond (Ivanov constraint |w| ≤ radius).
  struct IndicatorBall {
    double radius = 1.0;
    friend bool operator==(const IndicatorBall&, const IndicatorBall&) = default;
  };
  using Variant = std::variant<Square, Power, Table, IndicatorBall>;

  static RadialProfile square();
  static RadialProfile power(double p);
  static RadialProfile table(std::vector<double> knots, std::vector<ExtendedReal> values);
  static RadialProfile indicator_ball(double radius);

  const Variant& variant() const { return variant_; }
  std::string name() const;

  /// h(t) for t ≥ 0.
  ExtendedReal operator()(double t) const;
  /// h'(t) where h is differentiable at t; empty for step profiles.
  std::optional<double> derivative(double t) const;

  friend bool operator==(const RadialProfile&, const RadialProfile&) = default;

 private:
  explicit RadialProfile(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Ω(w) = Σ α_i w_i² on R^n with weights not all equal.
struct AnisotropicQuadratic {
  Eigen::VectorXd weights;
  friend bool operator==(const AnisotropicQuadratic&, const AnisotropicQuadratic&) = default;
};

/// Ω(w) = |w − z| on R^n, z ≠ 0. Its minimum sits at z, not at the origin.
struct ShiftedNorm {
  Eigen::VectorXd center;
  friend bool operator==(const ShiftedNorm&, const ShiftedNorm&) = default;
};

/// Arbitrary Ω on R^n. Compared by name and dimension.
struct CustomRegularizer {
  std::string name;
  int dimension = 2;
  std::function<ExtendedReal(const Eigen::VectorXd&)> fn;
  friend bool operator==(const CustomRegularizer& a, const CustomRegularizer& b) {
    return a.name == b.name && a.dimension == b.dimension;
  }
};

/// Ω: either h(|w|) for a radial profile, usable on kernel expansions and on
/// any R^n, or an explicit function on a fixed R^n.
class Regularizer {
 public:
  using Variant = std::variant<RadialProfile, AnisotropicQuadratic, ShiftedNorm, CustomRegularizer>;

  static Regularizer radial(RadialProfile profile);
  static Regularizer anisotropic_quadratic(Eigen::VectorXd weights);
  static Regularizer shifted_norm(Eigen::VectorXd center);
  static Regularizer custom(std::string name, int dimension, std::function<ExtendedReal(const Eigen::VectorXd&)> fn);

  const Variant& variant() const { return variant_; }
  bool is_radial() const { return std::holds_alternative<RadialProfile>(variant_); }
  /// The profile of a radial regularizer, nullptr otherwise.
  const RadialProfile* profile() const { return std::get_if<RadialProfile>(&variant_); }
  /// Fixed model-space dimension of explicit regularizers; empty for radial.
  std::optional<int> dimension() const;
  std::string name() const;

  ExtendedReal operator()(const Eigen::VectorXd& w) const;
  /// Radial regularizers only; explicit ones throw InvalidArgument.
  ExtendedReal operator()(const KernelExpansion& w) const;

  /// d/dλ Ω(λx) where Ω is differentiable along the ray; empty otherwise.
  std::optional<double> ray_derivative(const Eigen::VectorXd& x, double lambda) const;

  friend bool operator==(const Regularizer&, const Regularizer&) = default;

 private:
  explicit Regularizer(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

inline ExtendedReal omega_value(const Regularizer& r, const Eigen::VectorXd& w) { return r(w); }
inline ExtendedReal omega_value(const Regularizer& r, const KernelExpansion& w) { return r(w); }

/// One sampled trial of a condition checker. For the ray check `y` holds λx
/// and `scale` holds λ.
struct CheckTrial {
  std::size_t trial = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double scale = 0.0;
  ExtendedReal lhs;
  ExtendedReal rhs;
  bool violated = false;
};

struct CheckReport {
  std::string check;
  bool holds = true;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::optional<CheckTrial> witness;
  std::vector<CheckTrial> rows;
};

/// Ω(x+y) ≥ max{Ω(x), Ω(y)} for sampled orthogonal pairs (x, ±y). Requires
/// dim ≥ 2.
CheckReport check_orthogonal_monotonicity(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                          double tol = kCheckTolerance);

/// Ω(x) ≥ Ω(λx) for sampled x and λ ∈ [0, 1].
CheckReport check_ray_monotonicity(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                   double tol = kCheckTolerance);

/// Ω(x) = Ω(y) for sampled pairs of equal norm.
CheckReport check_equal_norm_invariance(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                        double tol = kCheckTolerance);

/// Radial and nondecreasing: equal-norm invariance together with ray
/// monotonicity.
struct RadialityVerdict {
  CheckReport equal_norm;
  CheckReport ray;
  bool holds() const { return equal_norm.holds && ray.holds; }
};

RadialityVerdict check_radial_nondecreasing(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                            double tol = kCheckTolerance);

struct CatalogueEntry {
  std::string name;
  Regularizer regularizer;
};

/// Radial profiles (square, norm, square root of norm, step table, unit
/// ball indicator) and non-radial counterexamples (anisotropic quadratic,
/// shifted norm) on R^dim.
std::vector<CatalogueEntry> regularizer_catalogue(int dim);

}  // namespace kreg
