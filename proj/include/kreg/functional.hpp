#pragma once

#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "kreg/expansion.hpp"
#include "kreg/kernel.hpp"

namespace kreg {

/// A probability measure with finitely many atoms.
class DiscreteMeasure {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12; atoms distinct
  /// and of equal dimension.
  DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights);

  std::span<const Point> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  int dimension() const { return static_cast<int>(atoms_.front().size()); }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

/// Tensor grid origin + step * (i_1, ..., i_d), 0 <= i_k < shape[k]. Nodes
/// are enumerated in row-major order (last axis fastest).
struct UniformGrid {
  Point origin;
  double step = 0.0;
  std::vector<int> shape;

  int dimension() const { return static_cast<int>(origin.size()); }
  std::size_t size() const;
  Point node(std::size_t index) const;
  /// step^d, the weight of each node in the rectangle rule.
  double cell_volume() const;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

struct PointEvaluation {
  Point point;
  friend bool operator==(const PointEvaluation&, const PointEvaluation&) = default;
};

/// L w = (u * w)(x) discretized by the rectangle rule on `grid`:
/// sum_k u(s_k) w(x - s_k) cell_volume.
struct Convolution {
  UniformGrid grid;
  std::vector<double> signal;
  Point eval_point;
  friend bool operator==(const Convolution&, const Convolution&) = default;
};

struct Expectation {
  DiscreteMeasure measure;
  friend bool operator==(const Expectation&, const Expectation&) = default;
};

class LinearFunctional {
 public:
  using Variant = std::variant<PointEvaluation, Convolution, Expectation>;

  static LinearFunctional point_eval(Point x);
  static LinearFunctional convolution(UniformGrid grid, std::vector<double> signal, Point eval_point);
  static LinearFunctional expectation(DiscreteMeasure measure);

  const Variant& variant() const { return variant_; }
  int input_dim() const;

  friend bool operator==(const LinearFunctional&, const LinearFunctional&) = default;

 private:
  explicit LinearFunctional(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// L w.
double apply(const LinearFunctional& functional, const KernelExpansion& w);

/// The representer K_L with K_L(x) = L K_x, materialized as an expansion.
KernelExpansion representer(const LinearFunctional& functional, const Kernel& kernel);

/// G_ij = <K_{L_i}, K_{L_j}> = L_i K_{L_j}.
Eigen::MatrixXd gram_matrix(const Kernel& kernel, std::span<const LinearFunctional> functionals);

}  // namespace kreg
