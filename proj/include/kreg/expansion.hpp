#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kreg/kernel.hpp"

namespace kreg {

/// w = sum_i c_i K(z_i, .), a finite element of the RKHS of `kernel`.
///
/// Values are immutable. Sums and scalings concatenate center lists without
/// merging duplicates; compacted() is the separate normalization step.
class KernelExpansion {
 public:
  explicit KernelExpansion(Kernel kernel);
  KernelExpansion(Kernel kernel, std::vector<Point> centers, Eigen::VectorXd coefficients);

  /// The kernel section K_x.
  static KernelExpansion section(const Kernel& kernel, const Point& x);

  const Kernel& kernel() const { return kernel_; }
  std::span<const Point> centers() const { return centers_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }

  /// w(x) = sum_i c_i K(z_i, x).
  double operator()(const Point& x) const;

  KernelExpansion operator+(const KernelExpansion& other) const;
  KernelExpansion operator-(const KernelExpansion& other) const;
  KernelExpansion operator-() const;
  friend KernelExpansion operator*(double factor, const KernelExpansion& w);

  /// Same function with exactly repeated centers merged and zero
  /// coefficients dropped.
  KernelExpansion compacted() const;

 private:
  Kernel kernel_;
  std::vector<Point> centers_;
  Eigen::VectorXd coefficients_;
};

inline double expansion_eval(const KernelExpansion& w, const Point& x) { return w(x); }

/// sum_ij a_i b_j K(z_i, z'_j). Throws DimensionError on kernel mismatch.
double inner_product(const KernelExpansion& u, const KernelExpansion& v);

/// sqrt(max(0, <w, w>)).
double norm(const KernelExpansion& w);

/// [K(z_i, z'_j)] between the center lists of two expansions.
Eigen::MatrixXd cross_kernel(const KernelExpansion& u, const KernelExpansion& v);

}  // namespace kreg
