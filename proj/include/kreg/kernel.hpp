#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

namespace kreg {

using Point = Eigen::VectorXd;

enum class KernelFamily { gaussian, polynomial, linear };

std::string to_string(KernelFamily family);

/// A positive-semidefinite kernel on R^input_dim.
///
///   gaussian:   K(x,y) = exp(-|x-y|^2 / (2 width^2))
///   polynomial: K(x,y) = (<x,y> + offset)^degree
///   linear:     K(x,y) = <x,y>
class Kernel {
 public:
  static Kernel gaussian(int input_dim, double width);
  static Kernel polynomial(int input_dim, int degree, double offset);
  static Kernel linear(int input_dim);

  KernelFamily family() const { return family_; }
  int input_dim() const { return input_dim_; }
  double width() const { return width_; }
  int degree() const { return degree_; }
  double offset() const { return offset_; }

  /// K(x, y). Throws DimensionError if either point is not in R^input_dim.
  double operator()(const Point& x, const Point& y) const;

  /// [K(x_i, x_j)] for the given points.
  Eigen::MatrixXd gram(std::span<const Point> points) const;

  void check_point(const Point& x) const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(KernelFamily family, int input_dim, double width, int degree, double offset);

  KernelFamily family_;
  int input_dim_;
  double width_;
  int degree_;
  double offset_;
};

inline double kernel_eval(const Kernel& k, const Point& x, const Point& y) { return k(x, y); }

}  // namespace kreg
