#include "kreg/kernel.hpp"

#include <cmath>

#include "kreg/errors.hpp"

namespace kreg {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::polynomial: return "polynomial";
    case KernelFamily::linear: return "linear";
  }
  return "unknown";
}

Kernel::Kernel(KernelFamily family, int input_dim, double width, int degree, double offset)
    : family_(family), input_dim_(input_dim), width_(width), degree_(degree), offset_(offset) {
  if (input_dim < 1) throw InvalidArgument("kernel input_dim must be positive");
}

Kernel Kernel::gaussian(int input_dim, double width) {
  if (!(width > 0) || !std::isfinite(width)) throw InvalidArgument("gaussian width must be a positive real");
  return {KernelFamily::gaussian, input_dim, width, 0, 0.0};
}

Kernel Kernel::polynomial(int input_dim, int degree, double offset) {
  if (degree < 1) throw InvalidArgument("polynomial degree must be a positive integer");
  if (!(offset >= 0) || !std::isfinite(offset)) throw InvalidArgument("polynomial offset must be nonnegative");
  return {KernelFamily::polynomial, input_dim, 0.0, degree, offset};
}

Kernel Kernel::linear(int input_dim) { return {KernelFamily::linear, input_dim, 0.0, 0, 0.0}; }

void Kernel::check_point(const Point& x) const {
  if (x.size() != input_dim_) {
    throw DimensionError("point has dimension " + std::to_string(x.size()) + ", kernel expects " +
                         std::to_string(input_dim_));
  }
}

double Kernel::operator()(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  switch (family_) {
    case KernelFamily::gaussian:
      return std::exp(-(x - y).squaredNorm() / (2.0 * width_ * width_));
    case KernelFamily::polynomial:
      return std::pow(x.dot(y) + offset_, degree_);
    case KernelFamily::linear:
      return x.dot(y);
  }
  return 0.0;
}

Eigen::MatrixXd Kernel::gram(std::span<const Point> points) const {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = (*this)(points[i], points[j]);
    }
  }
  return g;
}

}  // namespace kreg
