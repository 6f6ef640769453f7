#include "kreg/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "kreg/errors.hpp"

namespace kreg {

namespace {

void require_same_kernel(const KernelExpansion& u, const KernelExpansion& v) {
  if (!(u.kernel() == v.kernel())) throw DimensionError("expansions belong to different kernels");
}

}  // namespace

KernelExpansion::KernelExpansion(Kernel kernel) : kernel_(std::move(kernel)), coefficients_(0) {}

KernelExpansion::KernelExpansion(Kernel kernel, std::vector<Point> centers, Eigen::VectorXd coefficients)
    : kernel_(std::move(kernel)), centers_(std::move(centers)), coefficients_(std::move(coefficients)) {
  if (static_cast<Eigen::Index>(centers_.size()) != coefficients_.size()) {
    throw InvalidArgument("expansion needs one coefficient per center");
  }
  for (const auto& z : centers_) kernel_.check_point(z);
}

KernelExpansion KernelExpansion::section(const Kernel& kernel, const Point& x) {
  return {kernel, {x}, Eigen::VectorXd::Ones(1)};
}

double KernelExpansion::operator()(const Point& x) const {
  kernel_.check_point(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    sum += coefficients_[static_cast<Eigen::Index>(i)] * kernel_(centers_[i], x);
  }
  return sum;
}

KernelExpansion KernelExpansion::operator+(const KernelExpansion& other) const {
  require_same_kernel(*this, other);
  std::vector<Point> centers = centers_;
  centers.insert(centers.end(), other.centers_.begin(), other.centers_.end());
  Eigen::VectorXd coefficients(coefficients_.size() + other.coefficients_.size());
  coefficients << coefficients_, other.coefficients_;
  return {kernel_, std::move(centers), std::move(coefficients)};
}

KernelExpansion KernelExpansion::operator-(const KernelExpansion& other) const { return *this + (-other); }

KernelExpansion KernelExpansion::operator-() const { return -1.0 * *this; }

KernelExpansion operator*(double factor, const KernelExpansion& w) {
  return {w.kernel_, w.centers_, factor * w.coefficients_};
}

KernelExpansion KernelExpansion::compacted() const {
  std::vector<Point> centers;
  std::vector<double> coefficients;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const auto it = std::find_if(centers.begin(), centers.end(),
                                 [&](const Point& z) { return z == centers_[i]; });
    if (it == centers.end()) {
      centers.push_back(centers_[i]);
      coefficients.push_back(coefficients_[static_cast<Eigen::Index>(i)]);
    } else {
      coefficients[static_cast<std::size_t>(it - centers.begin())] += coefficients_[static_cast<Eigen::Index>(i)];
    }
  }
  std::vector<Point> kept_centers;
  std::vector<double> kept;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (coefficients[i] != 0.0) {
      kept_centers.push_back(centers[i]);
      kept.push_back(coefficients[i]);
    }
  }
  return {kernel_, std::move(kept_centers), Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()))};
}

Eigen::MatrixXd cross_kernel(const KernelExpansion& u, const KernelExpansion& v) {
  require_same_kernel(u, v);
  const auto m = static_cast<Eigen::Index>(u.size());
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd k(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = u.kernel()(u.centers()[i], v.centers()[j]);
  }
  return k;
}

double inner_product(const KernelExpansion& u, const KernelExpansion& v) {
  if (u.empty() || v.empty()) {
    require_same_kernel(u, v);
    return 0.0;
  }
  return u.coefficients().dot(cross_kernel(u, v) * v.coefficients());
}

double norm(const KernelExpansion& w) { return std::sqrt(std::max(0.0, inner_product(w, w))); }

}  // namespace kreg
