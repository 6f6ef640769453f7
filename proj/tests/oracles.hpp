// Independent reference computations used only by the tests.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kreg/extended_real.hpp"

namespace kreg::oracles {

struct Grid2Result {
  Eigen::Vector2d argmin;
  double value = std::numeric_limits<double>::infinity();
};

/// Exhaustive search over [-bound, bound]² at the given step; ties go to the
/// point of smaller Euclidean norm. Rows are scanned one at a time.
inline Grid2Result grid_minimize_2d(const std::function<double(double, double)>& f, double bound, double step) {
  Grid2Result best;
  const long n = std::lround(2 * bound / step);
  for (long i = 0; i <= n; ++i) {
    const double a = -bound + step * static_cast<double>(i);
    for (long j = 0; j <= n; ++j) {
      const double b = -bound + step * static_cast<double>(j);
      const double v = f(a, b);
      if (v < best.value || (v == best.value && a * a + b * b < best.argmin.squaredNorm())) {
        best.value = v;
        best.argmin = {a, b};
      }
    }
  }
  return best;
}

/// min γ|y − Gc|² s.t. cᵀGc ≤ r², from the KKT conditions in the eigenbasis
/// of G: ĉ_i = γ ŷ_i / (γ λ_i + μ), with μ ≥ 0 found by bisection on
/// Σ λ_i ĉ_i² = r². Returns the functional values v = G c.
inline Eigen::VectorXd ivanov_kkt(const Eigen::MatrixXd& g, const Eigen::VectorXd& y, double gamma, double r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const Eigen::VectorXd yh = eig.eigenvectors().transpose() * y;
  const Eigen::VectorXd lam = eig.eigenvalues();
  auto coeffs = [&](double mu) {
    Eigen::VectorXd c(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      c[i] = lam[i] > 1e-12 * lam.maxCoeff() ? gamma * yh[i] / (gamma * lam[i] + mu) : 0.0;
    }
    return c;
  };
  auto norm_sq = [&](double mu) {
    const Eigen::VectorXd c = coeffs(mu);
    return c.dot(lam.cwiseProduct(c));
  };
  double mu = 0.0;
  if (norm_sq(0.0) > r * r) {
    double lo = 0.0;
    double hi = 1.0;
    while (norm_sq(hi) > r * r) hi *= 2;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      (norm_sq(mid) > r * r ? lo : hi) = mid;
    }
    mu = hi;
  }
  return eig.eigenvectors() * lam.cwiseProduct(coeffs(mu));
}

/// (1 + tan²(θ/n))ⁿ in 50-digit arithmetic.
inline double contraction_factor_hp(double theta, long long n) {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 step = cpp_bin_float_50(theta) / n;
  if (step * 2 >= boost::math::constants::pi<cpp_bin_float_50>()) return std::numeric_limits<double>::infinity();
  const cpp_bin_float_50 t = tan(step);
  return static_cast<double>(pow(1 + t * t, static_cast<cpp_bin_float_50>(n)));
}

/// Same product by repeated multiplication, for small n.
inline double contraction_factor_product(double theta, long long n) {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 t = tan(cpp_bin_float_50(theta) / n);
  cpp_bin_float_50 acc = 1;
  for (long long k = 0; k < n; ++k) acc *= 1 + t * t;
  return static_cast<double>(acc);
}

/// Exact soft-margin minimum of gamma * sum hinge(y_i (Gc)_i) + c'Gc by
/// enumerating the 3^l margin patterns (above, on, below). Each pattern gives
/// an equality-constrained quadratic; the optimum is the best candidate.
inline double hinge_active_set(const Eigen::MatrixXd& g, const Eigen::VectorXd& y, double gamma,
                               Eigen::VectorXd* argmin = nullptr) {
  const auto l = g.rows();
  auto objective = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd v = g * c;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) loss += std::max(0.0, 1.0 - y[i] * v[i]);
    return gamma * loss + c.dot(v);
  };
  long long patterns = 1;
  for (Eigen::Index i = 0; i < l; ++i) patterns *= 3;
  double best = std::numeric_limits<double>::infinity();
  for (long long code = 0; code < patterns; ++code) {
    std::vector<Eigen::Index> on;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(l);
    long long rest = code;
    for (Eigen::Index i = 0; i < l; ++i, rest /= 3) {
      if (rest % 3 == 1) on.push_back(i);
      if (rest % 3 == 2) b[i] = y[i];
    }
    // c = (gamma b + E lambda) / 2 with G_on,on lambda = 2 y_on - gamma G_on,. b.
    Eigen::VectorXd c = 0.5 * gamma * b;
    if (!on.empty()) {
      const auto m = static_cast<Eigen::Index>(on.size());
      Eigen::MatrixXd a(m, m);
      Eigen::VectorXd rhs(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        rhs[r] = 2.0 * y[on[r]] - gamma * g.row(on[r]).dot(b);
        for (Eigen::Index s = 0; s < m; ++s) a(r, s) = g(on[r], on[s]);
      }
      const Eigen::VectorXd lambda = a.completeOrthogonalDecomposition().solve(rhs);
      for (Eigen::Index r = 0; r < m; ++r) c[on[r]] += 0.5 * lambda[r];
    }
    const double value = objective(c);
    if (value < best) {
      best = value;
      if (argmin) *argmin = c;
    }
  }
  return best;
}

}  // namespace kreg::oracles
