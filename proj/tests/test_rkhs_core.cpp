#include <cmath>
#include <random>

#include "doctest.h"
#include "kreg/errors.hpp"
#include "kreg/expansion.hpp"
#include "kreg/extended_real.hpp"
#include "kreg/kernel.hpp"
#include "kreg/linalg.hpp"
#include "test_support.hpp"

using namespace kreg;
using kreg::testing::random_expansion;
using kreg::testing::random_point;
using kreg::testing::vec;

TEST_CASE("kernel values") {
  CHECK(Kernel::linear(2)(vec({1, 2}), vec({3, 4})) == 11.0);
  const Kernel g = Kernel::gaussian(3, 0.7);
  CHECK(g(vec({1, -2, 3}), vec({1, -2, 3})) == 1.0);
  // Hand value: exp(-(2^2)/2) = e^-2.
  CHECK(Kernel::gaussian(1, 1.0)(vec({0}), vec({2})) == doctest::Approx(0.1353352832366127).epsilon(1e-15));
  CHECK(Kernel::polynomial(2, 3, 1.0)(vec({1, 1}), vec({2, 0})) == 27.0);
}

TEST_CASE("kernel rejects bad points and parameters") {
  const Kernel k = Kernel::gaussian(2, 1.0);
  CHECK_THROWS_AS(k(vec({1, 2, 3}), vec({1, 2})), DimensionError);
  CHECK_THROWS_AS(Kernel::gaussian(2, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Kernel::gaussian(2, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Kernel::linear(0), InvalidArgument);
}

TEST_CASE("gram matrices of distinct points are symmetric PSD") {
  std::mt19937_64 rng(11);
  for (const Kernel& k : {Kernel::gaussian(2, 0.5), Kernel::polynomial(2, 2, 1.0), Kernel::linear(2)}) {
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(random_point(rng, 2));
    const Eigen::MatrixXd g = k.gram(pts);
    CHECK(is_symmetric(g, 0.0));
    CHECK(min_eigenvalue(g) >= -psd_tolerance(g));
  }
}

TEST_CASE("expansion evaluation") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const Point x = vec({0.3});
  CHECK(KernelExpansion(k)(x) == 0.0);
  CHECK(KernelExpansion::section(k, vec({1.0}))(x) == k(vec({1.0}), x));
  const auto a = KernelExpansion::section(k, vec({1.0}));
  const auto b = 2.0 * KernelExpansion::section(k, vec({-1.0}));
  CHECK((a + b)(x) == doctest::Approx(a(x) + b(x)).epsilon(1e-15));
  CHECK((a - a)(x) == 0.0);
  CHECK_THROWS_AS(a(vec({1.0, 2.0})), DimensionError);
}

TEST_CASE("inner products and norms") {
  const Kernel g = Kernel::gaussian(2, 1.3);
  const Point x = vec({0.1, 0.2});
  const Point y = vec({-1.0, 0.5});
  const auto kx = KernelExpansion::section(g, x);
  CHECK(inner_product(kx, KernelExpansion::section(g, y)) == g(x, y));
  CHECK(inner_product(kx - kx, kx - kx) == doctest::Approx(0.0));
  CHECK(norm(KernelExpansion(g)) == 0.0);
  CHECK(norm(kx) == 1.0);
  CHECK(norm(2.0 * KernelExpansion::section(Kernel::linear(2), vec({3, 4}))) == doctest::Approx(10.0));
  CHECK_THROWS_AS(inner_product(kx, KernelExpansion::section(Kernel::gaussian(2, 2.0), x)), DimensionError);
}

TEST_CASE("linear kernel inner product equals the feature-space dot product") {
  std::mt19937_64 rng(5);
  const Kernel k = Kernel::linear(3);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_expansion(rng, k, 3);
    const auto v = random_expansion(rng, k, 3);
    Eigen::VectorXd fu = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd fv = Eigen::VectorXd::Zero(3);
    for (std::size_t i = 0; i < 3; ++i) {
      fu += u.coefficients()[static_cast<Eigen::Index>(i)] * u.centers()[i];
      fv += v.coefficients()[static_cast<Eigen::Index>(i)] * v.centers()[i];
    }
    CHECK(inner_product(u, v) == doctest::Approx(fu.dot(fv)).epsilon(1e-12));
  }
}

TEST_CASE("reproducing property, Cauchy-Schwarz, Pythagoras") {
  std::mt19937_64 rng(17);
  const Kernel k = Kernel::gaussian(2, 0.8);
  for (int t = 0; t < 50; ++t) {
    const auto u = random_expansion(rng, k, 4);
    const auto v = random_expansion(rng, k, 5);
    const Point x = random_point(rng, 2);
    CHECK(std::abs(u(x) - inner_product(u, KernelExpansion::section(k, x))) <= 1e-9);
    CHECK(std::abs(inner_product(u, v)) <= norm(u) * norm(v) + 1e-9);
    CHECK(inner_product(u, u) >= -1e-8);
    // Gram-Schmidt: v_perp = v - <v,u>/<u,u> u.
    const auto v_perp = v - (inner_product(v, u) / inner_product(u, u)) * u;
    const double lhs = std::pow(norm(u + v_perp), 2);
    CHECK(std::abs(lhs - std::pow(norm(u), 2) - std::pow(norm(v_perp), 2)) <= 1e-9 * std::max(1.0, lhs));
  }
}

TEST_CASE("compaction keeps the function") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const auto a = KernelExpansion::section(k, vec({0.0}));
  const auto b = KernelExpansion::section(k, vec({1.0}));
  const auto w = a + b + a - b;
  const auto c = w.compacted();
  CHECK(c.size() == 1);
  CHECK(c(vec({0.4})) == doctest::Approx(w(vec({0.4}))));
}

TEST_CASE("extended reals") {
  const ExtendedReal inf = ExtendedReal::infinity();
  CHECK((ExtendedReal(1.0) + inf).is_infinite());
  CHECK(0.0 * inf == ExtendedReal(0.0));
  CHECK(scale(ExtendedReal(0.0), inf) == ExtendedReal(0.0));
  CHECK(scale(inf, ExtendedReal(2.0)).is_infinite());
  CHECK(ExtendedReal(5.0) < inf);
  CHECK(below_by_more_than(ExtendedReal(1.0), inf, 1e-9));
  CHECK_FALSE(below_by_more_than(inf, inf, 1e-9));
  CHECK(nearly_equal(inf, inf, 0.0));
  CHECK(ExtendedReal(HUGE_VAL).is_infinite());
  CHECK_THROWS_AS(ExtendedReal(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(ExtendedReal(-HUGE_VAL), InvalidArgument);
  CHECK_THROWS_AS(inf.value(), InvalidArgument);
}
