#include <cmath>
#include <random>

#include "doctest.h"
#include "kreg/errors.hpp"
#include "kreg/functional.hpp"
#include "kreg/linalg.hpp"
#include "test_support.hpp"

using namespace kreg;
using kreg::testing::random_expansion;
using kreg::testing::random_point;
using kreg::testing::vec;

namespace {

LinearFunctional box_convolution(int nodes, double step, const Point& at) {
  UniformGrid grid{vec({0.0}), step, {nodes}};
  return LinearFunctional::convolution(grid, std::vector<double>(static_cast<std::size_t>(nodes), 1.0), at);
}

std::vector<LinearFunctional> mixed_functionals(std::mt19937_64& rng, int dim) {
  std::vector<LinearFunctional> out;
  out.push_back(LinearFunctional::point_eval(random_point(rng, dim)));
  out.push_back(LinearFunctional::expectation(
      DiscreteMeasure({random_point(rng, dim), random_point(rng, dim), random_point(rng, dim)}, {0.2, 0.3, 0.5})));
  UniformGrid grid{random_point(rng, dim, 0.5), 0.25, std::vector<int>(static_cast<std::size_t>(dim), 4)};
  std::vector<double> signal(grid.size());
  std::normal_distribution<double> n;
  for (double& s : signal) s = n(rng);
  out.push_back(LinearFunctional::convolution(grid, signal, random_point(rng, dim)));
  return out;
}

}  // namespace

TEST_CASE("point evaluation and delta measures") {
  const Kernel k = Kernel::gaussian(2, 1.0);
  const Point z = vec({0.5, -0.5});
  const Point x = vec({1.0, 2.0});
  const auto kz = KernelExpansion::section(k, z);
  CHECK(apply(LinearFunctional::point_eval(x), kz) == k(z, x));
  CHECK(apply(LinearFunctional::expectation(DiscreteMeasure({x}, {1.0})), kz) == k(z, x));
}

TEST_CASE("representers") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const Point a = vec({0.0});
  const Point b = vec({2.0});
  const auto r = representer(LinearFunctional::point_eval(a), k);
  CHECK(r.size() == 1);
  CHECK(r.centers()[0] == a);
  CHECK(r.coefficients()[0] == 1.0);
  CHECK(norm(r) == 1.0);
  const auto e = representer(LinearFunctional::expectation(DiscreteMeasure({a, b}, {0.5, 0.5})), k);
  const auto expected = 0.5 * KernelExpansion::section(k, a) + 0.5 * KernelExpansion::section(k, b);
  for (double x : {-1.0, 0.0, 0.7, 3.0}) CHECK(e(vec({x})) == doctest::Approx(expected(vec({x}))).epsilon(1e-15));
  CHECK_THROWS_AS(representer(LinearFunctional::point_eval(vec({1.0, 2.0})), k), DimensionError);
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(DiscreteMeasure({vec({0.0})}, {0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure({vec({0.0}), vec({1.0})}, {1.5, -0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure({vec({0.0}), vec({0.0})}, {0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure({vec({0.0}), vec({0.0, 1.0})}, {0.5, 0.5}), DimensionError);
}

TEST_CASE("box convolution matches a finer independent quadrature") {
  // w = K_z with a wide gaussian, nearly constant over the box.
  const Kernel k = Kernel::gaussian(1, 10.0);
  const auto w = KernelExpansion::section(k, vec({0.3}));
  const Point x = vec({0.5});
  const double coarse = apply(box_convolution(100, 0.01, x), w);
  // Midpoint rule at step 0.005 on ∫_0^1 w(x − s) ds.
  double fine = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double s = (i + 0.5) * 0.005;
    fine += std::exp(-std::pow(0.5 - s - 0.3, 2) / 200.0) * 0.005;
  }
  CHECK(std::abs(coarse - fine) <= 1e-3);
  CHECK(std::abs(coarse - 1.0) <= 1e-2);
}

TEST_CASE("Riesz consistency for every variant") {
  std::mt19937_64 rng(3);
  for (int dim : {1, 2}) {
    const Kernel k = Kernel::gaussian(dim, 0.9);
    const auto fs = mixed_functionals(rng, dim);
    for (const auto& f : fs) {
      const auto r = representer(f, k);
      for (int t = 0; t < 100; ++t) {
        const auto w = random_expansion(rng, k, 3);
        CHECK(std::abs(apply(f, w) - inner_product(w, r)) <= 1e-9);
      }
      // L K_x = K_L(x).
      const Point x = random_point(rng, dim);
      CHECK(std::abs(apply(f, KernelExpansion::section(k, x)) - r(x)) <= 1e-9);
    }
  }
}

TEST_CASE("linearity of functionals") {
  std::mt19937_64 rng(8);
  const Kernel k = Kernel::polynomial(2, 2, 1.0);
  for (const auto& f : mixed_functionals(rng, 2)) {
    const auto u = random_expansion(rng, k, 3);
    const auto v = random_expansion(rng, k, 2);
    const double lhs = apply(f, 1.5 * u + (-0.25) * v);
    const double rhs = 1.5 * apply(f, u) - 0.25 * apply(f, v);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("gram matrices") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const std::vector<Point> pts{vec({0.0}), vec({1.0}), vec({2.5})};
  std::vector<LinearFunctional> evals;
  for (const auto& p : pts) evals.push_back(LinearFunctional::point_eval(p));
  CHECK((gram_matrix(k, evals) - k.gram(pts)).cwiseAbs().maxCoeff() <= 1e-15);

  const auto single = gram_matrix(k, std::vector{evals[1]});
  CHECK(single.rows() == 1);
  CHECK(single(0, 0) == 1.0);

  const Eigen::MatrixXd dup = gram_matrix(k, std::vector{evals[0], evals[0]});
  CHECK(std::abs(dup.determinant()) <= 1e-15);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto fs = mixed_functionals(rng, 2);
    const Kernel k2 = Kernel::gaussian(2, 0.6);
    const Eigen::MatrixXd g = gram_matrix(k2, fs);
    CHECK(is_symmetric(g, 1e-12));
    CHECK(min_eigenvalue(g) >= -psd_tolerance(g));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t j = 0; j < fs.size(); ++j) {
        const double via_inner = inner_product(representer(fs[i], k2), representer(fs[j], k2));
        CHECK(std::abs(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - via_inner) <= 1e-9);
      }
    }
  }
}
