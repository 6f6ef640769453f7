#include <cmath>
#include <random>

#include "doctest.h"
#include "instances.hpp"
#include "kreg/errors.hpp"
#include "kreg/linalg.hpp"
#include "kreg/oracle.hpp"
#include "kreg/reduction.hpp"
#include "kreg/scalar_search.hpp"
#include "kreg/solvers.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kreg;
using kreg::testing::make_instance;
using kreg::testing::random_expansion;
using kreg::testing::relative_error;
using kreg::testing::vec;

namespace {

const ExtendedReal kInf = ExtendedReal::infinity();

std::vector<LinearFunctional> evals(std::initializer_list<std::initializer_list<double>> pts) {
  std::vector<LinearFunctional> out;
  for (auto p : pts) out.push_back(LinearFunctional::point_eval(vec(p)));
  return out;
}

ReducedProblem identity_problem(LossDescriptor loss, RadialProfile profile, ExtendedReal gamma) {
  // Linear kernel with e1, e2 gives G = I.
  return reduce(Kernel::linear(2), evals({{1, 0}, {0, 1}}), std::move(loss), std::move(profile), gamma);
}

}  // namespace

TEST_CASE("reduced problem construction") {
  const auto p = identity_problem(LossDescriptor::squared({2, 0}), RadialProfile::square(), 1.0);
  CHECK(p.gram() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(p.size() == 2);
  CHECK_THROWS_AS(reduce(Kernel::linear(2), {}, LossDescriptor::kpca(), RadialProfile::square(), 1.0), InvalidArgument);
  CHECK_THROWS_AS(reduce(Kernel::linear(2), evals({{1, 0}}), LossDescriptor::squared({1, 2}), RadialProfile::square(), 1.0),
                  DimensionError);
  CHECK_THROWS_AS(reduce(Kernel::linear(2), evals({{1, 0, 0}}), LossDescriptor::kpca(), RadialProfile::square(), 1.0),
                  DimensionError);
  CHECK_THROWS_AS(reduce(Kernel::linear(2), evals({{1, 0}}), LossDescriptor::squared({1}), RadialProfile::square(), -1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(LossDescriptor::hinge({1, 0.5}), InvalidArgument);
}

TEST_CASE("one-dimensional reduction by substitution") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const auto p = reduce(k, evals({{0.3}}), LossDescriptor::squared({2.0}), RadialProfile::square(), 3.0);
  const double g11 = p.gram()(0, 0);
  for (double c : {-1.0, 0.0, 0.4, 2.5}) {
    const double expected = 3.0 * std::pow(2.0 - g11 * c, 2) + std::pow(std::sqrt(g11) * std::abs(c), 2);
    CHECK(p.objective(vec({c})).value() == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("reduction identity across loss variants") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int ell = 1 + static_cast<int>(seed % 4);
    const auto inst = make_instance(seed, ell, 2, true);
    std::vector<double> targets(static_cast<std::size_t>(ell));
    std::vector<double> labels(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) {
      targets[static_cast<std::size_t>(i)] = n(rng);
      labels[static_cast<std::size_t>(i)] = i % 2 ? 1.0 : -1.0;
    }
    std::vector<LossDescriptor> losses{LossDescriptor::squared(targets), LossDescriptor::hinge(labels),
                                       LossDescriptor::scalar(absolute_distance_to_one())};
    if (ell >= 2) losses.push_back(LossDescriptor::kpca());
    for (const auto& loss : losses) {
      const auto p = reduce(inst.kernel, inst.functionals, loss, RadialProfile::power(1.5), 2.0);
      for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd c(ell);
        for (int i = 0; i < ell; ++i) c[i] = n(rng);
        const ExtendedReal a = p.objective(c);
        const ExtendedReal b = p.functional_objective(p.reconstruct(c));
        if (a.is_finite()) {
          CHECK(relative_error(a.value(), b.value()) <= 1e-9);
        } else {
          CHECK(b.is_infinite());
        }
      }
    }
  }
}

TEST_CASE("projection onto the span never increases J for radial profiles") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (const auto& entry : regularizer_catalogue(2)) {
    if (!entry.regularizer.is_radial()) continue;
    const auto inst = make_instance(5, 3, 2, true);
    const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared({0.5, -0.2, 0.1}),
                          *entry.regularizer.profile(), 1.0);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd c(3);
      for (int i = 0; i < 3; ++i) c[i] = 0.3 * n(rng);
      const auto w = p.reconstruct(c) + 0.3 * random_expansion(rng, inst.kernel, 2);
      const auto u = p.project_onto_span(w);
      CHECK_FALSE(below_by_more_than(p.functional_objective(w), p.functional_objective(u), 1e-9));
      CHECK(norm(u) <= norm(w) + 1e-12);
    }
  }
}

TEST_CASE("regularized least squares") {
  SUBCASE("identity desk instance") {
    const auto r = solve_rls(identity_problem(LossDescriptor::squared({2, 0}), RadialProfile::square(), 1.0));
    CHECK(r.coefficients[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.coefficients[1] == doctest::Approx(0.0));
  }
  SUBCASE("zero targets") {
    const auto inst = make_instance(2, 3, 1, false);
    const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared({0, 0, 0}), RadialProfile::square(), 5.0);
    CHECK(solve_rls(p).coefficients.norm() == 0.0);
  }
  SUBCASE("large gamma approaches interpolation") {
    const auto inst = make_instance(0, 3, 1, false);
    const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared({1, -1, 0.5}), RadialProfile::square(), 1e12);
    const Eigen::VectorXd interp = p.gram().ldlt().solve(vec({1, -1, 0.5}));
    CHECK((solve_rls(p).coefficients - interp).norm() <= 1e-6 * interp.norm());
    const auto exact = reduce(inst.kernel, inst.functionals, LossDescriptor::squared({1, -1, 0.5}), RadialProfile::square(), kInf);
    const auto r = solve_rls(exact);
    CHECK((p.gram() * r.coefficients - vec({1, -1, 0.5})).norm() <= 1e-8);
  }
  SUBCASE("singular gram: jitter or infeasibility") {
    const auto consistent = reduce(Kernel::linear(1), evals({{1}, {1}}), LossDescriptor::squared({2, 2}), RadialProfile::square(), kInf);
    const auto r = solve_rls(consistent);
    CHECK(r.jitter > 0);
    CHECK((consistent.gram() * r.coefficients - vec({2, 2})).norm() <= 1e-8);
    const auto inconsistent = reduce(Kernel::linear(1), evals({{1}, {1}}), LossDescriptor::squared({1, 2}), RadialProfile::square(), kInf);
    CHECK_THROWS_AS(solve_rls(inconsistent), InfeasibleError);
  }
  SUBCASE("matches the multistart oracle") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const int ell = 1 + static_cast<int>(seed % 3);
      const auto inst = make_instance(seed, ell, 1, false);
      std::vector<double> y;
      for (int i = 0; i < ell; ++i) y.push_back(std::sin(1.0 + seed + i));
      const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared(y), RadialProfile::square(), 0.8);
      const auto r = solve_rls(p);
      OracleOptions opt;
      opt.seed = seed;
      opt.max_grid_points = 200'000;
      const auto o = oracle_minimize([&](const Eigen::VectorXd& c) { return p.objective(c); }, ell, opt);
      CHECK(relative_error(r.objective.value(), o.value.value()) <= 1e-6);
      CHECK(r.objective.value() <= o.value.value() + 1e-12);
    }
  }
}

TEST_CASE("support vector machine") {
  SUBCASE("linear kernel, symmetric pair") {
    const auto p = reduce(Kernel::linear(1), evals({{1}, {-1}}), LossDescriptor::hinge({1, -1}), RadialProfile::square(), 10.0);
    const auto r = solve_svm(p);
    CHECK(oracles::hinge_active_set(p.gram(), vec({1, -1}), 10.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.objective.value() == doctest::Approx(1.0).epsilon(1e-9));
    // Minimal-norm representative.
    CHECK(r.coefficients[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.coefficients[1] == doctest::Approx(-0.5).epsilon(1e-6));
  }
  SUBCASE("gaussian pair, grid oracle") {
    const auto p = reduce(Kernel::gaussian(1, 1.0), evals({{0}, {3}}), LossDescriptor::hinge({1, -1}),
                          RadialProfile::square(), 10.0);
    const auto r = solve_svm(p);
    auto f = [&](const Eigen::VectorXd& c) { return p.objective(c); };
    const double g01 = p.gram()(0, 1);
    const auto grid = oracles::grid_minimize_2d(
        [&](double a, double b) {
          const double v0 = a + g01 * b, v1 = g01 * a + b;
          return 10.0 * (std::max(0.0, 1.0 - v0) + std::max(0.0, 1.0 + v1)) + a * v0 + b * v1;
        },
        5.0, 1e-3);
    const auto refined = oracle_refine(f, Eigen::VectorXd(grid.argmin));
    // Symmetric optimum c = (a, -a) with a = 1 / (1 - k), k = exp(-4.5): J = 2 / (1 - k).
    CHECK(refined.value.value() == doctest::Approx(2.0 / (1.0 - std::exp(-4.5))).epsilon(1e-9));
    CHECK(relative_error(r.objective.value(), refined.value.value()) <= 1e-6);
    const Eigen::VectorXd v = p.gram() * r.coefficients;
    CHECK(v[0] >= 1 - 1e-3);
    CHECK(-v[1] >= 1 - 1e-3);
  }
  SUBCASE("single point") {
    const auto p = reduce(Kernel::linear(1), evals({{1}}), LossDescriptor::hinge({1}), RadialProfile::square(), 1e3);
    CHECK(solve_svm(p).coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("gamma zero") {
    const auto p = reduce(Kernel::linear(1), evals({{1}, {-1}}), LossDescriptor::hinge({1, -1}), RadialProfile::square(), 0.0);
    CHECK(solve_svm(p).coefficients.norm() == 0.0);
  }
  SUBCASE("hard margin") {
    const auto p = reduce(Kernel::linear(1), evals({{1}, {-1}}), LossDescriptor::hinge({1, -1}), RadialProfile::square(), kInf);
    const auto r = solve_svm(p);
    CHECK(r.objective.value() == doctest::Approx(1.0).epsilon(1e-8));
    const auto bad = reduce(Kernel::linear(1), evals({{1}, {1}}), LossDescriptor::hinge({1, -1}), RadialProfile::square(), kInf);
    CHECK_THROWS_AS(solve_svm(bad), InfeasibleError);
  }
  SUBCASE("seeded instances against margin-pattern enumeration") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const int ell = 1 + static_cast<int>(seed % 4);
      const auto inst = make_instance(seed, ell, 2, true);
      std::vector<double> labels;
      for (int i = 0; i < ell; ++i) labels.push_back(i % 2 ? -1.0 : 1.0);
      const double gamma = 0.5 + 0.25 * static_cast<double>(seed);
      const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::hinge(labels), RadialProfile::square(), gamma);
      const auto r = solve_svm(p);
      const double exact = oracles::hinge_active_set(p.gram(), Eigen::Map<const Eigen::VectorXd>(labels.data(), ell), gamma);
      INFO("seed " << seed << " solver " << r.objective.value() << " oracle " << exact);
      CHECK(relative_error(r.objective.value(), exact) <= 1e-9);
    }
  }
}

TEST_CASE("kernel PCA") {
  SUBCASE("two symmetric points") {
    const auto p = reduce(Kernel::linear(1), evals({{1}, {-1}}), LossDescriptor::kpca(), RadialProfile::square(), 1.0);
    const auto r = solve_kpca(p);
    CHECK(empirical_variance(p.gram() * r.coefficients) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.coefficients[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.objective.value() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("duplicated point is infeasible") {
    const auto p = reduce(Kernel::linear(2), evals({{1, 2}, {1, 2}}), LossDescriptor::kpca(), RadialProfile::square(), 1.0);
    CHECK_THROWS_AS(solve_kpca(p), InfeasibleError);
  }
  SUBCASE("needs a strictly increasing profile") {
    const auto p = reduce(Kernel::linear(1), evals({{1}, {-1}}), LossDescriptor::kpca(), RadialProfile::indicator_ball(2.0), 1.0);
    CHECK_THROWS_AS(solve_kpca(p), InvalidArgument);
  }
  SUBCASE("beats sampled feasible points") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    const auto inst = make_instance(1, 3, 2, false);
    const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::kpca(), RadialProfile::square(), 1.0);
    const auto r = solve_kpca(p);
    const double solver_norm = std::sqrt(r.coefficients.dot(p.gram() * r.coefficients));
    CHECK(std::abs(empirical_variance(p.gram() * r.coefficients) - 1.0) <= 1e-8);
    for (int t = 0; t < 20000; ++t) {
      Eigen::VectorXd c(3);
      for (int i = 0; i < 3; ++i) c[i] = n(rng);
      c /= std::sqrt(empirical_variance(p.gram() * c));
      CHECK(solver_norm <= std::sqrt(c.dot(p.gram() * c)) + 1e-10);
    }
  }
}

TEST_CASE("Ivanov regularization") {
  const auto inst = make_instance(3, 3, 1, false);
  const std::vector<double> y{1.0, -0.5, 0.8};
  const Eigen::VectorXd yv = vec({1.0, -0.5, 0.8});
  SUBCASE("inactive constraint equals the unconstrained solution") {
    const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared(y), RadialProfile::indicator_ball(100.0), 1.0);
    const auto r = solve_ivanov(p);
    CHECK((p.gram() * r.coefficients - yv).norm() <= 1e-8);
    const auto interp = solve_rls(reduce(inst.kernel, inst.functionals, LossDescriptor::squared(y), RadialProfile::square(), kInf));
    CHECK((r.coefficients - interp.coefficients).norm() <= 1e-6 * interp.coefficients.norm());
  }
  SUBCASE("active constraint sits on the boundary and matches the KKT oracle") {
    for (double radius : {0.1, 0.5, 1.0}) {
      const auto p = reduce(inst.kernel, inst.functionals, LossDescriptor::squared(y), RadialProfile::indicator_ball(radius), 2.0);
      const auto r = solve_ivanov(p);
      CHECK(std::abs(r.coefficients.dot(p.gram() * r.coefficients) - radius * radius) <= 1e-8);
      const Eigen::VectorXd v_oracle = oracles::ivanov_kkt(p.gram(), yv, 2.0, radius);
      const double j_oracle = 2.0 * (yv - v_oracle).squaredNorm();
      CHECK(relative_error(r.objective.value(), j_oracle) <= 1e-8);
    }
  }
  SUBCASE("hinge loss against a constrained grid") {
    const auto p = reduce(Kernel::gaussian(1, 1.0), evals({{0}, {1.5}}), LossDescriptor::hinge({1, -1}),
                          RadialProfile::indicator_ball(0.8), 3.0);
    const auto r = solve_ivanov(p);
    CHECK(r.coefficients.dot(p.gram() * r.coefficients) <= 0.64 + 1e-8);
    auto f = [&](const Eigen::VectorXd& c) { return p.objective(c); };
    const auto grid = oracles::grid_minimize_2d([&](double a, double b) { return f(vec({a, b})).to_double(); }, 3.0, 2e-3);
    const auto refined = oracle_refine(f, Eigen::VectorXd(grid.argmin));
    CHECK(relative_error(r.objective.value(), refined.value.value()) <= 1e-6);
  }
  SUBCASE("bad radius") { CHECK_THROWS_AS(RadialProfile::indicator_ball(-1.0), InvalidArgument); }
}

TEST_CASE("scalar losses") {
  const auto scan = scan_unique_minimizer(hinge_pair(), -10.0, 10.0, 1e-4);
  CHECK(scan.unique_at_one);
  CHECK(scan.value_at_one == 1.5);
  CHECK(scan_unique_minimizer(squared_distance_to_one()).unique_at_one);
  CHECK(scan_unique_minimizer(absolute_distance_to_one()).unique_at_one);
  const ScalarLoss flat{"flat", [](double z) { return std::pow(z * z - 1.0, 2); }, {}};
  CHECK_FALSE(scan_unique_minimizer(flat).unique_at_one);
}

TEST_CASE("scalar family on the ray of p") {
  const Kernel k = Kernel::gaussian(1, 1.0);
  const auto p = KernelExpansion::section(k, vec({0.0}));  // |p| = 1
  for (int e = 0; e <= 40; e += 5) {
    const double gamma = std::ldexp(1.0, e);
    const auto r = solve_scalar_family(p, squared_distance_to_one(), RadialProfile::square(), gamma);
    CHECK(std::abs(r.lambda - gamma / (gamma + 1)) <= 1e-9);
  }
  CHECK(solve_scalar_family(p, squared_distance_to_one(), RadialProfile::square(), 0.0).lambda == 0.0);
  const auto zero = solve_scalar_family(KernelExpansion(k), hinge_pair(), RadialProfile::square(), 3.0);
  CHECK(zero.degenerate);
  CHECK(zero.lambda == 0.0);
  const ScalarLoss flat{"flat", [](double z) { return std::pow(z * z - 1.0, 2); }, {}};
  CHECK_THROWS_AS(solve_scalar_family(p, flat, RadialProfile::square(), 1.0), InvalidArgument);
  // Hinge pair: for λ near 1, γ f(λ) + λ² has slopes −γ/2 + 2 and γ/2 + 2, so λ = 1 once γ > 4.
  const auto hinge = solve_scalar_family(p, hinge_pair(), RadialProfile::square(), 10.0);
  CHECK(hinge.lambda == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dispatch") {
  CHECK(solve(identity_problem(LossDescriptor::squared({2, 0}), RadialProfile::square(), 1.0)).method == "rls");
  CHECK(solve(identity_problem(LossDescriptor::hinge({1, -1}), RadialProfile::square(), 1.0)).method == "svm_dual");
  CHECK(solve(identity_problem(LossDescriptor::kpca(), RadialProfile::square(), 1.0)).method == "kpca_eigen");
  CHECK_THROWS_AS(solve(identity_problem(LossDescriptor::squared({2, 0}), RadialProfile::power(0.5), 1.0)), InvalidArgument);
}
