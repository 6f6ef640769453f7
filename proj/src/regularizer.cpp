#include "kreg/regularizer.hpp"

#include <algorithm>
#include <cmath>

#include "kreg/errors.hpp"
#include "kreg/rng.hpp"
#include "overloaded.hpp"

namespace kreg {

using detail::overloaded;

RadialProfile RadialProfile::square() { return RadialProfile(Square{}); }

RadialProfile RadialProfile::power(double p) {
  if (!(p >= 0) || !std::isfinite(p)) throw InvalidArgument("power profile exponent must be a nonnegative real");
  return RadialProfile(Power{p});
}

RadialProfile RadialProfile::table(std::vector<double> knots, std::vector<ExtendedReal> values) {
  if (knots.empty() || knots.size() != values.size()) {
    throw InvalidArgument("table profile needs matching, nonempty knots and values");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] >= 0) || !std::isfinite(knots[i])) throw InvalidArgument("table knots must be finite and nonnegative");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw InvalidArgument("table knots must be strictly increasing");
    if (i > 0 && values[i] < values[i - 1]) throw InvalidArgument("table values must be nondecreasing");
  }
  return RadialProfile(Table{std::move(knots), std::move(values)});
}

RadialProfile RadialProfile::indicator_ball(double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvalidArgument("indicator ball radius must be positive");
  return RadialProfile(IndicatorBall{radius});
}

std::string RadialProfile::name() const {
  return std::visit(overloaded{
                        [](const Square&) -> std::string { return "square"; },
                        [](const Power& p) { return "power(" + ExtendedReal(p.p).to_string() + ")"; },
                        [](const Table&) -> std::string { return "table"; },
                        [](const IndicatorBall& b) { return "indicator_ball(" + ExtendedReal(b.radius).to_string() + ")"; },
                    },
                    variant_);
}

ExtendedReal RadialProfile::operator()(double t) const {
  if (!(t >= 0)) throw InvalidArgument("radial profile evaluated at a negative or NaN argument");
  return std::visit(overloaded{
                        [&](const Square&) { return ExtendedReal(t * t); },
                        [&](const Power& p) { return ExtendedReal(p.p == 0.0 ? 1.0 : std::pow(t, p.p)); },
                        [&](const Table& table) {
                          const auto it = std::lower_bound(table.knots.begin(), table.knots.end(), t);
                          if (it == table.knots.end()) return table.values.back();
                          return table.values[static_cast<std::size_t>(it - table.knots.begin())];
                        },
                        [&](const IndicatorBall& b) { return t <= b.radius ? ExtendedReal(0.0) : ExtendedReal::infinity(); },
                    },
                    variant_);
}

std::optional<double> RadialProfile::derivative(double t) const {
  return std::visit(overloaded{
                        [&](const Square&) -> std::optional<double> { return 2.0 * t; },
                        [&](const Power& p) -> std::optional<double> {
                          if (p.p == 0.0) return 0.0;
                          if (t > 0) return p.p * std::pow(t, p.p - 1.0);
                          if (p.p > 1.0) return 0.0;
                          if (p.p == 1.0) return 1.0;
                          return std::nullopt;
                        },
                        [](const Table&) -> std::optional<double> { return std::nullopt; },
                        [](const IndicatorBall&) -> std::optional<double> { return std::nullopt; },
                    },
                    variant_);
}

Regularizer Regularizer::radial(RadialProfile profile) { return Regularizer(std::move(profile)); }

Regularizer Regularizer::anisotropic_quadratic(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw InvalidArgument("anisotropic quadratic needs weights");
  for (double a : weights) {
    if (!(a > 0) || !std::isfinite(a)) throw InvalidArgument("anisotropic weights must be positive");
  }
  if (weights.maxCoeff() == weights.minCoeff()) {
    throw InvalidArgument("anisotropic weights must not all be equal (that would be radial)");
  }
  return Regularizer(AnisotropicQuadratic{std::move(weights)});
}

Regularizer Regularizer::shifted_norm(Eigen::VectorXd center) {
  if (center.size() < 1 || center.norm() == 0.0) throw InvalidArgument("shifted norm needs a nonzero center");
  return Regularizer(ShiftedNorm{std::move(center)});
}

Regularizer Regularizer::custom(std::string name, int dimension, std::function<ExtendedReal(const Eigen::VectorXd&)> fn) {
  if (dimension < 1) throw InvalidArgument("custom regularizer dimension must be positive");
  if (!fn) throw InvalidArgument("custom regularizer needs a function");
  return Regularizer(CustomRegularizer{std::move(name), dimension, std::move(fn)});
}

std::optional<int> Regularizer::dimension() const {
  return std::visit(overloaded{
                        [](const RadialProfile&) -> std::optional<int> { return std::nullopt; },
                        [](const AnisotropicQuadratic& q) -> std::optional<int> { return static_cast<int>(q.weights.size()); },
                        [](const ShiftedNorm& s) -> std::optional<int> { return static_cast<int>(s.center.size()); },
                        [](const CustomRegularizer& c) -> std::optional<int> { return c.dimension; },
                    },
                    variant_);
}

std::string Regularizer::name() const {
  return std::visit(overloaded{
                        [](const RadialProfile& p) { return "radial:" + p.name(); },
                        [](const AnisotropicQuadratic&) -> std::string { return "anisotropic_quadratic"; },
                        [](const ShiftedNorm&) -> std::string { return "shifted_norm"; },
                        [](const CustomRegularizer& c) { return "custom:" + c.name; },
                    },
                    variant_);
}

ExtendedReal Regularizer::operator()(const Eigen::VectorXd& w) const {
  if (const auto dim = dimension(); dim && *dim != w.size()) {
    throw DimensionError("regularizer lives on R^" + std::to_string(*dim) + ", argument is in R^" +
                         std::to_string(w.size()));
  }
  return std::visit(overloaded{
                        [&](const RadialProfile& p) { return p(w.norm()); },
                        [&](const AnisotropicQuadratic& q) { return ExtendedReal(q.weights.dot(w.cwiseAbs2())); },
                        [&](const ShiftedNorm& s) { return ExtendedReal((w - s.center).norm()); },
                        [&](const CustomRegularizer& c) { return c.fn(w); },
                    },
                    variant_);
}

ExtendedReal Regularizer::operator()(const KernelExpansion& w) const {
  const auto* p = profile();
  if (p == nullptr) throw InvalidArgument(name() + " is defined on R^n, not on kernel expansions");
  return (*p)(norm(w));
}

std::optional<double> Regularizer::ray_derivative(const Eigen::VectorXd& x, double lambda) const {
  return std::visit(overloaded{
                        [&](const RadialProfile& p) -> std::optional<double> {
                          const double r = x.norm();
                          const auto d = p.derivative(std::abs(lambda) * r);
                          if (!d) return std::nullopt;
                          if (lambda == 0.0) return r == 0.0 || *d == 0.0 ? std::optional<double>(0.0) : std::nullopt;
                          return (lambda > 0 ? 1.0 : -1.0) * r * *d;
                        },
                        [&](const AnisotropicQuadratic& q) -> std::optional<double> {
                          return 2.0 * lambda * q.weights.dot(x.cwiseAbs2());
                        },
                        [](const ShiftedNorm&) -> std::optional<double> { return std::nullopt; },
                        [](const CustomRegularizer&) -> std::optional<double> { return std::nullopt; },
                    },
                    variant_);
}

namespace {

void require_model_dimension(const Regularizer& r, int dim) {
  if (dim < 1) throw InvalidArgument("model dimension must be positive");
  if (const auto d = r.dimension(); d && *d != dim) {
    throw DimensionError(r.name() + " lives on R^" + std::to_string(*d) + ", check requested on R^" +
                         std::to_string(dim));
  }
}

void record(CheckReport& report, CheckTrial row) {
  if (row.violated) {
    ++report.violations;
    report.holds = false;
    if (!report.witness) report.witness = row;
  }
  report.rows.push_back(std::move(row));
}

}  // namespace

CheckReport check_orthogonal_monotonicity(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                          double tol) {
  if (dim < 2) throw InvalidArgument("orthogonal monotonicity needs dim >= 2");
  require_model_dimension(r, dim);
  CheckReport report{.check = "orthogonal_monotonicity", .seed = seed, .trials = trials};
  report.rows.reserve(2 * trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, streams::orthogonal_check, t);
    const Eigen::VectorXd x = sample_probe_vector(rng, dim);
    const Eigen::VectorXd drawn = sample_probe_vector(rng, dim);
    Eigen::VectorXd y = drawn - (drawn.dot(x) / x.squaredNorm()) * x;
    if (y.norm() > 0) y *= drawn.norm() / y.norm();
    for (const double sign : {1.0, -1.0}) {
      const Eigen::VectorXd ys = sign * y;
      const ExtendedReal lhs = r(x + ys);
      const ExtendedReal rhs = max(r(x), r(ys));
      record(report, {.trial = t, .x = x, .y = ys, .scale = sign, .lhs = lhs, .rhs = rhs,
                      .violated = below_by_more_than(lhs, rhs, tol)});
    }
  }
  return report;
}

CheckReport check_ray_monotonicity(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed, double tol) {
  require_model_dimension(r, dim);
  CheckReport report{.check = "ray_monotonicity", .seed = seed, .trials = trials};
  report.rows.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, streams::ray_check, t);
    const Eigen::VectorXd x = sample_probe_vector(rng, dim);
    // Every tenth trial probes the origin, where a misplaced minimum shows.
    const double lambda = t % 10 == 0 ? 0.0 : std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const ExtendedReal lhs = r(x);
    const ExtendedReal rhs = r(Eigen::VectorXd(lambda * x));
    record(report, {.trial = t, .x = x, .y = lambda * x, .scale = lambda, .lhs = lhs, .rhs = rhs,
                    .violated = below_by_more_than(lhs, rhs, tol)});
  }
  return report;
}

CheckReport check_equal_norm_invariance(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                        double tol) {
  require_model_dimension(r, dim);
  CheckReport report{.check = "equal_norm_invariance", .seed = seed, .trials = trials};
  report.rows.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, streams::equal_norm_check, t);
    const Eigen::VectorXd x = sample_probe_vector(rng, dim);
    Eigen::VectorXd y = sample_normal(rng, dim);
    while (y.norm() == 0.0) y = sample_normal(rng, dim);
    y *= x.norm() / y.norm();
    const ExtendedReal lhs = r(x);
    const ExtendedReal rhs = r(y);
    record(report, {.trial = t, .x = x, .y = y, .scale = 1.0, .lhs = lhs, .rhs = rhs,
                    .violated = !nearly_equal(lhs, rhs, tol)});
  }
  return report;
}

RadialityVerdict check_radial_nondecreasing(const Regularizer& r, int dim, std::size_t trials, std::uint64_t seed,
                                            double tol) {
  return {check_equal_norm_invariance(r, dim, trials, seed, tol), check_ray_monotonicity(r, dim, trials, seed, tol)};
}

std::vector<CatalogueEntry> regularizer_catalogue(int dim) {
  if (dim < 2) throw InvalidArgument("catalogue needs dim >= 2");
  Eigen::VectorXd weights(dim);
  for (int i = 0; i < dim; ++i) weights[i] = static_cast<double>((i + 1) * (i + 1));
  Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
  center[0] = 1.0;
  return {
      {"square", Regularizer::radial(RadialProfile::square())},
      {"norm", Regularizer::radial(RadialProfile::power(1.0))},
      {"sqrt_norm", Regularizer::radial(RadialProfile::power(0.5))},
      {"step_table", Regularizer::radial(RadialProfile::table({0.5, 1.0, 2.0, 4.0},
                                                              {0.0, 0.5, 2.0, ExtendedReal::infinity()}))},
      {"unit_ball_indicator", Regularizer::radial(RadialProfile::indicator_ball(1.0))},
      {"anisotropic_quadratic", Regularizer::anisotropic_quadratic(weights)},
      {"shifted_norm", Regularizer::shifted_norm(center)},
  };
}

}  // namespace kreg
