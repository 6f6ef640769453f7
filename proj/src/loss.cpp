#include "kreg/loss.hpp"

#include <algorithm>
#include <cmath>

#include "kreg/errors.hpp"
#include "overloaded.hpp"

namespace kreg {

using detail::overloaded;

ScalarLoss squared_distance_to_one() {
  return {"squared", [](double z) { return (z - 1.0) * (z - 1.0); }, [](double z) { return 2.0 * (z - 1.0); }};
}

ScalarLoss absolute_distance_to_one() {
  return {"absolute", [](double z) { return std::abs(z - 1.0); }, {}};
}

ScalarLoss hinge_pair() {
  return {"hinge_pair", [](double z) { return std::max(0.0, 1.0 - z) + std::max(0.0, 1.0 + z / 2.0); }, {}};
}

std::optional<ScalarLoss> scalar_loss_by_name(const std::string& name) {
  if (name == "squared") return squared_distance_to_one();
  if (name == "absolute") return absolute_distance_to_one();
  if (name == "hinge_pair") return hinge_pair();
  return std::nullopt;
}

UniqueMinimizerScan scan_unique_minimizer(const ScalarLoss& f, double lo, double hi, double step) {
  if (!(step > 0) || !(hi > lo)) throw InvalidArgument("scan needs lo < hi and a positive step");
  UniqueMinimizerScan scan;
  scan.value_at_one = f(1.0);
  scan.best_other_value = HUGE_VAL;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double z = lo + static_cast<double>(k) * step;
    if (std::abs(z - 1.0) < step / 2) continue;
    const double v = f(z);
    if (v < scan.best_other_value) {
      scan.best_other_value = v;
      scan.best_other_z = z;
    }
  }
  scan.points = count;
  scan.unique_at_one = scan.value_at_one < scan.best_other_value;
  return scan;
}

LossDescriptor LossDescriptor::squared(std::vector<double> targets) {
  for (double y : targets) {
    if (!std::isfinite(y)) throw InvalidArgument("squared-loss targets must be finite");
  }
  return LossDescriptor(SquaredLoss{std::move(targets)});
}

LossDescriptor LossDescriptor::hinge(std::vector<double> labels) {
  for (double y : labels) {
    if (y != 1.0 && y != -1.0) throw InvalidArgument("hinge labels must be +1 or -1");
  }
  return LossDescriptor(HingeLoss{std::move(labels)});
}

LossDescriptor LossDescriptor::kpca() { return LossDescriptor(KpcaConstraint{}); }

LossDescriptor LossDescriptor::scalar(ScalarLoss f) {
  if (!f.value) throw InvalidArgument("scalar loss needs a function");
  return LossDescriptor(ScalarFamily{std::move(f)});
}

std::string LossDescriptor::name() const {
  return std::visit(overloaded{
                        [](const SquaredLoss&) -> std::string { return "squared"; },
                        [](const HingeLoss&) -> std::string { return "hinge"; },
                        [](const KpcaConstraint&) -> std::string { return "kpca"; },
                        [](const ScalarFamily& s) { return "scalar_f:" + s.f.name; },
                    },
                    variant_);
}

bool LossDescriptor::is_convex() const {
  return std::holds_alternative<SquaredLoss>(variant_) || std::holds_alternative<HingeLoss>(variant_);
}

std::optional<std::size_t> LossDescriptor::expected_size() const {
  return std::visit(overloaded{
                        [](const SquaredLoss& s) -> std::optional<std::size_t> { return s.targets.size(); },
                        [](const HingeLoss& h) -> std::optional<std::size_t> { return h.labels.size(); },
                        [](const KpcaConstraint&) -> std::optional<std::size_t> { return std::nullopt; },
                        [](const ScalarFamily&) -> std::optional<std::size_t> { return std::nullopt; },
                    },
                    variant_);
}

double empirical_variance(const Eigen::VectorXd& values) {
  if (values.size() == 0) return 0.0;
  const double mean = values.mean();
  return (values.array() - mean).square().mean();
}

ExtendedReal LossDescriptor::evaluate(const Eigen::VectorXd& values, ExtendedReal gamma) const {
  if (gamma < ExtendedReal(0.0)) throw InvalidArgument("loss weight must be nonnegative");
  if (const auto n = expected_size(); n && *n != static_cast<std::size_t>(values.size())) {
    throw DimensionError("loss expects " + std::to_string(*n) + " functional values, got " +
                         std::to_string(values.size()));
  }
  return std::visit(overloaded{
                        [&](const SquaredLoss& s) {
                          if (gamma.is_infinite()) {
                            for (Eigen::Index i = 0; i < values.size(); ++i) {
                              if (std::abs(s.targets[static_cast<std::size_t>(i)] - values[i]) > kHardConstraintTolerance) {
                                return ExtendedReal::infinity();
                              }
                            }
                            return ExtendedReal(0.0);
                          }
                          double sum = 0.0;
                          for (Eigen::Index i = 0; i < values.size(); ++i) {
                            const double r = s.targets[static_cast<std::size_t>(i)] - values[i];
                            sum += r * r;
                          }
                          return scale(gamma, ExtendedReal(sum));
                        },
                        [&](const HingeLoss& h) {
                          if (gamma.is_infinite()) {
                            for (Eigen::Index i = 0; i < values.size(); ++i) {
                              if (h.labels[static_cast<std::size_t>(i)] * values[i] < 1.0 - kHardConstraintTolerance) {
                                return ExtendedReal::infinity();
                              }
                            }
                            return ExtendedReal(0.0);
                          }
                          double sum = 0.0;
                          for (Eigen::Index i = 0; i < values.size(); ++i) {
                            sum += std::max(0.0, 1.0 - h.labels[static_cast<std::size_t>(i)] * values[i]);
                          }
                          return scale(gamma, ExtendedReal(sum));
                        },
                        [&](const KpcaConstraint&) {
                          return std::abs(empirical_variance(values) - 1.0) <= kKpcaVarianceTolerance
                                     ? ExtendedReal(0.0)
                                     : ExtendedReal::infinity();
                        },
                        [&](const ScalarFamily& s) {
                          double sum = 0.0;
                          for (double v : values) sum += s.f(v);
                          return scale(gamma, ExtendedReal(sum));
                        },
                    },
                    variant_);
}

}  // namespace kreg
