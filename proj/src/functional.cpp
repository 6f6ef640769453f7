#include "kreg/functional.hpp"

#include <cmath>
#include <numeric>

#include "kreg/errors.hpp"
#include "overloaded.hpp"

namespace kreg {

using detail::overloaded;

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw InvalidArgument("discrete measure needs at least one atom");
  if (atoms_.size() != weights_.size()) throw InvalidArgument("discrete measure needs one weight per atom");
  for (double p : weights_) {
    if (!(p >= 0) || !std::isfinite(p)) throw InvalidArgument("measure weights must be nonnegative");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("measure weights must sum to 1");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].size() != atoms_.front().size()) throw DimensionError("measure atoms differ in dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms_[i] == atoms_[j]) throw InvalidArgument("measure atoms must be distinct");
    }
  }
}

std::size_t UniformGrid::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

Point UniformGrid::node(std::size_t index) const {
  Point p = origin;
  for (int axis = dimension() - 1; axis >= 0; --axis) {
    const auto extent = static_cast<std::size_t>(shape[static_cast<std::size_t>(axis)]);
    p[axis] += step * static_cast<double>(index % extent);
    index /= extent;
  }
  return p;
}

double UniformGrid::cell_volume() const { return std::pow(step, dimension()); }

LinearFunctional LinearFunctional::point_eval(Point x) {
  if (x.size() < 1) throw DimensionError("evaluation point must be nonempty");
  return LinearFunctional(PointEvaluation{std::move(x)});
}

LinearFunctional LinearFunctional::convolution(UniformGrid grid, std::vector<double> signal, Point eval_point) {
  if (grid.origin.size() < 1) throw DimensionError("signal grid origin must be nonempty");
  if (static_cast<int>(grid.shape.size()) != grid.dimension()) {
    throw DimensionError("signal grid shape must list one extent per axis");
  }
  for (int s : grid.shape) {
    if (s < 1) throw InvalidArgument("signal grid extents must be positive");
  }
  if (!(grid.step > 0) || !std::isfinite(grid.step)) throw InvalidArgument("signal grid step must be positive");
  if (signal.size() != grid.size()) throw InvalidArgument("signal needs one value per grid node");
  if (eval_point.size() != grid.dimension()) throw DimensionError("convolution eval_point dimension differs from grid");
  return LinearFunctional(Convolution{std::move(grid), std::move(signal), std::move(eval_point)});
}

LinearFunctional LinearFunctional::expectation(DiscreteMeasure measure) {
  return LinearFunctional(Expectation{std::move(measure)});
}

int LinearFunctional::input_dim() const {
  return std::visit(overloaded{
                        [](const PointEvaluation& f) { return static_cast<int>(f.point.size()); },
                        [](const Convolution& f) { return f.grid.dimension(); },
                        [](const Expectation& f) { return f.measure.dimension(); },
                    },
                    variant_);
}

double apply(const LinearFunctional& functional, const KernelExpansion& w) {
  return std::visit(overloaded{
                        [&](const PointEvaluation& f) { return w(f.point); },
                        [&](const Convolution& f) {
                          double sum = 0.0;
                          for (std::size_t k = 0; k < f.signal.size(); ++k) {
                            if (f.signal[k] != 0.0) sum += f.signal[k] * w(f.eval_point - f.grid.node(k));
                          }
                          return sum * f.grid.cell_volume();
                        },
                        [&](const Expectation& f) {
                          double sum = 0.0;
                          const auto atoms = f.measure.atoms();
                          const auto weights = f.measure.weights();
                          for (std::size_t j = 0; j < atoms.size(); ++j) sum += weights[j] * w(atoms[j]);
                          return sum;
                        },
                    },
                    functional.variant());
}

KernelExpansion representer(const LinearFunctional& functional, const Kernel& kernel) {
  if (functional.input_dim() != kernel.input_dim()) {
    throw DimensionError("functional acts on R^" + std::to_string(functional.input_dim()) + ", kernel on R^" +
                         std::to_string(kernel.input_dim()));
  }
  return std::visit(overloaded{
                        [&](const PointEvaluation& f) { return KernelExpansion::section(kernel, f.point); },
                        [&](const Convolution& f) {
                          std::vector<Point> centers;
                          std::vector<double> coefficients;
                          const double volume = f.grid.cell_volume();
                          for (std::size_t k = 0; k < f.signal.size(); ++k) {
                            if (f.signal[k] == 0.0) continue;
                            centers.push_back(f.eval_point - f.grid.node(k));
                            coefficients.push_back(f.signal[k] * volume);
                          }
                          return KernelExpansion(kernel, std::move(centers),
                                                 Eigen::Map<Eigen::VectorXd>(coefficients.data(),
                                                                             static_cast<Eigen::Index>(coefficients.size())));
                        },
                        [&](const Expectation& f) {
                          const auto atoms = f.measure.atoms();
                          const auto weights = f.measure.weights();
                          return KernelExpansion(kernel, {atoms.begin(), atoms.end()},
                                                 Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                                                   static_cast<Eigen::Index>(weights.size())));
                        },
                    },
                    functional.variant());
}

Eigen::MatrixXd gram_matrix(const Kernel& kernel, std::span<const LinearFunctional> functionals) {
  std::vector<KernelExpansion> reps;
  reps.reserve(functionals.size());
  for (const auto& f : functionals) reps.push_back(representer(f, kernel));
  const auto n = static_cast<Eigen::Index>(reps.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = apply(functionals[static_cast<std::size_t>(i)], reps[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

}  // namespace kreg
