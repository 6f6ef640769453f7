#include "kreg/reduction.hpp"

#include <cmath>

#include "kreg/errors.hpp"
#include "kreg/linalg.hpp"

namespace kreg {

ReducedProblem::ReducedProblem(Kernel kernel, std::vector<LinearFunctional> functionals, LossDescriptor loss,
                               RadialProfile profile, ExtendedReal gamma)
    : kernel_(std::move(kernel)),
      functionals_(std::move(functionals)),
      loss_(std::move(loss)),
      profile_(std::move(profile)),
      gamma_(gamma) {
  if (functionals_.empty()) throw InvalidArgument("reduction needs at least one functional");
  if (gamma_ < ExtendedReal(0.0)) throw InvalidArgument("gamma must be nonnegative");
  if (const auto n = loss_.expected_size(); n && *n != functionals_.size()) {
    throw DimensionError("loss carries " + std::to_string(*n) + " targets/labels for " +
                         std::to_string(functionals_.size()) + " functionals");
  }
  representers_.reserve(functionals_.size());
  for (const auto& f : functionals_) representers_.push_back(representer(f, kernel_));
  gram_ = gram_matrix(kernel_, functionals_);
  if (!is_symmetric(gram_, 1e-9)) throw NumericalError("Gram matrix is not symmetric");
  const double floor = -psd_tolerance(gram_);
  if (min_eigenvalue(gram_) < floor) throw NumericalError("Gram matrix is not positive semidefinite");
}

std::optional<std::vector<double>> ReducedProblem::targets() const {
  if (const auto* s = std::get_if<SquaredLoss>(&loss_.variant())) return s->targets;
  return std::nullopt;
}

ExtendedReal ReducedProblem::objective(const Eigen::VectorXd& c) const {
  if (c.size() != gram_.rows()) throw DimensionError("coefficient vector has the wrong length");
  const Eigen::VectorXd values = gram_ * c;
  const double norm_sq = std::max(0.0, c.dot(values));
  return loss_.evaluate(values, gamma_) + profile_(std::sqrt(norm_sq));
}

ExtendedReal ReducedProblem::functional_objective(const KernelExpansion& w) const {
  Eigen::VectorXd values(static_cast<Eigen::Index>(functionals_.size()));
  for (std::size_t i = 0; i < functionals_.size(); ++i) values[static_cast<Eigen::Index>(i)] = apply(functionals_[i], w);
  return loss_.evaluate(values, gamma_) + profile_(norm(w));
}

KernelExpansion ReducedProblem::reconstruct(const Eigen::VectorXd& c) const {
  if (c.size() != gram_.rows()) throw DimensionError("coefficient vector has the wrong length");
  KernelExpansion w(kernel_);
  for (std::size_t i = 0; i < representers_.size(); ++i) w = w + c[static_cast<Eigen::Index>(i)] * representers_[i];
  return w;
}

Eigen::VectorXd ReducedProblem::projection_coefficients(const KernelExpansion& w) const {
  Eigen::VectorXd b(gram_.rows());
  for (std::size_t i = 0; i < representers_.size(); ++i) b[static_cast<Eigen::Index>(i)] = inner_product(representers_[i], w);
  return pseudo_solve(gram_, b);
}

KernelExpansion ReducedProblem::project_onto_span(const KernelExpansion& w) const {
  return reconstruct(projection_coefficients(w));
}

ReducedProblem reduce(const Kernel& kernel, std::vector<LinearFunctional> functionals, LossDescriptor loss,
                      RadialProfile profile, ExtendedReal gamma) {
  return {kernel, std::move(functionals), std::move(loss), std::move(profile), gamma};
}

}  // namespace kreg
