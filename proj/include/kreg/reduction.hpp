#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kreg/expansion.hpp"
#include "kreg/extended_real.hpp"
#include "kreg/functional.hpp"
#include "kreg/loss.hpp"
#include "kreg/regularizer.hpp"

namespace kreg {

/// J(w) = f(L_1 w, ..., L_ℓ w) + h(|w|) restricted to w = Σ c_i w_i, where
/// w_i are the representers of the L_i. In coefficients:
///
///   Ĵ(c) = f(G c) + h(sqrt(cᵀ G c)),   G_ij = <w_i, w_j>.
class ReducedProblem {
 public:
  ReducedProblem(Kernel kernel, std::vector<LinearFunctional> functionals, LossDescriptor loss, RadialProfile profile,
                 ExtendedReal gamma);

  const Kernel& kernel() const { return kernel_; }
  std::span<const LinearFunctional> functionals() const { return functionals_; }
  std::span<const KernelExpansion> representers() const { return representers_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const LossDescriptor& loss() const { return loss_; }
  const RadialProfile& profile() const { return profile_; }
  ExtendedReal gamma() const { return gamma_; }
  std::size_t size() const { return functionals_.size(); }
  /// Targets of a squared loss.
  std::optional<std::vector<double>> targets() const;

  /// Ĵ(c).
  ExtendedReal objective(const Eigen::VectorXd& c) const;
  /// J(w), evaluated by applying each functional to w directly.
  ExtendedReal functional_objective(const KernelExpansion& w) const;

  /// Σ c_i w_i.
  KernelExpansion reconstruct(const Eigen::VectorXd& c) const;

  /// Coefficients of the orthogonal projection of w onto span{w_i}.
  Eigen::VectorXd projection_coefficients(const KernelExpansion& w) const;
  KernelExpansion project_onto_span(const KernelExpansion& w) const;

 private:
  Kernel kernel_;
  std::vector<LinearFunctional> functionals_;
  std::vector<KernelExpansion> representers_;
  Eigen::MatrixXd gram_;
  LossDescriptor loss_;
  RadialProfile profile_;
  ExtendedReal gamma_;
};

/// Builds the reduced problem; throws on empty or inconsistent functionals,
/// a loss sized for a different ℓ, negative γ, or a Gram matrix that is not
/// symmetric PSD within tolerance.
ReducedProblem reduce(const Kernel& kernel, std::vector<LinearFunctional> functionals, LossDescriptor loss,
                      RadialProfile profile, ExtendedReal gamma);

}  // namespace kreg
