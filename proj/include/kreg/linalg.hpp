#pragma once

#include <Eigen/Dense>

namespace kreg {

/// Floor below which a Gram eigenvalue counts as a PSD violation:
/// 1e-8 · n · max(1, max_i G_ii).
double psd_tolerance(const Eigen::MatrixXd& gram);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

bool is_symmetric(const Eigen::MatrixXd& m, double tol);

/// Minimum-norm solution of G x = b for symmetric PSD G, discarding
/// eigenvalues below `relative_cutoff` · λ_max.
Eigen::VectorXd pseudo_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double relative_cutoff = 1e-12);

/// The component of c orthogonal to null(G); same G c, same cᵀ G c.
Eigen::VectorXd remove_null_component(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c,
                                      double relative_cutoff = 1e-12);

}  // namespace kreg
