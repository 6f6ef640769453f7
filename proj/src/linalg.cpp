#include "kreg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace kreg {

double psd_tolerance(const Eigen::MatrixXd& gram) {
  const double scale = gram.size() == 0 ? 1.0 : std::max(1.0, gram.diagonal().cwiseAbs().maxCoeff());
  return 1e-8 * static_cast<double>(gram.rows()) * scale;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

namespace {

Eigen::MatrixXd range_projector(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig, double cutoff) {
  const auto& v = eig.eigenvectors();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(v.rows(), v.rows());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    if (eig.eigenvalues()[i] > cutoff) p += v.col(i) * v.col(i).transpose();
  }
  return p;
}

}  // namespace

Eigen::VectorXd pseudo_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b, double relative_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const auto& lambda = eig.eigenvalues();
  const double cutoff = relative_cutoff * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd projected = eig.eigenvectors().transpose() * b;
  Eigen::VectorXd scaled = Eigen::VectorXd::Zero(projected.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > cutoff) scaled[i] = projected[i] / lambda[i];
  }
  return eig.eigenvectors() * scaled;
}

Eigen::VectorXd remove_null_component(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c, double relative_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double cutoff = relative_cutoff * std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  return range_projector(eig, cutoff) * c;
}

}  // namespace kreg
