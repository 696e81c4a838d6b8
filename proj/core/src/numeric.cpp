#include "variomat/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace variomat {

double eig_tol(double max_abs_eigenvalue) {
  return kEigTolFactor * std::max(1.0, std::abs(max_abs_eigenvalue));
}

double asymmetry(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_positive_semidefinite(const Eigen::MatrixXd& symmetric) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(symmetric);
  const double scale =
      std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -eig_tol(scale);
}

Eigen::MatrixXd centering_projector_unchecked(Eigen::Index n) {
  const double nn = static_cast<double>(n);
  return Eigen::MatrixXd::Identity(n, n) -
         Eigen::MatrixXd::Constant(n, n, 1.0 / nn);
}

double ones_form(const Eigen::MatrixXd& m) { return m.sum(); }

}  // namespace variomat
