#include "variomat/projection.hpp"

#include <algorithm>
#include <cmath>

#include "variomat/numeric.hpp"
#include "variomat/rng.hpp"

namespace variomat {

CenteredCovariance CenteredCovariance::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw InvalidInput("CenteredCovariance: expected square matrix, n >= 2");
  }
  if (asymmetry(m) > kSymTol) {
    throw InvalidInput("CenteredCovariance: not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  if (!is_positive_semidefinite(sym)) {
    throw NotConditionallyNegDef(
        "CenteredCovariance: -P Gamma P has a negative eigenvalue beyond "
        "tolerance");
  }
  const double ones_residual = (sym * Eigen::VectorXd::Ones(sym.rows()))
                                   .cwiseAbs()
                                   .maxCoeff();
  if (ones_residual > 1e-10 * std::max(1.0, sym.cwiseAbs().maxCoeff())) {
    throw InvalidInput("CenteredCovariance: kernel must contain the all-ones "
                       "vector (m*1 != 0)");
  }
  return CenteredCovariance(std::move(sym));
}

Eigen::MatrixXd centering_projector(Eigen::Index n) {
  if (n < 2) {
    throw InvalidInput("centering_projector: need n >= 2");
  }
  return centering_projector_unchecked(n);
}

CenteredCovariance sigma0_from_gamma(const VariogramMatrix& gamma) {
  const Eigen::MatrixXd p = centering_projector_unchecked(gamma.dim());
  Eigen::MatrixXd s0 = -(p * gamma.matrix() * p);
  s0 = 0.5 * (s0 + s0.transpose());
  return CenteredCovariance::from_matrix(s0);
}

VariogramMatrix variogram_of(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 2) {
    throw InvalidInput("variogram_of: expected square matrix, n >= 2");
  }
  if (asymmetry(sigma) > kSymTol) {
    throw InvalidInput("variogram_of: not symmetric");
  }
  if (!is_positive_semidefinite(0.5 * (sigma + sigma.transpose()))) {
    throw InvalidInput("variogram_of: not positive semidefinite");
  }
  const Eigen::Index n = sigma.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (sigma(i, i) + sigma(j, j)) - sigma(i, j);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return VariogramMatrix::from_matrix(g);
}

SampleSet project_samples(const SampleSet& samples) {
  Eigen::MatrixXd x = samples.rows();
  const Eigen::VectorXd row_means = x.rowwise().mean();
  x.colwise() -= row_means;
  return SampleSet::from_matrix(x);
}

VariogramMatrix empirical_variogram(const SampleSet& samples) {
  const Eigen::MatrixXd& x = samples.rows();
  const Eigen::Index n = samples.dim();
  const double inv_2n = 0.5 / double(samples.draws());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // (1/2N) sum_k (y_ki - y_kj)^2; pairwise differences keep the
      // estimator invariant under per-draw centering
      const double v = inv_2n * (x.col(i) - x.col(j)).squaredNorm();
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return VariogramMatrix::from_matrix(g);
}

EstimatedModel estimate_model(const SampleSet& samples) {
  const double mu_hat = samples.rows().mean();
  return EstimatedModel{mu_hat, empirical_variogram(project_samples(samples))};
}

SampleSet simulate_field(const VariogramMatrix& gamma, Eigen::Index count,
                         std::uint64_t seed) {
  if (count < 1) {
    throw InvalidInput("simulate_field: count must be >= 1");
  }
  const CenteredCovariance s0 = sigma0_from_gamma(gamma);
  const Eigen::Index n = s0.dim();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s0.matrix());
  const Eigen::VectorXd root_ev =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root =
      es.eigenvectors() * root_ev.asDiagonal() * es.eigenvectors().transpose();

  SeededRng rng(seed);
  Eigen::MatrixXd out(count, n);
  Eigen::VectorXd z(n);
  for (Eigen::Index k = 0; k < count; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    out.row(k) = (root * z).transpose();
  }
  return SampleSet::from_matrix(out);
}

}  // namespace variomat
