#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "variomat/model.hpp"
#include "variomat/samples.hpp"

namespace variomat {

/// Covariance of the field projected onto span(1)^perp: symmetric, PSD, and
/// annihilates the all-ones vector. Necessarily singular (rank <= n-1).
class CenteredCovariance {
 public:
  /// Validates symmetry, PSD up to the eigenvalue tolerance, and m*1 = 0
  /// within 1e-10.
  static CenteredCovariance from_matrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  /// max - min of the diagonal. Diagnostic only: the diagonal of -P Gamma P
  /// is constant exactly when the underlying correlation has constant row
  /// sums, which is not an invariant.
  double diagonal_spread() const {
    return entries_.diagonal().maxCoeff() - entries_.diagonal().minCoeff();
  }

 private:
  explicit CenteredCovariance(Eigen::MatrixXd m) : entries_(std::move(m)) {}
  Eigen::MatrixXd entries_;
};

/// P = I - (1/n)11', the orthogonal projector onto span(1)^perp.
Eigen::MatrixXd centering_projector(Eigen::Index n);

/// Sigma0 = -P Gamma P. PSD with kernel containing 1, and
/// variogram_of(Sigma0) recovers gamma exactly.
CenteredCovariance sigma0_from_gamma(const VariogramMatrix& gamma);

/// gamma_ij = (e_i - e_j)' Sigma (e_i - e_j) / 2 for any symmetric PSD
/// sigma (constant diagonal not required). For Sigma = sigma2 11' - Gamma
/// this recovers Gamma.
VariogramMatrix variogram_of(const Eigen::MatrixXd& sigma);

/// Center each draw by its own component mean: y |-> P y. Idempotent; every
/// output row is orthogonal to 1.
SampleSet project_samples(const SampleSet& samples);

/// Unbiased estimator gamma_hat_ij = (1/2N) sum_k (y_ki - y_kj)^2. Always a
/// valid VariogramMatrix, and invariant under project_samples.
VariogramMatrix empirical_variogram(const SampleSet& samples);

struct EstimatedModel {
  double mu_hat = 0.0;
  VariogramMatrix gamma_hat;
};

/// mu_hat = grand mean over all entries;
/// gamma_hat = empirical_variogram(project_samples(samples)).
EstimatedModel estimate_model(const SampleSet& samples);

/// Draws from N(0, Sigma0) via the symmetric eigendecomposition square root
/// (negative eigenvalues clamped to 0). One private generator per call;
/// fixed seeds reproduce byte-identical output.
SampleSet simulate_field(const VariogramMatrix& gamma, Eigen::Index count,
                         std::uint64_t seed);

}  // namespace variomat
