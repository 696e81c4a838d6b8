#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "variomat/errors.hpp"

namespace variomat {

/// Symmetric positive semidefinite matrix with unit diagonal. A point of
/// the correlation elliptope.
class CorrelationMatrix {
 public:
  /// Validates symmetry, unit diagonal, eigenvalue nonnegativity and the
  /// [-1, 1] bound on off-diagonal entries, then stores the symmetrized
  /// matrix with the diagonal pinned to exactly 1.
  static CorrelationMatrix from_matrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return entries_(i, j);
  }

 private:
  explicit CorrelationMatrix(Eigen::MatrixXd m) : entries_(std::move(m)) {}
  Eigen::MatrixXd entries_;
};

/// Symmetric positive semidefinite matrix with constant diagonal, the
/// covariance of a first-order stationary Gaussian vector.
class CovarianceMatrix {
 public:
  /// Validates symmetry, positive semidefiniteness and constancy of the
  /// diagonal (max deviation from the diagonal mean within kDiagTol).
  static CovarianceMatrix from_matrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  /// Common variance, tr(Sigma) / n.
  double sigma2() const { return entries_.trace() / double(entries_.rows()); }

 private:
  explicit CovarianceMatrix(Eigen::MatrixXd m) : entries_(std::move(m)) {}
  Eigen::MatrixXd entries_;
};

/// Symmetric matrix with zero diagonal, nonnegative entries, and w'Gw <= 0
/// for every w orthogonal to the all-ones vector (conditional negative
/// definiteness). Gamma_ij is half the variance of Y_i - Y_j.
class VariogramMatrix {
 public:
  /// Validates all invariants and stores the symmetrized matrix with the
  /// diagonal pinned to exactly 0.
  static VariogramMatrix from_matrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return entries_(i, j);
  }

 private:
  explicit VariogramMatrix(Eigen::MatrixXd m) : entries_(std::move(m)) {}
  Eigen::MatrixXd entries_;
};

/// Validation outcome for a candidate variogram matrix. The three condition
/// flags mirror the admissibility characterization: zero-diagonal symmetry,
/// conditional negative definiteness, and (when a variance is supplied)
/// sup { x'Gx : x'1 = 1 } <= sigma2. Entry nonnegativity is tracked
/// separately; it is implied for any true variogram but can fail on raw
/// input.
struct ValidityReport {
  bool symmetric_zero_diagonal = false;
  bool conditionally_negative_definite = false;
  std::optional<bool> sigma2_admissible;  // set iff a sigma2 was supplied
  bool entries_nonnegative = false;

  double max_asymmetry = 0.0;            // largest |g_ij - g_ji|
  double max_abs_diagonal = 0.0;         // largest |g_ii|
  double max_centered_eigenvalue = 0.0;  // largest eigenvalue of P G P
  double min_entry = 0.0;

  /// Admissible lower bound for sigma2, when the first two conditions hold
  /// and the constrained sup is finite.
  std::optional<double> min_sigma2;
  bool unbounded = false;   // the constrained sup is infinite
  bool degenerate = false;  // G == 0, the rank-one correlation 11'

  /// True when every applicable condition (including entry nonnegativity)
  /// passes.
  bool valid() const {
    return symmetric_zero_diagonal && conditionally_negative_definite &&
           entries_nonnegative && sigma2_admissible.value_or(true);
  }
};

/// First-order stationary Gaussian model N(mu 1, sigma2 R) parameterized by
/// (mu, sigma2, Gamma) with R = 11' - Gamma / sigma2.
class KrigeModel {
 public:
  /// Requires sigma2 >= min_sigma2(gamma) up to the eigenvalue tolerance.
  KrigeModel(double mu, double sigma2, VariogramMatrix gamma);

  double mu() const { return mu_; }
  double sigma2() const { return sigma2_; }
  const VariogramMatrix& gamma() const { return gamma_; }
  Eigen::Index dim() const { return gamma_.dim(); }

  /// sigma2 * 11' - Gamma.
  Eigen::MatrixXd covariance() const;
  /// 11' - Gamma / sigma2.
  CorrelationMatrix correlation() const;

 private:
  double mu_;
  double sigma2_;
  VariogramMatrix gamma_;
};

/// Gamma = sigma2 * (11' - R). Entries land in [0, 2 sigma2].
VariogramMatrix gamma_from_sigma_r(double sigma2, const CorrelationMatrix& r);

/// Sigma = sigma2 * 11' - Gamma. Throws SigmaTooSmall when sigma2 lies
/// below min_sigma2(gamma) beyond tolerance.
CovarianceMatrix covariance_from_gamma(double sigma2,
                                       const VariogramMatrix& gamma);

/// Sigma -> (tr(Sigma)/n, Sigma / (tr(Sigma)/n)). Inverse of the
/// (sigma2, R) |-> sigma2 R map.
std::pair<double, CorrelationMatrix> decompose_covariance(
    const CovarianceMatrix& sigma);

/// sup { x' G x : x'1 = 1 }, the least admissible common variance for
/// gamma. Solved through the stationarity system [G 1; 1' 0] [x; c] = [0; 1]
/// (the form is concave on the hyperplane); falls back to a reduced
/// pseudo-inverse solve when that system is singular and throws Unbounded
/// when no finite maximizer exists.
double min_sigma2(const VariogramMatrix& gamma);

/// Full condition-by-condition report for a raw candidate matrix. Failures
/// are report contents, never exceptions; only a non-square input throws.
ValidityReport validate_variogram(const Eigen::MatrixXd& candidate,
                                  std::optional<double> sigma2 = std::nullopt);

}  // namespace variomat
