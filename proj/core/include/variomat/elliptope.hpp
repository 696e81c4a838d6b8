#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "variomat/model.hpp"

namespace variomat {

/// The three off-diagonal correlations of a 3x3 candidate matrix
/// [[1,x,y],[x,1,z],[y,z,1]].
struct Elliptope3Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Membership in the 3x3 correlation body: |x|,|y|,|z| <= 1 and
/// 1 - x^2 - y^2 - z^2 + 2xyz >= 0, both within 1e-12.
bool elliptope3_contains(const Elliptope3Point& p);

/// General-n membership: unit diagonal (validated, within 1e-10) and
/// smallest eigenvalue above the PSD tolerance.
bool elliptope_contains(const Eigen::MatrixXd& r);

/// Horizontal section z = c of the 3x3 body: the ellipse
/// x^2 + y^2 - 2c xy <= 1 - c^2, with semi-axes sqrt(1+c) and sqrt(1-c)
/// along the diagonals, area pi*sqrt(1-c^2).
struct EllipseSection {
  double c = 0.0;
  // Quadratic form coefficients: xx*x^2 + yy*y^2 + xy*x*y <= rhs
  double xx = 1.0;
  double yy = 1.0;
  double xy = 0.0;
  double rhs = 1.0;
  double area = 0.0;
  Eigen::MatrixXd boundary;  // K x 2 points tracing the boundary
};

EllipseSection elliptope3_section(double c, int points = 256);

/// Uniform draws on the correlation body by rejection from the off-diagonal
/// cube [-1,1]^{n(n-1)/2}. Acceptance decays fast with n, so the attempt
/// budget caps runtime; a hit is reported, not thrown, and the accepted
/// prefix is returned.
struct RejectionDraws {
  std::vector<CorrelationMatrix> samples;
  std::uint64_t attempts = 0;
  double acceptance_rate = 0.0;
  bool budget_exhausted = false;
};

RejectionDraws sample_rejection(Eigen::Index n, Eigen::Index count,
                                std::uint64_t seed,
                                std::uint64_t max_draws = 10'000'000);

/// Gram draws: fill n x n with standard normals, normalize columns, return
/// A'A. Always lands in the body.
std::vector<CorrelationMatrix> sample_gram(Eigen::Index n, Eigen::Index count,
                                           std::uint64_t seed);

/// Strictly-upper-triangular coordinates t_ij (i < j) of an upper-triangular
/// factor T with unit-norm rows: t_ii = sqrt(1 - sum_{j>i} t_ij^2) and
/// R = TT'. Identifiable iff every implied diagonal entry is > 0.
class CholeskyParam {
 public:
  /// strict_upper must be square with zero diagonal and lower triangle, and
  /// each row's squared entries must sum to <= 1.
  static CholeskyParam from_upper(const Eigen::MatrixXd& strict_upper);

  Eigen::Index dim() const { return t_.rows(); }
  const Eigen::MatrixXd& strict_upper() const { return t_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  /// The full factor: strict upper part plus the implied diagonal.
  Eigen::MatrixXd factor() const;

  /// det R = product of squared diagonal entries of the factor.
  double det_r() const;

 private:
  explicit CholeskyParam(Eigen::MatrixXd t) : t_(std::move(t)) {}
  Eigen::MatrixXd t_;
};

/// R = TT', the Gram matrix of the factor's unit-norm rows. Unit diagonal
/// exact by construction.
CorrelationMatrix cholesky_to_corr(const CholeskyParam& p);

/// Inverse map for nonsingular R: the unique upper-triangular factor with
/// positive diagonal. Throws SingularInput when det(r) <= 1e-12.
CholeskyParam corr_to_cholesky(const CorrelationMatrix& r);

/// Cholesky-coordinate prior: each factor row drawn uniformly on the unit
/// hemisphere with nonnegative leading (diagonal) coordinate, then mapped
/// through cholesky_to_corr.
std::vector<CorrelationMatrix> sample_cholesky(Eigen::Index n,
                                               Eigen::Index count,
                                               std::uint64_t seed);

}  // namespace variomat
