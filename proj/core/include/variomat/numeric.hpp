#pragma once

#include <Eigen/Dense>

namespace variomat {

// Absolute tolerance for symmetry checks.
inline constexpr double kSymTol = 1e-10;
// Absolute tolerance for diagonal checks (unit, zero or constant diagonal).
inline constexpr double kDiagTol = 1e-10;
// Eigenvalue slack factor; the effective tolerance is scale aware, see
// eig_tol below.
inline constexpr double kEigTolFactor = 1e-8;
// Reciprocal condition numbers below this floor refuse to solve.
inline constexpr double kRcondFloor = 1e-14;

/// Scale-aware eigenvalue tolerance: kEigTolFactor * max(1, |lambda|_max).
double eig_tol(double max_abs_eigenvalue);

/// Largest absolute entry of m - m'.
double asymmetry(const Eigen::MatrixXd& m);

/// Eigenvalues of a symmetric matrix, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Smallest eigenvalue is >= -eig_tol(largest absolute eigenvalue).
bool is_positive_semidefinite(const Eigen::MatrixXd& symmetric);

/// I - (1/n) 11', without dimension checks. The public operation with
/// argument validation lives in projection.hpp.
Eigen::MatrixXd centering_projector_unchecked(Eigen::Index n);

/// 1' m 1, the all-ones quadratic form. Diagnostic scalar: for a variogram
/// matrix of (sigma2, R) it equals sigma2 * (n^2 - 1'R1).
double ones_form(const Eigen::MatrixXd& m);

}  // namespace variomat
