#pragma once
// Shared generators and helpers for the test binaries. Tests use their own
// std::mt19937_64 so library RNG changes can't silently shift fixtures.
#include <Eigen/Dense>
#include <random>
#include <utility>

#include "variomat/model.hpp"

namespace support {

inline Eigen::MatrixXd rand_gaussian(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = normal(gen);
  }
  return a;
}

/// Well-conditioned random correlation matrix: normalize A A' + 0.3 I.
inline Eigen::MatrixXd rand_corr(Eigen::Index n, std::mt19937_64& gen) {
  const Eigen::MatrixXd a = rand_gaussian(n, n, gen);
  Eigen::MatrixXd s =
      a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd d = s.diagonal().array().rsqrt();
  Eigen::MatrixXd r = d.asDiagonal() * s * d.asDiagonal();
  r = ((r + r.transpose()) / 2.0).eval();
  r.diagonal().setOnes();
  return r;
}

inline double rand_sigma2(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  return u(gen);
}

/// Random admissible (mu, sigma2, Gamma) built from a correlation matrix,
/// so sigma2 is admissible by construction.
inline variomat::KrigeModel rand_model(Eigen::Index n, std::mt19937_64& gen) {
  const auto r = variomat::CorrelationMatrix::from_matrix(rand_corr(n, gen));
  const double sigma2 = rand_sigma2(gen);
  std::uniform_real_distribution<double> mu(-2.0, 2.0);
  return variomat::KrigeModel(mu(gen), sigma2,
                              variomat::gamma_from_sigma_r(sigma2, r));
}

/// Random symmetric zero-diagonal direction with unit max-abs entry.
inline Eigen::MatrixXd rand_direction(Eigen::Index n, std::mt19937_64& gen) {
  Eigen::MatrixXd h = rand_gaussian(n, n, gen);
  h = ((h + h.transpose()) / 2.0).eval();
  h.diagonal().setZero();
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale > 0) h /= scale;
  return h;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Max-abs difference relative to the max-abs entry of the reference.
inline double rel_diff(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = want.cwiseAbs().maxCoeff();
  return max_abs_diff(got, want) / (scale > 0 ? scale : 1.0);
}

}  // namespace support
