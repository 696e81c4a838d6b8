#pragma once

#include <Eigen/Dense>

#include "variomat/model.hpp"

namespace variomat {

/// Distance-to-variogram families. All use the practical-range convention:
/// the curve reaches ~95% of the sill at d = range (factor 3 in the
/// exponent), and the spherical family reaches the sill exactly at range.
enum class VariogramFamily { exponential, gaussian, spherical, pure_nugget };

/// gamma(0) = 0 always; the nugget is the jump as d -> 0+; the sill is the
/// limit at infinity. pure_nugget requires nugget == sill.
struct VariogramFunctionModel {
  VariogramFamily family = VariogramFamily::exponential;
  double nugget = 0.0;
  double sill = 1.0;
  double range = 1.0;
};

double eval_variogram_fn(const VariogramFunctionModel& m, double d);

/// Point coordinates, one point per row; Euclidean metric.
class LocationSet {
 public:
  static LocationSet from_matrix(const Eigen::MatrixXd& points);

  Eigen::Index count() const { return points_.rows(); }
  Eigen::Index ambient_dim() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }

  double distance(Eigen::Index i, Eigen::Index j) const {
    return (points_.row(i) - points_.row(j)).norm();
  }

 private:
  explicit LocationSet(Eigen::MatrixXd p) : points_(std::move(p)) {}
  Eigen::MatrixXd points_;
};

/// A distance-built matrix failed admissibility; carries the full report.
struct InvalidVariogram : Error {
  InvalidVariogram(const std::string& message, ValidityReport r)
      : Error(message), report(std::move(r)) {}
  ValidityReport report;
};

struct LocationVariogram {
  VariogramMatrix gamma;
  ValidityReport report;
  bool duplicate_locations = false;  // some off-diagonal distance is zero
};

/// Gamma[i][j] = eval_variogram_fn(m, d(x_i, x_j)). Admissibility is checked,
/// not assumed: a variogram function does not automatically produce a
/// conditionally negative definite matrix on an arbitrary point set.
LocationVariogram gamma_from_locations(const VariogramFunctionModel& m,
                                       const LocationSet& locs);

struct KrigePrediction {
  double prediction = 0.0;
  double variance = 0.0;
  /// Round-off pushed the variance below -1e-10 before clamping; tiny
  /// negative values are clamped silently.
  bool variance_clamped = false;
};

/// Best linear prediction at the untried index 0 of sigma_full given
/// observations y_obs at indices 1..n and constant mean mu:
///   prediction = mu + c' S^{-1} (y - mu 1),  variance = s0 - c' S^{-1} c,
/// where s0 = sigma_full(0,0), c = sigma_full(0, 1..), S = sigma_full(1.., 1..).
KrigePrediction krige_predict(const CovarianceMatrix& sigma_full,
                              const Eigen::VectorXd& y_obs, double mu);

}  // namespace variomat
