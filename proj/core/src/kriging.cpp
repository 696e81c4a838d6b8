#include "variomat/kriging.hpp"

#include <cmath>
#include <string>

#include "variomat/numeric.hpp"

namespace variomat {

namespace {

void require_model(const VariogramFunctionModel& m) {
  if (!(m.nugget >= 0.0) || !(m.sill >= m.nugget) || !(m.range > 0.0) ||
      !std::isfinite(m.nugget) || !std::isfinite(m.sill) ||
      !std::isfinite(m.range)) {
    throw InvalidInput(
        "variogram function: need 0 <= nugget <= sill and range > 0");
  }
  if (m.family == VariogramFamily::pure_nugget && m.nugget != m.sill) {
    throw InvalidInput("variogram function: pure_nugget requires nugget == "
                       "sill (the curve is flat past the jump)");
  }
}

}  // namespace

double eval_variogram_fn(const VariogramFunctionModel& m, double d) {
  require_model(m);
  if (!(d >= 0.0)) {
    throw InvalidInput("eval_variogram_fn: distance must be >= 0");
  }
  if (d == 0.0) return 0.0;
  const double partial = m.sill - m.nugget;
  switch (m.family) {
    case VariogramFamily::exponential:
      return m.nugget + partial * (1.0 - std::exp(-3.0 * d / m.range));
    case VariogramFamily::gaussian:
      return m.nugget +
             partial * (1.0 - std::exp(-3.0 * d * d / (m.range * m.range)));
    case VariogramFamily::spherical: {
      if (d >= m.range) return m.sill;
      const double t = d / m.range;
      return m.nugget + partial * (1.5 * t - 0.5 * t * t * t);
    }
    case VariogramFamily::pure_nugget:
      return m.sill;
  }
  throw InvalidInput("eval_variogram_fn: unknown family");
}

LocationSet LocationSet::from_matrix(const Eigen::MatrixXd& points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw InvalidInput("LocationSet: need at least one point with at least "
                       "one coordinate");
  }
  if (!points.allFinite()) {
    throw InvalidInput("LocationSet: coordinates must be finite");
  }
  return LocationSet(points);
}

LocationVariogram gamma_from_locations(const VariogramFunctionModel& m,
                                       const LocationSet& locs) {
  require_model(m);
  const Eigen::Index n = locs.count();
  if (n < 2) {
    throw InvalidInput("gamma_from_locations: need at least 2 locations");
  }
  bool duplicates = false;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = locs.distance(i, j);
      if (d == 0.0) duplicates = true;
      const double v = eval_variogram_fn(m, d);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  ValidityReport report = validate_variogram(g);
  if (!report.symmetric_zero_diagonal ||
      !report.conditionally_negative_definite || !report.entries_nonnegative) {
    throw InvalidVariogram(
        "gamma_from_locations: the distance-built matrix fails "
        "admissibility (family/point-set combination is not valid)",
        std::move(report));
  }
  return LocationVariogram{VariogramMatrix::from_matrix(g), std::move(report),
                           duplicates};
}

KrigePrediction krige_predict(const CovarianceMatrix& sigma_full,
                              const Eigen::VectorXd& y_obs, double mu) {
  const Eigen::Index n = sigma_full.dim() - 1;  // observed count
  if (n < 1) {
    throw InvalidInput("krige_predict: need at least one observed index");
  }
  if (y_obs.size() != n) {
    throw InvalidInput("krige_predict: observation length " +
                       std::to_string(y_obs.size()) +
                       " != covariance dimension minus one (" +
                       std::to_string(n) + ")");
  }
  if (!std::isfinite(mu) || !y_obs.allFinite()) {
    throw InvalidInput("krige_predict: mu and observations must be finite");
  }
  const Eigen::MatrixXd& full = sigma_full.matrix();
  const double s0 = full(0, 0);
  const Eigen::VectorXd c = full.block(1, 0, n, 1);
  const Eigen::MatrixXd s_obs = full.block(1, 1, n, n);

  Eigen::LLT<Eigen::MatrixXd> llt(s_obs);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kRcondFloor)) {
    throw SingularInput(
        "krige_predict: observed-block covariance fails the conditioning "
        "guard");
  }
  const Eigen::VectorXd w = llt.solve(c);  // S^{-1} c

  KrigePrediction out;
  out.prediction = mu + w.dot((y_obs.array() - mu).matrix());
  double variance = s0 - w.dot(c);
  if (variance < 0.0) {
    out.variance_clamped = variance < -1e-10;
    variance = 0.0;
  }
  out.variance = variance;
  return out;
}

}  // namespace variomat
