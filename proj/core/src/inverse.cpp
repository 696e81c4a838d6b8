#include "variomat/inverse.hpp"

#include <cmath>
#include <string>

#include "variomat/numeric.hpp"

namespace variomat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// |1'A^{-1}1 - 1| below this means the rank-one modified matrix is singular.
constexpr double kRankOneTol = 1e-12;

Eigen::PartialPivLU<Eigen::MatrixXd> guarded_lu(const Eigen::MatrixXd& m,
                                                const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > kRcondFloor)) {
    throw SingularInput(std::string(what) +
                        ": reciprocal condition estimate below 1e-14");
  }
  return lu;
}

// Cholesky of sigma2 11' - Gamma with the conditioning guard; the shared
// entry point for every likelihood-side operation.
Eigen::LLT<Eigen::MatrixXd> model_llt(const Eigen::MatrixXd& sigma,
                                      const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kRcondFloor)) {
    throw SingularModel(std::string(what) +
                        ": sigma2 11' - Gamma is not safely invertible");
  }
  return llt;
}

Eigen::MatrixXd covariance_of(const VariogramMatrix& gamma, double sigma2) {
  const Eigen::Index n = gamma.dim();
  return Eigen::MatrixXd::Constant(n, n, sigma2) - gamma.matrix();
}

void require_direction(const Eigen::MatrixXd& h, Eigen::Index n) {
  if (h.rows() != n || h.cols() != n) {
    throw InvalidInput("direction: dimension mismatch");
  }
  if (asymmetry(h) > kSymTol ||
      h.diagonal().cwiseAbs().maxCoeff() > kDiagTol) {
    throw InvalidInput("direction: must be symmetric with zero diagonal");
  }
}

double det_laplace(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += sign * m(0, j) * det_laplace(minor);
    sign = -sign;
  }
  return det;
}

// (i, j) cofactor: (-1)^{i+j} det of m with row i and column j removed.
double cofactor(const Eigen::MatrixXd& m, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd minor(n - 1, n - 1);
  Eigen::Index rr = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    if (r == i) continue;
    Eigen::Index cc = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (c == j) continue;
      minor(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
  return sign * det_laplace(minor);
}

}  // namespace

double sm_det(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InvalidInput("sm_det: expected a square matrix");
  }
  const auto lu = guarded_lu(a, "sm_det");
  const Eigen::Index n = a.rows();
  const Eigen::VectorXd ainv_one = lu.solve(Eigen::VectorXd::Ones(n));
  const double s = ainv_one.sum();  // 1'A^{-1}1
  const double parity = (n % 2 == 0) ? 1.0 : -1.0;
  return parity * (1.0 - s) * lu.determinant();
}

Eigen::MatrixXd sm_inverse(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InvalidInput("sm_inverse: expected a square matrix");
  }
  const auto lu = guarded_lu(a, "sm_inverse");
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ainv = lu.inverse();
  const Eigen::VectorXd u = ainv * Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd w = ainv.transpose() * Eigen::VectorXd::Ones(n);
  const double s = u.sum();
  if (std::abs(s - 1.0) < kRankOneTol) {
    throw NotInvertible("sm_inverse: 1'A^{-1}1 = 1, 11' - A is singular");
  }
  return -ainv - (1.0 / (1.0 - s)) * (u * w.transpose());
}

CorrelationDiagnostics correlation_diagnostics(const CorrelationMatrix& r) {
  const auto lu = guarded_lu(r.matrix(), "correlation_diagnostics");
  const Eigen::MatrixXd rinv = lu.inverse();
  CorrelationDiagnostics d;
  d.trace = r.matrix().trace();
  d.det = lu.determinant();
  d.trace_inverse = rinv.trace();
  d.one_rinv_one = rinv.sum();
  return d;
}

Eigen::MatrixXd gamma_inverse(const CovarianceMatrix& sigma) {
  const auto lu = guarded_lu(sigma.matrix(), "gamma_inverse");
  const Eigen::Index n = sigma.dim();
  const double sigma2 = sigma.sigma2();
  if (!(sigma2 > 0.0)) {
    throw InvalidInput("gamma_inverse: trace of sigma must be positive");
  }
  const Eigen::MatrixXd sinv = lu.inverse();
  const Eigen::VectorXd u = sinv * Eigen::VectorXd::Ones(n);
  const double scalar = 1.0 / sigma2 - u.sum();
  if (std::abs(scalar) < kRankOneTol) {
    throw NotInvertible(
        "gamma_inverse: sigma2^{-1} = 1'Sigma^{-1}1, Gamma is singular");
  }
  return -sinv - (u * u.transpose()) / scalar;
}

Eigen::MatrixXd concentration_from_gamma(const VariogramMatrix& gamma,
                                         double sigma2,
                                         RankOneScalar scalar) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("concentration_from_gamma: sigma2 must be positive");
  }
  const auto lu = guarded_lu(gamma.matrix(), "concentration_from_gamma");
  const Eigen::Index n = gamma.dim();
  const Eigen::MatrixXd ginv = lu.inverse();
  const Eigen::VectorXd u = ginv * Eigen::VectorXd::Ones(n);
  const double s = scalar == RankOneScalar::inverse_variance ? 1.0 / sigma2
                                                             : sigma2;
  const double denom = s - u.sum();
  if (std::abs(denom) < kRankOneTol) {
    throw NotInvertible(
        "concentration_from_gamma: rank-one scalar vanishes, "
        "sigma2 11' - Gamma is singular");
  }
  return -ginv - (u * u.transpose()) / denom;
}

LikelihoodEval loglik(const Eigen::VectorXd& y, const KrigeModel& model) {
  const Eigen::Index n = model.dim();
  if (y.size() != n) {
    throw InvalidInput("loglik: observation length " +
                       std::to_string(y.size()) + " != model dimension " +
                       std::to_string(n));
  }
  const auto llt = model_llt(model.covariance(), "loglik");
  LikelihoodEval ev;
  ev.logdet_term =
      2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const Eigen::VectorXd r = (y.array() - model.mu()).matrix();
  ev.quad_term = r.dot(llt.solve(r));
  ev.loglik = -0.5 * double(n) * std::log(kTwoPi) - 0.5 * ev.logdet_term -
              0.5 * ev.quad_term;
  return ev;
}

double covariance_det_adjugate(const VariogramMatrix& gamma, double sigma2) {
  const Eigen::Index n = gamma.dim();
  if (n > 6) {
    throw InvalidInput(
        "covariance_det_adjugate: cofactor expansion limited to n <= 6");
  }
  const Eigen::MatrixXd m = -gamma.matrix();
  double adj_sum = 0.0;  // 1'adj(M)1 = sum of all cofactors
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      adj_sum += cofactor(m, i, j);
    }
  }
  return det_laplace(m) + sigma2 * adj_sum;
}

double d_logdet(const VariogramMatrix& gamma, double sigma2,
                const Eigen::MatrixXd& h) {
  require_direction(h, gamma.dim());
  const auto llt = model_llt(covariance_of(gamma, sigma2), "d_logdet");
  return -llt.solve(h).trace();
}

double d_quadform(const Eigen::VectorXd& y, const VariogramMatrix& gamma,
                  double sigma2, const Eigen::MatrixXd& h) {
  require_direction(h, gamma.dim());
  if (y.size() != gamma.dim()) {
    throw InvalidInput("d_quadform: vector length != matrix dimension");
  }
  const auto llt = model_llt(covariance_of(gamma, sigma2), "d_quadform");
  const Eigen::VectorXd r = llt.solve(y);  // Sigma^{-1} y
  return r.dot(h * r);
}

MlResidual ml_residual(const SampleSet& samples, const VariogramMatrix& gamma,
                       double sigma2) {
  const Eigen::Index n = gamma.dim();
  if (samples.dim() != n) {
    throw InvalidInput("ml_residual: sample dimension != matrix dimension");
  }
  const auto llt = model_llt(covariance_of(gamma, sigma2), "ml_residual");
  const Eigen::MatrixXd sinv =
      llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd s = samples.second_moment();
  MlResidual out;
  out.residual = -sinv + sinv * s * sinv;
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) norm = std::max(norm, std::abs(out.residual(i, j)));
    }
  }
  out.offdiag_norm = norm;
  return out;
}

}  // namespace variomat
