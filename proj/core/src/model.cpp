#include "variomat/model.hpp"

#include <algorithm>
#include <cmath>

#include "variomat/numeric.hpp"

namespace variomat {

namespace {

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw InvalidInput(std::string(what) +
                       ": expected a square matrix of dimension >= 2, got " +
                       std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
  }
}

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
  const double dev = asymmetry(m);
  if (dev > kSymTol) {
    throw InvalidInput(std::string(what) + ": asymmetry " +
                       std::to_string(dev) + " exceeds tolerance");
  }
}

double entry_tol(const Eigen::MatrixXd& m) {
  return 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Largest eigenvalue of P G P, the quadratic form restricted to
// span(1)-orthogonal directions.
double max_centered_eigenvalue(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd p = centering_projector_unchecked(g.rows());
  const Eigen::MatrixXd pgp = 0.5 * (p * g * p + (p * g * p).transpose());
  const Eigen::VectorXd ev = symmetric_eigenvalues(pgp);
  return ev(ev.size() - 1);
}

bool centered_negative_semidefinite(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd p = centering_projector_unchecked(g.rows());
  Eigen::MatrixXd pgp = p * g * p;
  pgp = 0.5 * (pgp + pgp.transpose());
  const Eigen::VectorXd ev = symmetric_eigenvalues(pgp);
  const double scale =
      std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(ev.size() - 1) <= eig_tol(scale);
}

// sup { x'Gx : x'1 = 1 } for a conditionally negative definite g. The
// caller guarantees concavity on the hyperplane.
double min_sigma2_impl(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = g;
  kkt.topRightCorner(n, 1).setOnes();
  kkt.bottomLeftCorner(1, n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
  if (lu.rcond() > kRcondFloor) {
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (sol.allFinite() &&
        (kkt * sol - rhs).cwiseAbs().maxCoeff() <= 1e-8 * scale) {
      const Eigen::VectorXd x = sol.head(n);
      return std::max(0.0, x.dot(g * x));
    }
  }

  // Singular stationarity system: eliminate the constraint with an
  // orthonormal basis of span(1)^perp and solve by pseudo-inverse.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd basis = q.rightCols(n - 1);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 1.0 / double(n));

  Eigen::MatrixXd a = basis.transpose() * g * basis;
  a = 0.5 * (a + a.transpose());
  const Eigen::VectorXd b = basis.transpose() * (g * x0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double emax = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
  const double cut = 1e-12 * std::max(1.0, emax);
  Eigen::VectorXd pinv_ev = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > cut) pinv_ev(i) = 1.0 / ev(i);
  }
  const Eigen::VectorXd w = -(es.eigenvectors() * pinv_ev.asDiagonal() *
                              es.eigenvectors().transpose() * b);
  if ((a * w + b).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Unbounded(
        "sup { x'Gx : x'1 = 1 } is infinite: the form grows linearly along "
        "a null direction of the centered matrix");
  }
  const Eigen::VectorXd x = x0 + basis * w;
  return std::max(0.0, x.dot(g * x));
}

}  // namespace

CorrelationMatrix CorrelationMatrix::from_matrix(const Eigen::MatrixXd& m) {
  require_square(m, "CorrelationMatrix");
  require_symmetric(m, "CorrelationMatrix");
  const double diag_dev = (m.diagonal().array() - 1.0).abs().maxCoeff();
  if (diag_dev > kDiagTol) {
    throw InvalidInput("CorrelationMatrix: diagonal deviates from 1 by " +
                       std::to_string(diag_dev));
  }
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  sym.diagonal().setOnes();
  if (!is_positive_semidefinite(sym)) {
    throw InvalidInput("CorrelationMatrix: not positive semidefinite");
  }
  const double max_abs = sym.cwiseAbs().maxCoeff();
  if (max_abs > 1.0 + kDiagTol) {
    throw InvalidInput("CorrelationMatrix: entry magnitude " +
                       std::to_string(max_abs) + " exceeds 1");
  }
  return CorrelationMatrix(std::move(sym));
}

CovarianceMatrix CovarianceMatrix::from_matrix(const Eigen::MatrixXd& m) {
  require_square(m, "CovarianceMatrix");
  require_symmetric(m, "CovarianceMatrix");
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  if (!is_positive_semidefinite(sym)) {
    throw InvalidInput("CovarianceMatrix: not positive semidefinite");
  }
  const double mean_diag = sym.diagonal().mean();
  const double diag_dev =
      (sym.diagonal().array() - mean_diag).abs().maxCoeff();
  if (diag_dev > kDiagTol) {
    throw InvalidInput("CovarianceMatrix: diagonal is not constant, max "
                       "deviation " +
                       std::to_string(diag_dev));
  }
  return CovarianceMatrix(std::move(sym));
}

VariogramMatrix VariogramMatrix::from_matrix(const Eigen::MatrixXd& m) {
  require_square(m, "VariogramMatrix");
  require_symmetric(m, "VariogramMatrix");
  const double diag_dev = m.diagonal().cwiseAbs().maxCoeff();
  if (diag_dev > kDiagTol) {
    throw InvalidInput("VariogramMatrix: diagonal deviates from 0 by " +
                       std::to_string(diag_dev));
  }
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  sym.diagonal().setZero();
  if (sym.minCoeff() < -entry_tol(sym)) {
    throw InvalidInput("VariogramMatrix: negative entry " +
                       std::to_string(sym.minCoeff()));
  }
  if (!centered_negative_semidefinite(sym)) {
    throw InvalidInput(
        "VariogramMatrix: not conditionally negative definite");
  }
  return VariogramMatrix(std::move(sym));
}

KrigeModel::KrigeModel(double mu, double sigma2, VariogramMatrix gamma)
    : mu_(mu), sigma2_(sigma2), gamma_(std::move(gamma)) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2) || !std::isfinite(mu)) {
    throw InvalidInput("KrigeModel: sigma2 must be positive and finite");
  }
  const double min_required = min_sigma2(gamma_);
  if (sigma2_ + eig_tol(std::max(min_required, sigma2_)) < min_required) {
    throw SigmaTooSmall(sigma2_, min_required);
  }
}

Eigen::MatrixXd KrigeModel::covariance() const {
  const Eigen::Index n = gamma_.dim();
  return Eigen::MatrixXd::Constant(n, n, sigma2_) - gamma_.matrix();
}

CorrelationMatrix KrigeModel::correlation() const {
  const Eigen::Index n = gamma_.dim();
  return CorrelationMatrix::from_matrix(Eigen::MatrixXd::Ones(n, n) -
                                        gamma_.matrix() / sigma2_);
}

VariogramMatrix gamma_from_sigma_r(double sigma2,
                                   const CorrelationMatrix& r) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("gamma_from_sigma_r: sigma2 must be positive");
  }
  const Eigen::Index n = r.dim();
  Eigen::MatrixXd g =
      sigma2 * (Eigen::MatrixXd::Ones(n, n) - r.matrix());
  return VariogramMatrix::from_matrix(g);
}

CovarianceMatrix covariance_from_gamma(double sigma2,
                                       const VariogramMatrix& gamma) {
  const double min_required = min_sigma2(gamma);
  if (sigma2 < min_required - eig_tol(min_required)) {
    throw SigmaTooSmall(sigma2, min_required);
  }
  const Eigen::Index n = gamma.dim();
  return CovarianceMatrix::from_matrix(
      Eigen::MatrixXd::Constant(n, n, sigma2) - gamma.matrix());
}

std::pair<double, CorrelationMatrix> decompose_covariance(
    const CovarianceMatrix& sigma) {
  const double s2 = sigma.sigma2();
  if (!(s2 > 0.0)) {
    throw InvalidInput("decompose_covariance: trace must be positive");
  }
  return {s2, CorrelationMatrix::from_matrix(sigma.matrix() / s2)};
}

double min_sigma2(const VariogramMatrix& gamma) {
  return min_sigma2_impl(gamma.matrix());
}

ValidityReport validate_variogram(const Eigen::MatrixXd& candidate,
                                  std::optional<double> sigma2) {
  require_square(candidate, "validate_variogram");
  ValidityReport report;

  report.max_asymmetry = asymmetry(candidate);
  report.max_abs_diagonal = candidate.diagonal().cwiseAbs().maxCoeff();
  report.symmetric_zero_diagonal =
      report.max_asymmetry <= kSymTol && report.max_abs_diagonal <= kDiagTol;

  Eigen::MatrixXd sym = 0.5 * (candidate + candidate.transpose());
  report.min_entry = sym.minCoeff();
  report.entries_nonnegative = report.min_entry >= -entry_tol(sym);

  report.max_centered_eigenvalue = max_centered_eigenvalue(sym);
  report.conditionally_negative_definite = centered_negative_semidefinite(sym);

  report.degenerate = sym.cwiseAbs().maxCoeff() <= entry_tol(sym);

  if (report.symmetric_zero_diagonal &&
      report.conditionally_negative_definite) {
    Eigen::MatrixXd pinned = sym;
    pinned.diagonal().setZero();
    try {
      report.min_sigma2 = min_sigma2_impl(pinned);
    } catch (const Unbounded&) {
      report.unbounded = true;
    }
  }

  if (sigma2.has_value()) {
    const bool admissible =
        report.min_sigma2.has_value() &&
        *report.min_sigma2 <=
            *sigma2 + eig_tol(std::max(*report.min_sigma2, *sigma2));
    report.sigma2_admissible = admissible;
  }
  return report;
}

}  // namespace variomat
