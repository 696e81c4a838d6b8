#include "variomat/elliptope.hpp"

#include <cmath>
#include <string>

#include "variomat/numeric.hpp"
#include "variomat/rng.hpp"

namespace variomat {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
// Absolute slack on the membership cubic and box bounds.
constexpr double kBoundaryTol = 1e-12;

Eigen::MatrixXd corr_candidate(const Eigen::VectorXd& offdiag,
                               Eigen::Index n) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      r(i, j) = offdiag(k);
      r(j, i) = offdiag(k);
      ++k;
    }
  }
  return r;
}

bool psd_with_unit_diagonal(const Eigen::MatrixXd& r) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(r);
  const double scale =
      std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -eig_tol(scale);
}

}  // namespace

bool elliptope3_contains(const Elliptope3Point& p) {
  const double box = 1.0 + kBoundaryTol;
  if (std::abs(p.x) > box || std::abs(p.y) > box || std::abs(p.z) > box) {
    return false;
  }
  const double cubic = 1.0 - p.x * p.x - p.y * p.y - p.z * p.z +
                       2.0 * p.x * p.y * p.z;
  return cubic >= -kBoundaryTol;
}

bool elliptope_contains(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols() || r.rows() < 2) {
    throw InvalidInput("elliptope_contains: expected square matrix, n >= 2");
  }
  if (asymmetry(r) > kSymTol) {
    throw InvalidInput("elliptope_contains: not symmetric");
  }
  if ((r.diagonal().array() - 1.0).abs().maxCoeff() > kDiagTol) {
    throw InvalidInput("elliptope_contains: diagonal must be 1");
  }
  return psd_with_unit_diagonal(0.5 * (r + r.transpose()));
}

EllipseSection elliptope3_section(double c, int points) {
  if (!(std::abs(c) <= 1.0)) {
    throw InvalidInput("elliptope3_section: need |c| <= 1");
  }
  if (points < 2) {
    throw InvalidInput("elliptope3_section: need at least 2 boundary points");
  }
  EllipseSection s;
  s.c = c;
  s.xx = 1.0;
  s.yy = 1.0;
  s.xy = -2.0 * c;
  s.rhs = 1.0 - c * c;
  s.area = kPi * std::sqrt(std::max(0.0, 1.0 - c * c));

  // Principal axes along (1,1)/sqrt(2) and (1,-1)/sqrt(2) with semi-axes
  // sqrt(1+c) and sqrt(1-c).
  const double a = std::sqrt(std::max(0.0, 1.0 + c));
  const double b = std::sqrt(std::max(0.0, 1.0 - c));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  s.boundary.resize(points, 2);
  for (int k = 0; k < points; ++k) {
    const double theta = 2.0 * kPi * double(k) / double(points);
    const double u = a * std::cos(theta);
    const double v = b * std::sin(theta);
    s.boundary(k, 0) = (u + v) * inv_sqrt2;
    s.boundary(k, 1) = (u - v) * inv_sqrt2;
  }
  return s;
}

RejectionDraws sample_rejection(Eigen::Index n, Eigen::Index count,
                                std::uint64_t seed,
                                std::uint64_t max_draws) {
  if (n < 2) {
    throw InvalidInput("sample_rejection: need n >= 2");
  }
  if (count < 0) {
    throw InvalidInput("sample_rejection: count must be nonnegative");
  }
  const Eigen::Index m = n * (n - 1) / 2;
  SeededRng rng(seed);
  RejectionDraws out;
  out.samples.reserve(std::size_t(count));
  Eigen::VectorXd offdiag(m);
  while (Eigen::Index(out.samples.size()) < count) {
    if (out.attempts >= max_draws) {
      out.budget_exhausted = true;
      break;
    }
    ++out.attempts;
    for (Eigen::Index k = 0; k < m; ++k) {
      offdiag(k) = rng.uniform_symmetric();
    }
    const Eigen::MatrixXd r = corr_candidate(offdiag, n);
    if (psd_with_unit_diagonal(r)) {
      out.samples.push_back(CorrelationMatrix::from_matrix(r));
    }
  }
  out.acceptance_rate =
      out.attempts > 0 ? double(out.samples.size()) / double(out.attempts)
                       : 0.0;
  return out;
}

std::vector<CorrelationMatrix> sample_gram(Eigen::Index n, Eigen::Index count,
                                           std::uint64_t seed) {
  if (n < 2) {
    throw InvalidInput("sample_gram: need n >= 2");
  }
  if (count < 0) {
    throw InvalidInput("sample_gram: count must be nonnegative");
  }
  SeededRng rng(seed);
  std::vector<CorrelationMatrix> out;
  out.reserve(std::size_t(count));
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index k = 0; k < count; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double norm2 = 0.0;
      do {
        for (Eigen::Index i = 0; i < n; ++i) {
          a(i, j) = rng.normal();
        }
        norm2 = a.col(j).squaredNorm();
      } while (!(norm2 > 1e-300));  // underflow retry, probability ~ 0
      a.col(j) /= std::sqrt(norm2);
    }
    Eigen::MatrixXd r = a.transpose() * a;
    r = 0.5 * (r + r.transpose());
    r.diagonal().setOnes();
    out.push_back(CorrelationMatrix::from_matrix(r));
  }
  return out;
}

CholeskyParam CholeskyParam::from_upper(const Eigen::MatrixXd& strict_upper) {
  const Eigen::Index n = strict_upper.rows();
  if (strict_upper.cols() != n || n < 2) {
    throw InvalidInput("CholeskyParam: expected square matrix, n >= 2");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      if (strict_upper(i, j) != 0.0) {
        throw InvalidInput(
            "CholeskyParam: diagonal and lower triangle must be zero");
      }
    }
    const double row_sum = strict_upper.row(i).squaredNorm();
    if (row_sum > 1.0 + kBoundaryTol) {
      throw InvalidInput("CholeskyParam: row " + std::to_string(i) +
                         " squared entries sum to " + std::to_string(row_sum) +
                         " > 1");
    }
  }
  return CholeskyParam(strict_upper);
}

Eigen::MatrixXd CholeskyParam::factor() const {
  const Eigen::Index n = t_.rows();
  Eigen::MatrixXd f = t_;
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i, i) = std::sqrt(std::max(0.0, 1.0 - t_.row(i).squaredNorm()));
  }
  return f;
}

double CholeskyParam::det_r() const {
  const Eigen::Index n = t_.rows();
  double det = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    det *= std::max(0.0, 1.0 - t_.row(i).squaredNorm());
  }
  return det;
}

CorrelationMatrix cholesky_to_corr(const CholeskyParam& p) {
  const Eigen::MatrixXd f = p.factor();
  Eigen::MatrixXd r = f * f.transpose();
  r = 0.5 * (r + r.transpose());
  r.diagonal().setOnes();
  return CorrelationMatrix::from_matrix(r);
}

CholeskyParam corr_to_cholesky(const CorrelationMatrix& r) {
  const Eigen::Index n = r.dim();
  // Reverse both index orders so a standard lower-triangular Cholesky of
  // JRJ turns into the upper-triangular factor of R with positive diagonal.
  Eigen::MatrixXd flipped(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      flipped(i, j) = r(n - 1 - i, n - 1 - j);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(flipped);
  if (llt.info() != Eigen::Success) {
    throw SingularInput(
        "corr_to_cholesky: matrix is singular or not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  double det = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) det *= l(i, i) * l(i, i);
  if (!(det > 1e-12)) {
    throw SingularInput("corr_to_cholesky: det(r) <= 1e-12, factor not "
                        "identifiable");
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      t(i, j) = l(n - 1 - i, n - 1 - j);
    }
  }
  return CholeskyParam::from_upper(t);
}

std::vector<CorrelationMatrix> sample_cholesky(Eigen::Index n,
                                               Eigen::Index count,
                                               std::uint64_t seed) {
  if (n < 2) {
    throw InvalidInput("sample_cholesky: need n >= 2");
  }
  if (count < 0) {
    throw InvalidInput("sample_cholesky: count must be nonnegative");
  }
  SeededRng rng(seed);
  std::vector<CorrelationMatrix> out;
  out.reserve(std::size_t(count));
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const Eigen::Index m = n - i;  // row i has m free coordinates
      Eigen::VectorXd v(m);
      double norm2 = 0.0;
      do {
        for (Eigen::Index c = 0; c < m; ++c) v(c) = rng.normal();
        norm2 = v.squaredNorm();
      } while (!(norm2 > 1e-300));
      v /= std::sqrt(norm2);
      if (v(0) < 0.0) v = -v;  // hemisphere: diagonal coordinate >= 0
      for (Eigen::Index c = 1; c < m; ++c) t(i, i + c) = v(c);
    }
    out.push_back(cholesky_to_corr(CholeskyParam::from_upper(t)));
  }
  return out;
}

}  // namespace variomat
