#pragma once

#include <stdexcept>
#include <string>

namespace variomat {

/// Base class for every domain error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition or a type invariant.
struct InvalidInput : Error {
  using Error::Error;
};

/// The requested common variance lies below the admissible lower bound.
struct SigmaTooSmall : Error {
  SigmaTooSmall(double requested_sigma2, double min_required_sigma2)
      : Error("sigma2 = " + std::to_string(requested_sigma2) +
              " is below the admissible minimum " +
              std::to_string(min_required_sigma2)),
        requested(requested_sigma2),
        min_required(min_required_sigma2) {}

  double requested;
  double min_required;
};

/// The matrix fails the negative definiteness test on span(1)-orthogonal
/// directions.
struct NotConditionallyNegDef : Error {
  using Error::Error;
};

/// sup { x' G x : x'1 = 1 } has no finite value.
struct Unbounded : Error {
  using Error::Error;
};

/// Input matrix is singular or too ill conditioned to factorize reliably.
struct SingularInput : Error {
  using Error::Error;
};

/// The rank-one modified matrix is not invertible (1'A^{-1}1 = 1).
struct NotInvertible : Error {
  using Error::Error;
};

/// The model covariance sigma2*11' - Gamma fails the conditioning guard.
struct SingularModel : Error {
  using Error::Error;
};

}  // namespace variomat
