#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "variomat/errors.hpp"

namespace variomat {

/// N independent draws of an n-vector, one draw per row. Rows are
/// observations, columns are components; every consumer of replicated data
/// shares this layout.
class SampleSet {
 public:
  /// Requires at least one row and at least two columns, all entries finite.
  static SampleSet from_matrix(const Eigen::MatrixXd& rows) {
    if (rows.rows() < 1 || rows.cols() < 2) {
      throw InvalidInput("SampleSet: need >= 1 draw of an n >= 2 vector, got " +
                         std::to_string(rows.rows()) + "x" +
                         std::to_string(rows.cols()));
    }
    if (!rows.allFinite()) {
      throw InvalidInput("SampleSet: entries must be finite");
    }
    return SampleSet(rows);
  }

  const Eigen::MatrixXd& rows() const { return rows_; }
  Eigen::Index draws() const { return rows_.rows(); }
  Eigen::Index dim() const { return rows_.cols(); }

  /// Draw k as a column vector.
  Eigen::VectorXd draw(Eigen::Index k) const { return rows_.row(k); }

  /// Second-moment matrix (1/N) sum_k y_k y_k' (no mean subtraction).
  Eigen::MatrixXd second_moment() const {
    return rows_.transpose() * rows_ / double(rows_.rows());
  }

 private:
  explicit SampleSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}
  Eigen::MatrixXd rows_;
};

}  // namespace variomat
