#pragma once

#include <Eigen/Dense>

#include "ampgdf/penalty.hpp"

namespace ampgdf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Response y (length M), predictors A (M x N) and the known response
/// variance sigma_y2.
struct RegressionInstance {
  VectorXd y;
  MatrixXd A;
  double sigma_y2 = 1.0;

  Index rows() const noexcept { return A.rows(); }
  Index cols() const noexcept { return A.cols(); }

  /// Throws DimensionMismatch / InvalidArgument when the instance is unusable
  /// (empty, mismatched lengths, all-zero column, nonpositive variance).
  void validate() const;
};

/// 0.5 * ||y - A x||^2 + sum_i J(x_i).
double objective(const RegressionInstance& inst, const VectorXd& x, const PenaltySpec& spec);

}  // namespace ampgdf
