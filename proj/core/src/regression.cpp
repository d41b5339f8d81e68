#include "ampgdf/regression.hpp"

#include <string>

#include "ampgdf/errors.hpp"

namespace ampgdf {

void RegressionInstance::validate() const {
  if (A.rows() < 1 || A.cols() < 1) throw DimensionMismatch("regression: empty predictor matrix");
  if (y.size() != A.rows()) {
    throw DimensionMismatch("regression: y has length " + std::to_string(y.size()) + " but A has " +
                            std::to_string(A.rows()) + " rows");
  }
  if (!(sigma_y2 > 0.0)) throw InvalidArgument("regression: sigma_y2 must be positive");
  for (Index i = 0; i < A.cols(); ++i) {
    if (A.col(i).squaredNorm() == 0.0) {
      throw DimensionMismatch("regression: predictor column " + std::to_string(i) + " is all zero");
    }
  }
}

double objective(const RegressionInstance& inst, const VectorXd& x, const PenaltySpec& spec) {
  double penalty = 0.0;
  for (Index i = 0; i < x.size(); ++i) penalty += penalty_value(x[i], spec);
  return 0.5 * (inst.y - inst.A * x).squaredNorm() + penalty;
}

}  // namespace ampgdf
