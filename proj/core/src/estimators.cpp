#include "ampgdf/estimators.hpp"

#include <string>

#include "ampgdf/correction.hpp"
#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

void check_variances(const VectorXd& V) {
  if (V.size() == 0) throw DimensionMismatch("gdf: empty variance vector");
  if ((V.array() < 0.0).any()) throw NegativeVariance("gdf: V has a negative entry");
}

}  // namespace

double training_error(const VectorXd& y, const VectorXd& y_hat) {
  if (y.size() != y_hat.size() || y.size() == 0) {
    throw DimensionMismatch("training_error: lengths " + std::to_string(y.size()) + " and " +
                            std::to_string(y_hat.size()));
  }
  return (y - y_hat).squaredNorm() / static_cast<double>(y.size());
}

double gdf_amp(const VectorXd& V) {
  check_variances(V);
  return (V.array() / (1.0 + V.array())).mean();
}

double gdf_amp_homogeneous(const VectorXd& V) {
  check_variances(V);
  const double mean = V.mean();
  return mean / (1.0 + mean);
}

double aic(double epsilon_train, double sigma_y2, long l0, long M) {
  return epsilon_train + 2.0 / static_cast<double>(M) * sigma_y2 * static_cast<double>(l0);
}

double prediction_error_estimate(double epsilon_train, double sigma_y2, double df) {
  return epsilon_train + 2.0 * sigma_y2 * df;
}

long count_support(const VectorXd& x, double support_tol) {
  return static_cast<long>((x.array().abs() > support_tol).count());
}

GdfReport evaluate_fixed_point(const RegressionInstance& inst, const FixedPointReport& fixed_point,
                               const PenaltySpec& spec, const EstimatorOptions& opts) {
  const long m = static_cast<long>(inst.rows());
  GdfReport r;
  r.lambda = spec.lambda();
  if (spec.family() != Family::kL1) r.a = spec.a();
  r.epsilon_train = training_error(inst.y, fixed_point.y_hat);
  r.df1 = gdf_amp(fixed_point.state.V);
  r.df1_homogeneous = gdf_amp_homogeneous(fixed_point.state.V);
  r.l0 = count_support(fixed_point.state.a, opts.support_tol);
  r.aic = aic(r.epsilon_train, inst.sigma_y2, r.l0, m);
  r.epsilon_pre_1 = prediction_error_estimate(r.epsilon_train, inst.sigma_y2, r.df1);

  if (!opts.with_correction) {
    r.df2_status = "disabled";
    return r;
  }
  const auto support = extract_support(fixed_point.state.a, opts.support_tol);
  if (support.empty()) {
    r.df2 = 0.0;
  } else {
    try {
      const SupportSystem sys = solve_support_system(inst, support, fixed_point.state.a, spec);
      r.df2 = corrected_gdf(inst.A, support, corrected_variances(sys, spec));
    } catch (const NumericalError& e) {
      r.df2_status = e.what();
    }
  }
  if (r.df2) r.epsilon_pre_2 = prediction_error_estimate(r.epsilon_train, inst.sigma_y2, *r.df2);
  return r;
}

}  // namespace ampgdf
