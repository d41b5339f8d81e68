#pragma once

#include <optional>
#include <string>

#include "ampgdf/amp.hpp"
#include "ampgdf/penalty.hpp"
#include "ampgdf/regression.hpp"

namespace ampgdf {

/// Training error, GDF estimates and prediction-error estimates for one
/// (lambda, a) point.
struct GdfReport {
  double epsilon_train = 0.0;
  double df1 = 0.0;
  double df1_homogeneous = 0.0;
  std::optional<double> df2;
  double aic = 0.0;
  double epsilon_pre_1 = 0.0;
  std::optional<double> epsilon_pre_2;
  long l0 = 0;
  double lambda = 0.0;
  std::optional<double> a;
  /// Why df2 is missing, empty when it is present.
  std::string df2_status;
};

struct EstimatorOptions {
  double support_tol = 1e-8;
  bool with_correction = true;
};

/// (1/M) ||y - y_hat||^2.
double training_error(const VectorXd& y, const VectorXd& y_hat);

/// (1/M) sum_mu V_mu / (1 + V_mu).
double gdf_amp(const VectorXd& V);

/// Vbar / (1 + Vbar) with Vbar the mean of V.
double gdf_amp_homogeneous(const VectorXd& V);

/// epsilon_train + (2/M) sigma_y2 l0.
double aic(double epsilon_train, double sigma_y2, long l0, long M);

/// epsilon_train + 2 sigma_y2 df.
double prediction_error_estimate(double epsilon_train, double sigma_y2, double df);

/// Number of |x_i| > support_tol.
long count_support(const VectorXd& x, double support_tol);

/// Assembles the full report at an AMP fixed point, including the corrected
/// estimators when opts.with_correction is set. Failures of the correction
/// leave df2 empty with df2_status set.
GdfReport evaluate_fixed_point(const RegressionInstance& inst, const FixedPointReport& fixed_point,
                               const PenaltySpec& spec, const EstimatorOptions& opts = {});

}  // namespace ampgdf
