#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ampgdf/amp.hpp"
#include "ampgdf/data.hpp"
#include "ampgdf/estimators.hpp"
#include "ampgdf/penalty.hpp"

namespace ampgdf {

/// One fixed instance; no Monte-Carlo prediction error.
struct FixedSource {
  RegressionInstance inst;
};

/// Fixed design with fresh responses y = A x0 + sigma xi per training sample
/// and fresh test responses of the same form.
struct PlantedSource {
  MatrixXd A;
  VectorXd x0;
  double sigma = 1.0;
};

/// Fresh Gaussian instance per training sample (seed replaced per sample).
struct GaussianSource {
  SyntheticConfig cfg;
};

using SampleSource = std::variant<FixedSource, PlantedSource, GaussianSource>;

struct SweepConfig {
  Family family = Family::kL1;
  std::vector<double> lambdas;
  std::vector<double> as{3.7};  // ignored for L1
  int n_train = 1;
  int n_test = 1000;  // Monte-Carlo test draws per training sample, 0 disables
  std::uint64_t seed = 0;
  AmpOptions amp;
  EstimatorOptions estimators;
  unsigned threads = 0;
};

/// Sample means over the successful training samples of one grid point.
struct SweepRow {
  double lambda = 0.0;
  std::optional<double> a;
  double epsilon_train = 0.0;
  double df1 = 0.0;
  double df1h = 0.0;
  std::optional<double> df2;
  double aic = 0.0;
  double pre_est1 = 0.0;
  std::optional<double> pre_est2;
  std::optional<double> pre_mc;
  double l0 = 0.0;
  int samples_ok = 0;
  int samples_failed = 0;
  int df2_missing = 0;
  std::string status;
};

struct GridPoint {
  double lambda = 0.0;
  std::optional<double> a;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Criterion name (pred_est_1, pred_est_2, aic, true_pred) -> argmin over
  /// rows without failed samples.
  std::map<std::string, GridPoint> selected_by;
};

/// Runs AMP plus all estimators at every grid point, averaging over training
/// samples. Per-point failures are recorded in the row status.
SweepResult sweep(const SampleSource& source, const SweepConfig& cfg);

/// "lo:step:hi" (inclusive) or a comma-separated list. Throws InvalidArgument.
std::vector<double> parse_grid(std::string_view text);

/// Columns: lambda,a,epsilon_train,df1,df1h,df2,aic,pre_est1,pre_est2,pre_mc,l0,status.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

}  // namespace ampgdf
