#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ampgdf/amp.hpp"
#include "ampgdf/oracle.hpp"
#include "ampgdf/penalty.hpp"
#include "ampgdf/replica.hpp"

namespace ampgdf {

/// Replica prediction versus AMP Monte-Carlo on the Gaussian null ensemble.
struct ValidationConfig {
  Family family = Family::kScad;
  double a = 3.7;
  std::vector<double> lambdas;
  Index N = 200;
  Index M = 100;
  double sigma_y2 = 1.0;
  int samples = 1000;
  std::uint64_t seed = 0;
  AmpOptions amp;
  ReplicaOptions replica;
  unsigned threads = 0;
};

struct ValidationPoint {
  double lambda = 0.0;
  std::optional<ReplicaFixedPoint> replica;
  std::string replica_status;  // "ok", "no_convergence", "unstable"
  int attempted = 0;
  int converged = 0;
  double df1h_mean = 0.0;  // homogeneous AMP estimate
  double df1h_se = 0.0;
  double df1_mean = 0.0;
  double l0_over_m_mean = 0.0;
};

std::vector<ValidationPoint> validate_against_replica(const ValidationConfig& cfg);

/// Stein finite-difference divergence versus the AMP estimators.
struct SteinCheckConfig {
  Family family = Family::kL1;
  double lambda = 1.0;
  double a = 3.7;
  Index N = 60;
  Index M = 30;
  /// Pairwise column correlation of the design; 0 gives i.i.d. N(0, 1/M).
  double rho = 0.0;
  double sigma_y2 = 1.0;
  int instances = 50;
  std::uint64_t seed = 0;
  FdSolver solver = FdSolver::kCoordinateDescent;
  AmpOptions amp{.tol = 1e-10, .max_sweeps = 20000};
  OracleOptions oracle;
  unsigned threads = 0;
};

struct SteinCheckRow {
  int instance = 0;
  bool ok = false;
  std::string status;
  double df1 = 0.0;
  double df1h = 0.0;
  std::optional<double> df2;
  double df_fd = 0.0;
  double l0_over_m = 0.0;
};

std::vector<SteinCheckRow> stein_check(const SteinCheckConfig& cfg);

}  // namespace ampgdf
