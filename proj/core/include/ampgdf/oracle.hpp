#pragma once

#include <vector>

#include "ampgdf/amp.hpp"
#include "ampgdf/penalty.hpp"
#include "ampgdf/regression.hpp"

namespace ampgdf {

/// Brute-force reference solvers. Independent of the AMP path: grid_prox
/// only evaluates penalty_value, coordinate descent only uses the scalar prox.
struct OracleOptions {
  double grid_halfwidth = 12.0;  // widened to |w| + 1 when needed
  int grid_points = 24001;
  int refine_iters = 200;
  double fd_step = 0.0;  // <= 0: 1e-4 * std(y)
  double cd_tol = 1e-12;
  int cd_max_sweeps = 100000;
};

/// Global minimiser of (t - w)^2 / (2 sigma2) + J(t) by dense grid search
/// followed by golden-section refinement inside the best cell.
double grid_prox(double w, double sigma2, const PenaltySpec& spec, const OracleOptions& opts = {});

struct CdResult {
  VectorXd x;
  int sweeps = 0;
  std::vector<double> objective_trace;  // objective after each sweep
};

/// Cyclic coordinate descent on 0.5 ||y - A x||^2 + J(x), each coordinate
/// minimised exactly (closed-form prox, or grid_prox when the column is too
/// short for the scalar problem to be convex). Global optimum for L1, a
/// stationary point for SCAD/MCP. Throws NoConvergence after cd_max_sweeps.
CdResult coordinate_descent_solve(const RegressionInstance& inst, const PenaltySpec& spec,
                                  const OracleOptions& opts = {}, const VectorXd* warm_start = nullptr,
                                  bool record_trace = false);

enum class FdSolver { kAmp, kCoordinateDescent };

struct SteinOptions {
  FdSolver solver = FdSolver::kCoordinateDescent;
  OracleOptions oracle;
  AmpOptions amp{.tol = 1e-11, .max_sweeps = 20000};
  /// Warm-start point for the base solve; the base fixed point otherwise.
  const VectorXd* base_x = nullptr;
};

/// (1/M) sum_mu d y_hat_mu / d y_mu by central differences, re-solving warm
/// started from the unperturbed solution. Falls back to one-sided
/// differences for an entry whose perturbed solve fails; throws
/// SolverFailure if both sides fail.
double stein_divergence_fd(const RegressionInstance& inst, const PenaltySpec& spec,
                           const SteinOptions& opts = {});

}  // namespace ampgdf
