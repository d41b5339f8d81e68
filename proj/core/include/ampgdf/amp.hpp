#pragma once

#include <optional>
#include <vector>

#include "ampgdf/penalty.hpp"
#include "ampgdf/regression.hpp"

namespace ampgdf {

/// Per-coordinate and per-row AMP variables. `V` and `sigma2` hold the
/// values computed at the start of the most recent sweep, `a` and `v` the
/// values produced by it.
struct AmpState {
  VectorXd a;       // posterior means, length N
  VectorXd v;       // rescaled variances, length N
  VectorXd omega;   // length M
  VectorXd V;       // length M
  VectorXd R;       // length N
  VectorXd sigma2;  // length N
  int iter = 0;
};

struct AmpOptions {
  double tol = 1e-8;
  int max_sweeps = 2000;
  /// Weight of the previous (a, v) in the damped update, in [0, 1).
  double damping = 0.3;
  /// Dampings tried in order, each from the same start, when the previous
  /// attempt diverged or ran out of sweeps.
  std::vector<double> fallback_damping{0.7, 0.9};
  /// Starting rescaled variance when no warm start is given.
  double initial_variance = 0.0;
  std::optional<AmpState> init;
};

struct FixedPointReport {
  AmpState state;
  bool converged = false;
  double residual = 0.0;  // max |a_t - a_{t-1}|
  int sweeps_used = 0;  // in the attempt that produced `state`
  int attempts = 0;
  double damping_used = 0.0;
  VectorXd y_hat;
};

/// Magnitude above which V or |a| counts as divergence.
inline constexpr double kDivergenceGuard = 1e12;

/// a = 0, v = initial_variance, omega = y, V = A^2 v.
AmpState initial_state(const RegressionInstance& inst, double initial_variance = 0.0);

/// One synchronous AMP update. Throws NumericalDivergence on overflow or when
/// the effective variance leaves the range where the scalar prox is defined.
AmpState amp_sweep(const AmpState& state, const RegressionInstance& inst, const PenaltySpec& spec,
                   double damping);

/// Iterates amp_sweep until the max-norm change of `a` drops to opts.tol or
/// the sweep budget runs out, restarting with each fallback damping on
/// failure. Non-convergence is reported, not thrown; NumericalDivergence
/// escapes only when every attempt diverged.
FixedPointReport amp_solve(const RegressionInstance& inst, const PenaltySpec& spec,
                           const AmpOptions& opts = {});

/// max_i |a_i - f_a(Sigma2_i, R_i)| with (Sigma2, R) recomputed from `state`.
double stationarity_residual(const AmpState& state, const RegressionInstance& inst,
                             const PenaltySpec& spec);

}  // namespace ampgdf
