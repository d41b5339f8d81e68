#include "ampgdf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

constexpr double kInvPhi = 0.61803398874989484820;

double scalar_objective(double t, double w, double sigma2, const PenaltySpec& spec) {
  const double d = t - w;
  return d * d / (2.0 * sigma2) + penalty_value(t, spec);
}

double default_fd_step(const VectorXd& y) {
  const double n = static_cast<double>(y.size());
  const double mean = y.mean();
  const double var = n > 1 ? (y.array() - mean).square().sum() / (n - 1.0) : 0.0;
  const double sd = std::sqrt(var);
  return sd > 0.0 ? 1e-4 * sd : 1e-4;
}

}  // namespace

double grid_prox(double w, double sigma2, const PenaltySpec& spec, const OracleOptions& opts) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("grid_prox: sigma2 must be positive");
  if (opts.grid_points < 1001) throw InvalidArgument("grid_prox: grid_points must be >= 1001");
  // Every penalty shrinks towards zero, so the minimiser lies in [-|w|, |w|].
  const double h = std::max(opts.grid_halfwidth, std::abs(w) + 1.0);
  const int n = opts.grid_points;
  const double step = 2.0 * h / static_cast<double>(n - 1);

  int best = 0;
  double best_val = INFINITY;
  for (int k = 0; k < n; ++k) {
    const double t = -h + step * k;
    const double f = scalar_objective(t, w, sigma2, spec);
    if (f < best_val) {
      best_val = f;
      best = k;
    }
  }
  double lo = -h + step * std::max(best - 1, 0);
  double hi = -h + step * std::min(best + 1, n - 1);
  const double grid_best = -h + step * best;

  auto f = [&](double t) { return scalar_objective(t, w, sigma2, spec); };
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < opts.refine_iters && hi - lo > 1e-13; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  const double refined = 0.5 * (lo + hi);
  return f(refined) <= best_val ? refined : grid_best;
}

CdResult coordinate_descent_solve(const RegressionInstance& inst, const PenaltySpec& spec,
                                  const OracleOptions& opts, const VectorXd* warm_start,
                                  bool record_trace) {
  inst.validate();
  const Index n = inst.cols();
  CdResult res;
  res.x = warm_start ? *warm_start : VectorXd::Zero(n);
  if (res.x.size() != n) throw DimensionMismatch("coordinate_descent: warm start has wrong length");

  const VectorXd col_sq = inst.A.colwise().squaredNorm().transpose();
  VectorXd resid = inst.y - inst.A * res.x;

  for (int sweep = 1; sweep <= opts.cd_max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double sigma2 = 1.0 / col_sq[i];
      const double w = res.x[i] + inst.A.col(i).dot(resid) * sigma2;
      double updated;
      if (sigma2 < spec.max_effective_variance()) {
        updated = prox(w, sigma2, spec).theta_hat;
      } else {
        // Short column: the scalar problem is nonconvex, minimise it globally.
        updated = grid_prox(w, sigma2, spec, opts);
      }
      const double delta = updated - res.x[i];
      if (delta != 0.0) {
        resid.noalias() -= delta * inst.A.col(i);
        res.x[i] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    res.sweeps = sweep;
    if (record_trace) res.objective_trace.push_back(objective(inst, res.x, spec));
    if (max_change <= opts.cd_tol) return res;
  }
  throw NoConvergence("coordinate_descent: no convergence after " +
                      std::to_string(opts.cd_max_sweeps) + " sweeps");
}

double stein_divergence_fd(const RegressionInstance& inst, const PenaltySpec& spec,
                           const SteinOptions& opts) {
  inst.validate();
  const Index m = inst.rows();
  const double h = opts.oracle.fd_step > 0.0 ? opts.oracle.fd_step : default_fd_step(inst.y);

  VectorXd base_fit;
  VectorXd base_x;
  std::optional<AmpState> base_state;
  if (opts.solver == FdSolver::kAmp) {
    AmpOptions amp = opts.amp;
    FixedPointReport fp = amp_solve(inst, spec, amp);
    if (!fp.converged) throw SolverFailure("stein_divergence_fd: base AMP solve did not converge");
    base_fit = fp.y_hat;
    base_state = std::move(fp.state);
  } else {
    try {
      CdResult cd = coordinate_descent_solve(inst, spec, opts.oracle, opts.base_x);
      base_x = std::move(cd.x);
      base_fit = inst.A * base_x;
    } catch (const NumericalError& e) {
      throw SolverFailure(std::string("stein_divergence_fd: base solve failed: ") + e.what());
    }
  }

  RegressionInstance perturbed = inst;
  auto fitted = [&](Index mu) -> std::optional<double> {
    try {
      if (opts.solver == FdSolver::kAmp) {
        AmpOptions amp = opts.amp;
        amp.init = base_state;
        const FixedPointReport fp = amp_solve(perturbed, spec, amp);
        if (!fp.converged) return std::nullopt;
        return fp.y_hat[mu];
      }
      const CdResult cd = coordinate_descent_solve(perturbed, spec, opts.oracle, &base_x);
      return inst.A.row(mu).dot(cd.x);
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };

  double total = 0.0;
  for (Index mu = 0; mu < m; ++mu) {
    perturbed.y[mu] = inst.y[mu] + h;
    const auto plus = fitted(mu);
    perturbed.y[mu] = inst.y[mu] - h;
    const auto minus = fitted(mu);
    perturbed.y[mu] = inst.y[mu];

    if (plus && minus) {
      total += (*plus - *minus) / (2.0 * h);
    } else if (plus) {
      total += (*plus - base_fit[mu]) / h;
    } else if (minus) {
      total += (base_fit[mu] - *minus) / h;
    } else {
      throw SolverFailure("stein_divergence_fd: both perturbed solves failed for row " +
                          std::to_string(mu));
    }
  }
  return total / static_cast<double>(m);
}

}  // namespace ampgdf
