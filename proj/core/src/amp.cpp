#include "ampgdf/amp.hpp"

#include <cmath>
#include <string>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

void check_state(const AmpState& s, const RegressionInstance& inst) {
  const Index m = inst.rows();
  const Index n = inst.cols();
  if (s.a.size() != n || s.v.size() != n || s.omega.size() != m || s.V.size() != m) {
    throw DimensionMismatch("amp: state dimensions do not match the instance");
  }
}

void check_damping(double d) {
  if (!(d >= 0.0 && d < 1.0)) throw InvalidArgument("amp: damping must lie in [0, 1)");
}

AmpState sweep_impl(const AmpState& prev, const RegressionInstance& inst, const MatrixXd& A2,
                    const PenaltySpec& spec, double damping) {
  AmpState next;
  next.iter = prev.iter + 1;

  next.V = A2 * prev.v;
  const VectorXd inv_one_plus_v = (1.0 + next.V.array()).inverse().matrix();
  next.sigma2 = (A2.transpose() * inv_one_plus_v).array().inverse().matrix();

  // Onsager term uses the previous sweep's omega.
  next.omega = inst.A * prev.a -
               (next.V.array() * (inst.y - prev.omega).array() * inv_one_plus_v.array()).matrix();
  const VectorXd g_out = ((inst.y - next.omega).array() * inv_one_plus_v.array()).matrix();
  next.R = prev.a + (next.sigma2.array() * (inst.A.transpose() * g_out).array()).matrix();

  const Index n = inst.cols();
  next.a.resize(n);
  next.v.resize(n);
  for (Index i = 0; i < n; ++i) {
    ProxResult p;
    try {
      p = prox(next.R[i], next.sigma2[i], spec);
    } catch (const CurvatureError& e) {
      throw NumericalDivergence(std::string("amp: ") + e.what() + " at coordinate " +
                                std::to_string(i) + ", sweep " + std::to_string(next.iter));
    } catch (const InvalidArgument& e) {
      throw NumericalDivergence(std::string("amp: ") + e.what());
    }
    next.a[i] = (1.0 - damping) * p.theta_hat + damping * prev.a[i];
    next.v[i] = (1.0 - damping) * p.v_value + damping * prev.v[i];
  }

  const bool finite = next.a.allFinite() && next.V.allFinite() && next.omega.allFinite();
  if (!finite || next.V.maxCoeff() > kDivergenceGuard ||
      (n > 0 && next.a.cwiseAbs().maxCoeff() > kDivergenceGuard)) {
    throw NumericalDivergence("amp: iterates overflowed at sweep " + std::to_string(next.iter));
  }
  return next;
}

}  // namespace

AmpState initial_state(const RegressionInstance& inst, double initial_variance) {
  AmpState s;
  const Index n = inst.cols();
  s.a = VectorXd::Zero(n);
  s.v = VectorXd::Constant(n, initial_variance);
  s.omega = inst.y;
  s.V = inst.A.cwiseAbs2() * s.v;
  s.R = VectorXd::Zero(n);
  s.sigma2 = VectorXd::Ones(n);
  return s;
}

AmpState amp_sweep(const AmpState& state, const RegressionInstance& inst, const PenaltySpec& spec,
                   double damping) {
  check_damping(damping);
  check_state(state, inst);
  return sweep_impl(state, inst, inst.A.cwiseAbs2(), spec, damping);
}

namespace {

FixedPointReport solve_once(const RegressionInstance& inst, const MatrixXd& A2,
                            const PenaltySpec& spec, const AmpOptions& opts, double damping) {
  FixedPointReport report;
  report.damping_used = damping;
  report.state = opts.init ? *opts.init : initial_state(inst, opts.initial_variance);
  check_state(report.state, inst);

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    AmpState next = sweep_impl(report.state, inst, A2, spec, damping);
    report.residual = (next.a - report.state.a).lpNorm<Eigen::Infinity>();
    report.state = std::move(next);
    report.sweeps_used = sweep + 1;
    if (report.residual <= opts.tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace

FixedPointReport amp_solve(const RegressionInstance& inst, const PenaltySpec& spec,
                           const AmpOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("amp: tol must be positive");
  if (opts.max_sweeps < 1) throw InvalidArgument("amp: max_sweeps must be at least 1");
  check_damping(opts.damping);
  for (double d : opts.fallback_damping) check_damping(d);
  inst.validate();

  const MatrixXd A2 = inst.A.cwiseAbs2();
  std::vector<double> ladder{opts.damping};
  ladder.insert(ladder.end(), opts.fallback_damping.begin(), opts.fallback_damping.end());

  std::optional<FixedPointReport> best;
  std::optional<NumericalDivergence> last_error;
  int attempts = 0;
  for (double d : ladder) {
    ++attempts;
    try {
      FixedPointReport r = solve_once(inst, A2, spec, opts, d);
      if (r.converged || !best || r.residual < best->residual) best = std::move(r);
      if (best->converged) break;
    } catch (const NumericalDivergence& e) {
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  best->attempts = attempts;
  best->y_hat = inst.A * best->state.a;
  return std::move(*best);
}

double stationarity_residual(const AmpState& state, const RegressionInstance& inst,
                             const PenaltySpec& spec) {
  check_state(state, inst);
  const AmpState next = sweep_impl(state, inst, inst.A.cwiseAbs2(), spec, 0.0);
  return (next.a - state.a).lpNorm<Eigen::Infinity>();
}

}  // namespace ampgdf
