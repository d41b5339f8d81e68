#pragma once

#include "ampgdf/penalty.hpp"

namespace ampgdf {

/// Ensemble parameters for the i.i.d. Gaussian design with y ~ N(m_y, sigma_y2).
struct ReplicaInputs {
  PenaltySpec spec;
  double alpha = 0.5;  // M / N
  double sigma_y2 = 1.0;
  double m_y = 0.0;
};

struct ReplicaOptions {
  double tol = 1e-10;
  int max_iters = 200000;
  double damping = 0.5;
  /// |Q_hat (a-1) - 1| (SCAD) or |Q_hat a - 1| (MCP) below this is unstable.
  double denominator_guard = 1e-6;
};

/// Replica-symmetric order parameters at the saddle point.
struct ReplicaFixedPoint {
  double Q = 0.0;
  double chi = 0.0;
  double Q_hat = 1.0;
  double chi_hat = 0.0;
  double rho_hat = 0.0;  // fraction of nonzero coefficients
  double gamma = 0.0;    // transient-region term (gamma_S or gamma_M), 0 for L1
  double df = 0.0;
  double alpha = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped fixed-point iteration on (Q, chi). Returns the last iterate with
/// converged == false when the budget runs out on a slowly converging
/// sequence; throws UnstableRegion when a transient-branch denominator
/// collapses or the iterates keep oscillating.
ReplicaFixedPoint replica_solve(const ReplicaInputs& in, const ReplicaOptions& opts = {});

/// chi / (1 + chi).
double replica_gdf(const ReplicaFixedPoint& fp);

/// rho_hat/alpha + gamma/(Q_hat(a-1) - 1) for SCAD, rho_hat/alpha +
/// gamma/(Q_hat a - 1) for MCP, rho_hat/alpha for L1.
double replica_gdf_decomposed(const ReplicaFixedPoint& fp, const PenaltySpec& spec);

/// Expected prediction error minus expected AIC as printed for the replica
/// solution: gamma sigma_y2 / (Q_hat(a-1) - 1) for SCAD, gamma sigma_y2 /
/// (Q_hat a - 1) for MCP, 0 for L1. Twice this value equals
/// 2 sigma_y2 (df - rho_hat/alpha).
double aic_gap(const ReplicaFixedPoint& fp, const PenaltySpec& spec, double sigma_y2);

/// E_z[x*(z)^2] over z ~ N(0, 1) where x*(z) solves the scalar problem with
/// variance 1/Q_hat and rescaled field sqrt(chi_hat) z. Adaptive
/// Gauss-Kronrod between the branch breakpoints.
double effective_second_moment(const PenaltySpec& spec, double Q_hat, double chi_hat);

}  // namespace ampgdf
