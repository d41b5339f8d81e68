#pragma once

#include <vector>

#include "ampgdf/penalty.hpp"
#include "ampgdf/regression.hpp"

namespace ampgdf {

/// Linearised stationarity system restricted to the AMP support K.
struct SupportSystem {
  std::vector<Index> support;  // ascending, 0-based
  MatrixXd A_K;
  VectorXd x_K;
  VectorXd psi;  // 0/1, soft-threshold branch (SCAD; all ones for L1)
  VectorXd phi;  // 0/1, transient branch (SCAD and MCP)
  VectorXd signs;
  MatrixXd U;  // (A_K^T A_K - c * Phi)^{-1}
  double condition = 1.0;
  int passes = 0;
};

struct SupportOptions {
  int max_reclassify = 20;
  double max_condition = 1e12;
};

/// K = { i : |a_i| > support_tol }, ascending and 0-based.
std::vector<Index> extract_support(const VectorXd& a, double support_tol);

/// Solves -A_K^T y + A_K^T A_K x_K + J'(x_K) = 0 with J' linearised on the
/// branches read from x_init (restricted to K), re-classifying until the
/// solution reproduces its own branches and signs.
///
/// Throws EmptySupport, SingularSystem (condition above opts.max_condition,
/// e.g. |K| > M) or ReclassificationLoop.
SupportSystem solve_support_system(const RegressionInstance& inst, const std::vector<Index>& support,
                                   const VectorXd& x_init, const PenaltySpec& spec,
                                   const SupportOptions& opts = {});

/// v_tilde_i = U_ii. Throws NegativeCorrectedVariance if any U_ii <= 0.
VectorXd corrected_variances(const SupportSystem& sys, const PenaltySpec& spec);

/// (1/M) sum_mu Vt_mu / (1 + Vt_mu) with Vt_mu = sum_{i in K} A_{mu i}^2 v_tilde_i.
double corrected_gdf(const MatrixXd& A, const std::vector<Index>& support, const VectorXd& v_tilde);

}  // namespace ampgdf
