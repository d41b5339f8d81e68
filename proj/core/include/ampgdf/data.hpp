#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ampgdf/regression.hpp"

namespace ampgdf {

/// SplitMix64 mix of (base, stream). Gives independent, order-free RNG seeds
/// for parallel work items.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

struct PlantedSignal {
  VectorXd x0;
  double sigma = 1.0;
};

struct SyntheticConfig {
  Index N = 200;
  Index M = 100;
  double sigma_y2 = 1.0;
  std::uint64_t seed = 0;
  /// When set, y = A x0 + sigma xi and sigma_y2 is taken as sigma^2.
  std::optional<PlantedSignal> planted;
};

/// A_{mu i} ~ N(0, 1/M); y ~ N(0, sigma_y2) unless a planted signal is given.
RegressionInstance gen_gaussian_ensemble(const SyntheticConfig& cfg);

/// y* = A x0 + sigma xi with xi i.i.d. standard normal.
VectorXd gen_planted(const MatrixXd& A, const VectorXd& x0, double sigma, std::uint64_t seed);

/// M x N design whose columns have pairwise correlation rho and entries of
/// variance 1/M (shared Gaussian factor plus idiosyncratic noise).
MatrixXd gen_equicorrelated(Index M, Index N, double rho, std::uint64_t seed);

/// Named predictor columns plus a response, as read from / written to CSV.
struct Table {
  std::vector<std::string> predictor_names;
  MatrixXd X;  // rows = observations
  VectorXd y;
};

/// Synthetic stand-in for a standardised observational data set: M rows,
/// N correlated, partly heavy-tailed predictors with every pairwise sample
/// correlation at most max_corr in absolute value, and a response driven by
/// a handful of them.
Table gen_observational_table(std::uint64_t seed, Index M = 302, Index N = 70, double max_corr = 0.685);

/// Largest absolute off-diagonal sample correlation between columns of X.
double max_abs_correlation(const MatrixXd& X);

struct PreparedData {
  /// Standardised design scaled by 1/sqrt(M) (unit column norms), the
  /// standardised response, and sigma_y2 = sigma_hat2.
  RegressionInstance inst;
  VectorXd x_ols;
  VectorXd x0;
  std::vector<Index> top_k;  // ascending
  double sigma_hat2 = 0.0;
  Index dropped_rows = 0;
  /// Set when the pseudo-inverse had to handle a rank-deficient design.
  bool rank_warning = false;
};

/// Drops rows with missing values, standardises every column and the
/// response, fits OLS through the pseudo-inverse, keeps the K largest
/// |x_ols| as x0 and sets sigma_hat2 = ||y - A x0||^2 / M.
PreparedData prepare_real_data(const Table& table, Index K);
PreparedData prepare_real_data(const std::string& csv_path, Index K);

}  // namespace ampgdf
