#include "ampgdf/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ampgdf/csv.hpp"
#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

using Rng = std::mt19937_64;

VectorXd standard_normal(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

MatrixXd standard_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(rows, cols);
  // Column-major fill keeps the stream order independent of Eigen internals.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// Column-wise population standardisation. Throws DataError on a constant column.
void standardize_columns(MatrixXd& X) {
  const double m = static_cast<double>(X.rows());
  for (Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    X.col(j).array() -= mean;
    const double sd = std::sqrt(X.col(j).squaredNorm() / m);
    if (!(sd > 0.0)) throw DataError("standardize: column " + std::to_string(j) + " is constant");
    X.col(j) /= sd;
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RegressionInstance gen_gaussian_ensemble(const SyntheticConfig& cfg) {
  if (cfg.N < 1 || cfg.M < 1) throw InvalidArgument("gen_gaussian_ensemble: N and M must be >= 1");
  if (!(cfg.sigma_y2 > 0.0)) throw InvalidArgument("gen_gaussian_ensemble: sigma_y2 must be positive");
  Rng rng(cfg.seed);
  RegressionInstance inst;
  inst.A = standard_normal(cfg.M, cfg.N, rng) / std::sqrt(static_cast<double>(cfg.M));
  if (cfg.planted) {
    if (cfg.planted->x0.size() != cfg.N) throw DimensionMismatch("gen_gaussian_ensemble: x0 length");
    inst.sigma_y2 = cfg.planted->sigma * cfg.planted->sigma;
    inst.y = inst.A * cfg.planted->x0 + cfg.planted->sigma * standard_normal(cfg.M, rng);
  } else {
    inst.sigma_y2 = cfg.sigma_y2;
    inst.y = std::sqrt(cfg.sigma_y2) * standard_normal(cfg.M, rng);
  }
  return inst;
}

VectorXd gen_planted(const MatrixXd& A, const VectorXd& x0, double sigma, std::uint64_t seed) {
  if (A.cols() != x0.size()) {
    throw DimensionMismatch("gen_planted: A has " + std::to_string(A.cols()) + " columns but x0 has " +
                            std::to_string(x0.size()) + " entries");
  }
  Rng rng(seed);
  VectorXd y = A * x0;
  if (sigma != 0.0) y += sigma * standard_normal(A.rows(), rng);
  return y;
}

MatrixXd gen_equicorrelated(Index M, Index N, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("gen_equicorrelated: rho must lie in [0, 1)");
  Rng rng(seed);
  const VectorXd factor = standard_normal(M, rng);
  MatrixXd A = std::sqrt(1.0 - rho) * standard_normal(M, N, rng);
  A.colwise() += std::sqrt(rho) * factor;
  return A / std::sqrt(static_cast<double>(M));
}

double max_abs_correlation(const MatrixXd& X) {
  MatrixXd Z = X;
  standardize_columns(Z);
  MatrixXd C = (Z.transpose() * Z) / static_cast<double>(Z.rows());
  C.diagonal().setZero();
  return C.cwiseAbs().maxCoeff();
}

Table gen_observational_table(std::uint64_t seed, Index M, Index N, double max_corr) {
  constexpr Index kGroupSize = 5;
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> loading(0.1, 0.5);
    std::student_t_distribution<double> heavy(4.0);
    const Index groups = (N + kGroupSize - 1) / kGroupSize;
    const MatrixXd factors = standard_normal(M, groups, rng);

    Table t;
    t.X.resize(M, N);
    for (Index j = 0; j < N; ++j) {
      const double c = loading(rng);
      VectorXd noise(M);
      if (j % 3 == 2) {
        // t(4) has variance 2.
        for (Index i = 0; i < M; ++i) noise[i] = heavy(rng) / std::sqrt(2.0);
      } else {
        noise = standard_normal(M, rng);
      }
      t.X.col(j) = std::sqrt(c) * factors.col(j / kGroupSize) + std::sqrt(1.0 - c) * noise;
      t.predictor_names.push_back("x" + std::to_string(j + 1));
    }
    if (max_abs_correlation(t.X) > max_corr) continue;

    // Response driven by a few predictors with decaying standardised effects.
    static constexpr double kEffects[] = {0.45, -0.35, 0.3, 0.25, -0.2, 0.15, 0.12, -0.1, 0.08, 0.05};
    std::vector<Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    MatrixXd Z = t.X;
    standardize_columns(Z);
    t.y = 0.8 * standard_normal(M, rng);
    const std::size_t n_effects = std::min<std::size_t>(std::size(kEffects), order.size());
    for (std::size_t k = 0; k < n_effects; ++k) t.y += kEffects[k] * Z.col(order[k]);
    return t;
  }
  throw NumericalError("gen_observational_table: could not meet the correlation bound");
}

PreparedData prepare_real_data(const Table& table, Index K) {
  if (table.X.rows() != table.y.size()) throw DimensionMismatch("prepare_real_data: row count mismatch");
  if (K < 0 || K > table.X.cols()) {
    throw InvalidArgument("prepare_real_data: K must lie in [0, N], got " + std::to_string(K));
  }
  std::vector<Index> keep;
  for (Index i = 0; i < table.X.rows(); ++i) {
    if (table.X.row(i).allFinite() && std::isfinite(table.y[i])) keep.push_back(i);
  }
  const Index m = static_cast<Index>(keep.size());
  const Index n = table.X.cols();
  if (m < 2) throw DataError("prepare_real_data: fewer than two complete rows");

  MatrixXd Z(m, n);
  VectorXd y(m);
  for (Index r = 0; r < m; ++r) {
    Z.row(r) = table.X.row(keep[static_cast<std::size_t>(r)]);
    y[r] = table.y[keep[static_cast<std::size_t>(r)]];
  }
  standardize_columns(Z);
  {
    MatrixXd ycol = y;
    standardize_columns(ycol);
    y = ycol.col(0);
  }

  PreparedData out;
  out.dropped_rows = table.X.rows() - m;
  out.inst.A = Z / std::sqrt(static_cast<double>(m));
  out.inst.y = y;

  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(out.inst.A);
  out.x_ols = cod.solve(y);
  out.rank_warning = m < n || cod.rank() < n;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(out.x_ols[a]) > std::abs(out.x_ols[b]);
  });
  out.top_k.assign(order.begin(), order.begin() + K);
  std::sort(out.top_k.begin(), out.top_k.end());

  out.x0 = VectorXd::Zero(n);
  for (Index i : out.top_k) out.x0[i] = out.x_ols[i];
  out.sigma_hat2 = (y - out.inst.A * out.x0).squaredNorm() / static_cast<double>(m);
  out.inst.sigma_y2 = out.sigma_hat2;
  return out;
}

PreparedData prepare_real_data(const std::string& csv_path, Index K) {
  return prepare_real_data(read_table_csv(csv_path), K);
}

}  // namespace ampgdf
