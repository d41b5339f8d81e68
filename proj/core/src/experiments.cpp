#include "ampgdf/experiments.hpp"

#include <cmath>
#include <string>

#include "ampgdf/data.hpp"
#include "ampgdf/errors.hpp"
#include "ampgdf/estimators.hpp"
#include "ampgdf/parallel.hpp"

namespace ampgdf {

std::vector<ValidationPoint> validate_against_replica(const ValidationConfig& cfg) {
  if (cfg.samples < 1) throw InvalidArgument("validate: samples must be >= 1");
  const double alpha = static_cast<double>(cfg.M) / static_cast<double>(cfg.N);
  const std::size_t n_lambda = cfg.lambdas.size();
  const auto per_point = static_cast<std::size_t>(cfg.samples);

  struct Outcome {
    bool ok = false;
    double df1h = 0.0;
    double df1 = 0.0;
    double l0_over_m = 0.0;
  };
  std::vector<Outcome> outcomes(n_lambda * per_point);
  parallel_for(
      outcomes.size(),
      [&](std::size_t item) {
        const std::size_t g = item / per_point;
        const std::size_t s = item % per_point;
        const PenaltySpec spec = PenaltySpec::make(cfg.family, cfg.lambdas[g], cfg.a);
        SyntheticConfig sc{.N = cfg.N, .M = cfg.M, .sigma_y2 = cfg.sigma_y2, .seed = derive_seed(cfg.seed, s)};
        const RegressionInstance inst = gen_gaussian_ensemble(sc);
        try {
          const FixedPointReport fp = amp_solve(inst, spec, cfg.amp);
          if (!fp.converged) return;
          Outcome& o = outcomes[item];
          o.df1h = gdf_amp_homogeneous(fp.state.V);
          o.df1 = gdf_amp(fp.state.V);
          o.l0_over_m = static_cast<double>(count_support(fp.state.a, 1e-8)) / static_cast<double>(cfg.M);
          o.ok = true;
        } catch (const NumericalError&) {
        }
      },
      cfg.threads);

  std::vector<ValidationPoint> points;
  for (std::size_t g = 0; g < n_lambda; ++g) {
    ValidationPoint p;
    p.lambda = cfg.lambdas[g];
    const PenaltySpec spec = PenaltySpec::make(cfg.family, p.lambda, cfg.a);
    try {
      ReplicaFixedPoint fp = replica_solve({spec, alpha, cfg.sigma_y2, 0.0}, cfg.replica);
      p.replica_status = fp.converged ? "ok" : "no_convergence";
      p.replica = fp;
    } catch (const UnstableRegion&) {
      p.replica_status = "unstable";
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < per_point; ++s) {
      const Outcome& o = outcomes[g * per_point + s];
      ++p.attempted;
      if (!o.ok) continue;
      ++p.converged;
      sum += o.df1h;
      sum_sq += o.df1h * o.df1h;
      p.df1_mean += o.df1;
      p.l0_over_m_mean += o.l0_over_m;
    }
    if (p.converged > 0) {
      const double n = p.converged;
      p.df1h_mean = sum / n;
      p.df1_mean /= n;
      p.l0_over_m_mean /= n;
      const double var = n > 1 ? std::max(0.0, (sum_sq - n * p.df1h_mean * p.df1h_mean) / (n - 1.0)) : 0.0;
      p.df1h_se = std::sqrt(var / n);
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<SteinCheckRow> stein_check(const SteinCheckConfig& cfg) {
  if (cfg.instances < 1) throw InvalidArgument("stein_check: instances must be >= 1");
  const PenaltySpec spec = PenaltySpec::make(cfg.family, cfg.lambda, cfg.a);
  std::vector<SteinCheckRow> rows(static_cast<std::size_t>(cfg.instances));
  parallel_for(
      rows.size(),
      [&](std::size_t k) {
        SteinCheckRow& row = rows[k];
        row.instance = static_cast<int>(k);
        const std::uint64_t seed = derive_seed(cfg.seed, k);
        RegressionInstance inst;
        if (cfg.rho > 0.0) {
          inst.A = gen_equicorrelated(cfg.M, cfg.N, cfg.rho, seed);
          inst.y = gen_planted(inst.A, VectorXd::Zero(cfg.N), std::sqrt(cfg.sigma_y2), derive_seed(seed, 1));
          inst.sigma_y2 = cfg.sigma_y2;
        } else {
          inst = gen_gaussian_ensemble({.N = cfg.N, .M = cfg.M, .sigma_y2 = cfg.sigma_y2, .seed = seed});
        }
        try {
          const FixedPointReport fp = amp_solve(inst, spec, cfg.amp);
          if (!fp.converged) {
            row.status = "amp_no_convergence";
            return;
          }
          const GdfReport report = evaluate_fixed_point(inst, fp, spec);
          row.df1 = report.df1;
          row.df1h = report.df1_homogeneous;
          row.df2 = report.df2;
          row.l0_over_m = static_cast<double>(report.l0) / static_cast<double>(cfg.M);

          SteinOptions so;
          so.solver = cfg.solver;
          so.oracle = cfg.oracle;
          so.amp = cfg.amp;
          so.base_x = &fp.state.a;
          row.df_fd = stein_divergence_fd(inst, spec, so);
          row.ok = true;
          row.status = report.df2 ? "ok" : "df2_missing";
        } catch (const NumericalError& e) {
          row.status = e.what();
        }
      },
      cfg.threads);
  return rows;
}

}  // namespace ampgdf
