#include "ampgdf/sweep.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ampgdf/csv.hpp"
#include "ampgdf/errors.hpp"
#include "ampgdf/parallel.hpp"

namespace ampgdf {
namespace {

struct SampleOutcome {
  bool ok = false;
  std::string failure;
  GdfReport report;
  std::optional<double> pre_mc;
};

struct Sample {
  RegressionInstance inst;
  // Noise-free test mean and sigma, when the generative model is known.
  std::optional<VectorXd> test_mean;
  double test_sigma = 0.0;
};

Sample draw_sample(const SampleSource& source, int s, std::uint64_t seed) {
  const auto stream = static_cast<std::uint64_t>(s);
  return std::visit(
      [&](const auto& src) -> Sample {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, FixedSource>) {
          return {src.inst, std::nullopt, 0.0};
        } else if constexpr (std::is_same_v<T, PlantedSource>) {
          Sample out;
          out.inst.A = src.A;
          out.inst.y = gen_planted(src.A, src.x0, src.sigma, derive_seed(seed, 2 * stream));
          out.inst.sigma_y2 = src.sigma * src.sigma;
          out.test_mean = src.A * src.x0;
          out.test_sigma = src.sigma;
          return out;
        } else {
          SyntheticConfig cfg = src.cfg;
          cfg.seed = derive_seed(seed, 2 * stream);
          Sample out;
          out.inst = gen_gaussian_ensemble(cfg);
          out.test_mean = cfg.planted ? VectorXd(out.inst.A * cfg.planted->x0) : VectorXd::Zero(cfg.M);
          out.test_sigma = std::sqrt(out.inst.sigma_y2);
          return out;
        }
      },
      source);
}

// Sufficient statistics of n_test standard normal test-noise vectors. The
// Monte-Carlo average of ||m + sigma xi_t - y_hat||^2 / M over the draws only
// depends on the mean of xi_t and the mean of ||xi_t||^2, so each training
// sample draws its test noise once and reuses it at every grid point.
struct TestNoise {
  VectorXd mean;
  double mean_sq = 0.0;
};

TestNoise draw_test_noise(Index m, int n_test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TestNoise out{VectorXd::Zero(m), 0.0};
  for (int t = 0; t < n_test; ++t) {
    for (Index mu = 0; mu < m; ++mu) {
      const double z = normal(rng);
      out.mean[mu] += z;
      out.mean_sq += z * z;
    }
  }
  out.mean /= n_test;
  out.mean_sq /= n_test;
  return out;
}

double monte_carlo_prediction_error(const VectorXd& test_mean, double sigma, const VectorXd& y_hat,
                                    const TestNoise& noise) {
  const VectorXd bias = test_mean - y_hat;
  const double m = static_cast<double>(bias.size());
  return (bias.squaredNorm() + 2.0 * sigma * bias.dot(noise.mean) + sigma * sigma * noise.mean_sq) / m;
}

std::string short_reason(const std::string& what) {
  const auto colon = what.find(':');
  return colon == std::string::npos ? what : what.substr(0, colon);
}

double round_grid(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return std::stod(ss.str());
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const std::string s(text);
  std::vector<double> out;
  try {
    if (s.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
      if (parts.size() != 3) throw InvalidArgument("grid '" + s + "' must be lo:step:hi");
      const double lo = parts[0];
      const double step = parts[1];
      const double hi = parts[2];
      if (!(step > 0.0) || hi < lo) throw InvalidArgument("grid '" + s + "' needs step > 0 and hi >= lo");
      const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
      for (long k = 0; k < n; ++k) out.push_back(round_grid(lo + step * static_cast<double>(k)));
    } else {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
      }
    }
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("cannot parse grid '" + s + "'");
  } catch (const std::out_of_range&) {
    throw InvalidArgument("grid value out of range in '" + s + "'");
  }
  if (out.empty()) throw InvalidArgument("grid '" + s + "' is empty");
  return out;
}

SweepResult sweep(const SampleSource& source, const SweepConfig& cfg) {
  if (cfg.lambdas.empty()) throw InvalidArgument("sweep: empty lambda grid");
  const bool uses_a = cfg.family != Family::kL1;
  if (uses_a && cfg.as.empty()) throw InvalidArgument("sweep: empty a grid");
  const int n_train = std::holds_alternative<FixedSource>(source) ? 1 : cfg.n_train;
  if (n_train < 1) throw InvalidArgument("sweep: n_train must be >= 1");

  std::vector<GridPoint> grid;
  for (double a : uses_a ? cfg.as : std::vector<double>{0.0}) {
    for (double lambda : cfg.lambdas) {
      grid.push_back({lambda, uses_a ? std::optional<double>(a) : std::nullopt});
    }
  }
  // Validate every spec before any work starts.
  for (const auto& g : grid) (void)PenaltySpec::make(cfg.family, g.lambda, g.a.value_or(0.0));

  const std::size_t per_point = static_cast<std::size_t>(n_train);
  std::vector<std::optional<TestNoise>> test_noise(per_point);
  if (cfg.n_test > 0 && !std::holds_alternative<FixedSource>(source)) {
    const Index m = std::visit(
        [](const auto& src) -> Index {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, PlantedSource>) {
            return src.A.rows();
          } else if constexpr (std::is_same_v<T, GaussianSource>) {
            return src.cfg.M;
          } else {
            return 0;
          }
        },
        source);
    parallel_for(
        per_point,
        [&](std::size_t s) {
          test_noise[s] = draw_test_noise(m, cfg.n_test, derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(s) + 1));
        },
        cfg.threads);
  }
  std::vector<SampleOutcome> outcomes(grid.size() * per_point);
  parallel_for(
      outcomes.size(),
      [&](std::size_t item) {
        const std::size_t g = item / per_point;
        const int s = static_cast<int>(item % per_point);
        SampleOutcome& out = outcomes[item];
        const PenaltySpec spec = PenaltySpec::make(cfg.family, grid[g].lambda, grid[g].a.value_or(0.0));
        try {
          const Sample sample = draw_sample(source, s, cfg.seed);
          const FixedPointReport fp = amp_solve(sample.inst, spec, cfg.amp);
          if (!fp.converged) {
            out.failure = "no_convergence";
            return;
          }
          out.report = evaluate_fixed_point(sample.inst, fp, spec, cfg.estimators);
          if (sample.test_mean && test_noise[static_cast<std::size_t>(s)]) {
            out.pre_mc = monte_carlo_prediction_error(*sample.test_mean, sample.test_sigma, fp.y_hat,
                                                      *test_noise[static_cast<std::size_t>(s)]);
          }
          out.ok = true;
        } catch (const NumericalError& e) {
          out.failure = short_reason(e.what());
        }
      },
      cfg.threads);

  SweepResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepRow row;
    row.lambda = grid[g].lambda;
    row.a = grid[g].a;
    double df2_sum = 0.0;
    double pre2_sum = 0.0;
    double mc_sum = 0.0;
    int mc_count = 0;
    std::string first_failure;
    for (std::size_t s = 0; s < per_point; ++s) {
      const SampleOutcome& o = outcomes[g * per_point + s];
      if (!o.ok) {
        ++row.samples_failed;
        if (first_failure.empty()) first_failure = o.failure;
        continue;
      }
      ++row.samples_ok;
      const GdfReport& r = o.report;
      row.epsilon_train += r.epsilon_train;
      row.df1 += r.df1;
      row.df1h += r.df1_homogeneous;
      row.aic += r.aic;
      row.pre_est1 += r.epsilon_pre_1;
      row.l0 += static_cast<double>(r.l0);
      if (r.df2) {
        df2_sum += *r.df2;
        pre2_sum += *r.epsilon_pre_2;
      } else {
        ++row.df2_missing;
      }
      if (o.pre_mc) {
        mc_sum += *o.pre_mc;
        ++mc_count;
      }
    }
    if (row.samples_ok > 0) {
      const double n = row.samples_ok;
      row.epsilon_train /= n;
      row.df1 /= n;
      row.df1h /= n;
      row.aic /= n;
      row.pre_est1 /= n;
      row.l0 /= n;
      const int with_df2 = row.samples_ok - row.df2_missing;
      if (with_df2 > 0) {
        row.df2 = df2_sum / with_df2;
        row.pre_est2 = pre2_sum / with_df2;
      }
      if (mc_count > 0) row.pre_mc = mc_sum / mc_count;
    }
    if (row.samples_ok == 0) {
      row.status = "failed:" + first_failure;
    } else if (row.samples_failed > 0) {
      row.status = "partial:" + std::to_string(row.samples_failed) + "/" + std::to_string(per_point) + " " +
                   first_failure;
    } else {
      row.status = "ok";
    }
    if (row.samples_ok > 0 && row.df2_missing > 0) {
      row.status += ";df2_missing:" + std::to_string(row.df2_missing);
    }
    result.rows.push_back(std::move(row));
  }

  auto select = [&](const std::string& name, auto value_of) {
    double best = std::numeric_limits<double>::infinity();
    const SweepRow* arg = nullptr;
    for (const auto& row : result.rows) {
      if (row.samples_ok == 0 || row.samples_failed > 0) continue;
      const std::optional<double> v = value_of(row);
      if (v && *v < best) {
        best = *v;
        arg = &row;
      }
    }
    if (arg) result.selected_by[name] = {arg->lambda, arg->a};
  };
  select("pred_est_1", [](const SweepRow& r) { return std::optional<double>(r.pre_est1); });
  select("pred_est_2", [](const SweepRow& r) { return r.df2_missing == 0 ? r.pre_est2 : std::nullopt; });
  select("aic", [](const SweepRow& r) { return std::optional<double>(r.aic); });
  select("true_pred", [](const SweepRow& r) { return r.pre_mc; });
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << "lambda,a,epsilon_train,df1,df1h,df2,aic,pre_est1,pre_est2,pre_mc,l0,status\n";
  for (const auto& r : result.rows) {
    const bool have = r.samples_ok > 0;
    auto num = [&](double v) { return have ? format_double(v) : std::string(); };
    out << format_double(r.lambda) << ',' << opt(r.a) << ',' << num(r.epsilon_train) << ',' << num(r.df1) << ','
        << num(r.df1h) << ',' << opt(r.df2) << ',' << num(r.aic) << ',' << num(r.pre_est1) << ','
        << opt(r.pre_est2) << ',' << opt(r.pre_mc) << ',' << num(r.l0) << ',' << r.status << '\n';
  }
}

}  // namespace ampgdf
