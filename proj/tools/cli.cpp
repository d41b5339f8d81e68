#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ampgdf/amp.hpp"
#include "ampgdf/csv.hpp"
#include "ampgdf/data.hpp"
#include "ampgdf/errors.hpp"
#include "ampgdf/estimators.hpp"
#include "ampgdf/experiments.hpp"
#include "ampgdf/sweep.hpp"

namespace ampgdf::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct DataFlags {
  std::string input;
  long k = -1;
  std::string a_csv;
  std::string y_csv;
  double sigma2 = 1.0;
};

struct AmpFlags {
  double tol = 1e-8;
  int max_sweeps = 2000;
  double damping = 0.3;
};

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--input", d.input, "CSV with predictor columns and a response column named y");
  cmd->add_option("--k", d.k, "Planted support size for --input (top-K OLS coefficients)");
  cmd->add_option("--A", d.a_csv, "Predictor matrix CSV (as written by gen)");
  cmd->add_option("--y", d.y_csv, "Response CSV (as written by gen)");
  cmd->add_option("--sigma2", d.sigma2, "Response variance")->check(CLI::PositiveNumber);
}

void add_amp_flags(CLI::App* cmd, AmpFlags& f) {
  cmd->add_option("--tol", f.tol, "AMP convergence tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-sweeps", f.max_sweeps, "AMP sweep budget per attempt");
  cmd->add_option("--damping", f.damping, "Weight of the previous iterate");
}

AmpOptions amp_options(const AmpFlags& f) {
  AmpOptions o;
  o.tol = f.tol;
  o.max_sweeps = f.max_sweeps;
  o.damping = f.damping;
  return o;
}

std::optional<double> a_for(Family family, double a) {
  return family == Family::kL1 ? std::nullopt : std::optional<double>(a);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Writes to the named file, or to `out` when the name is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream file(p);
  if (!file) throw DataError("cannot write '" + path + "'");
  write(file);
}

struct LoadedData {
  RegressionInstance inst;
  std::optional<PreparedData> prepared;
};

LoadedData load_data(const DataFlags& d) {
  const bool have_input = !d.input.empty();
  const bool have_split = !d.a_csv.empty() || !d.y_csv.empty();
  if (have_input == have_split) throw InvalidArgument("give either --input or both --A and --y");
  LoadedData out;
  if (have_input) {
    if (d.k < 0) throw InvalidArgument("--input needs --k");
    out.prepared = prepare_real_data(d.input, static_cast<Index>(d.k));
    out.inst = out.prepared->inst;
    return out;
  }
  if (d.a_csv.empty() || d.y_csv.empty()) throw InvalidArgument("--A and --y must be given together");
  Table t = read_split_csv(d.a_csv, d.y_csv);
  out.inst.A = std::move(t.X);
  out.inst.y = std::move(t.y);
  out.inst.sigma_y2 = d.sigma2;
  out.inst.validate();
  return out;
}

json report_json(const GdfReport& r, const FixedPointReport& fp, Family family, double sigma_y2) {
  return json{{"penalty", to_string(family)},
              {"lambda", r.lambda},
              {"a", optional_number(r.a)},
              {"sigma_y2", sigma_y2},
              {"converged", fp.converged},
              {"sweeps", fp.sweeps_used},
              {"attempts", fp.attempts},
              {"damping", fp.damping_used},
              {"residual", fp.residual},
              {"epsilon_train", r.epsilon_train},
              {"df1", r.df1},
              {"df1h", r.df1_homogeneous},
              {"df2", optional_number(r.df2)},
              {"df2_status", r.df2_status},
              {"aic", r.aic},
              {"pre_est1", r.epsilon_pre_1},
              {"pre_est2", optional_number(r.epsilon_pre_2)},
              {"l0", r.l0}};
}

struct SolveArgs {
  std::string penalty = "l1";
  double lambda = 1.0;
  double a = 3.7;
  DataFlags data;
  AmpFlags amp;
  std::string out;
};

int run_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  const Family family = parse_family(args.penalty);
  const PenaltySpec spec = PenaltySpec::make(family, args.lambda, args.a);
  const LoadedData data = load_data(args.data);
  const FixedPointReport fp = amp_solve(data.inst, spec, amp_options(args.amp));
  GdfReport report;
  if (fp.converged) {
    report = evaluate_fixed_point(data.inst, fp, spec);
  } else {
    report.lambda = args.lambda;
    report.a = a_for(family, args.a);
  }
  const json j = report_json(report, fp, family, data.inst.sigma_y2);
  emit(args.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  if (!fp.converged) {
    err << "AMP did not converge (residual " << fp.residual << ")\n";
    return kNumericalFailure;
  }
  return kOk;
}

struct SweepArgs {
  std::string penalty = "l1";
  std::string lambdas;
  std::string as = "3.7";
  DataFlags data;
  AmpFlags amp;
  long n = 200;
  long m = 100;
  int train = 100;
  int test = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
};

int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  SweepConfig cfg;
  cfg.family = parse_family(args.penalty);
  cfg.lambdas = parse_grid(args.lambdas);
  cfg.as = parse_grid(args.as);
  cfg.n_train = args.train;
  cfg.n_test = args.test;
  cfg.seed = args.seed;
  cfg.amp = amp_options(args.amp);

  SampleSource source;
  std::string source_name;
  if (args.data.input.empty() && args.data.a_csv.empty() && args.data.y_csv.empty()) {
    source = GaussianSource{{.N = args.n, .M = args.m, .sigma_y2 = args.data.sigma2}};
    source_name = "gaussian";
  } else {
    LoadedData data = load_data(args.data);
    if (data.prepared) {
      source = PlantedSource{data.inst.A, data.prepared->x0, std::sqrt(data.prepared->sigma_hat2)};
      source_name = "planted";
    } else {
      source = FixedSource{std::move(data.inst)};
      source_name = "fixed";
    }
  }

  const SweepResult result = sweep(source, cfg);
  emit(args.out, out, [&](std::ostream& os) { write_sweep_csv(result, os); });

  json selected = json::object();
  for (const auto& [name, point] : result.selected_by) {
    selected[name] = {{"lambda", point.lambda}, {"a", optional_number(point.a)}};
  }
  const json summary{{"selected_by", selected},
                     {"seed", args.seed},
                     {"config",
                      {{"penalty", to_string(cfg.family)},
                       {"lambda", args.lambdas},
                       {"a", args.as},
                       {"source", source_name},
                       {"input", args.data.input},
                       {"k", args.data.k},
                       {"n_train", cfg.n_train},
                       {"n_test", cfg.n_test},
                       {"tol", cfg.amp.tol},
                       {"max_sweeps", cfg.amp.max_sweeps},
                       {"damping", cfg.amp.damping}}}};
  std::string summary_path = args.summary;
  if (summary_path.empty() && !args.out.empty() && args.out != "-") {
    summary_path = (fs::path(args.out).parent_path() / "summary.json").string();
  }
  if (!summary_path.empty()) {
    emit(summary_path, out, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  }

  bool any_ok = false;
  for (const auto& row : result.rows) any_ok = any_ok || row.samples_ok > 0;
  if (!any_ok) {
    err << "every grid point failed\n";
    return kNumericalFailure;
  }
  return kOk;
}

struct ValidateArgs {
  std::string penalty = "scad";
  std::string lambdas = "0.5:0.1:2.5";
  double a = 3.7;
  std::optional<double> alpha;
  long n = 200;
  long m = 100;
  double sigma2 = 1.0;
  int samples = 1000;
  std::uint64_t seed = 0;
  AmpFlags amp;
  std::string out;
};

int run_validate(const ValidateArgs& args, std::ostream& out, std::ostream&) {
  if (args.n < 1 || args.m < 1) throw InvalidArgument("--n and --m must be positive");
  if (args.alpha && std::abs(*args.alpha - static_cast<double>(args.m) / static_cast<double>(args.n)) > 1e-9) {
    throw InvalidArgument("--alpha must equal m/n");
  }
  ValidationConfig cfg;
  cfg.family = parse_family(args.penalty);
  cfg.a = args.a;
  cfg.lambdas = parse_grid(args.lambdas);
  cfg.N = args.n;
  cfg.M = args.m;
  cfg.sigma_y2 = args.sigma2;
  cfg.samples = args.samples;
  cfg.seed = args.seed;
  cfg.amp = amp_options(args.amp);
  const auto points = validate_against_replica(cfg);

  emit(args.out, out, [&](std::ostream& os) {
    os << "lambda,replica_df,replica_rho_over_alpha,replica_status,amp_df1h,amp_df1h_se,amp_df1,amp_l0_over_m,"
          "converged,attempted\n";
    for (const auto& p : points) {
      const bool have = p.converged > 0;
      os << format_double(p.lambda) << ',' << (p.replica ? format_double(p.replica->df) : "") << ','
         << (p.replica ? format_double(p.replica->rho_hat / p.replica->alpha) : "") << ',' << p.replica_status
         << ',' << (have ? format_double(p.df1h_mean) : "") << ',' << (have ? format_double(p.df1h_se) : "") << ','
         << (have ? format_double(p.df1_mean) : "") << ',' << (have ? format_double(p.l0_over_m_mean) : "") << ','
         << p.converged << ',' << p.attempted << '\n';
    }
  });
  return kOk;
}

struct SteinArgs {
  std::string penalty = "l1";
  double lambda = 1.0;
  double a = 3.7;
  long n = 60;
  long m = 30;
  double rho = 0.0;
  double sigma2 = 1.0;
  int instances = 50;
  std::uint64_t seed = 0;
  std::string solver = "cd";
  std::string out;
};

int run_stein(const SteinArgs& args, std::ostream& out, std::ostream& err) {
  SteinCheckConfig cfg;
  cfg.family = parse_family(args.penalty);
  cfg.lambda = args.lambda;
  cfg.a = args.a;
  cfg.N = args.n;
  cfg.M = args.m;
  cfg.rho = args.rho;
  cfg.sigma_y2 = args.sigma2;
  cfg.instances = args.instances;
  cfg.seed = args.seed;
  cfg.solver = args.solver == "amp" ? FdSolver::kAmp : FdSolver::kCoordinateDescent;
  const auto rows = stein_check(cfg);

  int ok = 0;
  double gap1 = 0.0;
  emit(args.out, out, [&](std::ostream& os) {
    os << "instance,status,df1,df1h,df2,df_fd,l0_over_m\n";
    for (const auto& r : rows) {
      os << r.instance << ',' << r.status << ',';
      if (r.ok) {
        os << format_double(r.df1) << ',' << format_double(r.df1h) << ','
           << (r.df2 ? format_double(*r.df2) : "") << ',' << format_double(r.df_fd) << ','
           << format_double(r.l0_over_m);
        ++ok;
        gap1 += std::abs(r.df1 - r.df_fd);
      } else {
        os << ",,,,";
      }
      os << '\n';
    }
  });
  if (ok == 0) {
    err << "no instance produced a Stein estimate\n";
    return kNumericalFailure;
  }
  err << ok << "/" << rows.size() << " instances, mean |df1 - df_fd| = " << gap1 / ok << '\n';
  return kOk;
}

struct GenArgs {
  std::string kind = "gaussian";
  long n = 200;
  long m = 100;
  double sigma2 = 1.0;
  double rho = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& args, std::ostream& out, std::ostream&) {
  if (args.out.empty()) throw InvalidArgument("gen needs --out");
  fs::create_directories(args.out);
  if (args.kind == "observational") {
    const Table t = gen_observational_table(args.seed, args.m, args.n);
    const std::string path = (fs::path(args.out) / "data.csv").string();
    emit(path, out, [&](std::ostream& os) { write_table_csv(t, os); });
    return kOk;
  }
  RegressionInstance inst;
  if (args.kind == "gaussian") {
    inst = gen_gaussian_ensemble({.N = args.n, .M = args.m, .sigma_y2 = args.sigma2, .seed = args.seed});
  } else if (args.kind == "equicorrelated") {
    inst.A = gen_equicorrelated(args.m, args.n, args.rho, args.seed);
    inst.y = gen_planted(inst.A, VectorXd::Zero(args.n), std::sqrt(args.sigma2), derive_seed(args.seed, 1));
    inst.sigma_y2 = args.sigma2;
  } else {
    throw InvalidArgument("unknown --kind '" + args.kind + "'");
  }
  write_instance_csv(inst, args.out);
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized degrees of freedom and prediction-error estimates for penalized regression"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run AMP at one grid point and print the estimators");
  solve_cmd->add_option("--penalty", solve.penalty, "l1, scad or mcp");
  solve_cmd->add_option("--lambda", solve.lambda, "Regularization strength")->required();
  solve_cmd->add_option("--a", solve.a, "Nonconvexity parameter (scad, mcp)");
  add_data_flags(solve_cmd, solve.data);
  add_amp_flags(solve_cmd, solve.amp);
  solve_cmd->add_option("--out", solve.out, "JSON output file (default stdout)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a lambda (and a) grid and select models");
  sweep_cmd->add_option("--penalty", sw.penalty, "l1, scad or mcp");
  sweep_cmd->add_option("--lambda", sw.lambdas, "Grid, lo:step:hi or comma list")->required();
  sweep_cmd->add_option("--a", sw.as, "Grid of a values");
  add_data_flags(sweep_cmd, sw.data);
  add_amp_flags(sweep_cmd, sw.amp);
  sweep_cmd->add_option("--n", sw.n, "Predictors for the Gaussian null ensemble");
  sweep_cmd->add_option("--m", sw.m, "Observations for the Gaussian null ensemble");
  sweep_cmd->add_option("--train", sw.train, "Training samples per grid point");
  sweep_cmd->add_option("--test", sw.test, "Monte-Carlo test draws per training sample (0 disables)");
  sweep_cmd->add_option("--seed", sw.seed, "Base seed");
  sweep_cmd->add_option("--out", sw.out, "CSV output file (default stdout)");
  sweep_cmd->add_option("--summary", sw.summary, "JSON summary (default summary.json next to --out)");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Compare the replica prediction with AMP on Gaussian data");
  val_cmd->add_option("--penalty", val.penalty, "l1, scad or mcp");
  val_cmd->add_option("--lambda", val.lambdas, "Grid, lo:step:hi or comma list");
  val_cmd->add_option("--a", val.a, "Nonconvexity parameter");
  val_cmd->add_option("--alpha", val.alpha, "M/N; checked against --m and --n");
  val_cmd->add_option("--n", val.n, "Predictors");
  val_cmd->add_option("--m", val.m, "Observations");
  val_cmd->add_option("--sigma2", val.sigma2, "Response variance")->check(CLI::PositiveNumber);
  val_cmd->add_option("--samples", val.samples, "Instances per lambda");
  val_cmd->add_option("--seed", val.seed, "Base seed");
  add_amp_flags(val_cmd, val.amp);
  val_cmd->add_option("--out", val.out, "CSV output file (default stdout)");

  SteinArgs st;
  auto* st_cmd = app.add_subcommand("stein-check", "Compare df estimates with a finite-difference divergence");
  st_cmd->add_option("--penalty", st.penalty, "l1, scad or mcp");
  st_cmd->add_option("--lambda", st.lambda, "Regularization strength");
  st_cmd->add_option("--a", st.a, "Nonconvexity parameter");
  st_cmd->add_option("--n", st.n, "Predictors");
  st_cmd->add_option("--m", st.m, "Observations");
  st_cmd->add_option("--rho", st.rho, "Pairwise column correlation");
  st_cmd->add_option("--sigma2", st.sigma2, "Response variance")->check(CLI::PositiveNumber);
  st_cmd->add_option("--instances", st.instances, "Number of instances");
  st_cmd->add_option("--seed", st.seed, "Base seed");
  st_cmd->add_option("--solver", st.solver, "Re-solve with cd or amp")->check(CLI::IsMember({"cd", "amp"}));
  st_cmd->add_option("--out", st.out, "CSV output file (default stdout)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write synthetic data as CSV");
  gen_cmd->add_option("--kind", gen.kind, "gaussian, equicorrelated or observational")
      ->check(CLI::IsMember({"gaussian", "equicorrelated", "observational"}));
  gen_cmd->add_option("--n", gen.n, "Predictors");
  gen_cmd->add_option("--m", gen.m, "Observations");
  gen_cmd->add_option("--sigma2", gen.sigma2, "Response variance")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rho", gen.rho, "Pairwise correlation for equicorrelated");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve, out, err);
    if (*sweep_cmd) return run_sweep(sw, out, err);
    if (*val_cmd) return run_validate(val, out, err);
    if (*st_cmd) return run_stein(st, out, err);
    if (*gen_cmd) return run_gen(gen, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace ampgdf::cli
