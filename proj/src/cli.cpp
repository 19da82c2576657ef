#include "pbreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbreg/efron.hpp"
#include "pbreg/errors.hpp"
#include "pbreg/estimators.hpp"
#include "pbreg/io.hpp"
#include "pbreg/moments.hpp"
#include "pbreg/simulate.hpp"

namespace pbreg {
namespace {

using nlohmann::json;

json fit_outcome_json(const FitOutcome& fit) {
  json j;
  j["schema_version"] = 1;
  j["method"] = method_name(fit.method);
  j["theta_hat"] = fit.theta();
  j["background_hat"] = fit.background_hat;
  j["statistic"] = fit.statistic;
  j["at_boundary"] = fit.at_boundary;
  j["converged"] = fit.converged;
  j["evaluations"] = fit.evaluations;
  j["n_S"] = fit.n_S;
  j["n_B"] = fit.n_B;
  json warnings = json::array();
  if (fit.method == Method::Joint && fit.theta() < 0.0) {
    warnings.push_back(
        "theta_hat is negative: the unconstrained maximum-likelihood estimate lies "
        "below zero and is reported as-is");
  }
  j["warnings"] = warnings;
  return j;
}

struct FitArgs {
  std::string dataset_path;
  std::string method = "joint";
  double t_S = 1.0;
  double t_B = 1.0;
  bool t_S_given = false;
  bool t_B_given = false;
};

int cmd_fit(const FitArgs& args, std::ostream& out) {
  PairedDataset dataset = read_dataset_csv(args.dataset_path);
  double sidecar_t_S = 1.0;
  double sidecar_t_B = 1.0;
  if (read_exposure_sidecar(args.dataset_path, sidecar_t_S, sidecar_t_B)) {
    dataset.t_S = sidecar_t_S;
    dataset.t_B = sidecar_t_B;
  }
  if (args.t_S_given) {
    dataset.t_S = args.t_S;
  }
  if (args.t_B_given) {
    dataset.t_B = args.t_B;
  }
  const FitOutcome fit = fit_method(dataset, method_from_name(args.method));
  out << fit_outcome_json(fit).dump(2) << '\n';
  return 0;
}

struct MomentsArgs {
  std::vector<double> mu;
  std::int64_t bins = 0;
  bool bins_given = false;
  double df = 0.0;
  double observed = 0.0;
  bool observed_given = false;
};

int cmd_moments(const MomentsArgs& args, std::ostream& out) {
  if (args.mu.empty()) {
    throw validation_error("at least one --mu value is required");
  }
  std::vector<double> means;
  if (args.bins_given) {
    if (args.bins < 1) {
      throw validation_error("--bins must be >= 1");
    }
    if (args.mu.size() != 1) {
      throw validation_error("--bins replicates a single --mu value; pass one --mu");
    }
    means.assign(static_cast<std::size_t>(args.bins), args.mu.front());
  } else {
    means = args.mu;
  }
  const MomentPair poisson = expected_statistic(means, args.df);
  const MomentPair chi2 = chi2_reference(static_cast<std::int64_t>(means.size()), args.df);

  json j;
  j["schema_version"] = 1;
  j["n_bins"] = means.size();
  j["df"] = args.df;
  j["poisson"] = {{"expectation", poisson.expectation}, {"variance", poisson.variance}};
  j["chi_squared"] = {{"expectation", chi2.expectation}, {"variance", chi2.variance}};
  if (args.observed_given) {
    j["observed"] = args.observed;
    j["z"] = {{"poisson", gof_zscore(args.observed, poisson)},
              {"chi_squared", gof_zscore(args.observed, chi2)}};
  }
  out << j.dump(2) << '\n';
  return 0;
}

struct DfArgs {
  std::string method = "joint";
  double theta = 1.0;
  double beta = 1.0;
  std::size_t n_bins = 100;
  int replicates = 1000;
  std::uint64_t seed = kDefaultMasterSeed;
  double t_S = 1.0;
  double t_B = 1.0;
  unsigned jobs = 0;
};

int cmd_df(const DfArgs& args, std::ostream& out) {
  const Method method = method_from_name(args.method);
  const ParentModel parent{{args.theta}, {args.beta}};
  const DfEstimate estimate = estimate_df(method, parent, args.n_bins, args.t_S, args.t_B,
                                          args.replicates, args.seed, {}, args.jobs);
  const std::size_t n_points =
      method == Method::Joint ? 2 * args.n_bins : args.n_bins;  // regions the statistic covers
  json j;
  j["schema_version"] = 1;
  j["method"] = method_name(method);
  j["theta"] = args.theta;
  j["beta"] = args.beta;
  j["n_bins"] = args.n_bins;
  j["replicates"] = estimate.replicates;
  j["seed"] = args.seed;
  j["df"] = estimate.df;
  j["standard_error"] = estimate.standard_error;
  j["source_contribution"] = estimate.source_contribution;
  j["background_contribution"] = estimate.background_contribution;
  j["optimism"] = optimism(estimate.df, n_points);
  out << j.dump(2) << '\n';
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir = ".";
  bool keep_samples = false;
  bool emit_ecdf = false;
  bool emit_svg = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned jobs = 0;
  bool jobs_given = false;
};

std::string cell_dir_name(double theta, double beta, std::size_t n_bins) {
  return "cell_t" + format_double(theta) + "_b" + format_double(beta) + "_N" +
         std::to_string(n_bins);
}

std::vector<double> finite_only(const std::vector<double>& values) {
  std::vector<double> result;
  result.reserve(values.size());
  for (const double v : values) {
    if (std::isfinite(v)) {
      result.push_back(v);
    }
  }
  return result;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  GridConfig config = read_grid_config(args.config_path);
  if (args.seed_given) {
    config.master_seed = args.seed;
  }
  if (args.jobs_given) {
    config.jobs = args.jobs;
  }
  validate(config);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) {
    throw io_error("cannot create output directory: " + args.out_dir + " (" + ec.message() + ")");
  }

  const bool want_cell_files = args.keep_samples || args.emit_ecdf;
  GridResult result;
  for (const std::size_t n_bins : config.n_values) {
    for (const double beta : config.beta_values) {
      for (const double theta : config.theta_values) {
        CellSamples samples;
        try {
          SimCellSummary summary =
              run_cell(theta, beta, n_bins, config.realizations, config.t_S, config.t_B,
                       config.methods, config.df_replicates, config.master_seed, {}, config.jobs,
                       want_cell_files ? &samples : nullptr);
          result.cells.push_back(summary);
        } catch (const std::exception& e) {
          result.cell_errors.push_back("theta=" + format_double(theta) +
                                       ", beta=" + format_double(beta) +
                                       ", N=" + std::to_string(n_bins) + ": " + e.what());
          continue;
        }
        if (!want_cell_files) {
          continue;
        }
        const fs::path cell_dir = fs::path(args.out_dir) / cell_dir_name(theta, beta, n_bins);
        fs::create_directories(cell_dir, ec);
        if (ec) {
          throw io_error("cannot create cell directory: " + cell_dir.string());
        }
        std::vector<std::string> dataset_files;
        if (args.keep_samples) {
          dataset_files.reserve(samples.datasets.size());
          for (std::size_t r = 0; r < samples.datasets.size(); ++r) {
            char name[32];
            std::snprintf(name, sizeof(name), "dataset_%05zu.csv", r);
            const fs::path file = cell_dir / name;
            write_dataset_csv(file.string(), samples.datasets[r]);
            if (config.t_S != 1.0 || config.t_B != 1.0) {
              write_exposure_sidecar(file.string(), config.t_S, config.t_B);
            }
            dataset_files.emplace_back(name);
          }
          write_samples_json((cell_dir / "samples.json").string(), result.cells.back(), samples,
                             dataset_files);
        }
        if (args.emit_ecdf) {
          for (const auto& ms : samples.methods) {
            const std::string tag = method_name(ms.method);
            const auto stats = finite_only(ms.statistic);
            const auto thetas = finite_only(ms.theta_hat);
            if (stats.empty() || thetas.empty()) {
              continue;
            }
            const EcdfSeries stat_series =
                ecdf(stats, tag + " statistic (" + cell_dir_name(theta, beta, n_bins) + ")");
            const EcdfSeries theta_series =
                ecdf(thetas, tag + " theta_hat (" + cell_dir_name(theta, beta, n_bins) + ")");
            write_ecdf_csv((cell_dir / ("ecdf_stat_" + tag + ".csv")).string(), stat_series);
            write_ecdf_csv((cell_dir / ("ecdf_theta_" + tag + ".csv")).string(), theta_series);
            if (args.emit_svg) {
              write_ecdf_svg((cell_dir / ("ecdf_stat_" + tag + ".svg")).string(), stat_series);
              write_ecdf_svg((cell_dir / ("ecdf_theta_" + tag + ".svg")).string(), theta_series);
            }
          }
        }
      }
    }
  }

  write_grid_csv((fs::path(args.out_dir) / "grid.csv").string(), result);
  for (const auto& message : result.cell_errors) {
    err << "cell failed: " << message << '\n';
  }
  out << "wrote " << (fs::path(args.out_dir) / "grid.csv").string() << " (" << result.cells.size()
      << " cells";
  if (!result.cell_errors.empty()) {
    out << ", " << result.cell_errors.size() << " failed";
  }
  out << ")\n";
  if (result.cells.empty() && !result.cell_errors.empty()) {
    return 3;
  }
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum-likelihood Poisson regression with Poisson background"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit one dataset and print the outcome as JSON");
  fit_cmd->add_option("dataset", fit_args.dataset_path, "Dataset CSV with header x,S,B")
      ->required();
  fit_cmd->add_option("--method", fit_args.method, "Fit method: joint, wstat, or fixed")
      ->check(CLI::IsMember({"joint", "wstat", "fixed"}));
  CLI::Option* fit_ts = fit_cmd->add_option("--ts", fit_args.t_S, "Source exposure");
  CLI::Option* fit_tb = fit_cmd->add_option("--tb", fit_args.t_B, "Background exposure");

  MomentsArgs moments_args;
  CLI::App* moments_cmd =
      app.add_subcommand("moments", "Expected statistic moments for parent bin means");
  moments_cmd->add_option("--mu", moments_args.mu, "Parent bin mean(s)")->required();
  CLI::Option* bins_opt = moments_cmd->add_option(
      "--bins", moments_args.bins, "Replicate a single --mu across this many bins");
  moments_cmd->add_option("--df", moments_args.df, "Degrees-of-freedom correction");
  CLI::Option* observed_opt =
      moments_cmd->add_option("--observed", moments_args.observed,
                              "Observed statistic; adds z-scores to the report");

  DfArgs df_args;
  CLI::App* df_cmd =
      app.add_subcommand("df", "Monte Carlo effective degrees of freedom for one cell");
  df_cmd->add_option("--method", df_args.method, "Fit method: joint, wstat, or fixed")
      ->check(CLI::IsMember({"joint", "wstat", "fixed"}));
  df_cmd->add_option("--theta", df_args.theta, "Parent source intensity");
  df_cmd->add_option("--beta", df_args.beta, "Parent background rate");
  df_cmd->add_option("--n", df_args.n_bins, "Number of bins");
  df_cmd->add_option("--r", df_args.replicates, "Monte Carlo replicates");
  df_cmd->add_option("--seed", df_args.seed, "Random seed");
  df_cmd->add_option("--ts", df_args.t_S, "Source exposure");
  df_cmd->add_option("--tb", df_args.t_B, "Background exposure");
  df_cmd->add_option("--jobs", df_args.jobs, "Worker threads (0: PBREG_JOBS or hardware)");

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a simulation grid from a config file");
  sim_cmd->add_option("config", sim_args.config_path, "Grid config (.toml or .json)")->required();
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "Output directory (default: .)");
  sim_cmd->add_flag("--keep-samples", sim_args.keep_samples,
                    "Write per-realization samples and dataset CSVs per cell");
  sim_cmd->add_flag("--ecdf", sim_args.emit_ecdf, "Write per-cell eCDF CSV series");
  sim_cmd->add_flag("--svg", sim_args.emit_svg, "Also render each eCDF as an SVG");
  CLI::Option* seed_opt =
      sim_cmd->add_option("--seed", sim_args.seed, "Override the config's master seed");
  CLI::Option* jobs_opt =
      sim_cmd->add_option("--jobs", sim_args.jobs, "Worker threads (0: PBREG_JOBS or hardware)");

  std::reverse(args.begin(), args.end());  // CLI11's vector parse expects reversed args
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fit_cmd) {
      fit_args.t_S_given = fit_ts->count() > 0;
      fit_args.t_B_given = fit_tb->count() > 0;
      return cmd_fit(fit_args, out);
    }
    if (*moments_cmd) {
      moments_args.bins_given = bins_opt->count() > 0;
      moments_args.observed_given = observed_opt->count() > 0;
      return cmd_moments(moments_args, out);
    }
    if (*df_cmd) {
      return cmd_df(df_args, out);
    }
    if (*sim_cmd) {
      sim_args.seed_given = seed_opt->count() > 0;
      sim_args.jobs_given = jobs_opt->count() > 0;
      return cmd_simulate(sim_args, out, err);
    }
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pbreg
