#include "pbreg/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "pbreg/errors.hpp"
#include "pbreg/parallel.hpp"
#include "pbreg/rng.hpp"

namespace pbreg {
namespace {

constexpr std::uint64_t kRealizationStream = 0x9e11c0de;
constexpr std::uint64_t kDfStream = 0xdf000000;

std::string cell_id(double theta, double beta, std::size_t n_bins) {
  return "theta=" + std::to_string(theta) + ", beta=" + std::to_string(beta) +
         ", N=" + std::to_string(n_bins);
}

}  // namespace

PairedDataset sample_dataset(const ParentModel& parent, std::size_t n_bins, double t_S,
                             double t_B, std::uint64_t stream_seed) {
  if (n_bins == 0) {
    throw validation_error("sample_dataset requires n_bins >= 1");
  }
  if (!(t_S > 0.0) || !(t_B > 0.0)) {
    throw validation_error("exposure must be positive");
  }
  const double theta = parent.theta0();
  const double beta = parent.beta();
  if (!(theta >= 0.0) || !(beta >= 0.0)) {
    throw validation_error("parent intensities must be nonnegative");
  }
  const double source_mean = (theta + beta) * t_S;
  const double background_mean = beta * t_B;

  Rng rng(stream_seed);
  PairedDataset data;
  data.t_S = t_S;
  data.t_B = t_B;
  data.x.resize(n_bins);
  data.S.resize(n_bins);
  data.B.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    data.x[i] = static_cast<double>(i);
    data.S[i] = rng.poisson(source_mean);
    data.B[i] = rng.poisson(background_mean);
  }
  return data;
}

void validate(const GridConfig& config) {
  if (config.theta_values.empty() || config.beta_values.empty() || config.n_values.empty()) {
    throw validation_error("grid requires at least one theta, beta, and N value");
  }
  for (const double v : config.theta_values) {
    if (!(v > 0.0)) {
      throw validation_error("grid theta values must be positive");
    }
  }
  for (const double v : config.beta_values) {
    if (!(v > 0.0)) {
      throw validation_error("grid beta values must be positive");
    }
  }
  for (const std::size_t n : config.n_values) {
    if (n == 0) {
      throw validation_error("grid N values must be >= 1");
    }
  }
  if (config.realizations < 1) {
    throw validation_error("realizations must be >= 1");
  }
  if (!(config.t_S > 0.0) || !(config.t_B > 0.0)) {
    throw validation_error("exposure must be positive");
  }
}

std::uint64_t cell_stream_key(double theta, double beta, std::size_t n_bins, double t_S,
                              double t_B) {
  std::uint64_t key = mix64(std::bit_cast<std::uint64_t>(theta));
  key = mix64(key ^ mix64(std::bit_cast<std::uint64_t>(beta)));
  key = mix64(key ^ mix64(static_cast<std::uint64_t>(n_bins)));
  key = mix64(key ^ mix64(std::bit_cast<std::uint64_t>(t_S)));
  key = mix64(key ^ mix64(std::bit_cast<std::uint64_t>(t_B)));
  return key;
}

double percentile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) {
    throw validation_error("percentile requires at least one value");
  }
  if (!(p >= 0.0 && p <= 100.0)) {
    throw validation_error("percentile must be in [0, 100]");
  }
  const std::size_t n = sorted_values.size();
  if (n == 1) {
    return sorted_values[0];
  }
  const double h = static_cast<double>(n - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) {
    return sorted_values[n - 1];
  }
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

EcdfSeries ecdf(std::span<const double> samples, std::string label) {
  if (samples.empty()) {
    throw validation_error("ecdf requires at least one sample");
  }
  EcdfSeries series;
  series.values.assign(samples.begin(), samples.end());
  std::sort(series.values.begin(), series.values.end());
  const auto n = series.values.size();
  series.probabilities.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    series.probabilities[k] = static_cast<double>(k + 1) / static_cast<double>(n);
  }
  series.label = std::move(label);
  return series;
}

double ecdf_at(const EcdfSeries& series, double x) {
  const auto it = std::upper_bound(series.values.begin(), series.values.end(), x);
  return static_cast<double>(it - series.values.begin()) /
         static_cast<double>(series.values.size());
}

SimCellSummary run_cell(double theta, double beta, std::size_t n_bins, int realizations,
                        double t_S, double t_B, const std::vector<Method>& methods,
                        int df_replicates, std::uint64_t master_seed,
                        const OptimizerSettings& settings, unsigned jobs,
                        CellSamples* samples) {
  if (!(theta > 0.0)) {
    throw validation_error("run_cell requires theta > 0 (fractional bias divides by it)");
  }
  if (!(beta >= 0.0)) {
    throw validation_error("run_cell requires beta >= 0");
  }
  if (realizations < 1) {
    throw validation_error("realizations must be >= 1");
  }

  const std::uint64_t key = cell_stream_key(theta, beta, n_bins, t_S, t_B);
  const ParentModel parent{{theta}, {beta}};
  const auto M = static_cast<std::size_t>(realizations);

  struct Row {
    double theta_hat = std::numeric_limits<double>::quiet_NaN();
    double statistic = std::numeric_limits<double>::quiet_NaN();
    char at_boundary = 0;
    char failed = 0;
  };
  std::vector<std::vector<Row>> rows(methods.size(), std::vector<Row>(M));
  std::string first_failure;
  std::mutex failure_mutex;
  if (samples) {
    samples->datasets.assign(M, PairedDataset{});
    samples->methods.assign(methods.size(), MethodSamples{});
  }

  parallel_for(M, default_jobs(jobs), [&](std::size_t r) {
    const PairedDataset data =
        sample_dataset(parent, n_bins, t_S, t_B, derive_seed(master_seed, key ^ kRealizationStream, r));
    if (samples) {
      samples->datasets[r] = data;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      Row& row = rows[m][r];
      try {
        const FitOutcome fit = fit_method(data, methods[m], settings);
        row.theta_hat = fit.theta();
        row.statistic = fit.statistic;
        row.at_boundary = fit.at_boundary ? 1 : 0;
      } catch (const std::exception& e) {
        row.failed = 1;
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (first_failure.empty()) {
          first_failure = e.what();
        }
      }
    }
  });

  std::size_t failures = 0;
  for (const auto& method_rows : rows) {
    for (const auto& row : method_rows) {
      failures += row.failed;
    }
  }
  const std::size_t total_fits = M * methods.size();
  if (failures > 0 &&
      static_cast<double>(failures) > 0.01 * static_cast<double>(total_fits)) {
    throw convergence_error("cell " + cell_id(theta, beta, n_bins) + ": " +
                                std::to_string(failures) + " of " + std::to_string(total_fits) +
                                " fits failed (first: " + first_failure + ")",
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
  }

  SimCellSummary summary;
  summary.theta = theta;
  summary.beta = beta;
  summary.n_bins = n_bins;
  summary.realizations = realizations;
  summary.master_seed = master_seed;
  summary.methods.reserve(methods.size());

  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<double> stat_values;
    std::vector<double> bias_values;
    stat_values.reserve(M);
    bias_values.reserve(M);
    std::size_t zero_count = 0;
    std::size_t good = 0;
    for (const Row& row : rows[m]) {
      if (row.failed) {
        continue;
      }
      ++good;
      stat_values.push_back(row.statistic);
      bias_values.push_back((row.theta_hat - theta) / theta);
      if (row.at_boundary || row.theta_hat == 0.0) {
        ++zero_count;
      }
    }
    if (good == 0) {
      throw convergence_error("cell " + cell_id(theta, beta, n_bins) + ": every " +
                                  std::string(method_name(methods[m])) + " fit failed",
                              std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN());
    }
    std::sort(stat_values.begin(), stat_values.end());
    std::sort(bias_values.begin(), bias_values.end());

    MethodCellStats stats;
    stats.method = methods[m];
    stats.stat_median = percentile(stat_values, 50.0);
    stats.stat_plus = percentile(stat_values, 84.1) - stats.stat_median;
    stats.stat_minus = stats.stat_median - percentile(stat_values, 15.9);
    stats.bias_median = percentile(bias_values, 50.0);
    stats.bias_plus = percentile(bias_values, 84.1) - stats.bias_median;
    stats.bias_minus = stats.bias_median - percentile(bias_values, 15.9);
    stats.zero_fraction = static_cast<double>(zero_count) / static_cast<double>(good);
    if (df_replicates >= 2) {
      const std::uint64_t df_seed =
          derive_seed(master_seed, key ^ (kDfStream + static_cast<std::uint64_t>(methods[m]) + 1),
                      0);
      stats.df = estimate_df(methods[m], parent, n_bins, t_S, t_B, df_replicates, df_seed,
                             settings, jobs);
    }
    summary.methods.push_back(std::move(stats));

    if (samples) {
      MethodSamples& ms = (*samples).methods[m];
      ms.method = methods[m];
      ms.theta_hat.resize(M);
      ms.statistic.resize(M);
      ms.at_boundary.resize(M);
      for (std::size_t r = 0; r < M; ++r) {
        ms.theta_hat[r] = rows[m][r].theta_hat;
        ms.statistic[r] = rows[m][r].statistic;
        ms.at_boundary[r] = rows[m][r].at_boundary;
      }
    }
  }
  return summary;
}

GridResult run_grid(const GridConfig& config) {
  validate(config);
  GridResult result;
  for (const std::size_t n_bins : config.n_values) {
    for (const double beta : config.beta_values) {
      for (const double theta : config.theta_values) {
        try {
          result.cells.push_back(run_cell(theta, beta, n_bins, config.realizations, config.t_S,
                                          config.t_B, config.methods, config.df_replicates,
                                          config.master_seed, OptimizerSettings{}, config.jobs,
                                          nullptr));
        } catch (const std::exception& e) {
          result.cell_errors.push_back(cell_id(theta, beta, n_bins) + ": " + e.what());
        }
      }
    }
  }
  return result;
}

}  // namespace pbreg
