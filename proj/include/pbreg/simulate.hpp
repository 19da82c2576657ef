#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbreg/dataset.hpp"
#include "pbreg/efron.hpp"
#include "pbreg/estimators.hpp"
#include "pbreg/parent.hpp"

namespace pbreg {

inline constexpr std::uint64_t kDefaultMasterSeed = 8675309;

struct GridConfig {
  std::vector<double> theta_values;
  std::vector<double> beta_values;
  std::vector<std::size_t> n_values;
  int realizations = 1000;  // M
  int df_replicates = 1000;  // R; below 2 skips the df estimate
  double t_S = 1.0;
  double t_B = 1.0;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::vector<Method> methods = {Method::Joint, Method::Wstat, Method::FixedBackground};
  unsigned jobs = 0;  // 0: PBREG_JOBS env var, else hardware concurrency
};

// Throws validation_error unless every grid axis is non-empty, every grid value is
// positive, and M >= 1.
void validate(const GridConfig& config);

struct MethodCellStats {
  Method method = Method::Joint;
  double stat_median = 0.0;
  double stat_plus = 0.0;   // 84.1st percentile − median
  double stat_minus = 0.0;  // median − 15.9th percentile
  double bias_median = 0.0;  // fractional bias (theta_hat − theta)/theta
  double bias_plus = 0.0;
  double bias_minus = 0.0;
  double zero_fraction = 0.0;  // fraction of realizations with theta_hat at 0
  DfEstimate df;               // df.replicates == 0 when the estimate was skipped
};

struct SimCellSummary {
  double theta = 0.0;
  double beta = 0.0;
  std::size_t n_bins = 0;
  int realizations = 0;
  std::uint64_t master_seed = 0;
  std::vector<MethodCellStats> methods;
};

// Per-realization records, captured on request (--keep-samples, eCDF emission).
struct MethodSamples {
  Method method = Method::Joint;
  std::vector<double> theta_hat;   // one entry per realization
  std::vector<double> statistic;
  std::vector<char> at_boundary;
};

struct CellSamples {
  std::vector<PairedDataset> datasets;  // one per realization
  std::vector<MethodSamples> methods;
};

// Stream key derived from the cell's parameter values (not its grid position), so
// editing one grid value leaves every other cell's draws unchanged.
std::uint64_t cell_stream_key(double theta, double beta, std::size_t n_bins, double t_S,
                              double t_B);

// Runs M realizations of one (theta, beta, N) cell: samples a dataset, fits every
// requested method, and reduces to medians with 15.9/84.1 percentile offsets for the
// statistic and the fractional bias, plus a df estimate per method. Deterministic
// given master_seed; realizations run in parallel with index-ordered reduction.
// Fit errors are tolerated up to 1% of all fits, above which the cell fails.
SimCellSummary run_cell(double theta, double beta, std::size_t n_bins, int realizations,
                        double t_S, double t_B, const std::vector<Method>& methods,
                        int df_replicates, std::uint64_t master_seed,
                        const OptimizerSettings& settings = {}, unsigned jobs = 0,
                        CellSamples* samples = nullptr);

struct GridResult {
  std::vector<SimCellSummary> cells;
  std::vector<std::string> cell_errors;  // "theta=…, beta=…, N=…: message" per failed cell
};

// Runs every (N, beta, theta) cell of the grid (N outermost, theta innermost, matching
// the reference table's row order). A failing cell is recorded and the grid continues.
GridResult run_grid(const GridConfig& config);

// Linear-interpolation percentile (the common "type 7" convention); p in [0, 100].
// Input must be sorted ascending.
double percentile(std::span<const double> sorted_values, double p);

struct EcdfSeries {
  std::vector<double> values;         // sorted ascending, one per sample
  std::vector<double> probabilities;  // k/M for k = 1..M
  std::string label;
};

// Right-continuous empirical CDF of the samples.
EcdfSeries ecdf(std::span<const double> samples, std::string label = {});

// F(x) = (number of samples <= x)/M.
double ecdf_at(const EcdfSeries& series, double x);

}  // namespace pbreg
