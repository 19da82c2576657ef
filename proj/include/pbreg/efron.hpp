#pragma once

#include <cstdint>

#include "pbreg/estimators.hpp"
#include "pbreg/optimize.hpp"
#include "pbreg/parent.hpp"

namespace pbreg {

struct DfEstimate {
  double df = 0.0;
  double standard_error = 0.0;
  int replicates = 0;
  double source_contribution = 0.0;      // covariance sum over source bins / Var(S)
  double background_contribution = 0.0;  // joint method only; 0 for the others
};

// Effective degrees of freedom by Monte Carlo: generates `replicates` datasets from
// the parent, fits each, and sums the per-bin sample covariances between fitted count
// predictions and observed counts, normalized by the parent count variance of the
// region. The joint method sums both regions ((theta+beta)t_S for source, beta*t_B
// for background); wstat and fixed-background sum the source region only, with
// predictions (theta_hat + b_hat_i)*t_S resp. (theta_hat + B_i/t_B)*t_S.
// Deterministic given seed; replicates fit in parallel, reduction index-ordered.
DfEstimate estimate_df(Method method, const ParentModel& parent, std::size_t n_bins,
                       double t_S, double t_B, int replicates, std::uint64_t seed,
                       const OptimizerSettings& settings = {}, unsigned jobs = 0);

// Expected per-point optimism 2*df/n_points.
double optimism(double df, std::size_t n_points);

struct OptimismCheck {
  double delta = 0.0;     // mean held-out statistic − mean trained statistic
  double expected = 0.0;  // 2 * df from estimate_df on the same streams
  int replicates_used = 0;
  int skipped = 0;  // replicates whose held-out statistic is undefined (a trained
                    // mean of zero met a positive fresh count)
};

// Checks the optimism identity directly: fits on training data, then evaluates the
// statistic at the trained parameters on fresh counts, refreshing exactly the regions
// whose covariance estimate_df sums (both for joint; source only for wstat/fixed, so
// the trained background deviance cancels in the difference). delta should match
// 2*df within Monte Carlo error.
OptimismCheck verify_optimism(Method method, const ParentModel& parent, std::size_t n_bins,
                              double t_S, double t_B, int replicates, std::uint64_t seed,
                              const OptimizerSettings& settings = {}, unsigned jobs = 0);

}  // namespace pbreg
