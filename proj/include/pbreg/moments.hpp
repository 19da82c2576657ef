#pragma once

#include <cstdint>
#include <span>

namespace pbreg {

enum class MomentKind { PoissonExact, ChiSquared };

struct MomentPair {
  double expectation = 0.0;
  double variance = 0.0;
  MomentKind kind = MomentKind::PoissonExact;
};

// First two moments of a single bin's deviance contribution under Y ~ Poisson(mu),
// with the model mean held at mu, computed by exact truncated Poisson summation.
// The default truncation k_max = ceil(mu + 12*sqrt(mu) + 40) leaves tail mass below
// 1e-20 over the tabulated range.
MomentPair bin_deviance_moments(double mu);
MomentPair bin_deviance_moments(double mu, std::int64_t k_max);

// Moments of the summed statistic over independent bins with the given parent
// means: expectation = sum_i E_i − df, variance = sum_i Var_i.
MomentPair expected_statistic(std::span<const double> means, double df);

// Large-mean chi-squared reference with n_bins − df degrees of freedom.
MomentPair chi2_reference(std::int64_t n_bins, double df);

// Normalized goodness-of-fit score (observed − expectation)/sqrt(variance).
double gof_zscore(double observed_stat, const MomentPair& moments);

}  // namespace pbreg
