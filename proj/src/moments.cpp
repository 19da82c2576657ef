#include "pbreg/moments.hpp"

#include <cmath>

#include "pbreg/errors.hpp"
#include "pbreg/statistics.hpp"

namespace pbreg {

MomentPair bin_deviance_moments(double mu) {
  const auto k_max = static_cast<std::int64_t>(std::ceil(mu + 12.0 * std::sqrt(mu) + 40.0));
  return bin_deviance_moments(mu, k_max);
}

MomentPair bin_deviance_moments(double mu, std::int64_t k_max) {
  if (!(mu > 0.0)) {
    throw validation_error("bin_deviance_moments requires mu > 0");
  }
  if (k_max < 1) {
    throw validation_error("bin_deviance_moments requires k_max >= 1");
  }
  const double log_mu = std::log(mu);
  double first = 0.0;
  double second = 0.0;
  for (std::int64_t k = 0; k <= k_max; ++k) {
    const double log_weight = -mu + static_cast<double>(k) * log_mu - std::lgamma(static_cast<double>(k) + 1.0);
    const double weight = std::exp(log_weight);
    const double d = deviance_term(k, mu);
    first += weight * d;
    second += weight * d * d;
  }
  const double variance = std::fmax(second - first * first, 0.0);
  return {first, variance, MomentKind::PoissonExact};
}

MomentPair expected_statistic(std::span<const double> means, double df) {
  if (df < 0.0) {
    throw validation_error("expected_statistic requires df >= 0");
  }
  double expectation_sum = 0.0;
  double variance_sum = 0.0;
  for (const double mu : means) {
    const MomentPair bin = bin_deviance_moments(mu);
    expectation_sum += bin.expectation;
    variance_sum += bin.variance;
  }
  return {expectation_sum - df, variance_sum, MomentKind::PoissonExact};
}

MomentPair chi2_reference(std::int64_t n_bins, double df) {
  if (df < 0.0) {
    throw validation_error("chi2_reference requires df >= 0");
  }
  const double dof = static_cast<double>(n_bins) - df;
  if (!(dof > 0.0)) {
    throw validation_error("chi2_reference requires n_bins > df");
  }
  return {dof, 2.0 * dof, MomentKind::ChiSquared};
}

double gof_zscore(double observed_stat, const MomentPair& moments) {
  if (!(moments.variance > 0.0)) {
    throw validation_error("gof_zscore requires positive variance");
  }
  return (observed_stat - moments.expectation) / std::sqrt(moments.variance);
}

}  // namespace pbreg
