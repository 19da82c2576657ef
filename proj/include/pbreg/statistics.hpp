#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pbreg/dataset.hpp"
#include "pbreg/source_model.hpp"

namespace pbreg {

// One bin's contribution to a Poisson deviance (−2 log likelihood ratio against the
// saturated model): 2[(m − y) + y·ln(y/m)], with y·ln(y/m) = 0 when y = 0.
// Throws infinite_deviance_error when m = 0 with y > 0 (zero likelihood).
// The result is clamped at 0 to absorb floating-point noise near saturation.
double deviance_term(std::int64_t y, double m);

// Per-bin background rate that maximizes the joint likelihood at fixed theta.
// For B > 0 it is the positive root of the per-bin quadratic score equation; for
// B = 0 the constrained optimum is max(0, S/(t_S + t_B) − mu).
struct ProfiledBackground {
  std::vector<double> b_hat;       // >= 0
  std::vector<char> zero_pegged;   // 1 where the B = 0 branch pinned b_hat to 0
};
ProfiledBackground profile_background(const PairedDataset& dataset, const SourceModel& model,
                                      std::span<const double> theta);

// Background used by the wstat statistic: profiled value where the background region
// observed counts, and the observed rate estimate B/t_B = 0 where it observed none.
// Keeping empty background bins at zero makes their source terms carry the full
// deviance against mu alone, which is what pins the fit away from the theta = 0
// boundary whenever such a bin holds source counts.
std::vector<double> wstat_background(const PairedDataset& dataset, const SourceModel& model,
                                     std::span<const double> theta);

// Goodness-of-fit statistic of the joint parametric fit: the source and background
// region deviances summed, with single-parameter constant background rate phi.
double cmin_joint(const PairedDataset& dataset, const SourceModel& model,
                  std::span<const double> theta, double phi);

// Goodness-of-fit statistic of the fixed-background method: source-region deviance
// with the rescaled observed background B/t_B treated as the true rate.
double cmin_fixed(const PairedDataset& dataset, const SourceModel& model,
                  std::span<const double> theta);

// Goodness-of-fit statistic of the profile-likelihood (wstat) method: both regions'
// deviances evaluated at (theta, wstat_background(theta)).
double wmin(const PairedDataset& dataset, const SourceModel& model,
            std::span<const double> theta);

// Scalar-theta conveniences for the constant model.
double cmin_joint(const PairedDataset& dataset, double theta, double phi);
double cmin_fixed(const PairedDataset& dataset, double theta);
double wmin(const PairedDataset& dataset, double theta);

}  // namespace pbreg
