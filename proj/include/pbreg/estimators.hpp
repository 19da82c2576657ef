#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbreg/dataset.hpp"
#include "pbreg/optimize.hpp"
#include "pbreg/source_model.hpp"

namespace pbreg {

enum class Method { Joint, Wstat, FixedBackground };

const char* method_name(Method method);          // "joint", "wstat", "fixed"
Method method_from_name(const std::string& name);  // inverse of method_name

struct FitOutcome {
  Method method = Method::Joint;
  std::vector<double> theta_hat;       // source parameters (constant model: length 1)
  std::vector<double> background_hat;  // Joint: {phi_hat}; Wstat: per-bin profiled
                                       // values; FixedBackground: B_i / t_B
  double statistic = 0.0;              // the method's goodness-of-fit value
  bool at_boundary = false;            // theta_hat pinned at the theta = 0 boundary
  bool converged = false;
  int evaluations = 0;  // objective evaluations spent by the optimizer
  std::int64_t n_S = 0;
  std::int64_t n_B = 0;

  double theta() const { return theta_hat.at(0); }
};

// Closed-form maximum-likelihood fit of the joint model with a constant source and
// constant background rate. Exact for any exposures: the likelihood separates in
// (theta + phi, phi). theta_hat may be negative; it is reported unclamped.
FitOutcome fit_joint_constant(const PairedDataset& dataset);

// Numerical joint fit: bounded scalar search over theta, with the background rate
// profiled out by an inner bounded scalar search at every trial theta. Agrees with
// fit_joint_constant to abs_tol_theta for the constant model.
FitOutcome fit_joint_numeric(const PairedDataset& dataset, const SourceModel& model,
                             const OptimizerSettings& settings = {});

// Fit with the background held fixed at the measured rates B_i / t_B. The search
// domain is theta >= 0; at_boundary marks estimates pinned at zero.
FitOutcome fit_fixed(const PairedDataset& dataset, const SourceModel& model,
                     const OptimizerSettings& settings = {});

// Fit by minimizing the profile-likelihood statistic over theta >= 0. The per-bin
// background values are profiled with the empty-bin zero rule (see
// wstat_background); at_boundary marks estimates pinned at zero.
FitOutcome fit_wstat(const PairedDataset& dataset, const SourceModel& model,
                     const OptimizerSettings& settings = {});

// Dispatch helper for the constant source model.
FitOutcome fit_method(const PairedDataset& dataset, Method method,
                      const OptimizerSettings& settings = {});

}  // namespace pbreg
