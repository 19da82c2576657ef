#include "pbreg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "pbreg/errors.hpp"
#include "pbreg/statistics.hpp"

namespace pbreg {

const char* method_name(Method method) {
  switch (method) {
    case Method::Joint:
      return "joint";
    case Method::Wstat:
      return "wstat";
    case Method::FixedBackground:
      return "fixed";
  }
  throw validation_error("unknown method tag");
}

Method method_from_name(const std::string& name) {
  if (name == "joint") {
    return Method::Joint;
  }
  if (name == "wstat") {
    return Method::Wstat;
  }
  if (name == "fixed") {
    return Method::FixedBackground;
  }
  throw validation_error("unknown method name '" + name + "' (expected joint, wstat, or fixed)");
}

namespace {

double max_rate(const std::vector<std::int64_t>& counts, double exposure) {
  std::int64_t peak = 0;
  for (const auto c : counts) {
    peak = std::max(peak, c);
  }
  return static_cast<double>(peak) / exposure;
}

void require_single_parameter(const SourceModel& model, const char* op) {
  if (model.n_params() != 1) {
    throw validation_error(std::string(op) + " supports single-parameter source models only");
  }
}

void require_valid_settings(const OptimizerSettings& settings) {
  if (!(settings.abs_tol_theta > 0.0)) {
    throw validation_error("abs_tol_theta must be positive");
  }
  if (!(settings.theta_upper_factor > 0.0)) {
    throw validation_error("theta_upper_factor must be positive");
  }
  if (settings.max_evaluations < 10) {
    throw validation_error("max_evaluations must be >= 10");
  }
}

struct BoundedScalarFit {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool at_zero = false;
};

// Minimize f over [0, hi]. f may raise infinite_deviance_error at theta = 0 (hard
// constraint boundary); interior points are always finite for these objectives.
// A boundary value within abs_tol_theta of the interior minimum wins the tie, so
// fits whose objective keeps decreasing into the boundary report exactly zero.
template <class F>
BoundedScalarFit minimize_from_zero(F&& f, double hi, const OptimizerSettings& settings) {
  auto r = brent_minimize(f, 0.0, hi, settings.abs_tol_theta, settings.max_evaluations);
  BoundedScalarFit out{r.x, r.fx, r.evaluations, r.converged, false};
  try {
    const double at_zero = f(0.0);
    ++out.evaluations;
    if (at_zero <= out.fx + settings.abs_tol_theta) {
      out.x = 0.0;
      out.fx = at_zero;
      out.at_zero = true;
    }
  } catch (const infinite_deviance_error&) {
    // theta = 0 is infeasible for this dataset; keep the interior minimum.
  }
  return out;
}

}  // namespace

FitOutcome fit_joint_constant(const PairedDataset& dataset) {
  validate(dataset);
  const auto tot = totals(dataset);
  const double n = static_cast<double>(dataset.size());
  const double phi = static_cast<double>(tot.n_B) / (n * dataset.t_B);
  const double theta = static_cast<double>(tot.n_S) / (n * dataset.t_S) - phi;

  FitOutcome out;
  out.method = Method::Joint;
  out.theta_hat = {theta};
  out.background_hat = {phi};
  out.statistic = cmin_joint(dataset, theta, phi);
  out.at_boundary = false;
  out.converged = true;
  out.evaluations = 0;
  out.n_S = tot.n_S;
  out.n_B = tot.n_B;
  return out;
}

FitOutcome fit_joint_numeric(const PairedDataset& dataset, const SourceModel& model,
                             const OptimizerSettings& settings) {
  validate(dataset);
  require_single_parameter(model, "fit_joint_numeric");
  require_valid_settings(settings);
  const auto tot = totals(dataset);

  const double factor = settings.theta_upper_factor;
  const double peak_source = std::max(1.0, max_rate(dataset.S, dataset.t_S));
  const double peak_background = std::max(1.0, max_rate(dataset.B, dataset.t_B));
  const double theta_hi = factor * peak_source;
  const double theta_lo = -factor * peak_background;
  const double phi_span = factor * (peak_source + peak_background) + 1.0;

  int total_evaluations = 0;
  bool inner_trouble = false;

  const auto min_mu = [&](double theta) {
    const double th[1] = {theta};
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      lowest = std::min(lowest, model.mu(dataset.x[i], std::span<const double>(th, 1)));
    }
    return lowest;
  };

  struct Profiled {
    double phi;
    double value;
  };
  // Profile the background rate out at fixed theta: bounded scalar search over phi,
  // with the feasible floor keeping every source mean nonnegative.
  const auto profile_phi = [&](double theta) -> Profiled {
    const double th[1] = {theta};
    const std::span<const double> ts(th, 1);
    const double phi_lo = std::max(0.0, -min_mu(theta));
    const auto g = [&](double phi) {
      ++total_evaluations;
      return cmin_joint(dataset, model, ts, phi);
    };
    auto r = brent_minimize(g, phi_lo, phi_lo + phi_span, settings.abs_tol_theta,
                            settings.max_evaluations);
    if (!r.converged) {
      inner_trouble = true;
    }
    Profiled best{r.x, r.fx};
    try {
      const double at_lo = g(phi_lo);
      if (at_lo <= best.value) {
        best = {phi_lo, at_lo};
      }
    } catch (const infinite_deviance_error&) {
      // The floor zeroes a mean that observed counts; stay interior.
    }
    return best;
  };

  const auto objective = [&](double theta) { return profile_phi(theta).value; };
  auto outer =
      brent_minimize(objective, theta_lo, theta_hi, settings.abs_tol_theta, settings.max_evaluations);

  double theta = outer.x;
  double value = outer.fx;
  bool polished = false;
  // An exact zero wins whenever it is at least as good; with integer counts the
  // profiled objective has its minimum either exactly at 0 or well away from it.
  try {
    const double at_zero = objective(0.0);
    if (at_zero <= value) {
      theta = 0.0;
      value = at_zero;
      polished = true;
    }
  } catch (const infinite_deviance_error&) {
  }
  if (!polished) {
    // Value-based search localizes theta only to the floating-point plateau of the
    // objective; one parabolic refinement recovers several further digits.
    const double h = 1e-5 * std::fmax(1.0, std::fabs(theta));
    const double left = theta - h;
    const double right = theta + h;
    if (left > theta_lo && right < theta_hi) {
      try {
        const double fl = objective(left);
        const double fr = objective(right);
        const double curvature = fl - 2.0 * value + fr;
        if (curvature > 0.0) {
          const double step = 0.5 * h * (fl - fr) / curvature;
          if (std::fabs(step) <= h) {
            theta += step;
          }
        }
      } catch (const infinite_deviance_error&) {
      }
    }
  }

  const auto final_fit = profile_phi(theta);
  if (!outer.converged || inner_trouble) {
    throw convergence_error("joint numerical fit did not converge", theta, final_fit.value);
  }

  FitOutcome out;
  out.method = Method::Joint;
  out.theta_hat = {theta};
  out.background_hat = {final_fit.phi};
  out.statistic = final_fit.value;
  out.at_boundary = false;
  out.converged = true;
  out.evaluations = total_evaluations;
  out.n_S = tot.n_S;
  out.n_B = tot.n_B;
  return out;
}

FitOutcome fit_fixed(const PairedDataset& dataset, const SourceModel& model,
                     const OptimizerSettings& settings) {
  validate(dataset);
  require_single_parameter(model, "fit_fixed");
  require_valid_settings(settings);
  const auto tot = totals(dataset);

  const double hi = settings.theta_upper_factor * std::max(1.0, max_rate(dataset.S, dataset.t_S));
  const auto f = [&](double theta) {
    const double th[1] = {theta};
    return cmin_fixed(dataset, model, std::span<const double>(th, 1));
  };
  const auto r = minimize_from_zero(f, hi, settings);
  if (!r.converged) {
    throw convergence_error("fixed-background fit did not converge", r.x, r.fx);
  }

  FitOutcome out;
  out.method = Method::FixedBackground;
  out.theta_hat = {r.x};
  out.background_hat.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out.background_hat.push_back(static_cast<double>(dataset.B[i]) / dataset.t_B);
  }
  out.statistic = r.fx;
  out.at_boundary = r.at_zero;
  out.converged = true;
  out.evaluations = r.evaluations;
  out.n_S = tot.n_S;
  out.n_B = tot.n_B;
  return out;
}

FitOutcome fit_wstat(const PairedDataset& dataset, const SourceModel& model,
                     const OptimizerSettings& settings) {
  validate(dataset);
  require_single_parameter(model, "fit_wstat");
  require_valid_settings(settings);
  const auto tot = totals(dataset);

  const double hi = settings.theta_upper_factor * std::max(1.0, max_rate(dataset.S, dataset.t_S));
  const auto f = [&](double theta) {
    const double th[1] = {theta};
    return wmin(dataset, model, std::span<const double>(th, 1));
  };
  const auto r = minimize_from_zero(f, hi, settings);
  if (!r.converged) {
    throw convergence_error("profile-likelihood fit did not converge", r.x, r.fx);
  }

  const double th[1] = {r.x};
  FitOutcome out;
  out.method = Method::Wstat;
  out.theta_hat = {r.x};
  out.background_hat = wstat_background(dataset, model, std::span<const double>(th, 1));
  out.statistic = r.fx;
  out.at_boundary = r.at_zero;
  out.converged = true;
  out.evaluations = r.evaluations;
  out.n_S = tot.n_S;
  out.n_B = tot.n_B;
  return out;
}

FitOutcome fit_method(const PairedDataset& dataset, Method method,
                      const OptimizerSettings& settings) {
  switch (method) {
    case Method::Joint:
      return fit_joint_constant(dataset);
    case Method::Wstat:
      return fit_wstat(dataset, constant_model(), settings);
    case Method::FixedBackground:
      return fit_fixed(dataset, constant_model(), settings);
  }
  throw validation_error("unknown method tag");
}

}  // namespace pbreg
