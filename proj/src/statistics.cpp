#include "pbreg/statistics.hpp"

#include <cmath>
#include <string>

namespace pbreg {

double deviance_term(std::int64_t y, double m) {
  if (y < 0) {
    throw validation_error("deviance_term: negative count " + std::to_string(y));
  }
  if (!(m >= 0.0)) {
    throw validation_error("deviance_term: model mean must be >= 0, got " + std::to_string(m));
  }
  if (y == 0) {
    return 2.0 * m;
  }
  if (m == 0.0) {
    throw infinite_deviance_error("model assigns zero mean to " + std::to_string(y) +
                                  " observed counts");
  }
  const double yd = static_cast<double>(y);
  const double v = 2.0 * ((m - yd) + yd * std::log(yd / m));
  return v < 0.0 ? 0.0 : v;
}

namespace {

// Positive root of (t_S+t_B)·b² + [(t_S+t_B)·mu − (S+B)]·b − B·mu = 0, written to
// avoid cancellation on both sides of the pooled rate.
double positive_quadratic_root(double S, double B, double mu, double t) {
  const double q = (S + B) / t - mu;
  const double disc = std::sqrt(std::fmax(q * q + 4.0 * B * mu / t, 0.0));
  if (q >= 0.0) {
    return 0.5 * (q + disc);
  }
  return 2.0 * (B * mu / t) / (disc - q);
}

double require_mu(const SourceModel& model, double x, std::span<const double> theta) {
  const double mu = model.mu(x, theta);
  if (!(mu >= 0.0)) {
    throw validation_error("source model returned negative mean " + std::to_string(mu));
  }
  return mu;
}

}  // namespace

ProfiledBackground profile_background(const PairedDataset& dataset, const SourceModel& model,
                                      std::span<const double> theta) {
  const std::size_t n = dataset.size();
  const double t = dataset.t_S + dataset.t_B;
  ProfiledBackground out;
  out.b_hat.resize(n);
  out.zero_pegged.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = require_mu(model, dataset.x[i], theta);
    if (dataset.B[i] > 0) {
      out.b_hat[i] = positive_quadratic_root(static_cast<double>(dataset.S[i]),
                                             static_cast<double>(dataset.B[i]), mu, t);
    } else {
      const double pooled = static_cast<double>(dataset.S[i]) / t;
      if (mu > pooled) {
        out.b_hat[i] = 0.0;
        out.zero_pegged[i] = 1;
      } else {
        out.b_hat[i] = pooled - mu;
        out.zero_pegged[i] = (out.b_hat[i] == 0.0);
      }
    }
  }
  return out;
}

std::vector<double> wstat_background(const PairedDataset& dataset, const SourceModel& model,
                                     std::span<const double> theta) {
  const std::size_t n = dataset.size();
  const double t = dataset.t_S + dataset.t_B;
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = require_mu(model, dataset.x[i], theta);
    if (dataset.B[i] > 0) {
      b[i] = positive_quadratic_root(static_cast<double>(dataset.S[i]),
                                     static_cast<double>(dataset.B[i]), mu, t);
    }
  }
  return b;
}

double cmin_joint(const PairedDataset& dataset, const SourceModel& model,
                  std::span<const double> theta, double phi) {
  const std::size_t n = dataset.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = model.mu(dataset.x[i], theta);
    total += deviance_term(dataset.S[i], (mu + phi) * dataset.t_S);
    total += deviance_term(dataset.B[i], phi * dataset.t_B);
  }
  return total;
}

double cmin_fixed(const PairedDataset& dataset, const SourceModel& model,
                  std::span<const double> theta) {
  const std::size_t n = dataset.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = model.mu(dataset.x[i], theta);
    const double rate = static_cast<double>(dataset.B[i]) / dataset.t_B;
    total += deviance_term(dataset.S[i], (mu + rate) * dataset.t_S);
  }
  return total;
}

double wmin(const PairedDataset& dataset, const SourceModel& model,
            std::span<const double> theta) {
  const std::size_t n = dataset.size();
  const double t = dataset.t_S + dataset.t_B;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = require_mu(model, dataset.x[i], theta);
    double b = 0.0;
    if (dataset.B[i] > 0) {
      b = positive_quadratic_root(static_cast<double>(dataset.S[i]),
                                  static_cast<double>(dataset.B[i]), mu, t);
    }
    total += deviance_term(dataset.S[i], (mu + b) * dataset.t_S);
    total += deviance_term(dataset.B[i], b * dataset.t_B);
  }
  return total;
}

double cmin_joint(const PairedDataset& dataset, double theta, double phi) {
  const double params[1] = {theta};
  return cmin_joint(dataset, constant_model(), params, phi);
}

double cmin_fixed(const PairedDataset& dataset, double theta) {
  const double params[1] = {theta};
  return cmin_fixed(dataset, constant_model(), params);
}

double wmin(const PairedDataset& dataset, double theta) {
  const double params[1] = {theta};
  return wmin(dataset, constant_model(), params);
}

}  // namespace pbreg
