#include "pbreg/rng.hpp"

#include <cmath>

#include "pbreg/errors.hpp"

namespace pbreg {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;  // offset so 0 is not a fixed point
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(stream));
  h = mix64(h ^ mix64(index));
  return h;
}

std::int64_t Rng::poisson(double mu) {
  if (!(mu >= 0.0)) {
    throw validation_error("poisson mean must be nonnegative and finite");
  }
  if (mu == 0.0) {
    return 0;
  }
  if (mu < 10.0) {
    return poisson_inversion(mu);
  }
  return poisson_ptrs(mu);
}

std::int64_t Rng::poisson_inversion(double mu) {
  const double u = uniform01();
  double pmf = std::exp(-mu);
  double cdf = pmf;
  std::int64_t k = 0;
  // The cap is unreachable in practice (tail mass ~1e-88 at mu+20*sqrt(mu)+100) and
  // only guards against pathological rounding in the cdf accumulation.
  const auto cap = static_cast<std::int64_t>(mu + 20.0 * std::sqrt(mu) + 100.0);
  while (u > cdf && k < cap) {
    ++k;
    pmf *= mu / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

std::int64_t Rng::poisson_ptrs(double mu) {
  // Transformed rejection with squeeze (Hormann's PTRS), valid for mu >= 10.
  const double b = 0.931 + 2.53 * std::sqrt(mu);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    const double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double log_accept = std::log(v * inv_alpha / (a / (us * us) + b));
    if (log_accept <= k * log_mu - mu - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace pbreg
