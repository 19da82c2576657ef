#pragma once

#include <cstdint>
#include <random>

namespace pbreg {

// 64-bit avalanche mixer (one splitmix64 step: golden-ratio offset plus the output
// finalizer). Turns related integers (seeds, stream tags, indices) into statistically
// independent values; has no fixed point at zero.
std::uint64_t mix64(std::uint64_t z);

// Deterministic substream seed derivation: mixes the master seed with a stream tag
// and an index so that nearby (stream, index) pairs give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// Seeded random generator with an explicitly specified Poisson sampler, so sampled
// datasets are identical across standard-library implementations (the standard's
// poisson_distribution algorithm is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Poisson(mu) variate: inversion by sequential search below mu = 10, transformed
  // rejection with squeeze (PTRS) above. mu = 0 returns 0.
  std::int64_t poisson(double mu);

 private:
  std::int64_t poisson_inversion(double mu);
  std::int64_t poisson_ptrs(double mu);

  std::mt19937_64 gen_;
};

}  // namespace pbreg
