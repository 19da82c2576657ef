#pragma once

#include <cstdint>
#include <vector>

#include "pbreg/dataset.hpp"

namespace pbreg {

// Generating model for simulations: constant source intensity theta and constant
// background rate beta. The parameters are kept as vectors so richer parametric
// models stay representable; the shipped model uses one entry each. Per-bin count
// means are (theta + beta)*t_S in the source region and beta*t_B in the background
// region.
struct ParentModel {
  std::vector<double> theta{0.0};  // source intensity parameters (length >= 1)
  std::vector<double> phi{0.0};    // background rate parameters (length >= 1)

  double theta0() const { return theta.at(0); }
  double beta() const { return phi.at(0); }
};

// Draws one dataset of n_bins independent pairs S_i ~ Poisson((theta+beta)*t_S),
// B_i ~ Poisson(beta*t_B) on the grid x = 0, 1, ..., n_bins−1. Identical seeds give
// bit-identical datasets.
PairedDataset sample_dataset(const ParentModel& parent, std::size_t n_bins, double t_S,
                             double t_B, std::uint64_t stream_seed);

}  // namespace pbreg
