#pragma once

#include <cstdint>
#include <vector>

#include "pbreg/errors.hpp"

namespace pbreg {

// Paired observation: in each bin i, the source region observed S[i] counts with
// exposure t_S and an independent background region observed B[i] counts with
// exposure t_B. The source region sees signal plus background; the background
// region sees background only.
struct PairedDataset {
  std::vector<double> x;        // strictly increasing grid positions
  std::vector<std::int64_t> S;  // source-region counts, >= 0
  std::vector<std::int64_t> B;  // background-region counts, >= 0
  double t_S = 1.0;             // source exposure, > 0
  double t_B = 1.0;             // background exposure, > 0

  std::size_t size() const { return S.size(); }
};

struct Totals {
  std::int64_t n_S = 0;
  std::int64_t n_B = 0;
};

// Returns its argument unchanged iff every structural invariant holds; otherwise
// throws validation_error naming the offending field/index.
const PairedDataset& validate(const PairedDataset& dataset);

// Total counts per region.
Totals totals(const PairedDataset& dataset);

}  // namespace pbreg
