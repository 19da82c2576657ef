#include "pbreg/dataset.hpp"

#include <numeric>
#include <string>

namespace pbreg {

const PairedDataset& validate(const PairedDataset& dataset) {
  const std::size_t n = dataset.S.size();
  if (n == 0) {
    throw validation_error("dataset must contain at least one bin");
  }
  if (dataset.B.size() != n || dataset.x.size() != n) {
    throw validation_error("length mismatch: x has " + std::to_string(dataset.x.size()) +
                           ", S has " + std::to_string(n) + ", B has " +
                           std::to_string(dataset.B.size()));
  }
  if (!(dataset.t_S > 0.0) || !(dataset.t_B > 0.0)) {
    throw validation_error("exposure must be positive (t_S=" + std::to_string(dataset.t_S) +
                           ", t_B=" + std::to_string(dataset.t_B) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dataset.S[i] < 0) {
      throw validation_error("negative source count at bin " + std::to_string(i));
    }
    if (dataset.B[i] < 0) {
      throw validation_error("negative background count at bin " + std::to_string(i));
    }
    if (i > 0 && !(dataset.x[i] > dataset.x[i - 1])) {
      throw validation_error("x grid not strictly increasing at bin " + std::to_string(i));
    }
  }
  return dataset;
}

Totals totals(const PairedDataset& dataset) {
  Totals t;
  t.n_S = std::accumulate(dataset.S.begin(), dataset.S.end(), std::int64_t{0});
  t.n_B = std::accumulate(dataset.B.begin(), dataset.B.end(), std::int64_t{0});
  return t;
}

}  // namespace pbreg
