#pragma once

#include <cstddef>
#include <span>

namespace pbreg {

// Parametric source intensity mu(x; theta). Only the constant model ships, but the
// interface keeps the position argument so richer models remain possible.
class SourceModel {
 public:
  virtual ~SourceModel() = default;
  virtual std::size_t n_params() const = 0;
  virtual double mu(double x, std::span<const double> theta) const = 0;
};

class ConstantModel final : public SourceModel {
 public:
  std::size_t n_params() const override { return 1; }
  double mu(double /*x*/, std::span<const double> theta) const override { return theta[0]; }
};

inline const ConstantModel& constant_model() {
  static const ConstantModel model;
  return model;
}

}  // namespace pbreg
