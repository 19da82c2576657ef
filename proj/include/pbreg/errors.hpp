#pragma once

#include <stdexcept>
#include <string>

namespace pbreg {

// Error taxonomy mirrors the CLI exit codes: validation -> 2, convergence -> 3, io -> 4.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class validation_error : public error {
 public:
  using error::error;
};

// A model mean of zero paired with a positive observed count has zero likelihood.
// This is raised as a hard error rather than returning +inf so optimizers treat
// the offending parameter value as a constraint boundary.
class infinite_deviance_error : public error {
 public:
  using error::error;
};

class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double best_point, double best_value)
      : error(what), best_point(best_point), best_value(best_value) {}
  double best_point;
  double best_value;
};

class io_error : public error {
 public:
  using error::error;
};

}  // namespace pbreg
