#pragma once

#include <stdexcept>
#include <string>

namespace ionfield {

// Preconditions are reported with std::invalid_argument. NumericalError is
// reserved for algorithms that ran but failed to converge or hit a singular
// intermediate.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace ionfield
