#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfhmc {

/// Model parameters outside their admissible range.
class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed experiment or kernel configuration (bad step counts, T/h not integral, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A trajectory produced a non-finite or runaway coordinate.
class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(std::size_t step, const std::string& what)
      : std::runtime_error(what + " (integrator step " + std::to_string(step) + ")"), step_(step) {}

  /// Same failure, annotated with the Markov chain step it happened in.
  IntegrationDiverged(const IntegrationDiverged& inner, std::size_t chain_step)
      : std::runtime_error(std::string(inner.what()) + " in chain step " + std::to_string(chain_step)),
        step_(inner.step_),
        chain_step_(chain_step) {}

  std::size_t step() const noexcept { return step_; }
  std::size_t chain_step() const noexcept { return chain_step_; }

 private:
  std::size_t step_;
  std::size_t chain_step_ = 0;
};

}  // namespace mfhmc
