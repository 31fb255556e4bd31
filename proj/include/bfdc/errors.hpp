#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bfdc {

// Bad run definition: malformed document, unknown key, or a constraint
// violation (the message names the field and the rule it breaks).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural hypothesis on the model data does not hold (wrong sign of
// a critical-slope curvature, non-negative convection constant, ...).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite value produced by the time stepper.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& msg, int node, double t)
      : std::runtime_error(msg), node(node), t(t) {}
  int node;
  double t;
  // Last finite state, when the stepper had one.
  std::vector<double> last_good;
};

// A limit extrapolation whose tail failed to settle; carries the raw
// sequence for diagnosis.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& msg, std::vector<double> seq)
      : std::runtime_error(msg), sequence(std::move(seq)) {}
  std::vector<double> sequence;
};

// Interface fitting could not run (missing positions, short window).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bfdc
