#pragma once

#include <stdexcept>
#include <string>

namespace owk {

// Bad user input: out-of-range parameters, malformed points, unknown names.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not reach its tolerance. Carries the best
// value found so far, when one exists.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double partial = 0.0,
                        bool has_partial = false)
      : std::runtime_error(what), partial_(partial), has_partial_(has_partial) {}

  double partial() const { return partial_; }
  bool has_partial() const { return has_partial_; }

 private:
  double partial_;
  bool has_partial_;
};

// An internal invariant was violated (e.g. transition masses do not sum to 1).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace owk
