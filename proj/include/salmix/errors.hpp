#pragma once

#include <stdexcept>
#include <string>

namespace salmix {

// Base for all recoverable fitting failures.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The SAL density is unbounded when x coincides with the shift point (p >= 2).
struct AtShiftPoint : FitError {
  AtShiftPoint() : FitError("observation coincides with a component shift point") {}
};

// Soft count n_g fell below the floor needed for a full-rank covariance update.
struct EmptyComponent : FitError {
  explicit EmptyComponent(int g, double n_g)
      : FitError("component " + std::to_string(g) + " collapsed (n_g = " + std::to_string(n_g) + ")") {}
};

struct CovarianceRepairFailed : FitError {
  explicit CovarianceRepairFailed(int g)
      : FitError("covariance of component " + std::to_string(g) + " not positive definite after ridge repair") {}
};

struct MissingClassExamples : FitError {
  explicit MissingClassExamples(int cls)
      : FitError("no labeled observations for class " + std::to_string(cls)) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_number(line) {}
  int line_number;
};

struct UnsupportedDimension : std::runtime_error {
  explicit UnsupportedDimension(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace salmix
