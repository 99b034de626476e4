#include "toetd/gvf_step.hpp"

#include <cmath>
#include <string>

#include "toetd/error.hpp"

namespace toetd {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidInput(std::string(name) + " is not finite");
  }
}

void require_unit_interval(double value, const char* name) {
  if (value < 0.0 || value > 1.0) {
    throw InvalidInput(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

void require_nonnegative(double value, const char* name) {
  if (value < 0.0) {
    throw InvalidInput(std::string(name) + " must be nonnegative, got " + std::to_string(value));
  }
}

}  // namespace

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void validate_step(const GvfStep& step, std::size_t n) {
  if (step.features.size() != n || step.next_features.size() != n) {
    throw InvalidInput("feature vector length " + std::to_string(step.features.size()) + "/" +
                       std::to_string(step.next_features.size()) + " does not match dimension " +
                       std::to_string(n));
  }
  require_finite(step.step_size, "step_size");
  require_finite(step.interest, "interest");
  require_finite(step.bootstrap, "bootstrap");
  require_finite(step.importance_ratio, "importance_ratio");
  require_finite(step.cumulant, "cumulant");
  require_finite(step.next_discount, "next_discount");
  if (!all_finite(step.features)) throw InvalidInput("features contain a non-finite value");
  if (!all_finite(step.next_features)) throw InvalidInput("next_features contain a non-finite value");
  require_nonnegative(step.step_size, "step_size");
  require_nonnegative(step.interest, "interest");
  require_nonnegative(step.importance_ratio, "importance_ratio");
  require_unit_interval(step.bootstrap, "bootstrap");
  require_unit_interval(step.next_discount, "next_discount");
}

}  // namespace toetd
