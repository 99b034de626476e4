#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace toetd {

// Everything one call to learn() consumes. The first five fields describe
// time t, the last three describe time t+1.
struct GvfStep {
  double step_size = 0.0;         // alpha_t >= 0
  double interest = 0.0;          // I_t >= 0
  double bootstrap = 0.0;         // lambda_t in [0,1]
  std::vector<double> features;   // phi_t
  double importance_ratio = 1.0;  // rho_t >= 0
  double cumulant = 0.0;          // R_{t+1}
  std::vector<double> next_features;  // phi_{t+1}
  double next_discount = 0.0;     // gamma_{t+1} in [0,1]
};

// Throws InvalidInput unless both feature vectors have length n, every value
// is finite, and the scalars sit in their documented ranges.
void validate_step(const GvfStep& step, std::size_t n);

bool all_finite(std::span<const double> values);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace toetd
