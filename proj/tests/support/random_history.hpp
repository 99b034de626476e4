#pragma once

// Test-only generators and comparison helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "toetd/oracles.hpp"
#include "toetd/rng.hpp"

namespace toetd::testing {

struct HistoryRanges {
  std::size_t max_dimension = 4;
  std::size_t max_steps = 50;
  double max_alpha = 1.0;
  double max_rho = 2.0;
  bool unit_rho = false;
  bool unit_interest = false;
  std::optional<double> fixed_lambda;
};

// A contiguous time series: steps[t].features == steps[t-1].next_features.
// Discounts and lambdas hit the endpoints 0 and 1 now and then.
inline oracle::StepHistory random_history(Rng& rng, const HistoryRanges& ranges = {}) {
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(ranges.max_dimension));
  const std::size_t steps = static_cast<std::size_t>(rng.uniform() * static_cast<double>(ranges.max_steps + 1));
  auto vec = [&] {
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
    return v;
  };
  auto unit = [&] {
    const double u = rng.uniform();
    if (u < 0.1) return 0.0;
    if (u < 0.2) return 1.0;
    return rng.uniform();
  };
  oracle::StepHistory history;
  history.initial_weights = vec();
  std::vector<double> phi = vec();
  for (std::size_t t = 0; t < steps; ++t) {
    GvfStep s;
    s.step_size = ranges.max_alpha * rng.uniform();
    s.interest = ranges.unit_interest ? 1.0 : (rng.uniform() < 0.5 ? 0.0 : 1.0);
    s.bootstrap = ranges.fixed_lambda ? *ranges.fixed_lambda : unit();
    s.features = phi;
    s.importance_ratio = ranges.unit_rho ? 1.0 : ranges.max_rho * rng.uniform();
    s.cumulant = 2.0 * rng.uniform() - 1.0;
    s.next_features = vec();
    s.next_discount = unit();
    phi = s.next_features;
    history.steps.push_back(std::move(s));
  }
  return history;
}

// max_i |a_i - b_i| / max(1, max_i |b_i|): relative once the weights are
// large, absolute near zero.
inline double relative_deviation(std::span<const double> a, std::span<const double> b) {
  double scale = 1.0;
  for (double x : b) scale = std::max(scale, std::abs(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    worst = std::max(worst, d);
  }
  return worst / scale;
}

inline double max_trajectory_deviation(const oracle::Trajectory& a, const oracle::Trajectory& b) {
  double worst = 0.0;
  if (a.size() != b.size()) return INFINITY;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = relative_deviation(a[t], b[t]);
    if (std::isnan(d)) return d;
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace toetd::testing
