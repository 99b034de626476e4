#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "toetd/gvf_step.hpp"
#include "toetd/mrp.hpp"
#include "toetd/rng.hpp"

namespace toetd {

// alpha_t: constant, or base * horizon / (horizon + t).
struct StepSizeSchedule {
  double base = 0.1;
  double horizon = 0.0;  // 0 means constant

  double at(std::uint64_t t) const {
    if (horizon <= 0.0) return base;
    return base * horizon / (horizon + static_cast<double>(t));
  }
};

// lambda_t: constant, or looked up by the current state when a table is given.
struct BootstrapSchedule {
  double value = 0.0;
  std::vector<double> per_state;

  double at(std::size_t state) const { return per_state.empty() ? value : per_state.at(state); }
};

struct HyperSchedule {
  StepSizeSchedule alpha;
  BootstrapSchedule lambda;
};

struct StreamCursor {
  std::size_t current_state = 0;
  Rng rng;
  std::uint64_t step_index = 0;
  std::uint64_t episode_index = 0;   // completed episodes (transitions into a terminal pseudo-state)
  bool at_episode_start = true;      // current_state is the first state of an episode
  double discount_product = 1.0;     // product of discounts since the episode began

  bool operator==(const StreamCursor&) const = default;
};

// Draws the first state from the start distribution.
StreamCursor start_cursor(const MrpSpec& spec, std::uint64_t seed);

// Samples S' ~ behavior(S, .) and emits the step leaving the current state.
// Leaving a terminal pseudo-state is an ordinary step with phi = 0, so one
// unbroken sequence covers every episode.
GvfStep next_step(const MrpSpec& spec, StreamCursor& cursor, const HyperSchedule& schedule);

// Alpha that makes the largest per-state step 0.1: 0.1 / max_s phi(s)^T phi(s).
double auto_step_size(const MrpSpec& spec);

}  // namespace toetd
