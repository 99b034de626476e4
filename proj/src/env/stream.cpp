#include "toetd/stream.hpp"

#include <algorithm>

#include "toetd/error.hpp"

namespace toetd {

namespace {

double interest_at(const MrpSpec& spec, const StreamCursor& cursor) {
  const auto& schedule = spec.interest;
  switch (schedule.kind) {
    case InterestKind::constant: return schedule.value;
    case InterestKind::first_state: return cursor.at_episode_start ? 1.0 : 0.0;
    case InterestKind::per_state: return schedule.table.at(cursor.current_state);
    case InterestKind::discounted: return cursor.discount_product;
  }
  return 0.0;
}

std::span<const double> row(const Matrix& m, std::size_t r) {
  return {m.data() + r * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

}  // namespace

StreamCursor start_cursor(const MrpSpec& spec, std::uint64_t seed) {
  StreamCursor cursor;
  cursor.rng = Rng(seed);
  cursor.current_state = cursor.rng.categorical(spec.start_distribution);
  return cursor;
}

GvfStep next_step(const MrpSpec& spec, StreamCursor& cursor, const HyperSchedule& schedule) {
  const std::size_t s = cursor.current_state;
  const std::size_t next = cursor.rng.categorical(row(spec.behavior, s));

  GvfStep step;
  step.step_size = schedule.alpha.at(cursor.step_index);
  step.interest = interest_at(spec, cursor);
  step.bootstrap = schedule.lambda.at(s);
  const auto phi = spec.feature_row(s);
  const auto next_phi = spec.feature_row(next);
  step.features.assign(phi.begin(), phi.end());
  step.next_features.assign(next_phi.begin(), next_phi.end());
  step.importance_ratio = spec.importance_ratio(s, next);
  step.cumulant = spec.cumulant(s, next);
  step.next_discount = spec.discount[next];

  const bool leaving_terminal = spec.is_terminal(s);
  const bool entering_terminal = spec.is_terminal(next);
  if (entering_terminal) ++cursor.episode_index;
  cursor.current_state = next;
  ++cursor.step_index;
  cursor.at_episode_start = leaving_terminal;
  cursor.discount_product = leaving_terminal ? 1.0 : cursor.discount_product * step.next_discount;
  return step;
}

double auto_step_size(const MrpSpec& spec) {
  double largest = 0.0;
  for (std::size_t s = 0; s < spec.num_states(); ++s) largest = std::max(largest, dot(spec.feature_row(s), spec.feature_row(s)));
  if (largest == 0.0) throw InvalidInput("auto step size needs at least one non-zero feature row");
  return 0.1 / largest;
}

}  // namespace toetd
