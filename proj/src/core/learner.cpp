#include "toetd/learner.hpp"

#include <cmath>
#include <string>

#include "toetd/error.hpp"

namespace toetd {

bool LearnerState::finite() const {
  return all_finite(weights) && all_finite(trace) && std::isfinite(followon) &&
         std::isfinite(update_dot) && std::isfinite(stored_discount);
}

LearnerState init_state(std::size_t n, std::optional<std::span<const double>> initial_weights) {
  if (n == 0) throw InvalidInput("feature dimension must be positive");
  LearnerState state;
  if (initial_weights) {
    if (initial_weights->size() != n) {
      throw InvalidInput("initial weights have length " + std::to_string(initial_weights->size()) +
                         ", expected " + std::to_string(n));
    }
    if (!all_finite(*initial_weights)) throw InvalidInput("initial weights contain a non-finite value");
    state.weights.assign(initial_weights->begin(), initial_weights->end());
  } else {
    state.weights.assign(n, 0.0);
  }
  state.trace.assign(n, 0.0);
  return state;
}

StepDiagnostics learn(LearnerState& state, const GvfStep& step) {
  const std::size_t n = state.dimension();
  validate_step(step, n);

  const double alpha = step.step_size;
  const double lambda = step.bootstrap;
  const double rho = step.importance_ratio;
  const double interest = step.interest;
  const double gamma = state.stored_discount;
  const double next_gamma = step.next_discount;
  const std::span<const double> phi = step.features;
  const std::span<const double> next_phi = step.next_features;

  // The three inner products share one pass.
  double value = 0.0;
  double next_value = 0.0;
  double phi_dot_trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += state.weights[i] * phi[i];
    next_value += state.weights[i] * next_phi[i];
    phi_dot_trace += phi[i] * state.trace[i];
  }

  StepDiagnostics diag;
  diag.td_error = step.cumulant + next_gamma * next_value - value;
  state.followon += interest;
  diag.followon_after = state.followon;
  diag.emphasis = lambda * interest + (1.0 - lambda) * state.followon;

  const double scaled_emphasis = rho * alpha * diag.emphasis;
  const double decay = rho * gamma * lambda;
  diag.trace_scalar = scaled_emphasis * (1.0 - decay * phi_dot_trace);

  const double delta = diag.td_error;
  const double carried = state.update_dot;
  double update_dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = decay * state.trace[i] + diag.trace_scalar * phi[i];
    state.trace[i] = e;
    const double update = delta * e + carried * (e - scaled_emphasis * phi[i]);
    state.weights[i] += update;
    update_dot += update * next_phi[i];
  }
  state.update_dot = update_dot;
  state.followon = rho * next_gamma * state.followon;
  state.stored_discount = next_gamma;

  diag.diverged = !state.finite();
  return diag;
}

double predict(const LearnerState& state, std::span<const double> features) {
  if (features.size() != state.dimension()) {
    throw InvalidInput("feature vector length " + std::to_string(features.size()) +
                       " does not match dimension " + std::to_string(state.dimension()));
  }
  if (!all_finite(features)) throw InvalidInput("features contain a non-finite value");
  return dot(state.weights, features);
}

}  // namespace toetd
