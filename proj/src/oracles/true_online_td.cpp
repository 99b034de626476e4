#include <string>

#include "toetd/error.hpp"
#include "toetd/oracles.hpp"

namespace toetd::oracle {

TrueOnlineTd::TrueOnlineTd(std::span<const double> initial_weights)
    : weights_(initial_weights.begin(), initial_weights.end()), trace_(initial_weights.size(), 0.0) {
  if (weights_.empty()) throw InvalidInput("true online TD needs a positive dimension");
  if (!all_finite(weights_)) throw InvalidInput("initial weights contain a non-finite value");
}

void TrueOnlineTd::learn(const GvfStep& step) {
  validate_step(step, weights_.size());
  if (step.importance_ratio != 1.0 || step.interest != 1.0) {
    throw InvalidInput("true online TD reference requires rho == 1 and I == 1");
  }
  const double alpha = step.step_size;
  const double decay = discount_ * step.bootstrap;

  double value = 0.0;
  double next_value = 0.0;
  double trace_dot = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    value += weights_[i] * step.features[i];
    next_value += weights_[i] * step.next_features[i];
    trace_dot += trace_[i] * step.features[i];
  }
  if (first_) {
    old_next_value_ = value;
    first_ = false;
  }
  const double td_error = step.cumulant + step.next_discount * next_value - value;
  const double value_shift = value - old_next_value_;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    trace_[i] = decay * trace_[i] + alpha * (1.0 - decay * trace_dot) * step.features[i];
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] += (td_error + value_shift) * trace_[i] - alpha * value_shift * step.features[i];
  }
  old_next_value_ = next_value;
  discount_ = step.next_discount;
}

Trajectory true_online_td(const StepHistory& history) {
  TrueOnlineTd learner(history.initial_weights);
  Trajectory out;
  out.emplace_back(learner.weights().begin(), learner.weights().end());
  for (const GvfStep& step : history.steps) {
    learner.learn(step);
    out.emplace_back(learner.weights().begin(), learner.weights().end());
  }
  return out;
}

}  // namespace toetd::oracle
