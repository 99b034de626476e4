#include "toetd/error.hpp"
#include "toetd/oracles.hpp"

namespace toetd::oracle {

OffPolicyTdLambda::OffPolicyTdLambda(std::span<const double> initial_weights)
    : weights_(initial_weights.begin(), initial_weights.end()), trace_(initial_weights.size(), 0.0) {
  if (weights_.empty()) throw InvalidInput("off-policy TD needs a positive dimension");
}

void OffPolicyTdLambda::learn(const GvfStep& step) {
  validate_step(step, weights_.size());
  double value = 0.0;
  double next_value = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    value += weights_[i] * step.features[i];
    next_value += weights_[i] * step.next_features[i];
  }
  const double td_error = step.cumulant + step.next_discount * next_value - value;
  const double decay = discount_ * step.bootstrap;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    trace_[i] = step.importance_ratio * (decay * trace_[i] + step.features[i]);
    weights_[i] += step.step_size * td_error * trace_[i];
  }
  discount_ = step.next_discount;
}

bool OffPolicyTdLambda::finite() const { return all_finite(weights_) && all_finite(trace_); }

FlaggedTrajectory offpolicy_td_lambda(const StepHistory& history) {
  OffPolicyTdLambda learner(history.initial_weights);
  FlaggedTrajectory out;
  out.weights.emplace_back(history.initial_weights);
  out.non_finite.push_back(!learner.finite());
  for (const GvfStep& step : history.steps) {
    learner.learn(step);
    out.weights.emplace_back(learner.weights().begin(), learner.weights().end());
    out.non_finite.push_back(!learner.finite());
  }
  return out;
}

}  // namespace toetd::oracle
