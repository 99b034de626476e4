#include "toetd/error.hpp"
#include "toetd/oracles.hpp"

namespace toetd::oracle {

EmphaticTd0Result emphatic_td0_step(const EmphaticTd0Input& in) {
  const std::size_t n = in.weights.size();
  if (in.features.size() != n || in.next_features.size() != n) throw InvalidInput("dimension mismatch");
  GvfStep check;
  check.step_size = in.step_size;
  check.interest = in.interest;
  check.importance_ratio = in.importance_ratio;
  check.cumulant = in.cumulant;
  check.next_discount = in.next_discount;
  check.features.assign(in.features.begin(), in.features.end());
  check.next_features.assign(in.next_features.begin(), in.next_features.end());
  validate_step(check, n);

  double value = 0.0;
  double next_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += in.weights[i] * in.features[i];
    next_value += in.weights[i] * in.next_features[i];
  }
  const double td_error = in.cumulant + in.next_discount * next_value - value;

  EmphaticTd0Result out;
  out.followon = in.previous_ratio * in.discount * in.previous_followon + in.interest;
  const double gain = in.step_size * out.followon * in.importance_ratio * td_error;
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.weights[i] = in.weights[i] + gain * in.features[i];
  return out;
}

EmphaticTd0::EmphaticTd0(std::span<const double> initial_weights)
    : weights_(initial_weights.begin(), initial_weights.end()) {
  if (weights_.empty()) throw InvalidInput("emphatic TD(0) needs a positive dimension");
}

void EmphaticTd0::learn(const GvfStep& step) {
  EmphaticTd0Input in;
  in.weights = weights_;
  in.features = step.features;
  in.next_features = step.next_features;
  in.cumulant = step.cumulant;
  in.next_discount = step.next_discount;
  in.discount = discount_;
  in.importance_ratio = step.importance_ratio;
  in.step_size = step.step_size;
  in.interest = step.interest;
  in.previous_followon = followon_;
  in.previous_ratio = ratio_;
  EmphaticTd0Result out = emphatic_td0_step(in);
  weights_ = std::move(out.weights);
  followon_ = out.followon;
  ratio_ = step.importance_ratio;
  discount_ = step.next_discount;
}

}  // namespace toetd::oracle
