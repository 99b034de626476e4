#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "toetd/gvf_step.hpp"

namespace toetd {

// Persistent memory of the learner between learn() calls.
//
//  weights          theta
//  trace            e, the dutch-style emphatic eligibility trace
//  followon         F. Between calls it holds rho_{t-1} gamma_t F_{t-1}; learn()
//                   adds I_t to turn it into F_t.
//  update_dot       D = (theta_t - theta_{t-1})^T phi_t, carried as the previous
//                   update dotted with the previous next_features. Starting at 0
//                   means theta_{-1} == theta_0.
//  stored_discount  gamma_t, the next_discount seen by the previous call.
struct LearnerState {
  std::vector<double> weights;
  std::vector<double> trace;
  double followon = 0.0;
  double update_dot = 0.0;
  double stored_discount = 0.0;

  std::size_t dimension() const { return weights.size(); }
  bool finite() const;
};

// Temporaries of one learn() call, exposed for monitoring and hand checks.
struct StepDiagnostics {
  double td_error = 0.0;        // delta_t
  double emphasis = 0.0;        // M_t = lambda I + (1 - lambda) F_t
  double followon_after = 0.0;  // F_t, after adding I and before the rho gamma' decay
  double trace_scalar = 0.0;    // S = rho alpha M (1 - rho gamma lambda phi^T e)
  bool diverged = false;        // state holds a non-finite value after the update
};

// Throws InvalidInput for n == 0 or a wrong-length / non-finite initial vector.
LearnerState init_state(std::size_t n, std::optional<std::span<const double>> initial_weights = {});

// One step of true online emphatic TD(lambda), applied in place. The order of
// operations is fixed:
//
//   delta <- R + gamma' theta^T phi' - theta^T phi
//   F     <- F + I
//   M     <- lambda I + (1 - lambda) F
//   S     <- rho alpha M (1 - rho gamma lambda phi^T e)     (gamma = stored_discount)
//   e     <- rho gamma lambda e + S phi
//   Delta <- delta e + D (e - rho alpha M phi)
//   theta <- theta + Delta
//   D     <- Delta^T phi'
//   F     <- rho gamma' F
//   gamma <- gamma'
//
// The product rho*alpha*M is formed once and shared by S and the correction
// term, so with lambda == 0 the correction vanishes exactly.
//
// Inputs are validated before anything is touched. A non-finite result is not
// an error: the state is kept and the returned diagnostics are flagged.
StepDiagnostics learn(LearnerState& state, const GvfStep& step);

double predict(const LearnerState& state, std::span<const double> features);

// Object wrapper used by the harness and tools.
class TrueOnlineEmphaticTd {
 public:
  explicit TrueOnlineEmphaticTd(std::size_t n,
                                std::optional<std::span<const double>> initial_weights = {})
      : state_(init_state(n, initial_weights)) {}

  StepDiagnostics learn(const GvfStep& step) { return toetd::learn(state_, step); }
  double predict(std::span<const double> features) const { return toetd::predict(state_, features); }

  double followon_value() const { return state_.followon; }
  std::vector<double> trace_copy() const { return state_.trace; }
  std::span<const double> weights() const { return state_.weights; }
  const LearnerState& state() const { return state_; }
  std::size_t dimension() const { return state_.dimension(); }

 private:
  LearnerState state_;
};

}  // namespace toetd
