#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "toetd/gvf_step.hpp"
#include "toetd/mrp.hpp"

// Deliberately plain reference implementations. None of them calls into the
// incremental learner.
namespace toetd::oracle {

// A recorded time series. Steps are expected to be contiguous
// (steps[t].features == steps[t-1].next_features); the direct recursion reads
// phi_t from steps[t] while the incremental learner carries it forward from
// the previous call.
struct StepHistory {
  std::vector<GvfStep> steps;
  std::vector<double> initial_weights;

  std::size_t dimension() const { return initial_weights.size(); }
};

using Trajectory = std::vector<std::vector<double>>;

// Full sequences produced by the literal recursion. weights has T+1 entries
// (theta_0 .. theta_T); the others have T.
struct RecursionTrace {
  Trajectory weights;
  Trajectory traces;
  std::vector<double> td_errors;
  std::vector<double> followons;
  std::vector<double> emphases;
};

// Evaluates, for t = 0..T-1 with F_{-1} = 0, e_{-1} = 0, theta_{-1} = theta_0:
//   delta_t   = R_{t+1} + gamma_{t+1} theta_t^T phi_{t+1} - theta_t^T phi_t
//   F_t       = rho_{t-1} gamma_t F_{t-1} + I_t
//   M_t       = lambda_t I_t + (1 - lambda_t) F_t
//   e_t       = rho_t gamma_t lambda_t e_{t-1}
//               + rho_t alpha_t M_t (1 - rho_t gamma_t lambda_t phi_t^T e_{t-1}) phi_t
//   theta_t+1 = theta_t + delta_t e_t + (e_t - alpha_t M_t rho_t phi_t)(theta_t - theta_{t-1})^T phi_t
// Every intermediate sequence is stored; nothing is carried incrementally.
RecursionTrace direct_recursion_trace(const StepHistory& history);
Trajectory direct_recursion(const StepHistory& history);

// True online TD(lambda) with dutch traces and no emphasis, written with the
// "old value" scalar formulation:
//   e     <- gamma lambda e + alpha (1 - gamma lambda e^T phi) phi
//   theta <- theta + (delta + V - V_old) e - alpha (V - V_old) phi
// Rejects steps with rho != 1 or I != 1.
class TrueOnlineTd {
 public:
  explicit TrueOnlineTd(std::span<const double> initial_weights);

  void learn(const GvfStep& step);
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  std::vector<double> trace_;
  double old_next_value_ = 0.0;  // theta_{t-1}^T phi_t, captured on the previous call
  double discount_ = 0.0;
  bool first_ = true;
};

Trajectory true_online_td(const StepHistory& history);

// One emphatic TD(0) update written independently of the learner:
//   F      = rho_prev gamma F_prev + I
//   theta' = theta + alpha F rho delta phi
struct EmphaticTd0Result {
  std::vector<double> weights;
  double followon = 0.0;
};

struct EmphaticTd0Input {
  std::span<const double> weights;
  std::span<const double> features;
  std::span<const double> next_features;
  double cumulant = 0.0;
  double next_discount = 0.0;
  double discount = 0.0;  // gamma_t
  double importance_ratio = 1.0;
  double step_size = 0.0;
  double interest = 0.0;
  double previous_followon = 0.0;
  double previous_ratio = 0.0;
};

EmphaticTd0Result emphatic_td0_step(const EmphaticTd0Input& in);

// Stateful driver around emphatic_td0_step for stream use. Ignores lambda.
class EmphaticTd0 {
 public:
  explicit EmphaticTd0(std::span<const double> initial_weights);

  void learn(const GvfStep& step);
  std::span<const double> weights() const { return weights_; }
  double followon() const { return followon_; }

 private:
  std::vector<double> weights_;
  double followon_ = 0.0;
  double ratio_ = 0.0;
  double discount_ = 0.0;
};

// Conventional off-policy TD(lambda) with accumulating traces:
//   e <- rho (gamma lambda e + phi),  theta <- theta + alpha delta e
// Known to diverge on adversarial off-policy problems; no check is applied.
class OffPolicyTdLambda {
 public:
  explicit OffPolicyTdLambda(std::span<const double> initial_weights);

  void learn(const GvfStep& step);
  std::span<const double> weights() const { return weights_; }
  bool finite() const;

 private:
  std::vector<double> weights_;
  std::vector<double> trace_;
  double discount_ = 0.0;
};

struct FlaggedTrajectory {
  Trajectory weights;
  std::vector<bool> non_finite;  // per entry of weights
};

FlaggedTrajectory offpolicy_td_lambda(const StepHistory& history);

// v solving v = r_pi + P_pi Gamma v, i.e. v(s) = sum_s' pi(s,s') [R(s,s') + gamma(s') v(s')].
struct MrpSolution {
  std::vector<double> true_values;
  std::vector<double> expected_cumulant;  // r_pi
  double residual = 0.0;                  // max-norm of v - r_pi - P_pi Gamma v
};

// Direct LU solve. Throws SingularSystem when the system has no unique
// solution or the residual exceeds 1e-10.
MrpSolution solve_true_values(const MrpSpec& spec);

}  // namespace toetd::oracle
