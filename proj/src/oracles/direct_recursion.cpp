#include "toetd/error.hpp"
#include "toetd/oracles.hpp"

namespace toetd::oracle {

namespace {

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

RecursionTrace direct_recursion_trace(const StepHistory& history) {
  const std::size_t n = history.dimension();
  if (n == 0) throw InvalidInput("history has zero feature dimension");
  if (!all_finite(history.initial_weights)) throw InvalidInput("initial weights contain a non-finite value");
  for (const GvfStep& step : history.steps) validate_step(step, n);

  const auto& steps = history.steps;
  const std::size_t T = steps.size();
  RecursionTrace out;
  out.weights.reserve(T + 1);
  out.weights.push_back(history.initial_weights);

  for (std::size_t t = 0; t < T; ++t) {
    const GvfStep& s = steps[t];
    const std::vector<double>& theta = out.weights[t];
    const std::vector<double>& theta_prev = t == 0 ? out.weights[0] : out.weights[t - 1];
    const double gamma_t = t == 0 ? 0.0 : steps[t - 1].next_discount;
    const double rho_prev = t == 0 ? 0.0 : steps[t - 1].importance_ratio;
    const double followon_prev = t == 0 ? 0.0 : out.followons[t - 1];
    const std::vector<double> trace_prev = t == 0 ? std::vector<double>(n, 0.0) : out.traces[t - 1];

    // delta_t
    const double delta = s.cumulant + s.next_discount * inner(theta, s.next_features) - inner(theta, s.features);
    // F_t
    const double followon = rho_prev * gamma_t * followon_prev + s.interest;
    // M_t
    const double emphasis = s.bootstrap * s.interest + (1.0 - s.bootstrap) * followon;
    // e_t
    const double decay = s.importance_ratio * gamma_t * s.bootstrap;
    const double correction = 1.0 - decay * inner(s.features, trace_prev);
    std::vector<double> trace(n);
    for (std::size_t i = 0; i < n; ++i) {
      trace[i] = decay * trace_prev[i] + s.importance_ratio * s.step_size * emphasis * correction * s.features[i];
    }
    // theta_{t+1}
    std::vector<double> difference(n);
    for (std::size_t i = 0; i < n; ++i) difference[i] = theta[i] - theta_prev[i];
    const double moved = inner(difference, s.features);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = theta[i] + delta * trace[i] +
                (trace[i] - s.step_size * emphasis * s.importance_ratio * s.features[i]) * moved;
    }

    out.td_errors.push_back(delta);
    out.followons.push_back(followon);
    out.emphases.push_back(emphasis);
    out.traces.push_back(std::move(trace));
    out.weights.push_back(std::move(next));
  }
  return out;
}

Trajectory direct_recursion(const StepHistory& history) { return direct_recursion_trace(history).weights; }

}  // namespace toetd::oracle
