#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/random_history.hpp"
#include "toetd/error.hpp"
#include "toetd/learner.hpp"
#include "toetd/mrp.hpp"
#include "toetd/oracles.hpp"
#include "toetd/stream.hpp"

using namespace toetd;

namespace {

oracle::Trajectory run_learner(const oracle::StepHistory& history) {
  TrueOnlineEmphaticTd learner(history.dimension(), std::span<const double>(history.initial_weights));
  oracle::Trajectory out{history.initial_weights};
  for (const auto& s : history.steps) {
    learner.learn(s);
    out.emplace_back(learner.weights().begin(), learner.weights().end());
  }
  return out;
}

GvfStep scalar_step(double alpha, double interest, double lambda, double phi, double rho, double r, double next_phi,
                    double next_gamma) {
  GvfStep s;
  s.step_size = alpha;
  s.interest = interest;
  s.bootstrap = lambda;
  s.features = {phi};
  s.importance_ratio = rho;
  s.cumulant = r;
  s.next_features = {next_phi};
  s.next_discount = next_gamma;
  return s;
}

oracle::StepHistory chain_history(const MrpSpec& spec, std::uint64_t seed, std::size_t steps, double alpha,
                                  double lambda) {
  HyperSchedule schedule;
  schedule.alpha.base = alpha;
  schedule.lambda.value = lambda;
  StreamCursor cursor = start_cursor(spec, seed);
  oracle::StepHistory history;
  history.initial_weights.assign(spec.num_features(), 0.0);
  for (std::size_t t = 0; t < steps; ++t) history.steps.push_back(next_step(spec, cursor, schedule));
  return history;
}

double chain_rmse(std::span<const double> w) {
  double sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = w[i] - static_cast<double>(i + 1) / static_cast<double>(w.size() + 1);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(w.size()));
}

}  // namespace

TEST_CASE("direct recursion: empty history returns the initial weights") {
  oracle::StepHistory history;
  history.initial_weights = {0.25, -1};
  const auto trajectory = oracle::direct_recursion(history);
  REQUIRE(trajectory.size() == 1);
  CHECK(trajectory[0] == history.initial_weights);
}

TEST_CASE("direct recursion reproduces the hand-executed steps") {
  oracle::StepHistory history;
  history.initial_weights = {0};
  history.steps = {scalar_step(0.5, 1, 0, 1, 1, 1, 1, 0.5), scalar_step(0.5, 1, 0.5, 1, 1, 0, 0, 0)};
  const auto trace = oracle::direct_recursion_trace(history);
  CHECK(trace.weights[1] == std::vector<double>{0.5});
  CHECK(trace.weights[2] == std::vector<double>{0.1875});
  CHECK(trace.followons == std::vector<double>{1, 1.5});
  CHECK(trace.emphases == std::vector<double>{1, 1.25});
  CHECK(trace.td_errors == std::vector<double>{1, -0.5});
  CHECK(trace.traces[1] == std::vector<double>{0.671875});
}

TEST_CASE("direct recursion matches the incremental learner on random histories") {
  Rng rng(31337);
  for (int k = 0; k < 300; ++k) {
    const auto history = testing::random_history(rng);
    CHECK(testing::max_trajectory_deviation(run_learner(history), oracle::direct_recursion(history)) <= 1e-12);
  }
}

TEST_CASE("direct recursion validates its input") {
  oracle::StepHistory history;
  history.initial_weights = {0};
  history.steps = {scalar_step(-1, 1, 0, 1, 1, 1, 1, 0.5)};
  CHECK_THROWS_AS(oracle::direct_recursion(history), InvalidInput);
}

TEST_CASE("true online TD: one full step fits a terminal target") {
  oracle::StepHistory history;
  history.initial_weights = {0};
  history.steps = {scalar_step(1, 1, 0.3, 1, 1, 1, 0, 0)};
  CHECK(oracle::true_online_td(history).back() == std::vector<double>{1});
}

TEST_CASE("true online TD equals the emphatic learner when lambda, rho and I are all 1") {
  Rng rng(5);
  testing::HistoryRanges ranges;
  ranges.unit_rho = true;
  ranges.unit_interest = true;
  ranges.fixed_lambda = 1.0;
  ranges.max_alpha = 0.2;
  for (int k = 0; k < 200; ++k) {
    const auto history = testing::random_history(rng, ranges);
    CHECK(testing::max_trajectory_deviation(run_learner(history), oracle::true_online_td(history)) <= 1e-12);
  }
}

TEST_CASE("true online TD differs from the emphatic learner once emphasis is active") {
  const MrpSpec chain = make_chain(5, 1.0);
  const auto history = chain_history(chain, 11, 300, 0.05, 0.5);
  CHECK(testing::max_trajectory_deviation(run_learner(history), oracle::true_online_td(history)) > 0.0);
}

TEST_CASE("true online TD rejects off-policy or uneven interest") {
  oracle::StepHistory history;
  history.initial_weights = {0};
  history.steps = {scalar_step(0.1, 1, 1, 1, 0.5, 1, 1, 0.5)};
  CHECK_THROWS_AS(oracle::true_online_td(history), InvalidInput);
  history.steps = {scalar_step(0.1, 0, 1, 1, 1, 1, 1, 0.5)};
  CHECK_THROWS_AS(oracle::true_online_td(history), InvalidInput);
}

TEST_CASE("emphatic TD(0) step") {
  const std::vector<double> zero = {0};
  const std::vector<double> one = {1};
  oracle::EmphaticTd0Input in;
  in.weights = zero;
  in.features = one;
  in.next_features = one;
  in.cumulant = 1;
  in.next_discount = 0.5;
  in.importance_ratio = 1;
  in.step_size = 0.5;
  in.interest = 1;

  SUBCASE("matches the first hand-executed step") {
    const auto out = oracle::emphatic_td0_step(in);
    CHECK(out.weights == std::vector<double>{0.5});
    CHECK(out.followon == 1.0);
  }
  SUBCASE("zero emphasis") {
    const std::vector<double> w = {0.7};
    in.weights = w;
    in.interest = 0;
    in.previous_followon = 0;
    CHECK(oracle::emphatic_td0_step(in).weights == w);
  }
  SUBCASE("rho = 0") {
    const std::vector<double> w = {0.7};
    in.weights = w;
    in.importance_ratio = 0;
    CHECK(oracle::emphatic_td0_step(in).weights == w);
  }
}

TEST_CASE("emphatic TD(0) equals the learner at lambda = 0 step by step") {
  Rng rng(8);
  testing::HistoryRanges ranges;
  ranges.fixed_lambda = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto history = testing::random_history(rng, ranges);
    oracle::EmphaticTd0 reference(history.initial_weights);
    TrueOnlineEmphaticTd learner(history.dimension(), std::span<const double>(history.initial_weights));
    for (const auto& step : history.steps) {
      reference.learn(step);
      const auto d = learner.learn(step);
      CHECK(testing::relative_deviation(learner.weights(), reference.weights()) <= 1e-12);
      CHECK(reference.followon() == doctest::Approx(d.followon_after).epsilon(1e-12));
    }
  }
}

TEST_CASE("true values: five-state random walk") {
  const auto solution = oracle::solve_true_values(make_chain(5, 1.0));
  for (std::size_t i = 1; i <= 5; ++i) {
    CHECK(solution.true_values[i] == doctest::Approx(static_cast<double>(i) / 6.0).epsilon(1e-14));
  }
  CHECK(solution.residual <= 1e-10);
}

TEST_CASE("true values: single absorbing state pays its cumulant once") {
  MrpSpec spec;
  spec.behavior = Matrix::Ones(1, 1);
  spec.target = spec.behavior;
  spec.cumulant = Matrix::Constant(1, 1, 3.25);
  spec.discount = {0.0};
  spec.features = Matrix::Ones(1, 1);
  spec.start_distribution = {1.0};
  CHECK(oracle::solve_true_values(spec).true_values == std::vector<double>{3.25});
}

TEST_CASE("true values: two-state ring") {
  MrpSpec spec;
  spec.behavior = Matrix{{0, 1}, {1, 0}};
  spec.target = spec.behavior;
  spec.cumulant = Matrix{{0, 1}, {0, 0}};
  spec.discount = {0.5, 0.5};
  spec.features = Matrix::Identity(2, 2);
  spec.start_distribution = {1, 0};
  const auto v = oracle::solve_true_values(spec).true_values;
  CHECK(v[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  spec.discount = {1, 1};
  CHECK_THROWS_AS(oracle::solve_true_values(spec), SingularSystem);
}

TEST_CASE("true values: residual bound on random discounted processes") {
  Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + k % 30;
    MrpSpec spec;
    spec.behavior = Matrix(n, n);
    spec.cumulant = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      double sum = 0;
      for (std::size_t c = 0; c < n; ++c) {
        spec.behavior(r, c) = rng.uniform();
        sum += spec.behavior(r, c);
        spec.cumulant(r, c) = 2 * rng.uniform() - 1;
      }
      spec.behavior.row(r) /= sum;
    }
    spec.target = spec.behavior;
    spec.discount.resize(n);
    for (auto& g : spec.discount) g = 0.99 * rng.uniform();
    spec.features = Matrix::Identity(n, n);
    spec.start_distribution.assign(n, 1.0 / static_cast<double>(n));
    const auto solution = oracle::solve_true_values(spec);
    const Eigen::Map<const Eigen::VectorXd> v(solution.true_values.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rebuilt = Eigen::Map<const Eigen::VectorXd>(solution.expected_cumulant.data(), static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < n; ++c) rebuilt[s] += spec.target(s, c) * spec.discount[c] * v[c];
    }
    CHECK((v - rebuilt).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("off-policy TD(lambda): zero step size keeps weights fixed") {
  Rng rng(4);
  auto history = testing::random_history(rng, {.max_steps = 50});
  for (auto& s : history.steps) s.step_size = 0;
  const auto out = oracle::offpolicy_td_lambda(history);
  for (const auto& w : out.weights) CHECK(w == history.initial_weights);
}

TEST_CASE("off-policy TD(lambda) converges on-policy on the tabular chain") {
  const MrpSpec chain = make_chain(5, 1.0);
  const auto history = chain_history(chain, 3, 60000, 0.01, 0.0);
  const auto out = oracle::offpolicy_td_lambda(history);
  const std::vector<double> interior = out.weights.back();
  CHECK(chain_rmse(interior) < 0.05);
}

TEST_CASE("off-policy TD(lambda) diverges on the Baird star") {
  const MrpSpec star = make_baird_star();
  auto history = chain_history(star, 1, 10000, 0.01, 0.0);
  history.initial_weights = star.initial_weights;
  const auto out = oracle::offpolicy_td_lambda(history);
  double peak = 0;
  for (const auto& w : out.weights) {
    double sq = 0;
    for (double x : w) sq += x * x;
    peak = std::max(peak, std::sqrt(sq));
  }
  CHECK(peak > 1e3);
}

TEST_CASE("off-policy TD(0) matches the emphatic learner on one-step tabular episodes") {
  // With rho = I = 1, lambda = 0 and gamma' = 0 the follow-on stays at 1, so
  // both reduce to tabular TD(0).
  Rng rng(21);
  oracle::StepHistory history;
  history.initial_weights = {0, 0, 0};
  std::size_t state = 0;
  for (int t = 0; t < 500; ++t) {
    GvfStep s;
    s.step_size = 0.1;
    s.interest = 1;
    s.bootstrap = 0;
    s.importance_ratio = 1;
    s.features = {0, 0, 0};
    s.features[state] = 1;
    state = static_cast<std::size_t>(rng.uniform() * 3);
    s.next_features = {0, 0, 0};
    s.next_features[state] = 1;
    s.cumulant = static_cast<double>(state);
    s.next_discount = 0;
    history.steps.push_back(s);
  }
  const auto td = oracle::offpolicy_td_lambda(history);
  CHECK(testing::max_trajectory_deviation(run_learner(history), td.weights) <= 1e-12);
}
