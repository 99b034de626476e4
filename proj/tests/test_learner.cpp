#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/random_history.hpp"
#include "toetd/error.hpp"
#include "toetd/learner.hpp"

using toetd::GvfStep;
using toetd::TrueOnlineEmphaticTd;

namespace {

GvfStep make_step(double alpha, double interest, double lambda, std::vector<double> phi, double rho, double cumulant,
                  std::vector<double> next_phi, double next_gamma) {
  GvfStep s;
  s.step_size = alpha;
  s.interest = interest;
  s.bootstrap = lambda;
  s.features = std::move(phi);
  s.importance_ratio = rho;
  s.cumulant = cumulant;
  s.next_features = std::move(next_phi);
  s.next_discount = next_gamma;
  return s;
}

// The two hand-executed steps; every intermediate is a dyadic rational, so
// the comparisons are exact.
const GvfStep kFirst = make_step(0.5, 1, 0, {1}, 1, 1, {1}, 0.5);
const GvfStep kSecond = make_step(0.5, 1, 0.5, {1}, 1, 0, {0}, 0);

}  // namespace

TEST_CASE("init zeroes everything or takes arbitrary weights") {
  const auto zero = toetd::init_state(3);
  CHECK(zero.weights == std::vector<double>{0, 0, 0});
  CHECK(zero.trace == std::vector<double>{0, 0, 0});
  CHECK(zero.followon == 0.0);
  CHECK(zero.update_dot == 0.0);
  CHECK(zero.stored_discount == 0.0);

  const std::vector<double> w = {2.5};
  const auto given = toetd::init_state(1, std::span<const double>(w));
  CHECK(given.weights == std::vector<double>{2.5});
  CHECK(given.trace == std::vector<double>{0});
  CHECK(given.followon == 0.0);

  CHECK_THROWS_AS(toetd::init_state(0), toetd::InvalidInput);
  const std::vector<double> wrong = {1, 2};
  CHECK_THROWS_AS(toetd::init_state(1, std::span<const double>(wrong)), toetd::InvalidInput);
  const std::vector<double> nan = {NAN};
  CHECK_THROWS_AS(toetd::init_state(1, std::span<const double>(nan)), toetd::InvalidInput);
}

TEST_CASE("hand-executed two-step example") {
  TrueOnlineEmphaticTd learner(1);
  CHECK(learner.followon_value() == 0.0);

  const auto d1 = learner.learn(kFirst);
  CHECK(d1.td_error == 1.0);
  CHECK(d1.followon_after == 1.0);
  CHECK(d1.emphasis == 1.0);
  CHECK(d1.trace_scalar == 0.5);
  CHECK_FALSE(d1.diverged);
  CHECK(learner.state().weights == std::vector<double>{0.5});
  CHECK(learner.trace_copy() == std::vector<double>{0.5});
  CHECK(learner.followon_value() == 0.5);
  CHECK(learner.state().update_dot == 0.5);
  CHECK(learner.state().stored_discount == 0.5);
  CHECK(learner.predict(std::vector<double>{1}) == 0.5);

  const auto d2 = learner.learn(kSecond);
  CHECK(d2.td_error == -0.5);
  CHECK(d2.followon_after == 1.5);
  CHECK(d2.emphasis == 1.25);
  CHECK(d2.trace_scalar == 0.546875);
  CHECK(learner.trace_copy() == std::vector<double>{0.671875});
  CHECK(learner.state().weights == std::vector<double>{0.1875});
  CHECK(learner.state().update_dot == 0.0);
  CHECK(learner.followon_value() == 0.0);
  CHECK(learner.state().stored_discount == 0.0);
}

TEST_CASE("zero step size with empty trace leaves weights unchanged") {
  TrueOnlineEmphaticTd learner(2);
  const auto d = learner.learn(make_step(0, 1, 0.9, {1, 0}, 1, 5, {0, 1}, 1));
  CHECK(d.trace_scalar == 0.0);
  CHECK(learner.state().weights == std::vector<double>{0, 0});
  CHECK(learner.trace_copy() == std::vector<double>{0, 0});
}

TEST_CASE("predict") {
  const std::vector<double> w = {1, 2};
  TrueOnlineEmphaticTd learner(2, std::span<const double>(w));
  CHECK(learner.predict(std::vector<double>{3, 1}) == 5.0);
  TrueOnlineEmphaticTd zero(4);
  CHECK(zero.predict(std::vector<double>{3, -1, 7, 0.25}) == 0.0);
  CHECK_THROWS_AS(learner.predict(std::vector<double>{1}), toetd::InvalidInput);
}

TEST_CASE("learn rejects bad input without touching the state") {
  TrueOnlineEmphaticTd learner(1);
  learner.learn(kFirst);
  const auto before = learner.state();

  auto bad = kFirst;
  SUBCASE("dimension") { bad.next_features = {1, 2}; }
  SUBCASE("negative alpha") { bad.step_size = -0.1; }
  SUBCASE("negative interest") { bad.interest = -1; }
  SUBCASE("negative rho") { bad.importance_ratio = -1; }
  SUBCASE("lambda above one") { bad.bootstrap = 1.5; }
  SUBCASE("gamma above one") { bad.next_discount = 1.01; }
  SUBCASE("non-finite cumulant") { bad.cumulant = INFINITY; }
  SUBCASE("non-finite feature") { bad.features = {NAN}; }
  CHECK_THROWS_AS(learner.learn(bad), toetd::InvalidInput);
  CHECK(learner.state().weights == before.weights);
  CHECK(learner.state().trace == before.trace);
  CHECK(learner.followon_value() == before.followon);
}

TEST_CASE("non-finite results are flagged, not thrown") {
  TrueOnlineEmphaticTd learner(1);
  const auto huge = make_step(1, 1, 0, {1e200}, 1, 1e200, {1e200}, 1);
  bool flagged = false;
  for (int i = 0; i < 4 && !flagged; ++i) flagged = learner.learn(huge).diverged;
  CHECK(flagged);
  CHECK_FALSE(learner.state().finite());
}

TEST_CASE("emphasis identity and lambda endpoints hold on random histories") {
  toetd::Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    auto history = toetd::testing::random_history(rng);
    TrueOnlineEmphaticTd learner(history.dimension(), std::span<const double>(history.initial_weights));
    for (const auto& step : history.steps) {
      const auto d = learner.learn(step);
      CHECK(d.emphasis == step.bootstrap * step.interest + (1.0 - step.bootstrap) * d.followon_after);
      if (step.bootstrap == 1.0) CHECK(d.emphasis == step.interest);
    }
  }
}

TEST_CASE("lambda = 0 makes the trace rho*alpha*M*phi and drops the correction term") {
  toetd::Rng rng(7);
  toetd::testing::HistoryRanges ranges;
  ranges.fixed_lambda = 0.0;
  for (int k = 0; k < 200; ++k) {
    auto history = toetd::testing::random_history(rng, ranges);
    TrueOnlineEmphaticTd learner(history.dimension(), std::span<const double>(history.initial_weights));
    for (const auto& step : history.steps) {
      const std::vector<double> before(learner.weights().begin(), learner.weights().end());
      const auto d = learner.learn(step);
      const double scaled = step.importance_ratio * step.step_size * d.emphasis;
      for (std::size_t i = 0; i < before.size(); ++i) {
        const double e = scaled * step.features[i];
        CHECK(learner.state().trace[i] == e);
        CHECK(learner.state().weights[i] == before[i] + d.td_error * e);
      }
    }
  }
}

TEST_CASE("follow-on trace follows its closed form under constant discounting") {
  TrueOnlineEmphaticTd learner(1);
  const auto step = make_step(0, 1, 0, {1}, 1, 0, {1}, 0.9);
  for (int t = 0; t < 60; ++t) {
    const auto d = learner.learn(step);
    const double expected = (1.0 - std::pow(0.9, t + 1)) / 0.1;
    CHECK(d.followon_after == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("a zero next discount cuts follow-on and trace history") {
  TrueOnlineEmphaticTd learner(2);
  learner.learn(make_step(0.1, 1, 0.9, {1, 0}, 1.5, 1, {0, 1}, 0.9));
  learner.learn(make_step(0.1, 1, 0.9, {0, 1}, 1.5, 0, {1, 1}, 0));
  CHECK(learner.followon_value() == 0.0);
  CHECK(learner.state().stored_discount == 0.0);
  const auto step = make_step(0.1, 1, 0.9, {1, 1}, 1.2, 0, {1, 0}, 0.5);
  const auto d = learner.learn(step);
  CHECK(learner.trace_copy() == std::vector<double>{d.trace_scalar * 1.0, d.trace_scalar * 1.0});
  CHECK(d.trace_scalar == 1.2 * 0.1 * d.emphasis);
}

TEST_CASE("predict is linear") {
  toetd::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 6;
    std::vector<double> w(n), p1(n), p2(n), mix(n);
    for (auto& x : w) x = 20 * rng.uniform() - 10;
    for (auto& x : p1) x = 2 * rng.uniform() - 1;
    for (auto& x : p2) x = 2 * rng.uniform() - 1;
    const double a = 6 * rng.uniform() - 3;
    const double b = 6 * rng.uniform() - 3;
    for (std::size_t i = 0; i < n; ++i) mix[i] = a * p1[i] + b * p2[i];
    TrueOnlineEmphaticTd learner(n, std::span<const double>(w));
    const double lhs = learner.predict(mix) - a * learner.predict(p1) - b * learner.predict(p2);
    double wn = 0, n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      wn += w[i] * w[i];
      n1 += p1[i] * p1[i];
      n2 += p2[i] * p2[i];
    }
    CHECK(std::abs(lhs) <= 1e-9 * (std::abs(a) + std::abs(b)) * std::sqrt(wn) * std::sqrt(std::max(n1, n2)));
  }
}

TEST_CASE("identical inputs give bit-identical states") {
  toetd::Rng rng(2024);
  const auto history = toetd::testing::random_history(rng, {.max_steps = 50});
  auto replay = [&] {
    TrueOnlineEmphaticTd learner(history.dimension(), std::span<const double>(history.initial_weights));
    for (const auto& s : history.steps) learner.learn(s);
    return learner.state();
  };
  const auto a = replay();
  const auto b = replay();
  CHECK(a.weights == b.weights);
  CHECK(a.trace == b.trace);
  CHECK(a.followon == b.followon);
  CHECK(a.update_dot == b.update_dot);
}
