#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace toetd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class InterestKind {
  constant,     // I_t = value at every step
  first_state,  // I_t = 1 on the step leaving the first state of each episode, else 0
  per_state,    // I_t = table[S_t]
  discounted,   // I_t = product of discounts since the episode began
};

struct InterestSchedule {
  InterestKind kind = InterestKind::constant;
  double value = 1.0;
  std::vector<double> table;

  static InterestSchedule constant(double c) { return {InterestKind::constant, c, {}}; }
  static InterestSchedule first_state() { return {InterestKind::first_state, 1.0, {}}; }
  static InterestSchedule per_state(std::vector<double> t) { return {InterestKind::per_state, 1.0, std::move(t)}; }
  static InterestSchedule discounted() { return {InterestKind::discounted, 1.0, {}}; }
};

std::string to_string(InterestKind kind);
InterestKind parse_interest_kind(const std::string& name);

// A small Markov reward process seen through a behavior policy.
//
// Transitions are state-to-state: behavior(s, s') is the sampling
// distribution, target(s, s') the distribution predictions are about, and the
// importance ratio of a sampled transition is target/behavior. discount[s'] is
// the gamma emitted when s' is entered and cumulant(s, s') the R on that
// transition. Terminal pseudo-states carry discount 0 and an all-zero feature
// row; their outgoing row is the start distribution.
struct MrpSpec {
  Matrix behavior;
  Matrix target;
  Matrix cumulant;
  std::vector<double> discount;
  Matrix features;
  InterestSchedule interest;
  std::vector<double> start_distribution;
  // Defaults for harness runs; not part of the process itself.
  std::vector<double> initial_weights;

  std::size_t num_states() const { return discount.size(); }
  std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
  std::span<const double> feature_row(std::size_t s) const {
    return {features.data() + s * num_features(), num_features()};
  }
  bool is_terminal(std::size_t s) const;
  double importance_ratio(std::size_t s, std::size_t next) const;
};

// Throws InvalidInput on shape mismatch, rows that do not sum to 1 within
// 1e-12, missing coverage (target > 0 where behavior == 0), discounts outside
// [0,1], or a discounted target transition matrix with spectral radius >= 1.
void validate(const MrpSpec& spec);

double spectral_radius(const Matrix& m);

// Symmetric random walk over num_interior states with terminal pseudo-states
// at both ends. States: 0 = left terminal, 1..num_interior interior,
// num_interior+1 = right terminal. Episodes start in the middle interior state.
// Tabular features are one-hot over interior states; otherwise pass a
// (num_interior x n) feature table for the interior states.
struct ChainOptions {
  std::size_t num_interior = 5;
  double reward_right = 1.0;
  double reward_left = 0.0;
  InterestSchedule interest = InterestSchedule::constant(1.0);
  Matrix interior_features;  // empty means tabular
};

MrpSpec make_chain(const ChainOptions& options);
MrpSpec make_chain(std::size_t num_interior, double reward_right, bool tabular = true);

// Seven-state star: six outer states and a hub, eight features. The behavior
// policy moves to each state with probability 1/7; the target policy always
// moves to the hub, so rho = 7 on hub-bound transitions and 0 elsewhere.
struct BairdOptions {
  double discount = 0.99;
  InterestSchedule interest = InterestSchedule::constant(1.0);
  std::vector<double> initial_weights = {1, 1, 1, 1, 1, 1, 10, 1};
};

MrpSpec make_baird_star(const BairdOptions& options = {});

// Folds a terminal payoff Z(s') into the cumulant as R += (1 - gamma(s')) Z(s')
// for every transition into s'.
void fold_terminal_payoff(MrpSpec& spec, std::span<const double> payoff);

// Plain-text form. See docs in README; values are written in shortest
// round-trip decimal and "p/q" rationals are accepted on input.
void write_spec(std::ostream& out, const MrpSpec& spec);
MrpSpec read_spec(std::istream& in);
MrpSpec load_spec_file(const std::string& path);

}  // namespace toetd
