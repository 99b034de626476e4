#include "toetd/mrp.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "toetd/error.hpp"
#include "toetd/gvf_step.hpp"

namespace toetd {

namespace {

constexpr double kRowSumTolerance = 1e-12;

void check_stochastic(const Matrix& m, const char* name) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!(m(r, c) >= 0.0) || !std::isfinite(m(r, c))) {
        throw InvalidInput(std::string(name) + " has a negative or non-finite entry in row " + std::to_string(r));
      }
      sum += m(r, c);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw InvalidInput(std::string(name) + " row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

std::string to_string(InterestKind kind) {
  switch (kind) {
    case InterestKind::constant: return "constant";
    case InterestKind::first_state: return "first-state";
    case InterestKind::per_state: return "per-state";
    case InterestKind::discounted: return "discounted-interest";
  }
  return "?";
}

InterestKind parse_interest_kind(const std::string& name) {
  if (name == "constant") return InterestKind::constant;
  if (name == "first-state" || name == "first_state") return InterestKind::first_state;
  if (name == "per-state" || name == "per_state") return InterestKind::per_state;
  if (name == "discounted-interest" || name == "discounted") return InterestKind::discounted;
  throw InvalidInput("unknown interest schedule '" + name + "'");
}

bool MrpSpec::is_terminal(std::size_t s) const {
  if (discount[s] != 0.0) return false;
  for (double f : feature_row(s)) {
    if (f != 0.0) return false;
  }
  return true;
}

double MrpSpec::importance_ratio(std::size_t s, std::size_t next) const {
  const double pi = target(s, next);
  if (pi == 0.0) return 0.0;
  return pi / behavior(s, next);
}

double spectral_radius(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  const Eigen::MatrixXd dense = m;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void validate(const MrpSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.num_states());
  if (n == 0) throw InvalidInput("MRP has no states");
  auto square = [n](const Matrix& m) { return m.rows() == n && m.cols() == n; };
  if (!square(spec.behavior) || !square(spec.target) || !square(spec.cumulant)) {
    throw InvalidInput("transition and cumulant matrices must be num_states x num_states");
  }
  if (spec.features.rows() != n || spec.features.cols() == 0) {
    throw InvalidInput("feature table must have one non-empty row per state");
  }
  if (spec.start_distribution.size() != spec.num_states()) {
    throw InvalidInput("start distribution length does not match num_states");
  }
  check_stochastic(spec.behavior, "behavior");
  check_stochastic(spec.target, "target");
  Matrix start(1, n);
  for (Eigen::Index s = 0; s < n; ++s) start(0, s) = spec.start_distribution[s];
  check_stochastic(start, "start_distribution");

  for (Eigen::Index s = 0; s < n; ++s) {
    const double g = spec.discount[s];
    if (!(g >= 0.0 && g <= 1.0)) throw InvalidInput("discount of state " + std::to_string(s) + " outside [0,1]");
    for (Eigen::Index t = 0; t < n; ++t) {
      if (spec.target(s, t) > 0.0 && spec.behavior(s, t) == 0.0) {
        throw InvalidInput("target transition " + std::to_string(s) + "->" + std::to_string(t) +
                           " is not covered by the behavior policy");
      }
      if (!std::isfinite(spec.cumulant(s, t))) throw InvalidInput("non-finite cumulant");
    }
  }
  if (!all_finite({spec.features.data(), static_cast<std::size_t>(spec.features.size())})) {
    throw InvalidInput("non-finite feature value");
  }
  if (!spec.initial_weights.empty() && spec.initial_weights.size() != spec.num_features()) {
    throw InvalidInput("initial weights length does not match num_features");
  }
  const auto& interest = spec.interest;
  if (interest.kind == InterestKind::per_state) {
    if (interest.table.size() != spec.num_states()) throw InvalidInput("interest table length does not match num_states");
    for (double v : interest.table) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("interest must be finite and nonnegative");
    }
  } else if (interest.kind == InterestKind::constant && (!(interest.value >= 0.0) || !std::isfinite(interest.value))) {
    throw InvalidInput("interest must be finite and nonnegative");
  }

  // Discounted target dynamics: column s' scaled by gamma(s').
  Matrix discounted = spec.target;
  for (Eigen::Index c = 0; c < n; ++c) discounted.col(c) *= spec.discount[c];
  if (spectral_radius(discounted) >= 1.0) {
    throw InvalidInput("discounted target transition matrix has spectral radius >= 1");
  }
}

MrpSpec make_chain(const ChainOptions& options) {
  const std::size_t k = options.num_interior;
  if (k == 0) throw InvalidInput("chain needs at least one interior state");
  const std::size_t n_states = k + 2;
  const std::size_t left = 0;
  const std::size_t right = k + 1;
  const std::size_t start = (k + 1) / 2;  // middle interior state (1-based among interior)

  MrpSpec spec;
  spec.behavior = Matrix::Zero(n_states, n_states);
  spec.cumulant = Matrix::Zero(n_states, n_states);
  spec.discount.assign(n_states, 1.0);
  spec.discount[left] = 0.0;
  spec.discount[right] = 0.0;
  spec.start_distribution.assign(n_states, 0.0);
  spec.start_distribution[start] = 1.0;

  for (std::size_t s = 1; s <= k; ++s) {
    spec.behavior(s, s - 1) = 0.5;
    spec.behavior(s, s + 1) = 0.5;
  }
  spec.behavior(left, start) = 1.0;
  spec.behavior(right, start) = 1.0;
  spec.target = spec.behavior;
  spec.cumulant(k, right) = options.reward_right;
  spec.cumulant(1, left) = options.reward_left;

  if (options.interior_features.size() == 0) {
    spec.features = Matrix::Zero(n_states, k);
    for (std::size_t s = 1; s <= k; ++s) spec.features(s, s - 1) = 1.0;
  } else {
    if (static_cast<std::size_t>(options.interior_features.rows()) != k) {
      throw InvalidInput("chain feature table needs one row per interior state");
    }
    spec.features = Matrix::Zero(n_states, options.interior_features.cols());
    spec.features.middleRows(1, k) = options.interior_features;
  }
  spec.interest = options.interest;
  validate(spec);
  return spec;
}

MrpSpec make_chain(std::size_t num_interior, double reward_right, bool tabular) {
  ChainOptions options;
  options.num_interior = num_interior;
  options.reward_right = reward_right;
  if (!tabular) {
    // Coarse two-feature encoding: position fraction and bias.
    if (num_interior == 0) throw InvalidInput("chain needs at least one interior state");
    options.interior_features = Matrix(num_interior, 2);
    for (std::size_t i = 0; i < num_interior; ++i) {
      options.interior_features(i, 0) = static_cast<double>(i + 1) / static_cast<double>(num_interior + 1);
      options.interior_features(i, 1) = 1.0;
    }
  }
  return make_chain(options);
}

MrpSpec make_baird_star(const BairdOptions& options) {
  constexpr std::size_t kStates = 7;
  constexpr std::size_t kFeatures = 8;
  constexpr std::size_t kHub = 6;

  MrpSpec spec;
  spec.behavior = Matrix::Constant(kStates, kStates, 1.0 / 7.0);
  spec.target = Matrix::Zero(kStates, kStates);
  spec.target.col(kHub).setOnes();
  spec.cumulant = Matrix::Zero(kStates, kStates);
  spec.discount.assign(kStates, options.discount);
  spec.features = Matrix::Zero(kStates, kFeatures);
  for (std::size_t s = 0; s < kHub; ++s) {
    spec.features(s, s) = 2.0;
    spec.features(s, kFeatures - 1) = 1.0;
  }
  spec.features(kHub, kHub) = 1.0;
  spec.features(kHub, kFeatures - 1) = 2.0;
  spec.interest = options.interest;
  spec.start_distribution.assign(kStates, 1.0 / 7.0);
  spec.initial_weights = options.initial_weights;
  validate(spec);
  return spec;
}

void fold_terminal_payoff(MrpSpec& spec, std::span<const double> payoff) {
  if (payoff.size() != spec.num_states()) throw InvalidInput("payoff vector length does not match num_states");
  const auto n = static_cast<Eigen::Index>(spec.num_states());
  for (Eigen::Index next = 0; next < n; ++next) {
    const double folded = (1.0 - spec.discount[next]) * payoff[next];
    if (folded == 0.0) continue;
    for (Eigen::Index s = 0; s < n; ++s) {
      if (spec.behavior(s, next) > 0.0 || spec.target(s, next) > 0.0) spec.cumulant(s, next) += folded;
    }
  }
}

}  // namespace toetd
