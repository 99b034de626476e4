#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "toetd/error.hpp"
#include "toetd/harness.hpp"
#include "toetd/number_format.hpp"

namespace toetd {

namespace {

InterestSchedule interest_from_config(const EnvironmentConfig& config) {
  InterestSchedule schedule;
  try {
    schedule.kind = parse_interest_kind(config.interest);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  schedule.value = config.interest_value;
  schedule.table = config.interest_table;
  return schedule;
}

// Expected discounted visits under the behavior policy from the start
// distribution: d = mu_0^T (I - P_mu Gamma)^{-1}.
std::vector<double> discounted_occupancy(const MrpSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.num_states());
  Eigen::MatrixXd discounted = spec.behavior;
  for (Eigen::Index c = 0; c < n; ++c) discounted.col(c) *= spec.discount[c];
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - discounted.transpose();
  Eigen::VectorXd start(n);
  for (Eigen::Index s = 0; s < n; ++s) start[s] = spec.start_distribution[s];
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw ConfigError("discounted-interest needs a behavior process that terminates");
  const Eigen::VectorXd occupancy = lu.solve(start);
  return {occupancy.data(), occupancy.data() + n};
}

std::vector<double> error_weights_for(const MrpSpec& spec) {
  const std::size_t n = spec.num_states();
  std::vector<double> weights(n, 0.0);
  const auto& interest = spec.interest;
  std::vector<double> occupancy;
  if (interest.kind == InterestKind::discounted) occupancy = discounted_occupancy(spec);
  for (std::size_t s = 0; s < n; ++s) {
    if (spec.is_terminal(s)) continue;
    switch (interest.kind) {
      case InterestKind::constant: weights[s] = interest.value; break;
      case InterestKind::first_state: weights[s] = spec.start_distribution[s]; break;
      case InterestKind::per_state: weights[s] = interest.table[s]; break;
      case InterestKind::discounted: weights[s] = occupancy[s]; break;
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw ConfigError("no non-terminal state has positive interest; RMSE is undefined");
  return weights;
}

}  // namespace

Environment Environment::from_config(const EnvironmentConfig& config) {
  Environment env;
  try {
    if (config.name == "stream") {
      std::ifstream in(config.stream_file);
      if (!in) throw ConfigError("cannot open stream file '" + config.stream_file + "'");
      env.replay_ = read_step_stream(in);
      if (env.replay_.empty()) throw ConfigError("stream file '" + config.stream_file + "' has no steps");
      return env;
    }
    if (config.name == "chain") {
      ChainOptions options;
      options.num_interior = config.num_interior;
      options.reward_right = config.reward_right;
      options.reward_left = config.reward_left;
      options.interest = interest_from_config(config);
      if (!config.tabular) {
        const std::size_t k = config.num_interior;
        options.interior_features = Matrix(static_cast<Eigen::Index>(k), 2);
        for (std::size_t i = 0; i < k; ++i) {
          options.interior_features(i, 0) = static_cast<double>(i + 1) / static_cast<double>(k + 1);
          options.interior_features(i, 1) = 1.0;
        }
      }
      env.spec_ = make_chain(options);
    } else if (config.name == "baird") {
      BairdOptions options;
      options.discount = config.discount;
      options.interest = interest_from_config(config);
      env.spec_ = make_baird_star(options);
    } else if (config.name == "file") {
      env.spec_ = load_spec_file(config.spec_file);
    } else {
      throw ConfigError("unknown environment '" + config.name + "' (expected chain, baird, file, stream)");
    }
    env.true_values_ = oracle::solve_true_values(env.spec_).true_values;
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  } catch (const SingularSystem& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  }
  env.error_weights_ = error_weights_for(env.spec_);
  return env;
}

std::size_t Environment::num_features() const {
  return is_replay() ? replay_.front().features.size() : spec_.num_features();
}

double Environment::rmse(std::span<const double> weights) const {
  if (is_replay()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t s = 0; s < spec_.num_states(); ++s) {
    const double w = error_weights_[s];
    if (w == 0.0) continue;
    const double error = dot(spec_.feature_row(s), weights) - true_values_[s];
    weighted += w * error * error;
    total += w;
  }
  return std::sqrt(weighted / total);
}

StepStream::StepStream(const Environment& env, const HyperSchedule& schedule, std::uint64_t seed)
    : env_(&env), schedule_(schedule) {
  if (!env.is_replay()) cursor_ = start_cursor(env.spec(), seed);
}

std::optional<GvfStep> StepStream::next() {
  if (env_->is_replay()) {
    if (replay_position_ >= env_->replay_steps().size()) return std::nullopt;
    return env_->replay_steps()[replay_position_++];
  }
  return next_step(env_->spec(), cursor_, schedule_);
}

std::uint64_t StepStream::episodes_completed() const {
  if (env_->is_replay()) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < replay_position_; ++i) count += env_->replay_steps()[i].next_discount == 0.0;
    return count;
  }
  return cursor_.episode_index;
}

std::vector<GvfStep> read_step_stream(std::istream& in) {
  std::vector<GvfStep> steps;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::vector<double>> parts(1);
    std::istringstream words(line);
    std::string word;
    while (words >> word) {
      if (word == "|") {
        parts.emplace_back();
      } else {
        try {
          parts.back().push_back(parse_double(word));
        } catch (const InvalidInput& e) {
          throw ConfigError("stream line " + std::to_string(line_number) + ": " + e.what());
        }
      }
    }
    if (parts.size() != 3 || parts[0].size() != 6) {
      throw ConfigError("stream line " + std::to_string(line_number) +
                        ": expected 'alpha interest lambda rho cumulant next_discount | phi | next_phi'");
    }
    GvfStep step;
    step.step_size = parts[0][0];
    step.interest = parts[0][1];
    step.bootstrap = parts[0][2];
    step.importance_ratio = parts[0][3];
    step.cumulant = parts[0][4];
    step.next_discount = parts[0][5];
    step.features = parts[1];
    step.next_features = parts[2];
    try {
      validate_step(step, step.features.size());
    } catch (const InvalidInput& e) {
      throw ConfigError("stream line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!steps.empty() && steps.front().features.size() != step.features.size()) {
      throw ConfigError("stream line " + std::to_string(line_number) + ": feature dimension changed");
    }
    if (step.features.empty()) throw ConfigError("stream line " + std::to_string(line_number) + ": empty features");
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace toetd
