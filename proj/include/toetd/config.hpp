#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toetd {

enum class LearnerKind { toetd, totd, etd0, offpolicy_td };
enum class Execution { serial, parallel };
enum class OnDivergence { keep_going, truncate };

LearnerKind parse_learner(const std::string& name);
std::string to_string(LearnerKind kind);

struct EnvironmentConfig {
  std::string name = "chain";  // chain | baird | file | stream
  std::size_t num_interior = 5;
  double reward_right = 1.0;
  double reward_left = 0.0;
  bool tabular = true;
  double discount = 0.99;  // baird only
  std::string interest = "constant";
  double interest_value = 1.0;
  std::vector<double> interest_table;
  std::string spec_file;    // name = file
  std::string stream_file;  // name = stream
};

struct StepSizeSetting {
  bool automatic = true;  // 0.1 / max_s phi(s)^T phi(s)
  double value = 0.1;
  double horizon = 0.0;   // > 0 selects alpha_t = alpha * horizon / (horizon + t)
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  LearnerKind learner = LearnerKind::toetd;
  StepSizeSetting alpha;
  double lambda = 0.0;
  std::vector<double> initial_weights;  // empty: environment default, else zeros
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> episodes;
  std::vector<std::uint64_t> seeds = {1};
  std::uint64_t eval_every = 100;
  std::string output_path;
  double divergence_threshold = 1e6;
  OnDivergence on_divergence = OnDivergence::keep_going;
  Execution execution = Execution::parallel;
};

// Every recognised key, by section. Keys are unique across sections so the
// CLI can expose each one as --key.
const std::map<std::string, std::vector<std::string>>& config_sections();

// Assigns one key from its text form. Throws ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// INI-style "[section]" + "key = value". Unknown sections or keys, or a key in
// the wrong section, are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Throws ConfigError unless exactly one of steps/episodes is set, seeds is
// non-empty, eval_every > 0, and the numeric ranges hold.
void check_config(const ExperimentConfig& config);

std::string describe_alpha(const StepSizeSetting& alpha);

}  // namespace toetd
