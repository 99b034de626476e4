#include "toetd/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "toetd/error.hpp"
#include "toetd/number_format.hpp"

namespace toetd {

namespace {

double to_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const InvalidInput&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
}

std::uint64_t to_count(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size() || value < 0) throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(value);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::istringstream words(item);
    std::string word;
    while (words >> word) items.push_back(word);
  }
  return items;
}

std::vector<double> to_reals(const std::string& key, const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) values.push_back(to_real(key, item));
  return values;
}

bool to_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](auto& c, auto&, auto& v) { c.environment.name = v; }},
      {"num_interior", [](auto& c, auto& k, auto& v) { c.environment.num_interior = to_count(k, v); }},
      {"reward_right", [](auto& c, auto& k, auto& v) { c.environment.reward_right = to_real(k, v); }},
      {"reward_left", [](auto& c, auto& k, auto& v) { c.environment.reward_left = to_real(k, v); }},
      {"tabular", [](auto& c, auto& k, auto& v) { c.environment.tabular = to_flag(k, v); }},
      {"discount", [](auto& c, auto& k, auto& v) { c.environment.discount = to_real(k, v); }},
      {"interest", [](auto& c, auto&, auto& v) { c.environment.interest = v; }},
      {"interest_value", [](auto& c, auto& k, auto& v) { c.environment.interest_value = to_real(k, v); }},
      {"interest_table", [](auto& c, auto& k, auto& v) { c.environment.interest_table = to_reals(k, v); }},
      {"spec_file", [](auto& c, auto&, auto& v) { c.environment.spec_file = v; }},
      {"stream_file", [](auto& c, auto&, auto& v) { c.environment.stream_file = v; }},
      {"algorithm", [](auto& c, auto&, auto& v) { c.learner = parse_learner(v); }},
      {"alpha",
       [](auto& c, auto& k, auto& v) {
         if (v == "auto") {
           c.alpha.automatic = true;
         } else {
           c.alpha.automatic = false;
           c.alpha.value = to_real(k, v);
         }
       }},
      {"alpha_horizon", [](auto& c, auto& k, auto& v) { c.alpha.horizon = to_real(k, v); }},
      {"lambda", [](auto& c, auto& k, auto& v) { c.lambda = to_real(k, v); }},
      {"initial_weights", [](auto& c, auto& k, auto& v) { c.initial_weights = to_reals(k, v); }},
      {"steps",
       [](auto& c, auto& k, auto& v) {
         c.steps = to_count(k, v);
         c.episodes.reset();
       }},
      {"episodes",
       [](auto& c, auto& k, auto& v) {
         c.episodes = to_count(k, v);
         c.steps.reset();
       }},
      {"seeds",
       [](auto& c, auto& k, auto& v) {
         c.seeds.clear();
         for (const auto& item : split_list(v)) c.seeds.push_back(to_count(k, item));
       }},
      {"eval_every", [](auto& c, auto& k, auto& v) { c.eval_every = to_count(k, v); }},
      {"output", [](auto& c, auto&, auto& v) { c.output_path = v; }},
      {"divergence_threshold", [](auto& c, auto& k, auto& v) { c.divergence_threshold = to_real(k, v); }},
      {"on_divergence",
       [](auto& c, auto& k, auto& v) {
         if (v == "continue") {
           c.on_divergence = OnDivergence::keep_going;
         } else if (v == "truncate") {
           c.on_divergence = OnDivergence::truncate;
         } else {
           throw ConfigError("key '" + k + "': expected continue or truncate, got '" + v + "'");
         }
       }},
      {"execution",
       [](auto& c, auto& k, auto& v) {
         if (v == "serial") {
           c.execution = Execution::serial;
         } else if (v == "parallel") {
           c.execution = Execution::parallel;
         } else {
           throw ConfigError("key '" + k + "': expected serial or parallel, got '" + v + "'");
         }
       }},
  };
  return table;
}

}  // namespace

LearnerKind parse_learner(const std::string& name) {
  if (name == "toetd") return LearnerKind::toetd;
  if (name == "totd") return LearnerKind::totd;
  if (name == "etd0") return LearnerKind::etd0;
  if (name == "offpolicy_td") return LearnerKind::offpolicy_td;
  throw ConfigError("unknown learner '" + name + "' (expected toetd, totd, etd0, offpolicy_td)");
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::toetd: return "toetd";
    case LearnerKind::totd: return "totd";
    case LearnerKind::etd0: return "etd0";
    case LearnerKind::offpolicy_td: return "offpolicy_td";
  }
  return "?";
}

const std::map<std::string, std::vector<std::string>>& config_sections() {
  static const std::map<std::string, std::vector<std::string>> sections = {
      {"environment",
       {"name", "num_interior", "reward_right", "reward_left", "tabular", "discount", "interest", "interest_value",
        "interest_table", "spec_file", "stream_file"}},
      {"learner", {"algorithm", "alpha", "alpha_horizon", "lambda", "initial_weights"}},
      {"run",
       {"steps", "episodes", "seeds", "eval_every", "output", "divergence_threshold", "on_divergence", "execution"}},
  };
  return sections;
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

ExperimentConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig config;
  const auto& sections = config_sections();
  for (const auto& [section, body] : tree) {
    const auto known = sections.find(section);
    if (known == sections.end()) {
      throw ConfigError(!body.data().empty() ? "config key '" + section + "' must sit inside a section"
                                     : "unknown config section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const auto& keys = known->second;
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("key '" + key + "' does not belong in section [" + section + "]");
      }
      apply_setting(config, key, node.data());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ExperimentConfig config = parse_config(in);
  // File references inside a config are relative to the config itself.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* file : {&config.environment.spec_file, &config.environment.stream_file}) {
    if (!file->empty() && std::filesystem::path(*file).is_relative()) *file = (base / *file).string();
  }
  return config;
}

void check_config(const ExperimentConfig& config) {
  if (config.steps.has_value() == config.episodes.has_value()) {
    throw ConfigError("exactly one of steps or episodes must be set");
  }
  if ((config.steps && *config.steps == 0) || (config.episodes && *config.episodes == 0)) {
    throw ConfigError("steps/episodes must be positive");
  }
  if (config.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (config.eval_every == 0) throw ConfigError("eval_every must be positive");
  if (!config.alpha.automatic && !(config.alpha.value >= 0.0)) throw ConfigError("alpha must be nonnegative");
  if (config.alpha.horizon < 0.0) throw ConfigError("alpha_horizon must be nonnegative");
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (!(config.divergence_threshold > 0.0)) throw ConfigError("divergence_threshold must be positive");
}

std::string describe_alpha(const StepSizeSetting& alpha) {
  std::string text = alpha.automatic ? "auto" : format_double(alpha.value);
  if (alpha.horizon > 0.0) text += " (decay horizon " + format_double(alpha.horizon) + ")";
  return text;
}

}  // namespace toetd
