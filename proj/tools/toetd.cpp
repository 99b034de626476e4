// Command-line front end: run, sweep, compare, solve, trace.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toetd/config.hpp"
#include "toetd/error.hpp"
#include "toetd/harness.hpp"
#include "toetd/number_format.hpp"
#include "toetd/oracles.hpp"

namespace {

using toetd::ConfigError;
using toetd::ExperimentConfig;

// Short spellings accepted in addition to --<key>.
const std::map<std::string, std::string> kAliases = {
    {"seed", "seeds"}, {"out", "output"}, {"env", "name"}, {"learner", "algorithm"}};

struct KeyOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
};

void add_key_options(CLI::App* app, KeyOptions& keys, const std::vector<std::string>& skip = {}) {
  app->add_option("--config", keys.config_path, "Experiment config file (INI sections)");
  for (const auto& [section, names] : toetd::config_sections()) {
    for (const auto& name : names) {
      if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
      std::string flags = "--" + name;
      for (const auto& [alias, target] : kAliases) {
        if (target == name) flags += ",--" + alias;
      }
      keys.options[name] = app->add_option(flags, keys.values[name], "[" + section + "] " + name);
    }
  }
}

ExperimentConfig build_config(const KeyOptions& keys) {
  ExperimentConfig config = keys.config_path.empty() ? ExperimentConfig{} : toetd::load_config(keys.config_path);
  for (const auto& [name, option] : keys.options) {
    if (option->count() > 0) toetd::apply_setting(config, name, keys.values.at(name));
  }
  return config;
}

template <typename WriteFn>
void emit(const std::string& path, WriteFn&& write_fn) {
  if (path.empty()) {
    write_fn(std::cout);
  } else {
    toetd::write_file(path, write_fn);
  }
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"True online emphatic TD(lambda) experiments"};
  app.require_subcommand(1);

  KeyOptions run_keys;
  CLI::App* run_cmd = app.add_subcommand("run", "Run seeded experiments and write a learning-curve CSV");
  add_key_options(run_cmd, run_keys);

  KeyOptions sweep_keys;
  std::string alphas;
  std::string lambdas;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid over alpha x lambda; writes a summary CSV");
  add_key_options(sweep_cmd, sweep_keys, {"alpha", "lambda"});
  sweep_cmd->add_option("--alphas", alphas, "Comma-separated alphas (numbers or auto)")->required();
  sweep_cmd->add_option("--lambdas", lambdas, "Comma-separated lambdas")->required();

  KeyOptions compare_keys;
  std::string learners;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Feed the same streams to several learners");
  add_key_options(compare_cmd, compare_keys, {"algorithm"});
  compare_cmd->add_option("--learners", learners, "Comma-separated learners")->required();

  KeyOptions solve_keys;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Print the true values of an environment");
  add_key_options(solve_cmd, solve_keys);

  KeyOptions trace_keys;
  std::uint64_t trace_steps = 10;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Print per-step learner diagnostics");
  add_key_options(trace_cmd, trace_keys, {"steps"});
  trace_cmd->add_option("--steps", trace_steps, "Number of steps to trace");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ExperimentConfig config = build_config(run_keys);
      const std::string path = config.output_path;
      config.output_path.clear();
      const auto records = toetd::run(config);
      emit(path, [&](std::ostream& out) { toetd::write_curve_csv(out, records); });
    } else if (sweep_cmd->parsed()) {
      const ExperimentConfig config = build_config(sweep_keys);
      std::vector<double> lambda_grid;
      for (const auto& item : split(lambdas)) lambda_grid.push_back(toetd::parse_double(item));
      const auto alpha_grid = split(alphas);
      const auto cells = toetd::sweep(config, alpha_grid, lambda_grid);
      emit(config.output_path, [&](std::ostream& out) { toetd::write_sweep_csv(out, cells); });
      bool failed = false;
      for (const auto& cell : cells) {
        if (cell.error.empty()) continue;
        failed = true;
        std::cerr << "cell alpha=" << toetd::format_double(cell.alpha) << " lambda=" << toetd::format_double(cell.lambda)
                  << ": " << cell.error << '\n';
      }
      return failed ? 2 : 0;
    } else if (compare_cmd->parsed()) {
      const ExperimentConfig config = build_config(compare_keys);
      std::vector<toetd::LearnerKind> kinds;
      for (const auto& name : split(learners)) kinds.push_back(toetd::parse_learner(name));
      const auto curves = toetd::compare(config, kinds);
      emit(config.output_path, [&](std::ostream& out) { toetd::write_compare_csv(out, curves); });
    } else if (solve_cmd->parsed()) {
      const ExperimentConfig config = build_config(solve_keys);
      const auto env = toetd::Environment::from_config(config.environment);
      if (env.is_replay()) throw ConfigError("solve needs a simulated environment, not a replayed stream");
      std::cout << "state,value,terminal\n";
      for (std::size_t s = 0; s < env.spec().num_states(); ++s) {
        std::cout << s << ',' << toetd::format_double(env.true_values()[s]) << ',' << (env.spec().is_terminal(s) ? 1 : 0)
                  << '\n';
      }
    } else if (trace_cmd->parsed()) {
      const ExperimentConfig config = build_config(trace_keys);
      const auto rows = toetd::trace(config, trace_steps);
      emit(config.output_path, [&](std::ostream& out) { toetd::write_trace_csv(out, rows); });
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const toetd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
