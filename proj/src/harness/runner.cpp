#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "toetd/error.hpp"
#include "toetd/harness.hpp"
#include "toetd/number_format.hpp"
#include "toetd/parallel.hpp"

namespace toetd {

namespace {

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

bool exceeds(std::span<const double> weights, double threshold) {
  const double n = norm(weights);
  return !all_finite(weights) || !std::isfinite(n) || n > threshold;
}

double final_rmse(const std::vector<CurveRecord>& records) {
  return records.empty() ? std::numeric_limits<double>::quiet_NaN() : records.back().rmse;
}

}  // namespace

int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

AnyLearner::AnyLearner(LearnerKind kind, std::span<const double> initial_weights)
    : impl_(std::in_place_type<oracle::OffPolicyTdLambda>, initial_weights) {
  switch (kind) {
    case LearnerKind::toetd: impl_.emplace<TrueOnlineEmphaticTd>(initial_weights.size(), initial_weights); break;
    case LearnerKind::totd: impl_.emplace<oracle::TrueOnlineTd>(initial_weights); break;
    case LearnerKind::etd0: impl_.emplace<oracle::EmphaticTd0>(initial_weights); break;
    case LearnerKind::offpolicy_td: break;
  }
}

void AnyLearner::learn(const GvfStep& step) {
  std::visit([&step](auto& learner) { learner.learn(step); }, impl_);
}

std::span<const double> AnyLearner::weights() const {
  return std::visit([](const auto& learner) { return learner.weights(); }, impl_);
}

double AnyLearner::followon() const {
  if (const auto* emphatic = std::get_if<TrueOnlineEmphaticTd>(&impl_)) return emphatic->followon_value();
  if (const auto* td0 = std::get_if<oracle::EmphaticTd0>(&impl_)) return td0->followon();
  return 0.0;
}

HyperSchedule resolve_schedule(const ExperimentConfig& config, const Environment& env) {
  HyperSchedule schedule;
  if (config.alpha.automatic) {
    if (env.is_replay()) throw ConfigError("alpha = auto needs a feature table; replayed streams carry their own alpha");
    schedule.alpha.base = auto_step_size(env.spec());
  } else {
    schedule.alpha.base = config.alpha.value;
  }
  schedule.alpha.horizon = config.alpha.horizon;
  schedule.lambda.value = config.lambda;
  return schedule;
}

std::vector<double> resolve_initial_weights(const ExperimentConfig& config, const Environment& env) {
  const std::size_t n = env.num_features();
  if (!config.initial_weights.empty()) {
    if (config.initial_weights.size() != n) {
      throw ConfigError("initial_weights has " + std::to_string(config.initial_weights.size()) +
                        " entries, the environment has " + std::to_string(n) + " features");
    }
    return config.initial_weights;
  }
  const auto defaults = env.default_initial_weights();
  if (!defaults.empty()) return {defaults.begin(), defaults.end()};
  return std::vector<double>(n, 0.0);
}

std::vector<CurveRecord> run_seed(const ExperimentConfig& config, const Environment& env, LearnerKind kind,
                                  std::uint64_t seed) {
  check_config(config);
  if (config.episodes && !env.is_replay()) {
    bool has_terminal = false;
    for (std::size_t s = 0; s < env.spec().num_states(); ++s) has_terminal = has_terminal || env.spec().is_terminal(s);
    if (!has_terminal) throw ConfigError("episodes mode needs an environment with terminal states; use steps");
  }
  const HyperSchedule schedule = env.is_replay() ? HyperSchedule{} : resolve_schedule(config, env);
  const std::vector<double> initial = resolve_initial_weights(config, env);
  AnyLearner learner(kind, initial);
  StepStream stream(env, schedule, seed);

  std::vector<CurveRecord> records;
  bool diverged = exceeds(learner.weights(), config.divergence_threshold);
  std::uint64_t step = 0;
  auto record = [&] {
    CurveRecord r;
    r.seed = seed;
    r.step = step;
    r.episode = stream.episodes_completed();
    r.rmse = env.rmse(learner.weights());
    r.weight_norm = norm(learner.weights());
    r.followon = learner.followon();
    r.diverged = diverged;
    records.push_back(r);
  };
  record();

  while (config.steps ? step < *config.steps : stream.episodes_completed() < *config.episodes) {
    const std::optional<GvfStep> next = stream.next();
    if (!next) break;
    learner.learn(*next);
    ++step;
    diverged = diverged || exceeds(learner.weights(), config.divergence_threshold);
    if (step % config.eval_every == 0) record();
    if (diverged && config.on_divergence == OnDivergence::truncate) break;
  }
  if (records.back().step != step) record();
  return records;
}

std::vector<CurveRecord> run(const ExperimentConfig& config) {
  check_config(config);
  const Environment env = Environment::from_config(config.environment);
  std::vector<std::vector<CurveRecord>> per_seed(config.seeds.size());
  for_each_index(config.seeds.size(), config.execution,
                 [&](std::size_t i) { per_seed[i] = run_seed(config, env, config.learner, config.seeds[i]); });
  std::vector<CurveRecord> records;
  for (auto& curve : per_seed) records.insert(records.end(), curve.begin(), curve.end());
  if (!config.output_path.empty()) {
    write_file(config.output_path, [&](std::ostream& out) { write_curve_csv(out, records); });
  }
  return records;
}

std::vector<SweepCell> sweep(const ExperimentConfig& config, std::span<const std::string> alpha_grid,
                             std::span<const double> lambda_grid) {
  if (alpha_grid.empty() || lambda_grid.empty()) throw ConfigError("sweep grids must be non-empty");
  check_config(config);
  const Environment env = Environment::from_config(config.environment);

  std::vector<ExperimentConfig> cell_configs;
  std::vector<SweepCell> cells;
  for (const std::string& alpha : alpha_grid) {
    for (double lambda : lambda_grid) {
      ExperimentConfig cell_config = config;
      apply_setting(cell_config, "alpha", alpha);
      cell_config.lambda = lambda;
      SweepCell cell;
      cell.alpha = cell_config.alpha.value;
      cell.lambda = lambda;
      try {
        if (cell_config.alpha.automatic) cell.alpha = resolve_schedule(cell_config, env).alpha.base;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cell_configs.push_back(std::move(cell_config));
      cells.push_back(cell);
    }
  }

  const std::size_t seeds = config.seeds.size();
  std::vector<double> finals(cells.size() * seeds, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> diverged(cells.size() * seeds, 0);
  std::vector<std::string> errors(cells.size() * seeds);
  for_each_index(finals.size(), config.execution, [&](std::size_t task) {
    const std::size_t c = task / seeds;
    if (!cells[c].error.empty()) return;
    try {
      const auto records = run_seed(cell_configs[c], env, config.learner, config.seeds[task % seeds]);
      finals[task] = final_rmse(records);
      diverged[task] = records.back().diverged;
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepCell& cell = cells[c];
    for (std::size_t k = 0; k < seeds && cell.error.empty(); ++k) cell.error = errors[c * seeds + k];
    if (!cell.error.empty()) {
      cell.mean_rmse = cell.std_rmse = cell.frac_diverged = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    double count_diverged = 0.0;
    for (std::size_t k = 0; k < seeds; ++k) {
      sum += finals[c * seeds + k];
      count_diverged += diverged[c * seeds + k];
    }
    cell.mean_rmse = sum / static_cast<double>(seeds);
    double squares = 0.0;
    for (std::size_t k = 0; k < seeds; ++k) {
      const double d = finals[c * seeds + k] - cell.mean_rmse;
      squares += d * d;
    }
    cell.std_rmse = seeds > 1 ? std::sqrt(squares / static_cast<double>(seeds - 1)) : 0.0;
    cell.frac_diverged = count_diverged / static_cast<double>(seeds);
  }
  return cells;
}

std::vector<LearnerCurve> compare(const ExperimentConfig& config, std::span<const LearnerKind> learners) {
  if (learners.empty()) throw ConfigError("compare needs at least one learner");
  check_config(config);
  const Environment env = Environment::from_config(config.environment);
  const std::size_t seeds = config.seeds.size();
  std::vector<std::vector<CurveRecord>> per_task(learners.size() * seeds);
  for_each_index(per_task.size(), config.execution, [&](std::size_t task) {
    per_task[task] = run_seed(config, env, learners[task / seeds], config.seeds[task % seeds]);
  });
  std::vector<LearnerCurve> curves(learners.size());
  for (std::size_t l = 0; l < learners.size(); ++l) {
    curves[l].learner = learners[l];
    for (std::size_t k = 0; k < seeds; ++k) {
      auto& part = per_task[l * seeds + k];
      curves[l].records.insert(curves[l].records.end(), part.begin(), part.end());
    }
  }
  return curves;
}

std::vector<TraceRow> trace(const ExperimentConfig& config, std::uint64_t steps) {
  if (config.seeds.empty()) throw ConfigError("seeds must not be empty");
  const Environment env = Environment::from_config(config.environment);
  const HyperSchedule schedule = env.is_replay() ? HyperSchedule{} : resolve_schedule(config, env);
  const std::vector<double> initial = resolve_initial_weights(config, env);
  TrueOnlineEmphaticTd learner(initial.size(), initial);
  StepStream stream(env, schedule, config.seeds.front());
  std::vector<TraceRow> rows;
  for (std::uint64_t t = 0; t < steps; ++t) {
    std::optional<GvfStep> next = stream.next();
    if (!next) break;
    TraceRow row;
    row.step = t;
    row.diagnostics = learner.learn(*next);
    row.input = std::move(*next);
    row.state = learner.state();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& write_fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_fn(out);
  out.flush();
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

namespace {

void write_record(std::ostream& out, const CurveRecord& r) {
  out << r.seed << ',' << r.step << ',' << r.episode << ',' << format_double(r.rmse) << ','
      << format_double(r.weight_norm) << ',' << format_double(r.followon) << ',' << (r.diverged ? 1 : 0) << '\n';
}

void write_vector(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << ',' << format_double(v);
}

}  // namespace

void write_curve_csv(std::ostream& out, std::span<const CurveRecord> records) {
  out << "seed,step,episode,rmse,weight_norm,followon,diverged\n";
  for (const auto& r : records) write_record(out, r);
}

void write_compare_csv(std::ostream& out, std::span<const LearnerCurve> curves) {
  out << "learner,seed,step,episode,rmse,weight_norm,followon,diverged\n";
  for (const auto& curve : curves) {
    for (const auto& r : curve.records) {
      out << to_string(curve.learner) << ',';
      write_record(out, r);
    }
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "alpha,lambda,mean_rmse,std_rmse,frac_diverged\n";
  for (const auto& c : cells) {
    out << format_double(c.alpha) << ',' << format_double(c.lambda) << ',' << format_double(c.mean_rmse) << ','
        << format_double(c.std_rmse) << ',' << format_double(c.frac_diverged) << '\n';
  }
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  if (rows.empty()) return;
  const std::size_t n = rows.front().state.dimension();
  out << "step,td_error,emphasis,followon_t,trace_scalar,followon,update_dot,stored_discount";
  for (std::size_t i = 0; i < n; ++i) out << ",theta_" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",trace_" << i;
  out << '\n';
  for (const auto& row : rows) {
    const auto& d = row.diagnostics;
    const auto& s = row.state;
    out << row.step << ',' << format_double(d.td_error) << ',' << format_double(d.emphasis) << ','
        << format_double(d.followon_after) << ',' << format_double(d.trace_scalar) << ',' << format_double(s.followon)
        << ',' << format_double(s.update_dot) << ',' << format_double(s.stored_discount);
    write_vector(out, s.weights);
    write_vector(out, s.trace);
    out << '\n';
  }
}

}  // namespace toetd
