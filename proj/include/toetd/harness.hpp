#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "toetd/config.hpp"
#include "toetd/learner.hpp"
#include "toetd/mrp.hpp"
#include "toetd/oracles.hpp"
#include "toetd/stream.hpp"

namespace toetd {

// One row of a learning curve.
struct CurveRecord {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t episode = 0;
  double rmse = 0.0;  // interest-weighted, against the solved true values; nan for replayed streams
  double weight_norm = 0.0;
  double followon = 0.0;
  bool diverged = false;
};

struct SweepCell {
  double alpha = 0.0;
  double lambda = 0.0;
  double mean_rmse = 0.0;
  double std_rmse = 0.0;  // sample standard deviation over seeds; 0 for one seed
  double frac_diverged = 0.0;
  std::string error;      // non-empty when the cell could not run
};

struct LearnerCurve {
  LearnerKind learner = LearnerKind::toetd;
  std::vector<CurveRecord> records;
};

// Per-step diagnostics of the emphatic learner, for hand checks.
struct TraceRow {
  std::uint64_t step = 0;
  GvfStep input;
  StepDiagnostics diagnostics;
  LearnerState state;  // after the update
};

// Environment resolved from config: either a simulated MRP with its true
// values, or a fixed list of recorded steps replayed once.
class Environment {
 public:
  static Environment from_config(const EnvironmentConfig& config);

  bool is_replay() const { return !replay_.empty(); }
  const MrpSpec& spec() const { return spec_; }
  std::size_t num_features() const;
  std::span<const double> true_values() const { return true_values_; }
  std::span<const double> error_weights() const { return error_weights_; }
  std::span<const double> default_initial_weights() const { return spec_.initial_weights; }
  const std::vector<GvfStep>& replay_steps() const { return replay_; }

  // Interest-weighted RMSE of the linear prediction with these weights.
  double rmse(std::span<const double> weights) const;

 private:
  MrpSpec spec_;
  std::vector<double> true_values_;
  std::vector<double> error_weights_;
  std::vector<GvfStep> replay_;
};

// Step source for one seed. The trajectory depends on (environment, seed)
// only, never on the learner.
class StepStream {
 public:
  StepStream(const Environment& env, const HyperSchedule& schedule, std::uint64_t seed);

  std::optional<GvfStep> next();
  std::uint64_t episodes_completed() const;

 private:
  const Environment* env_;
  HyperSchedule schedule_;
  StreamCursor cursor_;
  std::size_t replay_position_ = 0;
};

// Any of the four learners behind one interface.
class AnyLearner {
 public:
  AnyLearner(LearnerKind kind, std::span<const double> initial_weights);

  void learn(const GvfStep& step);
  std::span<const double> weights() const;
  double followon() const;

 private:
  std::variant<TrueOnlineEmphaticTd, oracle::TrueOnlineTd, oracle::EmphaticTd0, oracle::OffPolicyTdLambda> impl_;
};

HyperSchedule resolve_schedule(const ExperimentConfig& config, const Environment& env);
std::vector<double> resolve_initial_weights(const ExperimentConfig& config, const Environment& env);

// Curve for one seed and one learner.
std::vector<CurveRecord> run_seed(const ExperimentConfig& config, const Environment& env, LearnerKind learner,
                                  std::uint64_t seed);

// All seeds, in seed-list order. Writes CSV to config.output_path when set.
std::vector<CurveRecord> run(const ExperimentConfig& config);

// Cross product of the grids, averaging the final RMSE over seeds. Cells that
// fail carry an error message and nan statistics; the others still run.
std::vector<SweepCell> sweep(const ExperimentConfig& config, std::span<const std::string> alpha_grid,
                             std::span<const double> lambda_grid);

// Same seeds, hence same step streams, fed to each learner.
std::vector<LearnerCurve> compare(const ExperimentConfig& config, std::span<const LearnerKind> learners);

// Emphatic learner diagnostics for the first seed.
std::vector<TraceRow> trace(const ExperimentConfig& config, std::uint64_t steps);

// CSV writers. Floats use the shortest round-trip decimal form.
void write_curve_csv(std::ostream& out, std::span<const CurveRecord> records);
void write_compare_csv(std::ostream& out, std::span<const LearnerCurve> curves);
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

// Writes with write_fn to path, throwing ConfigError when it cannot be opened.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& write_fn);

// Recorded-step file: one step per line,
//   alpha interest lambda rho cumulant next_discount | phi... | next_phi...
std::vector<GvfStep> read_step_stream(std::istream& in);

}  // namespace toetd
