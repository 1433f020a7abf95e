#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pocs/recovery.hpp"
#include "pocs/solver.hpp"
#include "pocs/types.hpp"

namespace pocs {

inline constexpr const char* kArtifactVersion = "1.0.0";

// File-system failures (open/read/write) carry their own type so callers can
// separate them from configuration errors and solver faults.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ChannelKind { kClean, kPostSign, kPreSign, kCorruption, kCombined };
enum class EstimatorKind { kStandard, kExtended };
enum class SignalKind { kSparse, kPowerLaw };

// Experiment sweep description. The defaults reproduce the reference scale:
// n=500, m=300, s=5, 50 trials per grid point, channel-specific grids.
struct ExperimentConfig {
  Index n = 500;
  Index m = 300;
  int s = 5;
  int trials = 50;
  std::uint64_t base_seed = 0;
  ChannelKind channel = ChannelKind::kClean;
  std::vector<double> tau0_grid;    // dense-noise amplitudes; empty = channel default
  std::vector<double> zeta0m_grid;  // corruption counts; empty = channel default
  EpsilonMode epsilon_mode = EpsilonMode::kTheorem;
  EstimatorKind estimator = EstimatorKind::kStandard;
  SignalKind signal = SignalKind::kSparse;
  double power_q = 2.0;
  CombinedEpsilonConstants combined_constants;
  bool fixed_matrix = false;  // one matrix for the whole sweep instead of per trial
  int threads = 1;
  SolverOptions solver;
  std::string out;             // output path; empty = caller handles emission
  std::string format = "csv";  // csv | json
};

// One row per (grid point, trial). Field order matches the CSV columns.
struct TrialRecord {
  double grid_param = 0.0;  // tau0, or the corruption count zeta0*m
  int trial = 0;
  std::uint64_t seed = 0;
  double l2_error = 0.0;
  double residual_at_truth = 0.0;  // NaN when the channel has no tracked truth residual
  double epsilon = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
};

struct GridSummary {
  double grid_param = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct ExperimentSummary {
  std::vector<GridSummary> per_point;
  std::optional<double> slope;  // log-log slope of mean error vs grid param
};

// Channel default grids (used when the config leaves them empty).
std::vector<double> default_tau0_grid(ChannelKind channel);
std::vector<double> default_zeta0m_grid(ChannelKind channel);

// Runs the sweep. Deterministic given the config: trial t at grid value g
// derives its seed from (base_seed, g, t) only, so reordering or pruning the
// grid never changes per-point results. Solver faults are recorded in the
// affected row, never aborting the sweep.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

// Per-grid-point mean/median/std plus, when every grid value and mean error
// is positive and there are at least two points, the least-squares slope of
// log(mean error) against log(grid value).
ExperimentSummary summarize(const std::vector<TrialRecord>& records);

// Writes records and summary. CSV format: the exact column header
//   grid_param,trial,seed,l2_error,residual_at_truth,epsilon,iterations,converged,wall_time_ms
// plus a sibling <path>.summary.json; JSON format: one file with metadata
// (config echo, artifact version, timestamp), records, and summary.
void emit(const std::vector<TrialRecord>& records, const ExperimentSummary& summary,
          const ExperimentConfig& cfg, const std::string& path, const std::string& format);

// Reads back a CSV produced by emit (round-trip helper and test hook).
std::vector<TrialRecord> parse_csv(const std::string& path);

// JSON config loading; unknown keys anywhere in the document are rejected.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace pocs
