#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpmec/benchmarks.hpp"
#include "wpmec/model.hpp"
#include "wpmec/solver.hpp"

namespace wpmec {

enum class SweepVariable { transmit_power_dbm, user_count };

/// A Monte-Carlo sweep: one system/profile template, a list of values for the
/// swept variable, and a trial count. Channel draws are keyed by
/// (seed, trial), so a trial sees the same fading across sweep points.
struct ExperimentConfig {
  SystemConfig base;
  UserProfile profile;
  SweepVariable variable = SweepVariable::transmit_power_dbm;
  std::vector<double> sweep_values;
  int trials = 50;
  std::uint64_t seed = 1;
  std::vector<SchemeId> schemes;  // empty means all four
  SolverOptions solver;

  void validate() const;  // throws std::invalid_argument
};

struct SweepPoint {
  double sweep_value = 0.0;
  SchemeId scheme = SchemeId::joint;
  double mean_bits_per_user = 0.0;  // over converged trials; 0 when none
  double stderr_bits = 0.0;         // sample standard error; 0 when < 2 trials
  int trials_ok = 0;
  int trials_failed = 0;
};

struct SweepResult {
  SweepVariable variable = SweepVariable::transmit_power_dbm;
  std::vector<SweepPoint> points;  // sorted by (sweep_value, scheme name)
};

/// Rayleigh block-fading draw: every channel entry is circularly-symmetric
/// complex Gaussian with variance 5e-6 (2.5e-6 per real part). The stream is
/// a splitmix64 generator seeded from (seed, trial_index) alone, so trial t
/// is bit-identical no matter which thread runs it or in what order; entry
/// order is fixed as h then g per user, antennas innermost.
ChannelSet generate_channels(std::uint64_t seed, std::uint64_t trial_index,
                             const SystemConfig& cfg);

double dbm_to_watts(double dbm);

/// Worker parallelism: the WPMEC_THREADS environment variable when set to a
/// positive integer, otherwise (unset, "0", or unparsable) the hardware
/// concurrency.
int worker_count();

/// Runs trials x sweep points across worker threads. Every (point, trial,
/// scheme) cell is solved independently and aggregated in index order, so the
/// result is identical for any thread count. Nonconverged trials are dropped
/// from the statistics and counted; a point with no converged trial reports
/// zero mean with trials_ok = 0.
SweepResult run_sweep(const ExperimentConfig& ec);

std::string csv_string(const SweepResult& result);
/// Writes csv_string to path (LF endings); IO failure throws with the path.
void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace wpmec
