#pragma once

#include "tdg/bounds.hpp"
#include "tdg/engine.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tdg {

/// Everything a batch run needs. Loaded from a flat key=value config file
/// and/or command-line flags; flags win over the file.
struct RunConfig {
  GameParams params;                 ///< period field is the first t_list entry
  std::vector<double> t_list = {2.0};
  std::vector<double> w_list = {0.0, 0.25, 0.5, 0.75, 1.0};
  double horizon = 1e4;
  int trials = 100;
  uint64_t master_seed = 1;
  Objective objective = Objective::MinTime;
  std::string out;                   ///< output path; empty = stdout
  bool emit_trajectories = false;
  int threads = 0;                   ///< 0 = hardware concurrency
};

/// Log-spaced sample times: 20 per decade starting at t=10, horizon
/// appended; just {horizon} when the horizon is at or below 10.
std::vector<double> checkpoints(double horizon);

/// Runs `trials` independent trials (seeds derived from the master seed by
/// index) on a worker pool and returns the records in trial order — results
/// are identical at any thread count.
std::vector<TrialRecord> run_many(const GameParams& p,
                                  const StrategyConfig& cfg, double horizon,
                                  int trials, uint64_t master_seed,
                                  int threads, bool emit_trajectories = false);

struct AggregateRow {
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;   ///< standard error (n-1 sample std over sqrt(n))
  int n = 0;
};

/// Mean and standard error of the capture fraction at each sample time.
/// Throws std::invalid_argument when records mix parameters or strategies.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records,
                                    const std::vector<double>& ts);

/// One row of the sweep CSV (schema: T,w,checkpoint_t,mean,stderr,n_trials,c_inf).
struct SweepRow {
  double period = 0.0;
  double w = 0.0;
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
  double c_inf = 0.0;
};

/// Monte Carlo over t_list x w_list. With `checkpoint_series` each checkpoint
/// becomes a row; otherwise only the horizon row is kept per (T, w).
std::vector<SweepRow> run_sweep(const RunConfig& rc, bool checkpoint_series);

/// Writes rows with 17 significant digits so replays are bit-faithful.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);

/// Parses a flat key=value config file ('#' comments). Unknown keys throw.
void load_config_file(const std::string& path, RunConfig& rc);

/// Entry point behind the command-line tool (simulate / montecarlo / sweep /
/// bound / replay).
int cli_main(int argc, char** argv);

} // namespace tdg
