#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "manip/harness/config.hpp"
#include "manip/harness/csv.hpp"
#include "manip/learner/pretrain.hpp"
#include "manip/learner/train.hpp"
#include "manip/planner/search.hpp"

namespace manip::harness {

// One planner search from the task start towards the task goal.
struct PlanRun {
  planner::SearchTree tree;
  planner::Trajectory best;
  double final_progress = 0.0;
  double average_progress = 0.0;  // mean search progress over all extensions
};

PlanRun plan_once(const Resolved& r, unsigned long seed);

// Demo set for a training seed; the planner stream is derived from the seed
// so that training and demonstrations never share random draws.
learner::DemoSet demo_set_for(const Resolved& r, unsigned long seed);
bool needs_demos(const learner::TrainConfig& cfg);

struct TrainRun {
  learner::TrainResult result;
  double final_success = 0.0;
  double average_success = 0.0;  // over n_epochs, early stops padded with the last value
};

TrainRun train_once(const Resolved& r, unsigned long seed);

struct PretrainEvalRun {
  learner::PretrainStats stats;
  double il_success = 0.0;  // imitation policy alone, deterministic rollouts
};

PretrainEvalRun pretrain_eval_once(const Resolved& r, unsigned long seed);

// Stable CSV layouts.
Table progress_table(const planner::SearchTree& tree);
Table metrics_table(const std::vector<learner::EpochMetrics>& metrics);

// Average success with early stops padded to n_epochs.
double padded_average_success(const std::vector<learner::EpochMetrics>& metrics, int n_epochs);

// mean and sample standard deviation (0 for a single value), NaNs skipped.
std::pair<double, double> mean_std(const std::vector<double>& v);

// Git-style blob hash (SHA-1 over "blob <size>\0" + content), lowercase hex.
std::string blob_hash(const std::string& content);

struct RunOutcome {
  int total = 0;
  int failed = 0;
  int exit_code() const { return failed == 0 ? 0 : 1; }
};

// Executes the experiment into cfg.output. Refuses a non-empty existing
// directory unless force is set. Throws ConfigError for configuration
// problems; per-seed failures are recorded and counted.
RunOutcome run_experiment(const ExperimentConfig& cfg, bool force, std::ostream& log);

// Recomputes aggregate CSVs and plots of an existing output directory from
// its per-seed CSVs.
RunOutcome report(const std::string& dir, std::ostream& log);

}  // namespace manip::harness
