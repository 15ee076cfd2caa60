#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "manip/learner/train_config.hpp"
#include "manip/planner/params.hpp"
#include "manip/sim/env.hpp"

namespace manip::harness {

enum class Mode { kPlan, kTrain, kSweep, kPretrainEval };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view s);

// Budget presets: "paper" keeps the published hyperparameters, "desk" shrinks
// the learner so one acceptance run fits a single CPU core.
enum class Preset { kPaper, kDesk };

enum class SweepMetric { kAverageProgress, kFinalProgress, kAverageSuccess, kFinalSuccess };

std::string_view sweep_metric_name(SweepMetric m);
SweepMetric parse_sweep_metric(std::string_view s);

struct SweepSpec {
  Mode base_mode = Mode::kPlan;
  std::string parameter;            // dotted key, e.g. planner.beta_max
  std::vector<std::string> values;  // raw values, ';' separated in the file
  std::string parameter2;           // optional second axis (heatmap)
  std::vector<std::string> values2;
  bool paired = false;              // zip the two axes instead of crossing them
  int replications = 0;             // 0: one per seed
  SweepMetric metric = SweepMetric::kAverageProgress;

  bool two_dimensional() const { return !parameter2.empty() && !paired; }
  bool has_second_axis() const { return !parameter2.empty(); }
};

// Parsed experiment description. Everything except the fixed top-level keys
// is kept as normalized dotted overrides and resolved against the task
// defaults on demand.
struct ExperimentConfig {
  std::string task = "box_push_1d";
  Mode mode = Mode::kPlan;
  Preset preset = Preset::kPaper;
  std::vector<unsigned long> seeds{0};
  std::string output = "runs/out";
  int jobs = 1;

  long max_nodes = 0;       // 0: task desk preset (1000 / 3000 / 10000)
  long max_env_steps = 0;   // 0: no cap
  double wall_clock_s = 0;  // 0: no cap

  std::map<std::string, std::string> overrides;  // planner.*, learner.*, env.*
  SweepSpec sweep;
};

// Parses the key-value schema. Unknown keys, malformed values and range
// violations throw ConfigError naming origin:line and the key.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::string& path);

// Canonical text: fixed keys first, then overrides in key order.
std::string serialize_config(const ExperimentConfig& cfg);

// Applies a single "key = value" (the --set flag). Throws ConfigError.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                      std::string_view origin = "--set");

// Fully resolved parameters for one run.
struct Resolved {
  sim::EnvModel env;
  planner::PlannerParams planner;
  learner::TrainConfig learner;
};

// Resolves task defaults, preset, budgets and overrides (later overrides win
// over earlier ones; learner.q_d defaults to planner.q_d). Throws ConfigError.
Resolved resolve(const ExperimentConfig& cfg);

// Resolution with extra overrides on top (sweep cells).
Resolved resolve(const ExperimentConfig& cfg, const std::map<std::string, std::string>& extra);

// Every documented key with a one-line description, in schema order.
std::vector<std::pair<std::string, std::string>> documented_keys();

// Desk node budget per task.
long desk_node_budget(sim::Task task);

// Desk learner settings per task (the acceptance budget).
void apply_desk_preset(learner::TrainConfig& cfg, sim::Task task);

}  // namespace manip::harness
