// Command-line front end: plan, train, sweep and report.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "manip/error.hpp"
#include "manip/harness/config.hpp"
#include "manip/harness/runner.hpp"

namespace {

using manip::harness::ExperimentConfig;
using manip::harness::Mode;

struct Common {
  std::string config;
  std::string task;
  std::string seeds;
  std::string out;
  bool force = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config file");
  sub->add_option("--task", c.task, "box_push_1d | box_push_2d | planar_hand");
  sub->add_option("--seeds", c.seeds, "comma separated seeds, e.g. 0,1,2");
  sub->add_option("--out", c.out, "output directory");
  sub->add_flag("--force", c.force, "overwrite a non-empty output directory");
  sub->add_option("--set", c.sets, "dotted override key=value (repeatable)");
}

ExperimentConfig build_config(const Common& c, Mode mode) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = manip::harness::load_config(c.config);
  if (!c.task.empty()) manip::harness::set_config_value(cfg, "task", c.task, "--task");
  if (!c.seeds.empty()) manip::harness::set_config_value(cfg, "seeds", c.seeds, "--seeds");
  if (!c.out.empty()) manip::harness::set_config_value(cfg, "output", c.out, "--out");
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw manip::ConfigError("--set expects key=value, got '" + kv + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    manip::harness::set_config_value(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  // The subcommand decides the mode; a train run may also be a pretrain-eval run.
  if (mode == Mode::kTrain && cfg.mode == Mode::kPretrainEval) return cfg;
  cfg.mode = mode;
  manip::harness::resolve(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"manipulation planner and demonstration-bootstrapped learner"};
  app.require_subcommand(1);

  Common plan_opts, train_opts, sweep_opts;
  CLI::App* plan = app.add_subcommand("plan", "run planner searches per seed");
  CLI::App* train = app.add_subcommand("train", "train policies per seed");
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(plan, plan_opts);
  add_common(train, train_opts);
  add_common(sweep, sweep_opts);

  std::string report_dir;
  CLI::App* rep = app.add_subcommand("report", "recompute aggregates of an output directory");
  rep->add_option("dir", report_dir, "output directory")->required();

  CLI::App* keys = app.add_subcommand("keys", "list documented config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*keys) {
      for (const auto& [k, d] : manip::harness::documented_keys()) std::cout << k << "\t" << d << "\n";
      return 0;
    }
    manip::harness::RunOutcome outcome;
    if (*rep) {
      outcome = manip::harness::report(report_dir, std::cout);
    } else {
      const Common& c = *plan ? plan_opts : *train ? train_opts : sweep_opts;
      const Mode mode = *plan ? Mode::kPlan : *train ? Mode::kTrain : Mode::kSweep;
      const ExperimentConfig cfg = build_config(c, mode);
      outcome = manip::harness::run_experiment(cfg, c.force, std::cout);
      std::cout << cfg.output << ": " << outcome.total - outcome.failed << "/" << outcome.total << " runs ok\n";
    }
    return outcome.exit_code();
  } catch (const manip::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
