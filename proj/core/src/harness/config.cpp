#include "manip/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "manip/error.hpp"
#include "manip/sim/env_io.hpp"

namespace manip::harness {

using sim::format_double;
using sim::format_vector;

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kPlan: return "plan";
    case Mode::kTrain: return "train";
    case Mode::kSweep: return "sweep";
    case Mode::kPretrainEval: return "pretrain-eval";
  }
  return "plan";
}

Mode parse_mode(std::string_view s) {
  if (s == "plan") return Mode::kPlan;
  if (s == "train") return Mode::kTrain;
  if (s == "sweep") return Mode::kSweep;
  if (s == "pretrain-eval") return Mode::kPretrainEval;
  throw ConfigError("unknown mode '" + std::string(s) + "' (plan, train, sweep, pretrain-eval)");
}

std::string_view sweep_metric_name(SweepMetric m) {
  switch (m) {
    case SweepMetric::kAverageProgress: return "average_progress";
    case SweepMetric::kFinalProgress: return "final_progress";
    case SweepMetric::kAverageSuccess: return "average_success";
    case SweepMetric::kFinalSuccess: return "final_success";
  }
  return "average_progress";
}

SweepMetric parse_sweep_metric(std::string_view s) {
  if (s == "average_progress") return SweepMetric::kAverageProgress;
  if (s == "final_progress") return SweepMetric::kFinalProgress;
  if (s == "average_success") return SweepMetric::kAverageSuccess;
  if (s == "final_success") return SweepMetric::kFinalSuccess;
  throw ConfigError("unknown sweep metric '" + std::string(s) +
                    "' (average_progress, final_progress, average_success, final_success)");
}

namespace {

std::string_view preset_name(Preset p) { return p == Preset::kDesk ? "desk" : "paper"; }

Preset parse_preset(std::string_view s) {
  if (s == "paper") return Preset::kPaper;
  if (s == "desk") return Preset::kDesk;
  throw ConfigError("unknown preset '" + std::string(s) + "' (paper, desk)");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (true) {
    const std::size_t q = s.find(sep, p);
    out.push_back(trim(s.substr(p, q == std::string_view::npos ? std::string_view::npos : q - p)));
    if (q == std::string_view::npos) break;
    p = q + 1;
  }
  return out;
}

[[noreturn]] void range_error(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

// Typed field handlers. Each parses, checks the scalar range and assigns,
// then returns the canonical text of the stored value.
struct Field {
  std::string doc;
  std::function<std::string(Resolved&, const std::string& key, const std::string& value)> apply;
};

double real_in(const std::string& key, const std::string& v, double lo, double hi, bool hi_open = false) {
  const double x = sim::parse_double(v, key);
  if (!(x >= lo && (hi_open ? x < hi : x <= hi))) {
    std::ostringstream msg;
    msg << "value " << v << " outside [" << format_double(lo) << ", " << format_double(hi) << (hi_open ? ")" : "]");
    range_error(key, msg.str());
  }
  return x;
}

long int_at_least(const std::string& key, const std::string& v, long lo) {
  const long x = sim::parse_int(v, key);
  if (x < lo) range_error(key, "value " + v + " below minimum " + std::to_string(lo));
  return x;
}

Eigen::VectorXd non_negative_vector(const std::string& key, const std::string& v) {
  Eigen::VectorXd x = sim::parse_vector(v, key);
  if ((x.array() < 0.0).any() || !x.allFinite()) range_error(key, "entries must be finite and non-negative");
  return x;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T, typename Get>
Field real_field(std::string doc, Get get, double lo, double hi, bool hi_open = false) {
  return {std::move(doc), [=](Resolved& r, const std::string& k, const std::string& v) {
            T& dst = get(r);
            dst = static_cast<T>(real_in(k, v, lo, hi, hi_open));
            return format_double(static_cast<double>(dst));
          }};
}

template <typename T, typename Get>
Field int_field(std::string doc, Get get, long lo) {
  return {std::move(doc), [=](Resolved& r, const std::string& k, const std::string& v) {
            T& dst = get(r);
            dst = static_cast<T>(int_at_least(k, v, lo));
            return std::to_string(dst);
          }};
}

template <typename Get>
Field bool_field(std::string doc, Get get) {
  return {std::move(doc), [=](Resolved& r, const std::string& k, const std::string& v) {
            bool& dst = get(r);
            dst = sim::parse_bool(v, k);
            return std::string(dst ? "true" : "false");
          }};
}

template <typename Get>
Field vector_field(std::string doc, Get get) {
  return {std::move(doc), [=](Resolved& r, const std::string& k, const std::string& v) {
            Eigen::VectorXd& dst = get(r);
            dst = non_negative_vector(k, v);
            return format_vector(dst);
          }};
}

#define P(field) [](Resolved& r) -> auto& { return r.planner.field; }
#define L(field) [](Resolved& r) -> auto& { return r.learner.field; }

const std::vector<std::pair<std::string, Field>>& field_table() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    // Planner (Table 2 names).
    t.emplace_back("planner.n_g", int_field<int>("number of sub-goals n_g", P(n_g), 1));
    t.emplace_back("planner.n_i", int_field<int>("node selections per sub-goal n_i", P(n_i), 1));
    t.emplace_back("planner.b_g", real_field<double>("task-goal bias b_g", P(b_g), 0.0, 1.0));
    t.emplace_back("planner.beta_min", real_field<double>("minimum Pareto exponent", P(beta_min), 0.0, kInf));
    t.emplace_back("planner.beta_max", real_field<double>("maximum Pareto exponent", P(beta_max), 0.0, kInf));
    t.emplace_back("planner.beta_init", real_field<double>("initial Pareto exponent", P(beta_init), 0.0, kInf));
    t.emplace_back("planner.adaptive_beta", bool_field("adapt beta between beta_min and beta_max", P(adaptive_beta)));
    t.emplace_back("planner.n_e_init", real_field<double>("initial extension horizon n_e", P(n_e_init), 1.0, kInf));
    t.emplace_back("planner.n_e_max", int_field<int>("maximum extension horizon", P(n_e_max), 1));
    t.emplace_back("planner.adaptive_horizon", bool_field("adapt the extension horizon", P(adaptive_horizon)));
    t.emplace_back("planner.p_a", Field{"action-type weights: random, continuation, proximity, goal-directed",
                                        [](Resolved& r, const std::string& k, const std::string& v) {
                                          const Eigen::VectorXd x = non_negative_vector(k, v);
                                          if (x.size() != planner::kNumActionTypes) range_error(k, "needs 4 entries");
                                          if (x.sum() <= 0.0) range_error(k, "weights must not all be zero");
                                          for (int i = 0; i < planner::kNumActionTypes; ++i) r.planner.p_a[i] = x[i];
                                          return format_vector(x);
                                        }});
    t.emplace_back("planner.action_mix", Field{"action-type letters (r, c, p, g) with equal weights; sets p_a",
                                               [](Resolved& r, const std::string& k, const std::string& v) {
                                                 try {
                                                   r.planner.p_a = planner::parse_action_mix(v);
                                                 } catch (const ConfigError& e) {
                                                   range_error(k, e.what());
                                                 }
                                                 return v;
                                               }});
    t.emplace_back("planner.k_max", int_field<int>("maximum action step multiple k_max", P(k_max), 1));
    t.emplace_back("planner.q_d", vector_field("distance weights Q_d (diagonal, one per state)", P(q_d)));
    t.emplace_back("planner.q_p", vector_field("proximity weights Q_p (diagonal, one per sensor)", P(q_p)));
    t.emplace_back("planner.q_p_scale",
                   Field{"multiplies every proximity weight (applied after planner.q_p)",
                         [](Resolved& r, const std::string& k, const std::string& v) {
                           const double f = sim::parse_double(v, k);
                           if (!(f >= 0.0) || !std::isfinite(f)) range_error(k, "must be a finite value >= 0");
                           r.planner.q_p *= f;
                           return format_double(f);
                         }});
    t.emplace_back("planner.q_m", real_field<double>("reachability weight q_m", P(q_m), 0.0, kInf));
    t.emplace_back("planner.m_min", real_field<double>("reachability bound m_min", P(m_min), 1e-300, kInf));
    t.emplace_back("planner.mu", real_field<double>("reachability regularization mu", P(mu), 1e-300, kInf));
    t.emplace_back("planner.r_weight", real_field<double>("goal-directed action penalty R = r I", P(r_weight), 1e-300, kInf));
    t.emplace_back("planner.jacobian_step", real_field<double>("finite-difference step", P(jacobian_step), 1e-300, kInf));
    // Learner (Table 3 names).
    t.emplace_back("learner.n_epochs", int_field<int>("training epochs", L(n_epochs), 0));
    t.emplace_back("learner.n_cycles", int_field<int>("cycles per epoch", L(n_cycles), 1));
    t.emplace_back("learner.n_rollouts", int_field<int>("rollouts per cycle", L(n_rollouts), 1));
    t.emplace_back("learner.n_steps", int_field<int>("rollout horizon", L(n_steps), 1));
    t.emplace_back("learner.n_episode", int_field<int>("network updates per rollout", L(n_episode), 0));
    t.emplace_back("learner.n_batch", int_field<int>("minibatch size", L(n_batch), 1));
    t.emplace_back("learner.gamma", real_field<double>("discount factor", L(gamma), 0.0, 1.0, true));
    t.emplace_back("learner.tau", real_field<double>("Polyak factor", L(tau), 0.0, 1.0));
    t.emplace_back("learner.eta", real_field<double>("random action chance", L(eta), 0.0, 1.0));
    t.emplace_back("learner.sigma", real_field<double>("Gaussian exploration noise (action half-range units)", L(sigma), 0.0, kInf));
    t.emplace_back("learner.lr", Field{"learning rate of both networks",
                                       [](Resolved& r, const std::string& k, const std::string& v) {
                                         const double x = real_in(k, v, 1e-300, kInf);
                                         r.learner.lr_actor = r.learner.lr_critic = x;
                                         return format_double(x);
                                       }});
    t.emplace_back("learner.lr_actor", real_field<double>("policy learning rate", L(lr_actor), 1e-300, kInf));
    t.emplace_back("learner.lr_critic", real_field<double>("value function learning rate", L(lr_critic), 1e-300, kInf));
    t.emplace_back("learner.action_l2", real_field<double>("policy action penalty", L(action_l2), 0.0, kInf));
    t.emplace_back("learner.hidden_width", int_field<int>("neurons per hidden layer", L(hidden_width), 1));
    t.emplace_back("learner.hidden_layers", int_field<int>("hidden layers per network", L(hidden_layers), 1));
    t.emplace_back("learner.buffer_episodes", int_field<long>("replay capacity in episodes", L(buffer_episodes), 1));
    t.emplace_back("learner.eval_runs", int_field<int>("evaluation runs per epoch", L(eval_runs), 1));
    t.emplace_back("learner.stop_on_success", bool_field("stop once evaluation success is 1.0", L(stop_on_success)));
    t.emplace_back("learner.epsilon", real_field<double>("success threshold on the distance ratio", L(epsilon), 1e-300, kInf));
    t.emplace_back("learner.demo_mode", Field{"fixed_ratio, decaying, initial_only or none",
                                              [](Resolved& r, const std::string&, const std::string& v) {
                                                r.learner.demo_mode = learner::parse_demo_mode(v);
                                                return std::string(learner::demo_mode_name(r.learner.demo_mode));
                                              }});
    t.emplace_back("learner.b_p", real_field<double>("demonstration probability per rollout", L(b_p), 0.0, 1.0));
    t.emplace_back("learner.her_ratio", real_field<double>("hindsight relabel probability (0: off)", L(her_ratio), 0.0, 1.0));
    t.emplace_back("learner.pretrain", Field{"none, policy or policy_value",
                                             [](Resolved& r, const std::string&, const std::string& v) {
                                               r.learner.pretrain = learner::parse_pretrain_mode(v);
                                               return std::string(learner::pretrain_mode_name(r.learner.pretrain));
                                             }});
    t.emplace_back("learner.pretrain_demos", int_field<int>("demonstrations drawn for pre-training", L(pretrain_demos), 0));
    t.emplace_back("learner.pretrain_updates", int_field<int>("pre-training minibatch updates", L(pretrain_updates), 0));
    t.emplace_back("learner.demo_trees", int_field<int>("planner trees in the demonstration set", L(demo_trees), 1));
    t.emplace_back("learner.demo_nodes", int_field<long>("nodes per demonstration tree", L(demo_nodes), 1));
    t.emplace_back("learner.q_d", vector_field("reward distance weights (defaults to planner.q_d)", L(q_d)));
    return t;
  }();
  return table;
}

#undef P
#undef L

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : field_table()) {
    if (k == key) return &f;
  }
  return nullptr;
}

const std::vector<std::pair<std::string, std::string>>& top_level_docs() {
  static const std::vector<std::pair<std::string, std::string>> docs{
      {"task", "box_push_1d, box_push_2d or planar_hand"},
      {"mode", "plan, train, sweep or pretrain-eval"},
      {"preset", "paper (published hyperparameters) or desk (single-core budget)"},
      {"seeds", "comma separated list of non-negative integers"},
      {"output", "output directory"},
      {"jobs", "worker threads for seeds and sweep cells"},
      {"budget.max_nodes", "planner node budget; 0 = task desk budget, -1 = n_g * n_i iterations only"},
      {"budget.max_env_steps", "learner environment step cap; 0 = none"},
      {"budget.wall_clock_s", "per-run wall-clock cap in seconds (run fails when exceeded); 0 = none"},
      {"sweep.mode", "mode of each sweep cell: plan, train or pretrain-eval"},
      {"sweep.parameter", "dotted key varied along the first axis"},
      {"sweep.values", "';' separated values of the first axis"},
      {"sweep.parameter2", "optional dotted key of a second axis (heatmap)"},
      {"sweep.values2", "';' separated values of the second axis"},
      {"sweep.paired", "true: values and values2 are zipped into one axis of equal length"},
      {"sweep.replications", "seeds per cell taken from the front of `seeds`; 0 = all"},
      {"sweep.metric", "average_progress, final_progress, average_success or final_success"},
      {"env.<key>", "environment parameter override (see the env parameter file format)"},
  };
  return docs;
}

bool is_override_key(const std::string& key) {
  return key.rfind("planner.", 0) == 0 || key.rfind("learner.", 0) == 0 || key.rfind("env.", 0) == 0;
}

// Type-checks one override against a scratch model and returns its canonical
// text. Environment keys are checked against the current task's defaults.
std::string normalize_override(const ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key.rfind("env.", 0) == 0) {
    sim::EnvModel env = sim::make_env(cfg.task);
    sim::apply_env_override(env, key.substr(4), value);
    return trim(value);
  }
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  Resolved scratch;
  return f->apply(scratch, key, value);
}

std::vector<unsigned long> parse_seeds(const std::string& key, const std::string& v) {
  std::vector<unsigned long> out;
  for (const std::string& part : split(v, ',')) {
    out.push_back(static_cast<unsigned long>(int_at_least(key, part, 0)));
  }
  if (out.empty()) range_error(key, "needs at least one seed");
  return out;
}

std::vector<std::string> parse_list(const std::string& key, const std::string& v) {
  std::vector<std::string> out = split(v, ';');
  for (const auto& s : out) {
    if (s.empty()) range_error(key, "empty list entry");
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in,
                      std::string_view origin) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  try {
    if (key == "task") {
      cfg.task = std::string(sim::task_name(sim::parse_task(value)));
    } else if (key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "preset") {
      cfg.preset = parse_preset(value);
    } else if (key == "seeds") {
      cfg.seeds = parse_seeds(key, value);
    } else if (key == "output") {
      if (value.empty()) range_error(key, "must not be empty");
      cfg.output = value;
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(int_at_least(key, value, 1));
    } else if (key == "budget.max_nodes") {
      cfg.max_nodes = int_at_least(key, value, -1);
    } else if (key == "budget.max_env_steps") {
      cfg.max_env_steps = int_at_least(key, value, 0);
    } else if (key == "budget.wall_clock_s") {
      cfg.wall_clock_s = real_in(key, value, 0.0, kInf);
    } else if (key == "sweep.mode") {
      cfg.sweep.base_mode = parse_mode(value);
      if (cfg.sweep.base_mode == Mode::kSweep) range_error(key, "a sweep cell cannot itself be a sweep");
    } else if (key == "sweep.parameter") {
      if (!is_override_key(value) && value.rfind("budget.", 0) != 0) range_error(key, "not a sweepable key: " + value);
      cfg.sweep.parameter = value;
    } else if (key == "sweep.values") {
      cfg.sweep.values = parse_list(key, value);
    } else if (key == "sweep.parameter2") {
      if (!is_override_key(value) && value.rfind("budget.", 0) != 0) range_error(key, "not a sweepable key: " + value);
      cfg.sweep.parameter2 = value;
    } else if (key == "sweep.values2") {
      cfg.sweep.values2 = parse_list(key, value);
    } else if (key == "sweep.paired") {
      cfg.sweep.paired = sim::parse_bool(value, key);
    } else if (key == "sweep.replications") {
      cfg.sweep.replications = static_cast<int>(int_at_least(key, value, 0));
    } else if (key == "sweep.metric") {
      cfg.sweep.metric = parse_sweep_metric(value);
    } else if (is_override_key(key)) {
      cfg.overrides[key] = normalize_override(cfg, key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  const sim::ParamMap kv = sim::parse_param_text(text, origin);
  // Line numbers for messages.
  std::map<std::string, int> line_of;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const auto eq = line.find('=');
      if (eq != std::string::npos) line_of.emplace(trim(line.substr(0, eq)), n);
    }
  }
  ExperimentConfig cfg;
  auto apply = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    set_config_value(cfg, key, it->second, std::string(origin) + ":" + std::to_string(line_of[key]));
  };
  // The task decides how env overrides are checked, so it goes first.
  apply("task");
  for (const auto& [key, value] : kv) {
    if (key != "task") apply(key);
  }
  try {
    resolve(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  if (cfg.sweep.values2.size() && cfg.sweep.parameter2.empty()) {
    throw ConfigError(std::string(origin) + ": sweep.values2 given without sweep.parameter2");
  }
  if (cfg.mode == Mode::kSweep) {
    if (cfg.sweep.parameter.empty() || cfg.sweep.values.empty()) {
      throw ConfigError(std::string(origin) + ": sweep mode needs sweep.parameter and a non-empty sweep.values");
    }
    if (cfg.sweep.has_second_axis() && cfg.sweep.values2.empty()) {
      throw ConfigError(std::string(origin) + ": sweep.parameter2 needs a non-empty sweep.values2");
    }
    if (cfg.sweep.paired && cfg.sweep.values.size() != cfg.sweep.values2.size()) {
      throw ConfigError(std::string(origin) + ": sweep.paired needs values and values2 of equal length");
    }
    // Every cell the sweep will run must resolve.
    auto check_cell = [&](const std::map<std::string, std::string>& extra, const std::string& label) {
      try {
        resolve(cfg, extra);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(origin) + ": sweep value '" + label + "': " + e.what());
      }
    };
    const SweepSpec& sw = cfg.sweep;
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      if (!sw.has_second_axis()) {
        check_cell({{sw.parameter, sw.values[i]}}, sw.values[i]);
      } else if (sw.paired) {
        check_cell({{sw.parameter, sw.values[i]}, {sw.parameter2, sw.values2[i]}}, sw.values[i] + " / " + sw.values2[i]);
      } else {
        for (const std::string& v2 : sw.values2) {
          check_cell({{sw.parameter, sw.values[i]}, {sw.parameter2, v2}}, sw.values[i] + " / " + v2);
        }
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto line = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
  line("task", cfg.task);
  line("mode", std::string(mode_name(cfg.mode)));
  line("preset", std::string(preset_name(cfg.preset)));
  std::vector<std::string> seeds;
  for (unsigned long s : cfg.seeds) seeds.push_back(std::to_string(s));
  line("seeds", join(seeds, ","));
  line("output", cfg.output);
  line("jobs", std::to_string(cfg.jobs));
  line("budget.max_nodes", std::to_string(cfg.max_nodes));
  line("budget.max_env_steps", std::to_string(cfg.max_env_steps));
  line("budget.wall_clock_s", format_double(cfg.wall_clock_s));
  if (!cfg.sweep.parameter.empty()) {
    line("sweep.mode", std::string(mode_name(cfg.sweep.base_mode)));
    line("sweep.parameter", cfg.sweep.parameter);
    line("sweep.values", join(cfg.sweep.values, ";"));
    if (cfg.sweep.has_second_axis()) {
      line("sweep.parameter2", cfg.sweep.parameter2);
      line("sweep.values2", join(cfg.sweep.values2, ";"));
      line("sweep.paired", cfg.sweep.paired ? "true" : "false");
    }
    line("sweep.replications", std::to_string(cfg.sweep.replications));
    line("sweep.metric", std::string(sweep_metric_name(cfg.sweep.metric)));
  }
  for (const auto& [k, v] : cfg.overrides) line(k, v);
  return out.str();
}

long desk_node_budget(sim::Task task) {
  switch (task) {
    case sim::Task::kBoxPush1D: return 1000;
    case sim::Task::kBoxPush2D: return 3000;
    case sim::Task::kPlanarHand: return 10000;
  }
  return 1000;
}

void apply_desk_preset(learner::TrainConfig& c, sim::Task task) {
  c.hidden_width = 64;
  c.eval_runs = 10;
  switch (task) {
    case sim::Task::kBoxPush1D:
      c.n_epochs = 30;
      c.n_cycles = 5;
      break;
    case sim::Task::kBoxPush2D:
      c.n_epochs = 15;
      c.n_cycles = 50;
      break;
    case sim::Task::kPlanarHand:
      c.n_epochs = 20;
      c.n_cycles = 50;
      break;
  }
}

Resolved resolve(const ExperimentConfig& cfg) { return resolve(cfg, {}); }

Resolved resolve(const ExperimentConfig& cfg, const std::map<std::string, std::string>& extra) {
  std::map<std::string, std::string> ov = cfg.overrides;
  for (const auto& [k, v] : extra) ov[k] = v;

  Resolved r;
  sim::ParamMap env_ov;
  for (const auto& [k, v] : ov) {
    if (k.rfind("env.", 0) == 0) env_ov[k.substr(4)] = v;
  }
  r.env = sim::make_env(cfg.task, env_ov);
  r.planner = planner::default_params(r.env);
  r.learner = learner::default_train_config(r.env, r.planner);
  if (cfg.preset == Preset::kDesk) apply_desk_preset(r.learner, r.env.task);

  // Budgets may be swept too.
  long max_nodes = cfg.max_nodes;
  long max_env_steps = cfg.max_env_steps;
  if (auto it = ov.find("budget.max_nodes"); it != ov.end()) max_nodes = int_at_least(it->first, it->second, -1);
  if (auto it = ov.find("budget.max_env_steps"); it != ov.end()) {
    max_env_steps = int_at_least(it->first, it->second, 0);
  }

  bool learner_qd = false;
  for (const auto& [k, v] : ov) {
    if (k.rfind("env.", 0) == 0 || k.rfind("budget.", 0) == 0) continue;
    const Field* f = find_field(k);
    if (!f) throw ConfigError("unknown key '" + k + "'");
    if (k.rfind("planner.", 0) == 0) f->apply(r, k, v);
  }
  for (const auto& [k, v] : ov) {
    if (k.rfind("learner.", 0) != 0) continue;
    find_field(k)->apply(r, k, v);
    learner_qd = learner_qd || k == "learner.q_d";
  }
  if (!learner_qd) r.learner.q_d = r.planner.q_d;

  if (max_nodes == 0) max_nodes = desk_node_budget(r.env.task);
  if (max_nodes > 0) {
    r.planner.max_nodes = max_nodes;
    // Enough sub-goals that the node budget is what ends the search.
    r.planner.n_g = std::max<long>(r.planner.n_g, max_nodes);
  }
  r.learner.max_env_steps = max_env_steps;

  r.planner.validate(r.env);
  r.learner.validate(r.env);
  return r;
}

std::vector<std::pair<std::string, std::string>> documented_keys() {
  std::vector<std::pair<std::string, std::string>> out = top_level_docs();
  for (const auto& [k, f] : field_table()) out.emplace_back(k, f.doc);
  return out;
}

}  // namespace manip::harness
