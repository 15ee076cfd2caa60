#include "manip/harness/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "manip/error.hpp"
#include "manip/harness/plot.hpp"
#include "manip/learner/pretrain.hpp"
#include "manip/nn/checkpoint.hpp"
#include "manip/planner/export.hpp"
#include "manip/sim/dynamics.hpp"
#include "manip/sim/env_io.hpp"

namespace fs = std::filesystem;

namespace manip::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr unsigned long kDemoStream = 0x9e3779b97f4a7c15UL;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

std::string seed_dir_name(unsigned long seed) { return "seed_" + std::to_string(seed); }

}  // namespace

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double sum = 0.0;
  int n = 0;
  for (double x : v) {
    if (std::isfinite(x)) sum += x, ++n;
  }
  if (n == 0) return {kNaN, kNaN};
  const double mean = sum / n;
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) ss += (x - mean) * (x - mean);
  }
  return {mean, std::sqrt(ss / (n - 1))};
}

std::string blob_hash(const std::string& content) {
  const std::string head = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, head.data(), head.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("blob_hash: SHA-1 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

PlanRun plan_once(const Resolved& r, unsigned long seed) {
  sim::Rng rng(seed);
  const sim::SystemState start = sim::start_state(r.env);
  const sim::SystemState goal = sim::task_goal(r.env);
  PlanRun out;
  out.tree = planner::plan(r.env, start, goal, r.planner, rng);
  out.best = planner::best_trajectory(out.tree, goal, r.planner);
  out.final_progress = planner::search_progress(out.tree, start, goal, r.planner.q_d);
  const auto& p = out.tree.progress;
  out.average_progress = p.empty() ? 0.0 : mean_std(p).first;
  return out;
}

bool needs_demos(const learner::TrainConfig& cfg) {
  return cfg.demo_mode != learner::DemoMode::kNone || cfg.pretrain != learner::PretrainMode::kNone;
}

learner::DemoSet demo_set_for(const Resolved& r, unsigned long seed) {
  sim::Rng rng(seed ^ kDemoStream);
  return learner::build_demo_set(r.env, r.planner, r.learner, rng);
}

double padded_average_success(const std::vector<learner::EpochMetrics>& metrics, int n_epochs) {
  if (metrics.empty() || n_epochs <= 0) return 0.0;
  double sum = 0.0;
  for (const auto& m : metrics) sum += m.success_rate;
  const int missing = std::max(0, n_epochs - static_cast<int>(metrics.size()));
  sum += missing * metrics.back().success_rate;
  return sum / std::max<int>(n_epochs, static_cast<int>(metrics.size()));
}

TrainRun train_once(const Resolved& r, unsigned long seed) {
  learner::DemoSet demos;
  if (needs_demos(r.learner) && r.learner.n_epochs > 0) demos = demo_set_for(r, seed);
  TrainRun out;
  out.result = learner::train(r.env, demos.empty() ? nullptr : &demos, r.learner, seed);
  const auto& m = out.result.metrics;
  out.final_success = m.empty() ? 0.0 : m.back().success_rate;
  out.average_success = padded_average_success(m, r.learner.n_epochs);
  return out;
}

PretrainEvalRun pretrain_eval_once(const Resolved& r, unsigned long seed) {
  learner::TrainConfig cfg = r.learner;
  if (cfg.pretrain == learner::PretrainMode::kNone) cfg.pretrain = learner::PretrainMode::kPolicy;
  const learner::DemoSet demos = demo_set_for(r, seed);
  learner::Rng rng(seed);
  learner::NetworkBundle nets = learner::make_networks(r.env, cfg, rng);
  int rejected = 0;
  const std::vector<learner::Episode> good = learner::collect_pretrain_demos(demos, r.env, cfg, rng, &rejected);
  PretrainEvalRun out;
  out.stats = learner::pretrain(good, nets, cfg, r.env, rng);
  out.stats.demos_rejected = rejected;
  // Imitation policy alone.
  learner::NetworkBundle il = nets;
  il.il_actor.reset();
  out.il_success = learner::evaluate(il, r.env, cfg, rng).success_rate;
  return out;
}

Table progress_table(const planner::SearchTree& tree) {
  Table t{{"nodes", "progress"}, {}};
  for (std::size_t i = 0; i < tree.progress.size(); ++i) {
    t.add_row({cell(static_cast<long>(i + 1)), cell(tree.progress[i])});
  }
  return t;
}

Table metrics_table(const std::vector<learner::EpochMetrics>& metrics) {
  Table t{{"epoch", "env_steps", "success_rate", "mean_episode_reward", "demo_fraction", "critic_loss",
           "actor_objective", "il_choices", "rl_choices"},
          {}};
  for (const auto& m : metrics) {
    t.add_row({cell(m.epoch), cell(m.env_steps), cell(m.success_rate), cell(m.mean_episode_reward),
               cell(m.demo_fraction), cell(m.critic_loss), cell(m.actor_objective), cell(m.il_choices),
               cell(m.rl_choices)});
  }
  return t;
}

namespace {

// ---- per-seed execution -------------------------------------------------

struct SeedStatus {
  bool ok = true;
  std::string message;
};

void write_seed_summary(const fs::path& dir, unsigned long seed, const SeedStatus& st,
                        const std::vector<std::pair<std::string, double>>& values) {
  Table t{{"seed", "status", "message"}, {}};
  std::vector<std::string> row{cell(static_cast<long>(seed)), st.ok ? "ok" : "failed", sanitize(st.message)};
  for (const auto& [k, v] : values) {
    t.header.push_back(k);
    row.push_back(st.ok ? cell(v) : std::string());
  }
  t.add_row(std::move(row));
  write_csv((dir / "summary.csv").string(), t);
}

std::vector<std::string> summary_columns(Mode mode) {
  switch (mode) {
    case Mode::kPlan: return {"nodes", "final_progress", "average_progress", "failed_extensions"};
    case Mode::kTrain: return {"epochs", "env_steps", "final_success", "average_success"};
    case Mode::kPretrainEval: return {"demos_used", "demos_rejected", "policy_loss", "value_loss", "il_success"};
    case Mode::kSweep: break;
  }
  return {};
}

SeedStatus run_seed(Mode mode, const Resolved& r, unsigned long seed, const fs::path& dir, double wall_cap) {
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  SeedStatus st;
  std::vector<std::pair<std::string, double>> values;
  const std::vector<std::string> cols = summary_columns(mode);
  try {
    if (mode == Mode::kPlan) {
      const PlanRun pr = plan_once(r, seed);
      write_csv((dir / "progress.csv").string(), progress_table(pr.tree));
      {
        std::ofstream tree_out(dir / "tree.csv", std::ios::binary);
        planner::write_tree(tree_out, pr.tree);
        std::ofstream traj_out(dir / "trajectory.csv", std::ios::binary);
        planner::write_trajectory(traj_out, pr.best);
      }
      values = {{cols[0], pr.tree.size()},
                {cols[1], pr.final_progress},
                {cols[2], pr.average_progress},
                {cols[3], static_cast<double>(pr.tree.failed_extensions)}};
    } else if (mode == Mode::kTrain) {
      const TrainRun tr = train_once(r, seed);
      write_csv((dir / "metrics.csv").string(), metrics_table(tr.result.metrics));
      nn::Checkpoint ck;
      ck.networks = {{"actor", tr.result.nets.actor}, {"critic", tr.result.nets.critic}};
      if (tr.result.nets.il_actor) ck.networks.emplace_back("il_actor", *tr.result.nets.il_actor);
      ck.normalizers = {{"observation", tr.result.nets.normalizer}};
      nn::save_checkpoint((dir / "checkpoint.bin").string(), ck);
      const auto& m = tr.result.metrics;
      values = {{cols[0], static_cast<double>(m.size())},
                {cols[1], m.empty() ? 0.0 : static_cast<double>(m.back().env_steps)},
                {cols[2], tr.final_success},
                {cols[3], tr.average_success}};
    } else if (mode == Mode::kPretrainEval) {
      const PretrainEvalRun pe = pretrain_eval_once(r, seed);
      values = {{cols[0], pe.stats.demos_used},
                {cols[1], pe.stats.demos_rejected},
                {cols[2], pe.stats.policy_loss},
                {cols[3], pe.stats.value_loss},
                {cols[4], pe.il_success}};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (wall_cap > 0.0 && elapsed > wall_cap) {
      st.ok = false;
      st.message = "wall-clock cap exceeded";
    }
  } catch (const std::exception& e) {
    st.ok = false;
    st.message = e.what();
  }
  if (!st.ok) {
    values.clear();
    for (const auto& c : cols) values.emplace_back(c, kNaN);
  }
  write_seed_summary(dir, seed, st, values);
  return st;
}

// Runs jobs on up to `workers` threads; results are indexed, so the order of
// completion never shows in the output.
void run_pool(std::size_t n, int workers, const std::function<void(std::size_t)>& job) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < w; ++k) {
    threads.emplace_back([&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= n) return;
          i = next++;
        }
        job(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

// ---- aggregation --------------------------------------------------------

struct SeedSummary {
  unsigned long seed = 0;
  bool ok = false;
  std::map<std::string, double> values;
};

SeedSummary read_seed_summary(const fs::path& dir) {
  const Table t = read_csv((dir / "summary.csv").string());
  if (t.rows.size() != 1) throw std::runtime_error("malformed summary in " + dir.string());
  SeedSummary s;
  s.seed = static_cast<unsigned long>(std::stoul(t.rows[0][0]));
  s.ok = t.rows[0][1] == "ok";
  for (std::size_t c = 3; c < t.header.size(); ++c) {
    s.values[t.header[c]] = t.rows[0][c].empty() ? kNaN : sim::parse_double(t.rows[0][c], t.header[c]);
  }
  return s;
}

// Mean and std across seeds of a per-seed curve; shorter curves are extended
// with their last value.
struct Curve {
  std::vector<double> x, mean, std;
  std::vector<int> n;
};

Curve aggregate_curves(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys) {
  Curve c;
  std::size_t len = 0, longest = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i].size() > len) len = ys[i].size(), longest = i;
  }
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<double> v;
    for (const auto& y : ys) {
      if (!y.empty()) v.push_back(k < y.size() ? y[k] : y.back());
    }
    const auto [m, s] = mean_std(v);
    c.x.push_back(xs[longest][k]);
    c.mean.push_back(m);
    c.std.push_back(s);
    c.n.push_back(static_cast<int>(v.size()));
  }
  return c;
}

void write_curve(const fs::path& dir, const std::string& stem, const Curve& c, const std::string& x_name,
                 const std::string& y_name, const std::string& label, PlotStyle style) {
  Table t{{x_name, "mean", "std", "n"}, {}};
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    t.add_row({cell(c.x[k]), cell(c.mean[k]), cell(c.std[k]), cell(c.n[k])});
  }
  write_csv((dir / (stem + ".csv")).string(), t);
  if (c.x.empty()) return;
  style.x_label = x_name;
  style.y_label = y_name;
  write_text_file((dir / (stem + ".svg")).string(), line_plot_svg({{label, c.x, c.mean, c.std}}, style));
}

// Aggregates one plan/train/pretrain-eval directory. Returns per-seed
// summaries in seed order.
std::vector<SeedSummary> aggregate_dir(const fs::path& dir, Mode mode, const std::vector<unsigned long>& seeds,
                                       const std::string& label) {
  std::vector<SeedSummary> sums;
  std::vector<std::vector<double>> xs, ys;
  for (unsigned long seed : seeds) {
    const fs::path sd = dir / seed_dir_name(seed);
    SeedSummary s;
    try {
      s = read_seed_summary(sd);
    } catch (const std::exception&) {
      s.seed = seed;
      s.ok = false;
    }
    sums.push_back(s);
    if (!s.ok) continue;
    if (mode == Mode::kPlan) {
      const Table t = read_csv((sd / "progress.csv").string());
      xs.push_back(t.column("nodes"));
      ys.push_back(t.column("progress"));
    } else if (mode == Mode::kTrain) {
      const Table t = read_csv((sd / "metrics.csv").string());
      xs.push_back(t.column("env_steps"));
      ys.push_back(t.column("success_rate"));
    }
  }
  // Seed summary table.
  const std::vector<std::string> cols = summary_columns(mode);
  Table st{{"seed", "status"}, {}};
  for (const auto& c : cols) st.header.push_back(c);
  for (const auto& s : sums) {
    std::vector<std::string> row{cell(static_cast<long>(s.seed)), s.ok ? "ok" : "failed"};
    for (const auto& c : cols) {
      const auto it = s.values.find(c);
      row.push_back(s.ok && it != s.values.end() ? cell(it->second) : std::string());
    }
    st.add_row(std::move(row));
  }
  write_csv((dir / "summary.csv").string(), st);

  if (mode == Mode::kPlan) {
    PlotStyle style;
    style.title = label + ": search progress";
    style.fix_y = true;
    style.y_min = 0.0;
    style.y_max = 1.0;
    write_curve(dir, "progress", aggregate_curves(xs, ys), "nodes", "search progress", "mean +- std", style);
  } else if (mode == Mode::kTrain) {
    PlotStyle style;
    style.title = label + ": evaluation success";
    style.fix_y = true;
    style.y_min = 0.0;
    style.y_max = 1.0;
    write_curve(dir, "success", aggregate_curves(xs, ys), "env_steps", "success rate", "mean +- std", style);
  }
  return sums;
}

std::string metric_column(SweepMetric m) {
  switch (m) {
    case SweepMetric::kAverageProgress: return "average_progress";
    case SweepMetric::kFinalProgress: return "final_progress";
    case SweepMetric::kAverageSuccess: return "average_success";
    case SweepMetric::kFinalSuccess: return "final_success";
  }
  return "average_progress";
}

void check_metric_mode(const SweepSpec& sp) {
  const bool progress = sp.metric == SweepMetric::kAverageProgress || sp.metric == SweepMetric::kFinalProgress;
  if (progress != (sp.base_mode == Mode::kPlan)) {
    throw ConfigError("sweep.metric " + std::string(sweep_metric_name(sp.metric)) + " does not fit sweep.mode " +
                      std::string(mode_name(sp.base_mode)));
  }
  if (sp.base_mode == Mode::kPretrainEval) throw ConfigError("sweep.mode pretrain-eval has no sweep metric");
}

struct Cell {
  std::string name;
  std::map<std::string, std::string> extra;
  std::size_t i = 0, j = 0;
};

std::vector<Cell> sweep_cells(const SweepSpec& sp) {
  std::vector<Cell> cells;
  const std::size_t nj = sp.two_dimensional() ? sp.values2.size() : 1;
  for (std::size_t i = 0; i < sp.values.size(); ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      Cell c;
      c.i = i;
      c.j = j;
      c.name = "cell_" + std::to_string(i);
      c.extra[sp.parameter] = sp.values[i];
      if (sp.two_dimensional()) {
        c.name += "_" + std::to_string(j);
        c.extra[sp.parameter2] = sp.values2[j];
      } else if (sp.paired) {
        c.extra[sp.parameter2] = sp.values2[i];
      }
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::vector<unsigned long> sweep_seeds(const ExperimentConfig& cfg) {
  std::vector<unsigned long> s = cfg.seeds;
  if (cfg.sweep.replications > 0 && static_cast<std::size_t>(cfg.sweep.replications) < s.size()) {
    s.resize(static_cast<std::size_t>(cfg.sweep.replications));
  }
  return s;
}

RunOutcome aggregate_sweep(const fs::path& dir, const ExperimentConfig& cfg) {
  const SweepSpec& sp = cfg.sweep;
  const std::vector<unsigned long> seeds = sweep_seeds(cfg);
  const std::string metric = metric_column(sp.metric);
  RunOutcome out;
  Table t{{"cell", "parameter", "value"}, {}};
  if (sp.has_second_axis()) {
    t.header.push_back("parameter2");
    t.header.push_back("value2");
  }
  for (const char* h : {"metric", "mean", "std", "n", "missing"}) t.header.push_back(h);

  std::vector<std::string> labels;
  std::vector<double> means, stds;
  std::vector<std::vector<double>> grid(sp.values.size(),
                                        std::vector<double>(sp.two_dimensional() ? sp.values2.size() : 1, kNaN));
  for (const Cell& c : sweep_cells(sp)) {
    const std::vector<SeedSummary> sums = aggregate_dir(dir / c.name, sp.base_mode, seeds, c.name);
    std::vector<double> v;
    int missing = 0;
    for (const auto& s : sums) {
      ++out.total;
      const auto it = s.values.find(metric);
      if (!s.ok || it == s.values.end() || !std::isfinite(it->second)) {
        ++missing;
        ++out.failed;
        continue;
      }
      v.push_back(it->second);
    }
    const auto [m, sd] = mean_std(v);
    std::vector<std::string> row{c.name, sp.parameter, sp.values[c.i]};
    if (sp.has_second_axis()) {
      row.push_back(sp.parameter2);
      row.push_back(sp.values2[sp.paired ? c.i : c.j]);
    }
    for (const std::string& s : {metric, cell(m), cell(sd), cell(static_cast<int>(v.size())), cell(missing)}) {
      row.push_back(s);
    }
    t.add_row(row);
    labels.push_back(sp.paired ? sp.values[c.i] + " / " + sp.values2[c.i] : sp.values[c.i]);
    means.push_back(m);
    stds.push_back(sd);
    grid[c.i][c.j] = m;
  }
  // The raw values may contain commas (vector keys); keep the table well formed.
  for (auto& row : t.rows) {
    for (auto& s : row) std::replace(s.begin(), s.end(), ',', ' ');
  }
  write_csv((dir / "sweep.csv").string(), t);
  PlotStyle style;
  style.title = "sweep of " + sp.parameter + (sp.two_dimensional() ? " x " + sp.parameter2 : "");
  style.y_label = metric;
  if (sp.two_dimensional()) {
    style.x_label = sp.parameter2;
    style.y_label = sp.parameter;
    write_text_file((dir / "sweep.svg").string(), heatmap_svg(sp.values, sp.values2, grid, style));
  } else {
    style.x_label = sp.paired ? sp.parameter + " / " + sp.parameter2 : sp.parameter;
    write_text_file((dir / "sweep.svg").string(), bar_plot_svg(labels, means, stds, style));
  }
  return out;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == "manifest.txt") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  const std::string config_text = serialize_config(cfg);
  std::ostringstream m;
  m << "tool = manip " << MANIP_VERSION << '\n';
  m << "mode = " << mode_name(cfg.mode) << '\n';
  m << "seeds =";
  for (unsigned long s : cfg.seeds) m << ' ' << s;
  m << '\n';
  m << "config_hash = " << blob_hash(config_text) << '\n';
  m << "rerun = manip_cli " << mode_name(cfg.mode) << " --config config.conf --out <dir>\n";
  for (const std::string& f : files) m << "file " << blob_hash(read_file(dir / f)) << ' ' << f << '\n';
  write_text_file((dir / "manifest.txt").string(), m.str());
}

void prepare_output(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError("output path '" + dir.string() + "' exists and is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) {
        throw ConfigError("output directory '" + dir.string() + "' is not empty; pass --force to overwrite it");
      }
      fs::remove_all(dir);
    }
  }
  fs::create_directories(dir);
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, bool force, std::ostream& log) {
  if (cfg.mode == Mode::kSweep) check_metric_mode(cfg.sweep);
  const Resolved base = resolve(cfg);
  const fs::path dir(cfg.output);
  prepare_output(dir, force);
  write_text_file((dir / "config.conf").string(), serialize_config(cfg));
  std::mutex log_mu;
  auto note = [&](const std::string& s) {
    std::lock_guard<std::mutex> lock(log_mu);
    log << s << '\n';
  };

  RunOutcome out;
  if (cfg.mode == Mode::kSweep) {
    const std::vector<Cell> cells = sweep_cells(cfg.sweep);
    const std::vector<unsigned long> seeds = sweep_seeds(cfg);
    std::vector<Resolved> resolved;
    for (const Cell& c : cells) resolved.push_back(resolve(cfg, c.extra));
    const std::size_t n = cells.size() * seeds.size();
    run_pool(n, cfg.jobs, [&](std::size_t k) {
      const Cell& c = cells[k / seeds.size()];
      const unsigned long seed = seeds[k % seeds.size()];
      const SeedStatus st =
          run_seed(cfg.sweep.base_mode, resolved[k / seeds.size()], seed, dir / c.name / seed_dir_name(seed),
                   cfg.wall_clock_s);
      note(c.name + " seed " + std::to_string(seed) + ": " + (st.ok ? "ok" : "failed: " + st.message));
    });
    out = aggregate_sweep(dir, cfg);
  } else {
    std::vector<SeedStatus> status(cfg.seeds.size());
    run_pool(cfg.seeds.size(), cfg.jobs, [&](std::size_t k) {
      const unsigned long seed = cfg.seeds[k];
      status[k] = run_seed(cfg.mode, base, seed, dir / seed_dir_name(seed), cfg.wall_clock_s);
      note("seed " + std::to_string(seed) + ": " + (status[k].ok ? "ok" : "failed: " + status[k].message));
    });
    const auto sums = aggregate_dir(dir, cfg.mode, cfg.seeds, cfg.task);
    for (const auto& s : sums) {
      ++out.total;
      if (!s.ok) ++out.failed;
    }
  }
  write_manifest(dir, cfg);
  return out;
}

RunOutcome report(const std::string& dir_in, std::ostream& log) {
  const fs::path dir(dir_in);
  const fs::path conf = dir / "config.conf";
  if (!fs::exists(conf)) throw ConfigError("'" + dir_in + "' has no config.conf; not an output directory");
  const ExperimentConfig cfg = load_config(conf.string());
  RunOutcome out;
  if (cfg.mode == Mode::kSweep) {
    out = aggregate_sweep(dir, cfg);
  } else {
    for (const auto& s : aggregate_dir(dir, cfg.mode, cfg.seeds, cfg.task)) {
      ++out.total;
      if (!s.ok) ++out.failed;
    }
  }
  write_manifest(dir, cfg);
  log << "report: " << out.total - out.failed << "/" << out.total << " runs ok\n";
  return out;
}

}  // namespace manip::harness
