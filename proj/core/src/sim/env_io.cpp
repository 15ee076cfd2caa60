#include "manip/sim/env_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "manip/error.hpp"

namespace manip::sim {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view value, std::string_view key, const char* expected) {
  throw ConfigError("'" + std::string(key) + "': cannot parse '" + std::string(value) + "' as " + expected);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

double parse_double(std::string_view value, std::string_view key) {
  const std::string_view v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(value, key, "a number");
  return out;
}

long parse_int(std::string_view value, std::string_view key) {
  const std::string_view v = trim(value);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(value, key, "an integer");
  return out;
}

bool parse_bool(std::string_view value, std::string_view key) {
  const std::string_view v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(value, key, "a boolean");
}

Eigen::VectorXd parse_vector(std::string_view value, std::string_view key) {
  std::string_view v = trim(value);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') bad_value(value, key, "a bracketed list");
    v = trim(v.substr(1, v.size() - 2));
  }
  std::vector<double> items;
  std::size_t pos = 0;
  while (pos < v.size()) {
    const auto next = v.find_first_of(", \t", pos);
    const std::string_view tok = v.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!tok.empty()) items.push_back(parse_double(tok, key));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (items.empty()) bad_value(value, key, "a list of numbers");
  return Eigen::Map<const Eigen::VectorXd>(items.data(), static_cast<Eigen::Index>(items.size()));
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string format_vector(const Eigen::VectorXd& v, char sep) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_double(v[i]);
  }
  return out;
}

ParamMap parse_param_text(std::string_view text, std::string_view origin) {
  ParamMap out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

ParamMap read_param_file(const std::string& path) { return parse_param_text(read_file(path), path); }

std::string serialize_env(const EnvModel& env) {
  std::ostringstream o;
  auto line = [&](const char* key, const std::string& v) { o << key << " = " << v << '\n'; };
  auto vec2 = [](const Eigen::Vector2d& v) { return format_vector(Eigen::VectorXd(v)); };
  line("task", std::string(task_name(env.task)));
  line("dt_c", format_double(env.dt_c));
  line("dt_a", format_double(env.dt_a));
  line("kp", format_vector(env.kp));
  line("kd", format_vector(env.kd));
  line("joint_inertia", format_vector(env.joint_inertia));
  line("object_mass", format_double(env.object_mass));
  line("object_inertia", format_double(env.object_inertia));
  line("contact_stiffness", format_double(env.contact.stiffness));
  line("contact_damping", format_double(env.contact.damping));
  line("contact_friction", format_double(env.contact.friction));
  line("contact_tangential_damping", format_double(env.contact.tangential_damping));
  line("support_stiffness", format_double(env.support.stiffness));
  line("support_damping", format_double(env.support.damping));
  line("support_friction", format_double(env.support.friction));
  line("support_tangential_damping", format_double(env.support.tangential_damping));
  line("ground_friction", format_double(env.ground_friction));
  line("ground_damping", format_double(env.ground_damping));
  line("gravity", format_double(env.gravity));
  line("pusher_half", vec2(env.pusher_half));
  line("object_half", vec2(env.object_half));
  line("link_length", format_double(env.link_length));
  line("link_radius", format_double(env.link_radius));
  line("state_min", format_vector(env.state_min));
  line("state_max", format_vector(env.state_max));
  line("start", format_vector(env.start_state));
  line("goal", format_vector(env.task_goal));
  line("start_jitter", format_vector(env.start_jitter));
  line("goal_min", format_vector(env.goal_min));
  line("goal_max", format_vector(env.goal_max));
  line("alpha_fraction", format_double(env.alpha_fraction));
  line("penetration_tol", format_double(env.penetration_tol));
  line("feasible_retries", std::to_string(env.feasible_retries));
  return o.str();
}

EnvModel parse_env(std::string_view text, std::string_view origin) {
  ParamMap params = parse_param_text(text, origin);
  const auto it = params.find("task");
  if (it == params.end()) throw ConfigError(std::string(origin) + ": missing 'task'");
  const Task task = parse_task(it->second);
  return make_env(task, params);
}

EnvModel load_env_file(const std::string& path) { return parse_env(read_file(path), path); }

std::string format_state(const SystemState& s, char sep) { return format_vector(s.flat(), sep); }

SystemState parse_state(const EnvModel& env, std::string_view text) {
  Eigen::VectorXd v = parse_vector(text, "state");
  if (v.size() != env.n_s()) {
    throw ConfigError("state has " + std::to_string(v.size()) + " coordinates, expected " +
                      std::to_string(env.n_s()) + " for " + env.name);
  }
  return SystemState(env.n_r, env.n_o, std::move(v));
}

}  // namespace manip::sim
