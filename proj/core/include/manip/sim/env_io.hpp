#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "manip/sim/env.hpp"
#include "manip/sim/state.hpp"

namespace manip::sim {

// Strict scalar/vector parsing; `key` only labels the ConfigError message.
double parse_double(std::string_view value, std::string_view key);
long parse_int(std::string_view value, std::string_view key);
bool parse_bool(std::string_view value, std::string_view key);

// Comma and/or whitespace separated numbers, optionally wrapped in [ ].
Eigen::VectorXd parse_vector(std::string_view value, std::string_view key);

// Shortest text that parses back to the same double.
std::string format_double(double x);
std::string format_vector(const Eigen::VectorXd& v, char sep = ',');

// Reads "key = value" lines; '#' starts a comment. Duplicate keys and lines
// without '=' are rejected with their line number.
ParamMap parse_param_text(std::string_view text, std::string_view origin = "<text>");
ParamMap read_param_file(const std::string& path);

// Environment parameter file: a `task` line plus any overrides accepted by
// apply_env_override. save/load round-trips every numeric field.
std::string serialize_env(const EnvModel& env);
EnvModel parse_env(std::string_view text, std::string_view origin = "<text>");
EnvModel load_env_file(const std::string& path);

// Flat [q_r | qd_r | q_o | qd_o] coordinate array.
std::string format_state(const SystemState& s, char sep = ',');
SystemState parse_state(const EnvModel& env, std::string_view text);

}  // namespace manip::sim
