#include "manip/planner/export.hpp"

#include "manip/sim/env_io.hpp"

namespace manip::planner {
namespace {

void columns(std::ostream& out, const char* prefix, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) out << ',' << prefix << i;
}

void values(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << sim::format_double(v[i]);
}

}  // namespace

void write_tree(std::ostream& out, const SearchTree& tree) {
  if (tree.empty()) return;
  const TreeNode& root = tree.node(0);
  const Eigen::Index nr = root.command.size();
  out << "id,parent,type,k,r_d,r_p,r_m,total";
  columns(out, "dir_", nr);
  columns(out, "alpha_", nr);
  columns(out, "cmd_", nr);
  columns(out, "s_", root.state.size());
  out << '\n';
  for (int i = 0; i < tree.size(); ++i) {
    const TreeNode& n = tree.node(i);
    out << i << ',' << n.parent << ',' << action_type_name(n.action.type) << ',' << n.action.k << ','
        << sim::format_double(n.rewards.r_d) << ',' << sim::format_double(n.rewards.r_p) << ','
        << sim::format_double(n.rewards.r_m) << ',' << sim::format_double(n.rewards.total);
    values(out, n.action.direction);
    values(out, n.action.magnitude);
    values(out, n.command);
    values(out, n.state.flat());
    out << '\n';
  }
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  if (traj.states.empty()) return;
  const Eigen::Index nr = traj.initial_command.size();
  out << 't';
  columns(out, "s_", traj.states.front().size());
  columns(out, "cmd_", nr);
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    values(out, traj.states[t].flat());
    if (t < traj.commands.size()) {
      values(out, traj.commands[t]);
    } else {
      for (Eigen::Index i = 0; i < nr; ++i) out << ',';
    }
    out << '\n';
  }
}

}  // namespace manip::planner
