#pragma once

#include <ostream>
#include <string>

#include "manip/planner/search.hpp"

namespace manip::planner {

// One header line, then one comma-separated line per node:
//   id,parent,type,k,r_d,r_p,r_m,total,dir_0..,alpha_0..,cmd_0..,s_0..
// The root has parent -1, type none and empty action columns set to 0.
void write_tree(std::ostream& out, const SearchTree& tree);

// Header line, then one line per base step t:
//   t,s_0..,cmd_0..   (the last row carries the final state and no command)
void write_trajectory(std::ostream& out, const Trajectory& traj);

}  // namespace manip::planner
