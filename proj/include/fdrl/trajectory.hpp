#pragma once

#include <string>
#include <vector>

namespace fdrl {

/// One base-resolution sample: true plant state, the input applied during
/// the step that produced it, and the instantaneous reward at this state.
struct TrajectoryPoint {
  double time;
  double z;
  double z_dot;
  double z_ddot;
  double u;
  double reward;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Fixed schema "time,z,z_dot,z_ddot,u,reward", full double precision.
/// include_reward=false drops the last column (open-loop simulate output).
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool include_reward = true);

/// Accepts both the 5- and 6-column schema; absent rewards read as 0.
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace fdrl
