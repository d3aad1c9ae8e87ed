#pragma once

#include <string>

#include "fdrl/trajectory.hpp"

namespace fdrl {

/// Renders three stacked panels (position against the reference, velocity,
/// action against its limits) as a standalone SVG. Output bytes are a pure
/// function of the inputs; dense records are thinned to a bounded point
/// count per panel. Throws std::invalid_argument on fewer than two samples.
void write_trajectory_svg(const std::string& path, const Trajectory& traj, double z_ref,
                          double u_max, const std::string& title = "");

}  // namespace fdrl
