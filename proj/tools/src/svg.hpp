#pragma once

#include <string>
#include <vector>

#include "wazkit/region.hpp"
#include "wazkit/trajectory.hpp"

namespace wazkit {
namespace cli {

/// 800x600 plot of a 2-D projection of the trajectory. Axis slots index the
/// state; -1 selects time. Faces whose free variables lie inside the
/// projection are overlaid as zero contours (marching squares). Plots are a
/// convenience, not data of record.
void write_trajectory_svg(const std::string& path, const Trajectory& traj, const RegionSpec& region,
                          int axis_x, int axis_y);

}  // namespace cli
}  // namespace wazkit
