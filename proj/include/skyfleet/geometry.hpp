#pragma once

#include <optional>
#include <span>
#include <vector>

#include "skyfleet/config.hpp"
#include "skyfleet/scenario.hpp"
#include "skyfleet/types.hpp"

namespace skyfleet {

/// Indices of users within `footprint_radius_m` (closed disk, horizontal
/// distance) of the center of `uav_cell`.
std::vector<int> users_in_footprint(const CellCoord& uav_cell, const World& world, std::span<const User> users,
                                    double footprint_radius_m);

/// True when the building under `cell` reaches the upper edge of its altitude
/// band. Always false in 2D. Throws std::out_of_range for cells off the grid.
bool is_blocked(const CellCoord& cell, const World& world);
bool is_blocked(const CellCoord& cell, const World& world, const ScenarioConfig& config);

enum class ObstacleRule {
  Buildings,  ///< building bands block flight
  Ignore,     ///< ceiling lifted: every cell is free
};

/// Minimum-move path from `start` to `goal`, excluding `start` and ending at
/// `goal`. Moves are unit steps in the order forward (+y), backward (-y),
/// right (+x), left (-x), up (+z), down (-z). Throws UnreachableError.
std::vector<CellCoord> astar_path(const CellCoord& start, const CellCoord& goal, const World& world,
                                  ObstacleRule rule = ObstacleRule::Buildings);

/// Shortest A* path to any charging station column at the start's altitude.
/// Ties go to the lower station index. Empty path when already on a station;
/// nullopt when none is reachable.
std::optional<std::vector<CellCoord>> path_to_nearest_cs(const CellCoord& start, const World& world,
                                                         ObstacleRule rule = ObstacleRule::Buildings);

struct KinematicLimits {
  double v_max_mps = 8.3;
  double a_max_mps2 = 4.0;
  double v_cruise_mps = 8.3;
};

/// Cruise speed that makes a trapezoidal transit of `distance_m` last exactly
/// `duration_s`: the smaller root of v^2/a - T v + d = 0. Throws ConfigError
/// when no root exists or it exceeds v_max.
double cruise_speed_for(double distance_m, double duration_s, double v_max_mps, double a_max_mps2);

/// Limits with the cruise speed that moves one cell per iteration.
KinematicLimits kinematic_limits(const ScenarioConfig& config);

/// Bang-coast-bang transit time in seconds. Throws std::invalid_argument for
/// negative distances.
double transit_time(double distance_m, const KinematicLimits& limits);

}  // namespace skyfleet
