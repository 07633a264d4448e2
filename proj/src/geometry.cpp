#include "skyfleet/geometry.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"

namespace skyfleet {

std::vector<int> users_in_footprint(const CellCoord& uav_cell, const World& world, std::span<const User> users,
                                    double footprint_radius_m) {
  const Vec2 c = world.cell_center(uav_cell);
  const double r2 = footprint_radius_m * footprint_radius_m;
  std::vector<int> out;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double dx = users[i].pos_m.x - c.x;
    const double dy = users[i].pos_m.y - c.y;
    if (dx * dx + dy * dy <= r2) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool is_blocked(const CellCoord& cell, const World& world) {
  if (!world.in_bounds(cell)) {
    throw std::out_of_range(fmt::format("cell ({}, {}, {}) is outside the grid", cell.x, cell.y, cell.z));
  }
  if (world.level_height_m <= 0.0) return false;
  return world.height_at(cell.x, cell.y) >= (cell.z + 1) * world.level_height_m;
}

bool is_blocked(const CellCoord& cell, const World& world, const ScenarioConfig& config) {
  if (!config.flags.is_3d) {
    if (!world.in_bounds(cell)) {
      throw std::out_of_range(fmt::format("cell ({}, {}, {}) is outside the grid", cell.x, cell.y, cell.z));
    }
    return false;
  }
  return is_blocked(cell, world);
}

namespace {

constexpr std::array<std::array<int, 3>, 6> kMoves{{
    {0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1},
}};

int manhattan(const CellCoord& a, const CellCoord& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

bool passable(const CellCoord& c, const World& world, ObstacleRule rule) {
  return rule == ObstacleRule::Ignore || !is_blocked(c, world);
}

}  // namespace

std::vector<CellCoord> astar_path(const CellCoord& start, const CellCoord& goal, const World& world,
                                  ObstacleRule rule) {
  if (!world.in_bounds(start) || !world.in_bounds(goal)) {
    throw std::out_of_range("astar_path endpoints must lie on the grid");
  }
  if (!passable(start, world, rule) || !passable(goal, world, rule)) {
    throw UnreachableError("astar_path endpoint is blocked");
  }
  if (start == goal) return {};

  const int layer = world.cell_count();
  const int total = layer * world.altitude_levels;
  auto id = [&](const CellCoord& c) { return c.z * layer + c.y * world.cols + c.x; };
  auto coord = [&](int i) { return CellCoord{(i % layer) % world.cols, (i % layer) / world.cols, i / layer}; };

  std::vector<int> g(static_cast<std::size_t>(total), -1);
  std::vector<int> parent(static_cast<std::size_t>(total), -1);
  std::vector<bool> closed(static_cast<std::size_t>(total), false);

  // (f, h, insertion sequence, node). The sequence makes ties follow move order.
  using Entry = std::tuple<int, int, std::uint64_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  const int s = id(start);
  const int t = id(goal);
  g[static_cast<std::size_t>(s)] = 0;
  open.emplace(manhattan(start, goal), manhattan(start, goal), seq++, s);

  while (!open.empty()) {
    const auto [f, h, order, node] = open.top();
    open.pop();
    if (closed[static_cast<std::size_t>(node)]) continue;
    closed[static_cast<std::size_t>(node)] = true;
    if (node == t) break;
    const CellCoord cur = coord(node);
    for (const auto& m : kMoves) {
      const CellCoord nxt{cur.x + m[0], cur.y + m[1], cur.z + m[2]};
      if (!world.in_bounds(nxt) || !passable(nxt, world, rule)) continue;
      const int n = id(nxt);
      const int cand = g[static_cast<std::size_t>(node)] + 1;
      if (closed[static_cast<std::size_t>(n)]) continue;
      if (g[static_cast<std::size_t>(n)] < 0 || cand < g[static_cast<std::size_t>(n)]) {
        g[static_cast<std::size_t>(n)] = cand;
        parent[static_cast<std::size_t>(n)] = node;
        const int hn = manhattan(nxt, goal);
        open.emplace(cand + hn, hn, seq++, n);
      }
    }
  }

  if (!closed[static_cast<std::size_t>(t)]) {
    throw UnreachableError(fmt::format("no path from ({}, {}, {}) to ({}, {}, {})", start.x, start.y, start.z,
                                       goal.x, goal.y, goal.z));
  }
  std::vector<CellCoord> path;
  for (int n = t; n != s; n = parent[static_cast<std::size_t>(n)]) path.push_back(coord(n));
  return {path.rbegin(), path.rend()};
}

std::optional<std::vector<CellCoord>> path_to_nearest_cs(const CellCoord& start, const World& world,
                                                         ObstacleRule rule) {
  std::optional<std::vector<CellCoord>> best;
  for (const auto& cs : world.cs_cells) {
    const CellCoord goal{cs.x, cs.y, start.z};
    if (goal == start) return std::vector<CellCoord>{};
    try {
      auto path = astar_path(start, goal, world, rule);
      if (!best || path.size() < best->size()) best = std::move(path);
    } catch (const UnreachableError&) {
    }
  }
  return best;
}

double cruise_speed_for(double distance_m, double duration_s, double v_max_mps, double a_max_mps2) {
  // v^2 - a T v + a d = 0
  const double b = a_max_mps2 * duration_s;
  const double disc = b * b - 4.0 * a_max_mps2 * distance_m;
  if (disc < 0.0) {
    throw ConfigError(fmt::format("a {} m transit cannot finish in {} s at {} m/s^2", distance_m, duration_s,
                                  a_max_mps2));
  }
  const double v = (b - std::sqrt(disc)) / 2.0;
  if (v > v_max_mps) {
    throw ConfigError(fmt::format("cruise speed {:.3f} m/s needed per cell exceeds the {} m/s limit", v, v_max_mps));
  }
  return v;
}

KinematicLimits kinematic_limits(const ScenarioConfig& config) {
  KinematicLimits k;
  k.v_max_mps = config.uav.max_speed_mps;
  k.a_max_mps2 = config.uav.max_accel_mps2;
  k.v_cruise_mps =
      cruise_speed_for(config.cell_size_m, config.timing.iteration_seconds, k.v_max_mps, k.a_max_mps2);
  return k;
}

double transit_time(double distance_m, const KinematicLimits& limits) {
  if (distance_m < 0.0) throw std::invalid_argument("transit distance must be non-negative");
  const double v = limits.v_cruise_mps;
  const double a = limits.a_max_mps2;
  if (distance_m >= v * v / a) return distance_m / v + v / a;
  return 2.0 * std::sqrt(distance_m / a);
}

}  // namespace skyfleet
