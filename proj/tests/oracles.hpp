#pragma once

// Reference implementations written directly from the model definitions,
// without calling the library code they check.

#include <array>
#include <cmath>
#include <deque>
#include <vector>

#include "skyfleet/scenario.hpp"

namespace skyfleet::oracle {

/// Band check straight from the heights: level z spans [z h, (z+1) h).
inline bool band_blocked(const World& w, int x, int y, int z) {
  if (w.level_height_m <= 0.0) return false;
  return w.building_height_m[static_cast<std::size_t>(y * w.cols + x)] >= (z + 1) * w.level_height_m;
}

/// Breadth-first shortest move count, -1 when unreachable.
inline int bfs_distance(const World& w, const CellCoord& from, const CellCoord& to, bool ignore_buildings = false) {
  const int L = w.altitude_levels;
  auto id = [&](int x, int y, int z) { return (z * w.rows + y) * w.cols + x; };
  std::vector<int> dist(static_cast<std::size_t>(w.rows * w.cols * L), -1);
  std::deque<CellCoord> q;
  dist[static_cast<std::size_t>(id(from.x, from.y, from.z))] = 0;
  q.push_back(from);
  constexpr std::array<std::array<int, 3>, 6> moves{{{0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1}}};
  while (!q.empty()) {
    const auto c = q.front();
    q.pop_front();
    if (c.x == to.x && c.y == to.y && c.z == to.z) return dist[static_cast<std::size_t>(id(c.x, c.y, c.z))];
    for (const auto& m : moves) {
      const int x = c.x + m[0], y = c.y + m[1], z = c.z + m[2];
      if (x < 0 || y < 0 || z < 0 || x >= w.cols || y >= w.rows || z >= L) continue;
      if (!ignore_buildings && band_blocked(w, x, y, z)) continue;
      auto& d = dist[static_cast<std::size_t>(id(x, y, z))];
      if (d >= 0) continue;
      d = dist[static_cast<std::size_t>(id(c.x, c.y, c.z))] + 1;
      q.push_back({x, y, z});
    }
  }
  return -1;
}

/// Trapezoid / triangle transit time evaluated directly.
inline double transit_seconds(double d, double v, double a) {
  if (d <= 0.0) return 0.0;
  if (d >= v * v / a) return d / v + v / a;
  return 2.0 * std::sqrt(d / a);
}

/// Smaller root of v^2/a - T v + d = 0 by the quadratic formula.
inline double cruise_root(double d, double T, double a) {
  const double disc = T * T - 4.0 * d / a;
  return (T - std::sqrt(disc)) * a / 2.0;
}

}  // namespace skyfleet::oracle
