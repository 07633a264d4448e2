#pragma once

#include <vector>

#include "skyfleet/config.hpp"
#include "skyfleet/scenario.hpp"

namespace skyfleet::testing {

/// Obstacle-free 2D config on a rows x cols grid with `users` users.
inline ScenarioConfig flat_config(int rows = 10, int cols = 10, int users = 14) {
  ScenarioConfig c;
  c.grid_rows = rows;
  c.grid_cols = cols;
  c.num_users = users;
  c.num_clusters = 1;
  c.obstacle_coverage = 0.0;
  c.cluster_radius_m = {240.0, 240.0};
  c.seed = 1;
  return c;
}

/// Empty world matching `config` with hand-placed stations; no users.
inline World blank_world(const ScenarioConfig& config, std::vector<CellCoord> stations = {}) {
  World w;
  w.rows = config.grid_rows;
  w.cols = config.grid_cols;
  w.cell_size_m = config.cell_size_m;
  w.altitude_levels = config.levels();
  w.level_height_m = config.flags.is_3d ? 30.0 : 0.0;
  w.building_height_m.assign(static_cast<std::size_t>(w.rows * w.cols), 0.0);
  w.cs_cells = std::move(stations);
  w.centroids = {{w.cols * w.cell_size_m / 2, w.rows * w.cell_size_m / 2}};
  w.cluster_radius_m = {240.0};
  return w;
}

inline User user_at(int id, const World& w, int x, int y, int demand = 10) {
  User u;
  u.id = id;
  u.pos_m = w.cell_center({x, y, 0});
  u.demand_iters = demand;
  u.bw_need_mhz = 1.0;
  return u;
}

}  // namespace skyfleet::testing
