#pragma once

#include <vector>

#include "skyfleet/config.hpp"
#include "skyfleet/types.hpp"

namespace skyfleet {

/// Static scene generated from a config. Heights are stored row-major.
struct World {
  int rows = 0;
  int cols = 0;
  double cell_size_m = 0.0;
  int altitude_levels = 1;
  double level_height_m = 0.0;

  std::vector<double> building_height_m;
  std::vector<CellCoord> cs_cells;
  std::vector<Vec2> centroids;
  std::vector<double> cluster_radius_m;
  double tallest_building_m = 0.0;

  int cell_count() const { return rows * cols; }
  int index(int x, int y) const { return y * cols + x; }
  double height_at(int x, int y) const { return building_height_m[static_cast<std::size_t>(index(x, y))]; }
  bool in_bounds(const CellCoord& c) const {
    return c.x >= 0 && c.x < cols && c.y >= 0 && c.y < rows && c.z >= 0 && c.z < altitude_levels;
  }
  Vec2 cell_center(const CellCoord& c) const {
    return {(c.x + 0.5) * cell_size_m, (c.y + 0.5) * cell_size_m};
  }
  CellCoord cell_of(const Vec2& p) const;
  bool is_cs_column(int x, int y) const;
  int building_count() const;

  friend bool operator==(const World&, const World&) = default;
};

/// A generated world together with its user population.
struct Scenario {
  ScenarioConfig config;
  World world;
  std::vector<User> users;
};

/// Charging-station cells on a ring of radius map_width / 4 around the map
/// center. Requires 1 <= num_cs <= cell count.
std::vector<CellCoord> place_charging_stations(const ScenarioConfig& config);

World generate_world(const ScenarioConfig& config);

std::vector<User> sample_users(const ScenarioConfig& config, const World& world);

/// generate_world followed by sample_users.
Scenario generate_scenario(const ScenarioConfig& config);

}  // namespace skyfleet
