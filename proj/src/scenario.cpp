#include "skyfleet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"
#include "skyfleet/rng.hpp"

namespace skyfleet {

const char* to_string(ServiceType s) {
  switch (s) {
    case ServiceType::Throughput: return "throughput";
    case ServiceType::EdgeComputing: return "edge_computing";
    case ServiceType::DataGathering: return "data_gathering";
  }
  return "throughput";
}

CellCoord World::cell_of(const Vec2& p) const {
  const int x = std::clamp(static_cast<int>(std::floor(p.x / cell_size_m)), 0, cols - 1);
  const int y = std::clamp(static_cast<int>(std::floor(p.y / cell_size_m)), 0, rows - 1);
  return {x, y, 0};
}

bool World::is_cs_column(int x, int y) const {
  return std::any_of(cs_cells.begin(), cs_cells.end(), [&](const CellCoord& c) { return c.x == x && c.y == y; });
}

int World::building_count() const {
  return static_cast<int>(std::count_if(building_height_m.begin(), building_height_m.end(),
                                        [](double h) { return h > 0.0; }));
}

namespace {

// Nearest integer with exact halves going to the lower index. Values within
// 1e-9 of a half are treated as the half so trig round-off cannot flip ties.
int round_half_down(double v) {
  double shifted = v - 0.5;
  const double nearest = std::round(shifted);
  if (std::abs(shifted - nearest) < 1e-9) shifted = nearest;
  return static_cast<int>(std::ceil(shifted));
}

}  // namespace

std::vector<CellCoord> place_charging_stations(const ScenarioConfig& config) {
  const int m = config.num_cs;
  const int rows = config.grid_rows;
  const int cols = config.grid_cols;
  if (m < 1) throw ConfigError("place_charging_stations needs at least one station");
  if (m > rows * cols) {
    throw ConfigError(fmt::format("cannot place {} charging stations on {} cells", m, rows * cols));
  }

  const double cx = (cols - 1) / 2.0;
  const double cy = (rows - 1) / 2.0;
  const double ring = config.map_width_m() / 4.0 / config.cell_size_m;

  std::vector<bool> taken(static_cast<std::size_t>(rows * cols), false);
  std::vector<CellCoord> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / m;
    int x = std::clamp(round_half_down(cx + ring * std::cos(theta)), 0, cols - 1);
    int y = std::clamp(round_half_down(cy + ring * std::sin(theta)), 0, rows - 1);
    if (taken[static_cast<std::size_t>(y * cols + x)]) {
      // Nearest free cell by Euclidean distance; row-major order breaks ties.
      int best = -1;
      long best_d2 = 0;
      for (int yy = 0; yy < rows; ++yy) {
        for (int xx = 0; xx < cols; ++xx) {
          if (taken[static_cast<std::size_t>(yy * cols + xx)]) continue;
          const long d2 = static_cast<long>(xx - x) * (xx - x) + static_cast<long>(yy - y) * (yy - y);
          if (best < 0 || d2 < best_d2) {
            best = yy * cols + xx;
            best_d2 = d2;
          }
        }
      }
      x = best % cols;
      y = best / cols;
    }
    taken[static_cast<std::size_t>(y * cols + x)] = true;
    out.push_back({x, y, 0});
  }
  return out;
}

World generate_world(const ScenarioConfig& config) {
  validate(config);

  World w;
  w.rows = config.grid_rows;
  w.cols = config.grid_cols;
  w.cell_size_m = config.cell_size_m;
  w.altitude_levels = config.levels();
  w.building_height_m.assign(static_cast<std::size_t>(w.cell_count()), 0.0);
  if (config.num_cs > 0) w.cs_cells = place_charging_stations(config);

  Rng rng(config.seed, Stream::World);
  for (int c = 0; c < config.num_clusters; ++c) {
    const double x = rng.uniform(0.0, config.map_width_m());
    const double y = rng.uniform(0.0, config.map_height_m());
    w.centroids.push_back({x, y});
  }
  for (int c = 0; c < config.num_clusters; ++c) {
    w.cluster_radius_m.push_back(rng.uniform(config.cluster_radius_m.low, config.cluster_radius_m.high));
  }

  std::vector<bool> excluded(static_cast<std::size_t>(w.cell_count()), false);
  for (const auto& cs : w.cs_cells) excluded[static_cast<std::size_t>(w.index(cs.x, cs.y))] = true;
  for (const auto& p : w.centroids) {
    const auto cell = w.cell_of(p);
    excluded[static_cast<std::size_t>(w.index(cell.x, cell.y))] = true;
  }
  std::vector<int> eligible;
  for (int i = 0; i < w.cell_count(); ++i) {
    if (!excluded[static_cast<std::size_t>(i)]) eligible.push_back(i);
  }

  const int budget = config.obstacle_count();
  if (budget > static_cast<int>(eligible.size())) {
    throw ConfigError(fmt::format("obstacle budget {} exceeds the {} eligible cells", budget, eligible.size()));
  }
  // Partial Fisher-Yates: the first `budget` slots become buildings.
  for (int i = 0; i < budget; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(eligible.size() - static_cast<std::size_t>(i));
    std::swap(eligible[static_cast<std::size_t>(i)], eligible[j]);
    const double h = config.max_building_height_m * (1.0 - rng.uniform());
    w.building_height_m[static_cast<std::size_t>(eligible[static_cast<std::size_t>(i)])] = h;
    w.tallest_building_m = std::max(w.tallest_building_m, h);
  }

  w.level_height_m = config.flags.is_3d ? config.configured_level_height() : 0.0;
  if (config.flags.is_3d && w.tallest_building_m > 0.0 &&
      w.altitude_levels * w.level_height_m > w.tallest_building_m) {
    // No level may sit entirely above the tallest building.
    w.level_height_m = w.tallest_building_m / w.altitude_levels;
  }
  return w;
}

std::vector<User> sample_users(const ScenarioConfig& config, const World& world) {
  Rng rng(config.seed, Stream::Users);
  Rng arrivals(config.seed, Stream::Users, 1);
  const double width = config.map_width_m();
  const double height = config.map_height_m();

  std::vector<User> users;
  users.reserve(static_cast<std::size_t>(config.num_users));
  for (int i = 0; i < config.num_users; ++i) {
    User u;
    u.id = i;
    u.home_cluster = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.num_clusters)));
    const Vec2 centre = world.centroids[static_cast<std::size_t>(u.home_cluster)];
    const double radius = world.cluster_radius_m[static_cast<std::size_t>(u.home_cluster)];
    const double sigma = radius / 2.0;

    Vec2 p{};
    bool accepted = false;
    for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
      p = {centre.x + sigma * rng.normal(), centre.y + sigma * rng.normal()};
      const double d = std::hypot(p.x - centre.x, p.y - centre.y);
      accepted = d <= radius && p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
    if (!accepted) {
      const double d = std::hypot(p.x - centre.x, p.y - centre.y);
      if (d > radius) {
        p = {centre.x + (p.x - centre.x) * radius / d, centre.y + (p.y - centre.y) * radius / d};
      }
      p = {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
    }
    u.pos_m = p;

    const auto service = static_cast<ServiceType>(rng.below(kServiceTypes));
    u.service = config.flags.multi_service ? service : ServiceType::Throughput;
    u.demand_iters = rng.between(config.dynamics.demand_range.low, config.dynamics.demand_range.high);
    u.bw_need_mhz = u.service == ServiceType::Throughput ? config.dynamics.tr_bandwidth_per_user_mhz : 0.0;
    if (config.flags.dynamic_requests) {
      std::int64_t first = 0;
      while (!arrivals.bernoulli(config.dynamics.p_request_arrival)) ++first;
      u.request_iter = first;
    }
    users.push_back(u);
  }
  return users;
}

Scenario generate_scenario(const ScenarioConfig& config) {
  Scenario s;
  s.config = config;
  s.world = generate_world(config);
  s.users = sample_users(config, s.world);
  return s;
}

}  // namespace skyfleet
