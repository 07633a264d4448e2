#include "skyfleet/config.hpp"

#include <cmath>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"

namespace skyfleet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid scenario config: " + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

double ScenarioConfig::configured_level_height() const {
  if (level_height_m > 0.0) return level_height_m;
  return max_building_height_m / static_cast<double>(altitude_levels);
}

int ScenarioConfig::epsilon_decay_epochs() const {
  if (rl.epsilon_decay_epochs >= 0) return rl.epsilon_decay_epochs;
  return static_cast<int>(std::lround(0.8 * rl.training_epochs));
}

int ScenarioConfig::obstacle_count() const {
  return static_cast<int>(std::lround(obstacle_coverage * cell_count()));
}

void validate(const ScenarioConfig& c) {
  require(c.grid_rows > 0 && c.grid_cols > 0, "grid_rows and grid_cols must be positive");
  require(c.cell_size_m > 0.0, "cell_size_m must be positive");
  require(c.num_uavs > 0, "num_uavs must be positive");
  require(c.num_users > 0, "num_users must be positive");
  require(c.num_clusters > 0, "num_clusters must be positive");
  require(c.num_cs >= 0, "num_cs must be non-negative");
  require(c.num_cs <= c.cell_count(),
          fmt::format("num_cs = {} exceeds the {} cells of the grid", c.num_cs, c.cell_count()));
  require(c.num_services == 1 || c.num_services == 3, "num_services must be 1 or 3");
  require((c.num_services == 3) == c.flags.multi_service,
          "num_services must be 3 exactly when multi_service is set");
  require(c.cluster_radius_m.low >= 0.0 && c.cluster_radius_m.low <= c.cluster_radius_m.high,
          "cluster_radius_m must satisfy 0 <= low <= high");
  require(is_probability(c.obstacle_coverage), "obstacle_coverage must lie in [0, 1]");
  require(c.max_building_height_m >= 0.0, "max_building_height_m must be non-negative");
  require(c.obstacle_coverage == 0.0 || c.max_building_height_m > 0.0,
          "obstacles need a positive max_building_height_m");
  require(c.altitude_levels > 0, "altitude_levels must be positive");
  require(!c.flags.is_3d || c.configured_level_height() > 0.0, "level height must be positive in 3D");
  require(!c.flags.battery_limited || c.num_cs >= 1, "battery_limited requires at least one charging station");

  const int eligible = c.cell_count() - c.num_cs - c.num_clusters;
  require(c.obstacle_count() <= eligible,
          fmt::format("obstacle budget {} exceeds the {} cells left after charging stations and cluster centroids",
                      c.obstacle_count(), eligible < 0 ? 0 : eligible));

  require(c.uav.max_speed_mps > 0.0 && c.uav.max_accel_mps2 > 0.0, "UAV kinematic limits must be positive");
  require(c.uav.footprint_radius_m >= 0.0, "footprint_radius_m must be non-negative");
  require(c.uav.battery_minutes > 0.0, "battery_minutes must be positive");
  require(!c.flags.bandwidth_limited || c.uav.bandwidth_mhz > 0.0, "bandwidth_mhz must be positive when limited");
  require(c.timing.iteration_seconds > 0.0 && c.timing.epoch_iterations > 0, "timing values must be positive");

  const auto& r = c.reward_params;
  require(c.uav.battery_minutes >= r.c1 && r.c1 > r.c2 && r.c2 > r.c3 && r.c3 > r.c4 && r.c4 > 0.0,
          "battery thresholds must satisfy battery_minutes >= c1 > c2 > c3 > c4 > 0");
  require(r.w_u >= 0.0 && r.w_tr >= 0.0 && r.w_ec >= 0.0 && r.w_dg >= 0.0, "service weights must be non-negative");
  require(std::abs(r.w_u + r.w_tr + r.w_ec + r.w_dg - 1.0) < 1e-9, "service weights must sum to 1");
  require(r.r_cs_const >= 0.0, "r_cs_const must be non-negative");

  require(c.rl.alpha > 0.0 && c.rl.alpha <= 1.0, "alpha must lie in (0, 1]");
  require(c.rl.gamma >= 0.0 && c.rl.gamma < 1.0, "gamma must lie in [0, 1)");
  require(c.rl.epsilon_start <= 1.0 && c.rl.epsilon_start >= c.rl.epsilon_end && c.rl.epsilon_end >= 0.0,
          "epsilon schedule must satisfy 1 >= start >= end >= 0");
  require(c.rl.training_epochs >= 0, "training_epochs must be non-negative");
  require(c.rl.qtable_init != QTableInit::Prior || !c.rl.prior_path.empty(),
          "prior initialization needs rl.prior_path");

  require(is_probability(c.noise.p_obs_error), "p_obs_error must lie in [0, 1]");
  require(is_probability(c.dynamics.p_user_move), "p_user_move must lie in [0, 1]");
  require(is_probability(c.dynamics.p_request_arrival), "p_request_arrival must lie in [0, 1]");
  require(!c.flags.dynamic_requests || c.dynamics.p_request_arrival > 0.0,
          "dynamic_requests needs p_request_arrival > 0");
  require(c.dynamics.demand_range.low >= 1 && c.dynamics.demand_range.low <= c.dynamics.demand_range.high,
          "demand_range must satisfy 1 <= low <= high");
  require(c.dynamics.tr_bandwidth_per_user_mhz >= 0.0, "tr_bandwidth_per_user_mhz must be non-negative");
}

const char* to_string(QTableInit init) {
  switch (init) {
    case QTableInit::Zero: return "zero";
    case QTableInit::Random: return "random";
    case QTableInit::MaxReward: return "max_reward";
    case QTableInit::Prior: return "prior";
  }
  return "random";
}

QTableInit qtable_init_from_string(const std::string& name) {
  if (name == "zero") return QTableInit::Zero;
  if (name == "random") return QTableInit::Random;
  if (name == "max_reward") return QTableInit::MaxReward;
  if (name == "prior") return QTableInit::Prior;
  throw ConfigError("unknown qtable_init strategy '" + name + "'");
}

}  // namespace skyfleet
