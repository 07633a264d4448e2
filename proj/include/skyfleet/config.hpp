#pragma once

#include <cstdint>
#include <string>

namespace skyfleet {

struct RealRange {
  double low = 0.0;
  double high = 0.0;
};

struct IntRange {
  int low = 0;
  int high = 0;
};

/// The seven configuration axes of a mission.
struct ScenarioFlags {
  bool is_3d = false;
  bool battery_limited = false;
  bool bandwidth_limited = false;
  bool dynamic_requests = false;
  bool users_move = false;
  bool multi_service = false;
  bool position_noise = false;
};

struct UavParams {
  double max_speed_mps = 8.3;
  double max_accel_mps2 = 4.0;
  double footprint_radius_m = 600.0;
  double battery_minutes = 30.0;
  double bandwidth_mhz = 5.0;
};

struct TimingParams {
  double iteration_seconds = 60.0;
  int epoch_iterations = 30;
};

/// Battery thresholds c1 > c2 > c3 > c4 (minutes) and the service weights of
/// the multi-service reward.
struct RewardParams {
  double c1 = 24.0;
  double c2 = 18.0;
  double c3 = 12.0;
  double c4 = 6.0;
  double w_u = 0.4;
  double w_tr = 0.2;
  double w_ec = 0.2;
  double w_dg = 0.2;
  double r_cs_const = 0.0;
  /// Read the second weight branch as c2 < B <= c1. When false the branch is
  /// taken literally as c1 < B <= c1, which is empty.
  bool eq34_typo_fix = true;
};

enum class QTableInit { Zero, Random, MaxReward, Prior };

struct RlParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Linear decay length in epochs; negative means 80% of training_epochs.
  int epsilon_decay_epochs = -1;
  QTableInit qtable_init = QTableInit::Random;
  std::string prior_path;
  int training_epochs = 2000;
};

struct NoiseParams {
  double p_obs_error = 0.1;
};

struct DynamicsParams {
  double p_user_move = 0.2;
  double p_request_arrival = 0.05;
  IntRange demand_range{1, 10};
  double tr_bandwidth_per_user_mhz = 1.0;
};

struct ScenarioConfig {
  /// Preset id 1..9, or 0 for a hand-written config.
  int case_id = 0;

  int grid_rows = 10;
  int grid_cols = 10;
  double cell_size_m = 240.0;

  int num_uavs = 1;
  int num_users = 14;
  int num_clusters = 1;
  int num_cs = 0;
  int num_services = 1;

  RealRange cluster_radius_m{240.0, 480.0};
  double obstacle_coverage = 0.0;
  double max_building_height_m = 120.0;

  int altitude_levels = 4;
  /// Non-positive means max_building_height_m / altitude_levels.
  double level_height_m = 0.0;

  ScenarioFlags flags;
  UavParams uav;
  TimingParams timing;
  RewardParams reward_params;
  RlParams rl;
  NoiseParams noise;
  DynamicsParams dynamics;

  std::uint64_t seed = 0;

  int cell_count() const { return grid_rows * grid_cols; }
  /// Altitude levels actually in use (1 in 2D).
  int levels() const { return flags.is_3d ? altitude_levels : 1; }
  double configured_level_height() const;
  double map_width_m() const { return grid_cols * cell_size_m; }
  double map_height_m() const { return grid_rows * cell_size_m; }
  int epsilon_decay_epochs() const;
  /// Number of cells that receive a building.
  int obstacle_count() const;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const ScenarioConfig& config);

const char* to_string(QTableInit init);
QTableInit qtable_init_from_string(const std::string& name);

}  // namespace skyfleet
