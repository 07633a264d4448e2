#include "skyfleet/presets.hpp"

#include <array>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"

namespace skyfleet {

namespace {

struct CaseRow {
  bool is_3d;
  bool bandwidth_limited;
  bool battery_limited;
  int uavs;
  int clusters;
  int users_qlearning;
  int users_sarsa;
  int stations;
  bool dynamic_requests;
  bool multi_service;
  bool users_move;
  bool position_noise;
};

// Case 4 lists "3-24" users; 23 is used for both algorithms.
constexpr std::array<CaseRow, kPresetCount> kCases{{
    {false, false, false, 1, 1, 14, 14, 0, false, false, false, false},
    {false, false, false, 2, 2, 19, 20, 0, false, false, false, false},
    {false, false, false, 2, 3, 35, 33, 0, false, false, false, false},
    {false, false, true, 2, 3, 23, 23, 2, false, false, false, false},
    {true, false, true, 2, 2, 21, 24, 2, false, false, false, false},
    {true, true, true, 2, 2, 21, 27, 2, false, true, false, false},
    {true, true, true, 2, 3, 41, 36, 2, false, true, false, false},
    {true, true, true, 3, 4, 48, 48, 3, true, true, true, false},
    {true, true, true, 3, 4, 48, 48, 3, true, true, true, true},
}};

}  // namespace

ScenarioConfig case_preset(int case_id, std::uint64_t seed, UsersVariant variant) {
  if (case_id < 1 || case_id > kPresetCount) {
    throw ConfigError(fmt::format("case id must be 1..{}, got {}", kPresetCount, case_id));
  }
  const CaseRow& row = kCases[static_cast<std::size_t>(case_id - 1)];

  ScenarioConfig c;
  c.case_id = case_id;
  c.seed = seed;
  c.num_uavs = row.uavs;
  c.num_clusters = row.clusters;
  c.num_users = variant == UsersVariant::QLearning ? row.users_qlearning : row.users_sarsa;
  c.num_cs = row.stations;
  c.flags.is_3d = row.is_3d;
  c.flags.bandwidth_limited = row.bandwidth_limited;
  c.flags.battery_limited = row.battery_limited;
  c.flags.dynamic_requests = row.dynamic_requests;
  c.flags.multi_service = row.multi_service;
  c.flags.users_move = row.users_move;
  c.flags.position_noise = row.position_noise;
  c.num_services = row.multi_service ? 3 : 1;
  c.altitude_levels = row.is_3d ? 4 : 1;
  c.obstacle_coverage = 0.2;
  c.max_building_height_m = 120.0;
  c.level_height_m = 0.0;
  validate(c);
  return c;
}

}  // namespace skyfleet
