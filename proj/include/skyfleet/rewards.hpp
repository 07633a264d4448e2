#pragma once

#include <array>

#include "skyfleet/config.hpp"
#include "skyfleet/types.hpp"

namespace skyfleet {

/// Service weight w_s and charging-cost weight w_c; they always sum to 1.
struct BatteryWeights {
  double service = 1.0;
  double cost = 0.0;
};

BatteryWeights battery_weights(double battery_min, double needed_min, const RewardParams& params);

/// Battery bin 0..4: (c1, max], (c2, c1], (c3, c2], (c4, c3], [0, c4].
int battery_bin(double battery_min, const RewardParams& params);
inline constexpr int kBatteryBins = 5;

/// Per-agent quantities the rewards read.
struct AgentServiceView {
  double battery_min = 0.0;
  double needed_battery_min = 0.0;
  int covered = 0;
  std::array<int, kServiceTypes> covered_by_service{};
};

/// Population totals used by the fair-share normalizers.
struct Population {
  int users = 0;
  int agents = 1;
  std::array<int, kServiceTypes> users_by_service{};
};

/// Covered users over the fair share U / N. Not clamped.
double reward_r1(int covered, int users, int agents);

/// n_B / B clamped to [0, 1]; 1 when the battery is empty.
double charging_cost(double needed_min, double battery_min);

double reward_r2(const AgentServiceView& agent, const Population& pop, const RewardParams& params);

/// Covered fraction of service `s` against its fair share U_s / N, in [0, 1].
double service_share(const AgentServiceView& agent, const Population& pop, ServiceType s);

double reward_r3(const AgentServiceView& agent, const Population& pop, const RewardParams& params);

enum class RewardKind { R1, R2, R3 };

/// R3 for multi-service battery-limited missions, R2 for battery-limited ones,
/// R1 otherwise.
RewardKind reward_kind(const ScenarioFlags& flags);

}  // namespace skyfleet
