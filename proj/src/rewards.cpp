#include "skyfleet/rewards.hpp"

#include <algorithm>

namespace skyfleet {

BatteryWeights battery_weights(double b, double needed, const RewardParams& p) {
  if (b <= needed) return {0.0, 1.0};
  if (b > p.c1) return {1.0, 0.0};
  const double second_low = p.eq34_typo_fix ? p.c2 : p.c1;
  if (b > second_low && b <= p.c1) return {0.8, 0.2};
  if (b > p.c3 && b <= p.c2) return {0.5, 0.5};
  if (b > p.c4 && b <= p.c3) return {0.2, 0.8};
  return {0.0, 1.0};
}

int battery_bin(double b, const RewardParams& p) {
  if (b > p.c1) return 0;
  if (b > p.c2) return 1;
  if (b > p.c3) return 2;
  if (b > p.c4) return 3;
  return 4;
}

double reward_r1(int covered, int users, int agents) {
  if (users <= 0 || agents <= 0) return 0.0;
  return covered / (static_cast<double>(users) / agents);
}

double charging_cost(double needed, double b) {
  if (b <= 0.0) return 1.0;
  return std::clamp(needed / b, 0.0, 1.0);
}

double reward_r2(const AgentServiceView& a, const Population& pop, const RewardParams& p) {
  const auto w = battery_weights(a.battery_min, a.needed_battery_min, p);
  const double r_u = reward_r1(a.covered, pop.users, pop.agents);
  return w.service * r_u + w.cost * charging_cost(a.needed_battery_min, a.battery_min);
}

double service_share(const AgentServiceView& a, const Population& pop, ServiceType s) {
  const auto i = static_cast<std::size_t>(s);
  if (pop.users_by_service[i] == 0) return 0.0;
  const double fair = static_cast<double>(pop.users_by_service[i]) / pop.agents;
  return std::clamp(a.covered_by_service[i] / fair, 0.0, 1.0);
}

double reward_r3(const AgentServiceView& a, const Population& pop, const RewardParams& p) {
  const auto w = battery_weights(a.battery_min, a.needed_battery_min, p);
  const double r_u = reward_r1(a.covered, pop.users, pop.agents);
  const double service = p.w_u * r_u + p.w_tr * service_share(a, pop, ServiceType::Throughput) +
                         p.w_ec * service_share(a, pop, ServiceType::EdgeComputing) +
                         p.w_dg * service_share(a, pop, ServiceType::DataGathering);
  const double cost = charging_cost(a.needed_battery_min, a.battery_min) + p.r_cs_const;
  return w.service * service + w.cost * cost;
}

RewardKind reward_kind(const ScenarioFlags& flags) {
  if (flags.battery_limited && flags.multi_service) return RewardKind::R3;
  if (flags.battery_limited) return RewardKind::R2;
  return RewardKind::R1;
}

}  // namespace skyfleet
