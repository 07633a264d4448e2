#include "skyfleet/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"

namespace skyfleet {

namespace {

constexpr double kChargePerIteration = 10.0;

bool is_move(ActionId a) {
  return a == ActionId::Forward || a == ActionId::Backward || a == ActionId::Right || a == ActionId::Left ||
         a == ActionId::Up || a == ActionId::Down;
}

CellCoord moved(const CellCoord& c, ActionId a) {
  switch (a) {
    case ActionId::Forward: return {c.x, c.y + 1, c.z};
    case ActionId::Backward: return {c.x, c.y - 1, c.z};
    case ActionId::Right: return {c.x + 1, c.y, c.z};
    case ActionId::Left: return {c.x - 1, c.y, c.z};
    case ActionId::Up: return {c.x, c.y, c.z + 1};
    case ActionId::Down: return {c.x, c.y, c.z - 1};
    default: return c;
  }
}

}  // namespace

const char* to_string(ActionId a) {
  switch (a) {
    case ActionId::Forward: return "forward";
    case ActionId::Backward: return "backward";
    case ActionId::Right: return "right";
    case ActionId::Left: return "left";
    case ActionId::Hover: return "hover";
    case ActionId::Up: return "up";
    case ActionId::Down: return "down";
    case ActionId::GotoCs: return "goto_cs";
    case ActionId::Charge: return "charge";
  }
  return "hover";
}

const char* to_string(AgentMode m) {
  switch (m) {
    case AgentMode::Flying: return "flying";
    case AgentMode::ToCs: return "to_cs";
    case AgentMode::Charging: return "charging";
    case AgentMode::Crashed: return "crashed";
  }
  return "flying";
}

std::vector<ActionId> action_set(const ScenarioFlags& flags) {
  std::vector<ActionId> out{ActionId::Forward, ActionId::Backward, ActionId::Right, ActionId::Left, ActionId::Hover};
  if (flags.is_3d) {
    out.push_back(ActionId::Up);
    out.push_back(ActionId::Down);
  }
  if (flags.battery_limited) {
    out.push_back(ActionId::GotoCs);
    out.push_back(ActionId::Charge);
  }
  return out;
}

StateSpace::StateSpace(const ScenarioConfig& config)
    : representation_((config.flags.is_3d ? 3 : 1) + (config.flags.battery_limited ? 1 : 0)),
      cols_(config.grid_cols),
      rows_(config.grid_rows),
      levels_(config.levels()),
      bins_(config.flags.battery_limited ? kBatteryBins : 1) {}

StateSpace::Components StateSpace::unpack(int index) const {
  Components c;
  c.x = index % cols_;
  index /= cols_;
  c.y = index % rows_;
  index /= rows_;
  c.z = index % levels_;
  c.battery_bin = index / levels_;
  return c;
}

AgentService serve_users(const UavAgent& agent, const World& world, std::span<User> users,
                         const ScenarioConfig& config, std::int64_t now, std::vector<bool>& claimed,
                         std::vector<int>* covered_ids) {
  AgentService out;
  if (agent.mode != AgentMode::Flying) return out;

  const double budget =
      config.flags.bandwidth_limited ? agent.bandwidth_mhz : std::numeric_limits<double>::infinity();
  double used = 0.0;
  for (int i : users_in_footprint(agent.cell, world, users, config.uav.footprint_radius_m)) {
    auto& u = users[static_cast<std::size_t>(i)];
    if (claimed[static_cast<std::size_t>(i)] || !u.requesting(now)) continue;
    if (!u.completed()) {
      if (u.service == ServiceType::Throughput) {
        if (used + u.bw_need_mhz > budget) continue;
        used += u.bw_need_mhz;
      }
      ++u.served_iters;
      ++out.served;
      if (u.completed()) u.completion_iter = now;
    }
    claimed[static_cast<std::size_t>(i)] = true;
    ++out.covered;
    ++out.covered_by_service[static_cast<std::size_t>(u.service)];
    if (covered_ids) covered_ids->push_back(u.id);
  }
  return out;
}

double needed_battery(const UavAgent& agent, const World& world, const ScenarioConfig& config, ObstacleRule rule) {
  if (world.is_cs_column(agent.cell.x, agent.cell.y)) return 0.0;
  const auto path = path_to_nearest_cs(agent.cell, world, rule);
  if (!path) return config.uav.battery_minutes + 1.0;
  return static_cast<double>(path->size());
}

CellCoord observe_cell(const CellCoord& truth, const World& world, const ScenarioConfig& config, Rng& rng) {
  if (!config.flags.position_noise) return truth;
  auto jitter = [&](int v, int hi) {
    const bool shift = rng.bernoulli(config.noise.p_obs_error);
    const int sign = rng.bernoulli(0.5) ? 1 : -1;
    return shift ? std::clamp(v + sign, 0, hi - 1) : v;
  };
  CellCoord out = truth;
  out.x = jitter(truth.x, world.cols);
  out.y = jitter(truth.y, world.rows);
  return out;
}

void update_users(std::span<User> users, const World& world, const ScenarioConfig& config, std::int64_t now,
                  Rng& rng) {
  if (config.flags.users_move) {
    for (auto& u : users) {
      if (!rng.bernoulli(config.dynamics.p_user_move)) continue;
      const auto dir = static_cast<ActionId>(rng.below(4));
      const CellCoord target = moved(world.cell_of(u.pos_m), dir);
      if (!world.in_bounds(target)) continue;
      const Vec2 next = world.cell_center(target);
      const Vec2 centre = world.centroids[static_cast<std::size_t>(u.home_cluster)];
      if (std::hypot(next.x - centre.x, next.y - centre.y) >
          world.cluster_radius_m[static_cast<std::size_t>(u.home_cluster)]) {
        continue;
      }
      u.pos_m = next;
    }
  }
  if (config.flags.dynamic_requests) {
    for (auto& u : users) {
      if (!u.completed() || !rng.bernoulli(config.dynamics.p_request_arrival)) continue;
      u.served_iters = 0;
      u.completion_iter.reset();
      u.demand_iters = rng.between(config.dynamics.demand_range.low, config.dynamics.demand_range.high);
      // The new request is servable from the next iteration on.
      u.request_iter = now + 1;
    }
  }
}

Env::Env(Scenario scenario, EnvOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      states_(scenario_.config),
      actions_(action_set(scenario_.config.flags)),
      reward_kind_(reward_kind(scenario_.config.flags)),
      noise_rng_(scenario_.config.seed, Stream::Noise),
      dynamics_rng_(scenario_.config.seed, Stream::Dynamics) {
  validate(scenario_.config);
  kinematic_limits(scenario_.config);

  const auto& c = scenario_.config;
  agents_.resize(static_cast<std::size_t>(c.num_uavs));
  for (int i = 0; i < c.num_uavs; ++i) agents_[static_cast<std::size_t>(i)].id = i;
  population_.users = static_cast<int>(scenario_.users.size());
  population_.agents = c.num_uavs;
  for (const auto& u : scenario_.users) ++population_.users_by_service[static_cast<std::size_t>(u.service)];
}

std::vector<CellCoord> Env::start_cells() const {
  const auto& w = world();
  const int z = options_.start_at_top ? w.altitude_levels - 1 : 0;
  std::vector<std::pair<long, int>> order;
  for (int y = 0; y < w.rows; ++y) {
    for (int x = 0; x < w.cols; ++x) {
      const long dx = 2L * x - (w.cols - 1);
      const long dy = 2L * y - (w.rows - 1);
      order.emplace_back(dx * dx + dy * dy, w.index(x, y));
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<CellCoord> out;
  for (const auto& [d, idx] : order) {
    const CellCoord c{idx % w.cols, idx / w.cols, z};
    if (options_.obstacle_rule == ObstacleRule::Buildings && is_blocked(c, w)) continue;
    out.push_back(c);
    if (static_cast<int>(out.size()) == config().num_uavs) break;
  }
  if (static_cast<int>(out.size()) < config().num_uavs) {
    throw ConfigError(fmt::format("only {} free start cells for {} UAVs", out.size(), config().num_uavs));
  }
  return out;
}

void Env::place_agents_at_start() {
  const auto cells = start_cells();
  for (auto& a : agents_) {
    a.cell = cells[static_cast<std::size_t>(a.id)];
    a.battery_min = config().uav.battery_minutes;
    a.mode = AgentMode::Flying;
    a.committed_path.clear();
    a.bandwidth_mhz = config().uav.bandwidth_mhz;
    a.charged_min = 0.0;
    a.paid_actions = 0;
  }
}

void Env::revive(UavAgent& a) {
  const auto& w = world();
  if (!w.cs_cells.empty()) {
    const CellCoord* best = nullptr;
    long best_d2 = 0;
    for (const auto& cs : w.cs_cells) {
      const long d2 = static_cast<long>(cs.x - a.cell.x) * (cs.x - a.cell.x) +
                      static_cast<long>(cs.y - a.cell.y) * (cs.y - a.cell.y);
      if (!best || d2 < best_d2) {
        best = &cs;
        best_d2 = d2;
      }
    }
    a.cell = {best->x, best->y, a.cell.z};
  }
  a.battery_min = config().uav.battery_minutes;
  a.mode = AgentMode::Flying;
  a.committed_path.clear();
}

void Env::crash(UavAgent& a) {
  a.mode = AgentMode::Crashed;
  a.committed_path.clear();
  ++crashes_;
}

int Env::state_of(const UavAgent& a, const CellCoord& reported) const {
  StateSpace::Components c;
  c.x = reported.x;
  c.y = reported.y;
  c.z = config().flags.is_3d ? reported.z : 0;
  c.battery_bin = config().flags.battery_limited ? battery_bin(a.battery_min, config().reward_params) : 0;
  return states_.pack(c);
}

int Env::observe(const UavAgent& a, CellCoord* reported) {
  const CellCoord cell = observe_cell(a.cell, world(), config(), noise_rng_);
  if (reported) *reported = cell;
  return state_of(a, cell);
}

std::vector<int> Env::reset(int /*epoch_index*/) {
  coverage_log_.clear();
  epoch_start_ = now_;
  if (!started_ || is_static()) {
    if (is_static()) {
      for (auto& u : scenario_.users) {
        u.served_iters = 0;
        u.completion_iter.reset();
        u.request_iter = now_;
      }
    }
    place_agents_at_start();
    started_ = true;
  } else {
    for (auto& a : agents_) {
      if (a.mode == AgentMode::Crashed) revive(a);
      a.charged_min = 0.0;
      a.paid_actions = 0;
    }
  }
  std::vector<int> obs;
  for (const auto& a : agents_) obs.push_back(a.mode == AgentMode::Crashed ? -1 : observe(a, nullptr));
  return obs;
}

ActionId Env::resolve(UavAgent& a, ActionId requested) {
  if (a.mode == AgentMode::ToCs) return ActionId::GotoCs;
  if (a.mode == AgentMode::Charging) return ActionId::Charge;

  const auto& c = config();
  const bool offered = std::find(actions_.begin(), actions_.end(), requested) != actions_.end();
  if (!offered) {
    ++invalid_actions_;
    return ActionId::Hover;
  }
  if (requested == ActionId::Charge) {
    if (!world().is_cs_column(a.cell.x, a.cell.y)) {
      ++invalid_actions_;
      return ActionId::Hover;
    }
    return a.battery_min < c.uav.battery_minutes ? ActionId::Charge : ActionId::Hover;
  }
  if (requested == ActionId::GotoCs) {
    auto path = path_to_nearest_cs(a.cell, world(), options_.obstacle_rule);
    if (!path) {
      ++invalid_actions_;
      return ActionId::Hover;
    }
    if (path->empty()) return a.battery_min < c.uav.battery_minutes ? ActionId::Charge : ActionId::Hover;
    a.committed_path = std::move(*path);
    a.mode = AgentMode::ToCs;
    return ActionId::GotoCs;
  }
  return requested;
}

void Env::apply(UavAgent& a, ActionId effective, bool& crashed) {
  const auto& c = config();
  if (is_move(effective)) {
    const CellCoord target = moved(a.cell, effective);
    if (world().in_bounds(target)) {
      if (options_.obstacle_rule == ObstacleRule::Buildings && is_blocked(target, world())) {
        crash(a);
        crashed = true;
        return;
      }
      a.cell = target;
    }
  } else if (effective == ActionId::GotoCs) {
    a.cell = a.committed_path.front();
    a.committed_path.erase(a.committed_path.begin());
  }

  if (!c.flags.battery_limited) return;
  const double full = c.uav.battery_minutes;
  if (effective == ActionId::Charge) {
    const double gain = std::min(kChargePerIteration, full - a.battery_min);
    a.battery_min += gain;
    a.charged_min += gain;
    a.mode = a.battery_min >= full ? AgentMode::Flying : AgentMode::Charging;
    return;
  }
  a.battery_min -= 1.0;
  ++a.paid_actions;
  if (a.mode == AgentMode::ToCs && a.committed_path.empty()) {
    a.mode = a.battery_min < full ? AgentMode::Charging : AgentMode::Flying;
  }
  if (a.battery_min <= 0.0) {
    a.battery_min = 0.0;
    if (world().is_cs_column(a.cell.x, a.cell.y)) {
      a.committed_path.clear();
      a.mode = AgentMode::Charging;
    } else {
      crash(a);
      crashed = true;
    }
  }
}

double Env::reward_for(const UavAgent& a, const AgentService& s) const {
  if (a.mode == AgentMode::Crashed) return 0.0;
  if (reward_kind_ == RewardKind::R1) return reward_r1(s.covered, population_.users, population_.agents);
  AgentServiceView view;
  view.battery_min = a.battery_min;
  view.needed_battery_min = needed_battery(a, world(), config(), options_.obstacle_rule);
  view.covered = s.covered;
  view.covered_by_service = s.covered_by_service;
  return reward_kind_ == RewardKind::R2 ? reward_r2(view, population_, config().reward_params)
                                        : reward_r3(view, population_, config().reward_params);
}

StepOutcome Env::step(std::span<const ActionId> requested) {
  if (!started_) throw std::logic_error("Env::step called before reset");
  if (requested.size() != agents_.size()) {
    throw std::invalid_argument(
        fmt::format("expected {} actions, got {}", agents_.size(), requested.size()));
  }

  StepOutcome out;
  out.iteration = now_;
  out.agents.resize(agents_.size());
  for (auto& a : agents_) {
    auto& rec = out.agents[static_cast<std::size_t>(a.id)];
    rec.requested = requested[static_cast<std::size_t>(a.id)];
    if (a.mode == AgentMode::Crashed) continue;
    rec.effective = resolve(a, rec.requested);
    apply(a, rec.effective, rec.crashed);
  }

  std::vector<bool> claimed(scenario_.users.size(), false);
  out.stats.per_agent.resize(agents_.size());
  for (const auto& a : agents_) {
    const auto s = serve_users(a, world(), scenario_.users, config(), now_, claimed, &out.stats.covered_ids);
    out.stats.per_agent[static_cast<std::size_t>(a.id)] = s;
    out.stats.covered += s.covered;
    out.stats.served += s.served;
    for (int k = 0; k < kServiceTypes; ++k) {
      out.stats.covered_by_service[static_cast<std::size_t>(k)] += s.covered_by_service[static_cast<std::size_t>(k)];
    }
  }
  std::sort(out.stats.covered_ids.begin(), out.stats.covered_ids.end());

  for (const auto& a : agents_) {
    out.agents[static_cast<std::size_t>(a.id)].reward =
        reward_for(a, out.stats.per_agent[static_cast<std::size_t>(a.id)]);
  }

  if (config().flags.users_move || config().flags.dynamic_requests) {
    update_users(scenario_.users, world(), config(), now_, dynamics_rng_);
  }
  coverage_log_.push_back(out.stats.covered_ids);

  ++now_;
  out.epoch_done = now_ % config().timing.epoch_iterations == 0;
  for (const auto& a : agents_) {
    auto& rec = out.agents[static_cast<std::size_t>(a.id)];
    if (a.mode == AgentMode::Crashed) {
      rec.next_state = -1;
      rec.observed_cell = a.cell;
    } else {
      rec.next_state = observe(a, &rec.observed_cell);
    }
  }
  return out;
}

}  // namespace skyfleet
