#include "skyfleet/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace skyfleet {

const char* to_string(BaselineRole r) {
  switch (r) {
    case BaselineRole::Square: return "square";
    case BaselineRole::YSweep: return "y_sweep";
    case BaselineRole::XSweep: return "x_sweep";
  }
  return "square";
}

BaselineRole baseline_role(int agent_id) { return static_cast<BaselineRole>(agent_id % 3); }

std::vector<CellCoord> square_ring(int rows, int cols) {
  const int x0 = std::min(2, (cols - 1) / 2);
  const int y0 = std::min(2, (rows - 1) / 2);
  const int x1 = std::max(cols - 3, x0);
  const int y1 = std::max(rows - 3, y0);

  std::vector<CellCoord> ring;
  auto add = [&](int x, int y) {
    const CellCoord c{x, y, 0};
    if (std::find(ring.begin(), ring.end(), c) == ring.end()) ring.push_back(c);
  };
  for (int x = x0; x <= x1; ++x) add(x, y0);
  for (int y = y0 + 1; y <= y1; ++y) add(x1, y);
  for (int x = x1 - 1; x >= x0; --x) add(x, y1);
  for (int y = y1 - 1; y > y0; --y) add(x0, y);
  return ring;
}

namespace {

ActionId toward(const CellCoord& from, int tx, int ty) {
  if (tx > from.x) return ActionId::Right;
  if (tx < from.x) return ActionId::Left;
  if (ty > from.y) return ActionId::Forward;
  if (ty < from.y) return ActionId::Backward;
  return ActionId::Hover;
}

}  // namespace

BaselinePilot::BaselinePilot(BaselineRole role, const CellCoord& start) : role_(role), start_(start) {}

ActionId BaselinePilot::next_action(const UavAgent& agent, const World& world, const ScenarioConfig& config) {
  const CellCoord& at = agent.cell;
  if (config.flags.is_3d && at.z < world.altitude_levels - 1) return ActionId::Up;

  switch (role_) {
    case BaselineRole::Square: {
      const auto ring = square_ring(world.rows, world.cols);
      const auto on = std::find_if(ring.begin(), ring.end(),
                                   [&](const CellCoord& c) { return c.x == at.x && c.y == at.y; });
      if (on != ring.end()) {
        if (ring.size() == 1) return ActionId::Hover;
        const auto next = std::next(on) == ring.end() ? ring.begin() : std::next(on);
        return toward(at, next->x, next->y);
      }
      const CellCoord* best = nullptr;
      int best_d = 0;
      for (const auto& c : ring) {
        const int d = std::abs(c.x - at.x) + std::abs(c.y - at.y);
        if (!best || d < best_d) {
          best = &c;
          best_d = d;
        }
      }
      return toward(at, best->x, best->y);
    }
    case BaselineRole::YSweep: {
      if (at.x != start_.x) return toward(at, start_.x, at.y);
      if (at.y + direction_ < 0 || at.y + direction_ >= world.rows) direction_ = -direction_;
      if (world.rows == 1) return ActionId::Hover;
      return direction_ > 0 ? ActionId::Forward : ActionId::Backward;
    }
    case BaselineRole::XSweep: {
      if (at.y != start_.y) return toward(at, at.x, start_.y);
      if (at.x + direction_ < 0 || at.x + direction_ >= world.cols) direction_ = -direction_;
      if (world.cols == 1) return ActionId::Hover;
      return direction_ > 0 ? ActionId::Right : ActionId::Left;
    }
  }
  return ActionId::Hover;
}

double baseline_return_threshold(const ScenarioConfig& config) {
  return std::ceil(0.15 * config.uav.battery_minutes - 1e-9);
}

ActionId baseline_action(const UavAgent& agent, BaselinePilot& pilot, const World& world,
                         const ScenarioConfig& config) {
  if (agent.mode != AgentMode::Flying) return ActionId::Hover;
  if (config.flags.battery_limited &&
      agent.battery_min <= baseline_return_threshold(config)) {
    return ActionId::GotoCs;
  }
  return pilot.next_action(agent, world, config);
}

EnvOptions baseline_env_options(const ScenarioConfig& config) {
  EnvOptions o;
  if (config.flags.is_3d) {
    o.obstacle_rule = ObstacleRule::Ignore;
    o.start_at_top = true;
  }
  return o;
}

std::vector<QoEReport> run_baseline(const Scenario& scenario, int epochs, const StepHook& hook) {
  Env env(scenario, baseline_env_options(scenario.config));
  const auto n = static_cast<std::size_t>(scenario.config.num_uavs);
  std::vector<BaselinePilot> pilots;
  std::vector<QoEReport> logs;
  std::vector<ActionId> requested(n, ActionId::Hover);

  for (int e = 0; e < epochs; ++e) {
    env.reset(e);
    if (pilots.empty() || env.is_static()) {
      pilots.clear();
      for (const auto& a : env.agents()) pilots.emplace_back(baseline_role(a.id), a.cell);
    }
    std::vector<double> sums(n, 0.0);
    for (int t = 0; t < scenario.config.timing.epoch_iterations; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = env.agents()[i];
        requested[i] = a.mode == AgentMode::Crashed ? ActionId::Hover
                                                    : baseline_action(a, pilots[i], env.world(), env.config());
      }
      const auto out = env.step(requested);
      if (hook) hook(e, env, out);
      for (std::size_t i = 0; i < n; ++i) sums[i] += out.agents[i].reward;
    }
    auto r = compute_qoe(env.users(), env.coverage_log(), EpochWindow{e, env.epoch_start(), env.now()});
    r.crashes = env.total_crashes();
    for (double s : sums) r.mean_reward.push_back(s / scenario.config.timing.epoch_iterations);
    logs.push_back(r);
  }
  return logs;
}

}  // namespace skyfleet
