#pragma once

#include <vector>

#include "skyfleet/env.hpp"
#include "skyfleet/learn.hpp"
#include "skyfleet/metrics.hpp"

namespace skyfleet {

enum class BaselineRole { Square, YSweep, XSweep };

const char* to_string(BaselineRole r);

/// Agent k gets role k mod 3: square, y-sweep, x-sweep, repeating.
BaselineRole baseline_role(int agent_id);

/// Ring of cells two cells in from the map edge, walked clockwise on screen
/// (+x along the top row, then +y, -x, -y) starting at its top-left corner.
std::vector<CellCoord> square_ring(int rows, int cols);

/// Stateful scripted pilot for one UAV. Sweep direction is its only memory.
class BaselinePilot {
 public:
  BaselinePilot(BaselineRole role, const CellCoord& start);

  BaselineRole role() const { return role_; }
  int direction() const { return direction_; }

  ActionId next_action(const UavAgent& agent, const World& world, const ScenarioConfig& config);

 private:
  BaselineRole role_;
  CellCoord start_;
  int direction_ = 1;
};

/// Battery level (minutes) at or below which the baseline heads for a station.
double baseline_return_threshold(const ScenarioConfig& config);

ActionId baseline_action(const UavAgent& agent, BaselinePilot& pilot, const World& world,
                         const ScenarioConfig& config);

/// Environment options for baseline runs: in 3D the pilots fly at the top
/// level and buildings do not block them.
EnvOptions baseline_env_options(const ScenarioConfig& config);

/// Runs the baseline for `epochs` epochs.
std::vector<QoEReport> run_baseline(const Scenario& scenario, int epochs, const StepHook& hook = {});

}  // namespace skyfleet
