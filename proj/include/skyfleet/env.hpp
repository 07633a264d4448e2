#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skyfleet/geometry.hpp"
#include "skyfleet/rewards.hpp"
#include "skyfleet/rng.hpp"
#include "skyfleet/scenario.hpp"

namespace skyfleet {

enum class ActionId : std::uint8_t { Forward, Backward, Right, Left, Hover, Up, Down, GotoCs, Charge };
inline constexpr int kActionKinds = 9;

const char* to_string(ActionId a);

enum class AgentMode : std::uint8_t { Flying, ToCs, Charging, Crashed };

const char* to_string(AgentMode m);

struct UavAgent {
  int id = 0;
  CellCoord cell;
  double battery_min = 0.0;
  AgentMode mode = AgentMode::Flying;
  /// Remaining A* cells toward a charging station; non-empty iff mode is ToCs.
  std::vector<CellCoord> committed_path;
  double bandwidth_mhz = 0.0;

  // Battery bookkeeping since the last reset.
  double charged_min = 0.0;
  int paid_actions = 0;
};

/// Actions available under `flags`, in Q-table column order.
std::vector<ActionId> action_set(const ScenarioFlags& flags);

/// Packs (x, y[, z][, battery bin]) into a dense index. Representation 1 is
/// 2D without battery, 2 adds the battery bin, 3 is 3D, 4 is 3D with battery.
class StateSpace {
 public:
  struct Components {
    int x = 0;
    int y = 0;
    int z = 0;
    int battery_bin = 0;
    friend bool operator==(const Components&, const Components&) = default;
  };

  StateSpace() = default;
  explicit StateSpace(const ScenarioConfig& config);

  int representation() const { return representation_; }
  int size() const { return cols_ * rows_ * levels_ * bins_; }
  int battery_bins() const { return bins_; }
  int pack(const Components& c) const { return c.x + cols_ * (c.y + rows_ * (c.z + levels_ * c.battery_bin)); }
  Components unpack(int index) const;

 private:
  int representation_ = 1;
  int cols_ = 1;
  int rows_ = 1;
  int levels_ = 1;
  int bins_ = 1;
};

/// Coverage one agent provides during an iteration.
struct AgentService {
  int covered = 0;
  std::array<int, kServiceTypes> covered_by_service{};
  int served = 0;
};

struct ServiceStats {
  int covered = 0;
  std::array<int, kServiceTypes> covered_by_service{};
  int served = 0;
  std::vector<AgentService> per_agent;
  std::vector<int> covered_ids;
};

struct AgentStep {
  ActionId requested = ActionId::Hover;
  ActionId effective = ActionId::Hover;
  double reward = 0.0;
  bool crashed = false;  ///< crashed during this step
  /// Observed next state; -1 once the agent has crashed.
  int next_state = -1;
  CellCoord observed_cell;
};

struct StepOutcome {
  std::vector<AgentStep> agents;
  ServiceStats stats;
  /// Iteration that was simulated (global, 0-based).
  std::int64_t iteration = 0;
  bool epoch_done = false;
};

/// Covers and serves users in the footprint of `agent`. Users already claimed
/// this iteration are skipped; throughput users are admitted by ascending id
/// while their bandwidth fits. Completed users are covered without taking
/// bandwidth or service.
AgentService serve_users(const UavAgent& agent, const World& world, std::span<User> users,
                         const ScenarioConfig& config, std::int64_t now, std::vector<bool>& claimed,
                         std::vector<int>* covered_ids = nullptr);

/// Moves along A* to the nearest station, in minutes. 0 on a station,
/// battery_minutes + 1 when no station is reachable.
double needed_battery(const UavAgent& agent, const World& world, const ScenarioConfig& config,
                      ObstacleRule rule = ObstacleRule::Buildings);

/// Reported cell under position noise: each horizontal axis shifts by +-1 with
/// probability p_obs_error, clamped to the grid.
CellCoord observe_cell(const CellCoord& truth, const World& world, const ScenarioConfig& config, Rng& rng);

/// Random-walk and request re-arming dynamics, called once per iteration.
void update_users(std::span<User> users, const World& world, const ScenarioConfig& config, std::int64_t now,
                  Rng& rng);

struct EnvOptions {
  ObstacleRule obstacle_rule = ObstacleRule::Buildings;
  /// Start agents at the top altitude level instead of level 0.
  bool start_at_top = false;
};

/// The multi-agent mission MDP. Single-threaded; one instance per run.
class Env {
 public:
  explicit Env(Scenario scenario, EnvOptions options = {});

  const ScenarioConfig& config() const { return scenario_.config; }
  const World& world() const { return scenario_.world; }
  std::span<const User> users() const { return scenario_.users; }
  std::span<const UavAgent> agents() const { return agents_; }
  const StateSpace& state_space() const { return states_; }
  std::span<const ActionId> actions() const { return actions_; }
  const EnvOptions& options() const { return options_; }

  std::int64_t now() const { return now_; }
  std::int64_t epoch_start() const { return epoch_start_; }
  int total_crashes() const { return crashes_; }
  int invalid_actions() const { return invalid_actions_; }
  bool is_static() const { return !config().flags.dynamic_requests && !config().flags.users_move; }

  /// Starts an epoch and returns one observed state per agent (-1 if crashed).
  std::vector<int> reset(int epoch_index);

  /// Advances one iteration. `requested` holds one action per agent; entries
  /// for crashed, charging or in-transit agents are ignored.
  StepOutcome step(std::span<const ActionId> requested);

  /// Per-iteration covered user ids since the last reset.
  const std::vector<std::vector<int>>& coverage_log() const { return coverage_log_; }

  /// Cells the agents should start from, nearest the map center first.
  std::vector<CellCoord> start_cells() const;

  int state_of(const UavAgent& agent, const CellCoord& reported) const;

  // Direct access for tests and scripted scenarios.
  UavAgent& agent(int id) { return agents_[static_cast<std::size_t>(id)]; }
  User& user(int id) { return scenario_.users[static_cast<std::size_t>(id)]; }

 private:
  int observe(const UavAgent& agent, CellCoord* reported);
  void place_agents_at_start();
  void revive(UavAgent& agent);
  void crash(UavAgent& agent);
  ActionId resolve(UavAgent& agent, ActionId requested);
  void apply(UavAgent& agent, ActionId effective, bool& crashed);
  double reward_for(const UavAgent& agent, const AgentService& service) const;

  Scenario scenario_;
  EnvOptions options_;
  StateSpace states_;
  std::vector<ActionId> actions_;
  std::vector<UavAgent> agents_;
  Population population_;
  RewardKind reward_kind_ = RewardKind::R1;
  Rng noise_rng_;
  Rng dynamics_rng_;

  std::int64_t now_ = 0;
  std::int64_t epoch_start_ = 0;
  bool started_ = false;
  int crashes_ = 0;
  int invalid_actions_ = 0;
  std::vector<std::vector<int>> coverage_log_;
};

}  // namespace skyfleet
