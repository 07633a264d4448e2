#pragma once

#include <cstdint>

#include "skyfleet/config.hpp"

namespace skyfleet {

inline constexpr int kPresetCount = 9;

/// Which user count of a two-valued preset row to use.
enum class UsersVariant { QLearning, Sarsa };

/// Scenario config for experiment case 1..9. Throws ConfigError for other ids.
ScenarioConfig case_preset(int case_id, std::uint64_t seed = 0, UsersVariant variant = UsersVariant::QLearning);

}  // namespace skyfleet
