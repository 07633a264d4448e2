#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skyfleet/config.hpp"
#include "skyfleet/env.hpp"
#include "skyfleet/scenario.hpp"

namespace skyfleet {

class QTable;

inline constexpr const char* kWorldSchema = "skyfleet-world/1";
inline constexpr const char* kQTableSchema = "skyfleet-qtable/1";

nlohmann::json config_to_json(const ScenarioConfig& config);
/// Missing keys keep their defaults; unknown keys and wrong types raise
/// ConfigError. The result is validated.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

struct QTableMeta {
  int agent = 0;
  std::string algo;
  int case_id = 0;
  std::uint64_t seed = 0;
};

nlohmann::json qtable_to_json(const QTable& q, const std::optional<QTableMeta>& meta = std::nullopt);
QTable qtable_from_json(const nlohmann::json& j);
void save_qtable(const QTable& q, const std::string& path, const std::optional<QTableMeta>& meta = std::nullopt);
QTable load_qtable(const std::string& path);

/// File name used for agent `i` inside a Q-table directory.
std::string qtable_file_name(int agent);

/// One JSON-lines trace record for the iteration just stepped.
nlohmann::json trace_record(int epoch, const Env& env, const StepOutcome& outcome);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace skyfleet
