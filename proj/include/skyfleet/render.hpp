#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "skyfleet/scenario.hpp"

namespace skyfleet {

/// Finds the record of global iteration `iteration` in a JSON-lines trace;
/// throws std::runtime_error when the trace does not cover it.
nlohmann::json find_trace_record(const std::string& trace_jsonl, std::int64_t iteration);

/// Top-down SVG snapshot of the world overlaid with one trace record.
std::string render_svg(const Scenario& scenario, const nlohmann::json& record);

}  // namespace skyfleet
