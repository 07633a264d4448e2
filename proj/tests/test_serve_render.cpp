#include <doctest.h>

#include <json.hpp>

#include "skyfleet/presets.hpp"
#include "skyfleet/render.hpp"
#include "skyfleet/serve.hpp"
#include "skyfleet/io.hpp"
#include "skyfleet/learn.hpp"
#include "support.hpp"

using namespace skyfleet;
using nlohmann::json;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("serve: a full epoch") {
  ServeSession s(case_preset(1, 7));
  const auto spec = json::parse(s.handle_line(R"({"cmd":"spec"})"));
  CHECK(spec["n_actions"] == 5);
  CHECK(spec["n_states"] == 100);

  CHECK(json::parse(s.handle_line(R"({"cmd":"step","actions":[0]})")).contains("error"));

  const auto reset = json::parse(s.handle_line(R"({"cmd":"reset","seed":3})"));
  CHECK(reset["n_agents"] == 1);
  CHECK(reset["obs"].size() == 1);

  for (int t = 1; t <= 30; ++t) {
    const auto r = json::parse(s.handle_line(R"({"cmd":"step","actions":[4]})"));
    REQUIRE_FALSE(r.contains("error"));
    CHECK(r["done"] == (t == 30));
    CHECK(r["rewards"].size() == 1);
    CHECK(r["info"].contains("qoe3"));
  }
  // The next step rolls into a new epoch.
  CHECK(json::parse(s.handle_line(R"({"cmd":"step","actions":[4]})"))["done"] == false);

  CHECK(json::parse(s.handle_line(R"({"cmd":"step","actions":[0,1]})")).contains("error"));
  CHECK(json::parse(s.handle_line(R"({"cmd":"step","actions":[5]})")).contains("error"));
  CHECK(json::parse(s.handle_line(R"({"cmd":"fly"})")).contains("error"));
  CHECK(json::parse(s.handle_line("{not json")).contains("error"));
  CHECK_FALSE(s.closed());
  s.handle_line(R"({"cmd":"close"})");
  CHECK(s.closed());
}

TEST_CASE("serve: declared dimensions match payloads for every preset") {
  for (int id = 1; id <= kPresetCount; ++id) {
    CAPTURE(id);
    ServeSession s(case_preset(id, 2));
    const auto spec = json::parse(s.handle_line(R"({"cmd":"spec"})"));
    const auto reset = json::parse(s.handle_line(R"({"cmd":"reset","seed":2})"));
    const int n = reset["n_agents"];
    CHECK(spec["valid_actions"].size() == static_cast<std::size_t>(n));
    json acts = json::array();
    for (int i = 0; i < n; ++i) acts.push_back(static_cast<int>(spec["n_actions"]) - 1);
    const auto step = json::parse(s.handle_line(json{{"cmd", "step"}, {"actions", acts}}.dump()));
    REQUIRE_FALSE(step.contains("error"));
    CHECK(step["obs"].size() == static_cast<std::size_t>(n));
    CHECK(step["rewards"].size() == static_cast<std::size_t>(n));
    for (const auto& o : step["obs"]) {
      CHECK(o.get<int>() >= -1);
      CHECK(o.get<int>() < spec["n_states"].get<int>());
    }
  }
}

TEST_CASE("render") {
  auto c = case_preset(8, 1);
  const auto s = generate_scenario(c);
  std::string trace;
  Env env(s);
  std::vector<QTable> tables;
  for (int i = 0; i < c.num_uavs; ++i) tables.emplace_back(env.state_space().size(), static_cast<int>(env.actions().size()));
  evaluate(s, tables, 1, 0.0,
           [&](int e, const Env& en, const StepOutcome& o) { trace += trace_record(e, en, o).dump() + "\n"; });

  const auto rec = find_trace_record(trace, 4);
  const auto svg = render_svg(s, rec);
  CHECK(count(svg, "class=\"footprint\"") == 3);
  CHECK(count(svg, "class=\"building\"") == static_cast<std::size_t>(s.world.building_count()));
  CHECK(count(svg, "class=\"cs\"") == 3);
  CHECK(count(svg, "class=\"user\"") == 48);
  CHECK(render_svg(s, rec) == svg);
  CHECK_THROWS_AS(find_trace_record(trace, 999), std::runtime_error);

  auto flat = generate_scenario(case_preset(1, 1));
  flat.world.building_height_m.assign(flat.world.building_height_m.size(), 0.0);
  Env fenv(flat);
  fenv.reset(0);
  const ActionId hover[] = {ActionId::Hover};
  const auto out = fenv.step(hover);
  CHECK(count(render_svg(flat, trace_record(0, fenv, out)), "class=\"building\"") == 0);
}
