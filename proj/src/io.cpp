#include "skyfleet/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"
#include "skyfleet/learn.hpp"

namespace skyfleet {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

namespace {

json parse_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
}

// Reads the keys of one JSON object into fields, rejecting unknown keys.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <typename T>
  ObjectReader& field(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return *this;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("{}.{} has the wrong type: {}", where_, key, e.what()));
    }
    return *this;
  }

  template <typename F>
  ObjectReader& nested(const char* key, F&& read) {
    seen_.insert(key);
    if (j_.contains(key)) read(j_.at(key), where_ + "." + key);
    return *this;
  }

  bool has(const char* key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(fmt::format("unknown key '{}' in {}", k, where_));
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json range_json(double lo, double hi) { return json::array({lo, hi}); }

template <typename T>
void read_pair(const json& j, const std::string& where, T& lo, T& hi) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + " must be a [low, high] pair");
  try {
    lo = j[0].get<T>();
    hi = j[1].get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{} has the wrong type: {}", where, e.what()));
  }
}

json cell_json(const CellCoord& c) { return json::array({c.x, c.y, c.z}); }

CellCoord cell_from(const json& j) {
  CellCoord c;
  c.x = j.at(0).get<int>();
  c.y = j.at(1).get<int>();
  c.z = j.size() > 2 ? j.at(2).get<int>() : 0;
  return c;
}

ServiceType service_from(const std::string& s) {
  if (s == "throughput") return ServiceType::Throughput;
  if (s == "edge_computing") return ServiceType::EdgeComputing;
  if (s == "data_gathering") return ServiceType::DataGathering;
  throw IoError("unknown service type '" + s + "'");
}

}  // namespace

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["case_id"] = c.case_id;
  j["grid_rows"] = c.grid_rows;
  j["grid_cols"] = c.grid_cols;
  j["cell_size_m"] = c.cell_size_m;
  j["num_uavs"] = c.num_uavs;
  j["num_users"] = c.num_users;
  j["num_clusters"] = c.num_clusters;
  j["num_cs"] = c.num_cs;
  j["num_services"] = c.num_services;
  j["cluster_radius_m"] = range_json(c.cluster_radius_m.low, c.cluster_radius_m.high);
  j["obstacle_coverage"] = c.obstacle_coverage;
  j["max_building_height_m"] = c.max_building_height_m;
  j["altitude_levels"] = c.altitude_levels;
  j["level_height_m"] = c.configured_level_height();
  j["flags"] = {{"is_3d", c.flags.is_3d},
                {"battery_limited", c.flags.battery_limited},
                {"bandwidth_limited", c.flags.bandwidth_limited},
                {"dynamic_requests", c.flags.dynamic_requests},
                {"users_move", c.flags.users_move},
                {"multi_service", c.flags.multi_service},
                {"position_noise", c.flags.position_noise}};
  j["uav"] = {{"max_speed_mps", c.uav.max_speed_mps},
              {"max_accel_mps2", c.uav.max_accel_mps2},
              {"footprint_radius_m", c.uav.footprint_radius_m},
              {"battery_minutes", c.uav.battery_minutes},
              {"bandwidth_mhz", c.uav.bandwidth_mhz}};
  j["timing"] = {{"iteration_seconds", c.timing.iteration_seconds},
                 {"epoch_iterations", c.timing.epoch_iterations}};
  const auto& r = c.reward_params;
  j["reward_params"] = {{"c1", r.c1},     {"c2", r.c2},     {"c3", r.c3},
                        {"c4", r.c4},     {"w_u", r.w_u},   {"w_tr", r.w_tr},
                        {"w_ec", r.w_ec}, {"w_dg", r.w_dg}, {"r_cs_const", r.r_cs_const},
                        {"eq34_typo_fix", r.eq34_typo_fix}};
  j["rl"] = {{"alpha", c.rl.alpha},
             {"gamma", c.rl.gamma},
             {"epsilon_start", c.rl.epsilon_start},
             {"epsilon_end", c.rl.epsilon_end},
             {"epsilon_decay_epochs", c.rl.epsilon_decay_epochs},
             {"qtable_init", to_string(c.rl.qtable_init)},
             {"prior_path", c.rl.prior_path},
             {"training_epochs", c.rl.training_epochs}};
  j["noise"] = {{"p_obs_error", c.noise.p_obs_error}};
  j["dynamics"] = {{"p_user_move", c.dynamics.p_user_move},
                   {"p_request_arrival", c.dynamics.p_request_arrival},
                   {"demand_range", json::array({c.dynamics.demand_range.low, c.dynamics.demand_range.high})},
                   {"tr_bandwidth_per_user_mhz", c.dynamics.tr_bandwidth_per_user_mhz}};
  j["seed"] = c.seed;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  ObjectReader top(j, "config");
  top.field("case_id", c.case_id)
      .field("grid_rows", c.grid_rows)
      .field("grid_cols", c.grid_cols)
      .field("cell_size_m", c.cell_size_m)
      .field("num_uavs", c.num_uavs)
      .field("num_users", c.num_users)
      .field("num_clusters", c.num_clusters)
      .field("num_cs", c.num_cs)
      .field("num_services", c.num_services)
      .nested("cluster_radius_m",
              [&](const json& v, const std::string& w) { read_pair(v, w, c.cluster_radius_m.low, c.cluster_radius_m.high); })
      .field("obstacle_coverage", c.obstacle_coverage)
      .field("max_building_height_m", c.max_building_height_m)
      .field("altitude_levels", c.altitude_levels)
      .field("level_height_m", c.level_height_m)
      .nested("flags",
              [&](const json& v, const std::string& w) {
                ObjectReader(v, w)
                    .field("is_3d", c.flags.is_3d)
                    .field("battery_limited", c.flags.battery_limited)
                    .field("bandwidth_limited", c.flags.bandwidth_limited)
                    .field("dynamic_requests", c.flags.dynamic_requests)
                    .field("users_move", c.flags.users_move)
                    .field("multi_service", c.flags.multi_service)
                    .field("position_noise", c.flags.position_noise)
                    .finish();
              })
      .nested("uav",
              [&](const json& v, const std::string& w) {
                ObjectReader(v, w)
                    .field("max_speed_mps", c.uav.max_speed_mps)
                    .field("max_accel_mps2", c.uav.max_accel_mps2)
                    .field("footprint_radius_m", c.uav.footprint_radius_m)
                    .field("battery_minutes", c.uav.battery_minutes)
                    .field("bandwidth_mhz", c.uav.bandwidth_mhz)
                    .finish();
              })
      .nested("timing",
              [&](const json& v, const std::string& w) {
                ObjectReader(v, w)
                    .field("iteration_seconds", c.timing.iteration_seconds)
                    .field("epoch_iterations", c.timing.epoch_iterations)
                    .finish();
              })
      .nested("reward_params",
              [&](const json& v, const std::string& w) {
                auto& r = c.reward_params;
                ObjectReader(v, w)
                    .field("c1", r.c1)
                    .field("c2", r.c2)
                    .field("c3", r.c3)
                    .field("c4", r.c4)
                    .field("w_u", r.w_u)
                    .field("w_tr", r.w_tr)
                    .field("w_ec", r.w_ec)
                    .field("w_dg", r.w_dg)
                    .field("r_cs_const", r.r_cs_const)
                    .field("eq34_typo_fix", r.eq34_typo_fix)
                    .finish();
              })
      .nested("rl",
              [&](const json& v, const std::string& w) {
                std::string init = to_string(c.rl.qtable_init);
                ObjectReader(v, w)
                    .field("alpha", c.rl.alpha)
                    .field("gamma", c.rl.gamma)
                    .field("epsilon_start", c.rl.epsilon_start)
                    .field("epsilon_end", c.rl.epsilon_end)
                    .field("epsilon_decay_epochs", c.rl.epsilon_decay_epochs)
                    .field("qtable_init", init)
                    .field("prior_path", c.rl.prior_path)
                    .field("training_epochs", c.rl.training_epochs)
                    .finish();
                c.rl.qtable_init = qtable_init_from_string(init);
              })
      .nested("noise",
              [&](const json& v, const std::string& w) {
                ObjectReader(v, w).field("p_obs_error", c.noise.p_obs_error).finish();
              })
      .nested("dynamics",
              [&](const json& v, const std::string& w) {
                ObjectReader r(v, w);
                r.field("p_user_move", c.dynamics.p_user_move)
                    .field("p_request_arrival", c.dynamics.p_request_arrival)
                    .nested("demand_range",
                            [&](const json& d, const std::string& dw) {
                              read_pair(d, dw, c.dynamics.demand_range.low, c.dynamics.demand_range.high);
                            })
                    .field("tr_bandwidth_per_user_mhz", c.dynamics.tr_bandwidth_per_user_mhz)
                    .finish();
              })
      .field("seed", c.seed);
  top.finish();
  if (!top.has("num_services")) c.num_services = c.flags.multi_service ? 3 : 1;
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) { return config_from_json(parse_file(path)); }

json scenario_to_json(const Scenario& s) {
  const auto& w = s.world;
  json world;
  world["rows"] = w.rows;
  world["cols"] = w.cols;
  world["cell_size_m"] = w.cell_size_m;
  world["altitude_levels"] = w.altitude_levels;
  world["level_height_m"] = w.level_height_m;
  world["building_height_m"] = w.building_height_m;
  world["cs_cells"] = json::array();
  for (const auto& c : w.cs_cells) world["cs_cells"].push_back(json::array({c.x, c.y}));
  world["centroids"] = json::array();
  for (const auto& p : w.centroids) world["centroids"].push_back(json::array({p.x, p.y}));
  world["cluster_radius_m"] = w.cluster_radius_m;
  world["tallest_building_m"] = w.tallest_building_m;

  json users = json::array();
  for (const auto& u : s.users) {
    users.push_back({{"id", u.id},
                     {"home_cluster", u.home_cluster},
                     {"pos_m", json::array({u.pos_m.x, u.pos_m.y})},
                     {"service", to_string(u.service)},
                     {"demand_iters", u.demand_iters},
                     {"bw_need_mhz", u.bw_need_mhz},
                     {"request_iter", u.request_iter},
                     {"served_iters", u.served_iters},
                     {"completion_iter", u.completion_iter ? json(*u.completion_iter) : json(nullptr)}});
  }
  return {{"schema", kWorldSchema}, {"config", config_to_json(s.config)}, {"world", world}, {"users", users}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != kWorldSchema) {
    throw IoError(fmt::format("expected a '{}' document", kWorldSchema));
  }
  Scenario s;
  s.config = config_from_json(j.at("config"));
  try {
    const auto& w = j.at("world");
    s.world.rows = w.at("rows").get<int>();
    s.world.cols = w.at("cols").get<int>();
    s.world.cell_size_m = w.at("cell_size_m").get<double>();
    s.world.altitude_levels = w.at("altitude_levels").get<int>();
    s.world.level_height_m = w.at("level_height_m").get<double>();
    s.world.building_height_m = w.at("building_height_m").get<std::vector<double>>();
    for (const auto& c : w.at("cs_cells")) s.world.cs_cells.push_back(cell_from(c));
    for (const auto& p : w.at("centroids")) s.world.centroids.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    s.world.cluster_radius_m = w.at("cluster_radius_m").get<std::vector<double>>();
    s.world.tallest_building_m = w.at("tallest_building_m").get<double>();
    for (const auto& ju : j.at("users")) {
      User u;
      u.id = ju.at("id").get<int>();
      u.home_cluster = ju.at("home_cluster").get<int>();
      u.pos_m = {ju.at("pos_m").at(0).get<double>(), ju.at("pos_m").at(1).get<double>()};
      u.service = service_from(ju.at("service").get<std::string>());
      u.demand_iters = ju.at("demand_iters").get<int>();
      u.bw_need_mhz = ju.at("bw_need_mhz").get<double>();
      u.request_iter = ju.at("request_iter").get<std::int64_t>();
      u.served_iters = ju.at("served_iters").get<int>();
      if (!ju.at("completion_iter").is_null()) u.completion_iter = ju.at("completion_iter").get<std::int64_t>();
      s.users.push_back(u);
    }
  } catch (const json::exception& e) {
    throw IoError(fmt::format("malformed world document: {}", e.what()));
  }
  if (s.world.rows != s.config.grid_rows || s.world.cols != s.config.grid_cols ||
      static_cast<int>(s.world.building_height_m.size()) != s.world.cell_count()) {
    throw IoError("world grid does not match its config");
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_text_file(path, scenario_to_json(s).dump(1) + "\n");
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_file(path)); }

json qtable_to_json(const QTable& q, const std::optional<QTableMeta>& meta) {
  json j{{"schema", kQTableSchema},
         {"num_states", q.num_states()},
         {"num_actions", q.num_actions()},
         {"init", to_string(q.init_strategy())}};
  if (meta) {
    j["meta"] = {{"agent", meta->agent}, {"algo", meta->algo}, {"case", meta->case_id}, {"seed", meta->seed}};
  }
  j["values"] = std::vector<double>(q.values().begin(), q.values().end());
  return j;
}

QTable qtable_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", std::string{}) != kQTableSchema) {
    throw IoError(fmt::format("expected a '{}' document", kQTableSchema));
  }
  try {
    const int states = j.at("num_states").get<int>();
    const int actions = j.at("num_actions").get<int>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (states <= 0 || actions <= 0 ||
        values.size() != static_cast<std::size_t>(states) * static_cast<std::size_t>(actions)) {
      throw IoError("Q-table values do not match its dimensions");
    }
    QTable q(states, actions, qtable_init_from_string(j.value("init", std::string{"zero"})));
    std::copy(values.begin(), values.end(), q.values().begin());
    return q;
  } catch (const json::exception& e) {
    throw IoError(fmt::format("malformed Q-table document: {}", e.what()));
  } catch (const ConfigError& e) {
    throw IoError(e.what());
  }
}

void save_qtable(const QTable& q, const std::string& path, const std::optional<QTableMeta>& meta) {
  write_text_file(path, qtable_to_json(q, meta).dump() + "\n");
}

QTable load_qtable(const std::string& path) { return qtable_from_json(parse_file(path)); }

std::string qtable_file_name(int agent) { return fmt::format("qtable_agent{}.json", agent); }

json trace_record(int epoch, const Env& env, const StepOutcome& out) {
  json agents = json::array();
  for (const auto& a : env.agents()) {
    const auto& rec = out.agents[static_cast<std::size_t>(a.id)];
    json path = json::array();
    for (const auto& c : a.committed_path) path.push_back(cell_json(c));
    agents.push_back({{"id", a.id},
                      {"cell", cell_json(a.cell)},
                      {"observed", cell_json(rec.observed_cell)},
                      {"action", to_string(rec.requested)},
                      {"effective", to_string(rec.effective)},
                      {"reward", rec.reward},
                      {"battery", a.battery_min},
                      {"mode", to_string(a.mode)},
                      {"path", path}});
  }
  json j{{"iteration", out.iteration}, {"epoch", epoch}, {"agents", agents}, {"covered", out.stats.covered_ids}};
  if (env.config().flags.users_move) {
    json pos = json::array();
    for (const auto& u : env.users()) pos.push_back(json::array({u.pos_m.x, u.pos_m.y}));
    j["users"] = pos;
  }
  return j;
}

}  // namespace skyfleet
