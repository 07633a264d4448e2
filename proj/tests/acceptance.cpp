// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "oracles.hpp"
#include "skyfleet/baseline.hpp"
#include "skyfleet/geometry.hpp"
#include "skyfleet/learn.hpp"
#include "skyfleet/presets.hpp"
#include "skyfleet/rewards.hpp"
#include "skyfleet/rng.hpp"

using namespace skyfleet;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  fmt::print("{} {} ({:.2f} s) {}\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail);
  std::cout << std::flush;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Piecewise schedule written out from the model: guard first, then the four
// battery regimes with the second regime read as (c2, c1].
std::pair<double, double> expected_weights(int b, int nb) {
  if (b <= nb) return {0.0, 1.0};
  if (b > 24) return {1.0, 0.0};
  if (b > 18) return {0.8, 0.2};
  if (b > 12) return {0.5, 0.5};
  if (b > 6) return {0.2, 0.8};
  return {0.0, 1.0};
}

struct Trained {
  QoEReport greedy;
  QoEReport baseline;
  /// QoE2 if every user were served from iteration 0 without a gap: a user
  /// needing d iterations cannot finish sooner than d - 1 after its request.
  double qoe2_floor = 0.0;
};

Trained train_and_compare(int case_id, std::uint64_t seed, int epochs) {
  const auto s = generate_scenario(case_preset(case_id, seed));
  const auto result = train(s, Algorithm::QLearning, Hyperparams::from(s.config), epochs);
  double floor = 0.0;
  for (const auto& u : s.users) floor += u.demand_iters - 1;
  return {evaluate(s, result.tables, 1, 0.0).back(), run_baseline(s, epochs).back(), floor / s.users.size()};
}

}  // namespace

int main() {
  fmt::print("acceptance suite\n");

  criterion("weight schedule exhaustive", [] {
    const RewardParams p;
    int mismatches = 0, checked = 0;
    for (int b = 0; b <= 30; ++b) {
      for (int nb = 0; nb <= 31; ++nb) {
        const auto w = battery_weights(b, nb, p);
        const auto [ws, wc] = expected_weights(b, nb);
        ++checked;
        if (w.service + w.cost != 1.0 || w.service != ws || w.cost != wc) ++mismatches;
      }
    }
    return Verdict{mismatches == 0, fmt::format("{} pairs, {} mismatches", checked, mismatches)};
  });

  criterion("reward formula spot checks", [] {
    const RewardParams p;
    auto view = [](double b, double nb, int cov, std::array<int, kServiceTypes> by) {
      AgentServiceView v;
      v.battery_min = b;
      v.needed_battery_min = nb;
      v.covered = cov;
      v.covered_by_service = by;
      return v;
    };
    const Population pop14{14, 1, {14, 0, 0}};
    const Population pop10{10, 1, {10, 0, 0}};
    struct Check {
      const char* name;
      double got;
      double want;
    };
    const std::vector<Check> checks{
        {"r1 full coverage", reward_r1(14, 14, 1), 1.0},
        {"r1 zero", reward_r1(0, 14, 1), 0.0},
        {"r1 above fair share", reward_r1(15, 20, 2), 1.5},
        // w = (0.8, 0.2) at B = 20; r_u = 7/14; r_c = 5/20
        {"r2 substitution", reward_r2(view(20, 5, 7, {7, 0, 0}), pop14, p), 0.45},
        {"r2 on station", reward_r2(view(20, 0, 7, {7, 0, 0}), pop14, p), 0.8 * 0.5},
        {"r2 cost ratio", charging_cost(5, 5), 1.0},
        {"r3 substitution", reward_r3(view(30, 0, 10, {10, 0, 0}), pop10, p), 0.6},
        {"r3 cost only", reward_r3(view(3, 3, 0, {0, 0, 0}), pop10, p), 1.0},
        {"r3 zero", reward_r3(view(30, 0, 0, {0, 0, 0}), pop10, p), 0.0},
    };
    std::vector<std::string> bad;
    for (const auto& c : checks) {
      if (std::abs(c.got - c.want) > 1e-12) bad.push_back(fmt::format("{}={} want {}", c.name, c.got, c.want));
    }
    return Verdict{bad.empty(), fmt::format("{} checks{}{}", checks.size(), bad.empty() ? "" : ": ",
                                            fmt::join(bad, "; "))};
  });

  criterion("A* vs BFS oracle", [] {
    Rng pick(20240607);
    int worlds = 0, pairs = 0, mismatches = 0;
    const double coverages[] = {0.0, 0.1, 0.2, 0.3};
    for (int i = 0; i < 200; ++i) {
      ScenarioConfig c;
      c.num_users = 1;
      c.flags.is_3d = i % 2 == 1;
      c.obstacle_coverage = coverages[(i / 2) % 4];
      c.seed = static_cast<std::uint64_t>(1000 + i);
      const auto w = generate_world(c);
      ++worlds;
      int found = 0;
      for (int attempt = 0; found < 50 && attempt < 5000; ++attempt) {
        auto draw = [&] {
          return CellCoord{static_cast<int>(pick.below(10)), static_cast<int>(pick.below(10)),
                           static_cast<int>(pick.below(static_cast<std::uint64_t>(w.altitude_levels)))};
        };
        const auto a = draw(), b = draw();
        if (oracle::band_blocked(w, a.x, a.y, a.z) || oracle::band_blocked(w, b.x, b.y, b.z)) continue;
        const int d = oracle::bfs_distance(w, a, b);
        if (d < 0) continue;
        ++found;
        if (static_cast<int>(astar_path(a, b, w).size()) != d) ++mismatches;
      }
      pairs += found;
      if (found < 50) ++mismatches;
    }
    return Verdict{mismatches == 0, fmt::format("{} worlds, {} pairs, {} mismatches", worlds, pairs, mismatches)};
  });

  criterion("kinematic anchor", [] {
    const auto limits = kinematic_limits(ScenarioConfig{});
    const double t_cell = transit_time(240.0, limits);
    const double t_fast = transit_time(240.0, KinematicLimits{8.3, 4.0, 8.3});
    const double root = oracle::cruise_root(240.0, 60.0, 4.0);
    const bool ok = std::abs(t_cell - 60.0) <= 0.1 && std::abs(t_fast - 31.0) <= 0.1 &&
                    std::abs(limits.v_cruise_mps - root) < 1e-9;
    return Verdict{ok, fmt::format("v_cruise={:.4f} m/s, t(240 m)={:.3f} s, t(240 m @ v_max)={:.3f} s",
                                   limits.v_cruise_mps, t_cell, t_fast)};
  });

  criterion("battery conservation (case 4, 1000 random epochs)", [] {
    const auto s = generate_scenario(case_preset(4, 11));
    Env env(s);
    Rng rng(77);
    const auto actions = env.actions();
    const double full = s.config.uav.battery_minutes;
    int violations = 0, audited = 0, crashed = 0, charges = 0;
    std::vector<ActionId> req(static_cast<std::size_t>(s.config.num_uavs));
    for (int e = 0; e < 1000; ++e) {
      env.reset(e);
      std::vector<double> start;
      for (const auto& a : env.agents()) start.push_back(a.battery_min);
      for (int t = 0; t < s.config.timing.epoch_iterations; ++t) {
        std::vector<double> before;
        for (const auto& a : env.agents()) before.push_back(a.battery_min);
        for (auto& r : req) r = actions[rng.below(actions.size())];
        const auto out = env.step(req);
        for (const auto& a : env.agents()) {
          const auto i = static_cast<std::size_t>(a.id);
          const bool charged = out.agents[i].effective == ActionId::Charge;
          charges += charged;
          if (a.battery_min < 0.0 || a.battery_min > full) ++violations;
          if (a.battery_min > before[i] && !charged) ++violations;
        }
      }
      for (const auto& a : env.agents()) {
        if (a.mode == AgentMode::Crashed) {
          ++crashed;
          continue;
        }
        ++audited;
        const double lhs = start[static_cast<std::size_t>(a.id)] - a.battery_min + a.charged_min;
        if (lhs != static_cast<double>(a.paid_actions)) ++violations;
      }
    }
    return Verdict{violations == 0, fmt::format("{} agent-epochs audited ({} crashed, skipped), {} charge steps, "
                                                "{} violations",
                                                audited, crashed, charges, violations)};
  });

  criterion("determinism (CLI train case 5 twice)", [] {
    const auto root = fs::temp_directory_path() / "skyfleet_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    for (const char* run : {"a", "b"}) {
      const std::string cmd = fmt::format("'{}' train --case 5 --algo qlearning --seed 7 --epochs 50 --out-dir '{}' "
                                          ">/dev/null",
                                          SKYFLEET_CLI, (root / run).string());
      if (std::system(cmd.c_str()) != 0) return Verdict{false, "train exited non-zero"};
    }
    int files = 0, differ = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      const auto name = entry.path().filename();
      if (name != "metrics.csv" && name.string().rfind("qtable_agent", 0) != 0) continue;
      ++files;
      if (slurp(entry.path()) != slurp(root / "b" / name)) ++differ;
    }
    return Verdict{files == 3 && differ == 0,
                   fmt::format("{} files compared (metrics.csv + 2 qtables), {} differ", files, differ)};
  });

  criterion("case 1 directional (5 seeds x 2000 epochs)", [] {
    std::vector<double> q3, b3, q2, floors;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = train_and_compare(1, seed, 2000);
      q3.push_back(r.greedy.qoe3_pct);
      q2.push_back(r.greedy.qoe2_iters);
      b3.push_back(r.baseline.qoe3_pct);
      floors.push_back(r.qoe2_floor);
    }
    const double mq3 = median(q3), mb3 = median(b3), mq2 = median(q2);
    const bool coverage_ok = mq3 >= 3.0 * mb3;
    const bool latency_ok = mq2 <= 5.0;
    return Verdict{coverage_ok && latency_ok,
                   fmt::format("median QoE3 {:.2f}% vs baseline {:.2f}% (ratio {:.2f}, need >= 3) [{}]; "
                               "median QoE2 {:.2f} it. (need <= 5) [{}]; per-seed QoE2 [{:.2f}], "
                               "zero-travel floor [{:.2f}]",
                               mq3, mb3, mb3 > 0 ? mq3 / mb3 : INFINITY, coverage_ok ? "ok" : "short", mq2,
                               latency_ok ? "ok" : "short", fmt::join(q2, ", "),
                               fmt::join(floors, ", "))};
  });

  criterion("baseline is worst (presets 1, 2, 5)", [] {
    std::vector<std::string> parts;
    bool ok = true;
    for (int id : {1, 2, 5}) {
      int wins = 0;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = train_and_compare(id, seed, 2000);
        wins += r.greedy.qoe3_pct > r.baseline.qoe3_pct;
      }
      ok &= wins >= 4;
      parts.push_back(fmt::format("case {}: {}/5", id, wins));
    }
    return Verdict{ok, fmt::format("{} seeds where trained QoE3 > baseline", fmt::join(parts, ", "))};
  });

  criterion("noise increases crashes (case 9 vs 8, 500 epochs)", [] {
    int more = 0;
    std::vector<int> c8, c9;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (int id : {8, 9}) {
        const auto s = generate_scenario(case_preset(id, seed));
        const auto r = train(s, Algorithm::QLearning, Hyperparams::from(s.config), 500);
        (id == 8 ? c8 : c9).push_back(r.logs.back().crashes);
      }
      more += c9.back() > c8.back();
    }
    return Verdict{more >= 4, fmt::format("case 9 > case 8 on {}/5 seeds; crashes case 8 {} vs case 9 {}", more,
                                          c8, c9)};
  });

  criterion("epsilon 0 sarsa == q-learning (3x3, 100 epochs)", [] {
    ScenarioConfig c;
    c.grid_rows = 3;
    c.grid_cols = 3;
    c.num_users = 6;
    c.num_clusters = 1;
    c.cluster_radius_m = {240.0, 240.0};
    c.seed = 5;
    c.rl.epsilon_start = 0.0;
    c.rl.epsilon_end = 0.0;
    const auto s = generate_scenario(c);
    const auto hp = Hyperparams::from(c);
    const auto q = train(s, Algorithm::QLearning, hp, 100);
    const auto sa = train(s, Algorithm::Sarsa, hp, 100);
    int differing = 0;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < q.tables[0].values().size(); ++i) {
      const double d = std::abs(q.tables[0].values()[i] - sa.tables[0].values()[i]);
      differing += d != 0.0;
      max_diff = std::max(max_diff, d);
    }
    return Verdict{differing == 0, fmt::format("{} of {} entries differ (max |dQ| {:.3g})", differing,
                                               q.tables[0].values().size(), max_diff)};
  });

  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
