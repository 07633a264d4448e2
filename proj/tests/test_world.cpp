#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "skyfleet/errors.hpp"
#include "skyfleet/geometry.hpp"
#include "skyfleet/rng.hpp"
#include "support.hpp"

using namespace skyfleet;

TEST_CASE("footprint is a closed disk") {
  const auto c = testing::flat_config();
  const auto w = testing::blank_world(c);
  std::vector<User> users{testing::user_at(0, w, 4, 4), testing::user_at(1, w, 5, 4), testing::user_at(2, w, 9, 9)};
  users.push_back(users[0]);
  users[3].id = 3;
  users[3].pos_m.x += 600.0;  // exactly on the rim

  const auto in = users_in_footprint({4, 4, 0}, w, users, 600.0);
  CHECK(in == std::vector<int>{0, 1, 3});
  CHECK(users_in_footprint({4, 4, 0}, w, users, 0.0) == std::vector<int>{0});

  // Monotone in radius.
  Rng rng(5);
  std::vector<User> many(200);
  for (auto& u : many) u.pos_m = {rng.uniform(0, 2400), rng.uniform(0, 2400)};
  std::size_t prev = 0;
  for (double r = 0; r <= 3000; r += 150) {
    const auto s = users_in_footprint({3, 6, 0}, w, many, r);
    CHECK(s.size() >= prev);
    prev = s.size();
  }
}

TEST_CASE("altitude bands") {
  auto c = testing::flat_config();
  CHECK_FALSE(is_blocked({3, 3, 0}, testing::blank_world(c), c));

  c.flags.is_3d = true;
  auto w = testing::blank_world(c);
  w.building_height_m[static_cast<std::size_t>(w.index(3, 3))] = 100.0;
  CHECK(is_blocked({3, 3, 0}, w, c));
  CHECK(is_blocked({3, 3, 1}, w, c));
  CHECK(is_blocked({3, 3, 2}, w, c));   // 100 >= 90
  CHECK_FALSE(is_blocked({3, 3, 3}, w, c));  // 100 < 120
  CHECK_FALSE(is_blocked({4, 3, 0}, w, c));
  CHECK_THROWS_AS(is_blocked({10, 3, 0}, w, c), std::out_of_range);
  CHECK_THROWS_AS(is_blocked({3, 3, 4}, w, c), std::out_of_range);
}

TEST_CASE("astar basics") {
  const auto c = testing::flat_config();
  const auto w = testing::blank_world(c);
  const auto p = astar_path({0, 0, 0}, {9, 9, 0}, w);
  CHECK(p.size() == 18);
  CHECK(p.back() == CellCoord{9, 9, 0});
  CHECK(astar_path({4, 4, 0}, {4, 4, 0}, w).empty());
  // Ties follow move order: forward (+y) first.
  CHECK(astar_path({0, 0, 0}, {1, 1, 0}, w).front() == CellCoord{0, 1, 0});
}

TEST_CASE("astar matches breadth-first search on random obstacle grids") {
  auto c = testing::flat_config(8, 8);
  c.flags.is_3d = true;
  c.altitude_levels = 3;
  Rng pick(99);
  int compared = 0, unreachable = 0;
  for (int trial = 0; trial < 50; ++trial) {
    c.seed = static_cast<std::uint64_t>(trial);
    c.obstacle_coverage = 0.15 + 0.01 * (trial % 30);
    const auto w = generate_world(c);
    for (int k = 0; k < 20; ++k) {
      auto draw = [&] {
        return CellCoord{static_cast<int>(pick.below(8)), static_cast<int>(pick.below(8)),
                         static_cast<int>(pick.below(3))};
      };
      const auto a = draw(), b = draw();
      if (oracle::band_blocked(w, a.x, a.y, a.z) || oracle::band_blocked(w, b.x, b.y, b.z)) continue;
      const int expect = oracle::bfs_distance(w, a, b);
      if (expect < 0) {
        CHECK_THROWS_AS(astar_path(a, b, w), UnreachableError);
        ++unreachable;
        continue;
      }
      const auto path = astar_path(a, b, w);
      REQUIRE(static_cast<int>(path.size()) == expect);
      CellCoord prev = a;
      for (const auto& cell : path) {
        CHECK(std::abs(cell.x - prev.x) + std::abs(cell.y - prev.y) + std::abs(cell.z - prev.z) == 1);
        CHECK_FALSE(oracle::band_blocked(w, cell.x, cell.y, cell.z));
        prev = cell;
      }
      ++compared;
      // Ignoring buildings reduces to the L1 distance.
      CHECK(static_cast<int>(astar_path(a, b, w, ObstacleRule::Ignore).size()) ==
            std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z));
    }
  }
  CHECK(compared > 300);

  // A full-height wall splits the grid.
  auto walled = testing::blank_world(c);
  walled.level_height_m = 30.0;
  for (int y = 0; y < 8; ++y) walled.building_height_m[static_cast<std::size_t>(walled.index(4, y))] = 200.0;
  CHECK(oracle::bfs_distance(walled, {0, 0, 0}, {7, 7, 2}) == -1);
  CHECK_THROWS_AS(astar_path({0, 0, 0}, {7, 7, 2}, walled), UnreachableError);
  MESSAGE("compared " << compared << " paths, " << unreachable << " unreachable");
}

TEST_CASE("nearest station") {
  auto c = testing::flat_config();
  const auto w = testing::blank_world(c, {{7, 4, 0}, {1, 1, 0}});
  CHECK(path_to_nearest_cs({7, 4, 0}, w)->empty());
  CHECK(path_to_nearest_cs({2, 4, 0}, w)->size() == 4);  // (1,1) is 4 away, (7,4) is 5
  CHECK(path_to_nearest_cs({6, 6, 0}, w)->size() == 3);
  CHECK_FALSE(path_to_nearest_cs({6, 6, 0}, testing::blank_world(c)).has_value());
}

TEST_CASE("kinematics") {
  const double v = cruise_speed_for(240.0, 60.0, 8.3, 4.0);
  CHECK(v == doctest::Approx(oracle::cruise_root(240.0, 60.0, 4.0)).epsilon(1e-12));
  CHECK(std::abs(v - 4.07) < 0.005);

  const KinematicLimits k{8.3, 4.0, v};
  CHECK(transit_time(0.0, k) == 0.0);
  CHECK(std::abs(transit_time(240.0, k) - 60.0) < 0.1);
  const KinematicLimits fast{8.3, 4.0, 8.3};
  CHECK(std::abs(transit_time(240.0, fast) - 30.99) < 0.1);
  CHECK(transit_time(240.0, fast) == doctest::Approx(oracle::transit_seconds(240.0, 8.3, 4.0)));
  CHECK_THROWS_AS(transit_time(-1.0, k), std::invalid_argument);
  CHECK_THROWS_AS(cruise_speed_for(240.0, 5.0, 8.3, 4.0), ConfigError);

  // Monotone and continuous across the triangle/trapezoid boundary.
  double prev = 0.0;
  for (double d = 0.0; d <= 600.0; d += 0.5) {
    const double t = transit_time(d, fast);
    CHECK(t >= prev - 1e-12);
    prev = t;
  }
  const double edge = 8.3 * 8.3 / 4.0;
  CHECK(transit_time(edge - 1e-9, fast) == doctest::Approx(transit_time(edge + 1e-9, fast)).epsilon(1e-6));

  const auto limits = kinematic_limits(testing::flat_config());
  CHECK(limits.v_cruise_mps == doctest::Approx(v));
}
