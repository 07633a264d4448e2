#pragma once

#include <compare>
#include <cstdint>
#include <optional>

namespace skyfleet {

/// Continuous map position in meters; origin at the corner of cell (0, 0).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Grid cell: x is the column, y the row, z the altitude level (0 in 2D).
struct CellCoord {
  int x = 0;
  int y = 0;
  int z = 0;
  friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

enum class ServiceType : std::uint8_t { Throughput = 0, EdgeComputing = 1, DataGathering = 2 };
inline constexpr int kServiceTypes = 3;

const char* to_string(ServiceType s);

struct User {
  int id = 0;
  int home_cluster = 0;
  Vec2 pos_m;
  ServiceType service = ServiceType::Throughput;
  int demand_iters = 1;
  double bw_need_mhz = 0.0;
  /// Global iteration at which the current request becomes active.
  std::int64_t request_iter = 0;
  int served_iters = 0;
  std::optional<std::int64_t> completion_iter;

  bool completed() const { return served_iters >= demand_iters; }
  bool requesting(std::int64_t now) const { return request_iter <= now; }
};

}  // namespace skyfleet
