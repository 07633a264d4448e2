#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skyfleet/types.hpp"

namespace skyfleet {

struct QoEReport {
  int epoch = 0;
  /// Mean per-user completion percentage.
  double qoe1_pct = 0.0;
  /// Mean iterations from request to completion; unfinished requests count the
  /// time elapsed up to the end of the window.
  double qoe2_iters = 0.0;
  /// Time-averaged percentage of users covered.
  double qoe3_pct = 0.0;
  int crashes = 0;
  std::vector<double> mean_reward;
  double epsilon = 0.0;
  /// Set when there were no users to measure.
  bool no_users = false;
};

/// Iterations [start, end) of one epoch.
struct EpochWindow {
  int epoch = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

/// QoE over the users whose request arrived before the window closed.
/// `coverage_log` holds the covered user ids of each iteration of the window.
QoEReport compute_qoe(std::span<const User> users, const std::vector<std::vector<int>>& coverage_log,
                      const EpochWindow& window);

struct RunLabel {
  std::string algo;
  int case_id = 0;
  std::uint64_t seed = 0;
};

std::string epoch_csv(std::span<const QoEReport> reports, const RunLabel& label);

/// Throws std::invalid_argument for an empty report list (no file is
/// created) and IoError when the file cannot be written.
void write_epoch_csv(std::span<const QoEReport> reports, const RunLabel& label, const std::string& path);

}  // namespace skyfleet
