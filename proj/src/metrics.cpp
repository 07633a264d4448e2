#include "skyfleet/metrics.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"

namespace skyfleet {

QoEReport compute_qoe(std::span<const User> users, const std::vector<std::vector<int>>& coverage_log,
                      const EpochWindow& window) {
  QoEReport r;
  r.epoch = window.epoch;
  if (users.empty()) {
    r.no_users = true;
    return r;
  }

  double completion_sum = 0.0;
  double latency_sum = 0.0;
  int requesting = 0;
  for (const auto& u : users) {
    if (u.request_iter >= window.end) continue;
    ++requesting;
    completion_sum += 100.0 * u.served_iters / u.demand_iters;
    const std::int64_t done = u.completion_iter ? *u.completion_iter : window.end;
    latency_sum += static_cast<double>(done - u.request_iter);
  }
  if (requesting > 0) {
    r.qoe1_pct = completion_sum / requesting;
    r.qoe2_iters = latency_sum / requesting;
  }

  if (!coverage_log.empty()) {
    double cover_sum = 0.0;
    for (const auto& ids : coverage_log) cover_sum += 100.0 * static_cast<double>(ids.size()) / users.size();
    r.qoe3_pct = cover_sum / static_cast<double>(coverage_log.size());
  }
  return r;
}

std::string epoch_csv(std::span<const QoEReport> reports, const RunLabel& label) {
  std::size_t agents = 0;
  for (const auto& r : reports) agents = std::max(agents, r.mean_reward.size());

  std::string out = "epoch,algo,case,seed,qoe1_pct,qoe2_iters,qoe3_pct,crashes";
  for (std::size_t i = 0; i < agents; ++i) out += fmt::format(",mean_reward_agent{}", i);
  out += '\n';
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{}", r.epoch, label.algo, label.case_id, label.seed,
                       r.qoe1_pct, r.qoe2_iters, r.qoe3_pct, r.crashes);
    for (std::size_t i = 0; i < agents; ++i) {
      out += fmt::format(",{:.6f}", i < r.mean_reward.size() ? r.mean_reward[i] : 0.0);
    }
    out += '\n';
  }
  return out;
}

void write_epoch_csv(std::span<const QoEReport> reports, const RunLabel& label, const std::string& path) {
  if (reports.empty()) throw std::invalid_argument("write_epoch_csv needs at least one report");
  const std::string text = epoch_csv(reports, label);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace skyfleet
