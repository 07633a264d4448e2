#include "skyfleet/render.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace skyfleet {

using nlohmann::json;

json find_trace_record(const std::string& trace, std::int64_t iteration) {
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = json::parse(line);
    if (rec.at("iteration").get<std::int64_t>() == iteration) return rec;
  }
  throw std::runtime_error(fmt::format("trace has no record for iteration {}", iteration));
}

namespace {

constexpr const char* kServiceColors[kServiceTypes] = {"#1f77b4", "#9467bd", "#ff7f0e"};

// Building shade: light grey for short blocks, dark for the tallest.
std::string shade(double h, double tallest) {
  const double t = tallest > 0.0 ? std::clamp(h / tallest, 0.0, 1.0) : 1.0;
  const int v = static_cast<int>(200.0 - 140.0 * t);
  return fmt::format("#{:02x}{:02x}{:02x}", v, v, v);
}

}  // namespace

std::string render_svg(const Scenario& scenario, const json& record) {
  const auto& w = scenario.world;
  const double cell = w.cell_size_m;
  const double width = w.cols * cell;
  const double height = w.rows * cell;

  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.1f} {:.1f}\" width=\"{:.0f}\" height=\"{:.0f}\">\n",
      width, height, width / 4.0, height / 4.0);
  s += fmt::format("<rect class=\"ground\" x=\"0\" y=\"0\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#f7f7f2\"/>\n",
                   width, height);

  for (int y = 0; y < w.rows; ++y) {
    for (int x = 0; x < w.cols; ++x) {
      const double h = w.height_at(x, y);
      if (h <= 0.0) continue;
      s += fmt::format("<rect class=\"building\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                       "fill=\"{}\"><title>{:.1f} m</title></rect>\n",
                       x * cell, y * cell, cell, cell, shade(h, w.tallest_building_m), h);
    }
  }

  s += "<g class=\"grid\" stroke=\"#cccccc\" stroke-width=\"2\">\n";
  for (int x = 0; x <= w.cols; ++x) {
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"0\" x2=\"{:.1f}\" y2=\"{:.1f}\"/>\n", x * cell, x * cell, height);
  }
  for (int y = 0; y <= w.rows; ++y) {
    s += fmt::format("<line x1=\"0\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\"/>\n", y * cell, width, y * cell);
  }
  s += "</g>\n";

  const double m = cell * 0.2;
  for (const auto& cs : w.cs_cells) {
    const auto c = w.cell_center(cs);
    s += fmt::format("<rect class=\"cs\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                     "fill=\"#2ca02c\"/>\n",
                     c.x - m, c.y - m, 2 * m, 2 * m);
  }

  // Users: moving populations carry their positions in the trace.
  const bool traced = record.contains("users");
  for (std::size_t i = 0; i < scenario.users.size(); ++i) {
    const auto& u = scenario.users[i];
    Vec2 p = u.pos_m;
    if (traced) p = {record["users"].at(i).at(0).get<double>(), record["users"].at(i).at(1).get<double>()};
    s += fmt::format("<circle class=\"user\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"{:.1f}\" fill=\"{}\"/>\n", p.x, p.y,
                     cell * 0.06, kServiceColors[static_cast<int>(u.service)]);
  }

  const double radius = scenario.config.uav.footprint_radius_m;
  const double arm = cell * 0.25;
  for (const auto& a : record.at("agents")) {
    const CellCoord at{a["cell"].at(0).get<int>(), a["cell"].at(1).get<int>(), a["cell"].at(2).get<int>()};
    const auto c = w.cell_center(at);

    const auto& path = a.at("path");
    if (!path.empty()) {
      std::string pts = fmt::format("{:.1f},{:.1f}", c.x, c.y);
      for (const auto& p : path) {
        const auto q = w.cell_center(CellCoord{p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
        pts += fmt::format(" {:.1f},{:.1f}", q.x, q.y);
      }
      s += fmt::format("<polyline class=\"path\" points=\"{}\" fill=\"none\" stroke=\"#d62728\" "
                       "stroke-width=\"8\" stroke-dasharray=\"24 12\"/>\n",
                       pts);
    }

    s += fmt::format("<circle class=\"footprint\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"{:.1f}\" fill=\"#d62728\" "
                     "fill-opacity=\"0.08\" stroke=\"#d62728\" stroke-width=\"4\"/>\n",
                     c.x, c.y, radius);
    s += fmt::format("<g class=\"agent\" stroke=\"#000000\" stroke-width=\"12\">"
                     "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\"/>"
                     "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\"/>"
                     "<title>uav {} z={} {}</title></g>\n",
                     c.x - arm, c.y - arm, c.x + arm, c.y + arm, c.x - arm, c.y + arm, c.x + arm, c.y - arm,
                     a.at("id").get<int>(), at.z, a.at("mode").get<std::string>());
  }
  s += "</svg>\n";
  return s;
}

}  // namespace skyfleet
