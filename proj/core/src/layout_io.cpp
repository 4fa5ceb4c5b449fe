#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "varscope/diagnostics.hpp"
#include "varscope/layout.hpp"

namespace varscope {

using json = nlohmann::json;

namespace {

double round9(double v) {
  if (v == 0.0 || !std::isfinite(v)) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json disk_json(const Disk& d) {
  json children = json::array();
  for (const auto& c : d.children) children.push_back(disk_json(c));
  return {{"id", d.entity_id},
          {"color", to_string(d.color)},
          {"center", {round9(d.center.x), round9(d.center.y)}},
          {"radius", round9(d.radius)},
          {"ring_inner", round9(d.ring_inner)},
          {"ring_outer", round9(d.ring_outer)},
          {"children", std::move(children)}};
}

void collect_segments(const Disk& d, json& out) {
  for (const auto& s : d.segments)
    out.push_back({{"id", s.entity_id},
                   {"disk", s.disk},
                   {"color", to_string(s.color)},
                   {"start_angle", round9(s.start_angle)},
                   {"end_angle", round9(s.end_angle)},
                   {"inner_radius", round9(s.inner_radius)},
                   {"outer_radius", round9(s.outer_radius)},
                   {"area", round9(s.area)}});
  for (const auto& c : d.children) collect_segments(c, out);
}

}  // namespace

std::string layout_to_json(const LayoutDocument& layout) {
  json disks = json::array();
  json segments = json::array();
  for (const auto& d : layout.disks) {
    disks.push_back(disk_json(d));
    collect_segments(d, segments);
  }
  const json doc = {{"schema_version", layout.schema_version},
                    {"scale_k", round9(layout.scale_k)},
                    {"disks", std::move(disks)},
                    {"segments", std::move(segments)}};
  return doc.dump(2) + "\n";
}

void save_layout(const LayoutDocument& layout, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("OutputError", "cannot write " + path.string());
  out << layout_to_json(layout);
  if (!out) throw Error("OutputError", "cannot write " + path.string());
}

}  // namespace varscope
