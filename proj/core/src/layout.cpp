#include "varscope/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace varscope {

std::string_view to_string(ColorClass color) {
  switch (color) {
    case ColorClass::UnitGray: return "unit-gray";
    case ColorClass::CompositePurple: return "composite-purple";
    case ColorClass::FunctionBlue: return "function-blue";
    case ColorClass::VariableYellow: return "variable-yellow";
  }
  return "unit-gray";
}

double separation(double a, double b, const LayoutConfig& config) {
  return a + b + config.margin_fraction * std::max(a, b);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid over placed disks. Disk 0 is checked separately because it
/// may be far larger than the cell size.
class Grid {
 public:
  Grid(double cell) : cell_(cell) {}

  void add(std::size_t index, Point p) { cells_[key(cell_of(p.x), cell_of(p.y))].push_back(index); }

  template <typename Visit>
  bool all_of_near(Point p, Visit&& visit) const {
    const auto cx = cell_of(p.x);
    const auto cy = cell_of(p.y);
    for (std::int64_t dx = -2; dx <= 2; ++dx)
      for (std::int64_t dy = -2; dy <= 2; ++dy) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const auto i : it->second)
          if (!visit(i)) return false;
      }
    return true;
  }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffu);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

std::vector<Point> pack_disks(const std::vector<double>& radii, const LayoutConfig& config) {
  std::vector<Point> centers;
  if (radii.empty()) return centers;
  centers.reserve(radii.size());
  centers.push_back({0.0, 0.0});
  if (radii.size() == 1) return centers;

  const double largest_rest = *std::max_element(radii.begin() + 1, radii.end());
  Grid grid(std::max(2.0 * largest_rest, 1e-9));
  const double step = kTwoPi / config.spiral_steps;

  for (std::size_t i = 1; i < radii.size(); ++i) {
    const double r = radii[i];
    const double pitch = *std::min_element(radii.begin() + static_cast<std::ptrdiff_t>(i), radii.end());
    const double start = separation(radii[0], r, config);
    auto fits = [&](Point p) {
      if (std::hypot(p.x, p.y) < separation(radii[0], r, config)) return false;
      return grid.all_of_near(p, [&](std::size_t j) {
        return std::hypot(p.x - centers[j].x, p.y - centers[j].y) >= separation(radii[j], r, config);
      });
    };
    for (long probe = 0;; ++probe) {
      const double theta = step * static_cast<double>(probe);
      const double rho = start + pitch * theta / kTwoPi;
      const Point p{rho * std::cos(theta), rho * std::sin(theta)};
      if (fits(p)) {
        centers.push_back(p);
        grid.add(i, p);
        break;
      }
    }
  }
  return centers;
}

SegmentRings assign_segments(const std::vector<SegmentMember>& members, double core, const LayoutConfig& config) {
  SegmentRings out;
  out.outer_radius = core;

  struct Item {
    const SegmentMember* member;
    double area;
  };
  std::vector<Item> variables;
  std::vector<Item> functions;
  for (const auto& m : members) {
    if (m.kind == EntityKind::GlobalVariable)
      variables.push_back({&m, config.scale_k * config.variable_loc});
    else if (m.kind == EntityKind::Function)
      functions.push_back({&m, config.scale_k * std::max(m.loc, 1)});
  }

  auto ring = [&](std::vector<Item>& items, ColorClass color) {
    if (items.empty()) return;
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return a.area != b.area ? a.area > b.area : a.member->entity_id < b.member->entity_id;
    });
    const double n = static_cast<double>(items.size());
    double gap = config.gap_degrees * std::numbers::pi / 180.0;
    if (n * gap > std::numbers::pi) gap = std::numbers::pi / n;
    double total = 0.0;
    for (const auto& it : items) total += it.area;
    const double inner = out.outer_radius;
    const double spread = 2.0 * total / (kTwoPi - n * gap);  // outer^2 - inner^2
    const double outer = std::sqrt(inner * inner + spread);
    double angle = 0.0;
    for (const auto& it : items) {
      const double sweep = 2.0 * it.area / spread;
      Segment s;
      s.entity_id = it.member->entity_id;
      s.color = color;
      s.start_angle = angle;
      s.end_angle = angle + sweep;
      s.inner_radius = inner;
      s.outer_radius = outer;
      s.area = sweep / 2.0 * (outer * outer - inner * inner);
      out.segments.push_back(std::move(s));
      angle += sweep + gap;
    }
    out.outer_radius = outer;
  };
  ring(variables, ColorClass::VariableYellow);
  ring(functions, ColorClass::FunctionBlue);
  return out;
}

namespace {

struct Node {
  const Entity* entity = nullptr;
  std::vector<Node*> children;
  std::vector<SegmentMember> members;
  Disk disk;  // centers of children relative to this disk until placed
};

bool is_disk(EntityKind kind) { return kind == EntityKind::TranslationUnit || is_composite(kind); }

void order_by_size(std::vector<Node*>& nodes) {
  std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) {
    return a->disk.radius != b->disk.radius ? a->disk.radius > b->disk.radius
                                            : a->entity->id < b->entity->id;
  });
}

/// Packs `nodes` (already sized) and returns their centers plus the radius of
/// the circle around the origin enclosing them.
std::pair<std::vector<Point>, double> pack(std::vector<Node*>& nodes, const LayoutConfig& config) {
  order_by_size(nodes);
  std::vector<double> radii;
  for (const auto* n : nodes) radii.push_back(n->disk.radius);
  auto centers = pack_disks(radii, config);
  double enclosing = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    enclosing = std::max(enclosing, std::hypot(centers[i].x, centers[i].y) + radii[i]);
  return {std::move(centers), enclosing};
}

void size(Node& node, const LayoutConfig& config) {
  for (auto* child : node.children) size(*child, config);
  auto [centers, enclosing] = pack(node.children, config);
  double core = config.min_radius;
  if (!node.children.empty()) core = std::max(core, enclosing * (1.0 + 2.0 * config.margin_fraction));
  auto rings = assign_segments(node.members, core, config);
  for (auto& s : rings.segments) s.disk = node.entity->id;

  auto& d = node.disk;
  d.entity_id = node.entity->id;
  d.color = node.entity->kind == EntityKind::TranslationUnit ? ColorClass::UnitGray : ColorClass::CompositePurple;
  d.ring_inner = core;
  d.ring_outer = rings.outer_radius;
  d.radius = rings.outer_radius;
  d.segments = std::move(rings.segments);
  for (std::size_t i = 0; i < node.children.size(); ++i) node.children[i]->disk.center = centers[i];
}

Disk place(Node& node, Point origin) {
  Disk d = std::move(node.disk);
  d.center = {origin.x + d.center.x, origin.y + d.center.y};
  for (auto* child : node.children) d.children.push_back(place(*child, d.center));
  return d;
}

}  // namespace

LayoutDocument compute_layout(const VariabilityModel& model, const LayoutConfig& config) {
  LayoutDocument doc;
  doc.scale_k = config.scale_k;

  std::vector<Node> nodes;
  nodes.reserve(model.entities.size());
  std::map<std::string, Node*, std::less<>> by_id;
  for (const auto& e : model.entities) {
    if (!is_disk(e.kind)) continue;
    nodes.push_back(Node{&e, {}, {}, {}});
  }
  for (auto& n : nodes) by_id[n.entity->id] = &n;

  std::vector<Node*> top;
  for (auto& n : nodes) {
    const auto parent = by_id.find(n.entity->parent);
    if (parent != by_id.end() && parent->second != &n)
      parent->second->children.push_back(&n);
    else
      top.push_back(&n);
  }
  for (const auto& e : model.entities) {
    if (is_disk(e.kind)) continue;
    const auto parent = by_id.find(e.parent);
    if (parent == by_id.end()) continue;
    parent->second->members.push_back({e.id, e.kind, e.loc});
  }

  for (auto* n : top) size(*n, config);
  auto centers = pack(top, config).first;
  for (std::size_t i = 0; i < top.size(); ++i) {
    top[i]->disk.center = centers[i];
    doc.disks.push_back(place(*top[i], {0.0, 0.0}));
  }
  return doc;
}

}  // namespace varscope
