#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "varscope/model.hpp"

namespace varscope {

inline constexpr int kLayoutSchemaVersion = 1;

/// Tunables of the disk geometry. Angles grow clockwise on screen: x to the
/// right, y downwards, angle 0 along +x.
struct LayoutConfig {
  double scale_k = 1.0;          // segment area per line of code
  double variable_loc = 5.0;     // a variable is as large as a function of this many lines
  double gap_degrees = 2.0;      // gap after every segment of a ring
  double margin_fraction = 0.02; // sibling separation and inner padding, relative to radius
  double min_radius = 1.0;       // core radius of a disk without nested disks
  int spiral_steps = 64;         // probes per spiral turn
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

enum class ColorClass { UnitGray, CompositePurple, FunctionBlue, VariableYellow };

std::string_view to_string(ColorClass color);

struct Segment {
  std::string entity_id;
  std::string disk;  // id of the owning disk
  ColorClass color = ColorClass::FunctionBlue;
  double start_angle = 0.0;
  double end_angle = 0.0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  double area = 0.0;
  bool operator==(const Segment&) const = default;
};

struct Disk {
  std::string entity_id;
  ColorClass color = ColorClass::UnitGray;
  Point center;
  double radius = 0.0;
  double ring_inner = 0.0;  // nested disks lie inside this circle
  double ring_outer = 0.0;
  std::vector<Disk> children;
  std::vector<Segment> segments;
  bool operator==(const Disk&) const = default;
};

struct LayoutDocument {
  int schema_version = kLayoutSchemaVersion;
  double scale_k = 1.0;
  std::vector<Disk> disks;
  bool operator==(const LayoutDocument&) const = default;
};

/// Centers for disks of the given radii (sorted descending), the first at
/// the origin and every other one on the first free probe of a clockwise
/// Archimedean spiral.
std::vector<Point> pack_disks(const std::vector<double>& radii, const LayoutConfig& config = {});

/// Required distance between the centers of two sibling disks.
double separation(double a, double b, const LayoutConfig& config = {});

struct SegmentMember {
  std::string entity_id;
  EntityKind kind = EntityKind::Function;
  int loc = 0;
};

struct SegmentRings {
  std::vector<Segment> segments;  // inner (variable) ring first, then the function ring
  double outer_radius = 0.0;
};

/// Lays the functions and variables of one disk around a core of radius
/// `core`. Functions of no lines are sized as one line.
SegmentRings assign_segments(const std::vector<SegmentMember>& members, double core, const LayoutConfig& config = {});

/// Geometry of the complete model. Configurations never influence it.
LayoutDocument compute_layout(const VariabilityModel& model, const LayoutConfig& config = {});

/// Sorted keys, numbers rounded to 9 significant digits.
std::string layout_to_json(const LayoutDocument& layout);
void save_layout(const LayoutDocument& layout, const std::filesystem::path& path);

}  // namespace varscope
