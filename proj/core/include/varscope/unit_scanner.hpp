#pragma once

#include <set>
#include <string>
#include <vector>

#include "varscope/diagnostics.hpp"
#include "varscope/macros.hpp"
#include "varscope/region_tree.hpp"
#include "varscope/scanner.hpp"
#include "varscope/source_tree.hpp"

namespace varscope {

enum class IncludeMode { ProjectOnly, Full };

std::string_view to_string(IncludeMode mode);
IncludeMode include_mode_from_string(std::string_view text);  // throws Error{"InvalidArgument"}

struct ScanOptions {
  std::vector<std::string> include_paths;  // relative to the tree root, or absolute
  std::vector<std::string> predefines;     // NAME or NAME=VALUE
  IncludeMode include_mode = IncludeMode::ProjectOnly;
  std::vector<std::string> system_paths = {"/usr/local/include", "/usr/include"};  // full mode only
};

struct IncludeEdge {
  std::string from;
  std::string spelled;   // "name" or <name>
  std::string resolved;  // empty for a stub
  int line = 0;
  PresenceCondition pc;
};

struct ScannedFile {
  std::string path;
  std::vector<LogicalLine> lines;
  std::vector<ScanItem> items;
  RegionTree regions;
};

/// A translation unit after preprocessing analysis: the main file's region
/// tree and its text as macro-expanded, pc-tagged tokens. Included files
/// contribute macros and include edges only.
struct UnitScan {
  std::string path;
  ScannedFile main;
  std::vector<PcToken> tokens;
  std::vector<IncludeEdge> includes;
  MacroTable macros;
  std::set<std::string> concrete;  // names with a value in every configuration
  Diagnostics diagnostics;
};

inline constexpr int kMaxIncludeDepth = 64;

/// `path` is a file of `tree`. Throws Error{"InputNotFound"} when it cannot
/// be read.
UnitScan scan_unit(const SourceTree& tree, const std::string& path, const ScanOptions& options = {});

}  // namespace varscope
