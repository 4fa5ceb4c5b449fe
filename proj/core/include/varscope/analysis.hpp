#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varscope/model.hpp"
#include "varscope/source_tree.hpp"
#include "varscope/unit_scanner.hpp"

namespace varscope {

struct AnalysisOptions {
  ScanOptions scan;
  std::string input_root;         // recorded in the model meta
  std::vector<std::string> units;  // restrict analysis to these .c files; all when empty
  std::int64_t timestamp = 0;      // seconds since the epoch, recorded in the meta
};

/// Every `.c` file of `tree` is a translation unit.
std::vector<std::string> translation_units(const SourceTree& tree);

/// Scans, extracts and links all units of `tree` into one model. Units are
/// processed in path order, so the result is a function of the inputs.
VariabilityModel analyze(const SourceTree& tree, const AnalysisOptions& options = {});

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(std::int64_t seconds);

std::string tool_version();

}  // namespace varscope
