#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varscope/diagnostics.hpp"

namespace varscope {

struct PhysicalSpan {
  int start = 1;  // inclusive, 1-based
  int end = 1;

  friend bool operator==(const PhysicalSpan&, const PhysicalSpan&) = default;
};

/// One line after backslash-newline splicing, with every comment replaced by
/// a single space. A block comment that crosses newlines joins the physical
/// lines it covers into one logical line.
struct LogicalLine {
  int file_id = 0;
  PhysicalSpan physical_span;
  std::string text;

  friend bool operator==(const LogicalLine&, const LogicalLine&) = default;
};

/// `file` is only used to label diagnostics.
std::vector<LogicalLine> splice_and_strip(std::string_view raw_bytes, Diagnostics& diags,
                                          const std::string& file = {}, int file_id = 0);

enum class DirectiveKind { If, Ifdef, Ifndef, Elif, Else, Endif, Define, Undef, Include, Other };

std::string_view to_string(DirectiveKind kind);

struct Directive {
  DirectiveKind kind = DirectiveKind::Other;
  std::string keyword;   // as written, e.g. "include_next"
  std::string argument;  // trimmed text after the keyword
  std::size_t line = 0;  // index into the logical lines

  friend bool operator==(const Directive&, const Directive&) = default;
};

/// A logical line classified as directive or text.
struct ScanItem {
  std::size_t line = 0;
  std::optional<Directive> directive;

  bool is_directive() const { return directive.has_value(); }
  friend bool operator==(const ScanItem&, const ScanItem&) = default;
};

std::vector<ScanItem> scan_directives(const std::vector<LogicalLine>& lines);

/// True for lines that hold nothing but whitespace.
bool is_blank_line(const LogicalLine& line);

}  // namespace varscope
