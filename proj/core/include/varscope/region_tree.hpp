#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "varscope/conditions.hpp"
#include "varscope/diagnostics.hpp"
#include "varscope/scanner.hpp"

namespace varscope {

/// One branch of an `#if ... #endif` group, or the file root (id 0).
struct ConditionalRegion {
  int id = 0;
  int group_id = -1;  // -1 for the root
  int branch_index = 0;
  std::optional<std::string> own_condition;  // directive argument; none for #else and the root
  PresenceCondition own_pc;                  // parsed own condition (True for #else)
  PresenceCondition branch_pc;               // derived from the group
  PresenceCondition effective_pc;
  int parent = -1;
  std::size_t begin = 0;  // body as a half-open range of logical line indices
  std::size_t end = 0;
  std::vector<int> children;
  std::vector<std::size_t> text_lines;
  bool discarded = false;  // #elif/#else after #else
};

struct RegionTree {
  std::vector<ConditionalRegion> regions;  // regions[0] is the file root
  std::vector<int> line_region;            // innermost region of every logical line

  const ConditionalRegion& root() const { return regions.front(); }
  const PresenceCondition& pc_of_line(std::size_t line) const {
    return regions[static_cast<std::size_t>(line_region[line])].effective_pc;
  }
};

/// Incremental construction, driven by a scanner that parses conditions
/// against a macro table evolving in file order.
class RegionBuilder {
 public:
  RegionBuilder(PresenceCondition root_pc, const std::vector<LogicalLine>& lines, std::string file,
                Diagnostics& diags);

  int current() const { return stack_.back().region; }
  const PresenceCondition& current_pc() const;

  /// Context in which the argument of an `#elif` at this point is parsed:
  /// the enclosing pc conjoined with the negation of the earlier branches.
  PresenceCondition elif_context() const;

  bool in_group() const { return stack_.size() > 1; }

  void open(std::size_t line, std::string text, PresenceCondition cond);
  void elif(std::size_t line, std::string text, PresenceCondition cond);
  void else_branch(std::size_t line);
  void endif(std::size_t line);
  void text(std::size_t line);
  void directive(std::size_t line);

  RegionTree finish();

 private:
  struct Open {
    int parent = -1;
    int region = 0;
    int group_id = -1;
    int branches = 0;
    std::vector<std::optional<PresenceCondition>> conds;
    bool seen_else = false;
    std::size_t open_line = 0;
  };
  int add_branch(Open& group, std::size_t directive_line, std::optional<std::string> text,
                 std::optional<PresenceCondition> cond, bool discarded);
  void close_branch(std::size_t directive_line);
  int physical(std::size_t line) const;

  RegionTree tree_;
  std::vector<Open> stack_;
  std::string file_;
  Diagnostics& diags_;
  int next_group_ = 0;
  const std::vector<LogicalLine>& lines_;
};

/// `#if` argument as written; `#ifdef X` and `#ifndef X` normalized to
/// `defined(X)` and `!defined(X)`.
std::string condition_text(const Directive& directive);

/// Builds the region tree of already scanned items. Conditions are parsed
/// by `parse_condition(argument, context)`; the default parses them as
/// written with no macro expansion.
using ConditionCallback = std::function<PresenceCondition(const std::string&, const PresenceCondition&)>;

RegionTree build_region_tree(const std::vector<LogicalLine>& lines, const std::vector<ScanItem>& items,
                             Diagnostics& diags, const std::string& file = {},
                             const ConditionCallback& parse_condition = {},
                             const PresenceCondition& root_pc = PresenceCondition{});

}  // namespace varscope
