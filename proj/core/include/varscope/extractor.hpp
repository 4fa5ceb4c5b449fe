#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "varscope/model.hpp"
#include "varscope/unit_scanner.hpp"

namespace varscope {

/// Token range of one variant of a function body: `open`/`close` index the
/// braces in UnitScan::tokens.
struct BodyVariant {
  PresenceCondition pc;
  std::size_t open = 0;
  std::size_t close = 0;
  std::vector<std::size_t> params;
};

struct ExtractedEntity {
  EntityKind kind = EntityKind::Function;
  std::string name;
  PresenceCondition pc;
  int start_line = 0;
  int end_line = 0;
  int loc = 0;
  int parent = -1;  // index of the enclosing composite, -1 for the unit
  bool is_static = false;
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::vector<BodyVariant> bodies;  // functions
};

/// Upper bound on simultaneously live parser states.
inline constexpr std::size_t kMaxParseStates = 1024;

/// Finds functions, global variables and composite types in the unit's
/// pc-tagged tokens. Every configuration follows exactly one path through
/// the parser, so an entity's pc is exactly the set of configurations in
/// which plain parsing of that configuration's tokens finds it. Entities
/// are returned in source order.
std::vector<ExtractedEntity> extract_entities(const UnitScan& unit, Diagnostics& diags);

/// Non-blank logical text lines of the main file whose first physical line
/// lies in [start, end].
int count_loc(const UnitScan& unit, int start, int end);

/// Name given to an anonymous composite.
std::string anonymous_name(EntityKind kind, std::string_view file, int line);

/// Ids for the entities of one unit: duplicates of a (kind, name) pair get
/// `@branchN`, N counting from 0 in source order.
std::vector<std::string> assign_ids(const std::string& file, const std::vector<ExtractedEntity>& entities);

struct UnitExtraction {
  const UnitScan* scan = nullptr;
  std::vector<ExtractedEntity> entities;
  std::vector<std::string> ids;
};

/// Calls from function bodies to known functions of any unit. Same-unit
/// definitions take precedence; static functions are visible only in their
/// own unit.
std::vector<Relation> detect_calls(const std::vector<UnitExtraction>& units, Diagnostics& diags);

/// Reads and writes of global variables from function bodies. Locals and
/// parameters shadow globals of the same name.
std::vector<Relation> detect_accesses(const std::vector<UnitExtraction>& units, Diagnostics& diags);

}  // namespace varscope
