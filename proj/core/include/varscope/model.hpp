#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "varscope/conditions.hpp"
#include "varscope/diagnostics.hpp"

namespace varscope {

inline constexpr int kSchemaVersion = 1;

enum class EntityKind { TranslationUnit, Function, GlobalVariable, Struct, Union, Enum };

std::string_view to_string(EntityKind kind);
/// Short form used inside ids: tu, fn, var, struct, union, enum.
std::string_view kind_code(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view text);
bool is_composite(EntityKind kind);

enum class RelationKind { Calls, Reads, Writes, Contains };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_kind_from_string(std::string_view text);

struct Span {
  std::string file;
  int start = 0;
  int end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::Function;
  std::string name;
  PresenceCondition pc;
  Span span;
  int loc = 0;
  std::string parent;  // empty for translation units

  // Translation units only.
  std::vector<std::string> includes;  // resolved paths, or the spelled name for stubs
  std::vector<std::string> uses;      // atoms tested anywhere in the unit's own text

  friend bool operator==(const Entity&, const Entity&) = default;
};

/// `<relative-path>!<kind>!<name>[@branchN]`
std::string entity_id(std::string_view file, EntityKind kind, std::string_view name,
                      std::optional<int> branch = std::nullopt);

struct Relation {
  RelationKind kind = RelationKind::Calls;
  std::string source;
  std::string target;
  PresenceCondition pc;
  std::vector<SourceLocation> sites;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct ModelMeta {
  std::string tool_version;
  std::string input_root;
  std::string timestamp;  // ISO 8601, UTC

  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

struct VariabilityModel {
  int schema_version = kSchemaVersion;
  ModelMeta meta;
  std::vector<std::string> features;  // sorted
  std::vector<Entity> entities;       // sorted by id
  std::vector<Relation> relations;
  std::vector<Diagnostic> diagnostics;

  const Entity* find(std::string_view id) const;
  std::size_t unit_count() const;

  friend bool operator==(const VariabilityModel&, const VariabilityModel&) = default;
};

/// Sorts entities and relations, adds Contains edges from parent links and
/// computes the feature list: every atom of an entity pc, relation pc or
/// unit `uses` set, minus `concrete` names and opaque parse-error atoms.
/// Throws Error{"DuplicateEntityId"}.
VariabilityModel build_model(std::vector<Entity> entities, std::vector<Relation> relations,
                             const std::set<std::string>& concrete, std::vector<Diagnostic> diagnostics = {},
                             ModelMeta meta = {});

struct InclusionMap {
  Configuration configuration;
  std::vector<bool> entities;   // parallel to model.entities
  std::vector<bool> relations;  // parallel to model.relations

  std::size_t included_count() const;
};

/// Features named by `config` that the model does not know are reported to
/// `sink` as UnknownFeature and otherwise ignored.
InclusionMap evaluate_configuration(const VariabilityModel& model, const Configuration& config,
                                    Diagnostics* sink = nullptr);

struct FeatureImpact {
  std::vector<std::string> entities;           // ids whose pc mentions the feature
  std::vector<std::string> translation_units;  // ids of affected units
  std::size_t total_units = 0;

  double percent() const;
};

/// Throws Error{"UnknownFeature"}.
FeatureImpact feature_impact(const VariabilityModel& model, std::string_view feature);

struct ConfigurationDiff {
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
  std::vector<std::string> in_both;
};

ConfigurationDiff diff_configurations(const VariabilityModel& model, const Configuration& a,
                                      const Configuration& b);

/// Case-insensitive substring search on names: exact matches first, then
/// prefixes, then other matches; ids ascending within a rank.
std::vector<std::string> search(const VariabilityModel& model, std::string_view query);

std::string model_to_json(const VariabilityModel& model);
/// Throws Error{"SchemaVersionMismatch"} or Error{"MalformedModelFile"}.
VariabilityModel model_from_json(std::string_view json);

void save_model(const VariabilityModel& model, const std::filesystem::path& path);
VariabilityModel load_model(const std::filesystem::path& path);

}  // namespace varscope
