#include "varscope/model.hpp"

#include <algorithm>
#include <map>

#include "varscope/macros.hpp"
#include "varscope/text.hpp"

namespace varscope {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::TranslationUnit: return "TranslationUnit";
    case EntityKind::Function: return "Function";
    case EntityKind::GlobalVariable: return "GlobalVariable";
    case EntityKind::Struct: return "Struct";
    case EntityKind::Union: return "Union";
    case EntityKind::Enum: return "Enum";
  }
  return "Function";
}

std::string_view kind_code(EntityKind kind) {
  switch (kind) {
    case EntityKind::TranslationUnit: return "tu";
    case EntityKind::Function: return "fn";
    case EntityKind::GlobalVariable: return "var";
    case EntityKind::Struct: return "struct";
    case EntityKind::Union: return "union";
    case EntityKind::Enum: return "enum";
  }
  return "fn";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view text) {
  for (const auto k : {EntityKind::TranslationUnit, EntityKind::Function, EntityKind::GlobalVariable,
                       EntityKind::Struct, EntityKind::Union, EntityKind::Enum})
    if (to_string(k) == text || kind_code(k) == text) return k;
  return std::nullopt;
}

bool is_composite(EntityKind kind) {
  return kind == EntityKind::Struct || kind == EntityKind::Union || kind == EntityKind::Enum;
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Calls: return "Calls";
    case RelationKind::Reads: return "Reads";
    case RelationKind::Writes: return "Writes";
    case RelationKind::Contains: return "Contains";
  }
  return "Calls";
}

std::optional<RelationKind> relation_kind_from_string(std::string_view text) {
  for (const auto k : {RelationKind::Calls, RelationKind::Reads, RelationKind::Writes, RelationKind::Contains})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::string entity_id(std::string_view file, EntityKind kind, std::string_view name, std::optional<int> branch) {
  std::string id;
  id.reserve(file.size() + name.size() + 16);
  id += file;
  id += '!';
  id += kind_code(kind);
  id += '!';
  id += name;
  if (branch) id += "@branch" + std::to_string(*branch);
  return id;
}

const Entity* VariabilityModel::find(std::string_view id) const {
  const auto it = std::lower_bound(entities.begin(), entities.end(), id,
                                   [](const Entity& e, std::string_view key) { return e.id < key; });
  return it != entities.end() && it->id == id ? &*it : nullptr;
}

std::size_t VariabilityModel::unit_count() const {
  return static_cast<std::size_t>(std::count_if(entities.begin(), entities.end(), [](const Entity& e) {
    return e.kind == EntityKind::TranslationUnit;
  }));
}

namespace {

bool relation_less(const Relation& a, const Relation& b) {
  return std::tie(a.source, a.target, a.kind) < std::tie(b.source, b.target, b.kind);
}

}  // namespace

VariabilityModel build_model(std::vector<Entity> entities, std::vector<Relation> relations,
                             const std::set<std::string>& concrete, std::vector<Diagnostic> diagnostics,
                             ModelMeta meta) {
  VariabilityModel m;
  m.meta = std::move(meta);
  std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < entities.size(); ++i) {
    if (entities[i].id == entities[i - 1].id) {
      std::string dump;
      for (const auto& d : diagnostics) dump += "\n  " + format(d);
      throw Error("DuplicateEntityId", "duplicate entity id " + entities[i].id + dump);
    }
  }
  m.entities = std::move(entities);

  relations.erase(std::remove_if(relations.begin(), relations.end(),
                                 [](const Relation& r) { return r.kind == RelationKind::Contains; }),
                  relations.end());
  for (const auto& e : m.entities) {
    if (e.parent.empty()) continue;
    relations.push_back(Relation{RelationKind::Contains, e.parent, e.id, e.pc, {{e.span.file, e.span.start}}});
  }
  std::sort(relations.begin(), relations.end(), relation_less);
  m.relations = std::move(relations);

  std::set<std::string> features;
  auto add = [&](const std::string& name) {
    if (!concrete.count(name) && !is_parse_error_atom(name)) features.insert(name);
  };
  for (const auto& e : m.entities) {
    for (const auto& a : e.pc.atoms()) add(a);
    for (const auto& a : e.uses) add(a);
  }
  for (const auto& r : m.relations)
    for (const auto& a : r.pc.atoms()) add(a);
  m.features.assign(features.begin(), features.end());
  m.diagnostics = std::move(diagnostics);
  return m;
}

std::size_t InclusionMap::included_count() const {
  return static_cast<std::size_t>(std::count(entities.begin(), entities.end(), true));
}

InclusionMap evaluate_configuration(const VariabilityModel& model, const Configuration& config, Diagnostics* sink) {
  if (sink) {
    for (const auto& [name, state] : config.assignment())
      if (!std::binary_search(model.features.begin(), model.features.end(), name))
        sink->warn("UnknownFeature", {}, "feature " + name + " does not occur in the model; ignored");
  }
  InclusionMap map;
  map.configuration = config;
  map.entities.reserve(model.entities.size());
  for (const auto& e : model.entities) map.entities.push_back(evaluate(e.pc, config, sink));
  map.relations.reserve(model.relations.size());
  for (const auto& r : model.relations) map.relations.push_back(evaluate(r.pc, config, sink));
  return map;
}

double FeatureImpact::percent() const {
  return total_units == 0 ? 0.0 : 100.0 * static_cast<double>(translation_units.size()) / static_cast<double>(total_units);
}

FeatureImpact feature_impact(const VariabilityModel& model, std::string_view feature) {
  if (!std::binary_search(model.features.begin(), model.features.end(), feature))
    throw Error("UnknownFeature", "unknown feature " + std::string(feature));
  const std::string name(feature);
  std::map<std::string, std::string> unit_of_file;
  for (const auto& e : model.entities)
    if (e.kind == EntityKind::TranslationUnit) unit_of_file[e.span.file] = e.id;

  FeatureImpact impact;
  impact.total_units = unit_of_file.size();
  std::set<std::string> units;
  for (const auto& e : model.entities) {
    if (e.kind == EntityKind::TranslationUnit) {
      if (std::binary_search(e.uses.begin(), e.uses.end(), name)) units.insert(e.id);
      continue;
    }
    const auto& atoms = e.pc.atoms();
    if (!std::binary_search(atoms.begin(), atoms.end(), name)) continue;
    impact.entities.push_back(e.id);
    const auto u = unit_of_file.find(e.span.file);
    if (u != unit_of_file.end()) units.insert(u->second);
  }
  impact.translation_units.assign(units.begin(), units.end());
  return impact;
}

ConfigurationDiff diff_configurations(const VariabilityModel& model, const Configuration& a, const Configuration& b) {
  ConfigurationDiff diff;
  for (const auto& e : model.entities) {
    const bool in_a = evaluate(e.pc, a);
    const bool in_b = evaluate(e.pc, b);
    if (in_a && in_b)
      diff.in_both.push_back(e.id);
    else if (in_a)
      diff.only_in_a.push_back(e.id);
    else if (in_b)
      diff.only_in_b.push_back(e.id);
  }
  return diff;
}

std::vector<std::string> search(const VariabilityModel& model, std::string_view query) {
  if (query.empty()) return {};
  const auto q = text::to_lower(query);
  std::vector<std::pair<int, const std::string*>> hits;
  for (const auto& e : model.entities) {
    const auto name = text::to_lower(e.name);
    const auto pos = name.find(q);
    if (pos == std::string::npos) continue;
    const int rank = name == q ? 0 : pos == 0 ? 1 : 2;
    hits.emplace_back(rank, &e.id);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : *x.second < *y.second;
  });
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (const auto& [rank, id] : hits) out.push_back(*id);
  return out;
}

}  // namespace varscope
