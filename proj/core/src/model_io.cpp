#include <fstream>
#include <sstream>

#include <json.hpp>

#include "varscope/model.hpp"

namespace varscope {

using json = nlohmann::json;

namespace {

json to_json(const Entity& e) {
  json j = {{"id", e.id},
            {"kind", to_string(e.kind)},
            {"name", e.name},
            {"pc", e.pc.to_string()},
            {"span", {{"file", e.span.file}, {"start", e.span.start}, {"end", e.span.end}}},
            {"loc", e.loc},
            {"parent", e.parent.empty() ? json(nullptr) : json(e.parent)}};
  if (e.kind == EntityKind::TranslationUnit) {
    j["includes"] = e.includes;
    j["uses"] = e.uses;
  }
  return j;
}

json to_json(const Relation& r) {
  json sites = json::array();
  for (const auto& s : r.sites) sites.push_back({{"file", s.file}, {"line", s.line}});
  return {{"kind", to_string(r.kind)},
          {"source", r.source},
          {"target", r.target},
          {"pc", r.pc.to_string()},
          {"sites", std::move(sites)}};
}

json to_json(const Diagnostic& d) {
  return {{"severity", to_string(d.severity)},
          {"code", d.code},
          {"file", d.where.file},
          {"line", d.where.line},
          {"message", d.message}};
}

[[noreturn]] void malformed(const std::string& why) { throw Error("MalformedModelFile", "malformed model file: " + why); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed("expected an object");
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing key '") + key + "'");
  return *it;
}

std::string str(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) malformed(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

int integer(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<std::string> strings(const json& v, const char* what) {
  if (!v.is_array()) malformed(std::string("'") + what + "' must be a list");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) malformed(std::string("'") + what + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

PresenceCondition pc_of(const json& j) {
  const auto text = str(j, "pc");
  try {
    return parse_presence_condition(text);
  } catch (const Error& e) {
    malformed("bad presence condition '" + text + "': " + e.what());
  }
}

Entity entity_from(const json& j) {
  Entity e;
  e.id = str(j, "id");
  const auto kind = entity_kind_from_string(str(j, "kind"));
  if (!kind) malformed("unknown entity kind in " + e.id);
  e.kind = *kind;
  e.name = str(j, "name");
  e.pc = pc_of(j);
  const auto& span = field(j, "span");
  e.span = Span{str(span, "file"), integer(span, "start"), integer(span, "end")};
  e.loc = integer(j, "loc");
  const auto& parent = field(j, "parent");
  if (parent.is_string())
    e.parent = parent.get<std::string>();
  else if (!parent.is_null())
    malformed("'parent' must be a string or null");
  if (const auto it = j.find("includes"); it != j.end()) e.includes = strings(*it, "includes");
  if (const auto it = j.find("uses"); it != j.end()) e.uses = strings(*it, "uses");
  return e;
}

Relation relation_from(const json& j) {
  Relation r;
  const auto kind = relation_kind_from_string(str(j, "kind"));
  if (!kind) malformed("unknown relation kind");
  r.kind = *kind;
  r.source = str(j, "source");
  r.target = str(j, "target");
  r.pc = pc_of(j);
  const auto& sites = field(j, "sites");
  if (!sites.is_array()) malformed("'sites' must be a list");
  for (const auto& s : sites) r.sites.push_back({str(s, "file"), integer(s, "line")});
  return r;
}

Diagnostic diagnostic_from(const json& j) {
  Diagnostic d;
  d.severity = severity_from_string(str(j, "severity"));
  d.code = str(j, "code");
  d.where = {str(j, "file"), integer(j, "line")};
  d.message = str(j, "message");
  return d;
}

}  // namespace

std::string model_to_json(const VariabilityModel& m) {
  json entities = json::array();
  for (const auto& e : m.entities) entities.push_back(to_json(e));
  json relations = json::array();
  for (const auto& r : m.relations) relations.push_back(to_json(r));
  json diagnostics = json::array();
  for (const auto& d : m.diagnostics) diagnostics.push_back(to_json(d));
  const json doc = {{"schema_version", m.schema_version},
                    {"meta",
                     {{"tool_version", m.meta.tool_version},
                      {"input_root", m.meta.input_root},
                      {"timestamp", m.meta.timestamp}}},
                    {"features", m.features},
                    {"entities", std::move(entities)},
                    {"relations", std::move(relations)},
                    {"diagnostics", std::move(diagnostics)}};
  return doc.dump(2) + "\n";
}

VariabilityModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  const auto& version = field(doc, "schema_version");
  if (!version.is_number_integer()) malformed("'schema_version' must be an integer");
  if (version.get<int>() != kSchemaVersion)
    throw Error("SchemaVersionMismatch", "model schema version " + version.dump() + " is not supported (expected " +
                                             std::to_string(kSchemaVersion) + ")");
  VariabilityModel m;
  try {
    const auto& meta = field(doc, "meta");
    m.meta = ModelMeta{str(meta, "tool_version"), str(meta, "input_root"), str(meta, "timestamp")};
    m.features = strings(field(doc, "features"), "features");
    const auto& entities = field(doc, "entities");
    if (!entities.is_array()) malformed("'entities' must be a list");
    for (const auto& e : entities) m.entities.push_back(entity_from(e));
    const auto& relations = field(doc, "relations");
    if (!relations.is_array()) malformed("'relations' must be a list");
    for (const auto& r : relations) m.relations.push_back(relation_from(r));
    if (const auto it = doc.find("diagnostics"); it != doc.end()) {
      if (!it->is_array()) malformed("'diagnostics' must be a list");
      for (const auto& d : *it) m.diagnostics.push_back(diagnostic_from(d));
    }
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  std::sort(m.entities.begin(), m.entities.end(), [](const Entity& a, const Entity& b) { return a.id < b.id; });
  return m;
}

void save_model(const VariabilityModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("OutputError", "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw Error("OutputError", "cannot write " + path.string());
}

VariabilityModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("InputNotFound", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace varscope
