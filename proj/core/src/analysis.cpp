#include "varscope/analysis.hpp"

#include <algorithm>
#include <ctime>
#include <set>

#include "varscope/extractor.hpp"

#ifndef VARSCOPE_VERSION
#define VARSCOPE_VERSION "0.0.0"
#endif

namespace varscope {

std::string tool_version() { return VARSCOPE_VERSION; }

std::string format_timestamp(std::int64_t seconds) {
  const auto t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> translation_units(const SourceTree& tree) {
  std::vector<std::string> out;
  for (const auto& f : tree.files())
    if (f.size() > 2 && f.compare(f.size() - 2, 2, ".c") == 0) out.push_back(f);
  return out;
}

namespace {

std::vector<std::string> uses_of(const UnitScan& scan) {
  std::set<std::string> atoms;
  auto add = [&](const PresenceCondition& pc) {
    for (const auto& a : pc.atoms()) atoms.insert(a);
  };
  for (const auto& r : scan.main.regions.regions) add(r.effective_pc);
  const void* last = nullptr;
  for (const auto& t : scan.tokens) {
    if (t.pc.identity() == last) continue;
    last = t.pc.identity();
    add(t.pc);
  }
  std::vector<std::string> out;
  for (const auto& a : atoms)
    if (!scan.concrete.count(a) && !is_parse_error_atom(a)) out.push_back(a);
  return out;
}

}  // namespace

VariabilityModel analyze(const SourceTree& tree, const AnalysisOptions& options) {
  const auto paths = options.units.empty() ? translation_units(tree) : options.units;

  std::vector<UnitScan> scans;
  scans.reserve(paths.size());
  Diagnostics diags;
  std::set<std::string> concrete;
  std::vector<UnitExtraction> units;
  units.reserve(paths.size());
  for (const auto& path : paths) {
    scans.push_back(scan_unit(tree, path, options.scan));
    auto& scan = scans.back();
    UnitExtraction ux;
    ux.entities = extract_entities(scan, scan.diagnostics);
    ux.ids = assign_ids(path, ux.entities);
    units.push_back(std::move(ux));
    concrete.insert(scan.concrete.begin(), scan.concrete.end());
  }
  for (std::size_t u = 0; u < units.size(); ++u) {
    units[u].scan = &scans[u];
    diags.append(scans[u].diagnostics);
  }

  std::vector<Entity> entities;
  for (const auto& ux : units) {
    const auto& scan = *ux.scan;
    Entity tu;
    tu.kind = EntityKind::TranslationUnit;
    tu.name = base_name(scan.path);
    tu.id = entity_id(scan.path, tu.kind, tu.name);
    tu.span.file = scan.path;
    tu.span.start = 1;
    tu.span.end = scan.main.lines.empty() ? 1 : scan.main.lines.back().physical_span.end;
    tu.loc = count_loc(scan, tu.span.start, tu.span.end);
    std::set<std::string> includes;
    for (const auto& inc : scan.includes)
      if (inc.from == scan.path) includes.insert(inc.resolved.empty() ? inc.spelled : inc.resolved);
    tu.includes.assign(includes.begin(), includes.end());
    tu.uses = uses_of(scan);
    for (std::size_t i = 0; i < ux.entities.size(); ++i) {
      const auto& x = ux.entities[i];
      Entity e;
      e.id = ux.ids[i];
      e.kind = x.kind;
      e.name = x.name;
      e.pc = x.pc;
      e.span = Span{scan.path, x.start_line, x.end_line};
      e.loc = x.loc;
      e.parent = x.parent >= 0 ? ux.ids[static_cast<std::size_t>(x.parent)] : tu.id;
      entities.push_back(std::move(e));
    }
    entities.push_back(std::move(tu));
  }

  auto relations = detect_calls(units, diags);
  auto accesses = detect_accesses(units, diags);
  relations.insert(relations.end(), std::make_move_iterator(accesses.begin()),
                   std::make_move_iterator(accesses.end()));

  ModelMeta meta{tool_version(), options.input_root, format_timestamp(options.timestamp)};
  return build_model(std::move(entities), std::move(relations), concrete, diags.items(), std::move(meta));
}

}  // namespace varscope
