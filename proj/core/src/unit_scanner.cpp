#include "varscope/unit_scanner.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "varscope/text.hpp"

namespace varscope {

std::string_view to_string(IncludeMode mode) { return mode == IncludeMode::Full ? "full" : "project-only"; }

IncludeMode include_mode_from_string(std::string_view text) {
  if (text == "project-only") return IncludeMode::ProjectOnly;
  if (text == "full") return IncludeMode::Full;
  throw Error("InvalidArgument", "unknown include mode '" + std::string(text) + "' (expected project-only or full)");
}

namespace {

struct Guard {
  std::string macro;
  std::size_t open_item = 0;
  std::size_t define_item = 0;
};

bool blank_item(const ScanItem& item, const std::vector<LogicalLine>& lines) {
  return !item.directive && is_blank_line(lines[item.line]);
}

std::optional<std::string> guard_name(const Directive& d) {
  const auto toks = tokenize(d.argument);
  if (d.kind == DirectiveKind::Ifndef) {
    if (toks.size() == 1 && toks[0].is_identifier()) return toks[0].text;
    return std::nullopt;
  }
  if (d.kind != DirectiveKind::If) return std::nullopt;
  // !defined(X) or !defined X
  if (toks.size() == 5 && toks[0].is("!") && toks[1].is_identifier("defined") && toks[2].is("(") &&
      toks[3].is_identifier() && toks[4].is(")"))
    return toks[3].text;
  if (toks.size() == 3 && toks[0].is("!") && toks[1].is_identifier("defined") && toks[2].is_identifier())
    return toks[2].text;
  return std::nullopt;
}

/// `#ifndef X` / `#define X` ... `#endif` wrapping the whole file.
std::optional<Guard> detect_guard(const std::vector<ScanItem>& items, const std::vector<LogicalLine>& lines) {
  std::size_t i = 0;
  while (i < items.size() && blank_item(items[i], lines)) ++i;
  if (i == items.size() || !items[i].directive) return std::nullopt;
  const auto name = guard_name(*items[i].directive);
  if (!name) return std::nullopt;
  Guard g{*name, i, 0};
  std::size_t j = i + 1;
  while (j < items.size() && blank_item(items[j], lines)) ++j;
  if (j == items.size() || !items[j].directive || items[j].directive->kind != DirectiveKind::Define) return std::nullopt;
  const auto def = tokenize(items[j].directive->argument);
  if (def.empty() || def[0].text != g.macro) return std::nullopt;
  g.define_item = j;
  int depth = 0;
  std::size_t k = i;
  for (; k < items.size(); ++k) {
    if (!items[k].directive) continue;
    switch (items[k].directive->kind) {
      case DirectiveKind::If:
      case DirectiveKind::Ifdef:
      case DirectiveKind::Ifndef:
        ++depth;
        break;
      case DirectiveKind::Elif:
      case DirectiveKind::Else:
        if (depth == 1) return std::nullopt;
        break;
      case DirectiveKind::Endif:
        --depth;
        break;
      default:
        break;
    }
    if (depth == 0) break;
  }
  if (k == items.size()) return std::nullopt;
  for (++k; k < items.size(); ++k)
    if (!blank_item(items[k], lines)) return std::nullopt;
  return g;
}

class Scanner {
 public:
  Scanner(const SourceTree& tree, const ScanOptions& options, UnitScan& unit)
      : tree_(tree),
        options_(options),
        unit_(unit),
        parser_(unit.macros, unit.diagnostics),
        expander_(unit.macros, unit.diagnostics, unit.path) {}

  void predefine() {
    for (const auto& p : options_.predefines) {
      const auto eq = p.find('=');
      const auto name = p.substr(0, eq);
      const auto value = eq == std::string::npos ? std::string("1") : p.substr(eq + 1);
      if (define_directive(unit_.macros, name + " " + value, PresenceCondition{}, {"<command-line>", 0},
                           unit_.diagnostics))
        unit_.concrete.insert(name);
    }
  }

  void scan_file(const std::string& path, const PresenceCondition& root_pc, bool is_main) {
    const auto content = tree_.read(path);
    if (!content) {
      if (is_main) throw Error("InputNotFound", "cannot read " + path);
      unit_.diagnostics.warn("UnreadableInclude", {path, 0}, "cannot read included file " + path);
      return;
    }
    stack_.push_back(path);
    auto& diags = unit_.diagnostics;
    auto lines = splice_and_strip(*content, diags, path, static_cast<int>(file_ids_.size()));
    file_ids_.push_back(path);
    auto items = scan_directives(lines);
    const auto guard = detect_guard(items, lines);
    if (guard) {
      once_.insert(path);
      const auto& d = *items[guard->define_item].directive;
      define_directive(unit_.macros, d.argument, root_pc, {path, lines[d.line].physical_span.start}, diags);
    }

    RegionBuilder rb(root_pc, lines, path, diags);
    std::vector<Token> pending;
    auto flush = [&] {
      if (pending.empty()) return;
      auto expanded = expander_.expand(pending, rb.current_pc());
      unit_.tokens.insert(unit_.tokens.end(), std::make_move_iterator(expanded.begin()),
                          std::make_move_iterator(expanded.end()));
      pending.clear();
    };

    for (std::size_t idx = 0; idx < items.size(); ++idx) {
      const auto& item = items[idx];
      const auto& line = lines[item.line];
      if (!item.directive) {
        rb.text(item.line);
        if (is_main && !rb.current_pc().is_false()) {
          auto toks = tokenize(line.text, line.physical_span.start, line.physical_span.end);
          pending.insert(pending.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
        }
        continue;
      }
      flush();
      const auto& d = *item.directive;
      const SourceLocation where{path, line.physical_span.start};
      const auto pc = rb.current_pc();
      const bool dead = pc.is_false();
      switch (d.kind) {
        case DirectiveKind::If:
        case DirectiveKind::Ifdef:
        case DirectiveKind::Ifndef: {
          const auto text = condition_text(d);
          if (guard && idx == guard->open_item)
            rb.open(d.line, text, PresenceCondition{});
          else
            rb.open(d.line, text, dead ? PresenceCondition{} : parser_.parse(text, pc, where));
          break;
        }
        case DirectiveKind::Elif: {
          if (!rb.in_group()) {
            rb.elif(d.line, d.argument, PresenceCondition{});
            break;
          }
          const auto context = rb.elif_context();
          rb.elif(d.line, d.argument, context.is_false() ? PresenceCondition{} : parser_.parse(d.argument, context, where));
          break;
        }
        case DirectiveKind::Else:
          rb.else_branch(d.line);
          break;
        case DirectiveKind::Endif:
          rb.endif(d.line);
          break;
        case DirectiveKind::Define:
          rb.directive(d.line);
          if (!dead && !(guard && idx == guard->define_item))
            define_directive(unit_.macros, d.argument, pc, where, diags);
          break;
        case DirectiveKind::Undef:
          rb.directive(d.line);
          if (!dead) undef_directive(unit_.macros, d.argument, pc, where, diags);
          break;
        case DirectiveKind::Include:
          rb.directive(d.line);
          if (!dead) include(d, path, pc, where);
          break;
        case DirectiveKind::Other:
          rb.directive(d.line);
          if (d.keyword == "pragma" && text::trim(d.argument) == "once") once_.insert(path);
          break;
      }
    }
    flush();
    auto regions = rb.finish();
    if (is_main) unit_.main = ScannedFile{path, std::move(lines), std::move(items), std::move(regions)};
    stack_.pop_back();
  }

 private:
  std::optional<std::pair<bool, std::string>> include_name(const Directive& d, const PresenceCondition& pc,
                                                            const SourceLocation& where) {
    auto parse = [](std::string_view s) -> std::optional<std::pair<bool, std::string>> {
      s = text::trim(s);
      if (s.size() >= 2 && s.front() == '"') {
        const auto close = s.find('"', 1);
        if (close != std::string_view::npos) return std::make_pair(false, std::string(s.substr(1, close - 1)));
      }
      if (s.size() >= 2 && s.front() == '<') {
        const auto close = s.find('>', 1);
        if (close != std::string_view::npos) return std::make_pair(true, std::string(s.substr(1, close - 1)));
      }
      return std::nullopt;
    };
    if (auto direct = parse(d.argument)) return direct;
    // Computed include: expand and try again.
    auto expanded = expander_.expand(tokenize(d.argument, where.line, where.line), pc);
    std::vector<Token> toks;
    for (auto& t : expanded)
      if (!t.pc.is_false()) toks.push_back(std::move(t.token));
    if (auto computed = parse(spell(toks))) return computed;
    unit_.diagnostics.warn("MalformedInclude", where, "cannot interpret #include " + d.argument);
    return std::nullopt;
  }

  std::string resolve(bool angle, const std::string& name, const std::string& from) const {
    std::vector<std::string> candidates;
    if (!angle) candidates.push_back(join_path(parent_path(from), name));
    for (const auto& dir : options_.include_paths) candidates.push_back(join_path(dir, name));
    if (options_.include_mode == IncludeMode::Full)
      for (const auto& dir : options_.system_paths) candidates.push_back(join_path(dir, name));
    for (const auto& c : candidates)
      if (!c.empty() && tree_.is_file(c)) return c;
    return {};
  }

  void include(const Directive& d, const std::string& from, const PresenceCondition& pc, const SourceLocation& where) {
    if (!possibly_satisfiable(pc)) return;
    const auto name = include_name(d, pc, where);
    if (!name) return;
    const auto& [angle, file] = *name;
    IncludeEdge edge;
    edge.from = from;
    edge.spelled = angle ? "<" + file + ">" : "\"" + file + "\"";
    edge.resolved = resolve(angle, file, from);
    edge.line = where.line;
    edge.pc = pc;
    unit_.includes.push_back(edge);
    if (edge.resolved.empty()) {
      if (options_.include_mode == IncludeMode::Full)
        unit_.diagnostics.warn("UnresolvedInclude", where, "cannot resolve #include " + edge.spelled);
      return;
    }
    const auto& target = edge.resolved;
    if (std::find(stack_.begin(), stack_.end(), target) != stack_.end()) {
      unit_.diagnostics.warn("IncludeCycle", where, target + " is already being included; skipped");
      return;
    }
    if (static_cast<int>(stack_.size()) > kMaxIncludeDepth) {
      unit_.diagnostics.warn("IncludeDepthExceeded", where,
                             "include nesting deeper than " + std::to_string(kMaxIncludeDepth) + "; " + target +
                                 " skipped");
      return;
    }
    auto prior = included_under_.find(target);
    PresenceCondition context = pc;
    if (prior != included_under_.end()) {
      if (once_.count(target)) {
        context = make_and({pc, !prior->second});
        if (!possibly_satisfiable(context)) return;
      }
      prior->second = merge_alternatives(prior->second, pc);
    } else {
      included_under_.emplace(target, pc);
    }
    scan_file(target, context, false);
  }

  const SourceTree& tree_;
  const ScanOptions& options_;
  UnitScan& unit_;
  ConditionParser parser_;
  MacroExpander expander_;
  std::vector<std::string> stack_;
  std::vector<std::string> file_ids_;
  std::map<std::string, PresenceCondition> included_under_;
  std::set<std::string> once_;
};

}  // namespace

UnitScan scan_unit(const SourceTree& tree, const std::string& path, const ScanOptions& options) {
  UnitScan unit;
  unit.path = path;
  Scanner scanner(tree, options, unit);
  scanner.predefine();
  scanner.scan_file(path, PresenceCondition{}, true);
  const auto named = unit.macros.concrete_names();
  unit.concrete.insert(named.begin(), named.end());
  return unit;
}

}  // namespace varscope
