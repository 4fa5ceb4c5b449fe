#include <algorithm>

#include "varscope/macros.hpp"
#include "varscope/text.hpp"

namespace varscope {

std::string MacroDefinition::variadic_name() const {
  if (!variadic || parameters.empty()) return {};
  return parameters.back();
}

namespace {

bool same_definition(const MacroDefinition& a, const MacroDefinition& b) {
  if (a.function_like != b.function_like || a.variadic != b.variadic || a.parameters != b.parameters ||
      a.body.size() != b.body.size())
    return false;
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (a.body[i].text != b.body[i].text) return false;
    if (i > 0 && a.body[i].space_before != b.body[i].space_before) return false;
  }
  return true;
}

}  // namespace

void MacroTable::define(MacroDefinition definition) {
  cache_.erase(definition.name);
  auto& list = entries_[definition.name];
  list.push_back(Entry{false, std::move(definition)});
}

void MacroTable::undefine(std::string name, PresenceCondition pc, SourceLocation origin) {
  cache_.erase(name);
  MacroDefinition marker;
  marker.name = name;
  marker.pc = std::move(pc);
  marker.origin = std::move(origin);
  entries_[std::move(name)].push_back(Entry{true, std::move(marker)});
}

bool MacroTable::has_entries(std::string_view name) const { return entries_.find(name) != entries_.end(); }

const std::vector<MacroTable::Entry>* MacroTable::entries(std::string_view name) const {
  const auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> MacroTable::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, list] : entries_) out.push_back(name);
  return out;
}

std::vector<MacroAlternative> MacroTable::alternatives(std::string_view name,
                                                      const PresenceCondition& context) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) return {MacroAlternative{MacroAlternative::State::Free, {}, nullptr}};

  auto cached = cache_.find(std::string(name));
  if (cached == cache_.end()) {
    const auto& list = it->second;
    std::vector<MacroAlternative> all;
    PresenceCondition later = PresenceCondition::constant(false);
    std::vector<MacroAlternative> reversed;
    for (auto e = list.rbegin(); e != list.rend(); ++e) {
      const auto& pc = e->definition.pc;
      auto cond = make_and({pc, !later});
      later = make_or({later, pc});
      if (!possibly_satisfiable(cond)) continue;
      if (e->is_undef)
        reversed.push_back({MacroAlternative::State::Undefined, cond, nullptr});
      else
        reversed.push_back({MacroAlternative::State::Defined, cond, &e->definition});
    }
    // Identical definitions and all #undef variants collapse into one.
    for (auto r = reversed.rbegin(); r != reversed.rend(); ++r) {
      auto same = std::find_if(all.begin(), all.end(), [&](const MacroAlternative& a) {
        if (a.state != r->state) return false;
        if (a.state == MacroAlternative::State::Undefined) return true;
        return same_definition(*a.definition, *r->definition);
      });
      if (same != all.end())
        same->condition = merge_alternatives(same->condition, r->condition);
      else
        all.push_back(*r);
    }
    auto free_cond = !later;
    if (possibly_satisfiable(free_cond))
      all.push_back({MacroAlternative::State::Free, free_cond, nullptr});
    cached = cache_.emplace(std::string(name), std::move(all)).first;
  }

  if (context.is_true()) return cached->second;
  std::vector<MacroAlternative> out;
  for (const auto& a : cached->second) {
    if (relate(context, a.condition).with) out.push_back(a);
  }
  return out;
}

const MacroDefinition* MacroTable::active_definition(std::string_view name, const Configuration& config) const {
  const auto* list = entries(name);
  if (!list) return nullptr;
  for (auto e = list->rbegin(); e != list->rend(); ++e) {
    if (evaluate(e->definition.pc, config)) return e->is_undef ? nullptr : &e->definition;
  }
  return nullptr;
}

std::set<std::string> MacroTable::concrete_names() const {
  std::set<std::string> out;
  for (const auto& [name, list] : entries_) {
    for (const auto& e : list)
      if (!e.is_undef && e.definition.pc.is_true()) {
        out.insert(name);
        break;
      }
  }
  return out;
}

bool define_directive(MacroTable& table, std::string_view argument, const PresenceCondition& enclosing_pc,
                      const SourceLocation& origin, Diagnostics& diags) {
  auto toks = tokenize(argument, origin.line, origin.line);
  if (toks.empty() || toks[0].kind != TokenKind::Identifier) {
    diags.warn("MalformedDefine", origin, "#define without a macro name");
    return false;
  }
  MacroDefinition def;
  def.name = toks[0].text;
  def.pc = enclosing_pc;
  def.origin = origin;
  std::size_t i = 1;
  if (i < toks.size() && toks[i].is("(") && !toks[i].space_before) {
    def.function_like = true;
    ++i;
    bool expect_param = true;
    bool closed = false;
    while (i < toks.size()) {
      const auto& t = toks[i];
      if (t.is(")")) {
        if (expect_param && !def.parameters.empty()) break;  // trailing comma
        closed = true;
        ++i;
        break;
      }
      if (expect_param) {
        if (t.is("...")) {
          def.parameters.push_back("__VA_ARGS__");
          def.variadic = true;
          expect_param = false;
        } else if (t.kind == TokenKind::Identifier) {
          if (std::find(def.parameters.begin(), def.parameters.end(), t.text) != def.parameters.end()) {
            diags.warn("MalformedDefine", origin, "duplicate macro parameter '" + t.text + "' in " + def.name);
            return false;
          }
          def.parameters.push_back(t.text);
          if (i + 1 < toks.size() && toks[i + 1].is("...")) {
            def.variadic = true;
            ++i;
          }
          expect_param = false;
        } else {
          break;
        }
      } else {
        if (!t.is(",") || def.variadic) break;
        expect_param = true;
      }
      ++i;
    }
    if (!closed) {
      diags.warn("MalformedDefine", origin, "malformed parameter list in #define " + def.name);
      return false;
    }
  }
  def.body.assign(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.end());
  if (!def.body.empty()) def.body.front().space_before = false;
  table.define(std::move(def));
  return true;
}

bool undef_directive(MacroTable& table, std::string_view argument, const PresenceCondition& enclosing_pc,
                     const SourceLocation& origin, Diagnostics& diags) {
  const auto toks = tokenize(argument, origin.line, origin.line);
  if (toks.empty() || toks[0].kind != TokenKind::Identifier) {
    diags.warn("MalformedUndef", origin, "#undef without a macro name");
    return false;
  }
  table.undefine(toks[0].text, enclosing_pc, origin);
  return true;
}

bool is_parse_error_atom(std::string_view name) {
  return name.substr(0, ConditionParser::kParseErrorPrefix.size()) == ConditionParser::kParseErrorPrefix;
}

}  // namespace varscope
