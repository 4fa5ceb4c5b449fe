#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "declarators.hpp"
#include "varscope/extractor.hpp"

namespace varscope {

namespace {

struct Target {
  std::size_t unit;
  std::string id;
  PresenceCondition pc;
  bool is_static;
};

using NameTable = std::map<std::string, std::vector<Target>, std::less<>>;

NameTable name_table(const std::vector<UnitExtraction>& units, EntityKind kind) {
  NameTable table;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& ents = units[u].entities;
    for (std::size_t i = 0; i < ents.size(); ++i)
      if (ents[i].kind == kind) table[ents[i].name].push_back(Target{u, units[u].ids[i], ents[i].pc, ents[i].is_static});
  }
  return table;
}

/// Definitions visible from `unit`: its own if it has any, else the
/// non-static ones elsewhere.
std::vector<const Target*> visible(const NameTable& table, std::string_view name, std::size_t unit) {
  std::vector<const Target*> out;
  const auto it = table.find(name);
  if (it == table.end()) return out;
  for (const auto& t : it->second)
    if (t.unit == unit) out.push_back(&t);
  if (!out.empty()) return out;
  for (const auto& t : it->second)
    if (!t.is_static) out.push_back(&t);
  return out;
}

bool type_start(const Token& t) {
  static const std::set<std::string, std::less<>> kTypeWords = {
      "auto", "char", "const", "double", "enum", "extern", "float", "int", "long", "register", "short", "signed",
      "static", "struct", "union", "unsigned", "void", "volatile", "_Bool", "_Complex", "_Atomic", "_Thread_local",
      "__typeof__", "typeof", "restrict", "inline"};
  return t.is_identifier() && kTypeWords.count(t.text) > 0;
}

/// Parameter names and the names declared by declaration statements of one
/// body variant.
std::set<std::string> local_names(const std::vector<PcToken>& toks, const BodyVariant& body,
                                  const std::vector<std::size_t>& present) {
  std::set<std::string> names;
  for (const auto i : detail::declared_names(toks, body.params)) names.insert(toks[i].token.text);

  detail::TokenList run;
  auto flush = [&] {
    if (run.size() >= 2 && toks[run[0]].token.is_identifier("for") && toks[run[1]].token.is("("))
      run.erase(run.begin(), run.begin() + 2);
    if (run.size() >= 2) {
      const auto& a = toks[run[0]].token;
      const auto& b = toks[run[1]].token;
      const bool typedef_name = a.is_identifier() && !is_c_keyword(a.text) &&
                                ((b.is_identifier() && !is_c_keyword(b.text)) ||
                                 (b.is("*") && run.size() >= 3 && toks[run[2]].token.is_identifier()));
      if (type_start(a) || typedef_name)
        for (const auto i : detail::declared_names(toks, run)) names.insert(toks[i].token.text);
    }
    run.clear();
  };
  int paren = 0;
  for (const auto i : present) {
    const auto& t = toks[i].token;
    if (t.is("(")) ++paren;
    if (t.is(")")) paren = std::max(0, paren - 1);
    if (t.is("{") || t.is("}") || (t.is(";") && (paren == 0 || (!run.empty() && toks[run[0]].token.is_identifier("for"))))) {
      flush();
      continue;
    }
    run.push_back(i);
  }
  flush();
  return names;
}

struct Accumulator {
  struct Item {
    PresenceCondition pc = PresenceCondition::constant(false);
    std::set<std::pair<std::string, int>> sites;
  };
  std::map<std::tuple<int, std::string, std::string>, Item> items;

  void add(RelationKind kind, const std::string& source, const std::string& target, const PresenceCondition& pc,
           const SourceLocation& site) {
    auto& item = items[{static_cast<int>(kind), source, target}];
    item.pc = merge_alternatives(item.pc, pc);
    item.sites.insert({site.file, site.line});
  }

  std::vector<Relation> finish(Diagnostics& diags) {
    std::vector<Relation> out;
    for (auto& [key, item] : items) {
      const auto& [kind, source, target] = key;
      if (!possibly_satisfiable(item.pc)) {
        diags.note("UnsatisfiableRelation", {},
                   std::string(to_string(static_cast<RelationKind>(kind))) + " " + source + " -> " + target +
                       " can never hold; dropped");
        continue;
      }
      Relation r;
      r.kind = static_cast<RelationKind>(kind);
      r.source = source;
      r.target = target;
      r.pc = item.pc;
      for (const auto& [file, line] : item.sites) r.sites.push_back({file, line});
      out.push_back(std::move(r));
    }
    return out;
  }
};

/// Calls `visit(unit, entity index, body, present tokens, locals)` for every
/// function body variant.
template <typename Visit>
void for_each_body(const std::vector<UnitExtraction>& units, Visit&& visit) {
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& toks = units[u].scan->tokens;
    std::unordered_map<const void*, bool> compatible;
    for (std::size_t e = 0; e < units[u].entities.size(); ++e) {
      const auto& ent = units[u].entities[e];
      for (const auto& body : ent.bodies) {
        compatible.clear();
        std::vector<std::size_t> present;
        for (std::size_t i = body.open + 1; i < body.close; ++i) {
          const auto& pc = toks[i].pc;
          if (pc.is_false()) continue;
          auto it = compatible.find(pc.identity());
          if (it == compatible.end()) it = compatible.emplace(pc.identity(), relate(body.pc, pc).with).first;
          if (it->second) present.push_back(i);
        }
        const auto locals = local_names(toks, body, present);
        visit(u, e, body, present, locals);
      }
    }
  }
}

bool member_access(const Token& t) { return t.is(".") || t.is("->"); }

bool compound_assignment(const Token& t) {
  static const std::set<std::string, std::less<>> kOps = {"+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
  return t.kind == TokenKind::Punct && kOps.count(t.text) > 0;
}

}  // namespace

std::vector<Relation> detect_calls(const std::vector<UnitExtraction>& units, Diagnostics& diags) {
  const auto functions = name_table(units, EntityKind::Function);
  Accumulator acc;
  for_each_body(units, [&](std::size_t u, std::size_t e, const BodyVariant& body,
                           const std::vector<std::size_t>& present, const std::set<std::string>& locals) {
    const auto& toks = units[u].scan->tokens;
    const auto& source = units[u].ids[e];
    for (std::size_t k = 0; k + 1 < present.size(); ++k) {
      const auto& t = toks[present[k]];
      if (!t.token.is_identifier() || is_c_keyword(t.token.text)) continue;
      const auto& next = toks[present[k + 1]];
      if (!next.token.is("(")) continue;
      if (k > 0 && member_access(toks[present[k - 1]].token)) continue;
      if (locals.count(t.token.text)) continue;
      const auto targets = visible(functions, t.token.text, u);
      if (targets.empty()) continue;
      const auto site = make_and({body.pc, t.pc, next.pc});
      for (const auto* target : targets)
        acc.add(RelationKind::Calls, source, target->id, make_and({site, target->pc}),
                {units[u].scan->path, t.token.line});
    }
  });
  return acc.finish(diags);
}

std::vector<Relation> detect_accesses(const std::vector<UnitExtraction>& units, Diagnostics& diags) {
  const auto globals = name_table(units, EntityKind::GlobalVariable);
  Accumulator acc;
  for_each_body(units, [&](std::size_t u, std::size_t e, const BodyVariant& body,
                           const std::vector<std::size_t>& present, const std::set<std::string>& locals) {
    const auto& toks = units[u].scan->tokens;
    const auto& source = units[u].ids[e];
    auto tok = [&](std::size_t k) -> const Token& { return toks[present[k]].token; };
    for (std::size_t k = 0; k < present.size(); ++k) {
      const auto& t = toks[present[k]];
      if (!t.token.is_identifier() || is_c_keyword(t.token.text)) continue;
      if (k > 0 && member_access(tok(k - 1))) continue;
      if (locals.count(t.token.text)) continue;
      const auto targets = visible(globals, t.token.text, u);
      if (targets.empty()) continue;
      // Skip the postfix chain to find what is applied to the expression.
      std::size_t j = k + 1;
      while (j < present.size()) {
        if (tok(j).is("[")) {
          int depth = 0;
          for (; j < present.size(); ++j) {
            if (tok(j).is("[")) ++depth;
            if (tok(j).is("]") && --depth == 0) break;
          }
          ++j;
        } else if (member_access(tok(j)) && j + 1 < present.size() && tok(j + 1).is_identifier()) {
          j += 2;
        } else {
          break;
        }
      }
      bool reads = true;
      bool writes = false;
      if (j < present.size()) {
        const auto& op = tok(j);
        if (op.is("=")) {
          reads = false;
          writes = true;
        } else if (compound_assignment(op) || op.is("++") || op.is("--")) {
          writes = true;
        }
      }
      if (k > 0 && (tok(k - 1).is("++") || tok(k - 1).is("--"))) writes = true;
      const auto site = make_and({body.pc, t.pc});
      const SourceLocation where{units[u].scan->path, t.token.line};
      for (const auto* target : targets) {
        const auto pc = make_and({site, target->pc});
        if (reads) acc.add(RelationKind::Reads, source, target->id, pc, where);
        if (writes) acc.add(RelationKind::Writes, source, target->id, pc, where);
      }
    }
  });
  return acc.finish(diags);
}

}  // namespace varscope
