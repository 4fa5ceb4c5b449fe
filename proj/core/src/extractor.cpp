#include "varscope/extractor.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "declarators.hpp"
#include "varscope/text.hpp"

namespace varscope {

using detail::TokenList;

std::string anonymous_name(EntityKind kind, std::string_view file, int line) {
  std::string sanitized;
  sanitized.reserve(file.size());
  for (const char c : file) sanitized += text::is_ident_char(c) && c != '$' ? c : '_';
  return "anon_" + std::string(kind_code(kind)) + "_" + sanitized + "_" + std::to_string(line);
}

int count_loc(const UnitScan& unit, int start, int end) {
  int n = 0;
  for (const auto& item : unit.main.items) {
    if (item.directive) continue;
    const auto& line = unit.main.lines[item.line];
    if (line.physical_span.start < start || line.physical_span.start > end) continue;
    if (!is_blank_line(line)) ++n;
  }
  return n;
}

namespace {

struct Frame {
  enum class Kind { Decl, Composite, Body, Skip };
  Kind kind = Kind::Decl;
  TokenList toks;  // Decl/Composite: tokens since the last boundary
  int depth = 0;   // Decl/Composite: bracket depth; Body/Skip: brace depth
  // Composite and Body
  EntityKind entity = EntityKind::Function;
  std::string name;
  std::size_t start = 0;  // first token of the entity
  std::size_t open = 0;   // Body: opening brace
  TokenList params;
  bool is_static = false;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct State {
  std::vector<Frame> frames;
  PresenceCondition pc;
};

bool same_frames(const State& a, const State& b) { return a.frames == b.frames; }

class Parser {
 public:
  Parser(const UnitScan& unit, Diagnostics& diags) : unit_(unit), toks_(unit.tokens), diags_(diags) {}

  std::vector<ExtractedEntity> run() {
    State initial;
    initial.frames.push_back(Frame{});
    states_.push_back(std::move(initial));
    for (std::size_t i = 0; i < toks_.size(); ++i) step(i);
    finish();
    return collect();
  }

 private:
  struct Record {
    ExtractedEntity entity;
    std::size_t order = 0;
  };

  const Overlap& relate_cached(const PresenceCondition& s, const PresenceCondition& t) {
    const auto key = std::make_pair(s.identity(), t.identity());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, Cached{relate(s, t), s, t}).first;
    return it->second.overlap;
  }

  static bool relevant(const Frame& f, const Token& t) {
    if (f.kind == Frame::Kind::Body || f.kind == Frame::Kind::Skip) return t.is("{") || t.is("}");
    return true;
  }

  void step(std::size_t i) {
    const auto& tpc = toks_[i].pc;
    if (tpc.is_false()) return;
    const auto& tok = toks_[i].token;
    std::vector<State> next;
    next.reserve(states_.size() + 1);
    bool changed = false;
    for (auto& s : states_) {
      if (!relevant(s.frames.back(), tok)) {
        next.push_back(std::move(s));
        continue;
      }
      if (tpc.is_true()) {
        apply(s, i);
        changed = true;
        next.push_back(std::move(s));
        continue;
      }
      const auto& rel = relate_cached(s.pc, tpc);
      if (!rel.with) {
        next.push_back(std::move(s));
        continue;
      }
      if (!rel.without) {
        apply(s, i);
        changed = true;
        next.push_back(std::move(s));
        continue;
      }
      // Fork on the part of the token's condition the state does not fix.
      const auto have = conjuncts(s.pc);
      std::vector<PresenceCondition> residual;
      for (const auto& c : conjuncts(tpc))
        if (std::find(have.begin(), have.end(), c) == have.end()) residual.push_back(c);
      const auto r = make_and(std::move(residual));
      State taken = s;
      taken.pc = make_and({s.pc, r});
      s.pc = make_and({s.pc, !r});
      apply(taken, i);
      changed = true;
      next.push_back(std::move(taken));
      next.push_back(std::move(s));
    }
    states_ = std::move(next);
    if (changed && states_.size() > 1) merge();
  }

  void merge() {
    std::vector<State> merged;
    merged.reserve(states_.size());
    for (auto& s : states_) {
      auto same = std::find_if(merged.begin(), merged.end(), [&](const State& m) { return same_frames(m, s); });
      if (same != merged.end())
        same->pc = merge_alternatives(same->pc, s.pc);
      else
        merged.push_back(std::move(s));
    }
    if (merged.size() > kMaxParseStates) {
      if (!state_cap_reported_)
        diags_.warn("TooManyParseStates", {unit_.path, 0},
                    "more than " + std::to_string(kMaxParseStates) +
                        " parser states; some configurations are not analyzed");
      state_cap_reported_ = true;
      merged.resize(kMaxParseStates);
    }
    states_ = std::move(merged);
  }

  void record(EntityKind kind, std::string name, std::size_t first, std::size_t last, const PresenceCondition& pc,
              bool is_static, const BodyVariant* body) {
    const int start = toks_[first].token.line;
    const int end = toks_[last].token.end_line;
    const auto key = std::make_tuple(static_cast<int>(kind), name, start, end);
    auto it = records_.find(key);
    if (it == records_.end()) {
      Record r;
      r.entity.kind = kind;
      r.entity.name = std::move(name);
      r.entity.pc = pc;
      r.entity.start_line = start;
      r.entity.end_line = end;
      r.entity.first_token = first;
      r.entity.last_token = last;
      r.entity.is_static = is_static;
      r.order = records_.size();
      it = records_.emplace(key, std::move(r)).first;
    } else {
      auto& e = it->second.entity;
      e.pc = merge_alternatives(e.pc, pc);
      e.first_token = std::min(e.first_token, first);
      e.last_token = std::max(e.last_token, last);
      e.is_static = e.is_static || is_static;
    }
    if (body) it->second.entity.bodies.push_back(*body);
  }

  void report_once(const std::string& code, std::size_t tok, const std::string& message) {
    if (!reported_.insert({code, toks_[tok].token.line}).second) return;
    diags_.warn(code, {unit_.path, toks_[tok].token.line}, message);
  }

  // A composite head ends the list: `struct [NAME]` possibly with annotations.
  bool composite_head(const TokenList& list, EntityKind& kind, std::string& name, std::size_t& start) const {
    const auto l = detail::strip_annotations(toks_, list);
    if (l.empty()) return false;
    const auto& last = toks_[l.back()].token;
    auto kind_of = [](const std::string& s) {
      return s == "struct" ? EntityKind::Struct : s == "union" ? EntityKind::Union : EntityKind::Enum;
    };
    if (last.is_identifier() && detail::is_composite_keyword(last.text)) {
      kind = kind_of(last.text);
      start = l.back();
      name = anonymous_name(kind, unit_.path, last.line);
      return true;
    }
    if (l.size() >= 2 && last.is_identifier()) {
      const auto& kw = toks_[l[l.size() - 2]].token;
      if (kw.is_identifier() && detail::is_composite_keyword(kw.text)) {
        kind = kind_of(kw.text);
        start = l[l.size() - 2];
        name = last.text;
        return true;
      }
    }
    return false;
  }

  static bool has_word(const std::vector<PcToken>& toks, const TokenList& list, std::string_view w) {
    int depth = 0;
    for (const auto i : list) {
      const auto& t = toks[i].token;
      if (t.is("(") || t.is("[") || t.is("{")) ++depth;
      if (t.is(")") || t.is("]") || t.is("}")) depth = std::max(0, depth - 1);
      if (depth == 0 && t.is_identifier(w)) return true;
    }
    return false;
  }

  void finish_declaration(const TokenList& list, std::size_t semi, const PresenceCondition& pc) {
    if (list.empty()) return;
    if (has_word(toks_, list, "typedef") || has_word(toks_, list, "extern")) return;
    const auto stripped = detail::strip_annotations(toks_, list);
    const bool is_static = has_word(toks_, stripped, "static");
    const auto parts = detail::split_declarators(toks_, stripped);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (detail::looks_like_knr(toks_, stripped, parts[k].first, parts[k].second)) {
        report_once("KnRDefinition", stripped.front(), "old-style function definition not recognized");
        return;
      }
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto [b, e] = parts[k];
      const auto d = detail::analyze_declarator(toks_, stripped, b, e);
      if (!d.valid || d.function) continue;
      if (k == 0 && d.name == 0) continue;  // no specifiers: not a declaration we understand
      record(EntityKind::GlobalVariable, toks_[stripped[d.name]].token.text, list.front(), semi, pc, is_static,
             nullptr);
    }
  }

  void open_brace(State& s, Frame& f, std::size_t i) {
    EntityKind kind{};
    std::string name;
    std::size_t start = 0;
    if (f.depth == 0 && composite_head(f.toks, kind, name, start)) {
      f.toks.push_back(i);
      Frame c;
      c.kind = Frame::Kind::Composite;
      c.entity = kind;
      c.name = std::move(name);
      c.start = start;
      s.frames.push_back(std::move(c));
      return;
    }
    if (f.kind == Frame::Kind::Decl && f.depth == 0 && !f.toks.empty()) {
      const auto stripped = detail::strip_annotations(toks_, f.toks);
      if (!stripped.empty() && toks_[stripped.back()].token.is(")") && !detail::has_top_level(toks_, stripped, "=") &&
          !has_word(toks_, stripped, "typedef")) {
        const auto d = detail::analyze_declarator(toks_, stripped, 0, stripped.size());
        if (d.valid && d.function) {
          Frame b;
          b.kind = Frame::Kind::Body;
          b.entity = EntityKind::Function;
          b.name = toks_[stripped[d.name]].token.text;
          b.start = f.toks.front();
          b.open = i;
          b.params.assign(stripped.begin() + static_cast<std::ptrdiff_t>(d.params_begin),
                          stripped.begin() + static_cast<std::ptrdiff_t>(d.params_end));
          b.is_static = has_word(toks_, stripped, "static");
          b.depth = 1;
          f.toks.clear();
          f.depth = 0;
          s.frames.push_back(std::move(b));
          return;
        }
      }
    }
    f.toks.push_back(i);
    Frame skip;
    skip.kind = Frame::Kind::Skip;
    skip.depth = 1;
    s.frames.push_back(std::move(skip));
  }

  void apply(State& s, std::size_t i) {
    auto& f = s.frames.back();
    const auto& t = toks_[i].token;
    switch (f.kind) {
      case Frame::Kind::Body:
      case Frame::Kind::Skip:
        if (t.is("{")) {
          ++f.depth;
          return;
        }
        if (--f.depth > 0) return;
        if (f.kind == Frame::Kind::Body) {
          BodyVariant body{s.pc, f.open, i, f.params};
          record(EntityKind::Function, f.name, f.start, i, s.pc, f.is_static, &body);
          s.frames.pop_back();
        } else {
          s.frames.pop_back();
          s.frames.back().toks.push_back(i);
        }
        return;
      case Frame::Kind::Decl:
      case Frame::Kind::Composite:
        break;
    }
    if (t.is("{")) {
      open_brace(s, f, i);
      return;
    }
    if (t.is("}")) {
      if (f.kind == Frame::Kind::Composite) {
        record(f.entity, f.name, f.start, i, s.pc, false, nullptr);
        s.frames.pop_back();
        s.frames.back().toks.push_back(i);
      } else {
        report_once("UnbalancedBrace", i, "'}' without a matching '{' at file scope; ignored");
      }
      return;
    }
    if (t.is("(") || t.is("[")) ++f.depth;
    if ((t.is(")") || t.is("]")) && f.depth > 0) --f.depth;
    if (t.is(";") && f.depth == 0) {
      if (f.kind == Frame::Kind::Decl) finish_declaration(f.toks, i, s.pc);
      f.toks.clear();
      return;
    }
    f.toks.push_back(i);
  }

  void finish() {
    for (const auto& s : states_) {
      if (s.frames.size() <= 1) continue;
      const auto& open = s.frames[1];
      const auto at = open.kind == Frame::Kind::Body ? open.start
                      : open.kind == Frame::Kind::Composite ? open.start
                                                            : s.frames[0].toks.empty() ? 0 : s.frames[0].toks.back();
      if (toks_.empty()) continue;
      report_once("SkippedTail", std::min(at, toks_.size() - 1),
                  "unbalanced braces; the rest of the file after this line is skipped");
    }
  }

  std::vector<ExtractedEntity> collect() {
    std::vector<Record*> ordered;
    for (auto& [key, r] : records_) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(), [](const Record* a, const Record* b) {
      const auto& x = a->entity;
      const auto& y = b->entity;
      return std::tie(x.start_line, x.first_token, x.end_line, a->order) <
             std::tie(y.start_line, y.first_token, y.end_line, b->order);
    });
    std::vector<ExtractedEntity> out;
    out.reserve(ordered.size());
    for (auto* r : ordered) {
      auto e = std::move(r->entity);
      e.loc = count_loc(unit_, e.start_line, e.end_line);
      out.push_back(std::move(e));
    }
    // Parent of a nested composite: the smallest composite whose tokens
    // strictly enclose it and whose condition can hold together with it.
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!is_composite(out[i].kind)) continue;
      std::size_t best_width = static_cast<std::size_t>(-1);
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (i == j || !is_composite(out[j].kind)) continue;
        if (!(out[j].first_token < out[i].first_token && out[i].last_token < out[j].last_token)) continue;
        if (!possibly_satisfiable(make_and({out[i].pc, out[j].pc}))) continue;
        const auto width = out[j].last_token - out[j].first_token;
        if (width < best_width) {
          best_width = width;
          out[i].parent = static_cast<int>(j);
        }
      }
    }
    return out;
  }

  struct Cached {
    Overlap overlap;
    PresenceCondition a;  // keeps the identities alive
    PresenceCondition b;
  };
  struct PairHash {
    std::size_t operator()(const std::pair<const void*, const void*>& p) const {
      return std::hash<const void*>()(p.first) * 31 + std::hash<const void*>()(p.second);
    }
  };

  const UnitScan& unit_;
  const std::vector<PcToken>& toks_;
  Diagnostics& diags_;
  std::vector<State> states_;
  std::map<std::tuple<int, std::string, int, int>, Record> records_;
  std::unordered_map<std::pair<const void*, const void*>, Cached, PairHash> cache_;
  std::set<std::pair<std::string, int>> reported_;
  bool state_cap_reported_ = false;
};

}  // namespace

std::vector<ExtractedEntity> extract_entities(const UnitScan& unit, Diagnostics& diags) {
  return Parser(unit, diags).run();
}

std::vector<std::string> assign_ids(const std::string& file, const std::vector<ExtractedEntity>& entities) {
  std::map<std::pair<EntityKind, std::string>, int> total;
  for (const auto& e : entities) ++total[{e.kind, e.name}];
  std::map<std::pair<EntityKind, std::string>, int> seen;
  std::vector<std::string> ids;
  ids.reserve(entities.size());
  for (const auto& e : entities) {
    const std::pair key{e.kind, e.name};
    if (total[key] == 1)
      ids.push_back(entity_id(file, e.kind, e.name));
    else
      ids.push_back(entity_id(file, e.kind, e.name, seen[key]++));
  }
  return ids;
}

}  // namespace varscope
