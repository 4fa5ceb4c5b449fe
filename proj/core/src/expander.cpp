#include <algorithm>

#include "expand_detail.hpp"
#include "varscope/macros.hpp"

namespace varscope {

namespace detail {

bool hidden(const PcToken& t) {
  return t.hide && std::binary_search(t.hide->begin(), t.hide->end(), t.token.text);
}

HideSet with_name(const HideSet& base, const std::string& name) {
  std::vector<std::string> v;
  if (base) v = *base;
  const auto it = std::lower_bound(v.begin(), v.end(), name);
  if (it != v.end() && *it == name) return base;
  v.insert(it, name);
  return std::make_shared<const std::vector<std::string>>(std::move(v));
}

HideSet hide_union(const HideSet& a, const HideSet& b) {
  if (!a || a->empty()) return b;
  if (!b || b->empty() || a == b) return a;
  std::vector<std::string> v;
  std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(v));
  return std::make_shared<const std::vector<std::string>>(std::move(v));
}

bool collect_arguments(const std::deque<PcToken>& input, std::vector<std::vector<PcToken>>& args,
                       std::size_t& consumed) {
  args.clear();
  if (input.empty() || !input[0].token.is("(")) return false;
  int depth = 0;
  std::vector<PcToken> current;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto& t = input[i];
    if (t.token.is("(")) {
      if (depth++ == 0) continue;
    } else if (t.token.is(")")) {
      if (--depth == 0) {
        args.push_back(std::move(current));
        consumed = i + 1;
        return true;
      }
    } else if (t.token.is(",") && depth == 1) {
      args.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(t);
  }
  return false;
}

bool bind_arguments(const MacroDefinition& def, std::vector<std::vector<PcToken>>& args) {
  const auto n = def.parameters.size();
  if (n == 0) {
    return args.size() == 1 && args[0].empty();
  }
  if (!def.variadic) return args.size() == n;
  if (args.size() + 1 < n) return false;
  if (args.size() + 1 == n) {
    args.emplace_back();  // variadic part omitted
    return true;
  }
  // Re-join everything from the variadic parameter on with commas.
  std::vector<PcToken> joined;
  for (std::size_t i = n - 1; i < args.size(); ++i) {
    if (i > n - 1) {
      PcToken comma = args[i - 1].empty() ? PcToken{} : args[i - 1].back();
      comma.token = Token{TokenKind::Punct, ",", false, comma.token.line, comma.token.end_line};
      comma.from_macro = false;
      joined.push_back(std::move(comma));
    }
    joined.insert(joined.end(), args[i].begin(), args[i].end());
  }
  args.resize(n - 1);
  args.push_back(std::move(joined));
  return true;
}

namespace {

std::string stringize(const std::vector<PcToken>& arg) {
  std::string out = "\"";
  for (std::size_t i = 0; i < arg.size(); ++i) {
    const auto& t = arg[i].token;
    if (i > 0 && t.space_before) out += ' ';
    if (t.kind == TokenKind::String || t.kind == TokenKind::Char) {
      for (const char c : t.text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
    } else {
      out += t.text;
    }
  }
  out += '"';
  return out;
}

int param_index(const MacroDefinition& def, const Token& t) {
  if (!def.function_like || t.kind != TokenKind::Identifier) return -1;
  const auto it = std::find(def.parameters.begin(), def.parameters.end(), t.text);
  return it == def.parameters.end() ? -1 : static_cast<int>(it - def.parameters.begin());
}

}  // namespace

std::vector<PcToken> substitute(const MacroDefinition& def, const PcToken& name_token,
                                const std::vector<std::vector<PcToken>>& args, const PresenceCondition& pc,
                                const std::function<std::vector<PcToken>(const std::vector<PcToken>&)>& expand_arg,
                                Diagnostics& diags, const std::string& file) {
  // Placemarkers stand in for empty operands of ## and are dropped at the end.
  struct Item {
    PcToken tok;
    bool placemarker = false;
  };
  std::vector<std::vector<PcToken>> expanded(args.size());
  std::vector<bool> expanded_ready(args.size(), false);
  auto expanded_arg = [&](std::size_t p) -> const std::vector<PcToken>& {
    if (!expanded_ready[p]) {
      expanded[p] = expand_arg(args[p]);
      expanded_ready[p] = true;
    }
    return expanded[p];
  };
  auto body_token = [&](const Token& bt) {
    PcToken t;
    t.token = bt;
    t.pc = pc;
    return t;
  };
  auto operand = [&](const Token& bt, bool raw) {
    std::vector<Item> items;
    const int p = param_index(def, bt);
    if (p < 0) {
      items.push_back({body_token(bt), false});
      return items;
    }
    const auto& src = raw ? args[static_cast<std::size_t>(p)] : expanded_arg(static_cast<std::size_t>(p));
    if (src.empty()) {
      items.push_back({PcToken{}, true});
      return items;
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      Item it{src[i], false};
      if (i == 0) it.tok.token.space_before = bt.space_before;
      items.push_back(std::move(it));
    }
    return items;
  };

  const auto& body = def.body;
  std::vector<Item> res;
  for (std::size_t i = 0; i < body.size();) {
    const Token& bt = body[i];
    if (def.function_like && bt.is("#") && i + 1 < body.size() && param_index(def, body[i + 1]) >= 0) {
      Token s{TokenKind::String, stringize(args[static_cast<std::size_t>(param_index(def, body[i + 1]))]),
              bt.space_before, 0, 0};
      res.push_back({body_token(s), false});
      i += 2;
      continue;
    }
    if (bt.is("##") && !res.empty() && i + 1 < body.size()) {
      const Token& next = body[i + 1];
      auto rhs = operand(next, true);
      const bool gnu_comma = def.variadic && next.is_identifier(def.variadic_name()) &&
                             !res.back().placemarker && res.back().tok.token.is(",");
      if (gnu_comma) {
        if (rhs.size() == 1 && rhs[0].placemarker) res.pop_back();
        else res.insert(res.end(), rhs.begin(), rhs.end());
        i += 2;
        continue;
      }
      Item lhs = res.back();
      res.pop_back();
      if (lhs.placemarker) {
        res.insert(res.end(), rhs.begin(), rhs.end());
      } else if (rhs.front().placemarker) {
        res.push_back(lhs);
        res.insert(res.end(), rhs.begin() + 1, rhs.end());
      } else {
        const auto joined = lhs.tok.token.text + rhs.front().tok.token.text;
        auto pieces = tokenize(joined);
        if (pieces.size() != 1) {
          diags.warn("InvalidPaste", {file, name_token.token.line},
                     "pasting '" + lhs.tok.token.text + "' and '" + rhs.front().tok.token.text +
                         "' does not give a valid token");
          res.push_back(lhs);
          res.insert(res.end(), rhs.begin(), rhs.end());
        } else {
          Item pasted = lhs;
          pasted.tok.token.kind = pieces[0].kind;
          pasted.tok.token.text = pieces[0].text;
          pasted.tok.hide = hide_union(lhs.tok.hide, rhs.front().tok.hide);
          res.push_back(std::move(pasted));
          res.insert(res.end(), rhs.begin() + 1, rhs.end());
        }
      }
      i += 2;
      continue;
    }
    const bool raw = i + 1 < body.size() && body[i + 1].is("##");
    auto items = operand(bt, raw);
    res.insert(res.end(), items.begin(), items.end());
    ++i;
  }

  const auto hide = with_name(name_token.hide, def.name);
  std::vector<PcToken> out;
  out.reserve(res.size());
  bool first = true;
  for (auto& item : res) {
    if (item.placemarker) continue;
    PcToken t = std::move(item.tok);
    t.token.line = name_token.token.line;
    t.token.end_line = name_token.token.end_line;
    if (first) t.token.space_before = name_token.token.space_before;
    first = false;
    if (t.pc.identity() != pc.identity()) t.pc = make_and({pc, t.pc});
    t.hide = hide_union(t.hide, hide);
    t.depth = name_token.depth + 1;
    t.from_macro = true;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Token> builtin_expansion(const std::string& name) {
  if (name == "__FILE__") return {Token{TokenKind::String, "\"__FILE__\"", false, 0, 0}};
  if (name == "__LINE__" || name == "__COUNTER__") return {Token{TokenKind::Number, "0", false, 0, 0}};
  if (name == "__DATE__") return {Token{TokenKind::String, "\"Jan  1 1970\"", false, 0, 0}};
  if (name == "__TIME__") return {Token{TokenKind::String, "\"00:00:00\"", false, 0, 0}};
  return {};
}

PcToken make_pc_token(Token token, PresenceCondition pc) {
  PcToken t;
  t.token = std::move(token);
  t.pc = std::move(pc);
  return t;
}

}  // namespace detail

namespace {
constexpr std::size_t kMaxExpansionSteps = 1'000'000;
}

std::vector<PcToken> MacroExpander::expand(const std::vector<Token>& tokens, const PresenceCondition& context) {
  std::vector<PcToken> in;
  in.reserve(tokens.size());
  for (const auto& t : tokens) in.push_back(detail::make_pc_token(t, context));
  return expand(std::move(in), context);
}

std::vector<PcToken> MacroExpander::expand(std::vector<PcToken> tokens, const PresenceCondition&) {
  std::deque<PcToken> input(std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end()));
  std::vector<PcToken> out;
  out.reserve(tokens.size());
  run(input, out);
  return out;
}

bool MacroExpander::budget_exhausted(const PcToken& t) {
  if (t.depth >= kMaxExpansionDepth) {
    diags_.warn("ExpansionDepthExceeded", {file_, t.token.line},
                "macro expansion of '" + t.token.text + "' nested deeper than " +
                    std::to_string(kMaxExpansionDepth) + " levels; left unexpanded");
    return true;
  }
  if (++steps_ > kMaxExpansionSteps) {
    if (steps_ == kMaxExpansionSteps + 1)
      diags_.warn("ExpansionDepthExceeded", {file_, t.token.line},
                  "macro expansion budget exhausted; remaining invocations left unexpanded");
    return true;
  }
  return false;
}

void MacroExpander::run(std::deque<PcToken>& input, std::vector<PcToken>& out) {
  auto expand_isolated = [&](std::vector<PcToken> seg) {
    std::deque<PcToken> sub(std::make_move_iterator(seg.begin()), std::make_move_iterator(seg.end()));
    std::vector<PcToken> res;
    run(sub, res);
    return res;
  };

  while (!input.empty()) {
    PcToken t = std::move(input.front());
    input.pop_front();
    if (t.token.kind != TokenKind::Identifier || detail::hidden(t) || t.pc.is_false()) {
      out.push_back(std::move(t));
      continue;
    }
    if (auto b = detail::builtin_expansion(t.token.text); !b.empty() && !table_.has_entries(t.token.text)) {
      for (auto& bt : b) {
        bt.line = t.token.line;
        bt.end_line = t.token.end_line;
        bt.space_before = t.token.space_before;
        auto pt = detail::make_pc_token(std::move(bt), t.pc);
        pt.from_macro = true;
        out.push_back(std::move(pt));
      }
      continue;
    }
    if (!table_.has_entries(t.token.text)) {
      out.push_back(std::move(t));
      continue;
    }
    const auto alts = table_.alternatives(t.token.text, t.pc);
    const bool any_defined = std::any_of(alts.begin(), alts.end(), [](const MacroAlternative& a) {
      return a.state == MacroAlternative::State::Defined;
    });
    if (!any_defined) {
      out.push_back(std::move(t));
      continue;
    }
    if (budget_exhausted(t)) {
      out.push_back(std::move(t));
      continue;
    }

    std::vector<std::vector<PcToken>> args;
    std::size_t consumed = 0;
    const bool has_args = detail::collect_arguments(input, args, consumed);
    auto arg_expander = [&](const std::vector<PcToken>& a) { return expand_isolated(a); };

    const bool single = alts.size() == 1 && !relate(t.pc, alts[0].condition).without;
    if (single) {
      const auto& def = *alts[0].definition;
      if (def.function_like) {
        if (!has_args) {
          out.push_back(std::move(t));
          continue;
        }
        if (!detail::bind_arguments(def, args)) {
          diags_.warn("ArgumentCountMismatch", {file_, t.token.line},
                      "macro '" + def.name + "' invoked with the wrong number of arguments; left unexpanded");
          out.push_back(std::move(t));
          continue;
        }
        input.erase(input.begin(), input.begin() + static_cast<std::ptrdiff_t>(consumed));
      }
      auto result = detail::substitute(def, t, args, t.pc, arg_expander, diags_, file_);
      input.insert(input.begin(), std::make_move_iterator(result.begin()), std::make_move_iterator(result.end()));
      continue;
    }

    // Several variants: expand once per variant, each rescanned on its own.
    const bool consumes = has_args && std::any_of(alts.begin(), alts.end(), [](const MacroAlternative& a) {
      return a.state == MacroAlternative::State::Defined && a.definition->function_like;
    });
    std::vector<PcToken> paren_tokens;
    if (consumes) {
      paren_tokens.assign(input.begin(), input.begin() + static_cast<std::ptrdiff_t>(consumed));
      input.erase(input.begin(), input.begin() + static_cast<std::ptrdiff_t>(consumed));
    }
    for (const auto& alt : alts) {
      const auto pc = make_and({t.pc, alt.condition});
      if (pc.is_false()) continue;
      bool expanded = false;
      if (alt.state == MacroAlternative::State::Defined) {
        const auto& def = *alt.definition;
        auto bound = args;
        if (!def.function_like) {
          auto seg = detail::substitute(def, t, {}, pc, arg_expander, diags_, file_);
          if (consumes) {
            for (auto p : paren_tokens) {
              p.pc = make_and({pc, p.pc});
              seg.push_back(std::move(p));
            }
          }
          auto res = expand_isolated(std::move(seg));
          out.insert(out.end(), res.begin(), res.end());
          expanded = true;
        } else if (consumes && detail::bind_arguments(def, bound)) {
          auto res = expand_isolated(detail::substitute(def, t, bound, pc, arg_expander, diags_, file_));
          out.insert(out.end(), res.begin(), res.end());
          expanded = true;
        } else if (consumes) {
          diags_.warn("ArgumentCountMismatch", {file_, t.token.line},
                      "macro '" + def.name + "' invoked with the wrong number of arguments; left unexpanded");
        }
      }
      if (!expanded) {
        PcToken keep = t;
        keep.pc = pc;
        keep.hide = detail::with_name(t.hide, t.token.text);
        std::vector<PcToken> seg{std::move(keep)};
        if (consumes) {
          for (auto p : paren_tokens) {
            p.pc = make_and({pc, p.pc});
            seg.push_back(std::move(p));
          }
        }
        auto res = expand_isolated(std::move(seg));
        out.insert(out.end(), res.begin(), res.end());
      }
    }
  }
}

}  // namespace varscope
