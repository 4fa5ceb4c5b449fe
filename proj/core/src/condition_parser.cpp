#include <algorithm>
#include <deque>

#include "expand_detail.hpp"
#include "varscope/macros.hpp"

namespace varscope {

namespace {

struct Branch {
  std::deque<PcToken> input;
  std::vector<Token> out;
  PresenceCondition condition;
};

class TooManyAlternatives {};

class CondExpander {
 public:
  CondExpander(const MacroTable& table, Diagnostics& diags, const PresenceCondition& context,
               const SourceLocation& where)
      : table_(table), diags_(diags), context_(context), where_(where) {}

  std::vector<std::pair<PresenceCondition, std::vector<Token>>> run(std::vector<Token> tokens) {
    Branch b;
    for (auto& t : tokens) b.input.push_back(detail::make_pc_token(std::move(t), PresenceCondition{}));
    explore(std::move(b));
    return std::move(results_);
  }

 private:
  Token literal(const Token& like, std::string_view text) const {
    return Token{TokenKind::Number, std::string(text), like.space_before, like.line, like.end_line};
  }

  std::vector<MacroAlternative> live(const std::string& name, const PresenceCondition& cond) const {
    return table_.alternatives(name, make_and({context_, cond}));
  }

  void split(Branch& b, const std::vector<MacroAlternative>& alts,
             const std::function<void(Branch&, const MacroAlternative&)>& apply) {
    for (const auto& alt : alts) {
      Branch copy = b;
      copy.condition = make_and({b.condition, alt.condition});
      if (copy.condition.is_false()) continue;
      apply(copy, alt);
      explore(std::move(copy));
    }
  }

  bool implied(const Branch& b, const MacroAlternative& alt) const {
    return !relate(make_and({context_, b.condition}), alt.condition).without;
  }

  void explore(Branch b) {
    while (!b.input.empty()) {
      PcToken t = std::move(b.input.front());
      b.input.pop_front();
      if (t.token.kind != TokenKind::Identifier || detail::hidden(t)) {
        b.out.push_back(std::move(t.token));
        continue;
      }
      if (t.token.text == "defined") {
        if (handle_defined(b, t)) return;
        continue;
      }
      if (!table_.has_entries(t.token.text)) {
        if (auto bi = detail::builtin_expansion(t.token.text); !bi.empty()) {
          for (auto& x : bi) b.out.push_back(std::move(x));
          continue;
        }
        b.out.push_back(std::move(t.token));
        continue;
      }
      if (++steps_ > 100000 || t.depth >= kMaxExpansionDepth) {
        b.out.push_back(std::move(t.token));
        continue;
      }
      const auto alts = live(t.token.text, b.condition);
      auto apply = [&](Branch& br, const MacroAlternative& alt) { apply_identifier(br, t, alt); };
      if (alts.size() == 1 && implied(b, alts[0])) {
        apply(b, alts[0]);
        continue;
      }
      if (alts.empty()) {
        b.out.push_back(std::move(t.token));
        continue;
      }
      split(b, alts, apply);
      return;
    }
    if (results_.size() >= ConditionParser::kMaxAlternatives) throw TooManyAlternatives{};
    results_.emplace_back(b.condition, std::move(b.out));
  }

  void apply_identifier(Branch& b, const PcToken& t, const MacroAlternative& alt) {
    switch (alt.state) {
      case MacroAlternative::State::Free:
        b.out.push_back(t.token);
        return;
      case MacroAlternative::State::Undefined:
        b.out.push_back(literal(t.token, "0"));
        return;
      case MacroAlternative::State::Defined:
        break;
    }
    const auto& def = *alt.definition;
    std::vector<std::vector<PcToken>> args;
    if (def.function_like) {
      std::size_t consumed = 0;
      if (!detail::collect_arguments(b.input, args, consumed) || !detail::bind_arguments(def, args)) {
        b.out.push_back(t.token);
        return;
      }
      b.input.erase(b.input.begin(), b.input.begin() + static_cast<std::ptrdiff_t>(consumed));
    }
    auto identity = [](const std::vector<PcToken>& a) { return a; };
    auto result = detail::substitute(def, t, args, PresenceCondition{}, identity, diags_, where_.file);
    b.input.insert(b.input.begin(), std::make_move_iterator(result.begin()), std::make_move_iterator(result.end()));
  }

  // Returns true when the branch was split (and explored) per variant.
  bool handle_defined(Branch& b, const PcToken& def_tok) {
    // defined NAME | defined ( NAME )
    std::size_t k = 0;
    const bool paren = !b.input.empty() && b.input[0].token.is("(");
    if (paren) k = 1;
    if (b.input.size() <= k || b.input[k].token.kind != TokenKind::Identifier ||
        (paren && (b.input.size() <= k + 1 || !b.input[k + 1].token.is(")")))) {
      b.out.push_back(def_tok.token);  // malformed; the parser will report it
      return false;
    }
    const std::string name = b.input[k].token.text;
    b.input.erase(b.input.begin(), b.input.begin() + static_cast<std::ptrdiff_t>(paren ? k + 2 : k + 1));

    auto apply = [&, name](Branch& br, const MacroAlternative& alt) {
      switch (alt.state) {
        case MacroAlternative::State::Defined:
          br.out.push_back(literal(def_tok.token, "1"));
          break;
        case MacroAlternative::State::Undefined:
          br.out.push_back(literal(def_tok.token, "0"));
          break;
        case MacroAlternative::State::Free:
          for (const auto* s : {"defined", "(", name.c_str(), ")"}) {
            const bool ident = std::string_view(s) != "(" && std::string_view(s) != ")";
            br.out.push_back(Token{ident ? TokenKind::Identifier : TokenKind::Punct, s, false,
                                   def_tok.token.line, def_tok.token.end_line});
          }
          break;
      }
    };
    if (!table_.has_entries(name)) {
      apply(b, MacroAlternative{MacroAlternative::State::Free, {}, nullptr});
      return false;
    }
    const auto alts = live(name, b.condition);
    if (alts.size() == 1 && implied(b, alts[0])) {
      apply(b, alts[0]);
      return false;
    }
    if (alts.empty()) {
      apply(b, MacroAlternative{MacroAlternative::State::Free, {}, nullptr});
      return false;
    }
    split(b, alts, apply);
    return true;
  }

  const MacroTable& table_;
  Diagnostics& diags_;
  PresenceCondition context_;
  SourceLocation where_;
  std::vector<std::pair<PresenceCondition, std::vector<Token>>> results_;
  std::size_t steps_ = 0;
};

}  // namespace

PresenceCondition ConditionParser::parse(std::string_view argument, const PresenceCondition& context,
                                         const SourceLocation& where) {
  auto opaque = [&](const std::string& why) {
    const auto name = std::string(kParseErrorPrefix) + std::to_string(++error_counter_);
    diags_.warn("ParseError", where,
                "cannot parse condition '" + std::string(argument) + "' (" + why + "); treated as opaque atom " + name);
    return PresenceCondition::atom(name);
  };

  auto tokens = tokenize(argument, where.line, where.line);
  std::vector<std::pair<PresenceCondition, std::vector<Token>>> variants;
  try {
    variants = CondExpander(table_, diags_, context, where).run(std::move(tokens));
  } catch (const TooManyAlternatives&) {
    return opaque("more than " + std::to_string(kMaxAlternatives) + " macro variants");
  }

  PresenceCondition result = PresenceCondition::constant(false);
  for (const auto& [cond, toks] : variants) {
    PresenceCondition pc;
    try {
      pc = condition_to_pc(*parse_expression(std::span<const Token>(toks)));
    } catch (const Error& e) {
      return opaque(e.what());
    }
    result = merge_alternatives(result, make_and({cond, pc}));
  }
  return result;
}

}  // namespace varscope
