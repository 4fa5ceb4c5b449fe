#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "varscope/conditions.hpp"
#include "varscope/diagnostics.hpp"
#include "varscope/tokens.hpp"

namespace varscope {

struct MacroDefinition {
  std::string name;
  bool function_like = false;
  std::vector<std::string> parameters;  // the variadic parameter, if any, is last
  bool variadic = false;
  std::vector<Token> body;
  PresenceCondition pc;
  SourceLocation origin;

  /// Name bound to the variadic arguments: `__VA_ARGS__`, or `args` for the
  /// GNU `args...` form.
  std::string variadic_name() const;
};

/// One variant of a macro name as seen from some context.
struct MacroAlternative {
  enum class State {
    Defined,    // `definition` is the active definition
    Undefined,  // an #undef is the most recent live entry
    Free,       // no entry is live: the name is whatever the configuration says
  };
  State state = State::Free;
  PresenceCondition condition;
  const MacroDefinition* definition = nullptr;
};

/// Variational macro table. Each name maps to the ordered list of
/// `#define`/`#undef` events, each tagged with the presence condition of the
/// region it occurred in. Under a total configuration the most recent event
/// whose condition holds decides the macro's meaning.
class MacroTable {
 public:
  struct Entry {
    bool is_undef = false;
    MacroDefinition definition;  // name/pc/origin only for #undef
  };

  void define(MacroDefinition definition);
  void undefine(std::string name, PresenceCondition pc, SourceLocation origin);

  bool has_entries(std::string_view name) const;
  const std::vector<Entry>* entries(std::string_view name) const;
  std::vector<std::string> names() const;

  /// All variants that can be live somewhere inside `context`, with mutually
  /// exclusive conditions (not conjoined with `context`). Variants whose
  /// condition cannot hold within `context` are dropped.
  std::vector<MacroAlternative> alternatives(std::string_view name, const PresenceCondition& context) const;

  /// The definition in force under a total configuration, if any.
  const MacroDefinition* active_definition(std::string_view name, const Configuration& config) const;

  /// Names given a value by a definition whose condition is constant true.
  std::set<std::string> concrete_names() const;

 private:
  std::map<std::string, std::vector<Entry>, std::less<>> entries_;
  mutable std::unordered_map<std::string, std::vector<MacroAlternative>> cache_;
};

/// Parses the argument of `#define` and appends the definition under
/// `enclosing_pc`. Returns false (with a MalformedDefine diagnostic) when the
/// directive is unusable.
bool define_directive(MacroTable& table, std::string_view argument, const PresenceCondition& enclosing_pc,
                      const SourceLocation& origin, Diagnostics& diags);

/// Handles `#undef NAME`.
bool undef_directive(MacroTable& table, std::string_view argument, const PresenceCondition& enclosing_pc,
                     const SourceLocation& origin, Diagnostics& diags);

/// A token after expansion, tagged with the presence condition under which
/// it is part of the token stream.
struct PcToken {
  Token token;
  PresenceCondition pc;
  std::shared_ptr<const std::vector<std::string>> hide;  // sorted macro names painted blue
  std::size_t depth = 0;                                 // nested expansion level
  bool from_macro = false;
};

inline constexpr std::size_t kMaxExpansionDepth = 256;

/// Expands text under a variational macro table. When the surrounding
/// context admits exactly one definition of a name, expansion is ordinary
/// C preprocessing (rescanning against the rest of the stream). When
/// several variants are possible the invocation is expanded once per
/// variant, the result tokens are tagged with the variant's condition, and
/// the remainder of the stream is shared.
class MacroExpander {
 public:
  MacroExpander(const MacroTable& table, Diagnostics& diags, std::string file = {})
      : table_(table), diags_(diags), file_(std::move(file)) {}

  std::vector<PcToken> expand(const std::vector<Token>& tokens, const PresenceCondition& context);
  std::vector<PcToken> expand(std::vector<PcToken> tokens, const PresenceCondition& context);

 private:
  void run(std::deque<PcToken>& input, std::vector<PcToken>& out);
  bool budget_exhausted(const PcToken& t);

  const MacroTable& table_;
  Diagnostics& diags_;
  std::string file_;
  std::size_t steps_ = 0;
};

/// Expands and parses an `#if`/`#elif` argument in `context`. Macros with
/// several live variants are split case by case, so the result is the
/// disjunction over variants of (variant condition && parsed condition).
/// `defined` operands are never expanded. On a parse error the condition is
/// replaced by an opaque atom `__parse_error_N` and a ParseError diagnostic
/// is emitted.
class ConditionParser {
 public:
  ConditionParser(const MacroTable& table, Diagnostics& diags) : table_(table), diags_(diags) {}

  PresenceCondition parse(std::string_view argument, const PresenceCondition& context,
                          const SourceLocation& where);

  static constexpr std::size_t kMaxAlternatives = 256;
  static constexpr std::string_view kParseErrorPrefix = "__parse_error_";

 private:
  const MacroTable& table_;
  Diagnostics& diags_;
  std::size_t error_counter_ = 0;
};

bool is_parse_error_atom(std::string_view name);

}  // namespace varscope
