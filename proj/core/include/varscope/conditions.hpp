#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varscope/diagnostics.hpp"
#include "varscope/tokens.hpp"

namespace varscope {

// ---------------------------------------------------------------------------
// Conditional-directive expressions
// ---------------------------------------------------------------------------

enum class ExprOp {
  LogNot, BitNot, Neg, Plus,
  Mul, Div, Mod, Add, Sub, Shl, Shr,
  Lt, Le, Gt, Ge, Eq, Ne,
  BitAnd, BitXor, BitOr, LogAnd, LogOr,
};

std::string_view spelling(ExprOp op);

class ConditionExpr;
using ExprPtr = std::shared_ptr<const ConditionExpr>;

/// Expression tree of an `#if`/`#elif` argument after macro expansion.
/// Remaining identifiers are atoms: `defined(X)` or a bare `X`.
class ConditionExpr {
 public:
  enum class Kind { IntLiteral, Defined, Ident, Unary, Binary, Ternary };

  static ExprPtr literal(std::int64_t value);
  static ExprPtr defined(std::string name);
  static ExprPtr ident(std::string name);
  static ExprPtr unary(ExprOp op, ExprPtr operand);
  static ExprPtr binary(ExprOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr ternary(ExprPtr cond, ExprPtr then_expr, ExprPtr else_expr);

  Kind kind() const { return kind_; }
  std::int64_t value() const { return value_; }
  const std::string& name() const { return name_; }
  ExprOp op() const { return op_; }
  const std::vector<ExprPtr>& operands() const { return operands_; }

  bool has_identifiers() const;
  void collect_identifiers(std::set<std::string>& out) const;

  friend bool operator==(const ConditionExpr& a, const ConditionExpr& b);

  ConditionExpr(Kind kind, std::int64_t value, std::string name, ExprOp op, std::vector<ExprPtr> operands)
      : kind_(kind), value_(value), name_(std::move(name)), op_(op), operands_(std::move(operands)) {}

 private:
  Kind kind_;
  std::int64_t value_ = 0;
  std::string name_;
  ExprOp op_ = ExprOp::Plus;
  std::vector<ExprPtr> operands_;
};

/// C syntax with every binary and ternary node parenthesized.
std::string to_string(const ConditionExpr& expr);

/// Parses an already macro-expanded token sequence under C operator
/// precedence. Throws Error{"ParseError"} on malformed input, including any
/// leftover function-like invocation.
ExprPtr parse_expression(std::span<const Token> tokens);
ExprPtr parse_expression(std::string_view text);

struct ExprValue {
  std::int64_t value = 0;
  bool division_by_zero = false;
};

/// Integer evaluation; `ident_value` supplies the value of Defined/Ident atoms.
ExprValue evaluate_expr(const ConditionExpr& expr,
                        const std::function<std::int64_t(const std::string&)>& ident_value);

// ---------------------------------------------------------------------------
// Presence conditions
// ---------------------------------------------------------------------------

/// Immutable formula over feature atoms. Constructed only through the
/// folding builders below, so no And/Or/Not node ever has a constant child,
/// And/Or are flattened and free of duplicate children, and double
/// negation never appears.
class PresenceCondition {
 public:
  enum class Kind { True, False, Atom, Not, And, Or, Cmp };

  PresenceCondition();  // True

  static PresenceCondition constant(bool value);
  static PresenceCondition atom(std::string name);
  /// Wraps an arithmetic/comparison expression; folds to a constant when the
  /// expression mentions no identifiers.
  static PresenceCondition cmp(ExprPtr expr);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const std::string& name() const;
  const std::vector<PresenceCondition>& children() const;
  const ConditionExpr& expr() const;
  const ExprPtr& expr_ptr() const;

  /// Sorted, duplicate-free feature names reachable in this formula.
  const std::vector<std::string>& atoms() const;

  std::size_t hash() const;
  const void* identity() const { return node_.get(); }

  /// Canonical text: `defined(NAME)`, `!`, `&&`, `||`, parentheses and C
  /// comparison syntax. `1`/`0` for the constants.
  std::string to_string() const;

  friend bool operator==(const PresenceCondition& a, const PresenceCondition& b);

  struct Node;

 private:
  explicit PresenceCondition(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend PresenceCondition make_and(std::vector<PresenceCondition>);
  friend PresenceCondition make_or(std::vector<PresenceCondition>);
  friend PresenceCondition operator!(const PresenceCondition&);

  std::shared_ptr<const Node> node_;
};

PresenceCondition make_and(std::vector<PresenceCondition> conjuncts);
PresenceCondition make_or(std::vector<PresenceCondition> disjuncts);
PresenceCondition operator!(const PresenceCondition& pc);
inline PresenceCondition operator&&(const PresenceCondition& a, const PresenceCondition& b) {
  return make_and({a, b});
}
inline PresenceCondition operator||(const PresenceCondition& a, const PresenceCondition& b) {
  return make_or({a, b});
}

/// The conjuncts of `pc` (its children when it is an And, itself otherwise).
std::vector<PresenceCondition> conjuncts(const PresenceCondition& pc);

/// Disjunction that recognizes the two ways a formula gets split by a
/// fork on some condition X: `C && X` with `C && !X` yields `C`, and a
/// disjunct implied by the other is absorbed. Falls back to make_or.
PresenceCondition merge_alternatives(const PresenceCondition& a, const PresenceCondition& b);

/// Boolean structure (`!`, `&&`, `||`, `?:`, atoms) becomes formula nodes;
/// arithmetic and comparisons become Cmp leaves.
PresenceCondition condition_to_pc(const ConditionExpr& expr);

/// Parses the canonical text form. Throws Error{"ParseError"}.
PresenceCondition parse_presence_condition(std::string_view text);

struct PresenceConditionHash {
  std::size_t operator()(const PresenceCondition& pc) const { return pc.hash(); }
};

// ---------------------------------------------------------------------------
// Configurations and evaluation
// ---------------------------------------------------------------------------

enum class FeatureState { Enabled, Disabled };

class Configuration {
 public:
  using Assignment = std::map<std::string, FeatureState, std::less<>>;

  /// A total configuration: unmentioned features take `default_state`.
  explicit Configuration(FeatureState default_state = FeatureState::Disabled)
      : default_state_(default_state) {}

  /// A partial configuration: unmentioned features are unknown.
  static Configuration partial();

  template <typename Range>
  static Configuration enabling(const Range& names) {
    Configuration c;
    for (const auto& n : names) c.set(std::string(n), FeatureState::Enabled);
    return c;
  }

  void set(std::string name, FeatureState state) { assignment_[std::move(name)] = state; }
  void enable(std::string name) { set(std::move(name), FeatureState::Enabled); }
  void disable(std::string name) { set(std::move(name), FeatureState::Disabled); }

  /// State of `name`, falling back to the default; nullopt only for partial
  /// configurations.
  std::optional<FeatureState> state(std::string_view name) const;
  bool enabled(std::string_view name) const { return state(name) == FeatureState::Enabled; }
  bool is_total() const { return default_state_.has_value(); }
  std::optional<FeatureState> default_state() const { return default_state_; }
  const Assignment& assignment() const { return assignment_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  Assignment assignment_;
  std::optional<FeatureState> default_state_;
};

/// Evaluates under a total configuration (a partial configuration is read
/// with unassigned features disabled). An atom is true iff its feature is
/// enabled; inside arithmetic an enabled feature is 1, anything else 0. A
/// comparison that divides by zero is false and reported to `sink`.
bool evaluate(const PresenceCondition& pc, const Configuration& config, Diagnostics* sink = nullptr);

enum class Tristate { False, True, Unknown };

/// Kleene three-valued evaluation; Unknown only if the result depends on an
/// unassigned feature.
Tristate evaluate_partial(const PresenceCondition& pc, const Configuration& config);

std::set<std::string> atoms(const PresenceCondition& pc);

inline constexpr std::size_t kMaxEnumerationAtoms = 20;

/// Exhaustive enumeration over atoms(pc). Throws Error{"TooManyAtoms"} when
/// there are more than kMaxEnumerationAtoms atoms.
bool satisfiable(const PresenceCondition& pc);

/// satisfiable(), except that formulas too large to enumerate count as
/// possibly satisfiable.
bool possibly_satisfiable(const PresenceCondition& pc);

bool is_tautology(const PresenceCondition& pc);

/// Joint enumeration of `a && b` and `a && !b`. When the atom count exceeds
/// the enumeration cap both flags are reported true.
struct Overlap {
  bool with = true;     // a && b satisfiable
  bool without = true;  // a && !b satisfiable
  bool exact = false;
};
Overlap relate(const PresenceCondition& a, const PresenceCondition& b);

/// cond(i) && !cond(0) && ... && !cond(i-1); an absent condition (`#else`)
/// contributes only the negated prior conditions.
PresenceCondition derive_branch_condition(std::span<const std::optional<PresenceCondition>> group,
                                          std::size_t branch_index);

}  // namespace varscope
