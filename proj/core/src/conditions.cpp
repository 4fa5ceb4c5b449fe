#include "varscope/conditions.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <unordered_map>

namespace varscope {

struct PresenceCondition::Node {
  Kind kind = Kind::True;
  std::string name;
  std::vector<PresenceCondition> children;
  ExprPtr expr;
  std::vector<std::string> atoms;
  std::size_t hash = 0;
};

namespace {

using Node = PresenceCondition::Node;

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_expr(const ConditionExpr& e) {
  std::size_t h = std::hash<int>{}(static_cast<int>(e.kind()));
  h = mix(h, std::hash<std::int64_t>{}(e.value()));
  h = mix(h, std::hash<std::string>{}(e.name()));
  h = mix(h, std::hash<int>{}(static_cast<int>(e.op())));
  for (const auto& o : e.operands()) h = mix(h, hash_expr(*o));
  return h;
}

std::shared_ptr<const Node> make_node(PresenceCondition::Kind kind, std::string name,
                                      std::vector<PresenceCondition> children, ExprPtr expr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->children = std::move(children);
  n->expr = std::move(expr);
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(kind));
  if (kind == PresenceCondition::Kind::Atom) {
    n->atoms = {n->name};
    h = mix(h, std::hash<std::string>{}(n->name));
  } else if (kind == PresenceCondition::Kind::Cmp) {
    std::set<std::string> ids;
    n->expr->collect_identifiers(ids);
    n->atoms.assign(ids.begin(), ids.end());
    h = mix(h, hash_expr(*n->expr));
  } else {
    for (const auto& c : n->children) {
      std::vector<std::string> merged;
      std::set_union(n->atoms.begin(), n->atoms.end(), c.atoms().begin(), c.atoms().end(),
                     std::back_inserter(merged));
      n->atoms = std::move(merged);
      h = mix(h, c.hash());
    }
  }
  n->hash = h;
  return n;
}

const std::shared_ptr<const Node>& true_node() {
  static const auto node = make_node(PresenceCondition::Kind::True, {}, {}, nullptr);
  return node;
}

const std::shared_ptr<const Node>& false_node() {
  static const auto node = make_node(PresenceCondition::Kind::False, {}, {}, nullptr);
  return node;
}

bool contains(const std::vector<PresenceCondition>& v, const PresenceCondition& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool has_complement_pair(const std::vector<PresenceCondition>& v) {
  for (const auto& x : v) {
    if (x.kind() == PresenceCondition::Kind::Not && contains(v, x.children()[0])) return true;
  }
  return false;
}

}  // namespace

PresenceCondition::PresenceCondition() : node_(true_node()) {}

PresenceCondition PresenceCondition::constant(bool value) {
  return PresenceCondition(value ? true_node() : false_node());
}

PresenceCondition PresenceCondition::atom(std::string name) {
  return PresenceCondition(make_node(Kind::Atom, std::move(name), {}, nullptr));
}

PresenceCondition PresenceCondition::cmp(ExprPtr expr) {
  if (!expr->has_identifiers()) {
    const auto v = evaluate_expr(*expr, [](const std::string&) { return std::int64_t{0}; });
    return constant(!v.division_by_zero && v.value != 0);
  }
  return PresenceCondition(make_node(Kind::Cmp, {}, {}, std::move(expr)));
}

PresenceCondition::Kind PresenceCondition::kind() const { return node_->kind; }
const std::string& PresenceCondition::name() const { return node_->name; }
const std::vector<PresenceCondition>& PresenceCondition::children() const { return node_->children; }
const ConditionExpr& PresenceCondition::expr() const { return *node_->expr; }
const ExprPtr& PresenceCondition::expr_ptr() const { return node_->expr; }
const std::vector<std::string>& PresenceCondition::atoms() const { return node_->atoms; }
std::size_t PresenceCondition::hash() const { return node_->hash; }

bool operator==(const PresenceCondition& a, const PresenceCondition& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  switch (x.kind) {
    case PresenceCondition::Kind::True:
    case PresenceCondition::Kind::False:
      return true;
    case PresenceCondition::Kind::Atom:
      return x.name == y.name;
    case PresenceCondition::Kind::Cmp:
      return *x.expr == *y.expr;
    default:
      return x.children == y.children;
  }
}

PresenceCondition make_and(std::vector<PresenceCondition> items) {
  std::vector<PresenceCondition> flat;
  flat.reserve(items.size());
  for (auto& c : items) {
    switch (c.kind()) {
      case PresenceCondition::Kind::False:
        return PresenceCondition::constant(false);
      case PresenceCondition::Kind::True:
        break;
      case PresenceCondition::Kind::And:
        for (const auto& g : c.children())
          if (!contains(flat, g)) flat.push_back(g);
        break;
      default:
        if (!contains(flat, c)) flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return PresenceCondition::constant(true);
  if (flat.size() == 1) return flat.front();
  if (has_complement_pair(flat)) return PresenceCondition::constant(false);
  return PresenceCondition(make_node(PresenceCondition::Kind::And, {}, std::move(flat), nullptr));
}

PresenceCondition make_or(std::vector<PresenceCondition> items) {
  std::vector<PresenceCondition> flat;
  flat.reserve(items.size());
  for (auto& c : items) {
    switch (c.kind()) {
      case PresenceCondition::Kind::True:
        return PresenceCondition::constant(true);
      case PresenceCondition::Kind::False:
        break;
      case PresenceCondition::Kind::Or:
        for (const auto& g : c.children())
          if (!contains(flat, g)) flat.push_back(g);
        break;
      default:
        if (!contains(flat, c)) flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return PresenceCondition::constant(false);
  if (flat.size() == 1) return flat.front();
  if (has_complement_pair(flat)) return PresenceCondition::constant(true);
  return PresenceCondition(make_node(PresenceCondition::Kind::Or, {}, std::move(flat), nullptr));
}

PresenceCondition operator!(const PresenceCondition& pc) {
  switch (pc.kind()) {
    case PresenceCondition::Kind::True:
      return PresenceCondition::constant(false);
    case PresenceCondition::Kind::False:
      return PresenceCondition::constant(true);
    case PresenceCondition::Kind::Not:
      return pc.children()[0];
    default:
      return PresenceCondition(make_node(PresenceCondition::Kind::Not, {}, {pc}, nullptr));
  }
}

std::vector<PresenceCondition> conjuncts(const PresenceCondition& pc) {
  if (pc.kind() == PresenceCondition::Kind::And) return pc.children();
  if (pc.is_true()) return {};
  return {pc};
}

namespace {

bool subset_of(const std::vector<PresenceCondition>& xs, const std::vector<PresenceCondition>& ys) {
  return std::all_of(xs.begin(), xs.end(), [&](const auto& x) { return contains(ys, x); });
}

std::vector<PresenceCondition> without(const std::vector<PresenceCondition>& xs,
                                       const std::vector<PresenceCondition>& drop) {
  std::vector<PresenceCondition> out;
  for (const auto& x : xs)
    if (!contains(drop, x)) out.push_back(x);
  return out;
}

bool same_set(const std::vector<PresenceCondition>& a, const std::vector<PresenceCondition>& b) {
  return a.size() == b.size() && subset_of(a, b);
}

// a = C && X (conjuncts of X spread into a), b = C && !X  =>  C
std::optional<PresenceCondition> resolve(const std::vector<PresenceCondition>& ca,
                                         const std::vector<PresenceCondition>& cb) {
  for (const auto& n : cb) {
    if (n.kind() != PresenceCondition::Kind::Not) continue;
    const auto xs = conjuncts(n.children()[0]);
    if (xs.empty() || !subset_of(xs, ca)) continue;
    const auto rest_b = without(cb, {n});
    if (same_set(without(ca, xs), rest_b)) return make_and(rest_b);
  }
  return std::nullopt;
}

}  // namespace

PresenceCondition merge_alternatives(const PresenceCondition& a, const PresenceCondition& b) {
  if (a == b) return a;
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  const auto ca = conjuncts(a);
  const auto cb = conjuncts(b);
  // b implies a structurally (a's conjuncts are a subset of b's): absorb.
  if (subset_of(ca, cb)) return a;
  if (subset_of(cb, ca)) return b;
  if (auto r = resolve(ca, cb)) return *r;
  if (auto r = resolve(cb, ca)) return *r;
  // Or-lists: try to resolve the new disjunct against an existing one.
  if (a.kind() == PresenceCondition::Kind::Or) {
    auto items = a.children();
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto merged = merge_alternatives(items[i], b);
      if (merged.kind() != PresenceCondition::Kind::Or) {
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
        PresenceCondition acc = PresenceCondition::constant(false);
        for (const auto& it : items) acc = make_or({acc, it});
        return merge_alternatives(acc, merged);
      }
    }
  }
  return make_or({a, b});
}

PresenceCondition condition_to_pc(const ConditionExpr& e) {
  using K = ConditionExpr::Kind;
  switch (e.kind()) {
    case K::IntLiteral:
      return PresenceCondition::constant(e.value() != 0);
    case K::Defined:
    case K::Ident:
      return PresenceCondition::atom(e.name());
    case K::Unary:
      if (e.op() == ExprOp::LogNot) return !condition_to_pc(*e.operands()[0]);
      break;
    case K::Binary:
      if (e.op() == ExprOp::LogAnd)
        return make_and({condition_to_pc(*e.operands()[0]), condition_to_pc(*e.operands()[1])});
      if (e.op() == ExprOp::LogOr)
        return make_or({condition_to_pc(*e.operands()[0]), condition_to_pc(*e.operands()[1])});
      break;
    case K::Ternary: {
      const auto c = condition_to_pc(*e.operands()[0]);
      const auto t = condition_to_pc(*e.operands()[1]);
      const auto f = condition_to_pc(*e.operands()[2]);
      if (c.is_true()) return t;
      if (c.is_false()) return f;
      return make_or({make_and({c, t}), make_and({!c, f})});
    }
  }
  // Arithmetic/comparison: rebuild as a shared pointer for the Cmp leaf.
  return PresenceCondition::cmp(std::make_shared<const ConditionExpr>(e));
}

std::string PresenceCondition::to_string() const {
  switch (kind()) {
    case Kind::True:
      return "1";
    case Kind::False:
      return "0";
    case Kind::Atom:
      return "defined(" + name() + ")";
    case Kind::Cmp: {
      auto s = varscope::to_string(expr());
      if (expr().kind() != ConditionExpr::Kind::Binary && expr().kind() != ConditionExpr::Kind::Ternary)
        s = "(" + s + ")";
      return s;
    }
    case Kind::Not: {
      const auto& c = children()[0];
      if (c.kind() == Kind::And || c.kind() == Kind::Or) return "!(" + c.to_string() + ")";
      return "!" + c.to_string();
    }
    case Kind::And:
    case Kind::Or: {
      const auto* sep = kind() == Kind::And ? " && " : " || ";
      std::string out;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i > 0) out += sep;
        const auto& c = children()[i];
        if (c.kind() == Kind::And || c.kind() == Kind::Or)
          out += "(" + c.to_string() + ")";
        else
          out += c.to_string();
      }
      return out;
    }
  }
  return {};
}

PresenceCondition parse_presence_condition(std::string_view text) {
  return condition_to_pc(*parse_expression(text));
}

// ---------------------------------------------------------------------------

Configuration Configuration::partial() {
  Configuration c;
  c.default_state_.reset();
  return c;
}

std::optional<FeatureState> Configuration::state(std::string_view name) const {
  if (auto it = assignment_.find(name); it != assignment_.end()) return it->second;
  return default_state_;
}

namespace {

template <typename Lookup>
bool eval_with(const PresenceCondition& pc, const Lookup& enabled, bool* div_zero) {
  switch (pc.kind()) {
    case PresenceCondition::Kind::True:
      return true;
    case PresenceCondition::Kind::False:
      return false;
    case PresenceCondition::Kind::Atom:
      return enabled(pc.name());
    case PresenceCondition::Kind::Not:
      return !eval_with(pc.children()[0], enabled, div_zero);
    case PresenceCondition::Kind::And:
      for (const auto& c : pc.children())
        if (!eval_with(c, enabled, div_zero)) return false;
      return true;
    case PresenceCondition::Kind::Or:
      for (const auto& c : pc.children())
        if (eval_with(c, enabled, div_zero)) return true;
      return false;
    case PresenceCondition::Kind::Cmp: {
      const auto v = evaluate_expr(pc.expr(), [&](const std::string& n) -> std::int64_t {
        return enabled(n) ? 1 : 0;
      });
      if (v.division_by_zero) {
        if (div_zero) *div_zero = true;
        return false;
      }
      return v.value != 0;
    }
  }
  return false;
}

Tristate k_not(Tristate t) {
  if (t == Tristate::Unknown) return t;
  return t == Tristate::True ? Tristate::False : Tristate::True;
}

Tristate eval_partial(const PresenceCondition& pc, const Configuration& config) {
  switch (pc.kind()) {
    case PresenceCondition::Kind::True:
      return Tristate::True;
    case PresenceCondition::Kind::False:
      return Tristate::False;
    case PresenceCondition::Kind::Atom: {
      const auto s = config.state(pc.name());
      if (!s) return Tristate::Unknown;
      return *s == FeatureState::Enabled ? Tristate::True : Tristate::False;
    }
    case PresenceCondition::Kind::Not:
      return k_not(eval_partial(pc.children()[0], config));
    case PresenceCondition::Kind::And: {
      auto r = Tristate::True;
      for (const auto& c : pc.children()) {
        const auto v = eval_partial(c, config);
        if (v == Tristate::False) return Tristate::False;
        if (v == Tristate::Unknown) r = Tristate::Unknown;
      }
      return r;
    }
    case PresenceCondition::Kind::Or: {
      auto r = Tristate::False;
      for (const auto& c : pc.children()) {
        const auto v = eval_partial(c, config);
        if (v == Tristate::True) return Tristate::True;
        if (v == Tristate::Unknown) r = Tristate::Unknown;
      }
      return r;
    }
    case PresenceCondition::Kind::Cmp: {
      for (const auto& a : pc.atoms())
        if (!config.state(a)) return Tristate::Unknown;
      return evaluate(pc, config) ? Tristate::True : Tristate::False;
    }
  }
  return Tristate::Unknown;
}

// Evaluates formulas under a bitmask assignment over a fixed sorted atom list.
class MaskEvaluator {
 public:
  explicit MaskEvaluator(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) index_.emplace(atoms_[i], i);
  }

  std::size_t size() const { return atoms_.size(); }

  bool operator()(const PresenceCondition& pc, std::uint32_t mask) const {
    auto lookup = [&](const std::string& n) {
      const auto it = index_.find(n);
      return it != index_.end() && ((mask >> it->second) & 1U) != 0;
    };
    return eval_with(pc, lookup, nullptr);
  }

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::vector<std::string> union_atoms(const PresenceCondition& a, const PresenceCondition& b) {
  std::vector<std::string> out;
  std::set_union(a.atoms().begin(), a.atoms().end(), b.atoms().begin(), b.atoms().end(),
                 std::back_inserter(out));
  return out;
}

}  // namespace

bool evaluate(const PresenceCondition& pc, const Configuration& config, Diagnostics* sink) {
  bool div_zero = false;
  const bool result = eval_with(pc, [&](const std::string& n) { return config.enabled(n); }, &div_zero);
  if (div_zero && sink)
    sink->warn("DivisionByZero", {}, "division by zero in condition '" + pc.to_string() + "' evaluates to false");
  return result;
}

Tristate evaluate_partial(const PresenceCondition& pc, const Configuration& config) {
  return eval_partial(pc, config);
}

std::set<std::string> atoms(const PresenceCondition& pc) {
  return {pc.atoms().begin(), pc.atoms().end()};
}

bool satisfiable(const PresenceCondition& pc) {
  if (pc.is_true()) return true;
  if (pc.is_false()) return false;
  if (pc.atoms().size() > kMaxEnumerationAtoms)
    throw Error("TooManyAtoms", "formula has " + std::to_string(pc.atoms().size()) +
                                    " atoms; enumeration is capped at " +
                                    std::to_string(kMaxEnumerationAtoms));
  const MaskEvaluator eval(pc.atoms());
  const std::uint32_t limit = 1U << eval.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask)
    if (eval(pc, mask)) return true;
  return false;
}

bool possibly_satisfiable(const PresenceCondition& pc) {
  if (pc.atoms().size() > kMaxEnumerationAtoms) return !pc.is_false();
  return satisfiable(pc);
}

bool is_tautology(const PresenceCondition& pc) { return !satisfiable(!pc); }

Overlap relate(const PresenceCondition& a, const PresenceCondition& b) {
  if (b.is_true()) return {!a.is_false() && possibly_satisfiable(a), false, a.atoms().size() <= kMaxEnumerationAtoms};
  if (b.is_false()) return {false, !a.is_false() && possibly_satisfiable(a), a.atoms().size() <= kMaxEnumerationAtoms};
  if (a.is_false()) return {false, false, true};
  if (a == b) return {true, false, true};
  auto all = union_atoms(a, b);
  if (all.size() > kMaxEnumerationAtoms) return {true, true, false};
  const MaskEvaluator eval(std::move(all));
  Overlap r{false, false, true};
  const std::uint32_t limit = 1U << eval.size();
  for (std::uint32_t mask = 0; mask < limit && !(r.with && r.without); ++mask) {
    if (!eval(a, mask)) continue;
    if (eval(b, mask))
      r.with = true;
    else
      r.without = true;
  }
  return r;
}

PresenceCondition derive_branch_condition(std::span<const std::optional<PresenceCondition>> group,
                                          std::size_t branch_index) {
  assert(branch_index < group.size());
  std::vector<PresenceCondition> parts;
  parts.reserve(branch_index + 1);
  if (group[branch_index]) parts.push_back(*group[branch_index]);
  for (std::size_t i = 0; i < branch_index; ++i)
    if (group[i]) parts.push_back(!*group[i]);
  return make_and(std::move(parts));
}

}  // namespace varscope
