#include <cstdint>
#include <cstdio>
#include <limits>

#include "varscope/conditions.hpp"
#include "varscope/text.hpp"

namespace varscope {

std::string_view spelling(ExprOp op) {
  switch (op) {
    case ExprOp::LogNot: return "!";
    case ExprOp::BitNot: return "~";
    case ExprOp::Neg: return "-";
    case ExprOp::Plus: return "+";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Mod: return "%";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Shl: return "<<";
    case ExprOp::Shr: return ">>";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::BitAnd: return "&";
    case ExprOp::BitXor: return "^";
    case ExprOp::BitOr: return "|";
    case ExprOp::LogAnd: return "&&";
    case ExprOp::LogOr: return "||";
  }
  return "?";
}

ExprPtr ConditionExpr::literal(std::int64_t value) {
  return std::make_shared<const ConditionExpr>(Kind::IntLiteral, value, std::string{}, ExprOp::Plus,
                                               std::vector<ExprPtr>{});
}
ExprPtr ConditionExpr::defined(std::string name) {
  return std::make_shared<const ConditionExpr>(Kind::Defined, 0, std::move(name), ExprOp::Plus,
                                               std::vector<ExprPtr>{});
}
ExprPtr ConditionExpr::ident(std::string name) {
  return std::make_shared<const ConditionExpr>(Kind::Ident, 0, std::move(name), ExprOp::Plus,
                                               std::vector<ExprPtr>{});
}
ExprPtr ConditionExpr::unary(ExprOp op, ExprPtr operand) {
  return std::make_shared<const ConditionExpr>(Kind::Unary, 0, std::string{}, op,
                                               std::vector<ExprPtr>{std::move(operand)});
}
ExprPtr ConditionExpr::binary(ExprOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const ConditionExpr>(Kind::Binary, 0, std::string{}, op,
                                               std::vector<ExprPtr>{std::move(lhs), std::move(rhs)});
}
ExprPtr ConditionExpr::ternary(ExprPtr cond, ExprPtr then_expr, ExprPtr else_expr) {
  return std::make_shared<const ConditionExpr>(
      Kind::Ternary, 0, std::string{}, ExprOp::Plus,
      std::vector<ExprPtr>{std::move(cond), std::move(then_expr), std::move(else_expr)});
}

bool ConditionExpr::has_identifiers() const {
  if (kind_ == Kind::Defined || kind_ == Kind::Ident) return true;
  for (const auto& o : operands_)
    if (o->has_identifiers()) return true;
  return false;
}

void ConditionExpr::collect_identifiers(std::set<std::string>& out) const {
  if (kind_ == Kind::Defined || kind_ == Kind::Ident) out.insert(name_);
  for (const auto& o : operands_) o->collect_identifiers(out);
}

bool operator==(const ConditionExpr& a, const ConditionExpr& b) {
  if (&a == &b) return true;
  if (a.kind_ != b.kind_ || a.operands_.size() != b.operands_.size()) return false;
  switch (a.kind_) {
    case ConditionExpr::Kind::IntLiteral:
      return a.value_ == b.value_;
    case ConditionExpr::Kind::Defined:
    case ConditionExpr::Kind::Ident:
      return a.name_ == b.name_;
    case ConditionExpr::Kind::Unary:
    case ConditionExpr::Kind::Binary:
      if (a.op_ != b.op_) return false;
      break;
    case ConditionExpr::Kind::Ternary:
      break;
  }
  for (std::size_t i = 0; i < a.operands_.size(); ++i)
    if (!(*a.operands_[i] == *b.operands_[i])) return false;
  return true;
}

std::string to_string(const ConditionExpr& e) {
  switch (e.kind()) {
    case ConditionExpr::Kind::IntLiteral: {
      if (e.value() >= 0) return std::to_string(e.value());
      // Only arises from literals beyond INT64_MAX; hex keeps the bits.
      char buf[32];
      std::snprintf(buf, sizeof buf, "0x%llxu",
                    static_cast<unsigned long long>(static_cast<std::uint64_t>(e.value())));
      return buf;
    }
    case ConditionExpr::Kind::Defined:
      return "defined(" + e.name() + ")";
    case ConditionExpr::Kind::Ident:
      return e.name();
    case ConditionExpr::Kind::Unary: {
      const auto& operand = *e.operands()[0];
      auto inner = to_string(operand);
      if (operand.kind() == ConditionExpr::Kind::Unary) inner = "(" + inner + ")";
      return std::string(spelling(e.op())) + inner;
    }
    case ConditionExpr::Kind::Binary:
      return "(" + to_string(*e.operands()[0]) + " " + std::string(spelling(e.op())) + " " +
             to_string(*e.operands()[1]) + ")";
    case ConditionExpr::Kind::Ternary:
      return "(" + to_string(*e.operands()[0]) + " ? " + to_string(*e.operands()[1]) + " : " +
             to_string(*e.operands()[2]) + ")";
  }
  return {};
}

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("ParseError", message); }

std::int64_t parse_integer(const std::string& spelling) {
  std::string s = spelling;
  while (!s.empty() && (s.back() == 'u' || s.back() == 'U' || s.back() == 'l' || s.back() == 'L'))
    s.pop_back();
  if (s.empty()) fail("malformed integer literal '" + spelling + "'");
  int base = 10;
  std::size_t i = 0;
  if (s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    i = 2;
  } else if (s.size() > 1 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    i = 2;
  } else if (s.size() > 1 && s[0] == '0') {
    base = 8;
    i = 1;
  }
  if (i >= s.size()) fail("malformed integer literal '" + spelling + "'");
  std::uint64_t value = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = 10 + c - 'a';
    else if (c >= 'A' && c <= 'F') digit = 10 + c - 'A';
    else if (c == '\'') continue;
    else fail("malformed integer literal '" + spelling + "'");
    if (digit >= base) fail("malformed integer literal '" + spelling + "'");
    value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digit);
  }
  return static_cast<std::int64_t>(value);
}

std::int64_t parse_char_literal(const std::string& spelling) {
  auto q = spelling.find('\'');
  if (q == std::string::npos || spelling.size() < q + 3 || spelling.back() != '\'')
    fail("malformed character literal " + spelling);
  const std::string body = spelling.substr(q + 1, spelling.size() - q - 2);
  if (body.empty()) fail("empty character literal");
  if (body[0] != '\\') return static_cast<unsigned char>(body[0]);
  if (body.size() < 2) fail("malformed character literal " + spelling);
  switch (body[1]) {
    case 'n': return '\n';
    case 't': return '\t';
    case 'r': return '\r';
    case 'a': return '\a';
    case 'b': return '\b';
    case 'f': return '\f';
    case 'v': return '\v';
    case '\\': return '\\';
    case '\'': return '\'';
    case '"': return '"';
    case '?': return '?';
    case 'x': return std::stoll(body.substr(2), nullptr, 16);
    default:
      if (body[1] >= '0' && body[1] <= '7') return std::stoll(body.substr(1), nullptr, 8);
      return static_cast<unsigned char>(body[1]);
  }
}

class ExprParser {
 public:
  explicit ExprParser(std::span<const Token> tokens) : toks_(tokens) {}

  ExprPtr parse_all() {
    if (toks_.empty()) fail("empty expression");
    auto e = conditional();
    if (pos_ != toks_.size()) fail("unexpected token '" + toks_[pos_].text + "'");
    return e;
  }

 private:
  bool at(std::string_view s) const {
    return pos_ < toks_.size() && toks_[pos_].kind == TokenKind::Punct && toks_[pos_].text == s;
  }
  const Token& next() {
    if (pos_ >= toks_.size()) fail("unexpected end of expression");
    return toks_[pos_++];
  }
  void expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  ExprPtr conditional() {
    auto c = logical_or();
    if (at("?")) {
      ++pos_;
      auto a = conditional();
      expect(":");
      auto b = conditional();
      return ConditionExpr::ternary(std::move(c), std::move(a), std::move(b));
    }
    return c;
  }

  template <typename Next>
  ExprPtr left_assoc(Next next_level, std::initializer_list<std::pair<std::string_view, ExprOp>> ops) {
    auto lhs = next_level();
    for (;;) {
      bool found = false;
      for (const auto& [text, op] : ops) {
        if (at(text)) {
          ++pos_;
          lhs = ConditionExpr::binary(op, std::move(lhs), next_level());
          found = true;
          break;
        }
      }
      if (!found) return lhs;
    }
  }

  ExprPtr logical_or() { return left_assoc([&] { return logical_and(); }, {{"||", ExprOp::LogOr}}); }
  ExprPtr logical_and() { return left_assoc([&] { return bit_or(); }, {{"&&", ExprOp::LogAnd}}); }
  ExprPtr bit_or() { return left_assoc([&] { return bit_xor(); }, {{"|", ExprOp::BitOr}}); }
  ExprPtr bit_xor() { return left_assoc([&] { return bit_and(); }, {{"^", ExprOp::BitXor}}); }
  ExprPtr bit_and() { return left_assoc([&] { return equality(); }, {{"&", ExprOp::BitAnd}}); }
  ExprPtr equality() {
    return left_assoc([&] { return relational(); }, {{"==", ExprOp::Eq}, {"!=", ExprOp::Ne}});
  }
  ExprPtr relational() {
    return left_assoc([&] { return shift(); },
                      {{"<=", ExprOp::Le}, {">=", ExprOp::Ge}, {"<", ExprOp::Lt}, {">", ExprOp::Gt}});
  }
  ExprPtr shift() {
    return left_assoc([&] { return additive(); }, {{"<<", ExprOp::Shl}, {">>", ExprOp::Shr}});
  }
  ExprPtr additive() {
    return left_assoc([&] { return multiplicative(); }, {{"+", ExprOp::Add}, {"-", ExprOp::Sub}});
  }
  ExprPtr multiplicative() {
    return left_assoc([&] { return unary(); },
                      {{"*", ExprOp::Mul}, {"/", ExprOp::Div}, {"%", ExprOp::Mod}});
  }

  ExprPtr unary() {
    if (at("!")) { ++pos_; return ConditionExpr::unary(ExprOp::LogNot, unary()); }
    if (at("~")) { ++pos_; return ConditionExpr::unary(ExprOp::BitNot, unary()); }
    if (at("-")) { ++pos_; return ConditionExpr::unary(ExprOp::Neg, unary()); }
    if (at("+")) { ++pos_; return ConditionExpr::unary(ExprOp::Plus, unary()); }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = next();
    if (t.kind == TokenKind::Punct && t.text == "(") {
      auto e = conditional();
      expect(")");
      return e;
    }
    if (t.kind == TokenKind::Number) return ConditionExpr::literal(parse_integer(t.text));
    if (t.kind == TokenKind::Char) return ConditionExpr::literal(parse_char_literal(t.text));
    if (t.kind == TokenKind::Identifier) {
      if (t.text == "defined") {
        bool paren = at("(");
        if (paren) ++pos_;
        const Token& name = next();
        if (name.kind != TokenKind::Identifier) fail("defined requires an identifier");
        if (paren) expect(")");
        return ConditionExpr::defined(name.text);
      }
      if (at("(")) fail("unexpanded function-like invocation '" + t.text + "(...)'");
      return ConditionExpr::ident(t.text);
    }
    fail("unexpected token '" + t.text + "'");
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
};

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

}  // namespace

ExprPtr parse_expression(std::span<const Token> tokens) { return ExprParser(tokens).parse_all(); }

ExprPtr parse_expression(std::string_view text) {
  const auto toks = tokenize(text);
  return parse_expression(std::span<const Token>(toks));
}

ExprValue evaluate_expr(const ConditionExpr& e,
                        const std::function<std::int64_t(const std::string&)>& ident_value) {
  using K = ConditionExpr::Kind;
  switch (e.kind()) {
    case K::IntLiteral:
      return {e.value(), false};
    case K::Defined:
    case K::Ident:
      return {ident_value(e.name()), false};
    case K::Ternary: {
      const auto c = evaluate_expr(*e.operands()[0], ident_value);
      if (c.division_by_zero) return c;
      return evaluate_expr(*e.operands()[c.value != 0 ? 1 : 2], ident_value);
    }
    case K::Unary: {
      const auto v = evaluate_expr(*e.operands()[0], ident_value);
      if (v.division_by_zero) return v;
      switch (e.op()) {
        case ExprOp::LogNot: return {v.value == 0 ? 1 : 0, false};
        case ExprOp::BitNot: return {~v.value, false};
        case ExprOp::Neg: return {wrap_sub(0, v.value), false};
        default: return v;
      }
    }
    case K::Binary: {
      const auto lhs = evaluate_expr(*e.operands()[0], ident_value);
      if (lhs.division_by_zero) return lhs;
      if (e.op() == ExprOp::LogAnd && lhs.value == 0) return {0, false};
      if (e.op() == ExprOp::LogOr && lhs.value != 0) return {1, false};
      const auto rhs = evaluate_expr(*e.operands()[1], ident_value);
      if (rhs.division_by_zero) return rhs;
      const auto a = lhs.value;
      const auto b = rhs.value;
      switch (e.op()) {
        case ExprOp::Mul: return {wrap_mul(a, b), false};
        case ExprOp::Div:
        case ExprOp::Mod:
          if (b == 0) return {0, true};
          if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
            return {e.op() == ExprOp::Div ? a : 0, false};
          return {e.op() == ExprOp::Div ? a / b : a % b, false};
        case ExprOp::Add: return {wrap_add(a, b), false};
        case ExprOp::Sub: return {wrap_sub(a, b), false};
        case ExprOp::Shl:
          if (b < 0 || b >= 64) return {0, false};
          return {static_cast<std::int64_t>(static_cast<std::uint64_t>(a) << b), false};
        case ExprOp::Shr:
          if (b < 0 || b >= 64) return {a < 0 ? -1 : 0, false};
          return {a >> b, false};
        case ExprOp::Lt: return {a < b, false};
        case ExprOp::Le: return {a <= b, false};
        case ExprOp::Gt: return {a > b, false};
        case ExprOp::Ge: return {a >= b, false};
        case ExprOp::Eq: return {a == b, false};
        case ExprOp::Ne: return {a != b, false};
        case ExprOp::BitAnd: return {a & b, false};
        case ExprOp::BitXor: return {a ^ b, false};
        case ExprOp::BitOr: return {a | b, false};
        case ExprOp::LogAnd:
        case ExprOp::LogOr: return {b != 0, false};
        default: return {0, false};
      }
    }
  }
  return {0, false};
}

}  // namespace varscope
