#include "cpp_oracle.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Removes `/* ... */` and `// ...` comments from a single directive line.
std::string drop_comments(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '/') break;
    if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const auto end = s.find("*/", i + 2);
      if (end == std::string::npos) break;
      out += ' ';
      i = end + 1;
      continue;
    }
    out += s[i];
  }
  return out;
}

struct Lexer {
  explicit Lexer(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
        toks.push_back(text.substr(i, j - i));
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        toks.push_back(text.substr(i, j - i));
        i = j;
      } else {
        static const char* two[] = {"&&", "||", "==", "!=", "<=", ">="};
        bool matched = false;
        for (const char* t : two) {
          if (text.compare(i, 2, t) == 0) {
            toks.emplace_back(t);
            i += 2;
            matched = true;
            break;
          }
        }
        if (!matched) {
          toks.emplace_back(1, c);
          ++i;
        }
      }
    }
  }
  std::vector<std::string> toks;
};

class Evaluator {
 public:
  Evaluator(std::vector<std::string> toks, const std::map<std::string, std::string>& macros)
      : t_(std::move(toks)), macros_(macros) {}

  long long run() {
    const auto v = ternary();
    if (p_ != t_.size()) throw std::runtime_error("trailing tokens in condition");
    return v;
  }

 private:
  const std::string& peek() const {
    static const std::string end;
    return p_ < t_.size() ? t_[p_] : end;
  }
  bool take(const char* s) {
    if (peek() == s) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!take(s)) throw std::runtime_error(std::string("expected ") + s);
  }

  long long ternary() {
    const auto c = logical_or();
    if (!take("?")) return c;
    const auto a = ternary();
    expect(":");
    const auto b = ternary();
    return c ? a : b;
  }
  long long logical_or() {
    auto v = logical_and();
    while (take("||")) {
      const auto r = logical_and();
      v = (v || r) ? 1 : 0;
    }
    return v;
  }
  long long logical_and() {
    auto v = equality();
    while (take("&&")) {
      const auto r = equality();
      v = (v && r) ? 1 : 0;
    }
    return v;
  }
  long long equality() {
    auto v = relational();
    for (;;) {
      if (take("=="))
        v = v == relational();
      else if (take("!="))
        v = v != relational();
      else
        return v;
    }
  }
  long long relational() {
    auto v = additive();
    for (;;) {
      if (take("<="))
        v = v <= additive();
      else if (take(">="))
        v = v >= additive();
      else if (take("<"))
        v = v < additive();
      else if (take(">"))
        v = v > additive();
      else
        return v;
    }
  }
  long long additive() {
    auto v = multiplicative();
    for (;;) {
      if (take("+"))
        v += multiplicative();
      else if (take("-"))
        v -= multiplicative();
      else
        return v;
    }
  }
  long long multiplicative() {
    auto v = unary();
    while (take("*")) v *= unary();
    return v;
  }
  long long unary() {
    if (take("!")) return !unary();
    if (take("-")) return -unary();
    if (take("+")) return unary();
    return primary();
  }
  long long primary() {
    if (take("(")) {
      const auto v = ternary();
      expect(")");
      return v;
    }
    const auto tok = peek();
    if (tok.empty()) throw std::runtime_error("unexpected end of condition");
    ++p_;
    if (tok == "defined") {
      const bool paren = take("(");
      const auto name = peek();
      ++p_;
      if (paren) expect(")");
      return macros_.count(name) ? 1 : 0;
    }
    if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      std::size_t i = 0;
      while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
      return std::stoll(tok.substr(0, i));
    }
    if (std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_') {
      const auto it = macros_.find(tok);
      if (it == macros_.end()) return 0;
      return evaluate(it->second, macros_);
    }
    throw std::runtime_error("unexpected token '" + tok + "'");
  }

  std::vector<std::string> t_;
  const std::map<std::string, std::string>& macros_;
  std::size_t p_ = 0;
};

struct Frame {
  bool parent_active;
  bool active;
  bool taken;
};

}  // namespace

long long evaluate(const std::string& expression, const std::map<std::string, std::string>& macros) {
  return Evaluator(Lexer(expression).toks, macros).run();
}

std::string preprocess(const std::string& source, const std::set<std::string>& enabled) {
  std::map<std::string, std::string> macros;
  for (const auto& f : enabled) macros[f] = "1";

  const auto lines = split_lines(source);
  std::vector<std::string> out(lines.size());
  std::vector<Frame> stack;
  auto active = [&] { return stack.empty() || stack.back().active; };

  for (std::size_t i = 0; i < lines.size();) {
    // A logical line spans the physical lines joined by trailing backslashes.
    std::size_t last = i;
    std::string logical = lines[i];
    while (!logical.empty() && logical.back() == '\\' && last + 1 < lines.size()) {
      logical.pop_back();
      logical += lines[++last];
    }
    const auto text = strip(logical);
    if (text.empty() || text[0] != '#') {
      if (active())
        for (std::size_t k = i; k <= last; ++k) out[k] = lines[k];
      i = last + 1;
      continue;
    }
    auto body = strip(drop_comments(text.substr(1)));
    std::size_t kw_end = 0;
    while (kw_end < body.size() && (std::isalnum(static_cast<unsigned char>(body[kw_end])) || body[kw_end] == '_'))
      ++kw_end;
    const auto keyword = body.substr(0, kw_end);
    const auto arg = strip(body.substr(kw_end));
    bool keep = false;

    if (keyword == "if" || keyword == "ifdef" || keyword == "ifndef") {
      const bool outer = active();
      bool cond = false;
      if (outer) {
        if (keyword == "if")
          cond = evaluate(arg, macros) != 0;
        else
          cond = (macros.count(Lexer(arg).toks.at(0)) > 0) == (keyword == "ifdef");
      }
      stack.push_back({outer, outer && cond, outer && cond});
    } else if (keyword == "elif") {
      auto& f = stack.back();
      if (f.parent_active && !f.taken && evaluate(arg, macros) != 0) {
        f.active = true;
        f.taken = true;
      } else {
        f.active = false;
      }
    } else if (keyword == "else") {
      auto& f = stack.back();
      f.active = f.parent_active && !f.taken;
      f.taken = true;
    } else if (keyword == "endif") {
      stack.pop_back();
    } else if (active()) {
      keep = true;
      if (keyword == "define") {
        const auto toks = Lexer(arg).toks;
        const auto& name = toks.at(0);
        const auto after = arg.substr(name.size());
        if (!after.empty() && after[0] == '(')
          macros[name] = "0";  // function-like; never used in conditions
        else
          macros[name] = strip(after).empty() ? "1" : strip(after);
      } else if (keyword == "undef") {
        macros.erase(Lexer(arg).toks.at(0));
      }
    }
    if (keep)
      for (std::size_t k = i; k <= last; ++k) out[k] = lines[k];
    i = last + 1;
  }

  std::ostringstream ss;
  for (const auto& l : out) ss << l << '\n';
  return ss.str();
}

}  // namespace oracle
