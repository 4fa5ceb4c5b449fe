#include "varscope/tokens.hpp"

#include <algorithm>
#include <array>

#include "varscope/text.hpp"

namespace varscope {

namespace {

constexpr std::array<std::string_view, 23> kPunct3or2 = {
    "...", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "*=",  "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##"};

bool is_string_prefix(std::string_view word) {
  return word == "L" || word == "u" || word == "U" || word == "u8";
}

std::size_t scan_quoted(std::string_view s, std::size_t i, char quote) {
  ++i;
  while (i < s.size()) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      i += 2;
      continue;
    }
    if (s[i] == quote) return i + 1;
    ++i;
  }
  return s.size();
}

}  // namespace

std::vector<Token> tokenize(std::string_view s, int line, int end_line) {
  if (end_line < line) end_line = line;
  std::vector<Token> out;
  std::size_t i = 0;
  bool space = false;
  auto push = [&](TokenKind kind, std::size_t b, std::size_t e) {
    out.push_back(Token{kind, std::string(s.substr(b, e - b)), space, line, end_line});
    space = false;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (text::is_space(c) || c == '\n') {
      space = true;
      ++i;
      continue;
    }
    if (text::is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && text::is_ident_char(s[j])) ++j;
      const auto word = s.substr(i, j - i);
      if (j < s.size() && (s[j] == '"' || s[j] == '\'') && is_string_prefix(word)) {
        const char q = s[j];
        const auto e = scan_quoted(s, j, q);
        push(q == '"' ? TokenKind::String : TokenKind::Char, i, e);
        i = e;
        continue;
      }
      push(TokenKind::Identifier, i, j);
      i = j;
      continue;
    }
    if (text::is_digit(c) || (c == '.' && i + 1 < s.size() && text::is_digit(s[i + 1]))) {
      // pp-number
      std::size_t j = i + 1;
      while (j < s.size()) {
        const char d = s[j];
        if ((d == '+' || d == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E' || s[j - 1] == 'p' || s[j - 1] == 'P')) {
          ++j;
        } else if (text::is_ident_char(d) || d == '.') {
          ++j;
        } else {
          break;
        }
      }
      push(TokenKind::Number, i, j);
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      const auto e = scan_quoted(s, i, c);
      push(c == '"' ? TokenKind::String : TokenKind::Char, i, e);
      i = e;
      continue;
    }
    bool matched = false;
    for (const auto p : kPunct3or2) {
      if (s.substr(i, p.size()) == p) {
        push(TokenKind::Punct, i, i + p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kSingle = "{}[]()#;:,.?~!%^&*-+=|<>/\\";
    push(kSingle.find(c) != std::string_view::npos ? TokenKind::Punct : TokenKind::Other, i, i + 1);
    ++i;
  }
  return out;
}

std::string spell(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && tokens[i].space_before) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

bool is_c_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 44> kKeywords = {
      "_Alignas", "_Alignof", "_Atomic", "_Bool", "_Complex", "_Generic", "_Noreturn", "_Static_assert",
      "_Thread_local", "__typeof__", "asm", "auto", "break", "case", "char", "const", "continue",
      "default", "do", "double", "else", "enum", "extern", "float", "for", "goto", "if", "inline",
      "int", "long", "register", "restrict", "return", "short", "signed", "sizeof", "static",
      "struct", "switch", "typedef", "typeof", "union", "unsigned", "void"};
  static constexpr std::array<std::string_view, 3> kMore = {"volatile", "while", "__attribute__"};
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end() ||
         std::find(kMore.begin(), kMore.end(), word) != kMore.end();
}

}  // namespace varscope
