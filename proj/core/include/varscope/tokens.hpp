#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace varscope {

enum class TokenKind { Identifier, Number, String, Char, Punct, Other };

/// A preprocessing token. `line`/`end_line` are the physical line range of
/// the logical line the token came from.
struct Token {
  TokenKind kind = TokenKind::Other;
  std::string text;
  bool space_before = false;
  int line = 0;
  int end_line = 0;

  bool is(std::string_view s) const { return text == s && kind != TokenKind::String && kind != TokenKind::Char; }
  bool is_identifier() const { return kind == TokenKind::Identifier; }
  bool is_identifier(std::string_view s) const { return kind == TokenKind::Identifier && text == s; }
};

/// Splits one logical line into preprocessing tokens. Unterminated string
/// and character literals end at the end of the line.
std::vector<Token> tokenize(std::string_view text, int line = 0, int end_line = 0);

/// Joins tokens with single spaces where the source had whitespace.
std::string spell(const std::vector<Token>& tokens);

bool is_c_keyword(std::string_view word);

}  // namespace varscope
