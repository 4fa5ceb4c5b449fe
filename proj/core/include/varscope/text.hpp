#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace varscope::text {

bool is_valid_utf8(std::string_view bytes);

/// Returns `bytes` unchanged when it is valid UTF-8, otherwise reinterprets
/// every byte as Latin-1 and re-encodes as UTF-8. Never fails.
std::string decode_source(std::string_view bytes);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool is_blank(std::string_view s);

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v' || c == '\r'; }

}  // namespace varscope::text
