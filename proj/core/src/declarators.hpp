#pragma once

// Declarator recognition over a list of token positions. A "list" is a
// sequence of indices into the unit's token vector.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "varscope/macros.hpp"

namespace varscope::detail {

using TokenList = std::vector<std::size_t>;

struct DeclaratorInfo {
  bool valid = false;
  bool function = false;  // a function declarator (prototype or definition head)
  std::size_t name = 0;   // position in the list
  std::size_t params_begin = 0;  // positions of the parameter tokens, function only
  std::size_t params_end = 0;
};

bool is_composite_keyword(std::string_view s);

/// Drops `__attribute__((...))`, `asm(...)` and similar annotation groups.
TokenList strip_annotations(const std::vector<PcToken>& toks, const TokenList& list);

/// Position of the bracket matching the one at `pos`, or `end` when
/// unbalanced. Works in both directions.
std::size_t match_forward(const std::vector<PcToken>& toks, const TokenList& list, std::size_t pos, std::size_t end);
std::size_t match_backward(const std::vector<PcToken>& toks, const TokenList& list, std::size_t pos, std::size_t begin);

/// The declared name within list[b, e), with any initializer already removed.
DeclaratorInfo analyze_declarator(const std::vector<PcToken>& toks, const TokenList& list, std::size_t b,
                                  std::size_t e);

/// Splits at top-level commas; each range stops before a top-level `=`.
std::vector<std::pair<std::size_t, std::size_t>> split_declarators(const std::vector<PcToken>& toks,
                                                                   const TokenList& list);

/// A parameter-list group followed by further identifiers: the old-style
/// definition form `f(a, b) int a; ...`.
bool looks_like_knr(const std::vector<PcToken>& toks, const TokenList& list, std::size_t b, std::size_t e);

/// Names declared by a declaration statement or parameter list, best effort.
std::vector<std::size_t> declared_names(const std::vector<PcToken>& toks, const TokenList& list);

bool has_top_level(const std::vector<PcToken>& toks, const TokenList& list, std::string_view text);

}  // namespace varscope::detail
