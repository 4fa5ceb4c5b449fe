#include "declarators.hpp"

#include <algorithm>

namespace varscope::detail {

namespace {

bool is_open(const Token& t) { return t.is("(") || t.is("[") || t.is("{"); }
bool is_close(const Token& t) { return t.is(")") || t.is("]") || t.is("}"); }

bool is_annotation(std::string_view s) {
  return s == "__attribute__" || s == "__attribute" || s == "__declspec" || s == "asm" || s == "__asm__" ||
         s == "__asm" || s == "_Alignas" || s == "__typeof__" || s == "typeof" || s == "__typeof";
}

bool is_name(const Token& t) { return t.is_identifier() && !is_c_keyword(t.text) && !is_annotation(t.text); }

}  // namespace

bool is_composite_keyword(std::string_view s) { return s == "struct" || s == "union" || s == "enum"; }

std::size_t match_forward(const std::vector<PcToken>& toks, const TokenList& list, std::size_t pos, std::size_t end) {
  int depth = 0;
  for (std::size_t i = pos; i < end; ++i) {
    const auto& t = toks[list[i]].token;
    if (is_open(t)) ++depth;
    if (is_close(t) && --depth == 0) return i;
  }
  return end;
}

std::size_t match_backward(const std::vector<PcToken>& toks, const TokenList& list, std::size_t pos,
                           std::size_t begin) {
  int depth = 0;
  for (std::size_t i = pos + 1; i-- > begin;) {
    const auto& t = toks[list[i]].token;
    if (is_close(t)) ++depth;
    if (is_open(t) && --depth == 0) return i;
  }
  return static_cast<std::size_t>(-1);
}

TokenList strip_annotations(const std::vector<PcToken>& toks, const TokenList& list) {
  TokenList out;
  out.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& t = toks[list[i]].token;
    if (t.is_identifier() && is_annotation(t.text) && i + 1 < list.size() && toks[list[i + 1]].token.is("(")) {
      const auto close = match_forward(toks, list, i + 1, list.size());
      i = close;  // skips through the group (or to the end when unbalanced)
      continue;
    }
    out.push_back(list[i]);
  }
  return out;
}

DeclaratorInfo analyze_declarator(const std::vector<PcToken>& toks, const TokenList& list, std::size_t b,
                                  std::size_t e) {
  DeclaratorInfo info;
  // Array suffixes.
  while (e > b && toks[list[e - 1]].token.is("]")) {
    const auto open = match_backward(toks, list, e - 1, b);
    if (open == static_cast<std::size_t>(-1) || open < b) return info;
    e = open;
  }
  if (e <= b) return info;
  const auto& last = toks[list[e - 1]].token;
  if (is_name(last)) {
    if (e - 1 > b && toks[list[e - 2]].token.is_identifier() && is_composite_keyword(toks[list[e - 2]].token.text))
      return info;  // a tag, not a declarator
    info.valid = true;
    info.name = e - 1;
    return info;
  }
  if (!last.is(")")) return info;
  const auto open = match_backward(toks, list, e - 1, b);
  if (open == static_cast<std::size_t>(-1) || open < b) return info;
  if (open > b) {
    const auto& prev = toks[list[open - 1]].token;
    if (is_name(prev)) {
      info.valid = true;
      info.function = true;
      info.name = open - 1;
      info.params_begin = open + 1;
      info.params_end = e - 1;
      return info;
    }
    if (prev.is(")")) {
      // (declarator)(params): pointer to function, or a function returning one.
      const auto inner_open = match_backward(toks, list, open - 1, b);
      if (inner_open == static_cast<std::size_t>(-1) || inner_open < b) return info;
      auto inner = analyze_declarator(toks, list, inner_open + 1, open - 1);
      if (!inner.valid) return info;
      if (!inner.function) {
        inner.params_begin = open + 1;
        inner.params_end = e - 1;
        inner.function = false;
      }
      return inner;
    }
  }
  return analyze_declarator(toks, list, open + 1, e - 1);
}

std::vector<std::pair<std::size_t, std::size_t>> split_declarators(const std::vector<PcToken>& toks,
                                                                   const TokenList& list) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  std::size_t stop = list.size();  // first top-level '=' of the current declarator
  bool cut = false;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& t = toks[list[i]].token;
    if (is_open(t)) ++depth;
    if (is_close(t)) depth = std::max(0, depth - 1);
    if (depth != 0) continue;
    if (t.is("=") && !cut) {
      stop = i;
      cut = true;
    } else if (t.is(",")) {
      out.emplace_back(start, cut ? stop : i);
      start = i + 1;
      cut = false;
    }
  }
  if (start < list.size() || out.empty()) out.emplace_back(start, cut ? stop : list.size());
  return out;
}

bool looks_like_knr(const std::vector<PcToken>& toks, const TokenList& list, std::size_t b, std::size_t e) {
  int depth = 0;
  for (std::size_t i = b; i < e; ++i) {
    const auto& t = toks[list[i]].token;
    if (is_open(t)) ++depth;
    if (is_close(t)) {
      depth = std::max(0, depth - 1);
      if (depth == 0 && t.is(")") && i + 1 < e) {
        const auto& next = toks[list[i + 1]].token;
        if (next.is_identifier() && !is_annotation(next.text) && next.text != "const" && next.text != "volatile")
          return true;
      }
    }
  }
  return false;
}

std::vector<std::size_t> declared_names(const std::vector<PcToken>& toks, const TokenList& list) {
  std::vector<std::size_t> out;
  const auto stripped = strip_annotations(toks, list);
  for (const auto& [b, e] : split_declarators(toks, stripped)) {
    const auto d = analyze_declarator(toks, stripped, b, e);
    if (d.valid && !d.function) out.push_back(stripped[d.name]);
  }
  return out;
}

bool has_top_level(const std::vector<PcToken>& toks, const TokenList& list, std::string_view text) {
  int depth = 0;
  for (const auto i : list) {
    const auto& t = toks[i].token;
    if (is_open(t)) ++depth;
    if (is_close(t)) depth = std::max(0, depth - 1);
    if (depth == 0 && t.is(text)) return true;
  }
  return false;
}

}  // namespace varscope::detail
