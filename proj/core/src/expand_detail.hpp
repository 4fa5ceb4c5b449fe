#pragma once

// Token-level helpers shared by text expansion and #if expansion.

#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "varscope/macros.hpp"

namespace varscope::detail {

using HideSet = std::shared_ptr<const std::vector<std::string>>;

bool hidden(const PcToken& t);
HideSet with_name(const HideSet& base, const std::string& name);
HideSet hide_union(const HideSet& a, const HideSet& b);

/// `input[0]` must be "(". On success fills `args` (split at top-level
/// commas) and sets `consumed` to the number of tokens through ")".
bool collect_arguments(const std::deque<PcToken>& input, std::vector<std::vector<PcToken>>& args,
                       std::size_t& consumed);

/// Checks argument count against the definition; normalizes `F()` on a
/// zero-parameter macro and folds extra arguments into the variadic one.
bool bind_arguments(const MacroDefinition& def, std::vector<std::vector<PcToken>>& args);

/// Replaces parameters, applies `#` and `##`. `expand_arg` produces the
/// fully expanded form of an argument that is not an operand of # or ##.
std::vector<PcToken> substitute(const MacroDefinition& def, const PcToken& name_token,
                                const std::vector<std::vector<PcToken>>& args, const PresenceCondition& pc,
                                const std::function<std::vector<PcToken>(const std::vector<PcToken>&)>& expand_arg,
                                Diagnostics& diags, const std::string& file);

/// Fixed placeholders for dynamic built-ins; empty when `name` is not one.
std::vector<Token> builtin_expansion(const std::string& name);

PcToken make_pc_token(Token token, PresenceCondition pc);

}  // namespace varscope::detail
