#pragma once

#include <compare>
#include <string>
#include <vector>

namespace structlang {

using Token = std::string;

/// Ordered token sequence. Tokens are non-empty and contain no whitespace so
/// the plain format (space-joined lines) round-trips losslessly.
struct TokenSequence {
    std::vector<Token> tokens;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }

    bool operator==(const TokenSequence&) const = default;
    auto operator<=>(const TokenSequence&) const = default;
};

/// True when every token is non-empty and whitespace-free.
bool tokens_well_formed(const TokenSequence& seq);

/// Space-joined surface form (no trailing newline).
std::string join_tokens(const TokenSequence& seq);

/// Whitespace-split. Never fails on valid UTF-8 text.
TokenSequence split_tokens(const std::string& line);

}  // namespace structlang
