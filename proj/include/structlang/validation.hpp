#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace structlang {

struct Violation {
    std::string rule;
    /// Index into the token sequence; -1 when no single token is at fault.
    std::ptrdiff_t token_index = -1;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    /// Checks that did not apply to this input (e.g. landmark checks on a
    /// sequence without landmarks).
    std::vector<std::string> not_applicable;

    bool ok() const { return violations.empty(); }

    void add(std::string rule, std::ptrdiff_t token_index, std::string message) {
        violations.push_back({std::move(rule), token_index, std::move(message)});
    }

    /// One JSON object per line: rule, token_index, message. Not-applicable
    /// notes serialize with rule "not_applicable" and token_index -1.
    std::string to_jsonl() const;
};

}  // namespace structlang
