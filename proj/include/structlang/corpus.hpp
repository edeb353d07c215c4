#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "structlang/random.hpp"
#include "structlang/token.hpp"

#include <json.hpp>

namespace structlang {

/// Raised when serialized input (jsonl corpus, loss log, tagged TSV) does not
/// parse. Messages name the offending line.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LanguageTag {
    dyck1,
    ksd,
    mpstruct,
    mpstruct_ablated,
    core,
    generic_ksd,
    perturbed,
};

std::string to_string(LanguageTag tag);
LanguageTag language_tag_from_string(const std::string& s);

/// One generated sequence plus everything needed to regenerate it.
struct CorpusRecord {
    TokenSequence sequence;
    LanguageTag language_tag = LanguageTag::dyck1;
    SeedSpec seed;
    std::string params_digest;
    std::map<std::string, std::string> metadata;

    bool operator==(const CorpusRecord&) const = default;
};

enum class CorpusFormat { plain, jsonl };

CorpusFormat corpus_format_from_string(const std::string& s);

/// Stable digest of generation parameters. `params` should carry every field
/// that affects output; the PRNG algorithm name is folded in here so a
/// generator change is visible in the digest. FNV-1a 64 over the canonical
/// (key-sorted) JSON dump, rendered as 16 hex digits.
std::string params_digest(const nlohmann::json& params);

std::uint64_t fnv1a64(const std::string& bytes);

/// plain: one space-joined line per record, LF, trailing newline.
/// jsonl: one object per record with keys tokens, language_tag, master_seed,
/// stream_id, params_digest, metadata.
std::string serialize_corpus(const std::vector<CorpusRecord>& corpus, CorpusFormat format);

/// Inverse of serialize_corpus. jsonl errors name the 1-based line number;
/// plain accepts any whitespace-split text (empty lines become empty records).
std::vector<CorpusRecord> parse_corpus(std::istream& in, CorpusFormat format);
std::vector<CorpusRecord> parse_corpus(const std::string& text, CorpusFormat format);

}  // namespace structlang
