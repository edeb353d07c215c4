#include "structlang/corpus.hpp"

#include <cctype>
#include <sstream>

namespace structlang {

bool tokens_well_formed(const TokenSequence& seq) {
    for (const Token& t : seq.tokens) {
        if (t.empty()) return false;
        for (unsigned char c : t) {
            if (std::isspace(c)) return false;
        }
    }
    return true;
}

std::string join_tokens(const TokenSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (i) out += ' ';
        out += seq.tokens[i];
    }
    return out;
}

TokenSequence split_tokens(const std::string& line) {
    TokenSequence seq;
    std::istringstream ss(line);
    Token tok;
    while (ss >> tok) seq.tokens.push_back(tok);
    return seq;
}

std::string to_string(LanguageTag tag) {
    switch (tag) {
        case LanguageTag::dyck1: return "dyck1";
        case LanguageTag::ksd: return "ksd";
        case LanguageTag::mpstruct: return "mpstruct";
        case LanguageTag::mpstruct_ablated: return "mpstruct_ablated";
        case LanguageTag::core: return "core";
        case LanguageTag::generic_ksd: return "generic_ksd";
        case LanguageTag::perturbed: return "perturbed";
    }
    throw std::invalid_argument("unknown LanguageTag");
}

LanguageTag language_tag_from_string(const std::string& s) {
    if (s == "dyck1") return LanguageTag::dyck1;
    if (s == "ksd") return LanguageTag::ksd;
    if (s == "mpstruct") return LanguageTag::mpstruct;
    if (s == "mpstruct_ablated") return LanguageTag::mpstruct_ablated;
    if (s == "core") return LanguageTag::core;
    if (s == "generic_ksd") return LanguageTag::generic_ksd;
    if (s == "perturbed") return LanguageTag::perturbed;
    throw std::invalid_argument("unknown language tag: " + s);
}

CorpusFormat corpus_format_from_string(const std::string& s) {
    if (s == "plain") return CorpusFormat::plain;
    if (s == "jsonl") return CorpusFormat::jsonl;
    throw std::invalid_argument("unknown corpus format: " + s);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string params_digest(const nlohmann::json& params) {
    if (params.contains("prng")) {
        throw std::invalid_argument("params_digest: 'prng' is reserved for the generator name");
    }
    nlohmann::json canonical = params;
    canonical["prng"] = RandomStream::algorithm_name;
    // nlohmann objects keep keys sorted, so dump() is canonical.
    std::uint64_t h = fnv1a64(canonical.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

nlohmann::json record_to_json(const CorpusRecord& rec) {
    nlohmann::json j;
    j["tokens"] = rec.sequence.tokens;
    j["language_tag"] = to_string(rec.language_tag);
    j["master_seed"] = rec.seed.master_seed;
    j["stream_id"] = rec.seed.stream_id;
    j["params_digest"] = rec.params_digest;
    j["metadata"] = rec.metadata;
    return j;
}

CorpusRecord record_from_json(const nlohmann::json& j, std::size_t line_no) {
    auto fail = [line_no](const std::string& what) {
        throw parse_error("line " + std::to_string(line_no) + ": " + what);
    };
    if (!j.is_object()) fail("expected a JSON object");
    CorpusRecord rec;
    if (!j.contains("tokens")) fail("missing key 'tokens'");
    if (!j["tokens"].is_array()) fail("'tokens' must be an array of strings");
    for (const auto& t : j["tokens"]) {
        if (!t.is_string()) fail("'tokens' must be an array of strings");
        rec.sequence.tokens.push_back(t.get<std::string>());
    }
    if (!tokens_well_formed(rec.sequence)) fail("tokens must be non-empty and whitespace-free");
    if (!j.contains("language_tag")) fail("missing key 'language_tag'");
    try {
        rec.language_tag = language_tag_from_string(j["language_tag"].get<std::string>());
    } catch (const std::exception& e) {
        fail(e.what());
    }
    if (j.contains("master_seed")) rec.seed.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("stream_id")) rec.seed.stream_id = j["stream_id"].get<std::uint64_t>();
    if (j.contains("params_digest")) rec.params_digest = j["params_digest"].get<std::string>();
    if (j.contains("metadata")) {
        if (!j["metadata"].is_object()) fail("'metadata' must be an object");
        for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it) {
            if (!it.value().is_string()) fail("metadata values must be strings");
            rec.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    return rec;
}

}  // namespace

std::string serialize_corpus(const std::vector<CorpusRecord>& corpus, CorpusFormat format) {
    std::string out;
    for (const CorpusRecord& rec : corpus) {
        if (format == CorpusFormat::plain) {
            out += join_tokens(rec.sequence);
        } else {
            out += record_to_json(rec).dump();
        }
        out += '\n';
    }
    return out;
}

std::vector<CorpusRecord> parse_corpus(std::istream& in, CorpusFormat format) {
    std::vector<CorpusRecord> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (format == CorpusFormat::plain) {
            CorpusRecord rec;
            rec.sequence = split_tokens(line);
            corpus.push_back(std::move(rec));
        } else {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                throw parse_error("line " + std::to_string(line_no) + ": malformed JSON");
            }
            corpus.push_back(record_from_json(j, line_no));
        }
    }
    return corpus;
}

std::vector<CorpusRecord> parse_corpus(const std::string& text, CorpusFormat format) {
    std::istringstream ss(text);
    return parse_corpus(ss, format);
}

}  // namespace structlang
