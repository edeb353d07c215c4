#include "structlang/perturb.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "structlang/corpus.hpp"

namespace structlang {

namespace {

constexpr const char* kMarkerPos = "MARKER";

bool first_is_upper(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s.front())) != 0;
}

std::string recase(std::string s, bool capitalize) {
    if (s.empty()) return s;
    auto c = static_cast<unsigned char>(s.front());
    s.front() = static_cast<char>(capitalize ? std::toupper(c) : std::tolower(c));
    return s;
}

}  // namespace

TaggedToken make_tagged(std::string surface, std::string coarse, std::string fine) {
    TaggedToken tok;
    tok.is_capitalized = first_is_upper(surface);
    tok.surface = std::move(surface);
    tok.coarse_pos = std::move(coarse);
    tok.fine_pos = std::move(fine);
    return tok;
}

bool is_content_pos(const std::string& coarse_pos) {
    return coarse_pos == "NOUN" || coarse_pos == "VERB" || coarse_pos == "ADJ" ||
           coarse_pos == "ADV";
}

TaggedDocument read_tagged_tsv(std::istream& in) {
    TaggedDocument doc;
    std::vector<TaggedToken> sentence;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (!sentence.empty()) doc.sentences.push_back(std::move(sentence));
            sentence.clear();
            continue;
        }
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw parse_error("line " + std::to_string(lineno) +
                              ": expected surface<TAB>coarse<TAB>fine");
        }
        std::string surface = line.substr(0, t1);
        std::string coarse = line.substr(t1 + 1, t2 - t1 - 1);
        std::string fine = line.substr(t2 + 1);
        if (surface.empty() || coarse.empty() || fine.empty()) {
            throw parse_error("line " + std::to_string(lineno) + ": empty field");
        }
        sentence.push_back(make_tagged(std::move(surface), std::move(coarse), std::move(fine)));
    }
    if (!sentence.empty()) doc.sentences.push_back(std::move(sentence));
    return doc;
}

void write_tagged_tsv(std::ostream& out, const TaggedDocument& doc) {
    for (const auto& sentence : doc.sentences) {
        for (const TaggedToken& tok : sentence) {
            out << tok.surface << '\t' << tok.coarse_pos << '\t' << tok.fine_pos << '\n';
        }
        out << '\n';
    }
}

TaggedDocument deterministic_shuffle(const TaggedDocument& doc, std::size_t window,
                                     std::uint64_t master_seed) {
    if (window == 0) throw std::invalid_argument("window size must be positive");
    std::map<std::size_t, std::vector<std::size_t>> perms;
    const auto perm_for = [&](std::size_t len) -> const std::vector<std::size_t>& {
        auto it = perms.find(len);
        if (it == perms.end()) {
            std::vector<std::size_t> p(len);
            std::iota(p.begin(), p.end(), std::size_t{0});
            RandomStream s(SeedSpec{master_seed, static_cast<std::uint64_t>(len)});
            s.shuffle(p);
            it = perms.emplace(len, std::move(p)).first;
        }
        return it->second;
    };

    TaggedDocument out;
    out.sentences.reserve(doc.sentences.size());
    for (const auto& sentence : doc.sentences) {
        std::vector<TaggedToken> shuffled;
        shuffled.reserve(sentence.size());
        for (std::size_t start = 0; start < sentence.size(); start += window) {
            const std::size_t len = std::min(window, sentence.size() - start);
            const auto& perm = perm_for(len);
            for (std::size_t i = 0; i < len; ++i) shuffled.push_back(sentence[start + perm[i]]);
        }
        out.sentences.push_back(std::move(shuffled));
    }
    return out;
}

TaggedDocument full_reverse(const TaggedDocument& doc) {
    TaggedDocument out = doc;
    for (auto& sentence : out.sentences) std::reverse(sentence.begin(), sentence.end());
    return out;
}

TaggedDocument word_hop(const TaggedDocument& doc, const HopOptions& opts) {
    if (opts.distance == 0) throw std::invalid_argument("hop distance must be positive");
    if (opts.marker.empty() || opts.marker.find_first_of(" \t\n") != std::string::npos) {
        throw std::invalid_argument("hop marker must be a single non-empty token");
    }
    const TaggedToken marker = make_tagged(opts.marker, kMarkerPos, kMarkerPos);

    TaggedDocument out;
    out.sentences.reserve(doc.sentences.size());
    for (const auto& sentence : doc.sentences) {
        std::vector<std::size_t> inserts;  // insert before this original index
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (sentence[i].coarse_pos != "VERB") continue;
            std::size_t counted = 0;
            std::size_t at = sentence.size();
            bool reached = false;
            for (std::size_t j = i + 1; j < sentence.size(); ++j) {
                if (!opts.count_punctuation && sentence[j].coarse_pos == "PUNCT") continue;
                if (++counted == opts.distance) {
                    at = j + 1;
                    reached = true;
                    break;
                }
            }
            if (!reached && !opts.clamp_to_end) continue;
            inserts.push_back(at);
        }
        std::vector<TaggedToken> result = sentence;
        for (auto it = inserts.rbegin(); it != inserts.rend(); ++it) {
            result.insert(result.begin() + static_cast<std::ptrdiff_t>(*it), marker);
        }
        out.sentences.push_back(std::move(result));
    }
    return out;
}

TaggedDocument strip_markers(const TaggedDocument& doc) {
    TaggedDocument out;
    out.sentences.reserve(doc.sentences.size());
    for (const auto& sentence : doc.sentences) {
        std::vector<TaggedToken> kept;
        kept.reserve(sentence.size());
        for (const TaggedToken& tok : sentence) {
            if (tok.coarse_pos != kMarkerPos) kept.push_back(tok);
        }
        if (!kept.empty()) out.sentences.push_back(std::move(kept));
    }
    return out;
}

TaggedDocument jabberwocky(const TaggedDocument& doc, RandomStream& stream,
                           std::size_t batch_sentences) {
    TaggedDocument out = doc;
    const std::size_t total = out.sentences.size();
    const std::size_t batch = batch_sentences == 0 ? total : batch_sentences;
    for (std::size_t lo = 0; lo < total; lo += batch) {
        const std::size_t hi = std::min(total, lo + batch);
        // Bucket positions of content words by fine tag. std::map keeps the
        // bucket order (and hence the stream consumption) reproducible.
        std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> buckets;
        for (std::size_t si = lo; si < hi; ++si) {
            const auto& sentence = out.sentences[si];
            for (std::size_t ti = 0; ti < sentence.size(); ++ti) {
                if (is_content_pos(sentence[ti].coarse_pos)) {
                    buckets[sentence[ti].fine_pos].emplace_back(si, ti);
                }
            }
        }
        for (auto& [fine, positions] : buckets) {
            std::vector<std::string> surfaces;
            surfaces.reserve(positions.size());
            for (const auto& [si, ti] : positions) surfaces.push_back(doc.sentences[si][ti].surface);
            stream.shuffle(surfaces);
            for (std::size_t k = 0; k < positions.size(); ++k) {
                TaggedToken& tok = out.sentences[positions[k].first][positions[k].second];
                tok.surface = recase(std::move(surfaces[k]), tok.is_capitalized);
            }
        }
    }
    return out;
}

}  // namespace structlang
