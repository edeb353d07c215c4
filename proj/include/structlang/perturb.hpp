#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "structlang/random.hpp"

namespace structlang {

// One token of a pre-tagged corpus. Casing is captured at load time so
// transforms can restore it after swapping surfaces.
struct TaggedToken {
    std::string surface;
    std::string coarse_pos;  // NOUN, VERB, ADJ, ADV, DET, PUNCT, ...
    std::string fine_pos;    // NN, NNS, VBD, ...
    bool is_capitalized = false;

    bool operator==(const TaggedToken&) const = default;
};

struct TaggedDocument {
    std::vector<std::vector<TaggedToken>> sentences;

    bool operator==(const TaggedDocument&) const = default;
};

// Builds a token with is_capitalized derived from the surface.
TaggedToken make_tagged(std::string surface, std::string coarse, std::string fine);

bool is_content_pos(const std::string& coarse_pos);

// Tagged TSV: surface<TAB>coarse<TAB>fine, one token per line, blank line
// between sentences. Malformed lines raise parse_error naming the line.
TaggedDocument read_tagged_tsv(std::istream& in);
void write_tagged_tsv(std::ostream& out, const TaggedDocument& doc);

// Splits each sentence into consecutive windows of `window` tokens (last one
// possibly shorter) and permutes every window with the permutation keyed by
// (master_seed, window length). Equal-length windows share a permutation.
TaggedDocument deterministic_shuffle(const TaggedDocument& doc, std::size_t window,
                                     std::uint64_t master_seed);

// Reverses token order within each sentence.
TaggedDocument full_reverse(const TaggedDocument& doc);

struct HopOptions {
    std::size_t distance = 4;
    std::string marker = "MARK";
    bool count_punctuation = false;  // PUNCT tokens count toward the distance
    bool clamp_to_end = true;        // short tail: append marker vs skip verb
};

// Inserts a marker token `distance` words after every VERB. Distances are
// measured on the original sentence; insertions apply right to left so they
// never shift one another.
TaggedDocument word_hop(const TaggedDocument& doc, const HopOptions& opts = {});

// Removes tokens inserted by word_hop (tagged MARKER/MARKER).
TaggedDocument strip_markers(const TaggedDocument& doc);

// Replaces every content word (NOUN/VERB/ADJ/ADV) by a bucket-mate with the
// same fine_pos, shuffling each bucket with `stream` and re-casing the
// replacement to the original token's casing. batch_sentences = 0 pools over
// the whole document, otherwise over consecutive groups of that many
// sentences.
TaggedDocument jabberwocky(const TaggedDocument& doc, RandomStream& stream,
                           std::size_t batch_sentences = 0);

}  // namespace structlang
