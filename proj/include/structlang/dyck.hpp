#pragma once

#include <set>
#include <utility>
#include <vector>

#include "structlang/random.hpp"
#include "structlang/token.hpp"

namespace structlang {

struct DyckParams {
    int k = 1;
    int target_len = 1024;  // must be even
    double p_open = 0.49;
    int max_depth = 0;  // 0 = unbounded
};

/// One step of the balanced sampling walk: bracket type index in [0, n_types)
/// plus open/close. At each position the walk opens a uniformly random type
/// with probability p_open when budget and depth allow, otherwise closes a
/// uniformly random currently-open type. Opening is forced when nothing is
/// open, closing when the remaining budget equals the number of open
/// brackets.
std::vector<std::pair<int, bool>> sample_balanced_walk(RandomStream& stream, int n_types,
                                                       int target_len, double p_open,
                                                       int max_depth);

/// 1-Dyck word over "(" / ")" of exactly target_len tokens.
TokenSequence gen_dyck1(RandomStream& stream, const DyckParams& params);

/// k-Shuffle Dyck word over "(i" / ")i", i in 1..k. Each type's projection is
/// balanced; types may interleave freely.
TokenSequence gen_shuffle_dyck(RandomStream& stream, const DyckParams& params);

bool recognize_dyck1(const TokenSequence& seq);
bool recognize_shuffle_dyck(const TokenSequence& seq, int k);

/// Every k-Shuffle Dyck word of length <= max_len (including the empty word),
/// built constructively by DFS over per-type open counts. Deliberately
/// independent of recognize_shuffle_dyck so the two can check each other.
std::set<TokenSequence> enumerate_shuffle_dyck(int k, int max_len);

}  // namespace structlang
