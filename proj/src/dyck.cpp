#include "structlang/dyck.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace structlang {

namespace {

void check_walk_params(int n_types, int target_len, double p_open, int max_depth) {
    if (n_types < 1) throw std::invalid_argument("n_types must be >= 1");
    if (target_len < 0 || target_len % 2 != 0) {
        throw std::invalid_argument("target_len must be even and non-negative, got " +
                                    std::to_string(target_len));
    }
    if (!(p_open >= 0.0 && p_open <= 1.0)) {
        throw std::invalid_argument("p_open must be in [0,1]");
    }
    if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0 (0 = unbounded)");
}

}  // namespace

std::vector<std::pair<int, bool>> sample_balanced_walk(RandomStream& stream, int n_types,
                                                       int target_len, double p_open,
                                                       int max_depth) {
    check_walk_params(n_types, target_len, p_open, max_depth);

    std::vector<std::pair<int, bool>> out;
    out.reserve(static_cast<std::size_t>(target_len));

    std::vector<int> open_count(static_cast<std::size_t>(n_types), 0);
    // Distinct currently-open types, supporting O(1) uniform pick and removal.
    std::vector<int> open_types;
    std::vector<int> pos_in_open(static_cast<std::size_t>(n_types), -1);
    int total_open = 0;

    for (int emitted = 0; emitted < target_len; ++emitted) {
        int remaining = target_len - emitted;
        bool can_close = total_open > 0;
        // After an open we need room to close everything: remaining-1 >= total_open+1.
        bool can_open = remaining >= total_open + 2 && (max_depth == 0 || total_open < max_depth);

        bool do_open;
        if (!can_close) {
            do_open = true;
        } else if (!can_open) {
            do_open = false;
        } else {
            do_open = stream.bernoulli(p_open);
        }

        if (do_open) {
            int type = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(n_types)));
            if (open_count[type] == 0) {
                pos_in_open[type] = static_cast<int>(open_types.size());
                open_types.push_back(type);
            }
            ++open_count[type];
            ++total_open;
            out.emplace_back(type, true);
        } else {
            int pick = static_cast<int>(stream.uniform_below(open_types.size()));
            int type = open_types[pick];
            --open_count[type];
            --total_open;
            if (open_count[type] == 0) {
                int last = open_types.back();
                open_types[pick] = last;
                pos_in_open[last] = pick;
                open_types.pop_back();
                pos_in_open[type] = -1;
            }
            out.emplace_back(type, false);
        }
    }
    return out;
}

TokenSequence gen_dyck1(RandomStream& stream, const DyckParams& params) {
    if (params.k != 1) throw std::invalid_argument("gen_dyck1 requires k == 1");
    auto walk = sample_balanced_walk(stream, 1, params.target_len, params.p_open, params.max_depth);
    TokenSequence seq;
    seq.tokens.reserve(walk.size());
    for (auto [type, is_open] : walk) {
        (void)type;
        seq.tokens.emplace_back(is_open ? "(" : ")");
    }
    return seq;
}

TokenSequence gen_shuffle_dyck(RandomStream& stream, const DyckParams& params) {
    if (params.k < 1) throw std::invalid_argument("gen_shuffle_dyck requires k >= 1");
    auto walk =
        sample_balanced_walk(stream, params.k, params.target_len, params.p_open, params.max_depth);
    TokenSequence seq;
    seq.tokens.reserve(walk.size());
    for (auto [type, is_open] : walk) {
        seq.tokens.push_back((is_open ? "(" : ")") + std::to_string(type + 1));
    }
    return seq;
}

bool recognize_dyck1(const TokenSequence& seq) {
    long long depth = 0;
    for (const Token& t : seq.tokens) {
        if (t == "(") {
            ++depth;
        } else if (t == ")") {
            if (--depth < 0) return false;
        } else {
            return false;
        }
    }
    return depth == 0;
}

bool recognize_shuffle_dyck(const TokenSequence& seq, int k) {
    if (k < 1) throw std::invalid_argument("recognize_shuffle_dyck requires k >= 1");
    std::vector<long long> depth(static_cast<std::size_t>(k), 0);
    for (const Token& t : seq.tokens) {
        if (t.size() < 2 || (t[0] != '(' && t[0] != ')')) return false;
        int type = 0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') return false;
            type = type * 10 + (t[i] - '0');
        }
        if (type < 1 || type > k) return false;
        if (t[0] == '(') {
            ++depth[type - 1];
        } else if (--depth[type - 1] < 0) {
            return false;
        }
    }
    for (long long d : depth) {
        if (d != 0) return false;
    }
    return true;
}

namespace {

void enumerate_rec(int k, int max_len, std::vector<Token>& prefix, std::vector<int>& open,
                   int total_open, std::set<TokenSequence>& out) {
    if (total_open == 0) out.insert(TokenSequence{prefix});
    int len = static_cast<int>(prefix.size());
    if (len == max_len) return;
    for (int type = 0; type < k; ++type) {
        // Opening needs room for this bracket plus all pending closes.
        if (len + 1 + total_open + 1 <= max_len) {
            prefix.push_back("(" + std::to_string(type + 1));
            ++open[type];
            enumerate_rec(k, max_len, prefix, open, total_open + 1, out);
            --open[type];
            prefix.pop_back();
        }
        if (open[type] > 0) {
            prefix.push_back(")" + std::to_string(type + 1));
            --open[type];
            enumerate_rec(k, max_len, prefix, open, total_open - 1, out);
            ++open[type];
            prefix.pop_back();
        }
    }
}

}  // namespace

std::set<TokenSequence> enumerate_shuffle_dyck(int k, int max_len) {
    if (k < 1) throw std::invalid_argument("enumerate_shuffle_dyck requires k >= 1");
    if (max_len < 0) throw std::invalid_argument("max_len must be >= 0");
    if (std::pow(2.0 * k, max_len) > 2e7) {
        throw std::invalid_argument("enumeration bounds exceeded: (2k)^max_len too large");
    }
    std::set<TokenSequence> out;
    std::vector<Token> prefix;
    std::vector<int> open(static_cast<std::size_t>(k), 0);
    enumerate_rec(k, max_len, prefix, open, 0, out);
    return out;
}

}  // namespace structlang
