#include "structlang/mpcore.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "structlang/dyck.hpp"

namespace structlang {

namespace {

constexpr int kAgrA = 1;
constexpr int kAgrB = 2;
constexpr int kMove = 3;
constexpr int kSel = 4;

constexpr int kMaxClauseLen = 15;  // wh=+ clause; wh=- is 13

void check_params(const CoreParams& p) {
    if (p.target_len < 1) throw std::invalid_argument("target_len must be >= 1");
    if (!(p.p_wh >= 0.0 && p.p_wh <= 1.0)) throw std::invalid_argument("p_wh must be in [0,1]");
    if (!(p.p_agr_a >= 0.0 && p.p_agr_a <= 1.0)) {
        throw std::invalid_argument("p_agr_a must be in [0,1]");
    }
    if (p.k_struct < 1) throw std::invalid_argument("k_struct must be >= 1");
    if (p.k_dep < 1) throw std::invalid_argument("k_dep must be >= 1");
}

Token struct_open(int j) { return "[" + std::to_string(j); }
Token struct_close(int j) { return "]" + std::to_string(j); }
Token dep_open(int i) { return "(" + std::to_string(i); }
Token dep_close(int i) { return ")" + std::to_string(i); }

}  // namespace

std::string to_string(CoreRole role) {
    switch (role) {
        case CoreRole::agr_a: return "AGR_A";
        case CoreRole::agr_b: return "AGR_B";
        case CoreRole::move: return "MOVE";
        case CoreRole::sel: return "SEL";
    }
    throw std::invalid_argument("unknown CoreRole");
}

std::vector<DependencyType> core_dependency_types(int k_dep) {
    if (k_dep < 4) throw std::invalid_argument("the role calibration needs k_dep >= 4");
    std::vector<DependencyType> types;
    types.push_back({kAgrA, CoreRole::agr_a});
    types.push_back({kAgrB, CoreRole::agr_b});
    types.push_back({kMove, CoreRole::move});
    types.push_back({kSel, CoreRole::sel});
    return types;
}

TokenSequence gen_core_clause(RandomStream& stream, const CoreParams& params, ClauseInfo* info) {
    check_params(params);
    if (params.k_dep < 4) {
        throw std::invalid_argument("gen_core_clause needs the four-role calibration (k_dep >= 4)");
    }

    ClauseInfo ci;
    ci.wh_plus = stream.bernoulli(params.p_wh);
    ci.agr_type = stream.bernoulli(params.p_agr_a) ? kAgrA : kAgrB;

    int cp_type = 0, tp_type = 0, vp_type = 0;
    if (params.k_struct > 1) {
        cp_type = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(params.k_struct)));
        tp_type = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(params.k_struct)));
        vp_type = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(params.k_struct)));
    }

    ci.vp_order = 2;
    if (ci.wh_plus && params.shuffle_vp) {
        ci.vp_order = static_cast<int>(stream.uniform_below(3));
    }

    TokenSequence seq;
    auto emit = [&seq](Token t) { seq.tokens.push_back(std::move(t)); };

    emit(struct_open(cp_type));
    emit("H_C");
    if (ci.wh_plus) emit(dep_open(kMove));
    emit(struct_open(tp_type));
    emit("H_T");
    emit(dep_open(ci.agr_type));
    emit(struct_open(vp_type));
    // vP-internal slots: head (H_V glued to its SEL open), object (SEL
    // close), and for wh=+ the trace (MOVE close). Legal orders keep the SEL
    // open before its close; the trace floats across three positions.
    if (ci.wh_plus && ci.vp_order == 0) emit(dep_close(kMove));
    emit("H_V");
    emit(dep_open(kSel));
    if (ci.wh_plus && ci.vp_order == 1) emit(dep_close(kMove));
    emit(dep_close(kSel));
    if (ci.wh_plus && ci.vp_order == 2) emit(dep_close(kMove));
    emit(struct_close(vp_type));
    if (!ci.wh_plus) {
        // Subject at Spec-TP, rendered spec-final inside the TP region.
        emit(dep_close(ci.agr_type));
        emit(struct_close(tp_type));
    } else {
        // Subject at Spec-CP: the AGR close lands after the whole TP.
        emit(struct_close(tp_type));
        emit(dep_close(ci.agr_type));
    }
    emit(struct_close(cp_type));

    if (info) *info = ci;
    return seq;
}

nlohmann::json core_params_json(const CoreParams& p) {
    nlohmann::json j;
    j["language"] = "core";
    j["target_len"] = p.target_len;
    j["p_wh"] = p.p_wh;
    j["p_agr_a"] = p.p_agr_a;
    j["k_struct"] = p.k_struct;
    j["k_dep"] = p.k_dep;
    j["shuffle_vp"] = p.shuffle_vp;
    j["trim_to_l"] = p.trim_to_l;
    return j;
}

nlohmann::json generic_params_json(const CoreParams& p, double p_open) {
    nlohmann::json j;
    j["language"] = "generic_ksd";
    j["target_len"] = p.target_len;
    j["k_struct"] = p.k_struct;
    j["k_dep"] = p.k_dep;
    j["p_open"] = p_open;
    return j;
}

CorpusRecord gen_core_corpus(RandomStream& stream, const CoreParams& params) {
    check_params(params);
    if (params.target_len < 13) {
        throw std::invalid_argument("target_len is below the minimal clause length");
    }

    CorpusRecord rec;
    std::string wh_draws, agr_draws;
    int clauses = 0;
    while (static_cast<int>(rec.sequence.size()) < params.target_len) {
        ClauseInfo ci;
        TokenSequence clause = gen_core_clause(stream, params, &ci);
        rec.sequence.tokens.insert(rec.sequence.tokens.end(), clause.tokens.begin(),
                                   clause.tokens.end());
        wh_draws.push_back(ci.wh_plus ? '+' : '-');
        agr_draws.push_back(ci.agr_type == kAgrA ? 'A' : 'B');
        ++clauses;
    }
    if (params.trim_to_l) {
        rec.sequence.tokens.resize(static_cast<std::size_t>(params.target_len));
    }

    rec.language_tag = LanguageTag::core;
    rec.seed = stream.seed();
    rec.params_digest = params_digest(core_params_json(params));
    rec.metadata["clause_count"] = std::to_string(clauses);
    rec.metadata["wh"] = wh_draws;
    rec.metadata["agr"] = agr_draws;
    if (params.trim_to_l) rec.metadata["trimmed"] = "true";
    return rec;
}

CorpusRecord gen_generic_ksd(RandomStream& stream, const CoreParams& params, double p_open) {
    check_params(params);
    if (!(p_open >= 0.0 && p_open <= 1.0)) throw std::invalid_argument("p_open must be in [0,1]");

    int len = params.target_len + (params.target_len % 2);
    int n_types = params.k_struct + params.k_dep;
    auto walk = sample_balanced_walk(stream, n_types, len, p_open, 0);

    CorpusRecord rec;
    rec.sequence.tokens.reserve(walk.size());
    for (auto [type, open] : walk) {
        if (type < params.k_struct) {
            rec.sequence.tokens.push_back(open ? struct_open(type) : struct_close(type));
        } else {
            int id = type - params.k_struct + 1;
            rec.sequence.tokens.push_back(open ? dep_open(id) : dep_close(id));
        }
    }
    rec.language_tag = LanguageTag::generic_ksd;
    rec.seed = stream.seed();
    rec.params_digest = params_digest(generic_params_json(params, p_open));
    return rec;
}

// --- validation ---

namespace {

enum class CoreTokKind { struct_open, struct_close, dep_open, dep_close, landmark, unknown };

struct CoreTok {
    CoreTokKind kind = CoreTokKind::unknown;
    int type = -1;       // bracket type id
    char landmark = 0;   // 'C', 'T', 'V'
};

CoreTok classify_core_token(const Token& t) {
    CoreTok out;
    if (t == "H_C" || t == "H_T" || t == "H_V") {
        out.kind = CoreTokKind::landmark;
        out.landmark = t[2];
        return out;
    }
    if (t.size() < 2) return out;
    char c = t[0];
    int value = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') return out;
        value = value * 10 + (t[i] - '0');
    }
    switch (c) {
        case '[': out.kind = CoreTokKind::struct_open; break;
        case ']': out.kind = CoreTokKind::struct_close; break;
        case '(': out.kind = CoreTokKind::dep_open; break;
        case ')': out.kind = CoreTokKind::dep_close; break;
        default: return out;
    }
    out.type = value;
    return out;
}

/// Landmark that licenses a dependency type, or 0 for unconstrained types.
char licensor_for(int dep_type) {
    switch (dep_type) {
        case kAgrA:
        case kAgrB: return 'T';
        case kMove: return 'C';
        case kSel: return 'V';
        default: return 0;
    }
}

}  // namespace

ValidationReport validate_core(const TokenSequence& seq) {
    ValidationReport report;
    const auto& toks = seq.tokens;

    std::vector<CoreTok> kinds(toks.size());
    bool landmarks_present = false;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        kinds[i] = classify_core_token(toks[i]);
        if (kinds[i].kind == CoreTokKind::unknown) {
            report.add("alphabet", static_cast<std::ptrdiff_t>(i),
                       "token outside the core alphabet: " + toks[i]);
        }
        if (kinds[i].kind == CoreTokKind::landmark) landmarks_present = true;
    }

    // (a)/(b) per-type projection balance.
    std::map<int, int> struct_depth;
    std::map<int, int> dep_depth;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const CoreTok& k = kinds[i];
        if (k.kind == CoreTokKind::struct_open) ++struct_depth[k.type];
        if (k.kind == CoreTokKind::struct_close && --struct_depth[k.type] < 0) {
            report.add("struct_balance", static_cast<std::ptrdiff_t>(i),
                       "unmatched structural close ]" + std::to_string(k.type));
            struct_depth[k.type] = 0;
        }
        if (k.kind == CoreTokKind::dep_open) ++dep_depth[k.type];
        if (k.kind == CoreTokKind::dep_close && --dep_depth[k.type] < 0) {
            report.add("dep_balance", static_cast<std::ptrdiff_t>(i),
                       "unmatched dependency close )" + std::to_string(k.type));
            dep_depth[k.type] = 0;
        }
    }
    for (auto [type, depth] : struct_depth) {
        if (depth != 0) {
            report.add("struct_balance", -1,
                       "unclosed structural type [" + std::to_string(type));
        }
    }
    for (auto [type, depth] : dep_depth) {
        if (depth != 0) {
            report.add("dep_balance", -1, "unclosed dependency type (" + std::to_string(type));
        }
    }

    if (!landmarks_present) {
        report.not_applicable.push_back("adjacency: no landmark tokens in input");
        report.not_applicable.push_back("topology: no landmark tokens in input");
        return report;
    }

    // (c) adjacency, both directions.
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const CoreTok& k = kinds[i];
        if (k.kind == CoreTokKind::landmark) {
            const CoreTok* next = i + 1 < toks.size() ? &kinds[i + 1] : nullptr;
            bool ok = false;
            if (next) {
                if (k.landmark == 'T') {
                    ok = next->kind == CoreTokKind::dep_open &&
                         (next->type == kAgrA || next->type == kAgrB);
                } else if (k.landmark == 'V') {
                    ok = next->kind == CoreTokKind::dep_open && next->type == kSel;
                } else {
                    // H_C licenses MOVE only in wh=+ clauses; otherwise the
                    // TP bracket follows directly.
                    ok = (next->kind == CoreTokKind::dep_open && next->type == kMove) ||
                         next->kind == CoreTokKind::struct_open;
                }
            }
            if (!ok) {
                report.add("adjacency", static_cast<std::ptrdiff_t>(i),
                           toks[i] + " is not followed by its licensed dependency open");
            }
        }
        if (k.kind == CoreTokKind::dep_open) {
            char lic = licensor_for(k.type);
            if (lic != 0) {
                bool ok = i > 0 && kinds[i - 1].kind == CoreTokKind::landmark &&
                          kinds[i - 1].landmark == lic;
                if (!ok) {
                    report.add("adjacency", static_cast<std::ptrdiff_t>(i),
                               "(" + std::to_string(k.type) + " is not preceded by H_" +
                                   std::string(1, lic));
                }
            }
        }
    }

    // (d) topology over the structural bracket tree.
    struct Region {
        std::size_t open_idx;
        int parent;  // index into regions, -1 for top level
        char landmark = 0;
    };
    std::vector<Region> regions;
    std::vector<int> stack;  // open regions
    std::vector<int> landmark_region(toks.size(), -1);
    std::vector<int> clause_of(toks.size(), -1);  // top-level region per token

    auto top_level_of = [&regions](int region) {
        while (region >= 0 && regions[static_cast<std::size_t>(region)].parent >= 0) {
            region = regions[static_cast<std::size_t>(region)].parent;
        }
        return region;
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        const CoreTok& k = kinds[i];
        int current = stack.empty() ? -1 : stack.back();
        clause_of[i] = top_level_of(current);
        if (k.kind == CoreTokKind::struct_open) {
            regions.push_back({i, current});
            stack.push_back(static_cast<int>(regions.size()) - 1);
            clause_of[i] = top_level_of(stack.back());
        } else if (k.kind == CoreTokKind::struct_close) {
            if (!stack.empty()) {
                const Region& open = regions[static_cast<std::size_t>(stack.back())];
                if (kinds[open.open_idx].type != k.type) {
                    report.add("topology", static_cast<std::ptrdiff_t>(i),
                               "structural brackets cross instead of nesting");
                }
                stack.pop_back();
            }
        } else if (k.kind == CoreTokKind::landmark) {
            if (current < 0) {
                report.add("topology", static_cast<std::ptrdiff_t>(i),
                           toks[i] + " sits outside every structural region");
            } else {
                Region& r = regions[static_cast<std::size_t>(current)];
                if (r.landmark != 0) {
                    report.add("topology", static_cast<std::ptrdiff_t>(i),
                               "two landmarks share one structural region");
                } else {
                    r.landmark = k.landmark;
                }
                landmark_region[i] = current;
            }
        }
    }

    // Layer nesting: each H_T's region must sit inside an H_C region, each
    // H_V's inside an H_T region.
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (kinds[i].kind != CoreTokKind::landmark || kinds[i].landmark == 'C') continue;
        char need = kinds[i].landmark == 'T' ? 'C' : 'T';
        bool found = false;
        int region = landmark_region[i];
        if (region >= 0) {
            for (int up = regions[static_cast<std::size_t>(region)].parent; up >= 0;
                 up = regions[static_cast<std::size_t>(up)].parent) {
                if (regions[static_cast<std::size_t>(up)].landmark == need) {
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            report.add("topology", static_cast<std::ptrdiff_t>(i),
                       std::string(toks[i]) + " region is not nested inside an H_" +
                           std::string(1, need) + " region");
        }
    }

    // Dependency pairs stay within one clause.
    std::map<int, std::vector<std::size_t>> open_stacks;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const CoreTok& k = kinds[i];
        if (k.kind == CoreTokKind::dep_open) {
            open_stacks[k.type].push_back(i);
        } else if (k.kind == CoreTokKind::dep_close) {
            auto& opens = open_stacks[k.type];
            if (opens.empty()) continue;  // already a balance violation
            std::size_t open_idx = opens.back();
            opens.pop_back();
            if (clause_of[open_idx] != clause_of[i] || clause_of[i] < 0) {
                report.add("topology", static_cast<std::ptrdiff_t>(i),
                           "dependency )" + std::to_string(k.type) +
                               " closes outside the clause that opened it");
            }
        }
    }

    return report;
}

}  // namespace structlang
