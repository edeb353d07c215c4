#pragma once

#include <vector>

#include "structlang/corpus.hpp"
#include "structlang/random.hpp"
#include "structlang/token.hpp"
#include "structlang/validation.hpp"

#include <json.hpp>

namespace structlang {

/// Abstracted clause generation: structural brackets plus typed dependency
/// pairs anchored by landmark tokens H_C / H_T / H_V (long aliases H_CP,
/// H_TP, H_VP).
struct CoreParams {
    int target_len = 1024;  // L
    double p_wh = 0.2;
    double p_agr_a = 0.5;  // choice between AGR_A and AGR_B
    int k_struct = 1;
    int k_dep = 4;
    bool shuffle_vp = true;
    bool trim_to_l = false;
};

enum class CoreRole { agr_a, agr_b, move, sel };

std::string to_string(CoreRole role);

struct DependencyType {
    int id = 0;
    CoreRole role = CoreRole::sel;
};

/// Fixed id-role calibration: 1 plural agreement, 2 singular agreement,
/// 3 movement, 4 selection. Ids past 4 (k_dep > 4) carry no role and appear
/// only in the generic mix.
std::vector<DependencyType> core_dependency_types(int k_dep);

/// Draws made for one clause, exposed for tests and corpus metadata.
struct ClauseInfo {
    bool wh_plus = false;
    int agr_type = 1;  // 1 = AGR_A, 2 = AGR_B
    int vp_order = 2;  // trace slot position; 2 = canonical (trace last)
};

/// One clause with CP > TP > vP topology. wh=+ adds a MOVE pair from the C
/// domain to the vP-internal trace; the subject surfaces as the AGR close,
/// spec-final in its clause (after TP for wh=+, inside TP for wh=-).
TokenSequence gen_core_clause(RandomStream& stream, const CoreParams& params,
                              ClauseInfo* info = nullptr);

/// Concatenates whole clauses until the corpus reaches target_len tokens.
/// trim_to_l cuts to exactly target_len, breaking the final clause (recorded
/// in metadata as trimmed=true).
CorpusRecord gen_core_corpus(RandomStream& stream, const CoreParams& params);

/// Contrast condition: a balanced random mix over the same bracket inventory
/// (k_struct structural types plus k_dep dependency types) with no landmarks
/// and no topology. target_len is rounded up to even.
CorpusRecord gen_generic_ksd(RandomStream& stream, const CoreParams& params, double p_open);

/// Checks (a) per-type structural balance, (b) per-type dependency balance,
/// (c) landmark adjacency in both directions, (d) fixed topology: the H_T
/// region nests inside the H_C region, the H_V region inside the H_T region,
/// and every dependency pair stays within one clause. Inputs without
/// landmarks get balance checks only; (c) and (d) become not-applicable
/// notes.
ValidationReport validate_core(const TokenSequence& seq);

nlohmann::json core_params_json(const CoreParams& params);
nlohmann::json generic_params_json(const CoreParams& params, double p_open);

}  // namespace structlang
