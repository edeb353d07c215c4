#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structlang/corpus.hpp"
#include "structlang/random.hpp"
#include "structlang/token.hpp"
#include "structlang/validation.hpp"

#include <json.hpp>

namespace structlang {

enum class NumFeature { sg, pl, unvalued };
enum class WhMark { plus, minus, none };

std::string to_string(NumFeature num);

struct FeatureBundle {
    NumFeature num = NumFeature::unvalued;
    WhMark wh = WhMark::none;
    bool epp = false;

    bool operator==(const FeatureBundle&) const = default;
};

enum class Ablation { none, no_merge, no_move, no_agree };

std::string to_string(Ablation a);
Ablation ablation_from_string(const std::string& s);

enum class TraceKind { none, subject_raise, wh_move };

/// Binary Merge tree. Labels: CP, C', C, TP, T', T, vP, V', V, DP, D, N, TR.
/// Primed labels mark intermediate projections that never surface.
struct DerivationTree {
    std::string label;
    FeatureBundle features;
    std::vector<DerivationTree> children;  // 0 or 2
    std::optional<int> trace_link;
    TraceKind trace_kind = TraceKind::none;
    int lex_id = 0;  // > 0 on D/N/V heads

    bool operator==(const DerivationTree&) const = default;
};

struct MpStructParams {
    double p_wh = 0.2;
    double p_dp_neg_wh = 0.2;
    double p_sg = 0.5;
    double agreement_match_ratio = 1.0;
    bool epp_on_t = true;
    bool strip_lexical = true;
    int max_len = 1024;
    int n_nouns = 50;
    int n_verbs = 20;
    int n_dets = 5;
    Ablation ablation = Ablation::none;
    /// Trace tokens echo the mover's [-wh] mark (TR[-wh] for a marked mover);
    /// when false, traces render TR[DP] / TR[wh] by movement kind alone.
    bool trace_label_echo = true;
};

struct AgreeInfo {
    NumFeature subject_num = NumFeature::unvalued;
    NumFeature object_num = NumFeature::unvalued;
    NumFeature t_num = NumFeature::unvalued;
};

struct MoveInfo {
    bool wh_plus = false;
    bool wh_fallback = false;
    std::string mover = "none";  // "subj", "obj", "none"
    int n_traces = 0;
};

/// Step 1: vP = Merge(DP_subj, Merge(V, DP_obj)) with fresh lexical ids and
/// independently drawn [-wh] marks on both DPs.
DerivationTree build_base(RandomStream& stream, const MpStructParams& params);

/// Step 2: draws number for both DPs, values T's uNum against the subject
/// (agreement_match_ratio controls matching; no_agree leaves it unvalued) and
/// merges T above vP forming TP.
DerivationTree apply_agree(DerivationTree tree, RandomStream& stream,
                           const MpStructParams& params, AgreeInfo* info = nullptr);

/// Step 3: EPP subject raising to Spec-TP, C[wh] merge forming CP, and
/// wh-movement of one eligible (unmarked) DP to Spec-CP. When wh=+ finds no
/// eligible DP the marks are redrawn up to 8 times, then wh falls back to -.
/// Under no_move nothing is copied and wh is pinned to -.
DerivationTree apply_move(DerivationTree tree, RandomStream& stream, const MpStructParams& params,
                          MoveInfo* info = nullptr);

/// Pre-order surface rendering, Table-4 token grammar: phrases as
/// "[ LABEL ... ]" wrapped per child position, vP rendered head-first with
/// its specifier last under the surface label VP. no_merge drops structural
/// brackets except around movement copies of DPs.
TokenSequence linearize(const DerivationTree& tree, const MpStructParams& params);

/// Full pipeline for one clause; retries over-length derivations up to 8
/// times before raising.
CorpusRecord gen_mpstruct(RandomStream& stream, const MpStructParams& params);

/// Checks bracket balance/nesting, the surface label grammar, T/subject
/// agreement, trace licensing, and lexical stripping. Params select the
/// expected configuration (ablation, EPP, match ratio).
ValidationReport validate_mpstruct(const TokenSequence& seq, const MpStructParams& params);

/// Canonical parameter encoding used for params_digest and config echo.
nlohmann::json mpstruct_params_json(const MpStructParams& params);

}  // namespace structlang
