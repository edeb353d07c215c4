#include "structlang/mpstruct.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <variant>

namespace structlang {

std::string to_string(NumFeature num) {
    switch (num) {
        case NumFeature::sg: return "sg";
        case NumFeature::pl: return "pl";
        case NumFeature::unvalued: return "u";
    }
    throw std::invalid_argument("unknown NumFeature");
}

std::string to_string(Ablation a) {
    switch (a) {
        case Ablation::none: return "none";
        case Ablation::no_merge: return "no_merge";
        case Ablation::no_move: return "no_move";
        case Ablation::no_agree: return "no_agree";
    }
    throw std::invalid_argument("unknown Ablation");
}

Ablation ablation_from_string(const std::string& s) {
    if (s == "none") return Ablation::none;
    if (s == "no_merge") return Ablation::no_merge;
    if (s == "no_move") return Ablation::no_move;
    if (s == "no_agree") return Ablation::no_agree;
    throw std::invalid_argument("unknown ablation: " + s);
}

namespace {

DerivationTree leaf(std::string label, int lex_id = 0) {
    DerivationTree n;
    n.label = std::move(label);
    n.lex_id = lex_id;
    return n;
}

DerivationTree merge(std::string label, DerivationTree left, DerivationTree right) {
    DerivationTree n;
    n.label = std::move(label);
    n.children.push_back(std::move(left));
    n.children.push_back(std::move(right));
    return n;
}

NumFeature flip(NumFeature n) { return n == NumFeature::sg ? NumFeature::pl : NumFeature::sg; }

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    }
}

void check_params(const MpStructParams& p) {
    check_probability(p.p_wh, "p_wh");
    check_probability(p.p_dp_neg_wh, "p_dp_neg_wh");
    check_probability(p.p_sg, "p_sg");
    check_probability(p.agreement_match_ratio, "agreement_match_ratio");
    if (p.n_nouns < 1 || p.n_verbs < 1 || p.n_dets < 1) {
        throw std::invalid_argument("lexicon sizes must be >= 1");
    }
    if (p.max_len < 1) throw std::invalid_argument("max_len must be >= 1");
}

int draw_lex(RandomStream& stream, int n) {
    return 1 + static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(n)));
}

WhMark draw_mark(RandomStream& stream, double p) {
    return stream.bernoulli(p) ? WhMark::minus : WhMark::none;
}

// --- tree decomposition (post-Step-3 shapes) ---

struct CpParts {
    const DerivationTree* spec = nullptr;
    const DerivationTree* c = nullptr;
    const DerivationTree* tp = nullptr;
};

CpParts decompose_cp(const DerivationTree& cp) {
    CpParts parts;
    if (cp.children.size() != 2) throw std::invalid_argument("CP must be binary");
    if (cp.children[0].label == "C") {
        parts.c = &cp.children[0];
        parts.tp = &cp.children[1];
    } else {
        parts.spec = &cp.children[0];
        const DerivationTree& cbar = cp.children[1];
        if (cbar.label != "C'" || cbar.children.size() != 2) {
            throw std::invalid_argument("malformed CP");
        }
        parts.c = &cbar.children[0];
        parts.tp = &cbar.children[1];
    }
    return parts;
}

struct TpParts {
    const DerivationTree* spec = nullptr;
    const DerivationTree* t = nullptr;
    const DerivationTree* vp = nullptr;
};

TpParts decompose_tp(const DerivationTree& tp) {
    TpParts parts;
    if (tp.children.size() != 2) throw std::invalid_argument("TP must be binary");
    if (tp.children[0].label == "T") {
        parts.t = &tp.children[0];
        parts.vp = &tp.children[1];
    } else {
        parts.spec = &tp.children[0];
        const DerivationTree& tbar = tp.children[1];
        if (tbar.label != "T'" || tbar.children.size() != 2) {
            throw std::invalid_argument("malformed TP");
        }
        parts.t = &tbar.children[0];
        parts.vp = &tbar.children[1];
    }
    return parts;
}

struct VpParts {
    const DerivationTree* spec = nullptr;
    const DerivationTree* v = nullptr;
    const DerivationTree* obj = nullptr;
};

VpParts decompose_vp(const DerivationTree& vp) {
    VpParts parts;
    if (vp.children.size() != 2) throw std::invalid_argument("vP must be binary");
    parts.spec = &vp.children[0];
    const DerivationTree& vbar = vp.children[1];
    if (vbar.label != "V'" || vbar.children.size() != 2) {
        throw std::invalid_argument("malformed vP");
    }
    parts.v = &vbar.children[0];
    parts.obj = &vbar.children[1];
    return parts;
}

// --- surface token forms ---

std::string dp_label_token(const DerivationTree& dp) {
    if (dp.features.num == NumFeature::unvalued) return "DP";
    return "DP[Num:" + to_string(dp.features.num) + "]";
}

std::string t_token(const DerivationTree& t) {
    std::string s = "T(";
    if (t.features.epp) s += "+EPP,";
    s += "uNum:" + to_string(t.features.num) + ")";
    return s;
}

std::string trace_token(const DerivationTree& tr, const MpStructParams& params) {
    if (params.trace_label_echo && tr.features.wh == WhMark::minus) return "TR[-wh]";
    return tr.trace_kind == TraceKind::wh_move ? "TR[wh]" : "TR[DP]";
}

std::string lex_token(const DerivationTree& head) {
    return head.label + "_" + std::to_string(head.lex_id);
}

}  // namespace

DerivationTree build_base(RandomStream& stream, const MpStructParams& params) {
    check_params(params);
    int v = draw_lex(stream, params.n_verbs);
    int d1 = draw_lex(stream, params.n_dets);
    int d2 = draw_lex(stream, params.n_dets);
    int n1 = draw_lex(stream, params.n_nouns);
    int n2 = draw_lex(stream, params.n_nouns);
    WhMark subj_mark = draw_mark(stream, params.p_dp_neg_wh);
    WhMark obj_mark = draw_mark(stream, params.p_dp_neg_wh);

    DerivationTree subj = merge("DP", leaf("D", d1), leaf("N", n1));
    subj.features.wh = subj_mark;
    DerivationTree obj = merge("DP", leaf("D", d2), leaf("N", n2));
    obj.features.wh = obj_mark;
    return merge("vP", std::move(subj), merge("V'", leaf("V", v), std::move(obj)));
}

DerivationTree apply_agree(DerivationTree tree, RandomStream& stream,
                           const MpStructParams& params, AgreeInfo* info) {
    check_params(params);
    if (tree.label != "vP") throw std::invalid_argument("apply_agree expects a vP root");

    NumFeature subj_num = stream.bernoulli(params.p_sg) ? NumFeature::sg : NumFeature::pl;
    NumFeature obj_num = stream.bernoulli(params.p_sg) ? NumFeature::sg : NumFeature::pl;
    bool matched = stream.bernoulli(params.agreement_match_ratio);

    tree.children[0].features.num = subj_num;
    tree.children[1].children[1].features.num = obj_num;

    DerivationTree t = leaf("T");
    t.features.epp = params.epp_on_t;
    if (params.ablation == Ablation::no_agree) {
        t.features.num = NumFeature::unvalued;
    } else {
        t.features.num = matched ? subj_num : flip(subj_num);
    }
    if (info) {
        info->subject_num = subj_num;
        info->object_num = obj_num;
        info->t_num = t.features.num;
    }
    return merge("TP", std::move(t), std::move(tree));
}

DerivationTree apply_move(DerivationTree tree, RandomStream& stream, const MpStructParams& params,
                          MoveInfo* info) {
    check_params(params);
    if (tree.label != "TP") throw std::invalid_argument("apply_move expects a TP root");

    MoveInfo mi;
    bool suppress = params.ablation == Ablation::no_move;
    bool epp = tree.children[0].label == "T" && tree.children[0].features.epp;

    DerivationTree tp = std::move(tree);

    if (epp && !suppress) {
        DerivationTree& vp = tp.children[1];
        DerivationTree subj = vp.children[0];
        DerivationTree tr = leaf("TR");
        tr.trace_kind = TraceKind::subject_raise;
        tr.trace_link = 1;
        tr.features.wh = subj.features.wh;
        vp.children[0] = std::move(tr);
        subj.trace_link = 1;
        subj.trace_kind = TraceKind::subject_raise;
        DerivationTree tbar = merge("T'", std::move(tp.children[0]), std::move(tp.children[1]));
        tp.children.clear();
        tp.children.push_back(std::move(subj));
        tp.children.push_back(std::move(tbar));
        ++mi.n_traces;
    }

    WhMark wh = WhMark::minus;
    if (!suppress) wh = stream.bernoulli(params.p_wh) ? WhMark::plus : WhMark::minus;

    bool tp_has_spec = tp.children[0].label != "T";
    DerivationTree& vp = tp_has_spec ? tp.children[1].children[1] : tp.children[1];
    DerivationTree& subj_slot = tp_has_spec ? tp.children[0] : vp.children[0];
    DerivationTree& obj_slot = vp.children[1].children[1];

    if (wh == WhMark::plus) {
        int attempts = 0;
        while (subj_slot.features.wh == WhMark::minus && obj_slot.features.wh == WhMark::minus &&
               attempts < 8) {
            subj_slot.features.wh = draw_mark(stream, params.p_dp_neg_wh);
            obj_slot.features.wh = draw_mark(stream, params.p_dp_neg_wh);
            ++attempts;
        }
        if (subj_slot.features.wh == WhMark::minus && obj_slot.features.wh == WhMark::minus) {
            wh = WhMark::minus;
            mi.wh_fallback = true;
        } else if (epp && !suppress) {
            // Keep the raise trace's echo in sync with any redrawn mark.
            vp.children[0].features.wh = subj_slot.features.wh;
        }
    }

    mi.wh_plus = wh == WhMark::plus;

    DerivationTree c = leaf("C");
    c.features.wh = wh;

    if (wh == WhMark::plus) {
        std::vector<int> eligible;
        if (subj_slot.features.wh != WhMark::minus) eligible.push_back(0);
        if (obj_slot.features.wh != WhMark::minus) eligible.push_back(1);
        int pick = eligible.size() == 2
                       ? eligible[static_cast<std::size_t>(stream.uniform_below(2))]
                       : eligible[0];
        DerivationTree& origin = pick == 0 ? subj_slot : obj_slot;
        DerivationTree copy = origin;
        copy.trace_link = 2;
        copy.trace_kind = TraceKind::wh_move;
        DerivationTree tr = leaf("TR");
        tr.trace_kind = TraceKind::wh_move;
        tr.trace_link = 2;
        tr.features.wh = origin.features.wh;
        origin = std::move(tr);
        ++mi.n_traces;
        mi.mover = pick == 0 ? "subj" : "obj";
        DerivationTree out =
            merge("CP", std::move(copy), merge("C'", std::move(c), std::move(tp)));
        if (info) *info = mi;
        return out;
    }

    DerivationTree out = merge("CP", std::move(c), std::move(tp));
    if (info) *info = mi;
    return out;
}

// --- linearization ---

namespace {

class Linearizer {
public:
    Linearizer(const MpStructParams& params) : params_(params) {}

    TokenSequence run(const DerivationTree& cp) {
        if (cp.label != "CP") {
            throw std::invalid_argument("linearize expects a completed CP derivation");
        }
        if (params_.ablation == Ablation::no_merge) {
            flat_cp(cp);
        } else {
            phrase_cp(cp);
        }
        return TokenSequence{std::move(out_)};
    }

private:
    void emit(std::string tok) { out_.push_back(std::move(tok)); }

    void emit_head_bracketed(const DerivationTree& head, const std::string& tok) {
        emit("[");
        emit(tok);
        if (!params_.strip_lexical && head.lex_id > 0) emit(lex_token(head));
        emit("]");
    }

    // Child-position wrapper: [ <phrase or trace> <marks> ]
    void wrapped(const DerivationTree& node) {
        emit("[");
        if (node.label == "TR") {
            emit(trace_token(node, params_));
        } else if (node.label == "DP") {
            phrase_dp(node);
            if (node.features.wh == WhMark::minus) emit("[-wh]");
        } else if (node.label == "TP") {
            phrase_tp(node);
        } else if (node.label == "vP") {
            phrase_vp(node);
        } else {
            throw std::invalid_argument("unexpected child node: " + node.label);
        }
        emit("]");
    }

    void phrase_cp(const DerivationTree& cp) {
        CpParts parts = decompose_cp(cp);
        emit("[");
        emit("CP");
        if (parts.spec) wrapped(*parts.spec);
        emit("[");
        emit("C");
        emit("]");
        wrapped(*parts.tp);
        emit("]");
    }

    void phrase_tp(const DerivationTree& tp) {
        TpParts parts = decompose_tp(tp);
        emit("[");
        emit("TP");
        if (parts.spec) wrapped(*parts.spec);
        emit_head_bracketed(*parts.t, t_token(*parts.t));
        wrapped(*parts.vp);
        emit("]");
    }

    // Table 4 renders the verbal projection head-first with its specifier
    // last, under the surface label VP.
    void phrase_vp(const DerivationTree& vp) {
        VpParts parts = decompose_vp(vp);
        emit("[");
        emit("VP");
        emit("V");
        if (!params_.strip_lexical && parts.v->lex_id > 0) emit(lex_token(*parts.v));
        wrapped(*parts.obj);
        wrapped(*parts.spec);
        emit("]");
    }

    void phrase_dp(const DerivationTree& dp) {
        emit("[");
        emit(dp_label_token(dp));
        emit_head_bracketed(dp.children[0], "D");
        emit_head_bracketed(dp.children[1], "N");
        emit("]");
    }

    // --- no_merge rendering: pre-order content, structural brackets dropped
    // except around movement copies of DPs ---

    void flat_cp(const DerivationTree& cp) {
        CpParts parts = decompose_cp(cp);
        if (parts.spec) flat_element(*parts.spec);
        emit("C");
        flat_tp(*parts.tp);
    }

    void flat_tp(const DerivationTree& tp) {
        TpParts parts = decompose_tp(tp);
        if (parts.spec) flat_element(*parts.spec);
        emit(t_token(*parts.t));
        flat_vp(*parts.vp);
    }

    void flat_vp(const DerivationTree& vp) {
        VpParts parts = decompose_vp(vp);
        emit("V");
        if (!params_.strip_lexical && parts.v->lex_id > 0) emit(lex_token(*parts.v));
        flat_element(*parts.obj);
        flat_element(*parts.spec);
    }

    void flat_element(const DerivationTree& node) {
        if (node.label == "TR") {
            emit(trace_token(node, params_));
            return;
        }
        bool moved_copy = node.trace_link.has_value();
        if (moved_copy) emit("[");
        emit("D");
        if (!params_.strip_lexical && node.children[0].lex_id > 0) emit(lex_token(node.children[0]));
        emit("N");
        if (!params_.strip_lexical && node.children[1].lex_id > 0) emit(lex_token(node.children[1]));
        emit(dp_label_token(node));
        if (node.features.wh == WhMark::minus) emit("[-wh]");
        if (moved_copy) emit("]");
    }

    const MpStructParams& params_;
    std::vector<Token> out_;
};

}  // namespace

TokenSequence linearize(const DerivationTree& tree, const MpStructParams& params) {
    return Linearizer(params).run(tree);
}

nlohmann::json mpstruct_params_json(const MpStructParams& p) {
    nlohmann::json j;
    j["language"] = "mpstruct";
    j["p_wh"] = p.p_wh;
    j["p_dp_neg_wh"] = p.p_dp_neg_wh;
    j["p_sg"] = p.p_sg;
    j["agreement_match_ratio"] = p.agreement_match_ratio;
    j["epp_on_t"] = p.epp_on_t;
    j["strip_lexical"] = p.strip_lexical;
    j["max_len"] = p.max_len;
    j["n_nouns"] = p.n_nouns;
    j["n_verbs"] = p.n_verbs;
    j["n_dets"] = p.n_dets;
    j["ablation"] = to_string(p.ablation);
    j["trace_label_echo"] = p.trace_label_echo;
    return j;
}

CorpusRecord gen_mpstruct(RandomStream& stream, const MpStructParams& params) {
    check_params(params);
    for (int attempt = 0; attempt < 8; ++attempt) {
        AgreeInfo agree;
        MoveInfo move;
        DerivationTree tree = build_base(stream, params);
        tree = apply_agree(std::move(tree), stream, params, &agree);
        tree = apply_move(std::move(tree), stream, params, &move);
        TokenSequence seq = linearize(tree, params);
        if (static_cast<int>(seq.size()) > params.max_len) continue;

        CorpusRecord rec;
        rec.sequence = std::move(seq);
        rec.language_tag =
            params.ablation == Ablation::none ? LanguageTag::mpstruct : LanguageTag::mpstruct_ablated;
        rec.seed = stream.seed();
        rec.params_digest = params_digest(mpstruct_params_json(params));
        rec.metadata["wh"] = move.wh_plus ? "+" : "-";
        rec.metadata["wh_fallback"] = move.wh_fallback ? "true" : "false";
        rec.metadata["mover"] = move.mover;
        rec.metadata["inum"] = to_string(agree.subject_num);
        rec.metadata["unum"] = to_string(agree.t_num);
        rec.metadata["ablation"] = to_string(params.ablation);
        return rec;
    }
    throw std::runtime_error("gen_mpstruct: derivation exceeded max_len after 8 retries");
}

// --- validation ---

namespace {

bool is_lexical_token(const Token& t) {
    if (t.size() < 3) return false;
    if (t[0] != 'D' && t[0] != 'N' && t[0] != 'V') return false;
    if (t[1] != '_') return false;
    if (t[2] == '0') return false;
    for (std::size_t i = 2; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
}

std::optional<NumFeature> parse_dp_label(const Token& t) {
    if (t == "DP") return NumFeature::unvalued;
    if (t == "DP[Num:sg]") return NumFeature::sg;
    if (t == "DP[Num:pl]") return NumFeature::pl;
    return std::nullopt;
}

struct TTokenInfo {
    bool epp = false;
    NumFeature num = NumFeature::unvalued;
};

std::optional<TTokenInfo> parse_t_token(const Token& t) {
    if (t == "T(+EPP,uNum:sg)") return TTokenInfo{true, NumFeature::sg};
    if (t == "T(+EPP,uNum:pl)") return TTokenInfo{true, NumFeature::pl};
    if (t == "T(+EPP,uNum:u)") return TTokenInfo{true, NumFeature::unvalued};
    if (t == "T(uNum:sg)") return TTokenInfo{false, NumFeature::sg};
    if (t == "T(uNum:pl)") return TTokenInfo{false, NumFeature::pl};
    if (t == "T(uNum:u)") return TTokenInfo{false, NumFeature::unvalued};
    return std::nullopt;
}

bool is_trace_token(const Token& t) { return t == "TR[DP]" || t == "TR[wh]" || t == "TR[-wh]"; }
bool is_raise_trace(const Token& t) { return t == "TR[DP]" || t == "TR[-wh]"; }

struct Group;
using Item = std::variant<std::size_t, Group>;  // leaf token index or subgroup

struct Group {
    std::size_t open_idx = 0;
    std::vector<Item> items;
};

/// One DP/trace occupant of a structural slot.
struct DpSlot {
    bool present = false;
    bool is_trace = false;
    Token trace_tok;
    NumFeature num = NumFeature::unvalued;
    bool marked = false;
    std::size_t idx = 0;  // anchor token
};

class MpValidator {
public:
    MpValidator(const TokenSequence& seq, const MpStructParams& params)
        : toks_(seq.tokens), params_(params) {}

    ValidationReport run() {
        check_lexicon();
        if (!parse_groups()) return std::move(report_);
        if (params_.ablation == Ablation::no_merge) {
            classify_flat();
        } else {
            classify_bracketed();
        }
        if (!structure_ok_) return std::move(report_);
        check_agreement();
        check_traces();
        return std::move(report_);
    }

private:
    void add(const char* rule, std::ptrdiff_t idx, std::string msg) {
        report_.add(rule, idx, std::move(msg));
    }

    void structure_fault(std::ptrdiff_t idx, std::string msg) {
        structure_ok_ = false;
        add("label_grammar", idx, std::move(msg));
    }

    void check_lexicon() {
        if (!params_.strip_lexical) return;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            if (is_lexical_token(toks_[i])) {
                add("lexicon", static_cast<std::ptrdiff_t>(i),
                    "lexical token in strip_lexical output: " + toks_[i]);
            }
        }
    }

    bool parse_groups() {
        std::vector<Group> stack;
        stack.emplace_back();  // virtual root
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t == "[") {
                Group g;
                g.open_idx = i;
                stack.push_back(std::move(g));
            } else if (t == "]") {
                if (stack.size() == 1) {
                    add("bracket_balance", static_cast<std::ptrdiff_t>(i), "unmatched close bracket");
                    return false;
                }
                Group done = std::move(stack.back());
                stack.pop_back();
                stack.back().items.emplace_back(std::move(done));
            } else {
                stack.back().items.emplace_back(i);
            }
        }
        if (stack.size() != 1) {
            add("bracket_balance", static_cast<std::ptrdiff_t>(stack.back().open_idx),
                "unclosed open bracket");
            return false;
        }
        root_ = std::move(stack.back());
        return true;
    }

    // --- bracketed surface grammar ---

    void classify_bracketed() {
        std::size_t n_groups = 0;
        for (const Item& item : root_.items) {
            if (std::holds_alternative<std::size_t>(item)) {
                structure_fault(static_cast<std::ptrdiff_t>(std::get<std::size_t>(item)),
                                "token outside clause brackets: " + tok(item));
                return;
            }
            ++n_groups;
        }
        if (n_groups != 1) {
            structure_fault(-1, "expected exactly one top-level clause group");
            return;
        }
        classify_cp(std::get<Group>(root_.items[0]));
    }

    const Token& tok(const Item& item) const { return toks_[std::get<std::size_t>(item)]; }
    std::size_t idx(const Item& item) const { return std::get<std::size_t>(item); }
    bool is_leaf(const Item& item) const { return std::holds_alternative<std::size_t>(item); }

    void classify_cp(const Group& cp) {
        if (cp.items.empty() || !is_leaf(cp.items[0]) || tok(cp.items[0]) != "CP") {
            structure_fault(static_cast<std::ptrdiff_t>(cp.open_idx), "clause must open with CP");
            return;
        }
        std::vector<const Group*> groups;
        for (std::size_t i = 1; i < cp.items.size(); ++i) {
            if (is_leaf(cp.items[i])) {
                structure_fault(static_cast<std::ptrdiff_t>(idx(cp.items[i])),
                                "unexpected token under CP: " + tok(cp.items[i]));
                return;
            }
            groups.push_back(&std::get<Group>(cp.items[i]));
        }
        std::size_t at = 0;
        if (groups.size() == 3) {
            cp_spec_ = parse_slot_wrapper(*groups[0], false);
            at = 1;
        } else if (groups.size() != 2) {
            structure_fault(static_cast<std::ptrdiff_t>(cp.open_idx),
                            "CP must contain [spec] [C] [TP]");
            return;
        }
        if (!structure_ok_) return;
        const Group& c_group = *groups[at];
        if (c_group.items.size() != 1 || !is_leaf(c_group.items[0]) ||
            tok(c_group.items[0]) != "C") {
            structure_fault(static_cast<std::ptrdiff_t>(c_group.open_idx), "expected [ C ]");
            return;
        }
        const Group& tp_wrap = *groups[at + 1];
        const Group* tp = sole_subgroup(tp_wrap);
        if (!tp) return;
        classify_tp(*tp);
    }

    void classify_tp(const Group& tp) {
        if (tp.items.empty() || !is_leaf(tp.items[0]) || tok(tp.items[0]) != "TP") {
            structure_fault(static_cast<std::ptrdiff_t>(tp.open_idx), "expected TP label");
            return;
        }
        std::vector<const Group*> groups;
        for (std::size_t i = 1; i < tp.items.size(); ++i) {
            if (is_leaf(tp.items[i])) {
                structure_fault(static_cast<std::ptrdiff_t>(idx(tp.items[i])),
                                "unexpected token under TP: " + tok(tp.items[i]));
                return;
            }
            groups.push_back(&std::get<Group>(tp.items[i]));
        }
        std::size_t at = 0;
        if (groups.size() == 3) {
            tp_spec_ = parse_slot_wrapper(*groups[0], true);
            at = 1;
        } else if (groups.size() != 2) {
            structure_fault(static_cast<std::ptrdiff_t>(tp.open_idx),
                            "TP must contain [spec] [T] [VP]");
            return;
        }
        if (!structure_ok_) return;
        const Group& t_group = *groups[at];
        if (t_group.items.size() != 1 || !is_leaf(t_group.items[0])) {
            structure_fault(static_cast<std::ptrdiff_t>(t_group.open_idx), "expected [ T(...) ]");
            return;
        }
        auto t_info = parse_t_token(tok(t_group.items[0]));
        if (!t_info) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(t_group.items[0])),
                            "unparseable T token: " + tok(t_group.items[0]));
            return;
        }
        t_info_ = *t_info;
        t_idx_ = idx(t_group.items[0]);
        const Group* vp = sole_subgroup(*groups[at + 1]);
        if (!vp) return;
        classify_vp(*vp);
    }

    void classify_vp(const Group& vp) {
        if (vp.items.size() < 2 || !is_leaf(vp.items[0]) || tok(vp.items[0]) != "VP" ||
            !is_leaf(vp.items[1]) || tok(vp.items[1]) != "V") {
            structure_fault(static_cast<std::ptrdiff_t>(vp.open_idx), "expected [ VP V ... ]");
            return;
        }
        std::size_t at = 2;
        if (at < vp.items.size() && is_leaf(vp.items[at]) && is_lexical_token(tok(vp.items[at]))) {
            ++at;  // lexical verb
        }
        std::vector<const Group*> slots;
        for (std::size_t i = at; i < vp.items.size(); ++i) {
            if (is_leaf(vp.items[i])) {
                structure_fault(static_cast<std::ptrdiff_t>(idx(vp.items[i])),
                                "unexpected token under VP: " + tok(vp.items[i]));
                return;
            }
            slots.push_back(&std::get<Group>(vp.items[i]));
        }
        if (slots.size() != 2) {
            structure_fault(static_cast<std::ptrdiff_t>(vp.open_idx),
                            "VP must contain exactly two argument slots");
            return;
        }
        vp_obj_ = parse_slot_wrapper(*slots[0], true);
        vp_spec_ = parse_slot_wrapper(*slots[1], true);
    }

    const Group* sole_subgroup(const Group& wrapper) {
        if (wrapper.items.size() != 1 || is_leaf(wrapper.items[0])) {
            structure_fault(static_cast<std::ptrdiff_t>(wrapper.open_idx),
                            "expected a single wrapped constituent");
            return nullptr;
        }
        return &std::get<Group>(wrapper.items[0]);
    }

    /// Wrapper group holding either a DP group (+ optional [-wh] mark) or,
    /// when traces are allowed in this slot, a single trace leaf.
    DpSlot parse_slot_wrapper(const Group& wrapper, bool allow_trace) {
        DpSlot slot;
        slot.present = true;
        slot.idx = wrapper.open_idx;
        if (wrapper.items.empty()) {
            structure_fault(static_cast<std::ptrdiff_t>(wrapper.open_idx), "empty argument slot");
            return slot;
        }
        if (is_leaf(wrapper.items[0])) {
            const Token& t = tok(wrapper.items[0]);
            if (allow_trace && is_trace_token(t) && wrapper.items.size() == 1) {
                slot.is_trace = true;
                slot.trace_tok = t;
                slot.idx = idx(wrapper.items[0]);
                return slot;
            }
            structure_fault(static_cast<std::ptrdiff_t>(idx(wrapper.items[0])),
                            "unexpected token in argument slot: " + t);
            return slot;
        }
        parse_dp_group(std::get<Group>(wrapper.items[0]), slot);
        if (wrapper.items.size() > 1) {
            if (wrapper.items.size() == 2 && is_leaf(wrapper.items[1]) &&
                tok(wrapper.items[1]) == "[-wh]") {
                slot.marked = true;
            } else {
                structure_fault(static_cast<std::ptrdiff_t>(wrapper.open_idx),
                                "argument slot admits only a [-wh] mark after the DP");
            }
        }
        return slot;
    }

    void parse_dp_group(const Group& dp, DpSlot& slot) {
        if (dp.items.empty() || !is_leaf(dp.items[0])) {
            structure_fault(static_cast<std::ptrdiff_t>(dp.open_idx), "expected DP label");
            return;
        }
        auto num = parse_dp_label(tok(dp.items[0]));
        if (!num) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(dp.items[0])),
                            "unparseable DP label: " + tok(dp.items[0]));
            return;
        }
        slot.num = *num;
        slot.idx = idx(dp.items[0]);
        if (dp.items.size() != 3 || is_leaf(dp.items[1]) || is_leaf(dp.items[2])) {
            structure_fault(static_cast<std::ptrdiff_t>(dp.open_idx),
                            "DP must contain [ D ] [ N ]");
            return;
        }
        check_head_group(std::get<Group>(dp.items[1]), "D");
        check_head_group(std::get<Group>(dp.items[2]), "N");
    }

    void check_head_group(const Group& g, const std::string& cat) {
        bool ok = !g.items.empty() && is_leaf(g.items[0]) && tok(g.items[0]) == cat;
        if (ok && g.items.size() == 2) {
            ok = is_leaf(g.items[1]) && is_lexical_token(tok(g.items[1]));
        } else if (ok && g.items.size() != 1) {
            ok = false;
        }
        if (!ok) {
            structure_fault(static_cast<std::ptrdiff_t>(g.open_idx), "expected [ " + cat + " ]");
        }
    }

    // --- no_merge flat surface ---

    void classify_flat() {
        // Walk elements in order: leaves, flat DP runs, and movement-copy
        // groups. Element positions decide slot assignment afterwards.
        struct Occupant {
            int pos;
            DpSlot slot;
        };
        std::vector<Occupant> occupants;
        std::ptrdiff_t c_pos = -1, t_pos = -1, v_pos = -1;
        int element_pos = 0;

        std::size_t i = 0;
        const auto& items = root_.items;
        while (i < items.size()) {
            if (!is_leaf(items[i])) {
                const Group& g = std::get<Group>(items[i]);
                DpSlot slot;
                if (!parse_flat_dp(g.items, 0, g.items.size(), slot, g.open_idx)) return;
                slot.present = true;
                slot.idx = g.open_idx;
                occupants.push_back({element_pos, slot});
                ++i;
                ++element_pos;
                continue;
            }
            const Token& t = tok(items[i]);
            if (t == "C") {
                c_pos = element_pos;
                ++i;
            } else if (auto t_info = parse_t_token(t)) {
                t_info_ = *t_info;
                t_idx_ = idx(items[i]);
                t_pos = element_pos;
                ++i;
            } else if (t == "V") {
                v_pos = element_pos;
                ++i;
                if (i < items.size() && is_leaf(items[i]) && is_lexical_token(tok(items[i])) &&
                    tok(items[i])[0] == 'V') {
                    ++i;
                }
            } else if (t == "D") {
                DpSlot slot;
                std::size_t consumed = 0;
                if (!parse_flat_dp_leaves(i, consumed, slot)) return;
                slot.present = true;
                occupants.push_back({element_pos, slot});
                i += consumed;
            } else if (is_trace_token(t)) {
                DpSlot slot;
                slot.present = true;
                slot.is_trace = true;
                slot.trace_tok = t;
                slot.idx = idx(items[i]);
                occupants.push_back({element_pos, slot});
                ++i;
            } else {
                structure_fault(static_cast<std::ptrdiff_t>(idx(items[i])),
                                "unexpected token in flat clause: " + t);
                return;
            }
            ++element_pos;
        }

        if (c_pos < 0 || t_pos < 0 || v_pos < 0 || !(c_pos < t_pos && t_pos < v_pos)) {
            structure_fault(-1, "flat clause must order C before T before V");
            return;
        }
        int n_dps = 0;
        for (const Occupant& o : occupants) {
            if (!o.slot.is_trace) ++n_dps;
        }
        if (n_dps != 2) {
            structure_fault(-1, "flat clause must contain exactly two DPs");
            return;
        }
        // Before C -> Spec-CP; between C and T -> Spec-TP; after V the
        // in-situ order is object then subject.
        std::vector<const DpSlot*> post_v;
        for (const Occupant& o : occupants) {
            DpSlot* target = nullptr;
            if (o.pos < c_pos) {
                target = &cp_spec_;
            } else if (o.pos < t_pos) {
                target = &tp_spec_;
            } else if (o.pos > v_pos) {
                post_v.push_back(&o.slot);
                continue;
            } else {
                structure_fault(static_cast<std::ptrdiff_t>(o.slot.idx),
                                "argument between T and V in flat clause");
                return;
            }
            if (target->present) {
                structure_fault(static_cast<std::ptrdiff_t>(o.slot.idx),
                                "two arguments compete for one specifier position");
                return;
            }
            *target = o.slot;
        }
        if (post_v.size() > 2) {
            structure_fault(static_cast<std::ptrdiff_t>(post_v[2]->idx),
                            "more than two post-verbal arguments");
            return;
        }
        if (post_v.size() >= 1) vp_obj_ = *post_v[0];
        if (post_v.size() >= 2) vp_spec_ = *post_v[1];
    }

    bool parse_flat_dp_leaves(std::size_t start, std::size_t& consumed, DpSlot& slot) {
        // D [lex] N [lex] DP-label [mark], all leaves at top level.
        const auto& items = root_.items;
        std::size_t i = start;
        auto leaf_is = [&](std::size_t at, const char* what) {
            return at < items.size() && is_leaf(items[at]) && tok(items[at]) == what;
        };
        if (!leaf_is(i, "D")) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(items[start])), "expected D");
            return false;
        }
        ++i;
        if (i < items.size() && is_leaf(items[i]) && is_lexical_token(tok(items[i]))) ++i;
        if (!leaf_is(i, "N")) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(items[start])), "expected D N DP[...]");
            return false;
        }
        ++i;
        if (i < items.size() && is_leaf(items[i]) && is_lexical_token(tok(items[i]))) ++i;
        if (i >= items.size() || !is_leaf(items[i])) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(items[start])), "expected DP label");
            return false;
        }
        auto num = parse_dp_label(tok(items[i]));
        if (!num) {
            structure_fault(static_cast<std::ptrdiff_t>(idx(items[i])),
                            "unparseable DP label: " + tok(items[i]));
            return false;
        }
        slot.num = *num;
        slot.idx = idx(items[i]);
        ++i;
        if (i < items.size() && is_leaf(items[i]) && tok(items[i]) == "[-wh]") {
            slot.marked = true;
            ++i;
        }
        consumed = i - start;
        return true;
    }

    bool parse_flat_dp(const std::vector<Item>& items, std::size_t start, std::size_t end,
                       DpSlot& slot, std::size_t anchor) {
        // Bracketed movement copy: [ D [lex] N [lex] DP-label [mark] ]
        std::size_t i = start;
        auto next_leaf = [&](std::size_t at) -> const Token* {
            if (at >= end || !is_leaf(items[at])) return nullptr;
            return &tok(items[at]);
        };
        const Token* t = next_leaf(i);
        if (!t || *t != "D") {
            structure_fault(static_cast<std::ptrdiff_t>(anchor), "expected [ D N DP[...] ]");
            return false;
        }
        ++i;
        t = next_leaf(i);
        if (t && is_lexical_token(*t)) {
            ++i;
            t = next_leaf(i);
        }
        if (!t || *t != "N") {
            structure_fault(static_cast<std::ptrdiff_t>(anchor), "expected [ D N DP[...] ]");
            return false;
        }
        ++i;
        t = next_leaf(i);
        if (t && is_lexical_token(*t)) {
            ++i;
            t = next_leaf(i);
        }
        if (!t) {
            structure_fault(static_cast<std::ptrdiff_t>(anchor), "expected DP label");
            return false;
        }
        auto num = parse_dp_label(*t);
        if (!num) {
            structure_fault(static_cast<std::ptrdiff_t>(anchor), "unparseable DP label: " + *t);
            return false;
        }
        slot.num = *num;
        ++i;
        t = next_leaf(i);
        if (t && *t == "[-wh]") {
            slot.marked = true;
            ++i;
        }
        if (i != end) {
            structure_fault(static_cast<std::ptrdiff_t>(anchor), "trailing tokens in DP group");
            return false;
        }
        return true;
    }

    // --- semantic checks over resolved slots ---

    const DpSlot* subject_slot() const {
        if (tp_spec_.present && !tp_spec_.is_trace) return &tp_spec_;
        if (vp_spec_.present && !vp_spec_.is_trace) return &vp_spec_;
        if (cp_spec_.present && !cp_spec_.is_trace) return &cp_spec_;
        return nullptr;
    }

    void check_agreement() {
        if (t_info_.epp != params_.epp_on_t) {
            add("label_grammar", static_cast<std::ptrdiff_t>(t_idx_),
                "T token EPP flag contradicts configuration");
        }
        if (params_.ablation == Ablation::no_agree) {
            if (t_info_.num != NumFeature::unvalued) {
                add("agreement", static_cast<std::ptrdiff_t>(t_idx_),
                    "no_agree output must leave uNum unvalued");
            }
            return;
        }
        const DpSlot* subj = subject_slot();
        if (!subj) {
            add("agreement", static_cast<std::ptrdiff_t>(t_idx_), "no subject DP to agree with");
            return;
        }
        if (params_.agreement_match_ratio >= 1.0 && t_info_.num != subj->num) {
            add("agreement", static_cast<std::ptrdiff_t>(t_idx_),
                "uNum on T does not match the subject's Num");
        }
    }

    void check_traces() {
        const bool moved = params_.ablation != Ablation::no_move;
        auto is_wh = [](const DpSlot& s) { return s.present && s.is_trace && s.trace_tok == "TR[wh]"; };
        auto is_raise = [](const DpSlot& s) {
            return s.present && s.is_trace && is_raise_trace(s.trace_tok);
        };

        if (!moved) {
            for (const DpSlot* s : {&cp_spec_, &tp_spec_, &vp_obj_, &vp_spec_}) {
                if (s->present && s->is_trace) {
                    add("trace", static_cast<std::ptrdiff_t>(s->idx),
                        "no_move output must not contain traces");
                }
            }
            if (cp_spec_.present) {
                add("trace", static_cast<std::ptrdiff_t>(cp_spec_.idx),
                    "no_move output must not fill Spec-CP");
            }
            if (tp_spec_.present) {
                add("trace", static_cast<std::ptrdiff_t>(tp_spec_.idx),
                    "no_move output must not fill Spec-TP");
            }
            return;
        }

        if (cp_spec_.present && cp_spec_.is_trace) {
            add("trace", static_cast<std::ptrdiff_t>(cp_spec_.idx), "Spec-CP cannot hold a trace");
        }
        if (cp_spec_.present && cp_spec_.marked) {
            add("trace", static_cast<std::ptrdiff_t>(cp_spec_.idx),
                "wh-moved DP carries a [-wh] mark");
        }

        int wh_traces = 0;
        for (const DpSlot* s : {&tp_spec_, &vp_obj_, &vp_spec_}) {
            if (is_wh(*s)) ++wh_traces;
        }
        bool wh_moved = cp_spec_.present;
        if (wh_moved && wh_traces != 1) {
            add("trace", static_cast<std::ptrdiff_t>(cp_spec_.idx),
                "wh-moved DP requires exactly one wh trace");
        }
        if (!wh_moved && wh_traces != 0) {
            add("trace", -1, "wh trace without a clause-initial moved DP");
        }

        int raise_traces = 0;
        for (const DpSlot* s : {&tp_spec_, &vp_obj_, &vp_spec_}) {
            if (is_raise(*s)) ++raise_traces;
        }
        if (params_.epp_on_t) {
            if (!tp_spec_.present) {
                add("trace", -1, "EPP requires a filled Spec-TP");
            } else if (tp_spec_.is_trace && !is_wh(tp_spec_)) {
                add("trace", static_cast<std::ptrdiff_t>(tp_spec_.idx),
                    "Spec-TP trace must be a wh trace");
            } else if (tp_spec_.is_trace && !wh_moved) {
                add("trace", static_cast<std::ptrdiff_t>(tp_spec_.idx),
                    "Spec-TP wh trace lacks a moved antecedent");
            }
            if (!is_raise(vp_spec_)) {
                add("trace",
                    vp_spec_.present ? static_cast<std::ptrdiff_t>(vp_spec_.idx) : -1,
                    "EPP raising must leave a subject trace in the vP specifier");
            } else if (raise_traces != 1) {
                add("trace", static_cast<std::ptrdiff_t>(vp_spec_.idx),
                    "exactly one subject-raise trace expected");
            }
            if (!params_.trace_label_echo && is_raise(vp_spec_) && vp_spec_.trace_tok == "TR[-wh]") {
                add("trace", static_cast<std::ptrdiff_t>(vp_spec_.idx),
                    "TR[-wh] rendering requires trace echo");
            }
            if (params_.trace_label_echo && is_raise(vp_spec_)) {
                const DpSlot* subj = subject_slot();
                if (subj && (vp_spec_.trace_tok == "TR[-wh]") != subj->marked) {
                    add("trace", static_cast<std::ptrdiff_t>(vp_spec_.idx),
                        "raise trace echo disagrees with subject's [-wh] mark");
                }
            }
        } else {
            if (tp_spec_.present) {
                add("trace", static_cast<std::ptrdiff_t>(tp_spec_.idx),
                    "Spec-TP filled without EPP");
            }
            if (raise_traces != 0) {
                add("trace", -1, "subject-raise trace without EPP");
            }
        }
        if (vp_obj_.present && vp_obj_.is_trace && is_raise_trace(vp_obj_.trace_tok)) {
            add("trace", static_cast<std::ptrdiff_t>(vp_obj_.idx),
                "object slot cannot hold a subject-raise trace");
        }
    }

    const std::vector<Token>& toks_;
    const MpStructParams& params_;
    ValidationReport report_;
    Group root_;
    bool structure_ok_ = true;

    DpSlot cp_spec_, tp_spec_, vp_obj_, vp_spec_;
    TTokenInfo t_info_;
    std::size_t t_idx_ = 0;
};

}  // namespace

ValidationReport validate_mpstruct(const TokenSequence& seq, const MpStructParams& params) {
    check_params(params);
    return MpValidator(seq, params).run();
}

}  // namespace structlang
