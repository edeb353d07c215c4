#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "structlang/corpus.hpp"
#include "structlang/dyck.hpp"
#include "structlang/metrics.hpp"
#include "structlang/mpcore.hpp"
#include "structlang/mpstruct.hpp"
#include "structlang/perturb.hpp"
#include "structlang/random.hpp"
#include "structlang/validation.hpp"

namespace {

using namespace structlang;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolations = 3;

std::uint64_t env_default_seed() {
    const char* env = std::getenv("STRUCTLANG_SEED");
    if (env == nullptr) return 0;
    const std::string text(env);
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used != text.size()) {
        throw std::invalid_argument("STRUCTLANG_SEED must be an unsigned integer, got '" + text +
                                    "'");
    }
    return value;
}

// "-" selects stdin/stdout.
struct Input {
    std::ifstream file;
    std::istream* stream = nullptr;

    explicit Input(const std::string& path) {
        if (path == "-") {
            stream = &std::cin;
            return;
        }
        file.open(path, std::ios::binary);
        if (file) stream = &file;
    }
};

struct Output {
    std::ofstream file;
    std::ostream* stream = nullptr;

    explicit Output(const std::string& path) {
        if (path == "-") {
            stream = &std::cout;
            return;
        }
        file.open(path, std::ios::binary);
        if (file) stream = &file;
    }
};

// --- generate ---

struct GenerateArgs {
    std::string lang;
    std::uint64_t seed = 0;
    std::uint64_t count = 100000;
    std::string out = "-";
    std::string format = "jsonl";

    DyckParams dyck;
    MpStructParams mp;
    std::string ablation = "none";
    CoreParams core;
    double p_wh = 0.2;
    double generic_p_open = 0.49;
};

// Records are independent across stream ids, so blocks are generated on a
// few worker threads and written back in id order.
void write_records(std::ostream& out, std::uint64_t count, CorpusFormat format,
                   const std::function<CorpusRecord(std::uint64_t)>& make) {
    const std::uint64_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    constexpr std::uint64_t kBlock = 4096;
    for (std::uint64_t lo = 0; lo < count; lo += kBlock) {
        const std::uint64_t n = std::min(count, lo + kBlock) - lo;
        const std::uint64_t chunks = std::min(workers, n);
        std::vector<std::future<std::string>> parts;
        parts.reserve(chunks);
        for (std::uint64_t c = 0; c < chunks; ++c) {
            const std::uint64_t a = lo + n * c / chunks;
            const std::uint64_t b = lo + n * (c + 1) / chunks;
            parts.push_back(std::async(std::launch::async, [&make, format, a, b] {
                std::string text;
                for (std::uint64_t id = a; id < b; ++id) {
                    text += serialize_corpus({make(id)}, format);
                }
                return text;
            }));
        }
        for (auto& part : parts) out << part.get();
    }
}

int run_generate(const GenerateArgs& args) {
    const CorpusFormat format = corpus_format_from_string(args.format);
    std::function<CorpusRecord(std::uint64_t)> make;

    if (args.lang == "dyck1" || args.lang == "ksd") {
        DyckParams dp = args.dyck;
        const bool typed = args.lang == "ksd";
        if (!typed) dp.k = 1;
        nlohmann::json pj;
        pj["language"] = args.lang;
        pj["k"] = dp.k;
        pj["target_len"] = dp.target_len;
        pj["p_open"] = dp.p_open;
        pj["max_depth"] = dp.max_depth;
        const std::string digest = params_digest(pj);
        const std::string config = pj.dump();
        const std::uint64_t seed = args.seed;
        make = [dp, typed, digest, config, seed](std::uint64_t id) {
            RandomStream s(SeedSpec{seed, id});
            CorpusRecord rec;
            rec.sequence = typed ? gen_shuffle_dyck(s, dp) : gen_dyck1(s, dp);
            rec.language_tag = typed ? LanguageTag::ksd : LanguageTag::dyck1;
            rec.seed = SeedSpec{seed, id};
            rec.params_digest = digest;
            rec.metadata["config"] = config;
            return rec;
        };
    } else if (args.lang == "mpstruct") {
        MpStructParams mp = args.mp;
        mp.p_wh = args.p_wh;
        mp.ablation = ablation_from_string(args.ablation);
        const std::string config = mpstruct_params_json(mp).dump();
        const std::uint64_t seed = args.seed;
        make = [mp, config, seed](std::uint64_t id) {
            RandomStream s(SeedSpec{seed, id});
            CorpusRecord rec = gen_mpstruct(s, mp);
            rec.metadata["config"] = config;
            return rec;
        };
    } else if (args.lang == "core") {
        CoreParams cp = args.core;
        cp.p_wh = args.p_wh;
        const std::string config = core_params_json(cp).dump();
        const std::uint64_t seed = args.seed;
        make = [cp, config, seed](std::uint64_t id) {
            RandomStream s(SeedSpec{seed, id});
            CorpusRecord rec = gen_core_corpus(s, cp);
            rec.metadata["config"] = config;
            return rec;
        };
    } else if (args.lang == "generic-ksd") {
        CoreParams cp = args.core;
        const double p_open = args.generic_p_open;
        const std::string config = generic_params_json(cp, p_open).dump();
        const std::uint64_t seed = args.seed;
        make = [cp, p_open, config, seed](std::uint64_t id) {
            RandomStream s(SeedSpec{seed, id});
            CorpusRecord rec = gen_generic_ksd(s, cp, p_open);
            rec.metadata["config"] = config;
            return rec;
        };
    } else {
        throw std::invalid_argument("unknown language '" + args.lang + "'");
    }

    Output out(args.out);
    if (out.stream == nullptr) {
        std::cerr << "error: cannot open output file '" << args.out << "'\n";
        return kExitIo;
    }
    write_records(*out.stream, args.count, format, make);
    out.stream->flush();
    if (!*out.stream) {
        std::cerr << "error: write failed on '" << args.out << "'\n";
        return kExitIo;
    }
    std::cerr << "wrote " << args.count << " records\n";
    return kExitOk;
}

// --- validate ---

struct ValidateArgs {
    std::string in = "-";
    std::string report = "-";
    std::string format = "jsonl";
    std::string lang;  // required for plain input
    int k = 0;         // 0 = from config metadata, else inferred
    MpStructParams mp;
    std::string ablation = "none";
};

MpStructParams mpstruct_params_from_config(MpStructParams base, const std::string& config) {
    const nlohmann::json j = nlohmann::json::parse(config, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return base;
    base.p_wh = j.value("p_wh", base.p_wh);
    base.p_dp_neg_wh = j.value("p_dp_neg_wh", base.p_dp_neg_wh);
    base.p_sg = j.value("p_sg", base.p_sg);
    base.agreement_match_ratio = j.value("agreement_match_ratio", base.agreement_match_ratio);
    base.epp_on_t = j.value("epp_on_t", base.epp_on_t);
    base.strip_lexical = j.value("strip_lexical", base.strip_lexical);
    base.max_len = j.value("max_len", base.max_len);
    base.n_nouns = j.value("n_nouns", base.n_nouns);
    base.n_verbs = j.value("n_verbs", base.n_verbs);
    base.n_dets = j.value("n_dets", base.n_dets);
    base.trace_label_echo = j.value("trace_label_echo", base.trace_label_echo);
    if (j.contains("ablation")) base.ablation = ablation_from_string(j["ablation"].get<std::string>());
    return base;
}

int ksd_k_for_record(const CorpusRecord& rec, int k_flag) {
    if (k_flag > 0) return k_flag;
    if (auto it = rec.metadata.find("config"); it != rec.metadata.end()) {
        const nlohmann::json j = nlohmann::json::parse(it->second, nullptr, false);
        if (j.is_object() && j.contains("k") && j["k"].is_number_integer()) {
            return j["k"].get<int>();
        }
    }
    int k = 1;
    for (const Token& t : rec.sequence.tokens) {
        if (t.size() < 2 || (t[0] != '(' && t[0] != ')')) continue;
        try {
            k = std::max(k, std::stoi(t.substr(1)));
        } catch (const std::logic_error&) {
        }
    }
    return k;
}

ValidationReport validate_record(const CorpusRecord& rec, const ValidateArgs& args) {
    ValidationReport report;
    switch (rec.language_tag) {
        case LanguageTag::dyck1:
            if (!recognize_dyck1(rec.sequence)) {
                report.add("membership", -1, "not a balanced 1-Dyck word");
            }
            break;
        case LanguageTag::ksd: {
            const int k = ksd_k_for_record(rec, args.k);
            if (!recognize_shuffle_dyck(rec.sequence, k)) {
                report.add("membership", -1,
                           "not in " + std::to_string(k) + "-shuffle-Dyck");
            }
            break;
        }
        case LanguageTag::mpstruct:
        case LanguageTag::mpstruct_ablated: {
            MpStructParams mp = args.mp;
            mp.ablation = ablation_from_string(args.ablation);
            if (auto it = rec.metadata.find("config"); it != rec.metadata.end()) {
                mp = mpstruct_params_from_config(mp, it->second);
            } else if (auto ab = rec.metadata.find("ablation"); ab != rec.metadata.end()) {
                mp.ablation = ablation_from_string(ab->second);
            }
            report = validate_mpstruct(rec.sequence, mp);
            break;
        }
        case LanguageTag::core:
        case LanguageTag::generic_ksd:
            report = validate_core(rec.sequence);
            break;
        case LanguageTag::perturbed:
            throw std::invalid_argument("no validator for language tag 'perturbed'");
    }
    return report;
}

int run_validate(const ValidateArgs& args) {
    const CorpusFormat format = corpus_format_from_string(args.format);

    Input in(args.in);
    if (in.stream == nullptr) {
        std::cerr << "error: cannot open input file '" << args.in << "'\n";
        return kExitIo;
    }
    std::vector<CorpusRecord> corpus = parse_corpus(*in.stream, format);

    if (format == CorpusFormat::plain) {
        if (args.lang.empty()) {
            throw std::invalid_argument("plain input needs --lang to pick the validator");
        }
        std::string name = args.lang;
        std::replace(name.begin(), name.end(), '-', '_');
        const LanguageTag tag = language_tag_from_string(name);
        for (CorpusRecord& rec : corpus) rec.language_tag = tag;
    }

    Output report_out(args.report);
    if (report_out.stream == nullptr) {
        std::cerr << "error: cannot open report file '" << args.report << "'\n";
        return kExitIo;
    }

    std::size_t bad_records = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ValidationReport report = validate_record(corpus[i], args);
        nlohmann::json line;
        line["record"] = i;
        line["language_tag"] = to_string(corpus[i].language_tag);
        line["ok"] = report.ok();
        auto violations = nlohmann::json::array();
        for (const Violation& v : report.violations) {
            violations.push_back({{"rule", v.rule},
                                  {"token_index", v.token_index},
                                  {"message", v.message}});
        }
        line["violations"] = std::move(violations);
        line["not_applicable"] = report.not_applicable;
        *report_out.stream << line.dump() << '\n';
        if (!report.ok()) ++bad_records;
    }
    report_out.stream->flush();
    if (!*report_out.stream) return kExitIo;
    std::cerr << "validated " << corpus.size() << " records, " << bad_records
              << " with violations\n";
    return bad_records == 0 ? kExitOk : kExitViolations;
}

// --- perturb / jabberwocky ---

struct PerturbArgs {
    std::string transform;
    std::string in = "-";
    std::string out = "-";
    std::string format = "tsv";
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::size_t window = 21;
    HopOptions hop;
    std::size_t batch_sentences = 0;
};

int write_tagged(const PerturbArgs& args, const TaggedDocument& doc) {
    Output out(args.out);
    if (out.stream == nullptr) {
        std::cerr << "error: cannot open output file '" << args.out << "'\n";
        return kExitIo;
    }
    if (args.format == "tsv") {
        write_tagged_tsv(*out.stream, doc);
    } else {
        for (const auto& sentence : doc.sentences) {
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                if (i > 0) *out.stream << ' ';
                *out.stream << sentence[i].surface;
            }
            *out.stream << '\n';
        }
    }
    out.stream->flush();
    return *out.stream ? kExitOk : kExitIo;
}

int run_perturb(const PerturbArgs& args) {
    Input in(args.in);
    if (in.stream == nullptr) {
        std::cerr << "error: cannot open input file '" << args.in << "'\n";
        return kExitIo;
    }
    const TaggedDocument doc = read_tagged_tsv(*in.stream);

    TaggedDocument result;
    if (args.transform == "shuffle") {
        result = deterministic_shuffle(doc, args.window, args.seed);
    } else if (args.transform == "reverse") {
        result = full_reverse(doc);
    } else if (args.transform == "hop") {
        result = word_hop(doc, args.hop);
    } else {
        throw std::invalid_argument("unknown transform '" + args.transform + "'");
    }
    return write_tagged(args, result);
}

int run_jabberwocky(const PerturbArgs& args) {
    Input in(args.in);
    if (in.stream == nullptr) {
        std::cerr << "error: cannot open input file '" << args.in << "'\n";
        return kExitIo;
    }
    const TaggedDocument doc = read_tagged_tsv(*in.stream);
    RandomStream stream(SeedSpec{args.seed, args.stream_id});
    return write_tagged(args, jabberwocky(doc, stream, args.batch_sentences));
}

// --- metrics / ambiguity ---

struct MetricsArgs {
    std::string baseline;
    std::string candidate;
    std::string out = "-";
    std::uint64_t y1 = 0;
    double ppt_steps = 0.0;
    bool interpolate = false;
};

LossCurve load_curve(const std::string& path) {
    Input in(path);
    if (in.stream == nullptr) {
        throw std::ios_base::failure("cannot open loss log '" + path + "'");
    }
    if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
        return parse_loss_jsonl(*in.stream);
    }
    return parse_loss_csv(*in.stream);
}

int run_metrics(const MetricsArgs& args) {
    const LossCurve baseline = load_curve(args.baseline);
    const LossCurve candidate = load_curve(args.candidate);
    const double threshold = loss_at(baseline, args.y1);
    const std::optional<double> y2 = crossing_step(candidate, threshold, args.interpolate);

    nlohmann::json result;
    result["y1"] = args.y1;
    result["baseline_loss_at_y1"] = threshold;
    result["ppt_steps"] = args.ppt_steps;
    result["interpolated"] = args.interpolate;
    result["improved"] = y2.has_value();
    if (y2.has_value()) {
        result["y2"] = *y2;
        result["mrs"] = mrs(static_cast<double>(args.y1), *y2, args.ppt_steps);
        result["efficiency_gain"] =
            efficiency_gain(static_cast<double>(args.y1), *y2, args.ppt_steps);
    } else {
        result["y2"] = nullptr;
        result["mrs"] = nullptr;
        result["efficiency_gain"] = nullptr;
    }

    Output out(args.out);
    if (out.stream == nullptr) {
        std::cerr << "error: cannot open output file '" << args.out << "'\n";
        return kExitIo;
    }
    *out.stream << result.dump() << '\n';
    out.stream->flush();
    return *out.stream ? kExitOk : kExitIo;
}

struct AmbiguityArgs {
    std::string in = "-";
    std::string out = "-";
    std::string format = "jsonl";
};

int run_ambiguity(const AmbiguityArgs& args) {
    Input in(args.in);
    if (in.stream == nullptr) {
        std::cerr << "error: cannot open input file '" << args.in << "'\n";
        return kExitIo;
    }
    const std::vector<CorpusRecord> corpus =
        parse_corpus(*in.stream, corpus_format_from_string(args.format));

    Output out(args.out);
    if (out.stream == nullptr) {
        std::cerr << "error: cannot open output file '" << args.out << "'\n";
        return kExitIo;
    }

    double sum_counts = 0.0;
    std::size_t total_closes = 0;
    double sum_means = 0.0;
    std::size_t global_max = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const AmbiguityProfile profile = ambiguity_profile(corpus[i].sequence);
        nlohmann::json line;
        line["record"] = i;
        line["closes"] = profile.per_close_counts.size();
        line["mean"] = profile.mean;
        line["max"] = profile.max;
        line["partial"] = profile.partial;
        if (profile.partial) line["violation_index"] = profile.violation_index;
        line["definition"] = profile.definition;
        *out.stream << line.dump() << '\n';

        for (const auto& [idx, count] : profile.per_close_counts) {
            sum_counts += static_cast<double>(count);
        }
        total_closes += profile.per_close_counts.size();
        sum_means += profile.mean;
        global_max = std::max(global_max, profile.max);
    }
    nlohmann::json agg;
    agg["aggregate"] = true;
    agg["records"] = corpus.size();
    agg["pooled_mean"] = total_closes == 0 ? 0.0 : sum_counts / static_cast<double>(total_closes);
    agg["mean_of_means"] =
        corpus.empty() ? 0.0 : sum_means / static_cast<double>(corpus.size());
    agg["max"] = global_max;
    *out.stream << agg.dump() << '\n';
    out.stream->flush();
    return *out.stream ? kExitOk : kExitIo;
}

int run(int argc, char** argv) {
    CLI::App app{"corpus generation and analysis for bracket-structured synthetic languages"};
    app.require_subcommand(1);
    const std::uint64_t seed_default = env_default_seed();

    GenerateArgs gen;
    gen.seed = seed_default;
    gen.dyck.k = 64;  // the ksd headline configuration; dyck1 pins k back to 1
    CLI::App* cmd_gen = app.add_subcommand("generate", "sample a corpus");
    cmd_gen->add_option("--lang", gen.lang, "language to sample")
        ->required()
        ->check(CLI::IsMember({"dyck1", "ksd", "mpstruct", "core", "generic-ksd"}));
    cmd_gen->add_option("--seed", gen.seed, "master seed (STRUCTLANG_SEED overrides the default)");
    cmd_gen->add_option("--count", gen.count, "records to emit, stream ids 0..count-1")
        ->check(CLI::PositiveNumber);
    cmd_gen->add_option("--out", gen.out, "output path, - for stdout");
    cmd_gen->add_option("--format", gen.format)->check(CLI::IsMember({"plain", "jsonl"}));
    cmd_gen->add_option("--k", gen.dyck.k, "bracket types for ksd");
    cmd_gen->add_option("--len", gen.dyck.target_len, "dyck1/ksd sequence length");
    cmd_gen->add_option("--p-open", gen.dyck.p_open, "open probability for dyck1/ksd");
    cmd_gen->add_option("--max-depth", gen.dyck.max_depth, "nesting bound, 0 = unbounded");
    cmd_gen->add_option("--p-wh", gen.p_wh, "wh=+ clause probability");
    cmd_gen->add_option("--p-dp-neg-wh", gen.mp.p_dp_neg_wh);
    cmd_gen->add_option("--p-sg", gen.mp.p_sg);
    cmd_gen->add_option("--agree-match", gen.mp.agreement_match_ratio);
    cmd_gen->add_flag("--epp,!--no-epp", gen.mp.epp_on_t);
    cmd_gen->add_flag("--strip-lexical,!--no-strip-lexical", gen.mp.strip_lexical);
    cmd_gen->add_flag("--trace-echo,!--no-trace-echo", gen.mp.trace_label_echo);
    cmd_gen->add_option("--max-len", gen.mp.max_len);
    cmd_gen->add_option("--ablation", gen.ablation)
        ->check(CLI::IsMember({"none", "no_merge", "no_move", "no_agree"}));
    cmd_gen->add_option("--n-nouns", gen.mp.n_nouns);
    cmd_gen->add_option("--n-verbs", gen.mp.n_verbs);
    cmd_gen->add_option("--n-dets", gen.mp.n_dets);
    cmd_gen->add_option("--L", gen.core.target_len, "core/generic-ksd corpus length");
    cmd_gen->add_option("--p-agr-a", gen.core.p_agr_a);
    cmd_gen->add_option("--k-struct", gen.core.k_struct);
    cmd_gen->add_option("--k-dep", gen.core.k_dep);
    cmd_gen->add_flag("--shuffle-vp,!--no-shuffle-vp", gen.core.shuffle_vp);
    cmd_gen->add_flag("--trim-to-L", gen.core.trim_to_l);
    cmd_gen->add_option("--generic-p-open", gen.generic_p_open,
                        "open probability for generic-ksd");

    ValidateArgs val;
    CLI::App* cmd_val = app.add_subcommand("validate", "check every record of a corpus");
    cmd_val->add_option("--in", val.in, "corpus path, - for stdin");
    cmd_val->add_option("--report", val.report, "report jsonl path, - for stdout");
    cmd_val->add_option("--format", val.format)->check(CLI::IsMember({"plain", "jsonl"}));
    cmd_val->add_option("--lang", val.lang, "language for plain input")
        ->check(CLI::IsMember({"dyck1", "ksd", "mpstruct", "core", "generic-ksd"}));
    cmd_val->add_option("--k", val.k, "ksd bracket types, 0 = from record config");
    cmd_val->add_option("--agree-match", val.mp.agreement_match_ratio);
    cmd_val->add_flag("--epp,!--no-epp", val.mp.epp_on_t);
    cmd_val->add_flag("--strip-lexical,!--no-strip-lexical", val.mp.strip_lexical);
    cmd_val->add_flag("--trace-echo,!--no-trace-echo", val.mp.trace_label_echo);
    cmd_val->add_option("--ablation", val.ablation)
        ->check(CLI::IsMember({"none", "no_merge", "no_move", "no_agree"}));
    cmd_val->add_option("--n-nouns", val.mp.n_nouns);
    cmd_val->add_option("--n-verbs", val.mp.n_verbs);
    cmd_val->add_option("--n-dets", val.mp.n_dets);

    PerturbArgs pert;
    pert.seed = seed_default;
    CLI::App* cmd_pert = app.add_subcommand("perturb", "apply an impossible-language transform");
    cmd_pert->add_option("--transform", pert.transform)
        ->required()
        ->check(CLI::IsMember({"shuffle", "reverse", "hop"}));
    cmd_pert->add_option("--in", pert.in, "tagged TSV path, - for stdin");
    cmd_pert->add_option("--out", pert.out);
    cmd_pert->add_option("--format", pert.format)->check(CLI::IsMember({"tsv", "plain"}));
    cmd_pert->add_option("--seed", pert.seed);
    cmd_pert->add_option("--window", pert.window, "shuffle window size");
    cmd_pert->add_option("--distance", pert.hop.distance, "hop word distance");
    cmd_pert->add_option("--marker", pert.hop.marker, "hop marker surface");
    cmd_pert->add_flag("--count-punctuation", pert.hop.count_punctuation);
    cmd_pert->add_flag("!--no-clamp", pert.hop.clamp_to_end, "drop the marker when the sentence ends early");

    PerturbArgs jab;
    jab.seed = seed_default;
    CLI::App* cmd_jab = app.add_subcommand("jabberwocky", "tag-wise content word shuffling");
    cmd_jab->add_option("--in", jab.in, "tagged TSV path, - for stdin");
    cmd_jab->add_option("--out", jab.out);
    cmd_jab->add_option("--format", jab.format)->check(CLI::IsMember({"tsv", "plain"}));
    cmd_jab->add_option("--seed", jab.seed);
    cmd_jab->add_option("--stream", jab.stream_id);
    cmd_jab->add_option("--batch-sentences", jab.batch_sentences,
                        "pool size in sentences, 0 = whole document");

    MetricsArgs met;
    CLI::App* cmd_met = app.add_subcommand("metrics", "training-efficiency comparison");
    cmd_met->add_option("--baseline", met.baseline, "baseline loss log (.csv or .jsonl)")
        ->required();
    cmd_met->add_option("--candidate", met.candidate, "candidate loss log")->required();
    cmd_met->add_option("--y1", met.y1, "reference step on the baseline")->required();
    cmd_met->add_option("--ppt-steps", met.ppt_steps, "substituted step count x")->required();
    cmd_met->add_flag("--interpolate", met.interpolate, "interpolate the crossing step");
    cmd_met->add_option("--out", met.out);

    AmbiguityArgs amb;
    CLI::App* cmd_amb = app.add_subcommand("ambiguity", "dependency ambiguity profile");
    cmd_amb->add_option("--in", amb.in, "corpus path, - for stdin");
    cmd_amb->add_option("--out", amb.out);
    cmd_amb->add_option("--format", amb.format)->check(CLI::IsMember({"plain", "jsonl"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_val->parsed()) return run_validate(val);
    if (cmd_pert->parsed()) return run_perturb(pert);
    if (cmd_jab->parsed()) return run_jabberwocky(jab);
    if (cmd_met->parsed()) return run_metrics(met);
    if (cmd_amb->parsed()) return run_ambiguity(amb);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
