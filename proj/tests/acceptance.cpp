// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances and time limits are pinned here, not configurable.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#include <unistd.h>
#endif

#include "structlang/corpus.hpp"
#include "structlang/dyck.hpp"
#include "structlang/metrics.hpp"
#include "structlang/mpcore.hpp"
#include "structlang/mpstruct.hpp"
#include "structlang/perturb.hpp"
#include "structlang/random.hpp"
#include "tagged_fixture.hpp"

namespace fs = std::filesystem;
using namespace structlang;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void enforce_limit(Outcome& result, double elapsed, double limit) {
    if (elapsed > limit) {
        result.fail("took " + std::to_string(elapsed) + "s, limit " + std::to_string(limit) + "s");
    }
}

// --- criterion 1: efficiency metric reproduction ---

Outcome criterion_metrics() {
    Outcome result;
    const auto start = Clock::now();
    if (mrs(25000, 15755, 500) != 18.49) result.fail("mrs != 18.49");
    if (std::abs(efficiency_gain(25000, 15755, 500) - 0.35) > 0.005) {
        result.fail("efficiency gain outside 0.35 +/- 0.005");
    }
    enforce_limit(result, seconds_since(start), 1.0);
    return result;
}

// --- criterion 2: reference surface strings ---

Outcome criterion_goldens() {
    Outcome result;
    const auto start = Clock::now();

    MpStructParams forced;
    forced.p_wh = 0.0;
    forced.p_sg = 0.0;
    forced.p_dp_neg_wh = 0.0;

    const std::string kFullRow =
        "[ CP [ C ] [ [ TP [ [ DP[Num:pl] [ D ] [ N ] ] ] [ T(+EPP,uNum:pl) ] "
        "[ [ VP V [ [ DP[Num:pl] [ D ] [ N ] ] ] [ TR[DP] ] ] ] ] ] ]";

    for (const SeedSpec seed : {SeedSpec{123, 0}, SeedSpec{999, 77}, SeedSpec{0, 0}}) {
        RandomStream s(seed);
        if (join_tokens(gen_mpstruct(s, forced).sequence) != kFullRow) {
            result.fail("full row mismatch under forced draws");
            break;
        }
    }

    const auto render = [&forced](Ablation a, SeedSpec seed) {
        MpStructParams p = forced;
        p.ablation = a;
        RandomStream s(seed);
        return join_tokens(gen_mpstruct(s, p).sequence);
    };

    const std::string full = render(Ablation::none, SeedSpec{42, 0});
    const std::string no_agree = render(Ablation::no_agree, SeedSpec{42, 0});
    const std::string no_move = render(Ablation::no_move, SeedSpec{42, 0});
    const std::string no_merge = render(Ablation::no_merge, SeedSpec{42, 0});

    if (no_agree.find("uNum:u") == std::string::npos) result.fail("no_agree misses uNum:u");
    if (full.find("uNum:u") != std::string::npos) result.fail("full row has uNum:u");
    if (no_move.find("TR[") != std::string::npos) result.fail("no_move keeps traces");
    if (full.find("TR[") == std::string::npos) result.fail("full row misses its trace");
    const auto brackets = [](const std::string& s) {
        return std::count(s.begin(), s.end(), '[');
    };
    if (brackets(no_merge) >= brackets(full) / 2) result.fail("no_merge bracket profile not flat");

    enforce_limit(result, seconds_since(start), 1.0);
    return result;
}

// --- criterion 3: validator soundness and fault recall ---

Outcome criterion_validators() {
    Outcome result;
    const auto start = Clock::now();
    constexpr std::uint64_t kClean = 10000;

    {
        MpStructParams mp;
        for (std::uint64_t i = 0; i < kClean; ++i) {
            RandomStream s(SeedSpec{101, i});
            const CorpusRecord rec = gen_mpstruct(s, mp);
            if (!validate_mpstruct(rec.sequence, mp).ok()) {
                result.fail("clean mpstruct record flagged at stream " + std::to_string(i));
                break;
            }
        }
    }
    {
        CoreParams cp;
        for (std::uint64_t i = 0; i < kClean; ++i) {
            RandomStream s(SeedSpec{102, i});
            if (!validate_core(gen_core_corpus(s, cp).sequence).ok()) {
                result.fail("clean core record flagged at stream " + std::to_string(i));
                break;
            }
        }
    }
    {
        DyckParams dp;
        for (std::uint64_t i = 0; i < kClean; ++i) {
            RandomStream s(SeedSpec{103, i});
            if (!recognize_dyck1(gen_dyck1(s, dp))) {
                result.fail("clean dyck1 record rejected at stream " + std::to_string(i));
                break;
            }
        }
    }
    {
        DyckParams dp;
        dp.k = 64;
        for (std::uint64_t i = 0; i < kClean; ++i) {
            RandomStream s(SeedSpec{104, i});
            if (!recognize_shuffle_dyck(gen_shuffle_dyck(s, dp), dp.k)) {
                result.fail("clean ksd record rejected at stream " + std::to_string(i));
                break;
            }
        }
    }
    {
        CoreParams cp;
        for (std::uint64_t i = 0; i < kClean; ++i) {
            RandomStream s(SeedSpec{105, i});
            if (!validate_core(gen_generic_ksd(s, cp, 0.49).sequence).ok()) {
                result.fail("clean generic record flagged at stream " + std::to_string(i));
                break;
            }
        }
    }

    constexpr int kTrials = 1000;
    const auto report_recall = [&result](const std::string& name, int detected) {
        if (detected < kTrials * 99 / 100) {
            result.fail(name + " recall " + std::to_string(detected) + "/1000");
        }
    };

    {
        // Deleted bracket in a core corpus.
        CoreParams cp;
        cp.target_len = 128;
        int detected = 0;
        for (std::uint64_t i = 0; i < kTrials; ++i) {
            RandomStream s(SeedSpec{201, i});
            TokenSequence seq = gen_core_corpus(s, cp).sequence;
            std::vector<std::size_t> brackets;
            for (std::size_t t = 0; t < seq.size(); ++t) {
                const char c = seq.tokens[t][0];
                if (c == '[' || c == ']' || c == '(' || c == ')') brackets.push_back(t);
            }
            const std::size_t victim = brackets[s.uniform_below(brackets.size())];
            seq.tokens.erase(seq.tokens.begin() + static_cast<std::ptrdiff_t>(victim));
            if (!validate_core(seq).ok()) ++detected;
        }
        report_recall("deleted bracket", detected);
    }
    {
        // Flipped agreement value on the T head.
        MpStructParams mp;
        int detected = 0;
        for (std::uint64_t i = 0; i < kTrials; ++i) {
            RandomStream s(SeedSpec{202, i});
            TokenSequence seq = gen_mpstruct(s, mp).sequence;
            for (Token& t : seq.tokens) {
                if (t.rfind("T(", 0) != 0) continue;
                const auto at = t.find("uNum:");
                t.replace(at + 5, 2, t.compare(at + 5, 2, "sg") == 0 ? "pl" : "sg");
                break;
            }
            if (!validate_mpstruct(seq, mp).ok()) ++detected;
        }
        report_recall("flipped agreement", detected);
    }
    {
        // Orphaned trace: a wh trace with no filler in Spec-CP.
        MpStructParams mp;
        mp.p_wh = 0.0;
        int detected = 0;
        for (std::uint64_t i = 0; i < kTrials; ++i) {
            RandomStream s(SeedSpec{203, i});
            TokenSequence seq = gen_mpstruct(s, mp).sequence;
            for (Token& t : seq.tokens) {
                if (t.rfind("TR[", 0) == 0) {
                    t = "TR[wh]";
                    break;
                }
            }
            if (!validate_mpstruct(seq, mp).ok()) ++detected;
        }
        report_recall("orphaned trace", detected);
    }
    {
        // Broken landmark adjacency: a bracket squeezed after the landmark.
        CoreParams cp;
        cp.target_len = 128;
        int detected = 0;
        for (std::uint64_t i = 0; i < kTrials; ++i) {
            RandomStream s(SeedSpec{204, i});
            TokenSequence seq = gen_core_corpus(s, cp).sequence;
            std::vector<std::size_t> landmarks;
            for (std::size_t t = 0; t < seq.size(); ++t) {
                if (seq.tokens[t].rfind("H_", 0) == 0) landmarks.push_back(t);
            }
            const std::size_t victim = landmarks[s.uniform_below(landmarks.size())];
            seq.tokens.insert(seq.tokens.begin() + static_cast<std::ptrdiff_t>(victim) + 1, "[0");
            if (!validate_core(seq).ok()) ++detected;
        }
        report_recall("broken adjacency", detected);
    }

    enforce_limit(result, seconds_since(start), 120.0);
    return result;
}

// --- criterion 4: recognizer vs enumeration, exhaustively ---

Outcome criterion_oracle() {
    Outcome result;
    const auto start = Clock::now();
    for (int k = 1; k <= 2; ++k) {
        const std::set<TokenSequence> language = enumerate_shuffle_dyck(k, 8);
        std::vector<Token> alphabet;
        for (int i = 1; i <= k; ++i) {
            alphabet.push_back("(" + std::to_string(i));
            alphabet.push_back(")" + std::to_string(i));
        }
        std::size_t accepted = 0;
        std::vector<std::size_t> digits;
        for (int len = 0; len <= 8; ++len) {
            digits.assign(static_cast<std::size_t>(len), 0);
            while (true) {
                TokenSequence seq;
                for (const std::size_t d : digits) seq.tokens.push_back(alphabet[d]);
                const bool recognized = recognize_shuffle_dyck(seq, k);
                if (recognized) ++accepted;
                if (recognized != (language.count(seq) > 0)) {
                    result.fail("oracle mismatch at k=" + std::to_string(k) + " on '" +
                                join_tokens(seq) + "'");
                    return result;
                }
                // Next string in base |alphabet|.
                std::size_t pos = 0;
                while (pos < digits.size() && ++digits[pos] == alphabet.size()) {
                    digits[pos] = 0;
                    ++pos;
                }
                if (pos == digits.size()) break;
            }
        }
        if (accepted != language.size()) {
            result.fail("acceptance count " + std::to_string(accepted) + " != enumerated " +
                        std::to_string(language.size()) + " at k=" + std::to_string(k));
        }
    }
    enforce_limit(result, seconds_since(start), 60.0);
    return result;
}

// --- criterion 5: core vs generic ambiguity contrast ---

Outcome criterion_contrast() {
    Outcome result;
    const auto start = Clock::now();
    constexpr std::uint64_t kPairs = 1000;
    CoreParams cp;  // L=1024, k_struct=1, k_dep=4
    double core_mean = 0.0;
    double generic_mean = 0.0;
    for (std::uint64_t i = 0; i < kPairs; ++i) {
        RandomStream a(SeedSpec{301, i});
        const CorpusRecord core = gen_core_corpus(a, cp);
        const ValidationReport report = validate_core(core.sequence);
        if (!report.ok()) {
            result.fail("core corpus " + std::to_string(i) + " has violations");
            break;
        }
        const AmbiguityProfile cap = ambiguity_profile(core.sequence);
        if (cap.partial) {
            result.fail("core profile partial at " + std::to_string(i));
            break;
        }
        core_mean += cap.mean;

        RandomStream b(SeedSpec{302, i});
        const AmbiguityProfile gap = ambiguity_profile(gen_generic_ksd(b, cp, 0.49).sequence);
        if (gap.partial) {
            result.fail("generic profile partial at " + std::to_string(i));
            break;
        }
        generic_mean += gap.mean;
    }
    core_mean /= static_cast<double>(kPairs);
    generic_mean /= static_cast<double>(kPairs);
    if (result.pass && core_mean > generic_mean) {
        result.fail("core mean exceeds generic mean");
    }
    {
        char buffer[96];
        std::snprintf(buffer, sizeof buffer, "core mean %.4f vs generic mean %.4f", core_mean,
                      generic_mean);
        if (!result.detail.empty()) result.detail += "; ";
        result.detail += buffer;
    }
    enforce_limit(result, seconds_since(start), 300.0);
    return result;
}

// --- criterion 6: perturbation laws ---

Outcome criterion_perturbations() {
    Outcome result;
    const auto start = Clock::now();
    constexpr std::uint64_t kDocs = 1000;
    const auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    for (std::uint64_t i = 0; i < kDocs && result.pass; ++i) {
        RandomStream gen(SeedSpec{401, i});
        const TaggedDocument doc = testing::make_random_doc(gen);

        if (full_reverse(full_reverse(doc)) != doc) {
            result.fail("reverse involution broke at doc " + std::to_string(i));
        }

        if (deterministic_shuffle(doc, 1, i) != doc) {
            result.fail("shuffle s=1 is not the identity at doc " + std::to_string(i));
        }
        const TaggedDocument shuffled = deterministic_shuffle(doc, 21, i);
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
            const auto& before = doc.sentences[s];
            const auto& after = shuffled.sentences[s];
            if (before.size() != after.size()) {
                result.fail("shuffle changed sentence length");
                break;
            }
            for (std::size_t lo = 0; lo < before.size(); lo += 21) {
                const std::size_t hi = std::min(before.size(), lo + 21);
                std::multiset<std::string> a, b;
                for (std::size_t t = lo; t < hi; ++t) {
                    a.insert(before[t].surface);
                    b.insert(after[t].surface);
                }
                if (a != b) {
                    result.fail("shuffle window multiset changed");
                    break;
                }
            }
        }

        const TaggedDocument hopped = word_hop(doc);
        std::size_t verbs = 0, markers = 0;
        for (const auto& sentence : doc.sentences) {
            for (const auto& t : sentence) verbs += t.coarse_pos == "VERB" ? 1 : 0;
        }
        for (const auto& sentence : hopped.sentences) {
            for (const auto& t : sentence) markers += t.coarse_pos == "MARKER" ? 1 : 0;
        }
        if (markers != verbs) result.fail("hop marker count != verb count");
        if (strip_markers(hopped) != doc) result.fail("hop is not invertible");

        RandomStream jw_stream(SeedSpec{402, i});
        const TaggedDocument jw = jabberwocky(doc, jw_stream);
        std::map<std::string, std::multiset<std::string>> pools_before, pools_after;
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
            if (jw.sentences[s].size() != doc.sentences[s].size()) {
                result.fail("jabberwocky changed token count");
                break;
            }
            for (std::size_t t = 0; t < doc.sentences[s].size(); ++t) {
                const TaggedToken& was = doc.sentences[s][t];
                const TaggedToken& now = jw.sentences[s][t];
                if (!is_content_pos(was.coarse_pos)) {
                    if (now != was) result.fail("jabberwocky touched a non-content token");
                    continue;
                }
                pools_before[was.fine_pos].insert(lower(was.surface));
                pools_after[now.fine_pos].insert(lower(now.surface));
                if (now.fine_pos != was.fine_pos) result.fail("jabberwocky changed a fine tag");
                const bool cap_now = std::isupper(static_cast<unsigned char>(now.surface[0])) != 0;
                if (cap_now != was.is_capitalized) result.fail("jabberwocky broke casing");
            }
        }
        if (pools_before != pools_after) result.fail("jabberwocky changed a content pool");
    }
    enforce_limit(result, seconds_since(start), 120.0);
    return result;
}

// --- criterion 7: byte-identical regeneration through the CLI ---

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Outcome criterion_determinism() {
    Outcome result;
    const auto start = Clock::now();
    const fs::path dir = fs::temp_directory_path() /
                         ("structlang_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"dyck1", "--lang dyck1 --len 256"},
        {"ksd", "--lang ksd --k 64 --len 256"},
        {"mpstruct", "--lang mpstruct"},
        {"core", "--lang core --L 256"},
        {"generic", "--lang generic-ksd --L 256"},
    };
    for (const auto& [name, flags] : runs) {
        const fs::path a = dir / (name + "_a.jsonl");
        const fs::path b = dir / (name + "_b.jsonl");
        for (const fs::path& out : {a, b}) {
            const std::string cmd = std::string("\"") + STRUCTLANG_CLI_PATH + "\" generate " +
                                    flags + " --count 1000 --seed 13 --out " + out.string() +
                                    " 2>/dev/null";
            const int status = std::system(cmd.c_str());
#ifndef _WIN32
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                result.fail(name + " generation failed");
                break;
            }
#else
            if (status != 0) {
                result.fail(name + " generation failed");
                break;
            }
#endif
        }
        if (!result.pass) break;
        const std::string bytes = slurp(a);
        if (bytes.empty() || bytes != slurp(b)) {
            result.fail(name + " runs are not byte-identical");
        }
    }

    std::error_code ec;
    fs::remove_all(dir, ec);
    enforce_limit(result, seconds_since(start), 300.0);
    return result;
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        Outcome (*check)();
    };
    const Entry entries[] = {
        {"1. efficiency metric reproduction", criterion_metrics},
        {"2. reference surface strings", criterion_goldens},
        {"3. validator soundness and fault recall", criterion_validators},
        {"4. recognizer matches enumeration", criterion_oracle},
        {"5. core vs generic ambiguity contrast", criterion_contrast},
        {"6. perturbation laws", criterion_perturbations},
        {"7. byte-identical regeneration", criterion_determinism},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        const auto start = Clock::now();
        Outcome result = entry.check();
        const double elapsed = seconds_since(start);
        std::printf("[%s] %s (%.2fs)%s%s\n", result.pass ? "PASS" : "FAIL", entry.label, elapsed,
                    result.detail.empty() ? "" : " - ", result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
