#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structlang/token.hpp"

namespace structlang {

struct LossPoint {
    std::uint64_t step = 0;
    double loss = 0.0;

    bool operator==(const LossPoint&) const = default;
};

// Training-loss log. Steps strictly increasing, losses positive, at least
// one point; the parsers enforce all three.
struct LossCurve {
    std::vector<LossPoint> points;

    bool operator==(const LossCurve&) const = default;
};

// CSV with a literal `step,loss` header line.
LossCurve parse_loss_csv(std::istream& in);
// One {"step": .., "loss": ..} object per line.
LossCurve parse_loss_jsonl(std::istream& in);

// Loss at an exactly logged step; invalid_argument otherwise.
double loss_at(const LossCurve& curve, std::uint64_t step);

// First step at which loss reaches `threshold`. Without interpolation this
// is the smallest logged step with loss <= threshold; with it, the linear
// crossing between the bracketing logged points. nullopt if never reached.
std::optional<double> crossing_step(const LossCurve& curve, double threshold,
                                    bool interpolate = false);

// Pretraining steps saved per substituted step: (y1 - y2) / x, x > 0.
double mrs(double y1, double y2, double x);

// Fractional reduction in total steps to matched loss: 1 - (y2 + x) / y1.
double efficiency_gain(double y1, double y2, double x);

// l_variant - l_nl. Positive means the variant trained worse.
double loss_delta(double l_variant, double l_nl);

// Candidate-antecedent counts for typed dependency pairs: at every close,
// how many same-type opens are still unmatched (the close's own included).
// Structural brackets, landmarks and any non-paren tokens are ignored.
struct AmbiguityProfile {
    std::vector<std::pair<std::size_t, std::size_t>> per_close_counts;  // (token index, count)
    double mean = 0.0;
    std::size_t max = 0;
    bool partial = false;              // some projection was unbalanced
    std::ptrdiff_t violation_index = -1;
    std::string definition = "open-count-at-close/v1";
};

AmbiguityProfile ambiguity_profile(const TokenSequence& seq);

}  // namespace structlang
