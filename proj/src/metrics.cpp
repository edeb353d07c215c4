#include "structlang/metrics.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "structlang/corpus.hpp"

namespace structlang {

namespace {

void append_point(LossCurve& curve, std::uint64_t step, double loss, std::size_t lineno) {
    if (!(loss > 0.0)) {
        throw parse_error("line " + std::to_string(lineno) + ": loss must be positive");
    }
    if (!curve.points.empty() && step <= curve.points.back().step) {
        throw parse_error("line " + std::to_string(lineno) +
                          ": steps must be strictly increasing");
    }
    curve.points.push_back(LossPoint{step, loss});
}

void require_nonempty(const LossCurve& curve) {
    if (curve.points.empty()) throw parse_error("loss log holds no points");
}

}  // namespace

LossCurve parse_loss_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw parse_error("loss log holds no points");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "step,loss") throw parse_error("line 1: expected header 'step,loss'");

    LossCurve curve;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw parse_error("line " + std::to_string(lineno) + ": expected step,loss");
        }
        std::uint64_t step = 0;
        double loss = 0.0;
        try {
            std::size_t used = 0;
            step = std::stoull(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("step");
            const std::string loss_text = line.substr(comma + 1);
            loss = std::stod(loss_text, &used);
            if (used != loss_text.size()) throw std::invalid_argument("loss");
        } catch (const std::logic_error&) {
            throw parse_error("line " + std::to_string(lineno) + ": malformed number");
        }
        append_point(curve, step, loss, lineno);
    }
    require_nonempty(curve);
    return curve;
}

LossCurve parse_loss_jsonl(std::istream& in) {
    LossCurve curve;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("step") ||
            !obj.contains("loss") || !obj["step"].is_number_unsigned() ||
            !obj["loss"].is_number()) {
            throw parse_error("line " + std::to_string(lineno) +
                              ": expected {\"step\": .., \"loss\": ..}");
        }
        append_point(curve, obj["step"].get<std::uint64_t>(), obj["loss"].get<double>(), lineno);
    }
    require_nonempty(curve);
    return curve;
}

double loss_at(const LossCurve& curve, std::uint64_t step) {
    const auto it = std::lower_bound(
        curve.points.begin(), curve.points.end(), step,
        [](const LossPoint& p, std::uint64_t s) { return p.step < s; });
    if (it == curve.points.end() || it->step != step) {
        throw std::invalid_argument("step " + std::to_string(step) + " not logged");
    }
    return it->loss;
}

std::optional<double> crossing_step(const LossCurve& curve, double threshold, bool interpolate) {
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (curve.points[i].loss > threshold) continue;
        if (!interpolate || i == 0) return static_cast<double>(curve.points[i].step);
        const LossPoint& a = curve.points[i - 1];
        const LossPoint& b = curve.points[i];
        const double frac = (a.loss - threshold) / (a.loss - b.loss);
        return static_cast<double>(a.step) + frac * static_cast<double>(b.step - a.step);
    }
    return std::nullopt;
}

double mrs(double y1, double y2, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("mrs requires x > 0");
    return (y1 - y2) / x;
}

double efficiency_gain(double y1, double y2, double x) {
    if (!(y1 > 0.0)) throw std::invalid_argument("efficiency_gain requires y1 > 0");
    if (x < 0.0) throw std::invalid_argument("efficiency_gain requires x >= 0");
    return 1.0 - (y2 + x) / y1;
}

double loss_delta(double l_variant, double l_nl) { return l_variant - l_nl; }

AmbiguityProfile ambiguity_profile(const TokenSequence& seq) {
    AmbiguityProfile profile;
    std::map<std::string, std::vector<std::size_t>> open_index;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        const Token& t = seq.tokens[i];
        if (t.empty() || (t[0] != '(' && t[0] != ')')) continue;
        const std::string type = t.substr(1);
        std::vector<std::size_t>& opens = open_index[type];
        if (t[0] == '(') {
            opens.push_back(i);
            continue;
        }
        if (opens.empty()) {
            profile.partial = true;
            profile.violation_index = static_cast<std::ptrdiff_t>(i);
            break;
        }
        profile.per_close_counts.emplace_back(i, opens.size());
        opens.pop_back();
    }
    if (!profile.partial) {
        std::size_t dangling = std::numeric_limits<std::size_t>::max();
        for (const auto& [type, indices] : open_index) {
            if (!indices.empty()) dangling = std::min(dangling, indices.front());
        }
        if (dangling != std::numeric_limits<std::size_t>::max()) {
            profile.partial = true;
            profile.violation_index = static_cast<std::ptrdiff_t>(dangling);
        }
    }
    double sum = 0.0;
    for (const auto& [idx, count] : profile.per_close_counts) {
        sum += static_cast<double>(count);
        profile.max = std::max(profile.max, count);
    }
    if (!profile.per_close_counts.empty()) {
        profile.mean = sum / static_cast<double>(profile.per_close_counts.size());
    }
    return profile;
}

}  // namespace structlang
