#include "structlang/validation.hpp"

#include <json.hpp>

namespace structlang {

std::string ValidationReport::to_jsonl() const {
    std::string out;
    for (const Violation& v : violations) {
        nlohmann::json j;
        j["rule"] = v.rule;
        j["token_index"] = v.token_index;
        j["message"] = v.message;
        out += j.dump();
        out += '\n';
    }
    for (const std::string& note : not_applicable) {
        nlohmann::json j;
        j["rule"] = "not_applicable";
        j["token_index"] = -1;
        j["message"] = note;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace structlang
