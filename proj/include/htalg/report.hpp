#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace htalg {

struct CheckReport {
    std::string check;
    long window = 0;
    long samples = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }

    nlohmann::json to_json() const {
        return {{"check", check}, {"window", window}, {"samples", samples}, {"violations", violations}};
    }
};

}  // namespace htalg
