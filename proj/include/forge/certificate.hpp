#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace forge {

struct Certificate {
    std::string name;
    int stage = 0;
    int64_t core = -1;
    bool pass = true;
    std::vector<std::string> witnesses;
    nlohmann::ordered_json measured = nlohmann::ordered_json::object();

    void fail(std::string witness) {
        pass = false;
        if (witnesses.size() < 16) witnesses.push_back(std::move(witness));
    }
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["stage"] = stage;
        j["core"] = core;
        j["pass"] = pass;
        j["witnesses"] = witnesses;
        j["measured"] = measured;
        return j;
    }
};

}  // namespace forge
