#pragma once
#include <vector>

#include "forge/certificate.hpp"
#include "forge/group.hpp"

namespace forge {

struct MarkerSet {
    std::vector<Id> elements;  // ascending id (shortlex)
    int64_t r = 0;
    int level = 1;
    int64_t core = 0;  // maximality is asserted for candidates at depth <= core

    nlohmann::json to_json(const Window& w) const;
};

// Shortlex greedy: seed is taken first (and must already be r-sparse), then
// every candidate of S \ forbidden with no chosen point within distance r.
MarkerSet greedy_maximal_sparse(const Window& w, const std::vector<Id>& S, int64_t r, int level,
                                const std::vector<Id>& forbidden = {}, int64_t interior = -1,
                                const std::vector<Id>& seed = {});

// everything in the window, ascending
std::vector<Id> all_elements(const Window& w);

Certificate verify_sparse(const Window& w, const std::vector<Id>& T, int64_t r, int level);
// no x in S \ forbidden with depth <= core can be added to T
Certificate verify_maximal(const Window& w, const std::vector<Id>& T, const std::vector<Id>& S,
                           int64_t r, int level, int64_t core, const std::vector<Id>& forbidden = {});
Certificate verify_net(const Window& w, const std::vector<Id>& T, int64_t s, int level, int64_t core);

inline int64_t net_radius(int64_t s, int64_t r) { return s + r; }

}  // namespace forge
