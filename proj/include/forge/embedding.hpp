#pragma once
#include <string>
#include <vector>

#include "forge/labeling.hpp"

namespace forge {

// Block r colors the graph joining elements at G_r-distance in (0, r];
// colors[r-1][id] fits in width[r-1] bits (palette: max degree + 1).
struct ProperColoring {
    int r_max = 0;
    std::vector<int> width;
    std::vector<int64_t> palette, used;
    std::vector<std::vector<uint32_t>> colors;

    std::string bits(Id id) const;  // blocks r = 1 .. r_max, most significant bit first
    nlohmann::ordered_json summary() const;
};

ProperColoring proper_coloring(const Window& w, int r_max);
// every edge of every block graph, exhaustively
Certificate check_proper_coloring(const Window& w, const ProperColoring& pc);

std::string interleave(const std::string& a, const std::string& b);
std::pair<std::string, std::string> deinterleave(const std::string& s);

// proper bits interleaved with the element's index bits, both padded to one width
std::string separating_bits(const Window& w, const ProperColoring& pc, Id id);

// Psi on the ball around center: gamma -> bits of gamma * center
nlohmann::ordered_json psi_pattern(const Window& w, const ProperColoring& pc, Id center, int64_t radius, int level);

// gamma * p and p carry different depth-S truncations for all p in core and
// 0 < |gamma|_{G_r} <= r
Certificate bernoulli_freeness_witness(const Labeling& lab, int r, int S);

}  // namespace forge
