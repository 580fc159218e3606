#pragma once
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "forge/certificate.hpp"
#include "forge/group.hpp"
#include "forge/schedule.hpp"

namespace forge {

// Layer value 0 is the marker symbol q_m; other values are colors 1..|F_m|-1.
struct Labeling {
    std::shared_ptr<const Window> win;
    Schedule sch;
    int M = 0;                             // F-layers materialized
    int D = 0;                             // C-prefix bits, M <= D <= 32
    std::vector<uint32_t> cbits;           // bit k-1 holds the k-th C digit
    std::vector<std::vector<int32_t>> f;   // f[m-1][id]
    int stage = 0;
    int64_t core = 0;

    int level(int m) const { return sch.f(m); }
    bool is_q(int m, Id id) const { return f[m - 1][id] == 0; }
    std::vector<Id> q_set(int m) const;
    // j-truncated label folded to 64 bits
    uint64_t packed(Id id, int j) const;
    nlohmann::ordered_json to_json() const;
};

enum class CInit { Zero, Hash, Digits };
CInit parse_cinit(const std::string& s);

// clean labeling built layer by layer; q-sets avoid the ball of radius 10 s_m.
// marker_seed != 0 scans marker candidates in a hashed order instead of shortlex.
Labeling initial_clean_labeling(std::shared_ptr<const Window> w, const Schedule& sch, int M,
                                CInit c_init = CInit::Zero, uint64_t seed = 0, int D = -1,
                                uint64_t marker_seed = 0);

// Recolor the non-marker points of `region` on layer m: offset from the
// nearest marker within r_m (ties to the smaller offset index) when that
// color is free, else the least free color.
void recolor_layer(Labeling& lab, int m, const std::vector<Id>& region);

Certificate verify_clean(const Labeling& lab, bool strict, int64_t core = -1, int max_layer = -1);

struct LabeledBall {
    int j = 1;
    int64_t t = 0;
    std::vector<uint64_t> labels;   // canonical order
    std::array<uint64_t, 2> key{};  // census fingerprint
};

LabeledBall extract_ball(const Labeling& lab, Id z, int64_t t, int j);
bool ball_isomorphic(const LabeledBall& a, const LabeledBall& b);
// inner center offset index (canonical order of the big ball), or -1
int64_t fully_contains(const Labeling& lab, Id big_center, int64_t big_t, const LabeledBall& small);

struct BallType {
    std::array<uint64_t, 2> key{};
    int64_t count = 0;
    Id first = -1;   // shortlex-first occurrence
};

struct Census {
    int j = 1;
    int64_t t = 0;
    int64_t center_core = 0;          // centers at depth <= center_core
    std::vector<BallType> types;      // sorted by key
    std::vector<int32_t> type_of;     // per id, -1 when not a center
};

// fingerprint of the radius-t ball at z (exactly the census key)
std::array<uint64_t, 2> ball_key(const Labeling& lab, Id z, int64_t t, int j);
Census enumerate_ball_types(const Labeling& lab, int j, int64_t t, int64_t center_core = -1);

// every point at depth <= test_core has an occurrence of the type within rho,
// measured at metric_level (default: the level of the census layer). Only
// census centers count as occurrences, so a point whose rho-ball leaves the
// census core and finds none is reported as unverified (and fails).
Certificate is_syndetic(const Labeling& lab, const Census& census, size_t type_index, int64_t rho,
                        int64_t test_core, int metric_level = -1);
// all types at once; failures name the type's first site
Certificate all_syndetic(const Labeling& lab, const Census& census, int64_t rho, int64_t test_core,
                         int metric_level = -1);

}  // namespace forge
