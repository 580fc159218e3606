#pragma once
#include <vector>

#include "forge/pipeline.hpp"

namespace forge {

// types of (j, t) in the core, each within rho of every test point
Certificate verify_syndetic(const Labeling& lab, int j, int64_t t, int64_t rho, int metric_level = -1);

// every (j, t) type with j <= max_j, t <= max_t: with n the least stage >= j and
// s_n > t, the type recurs within 3 r_{n+1} (needs stage n+1 to be built)
Certificate verify_minimality(const Labeling& lab, int max_j, int64_t max_t);
// the same for every (j, t) whose stage n + 1 is built: the type (n, s_n - 1)
// refines all (j, t) with j <= n and t < s_n, which share rho = 3 r_{n+1}
Certificate verify_minimality_all(const Labeling& lab);

// least truncation depth S_r separating all pairs at G_r-distance in (0, r], r = 1..r_max
Certificate verify_freeness(const Labeling& lab, int r_max);
// S_r from a freeness certificate, -1 when missing
int64_t separation_depth(const Certificate& freeness, int r);

// density of {x : d(x, V) <= s} among core points against |B_s| / |B_{t/2}|
Certificate density_bound(const Window& w, const std::vector<Id>& V, int64_t t, int64_t s, int level,
                          int64_t core);

// changes between consecutive stages: exclusion ball around e and density
Certificate verify_stability(const std::vector<StageState>& states);

// exact mode: 10^{m+1} |B_{5 s_{m+1}}| < |Gamma_{f(m+1)}| for each consecutive pair
Certificate rule2_tail(const Schedule& sch, const GeneratorSystem& gs);

}  // namespace forge
