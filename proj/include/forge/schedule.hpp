#pragma once
#include <string>
#include <vector>

#include "forge/certificate.hpp"
#include "forge/group.hpp"

namespace forge {

struct ScaledConfig {
    int64_t s1 = 1;
    int64_t c = 20;            // site spacing multiplier, >= 20
    int64_t growth = 5;        // r_m >= growth * sum(5 r_{j-1} + s_j)
    bool empirical_types = true;
    int64_t site_budget = 2;   // sites planned per stage when no count was observed
    int64_t card_slack = 1;    // |F_m| = |B_{r_m}| + card_slack

    nlohmann::json to_json() const;
    static ScaledConfig from_json(const nlohmann::json& j);
};

struct StageRecord {
    BigInt s, r, F, kappa;
    int f = 1;
    std::string kappa_expr;  // "base^exp" when kappa is too large to write out
    int64_t sites = -1;      // scaled: site demand used for the next s
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
};

struct Schedule {
    std::string mode = "scaled";
    std::vector<StageRecord> st;  // st[m-1] is stage m
    BigInt next_s;                // s_{M+1}
    std::string next_s_expr;
    ScaledConfig cfg;

    int stages() const { return static_cast<int>(st.size()); }
    const StageRecord& at(int m) const { return st.at(m - 1); }
    // small-number accessors for runs; r(0) = 0
    int64_t s(int m) const;
    int64_t r(int m) const;
    int64_t F(int m) const;
    int f(int m) const { return at(m).f; }
    int64_t s_next() const;

    nlohmann::ordered_json to_json() const;
    static Schedule from_json(const nlohmann::ordered_json& j);
};

Schedule exact_schedule(const GeneratorSystem& gs, int stages);
Schedule scaled_schedule(const GeneratorSystem& gs, int stages, const ScaledConfig& cfg,
                         const std::vector<int64_t>& observed_sites = {});
// every rule the mode promises, each as a named check
Certificate check_schedule(const GeneratorSystem& gs, const Schedule& sch);
// window radius that hosts a run of the given number of stages
int64_t recommended_radius(const Schedule& sch, int stages);

// one-dimensional lower estimate of how many sites fit in the annulus
int64_t annulus_capacity(int64_t s_next, int64_t r, int64_t c);

std::vector<Id> select_annulus_sites(const Window& w, Id z, int level, const std::vector<Id>& T,
                                     int64_t count, int64_t s_next, int64_t r, int64_t c);

}  // namespace forge
