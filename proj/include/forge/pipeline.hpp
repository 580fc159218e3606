#pragma once
#include <functional>
#include <vector>

#include "forge/labeling.hpp"
#include "forge/patcher.hpp"

namespace forge {

struct EmbeddedType {
    std::array<uint64_t, 2> key{};
    Id site = -1;          // center of the embedded copy inside the codeball
    int64_t offset = -1;   // its canonical offset index around the codeball center
};

struct Codeball {
    int j = 2;
    Id center = -1;                      // z_j
    LabeledBall pattern;                 // radius s_j, layer j
    std::vector<EmbeddedType> directory; // one entry per census type of stage j-1
    std::vector<Id> sites, donors;       // annulus sites and the donor markers copied there
    PatchSource repair;                  // radius s_j + 2 r_{j-1} around z_j in the stage-j labeling

    nlohmann::ordered_json to_json(const Window& w) const;
};

struct StageState {
    int n = 1;
    Labeling lab;
    std::vector<Codeball> codeballs;   // B_2 .. B_n
    Census census;                     // radius s_n, layer n
    std::vector<Id> changed;           // ids that differ from the previous stage
    int64_t change_depth = kInf;       // least depth among them
    nlohmann::ordered_json log = nlohmann::ordered_json::object();

    const Codeball& codeball(int j) const { return codeballs.at(j - 2); }
};

// centers at depth <= this radius enter the stage-n census
int64_t census_core(const Labeling& lab, int n);

// types of radius s_n on layer n; center_core = -1 when nothing fits
Census stage_census(const Labeling& lab, int n);

StageState first_stage(Labeling lab);

// q_i points whose s_i-ball fits the window and differs from the codeball
std::vector<Id> bad_set(const Labeling& lab, const Codeball& cb);

struct RepairRecord {
    int level;
    Id host;
};

// one i-repair; unrepairable bad points near the rim shrink lab.core
PatchLog repair(Labeling& lab, const Codeball& cb, std::vector<RepairRecord>* out = nullptr);

// repairs i = top .. 2, then checks every bad set in core and the chain bound
nlohmann::ordered_json repair_cascade(Labeling& lab, const std::vector<Codeball>& cbs, int top);

struct RoundOne {
    Codeball cb;
    Labeling lab;   // the repaired labeling the codeball was read from
    nlohmann::ordered_json log;
};
RoundOne build_codeball(const StageState& st);

StageState advance_stage(const StageState& st);

// donors needed to host every type of the stage census
int64_t donor_demand(const StageState& st);

struct RunOptions {
    int stages = 3;
    ScaledConfig cfg;
    CInit c_init = CInit::Zero;
    uint64_t seed = 0;
    int D = -1;
    int64_t radius = -1;  // -1: recommended for the schedule
    int attempts = 6;
    int upto = -1;        // stop after this many stages (-1: all)
};

struct Run {
    Schedule sch;
    std::vector<StageState> states;
    nlohmann::ordered_json plan = nlohmann::ordered_json::array();  // one entry per attempt
};

using StageHook = std::function<void(const Schedule&, const StageState&)>;

// scaled schedule, window and stages; replans while the donor counts outgrow the annulus.
// `resume` stages are reused when their schedule and window match the current plan;
// `hook` sees every stage as it is produced (and again after a replan).
Run run_scaled(const GeneratorSystem& gs, const RunOptions& opt, const std::vector<StageState>& resume = {},
               const StageHook& hook = {});

// every q_j point with its s_j-ball in core matches B_j
Certificate verify_codeballs(const Labeling& lab, const std::vector<Codeball>& cbs);

// the last stage cut down to the radius where no later stage can change it
Labeling stabilized_limit(const std::vector<StageState>& states);
int64_t stabilized_radius(const std::vector<StageState>& states);

}  // namespace forge
