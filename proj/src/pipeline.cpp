#include "forge/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "forge/parallel.hpp"

namespace forge {

namespace {

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

int64_t depth_of(const Window& w, Id id) { return w.depth(id, w.level()); }

std::vector<int64_t> bad_positions(const Labeling& lab, const Codeball& cb, const std::vector<Id>& Q) {
    const Window& w = *lab.win;
    const int i = cb.j;
    const int64_t s = lab.sch.s(i);
    const int lvl = lab.level(i);
    std::vector<char> bad(Q.size(), 0);
    parallel_for(static_cast<int64_t>(Q.size()), [&](int64_t a, int64_t b) {
        for (int64_t k = a; k < b; ++k) {
            Id y = Q[k];
            if (depth_of(w, y) + s > w.radius()) continue;
            auto ball = w.ball(y, s, lvl);
            bool same = ball.size() == cb.pattern.labels.size();
            for (size_t t = 0; same && t < ball.size(); ++t) same = lab.packed(ball[t], i) == cb.pattern.labels[t];
            bad[k] = !same;
        }
    });
    std::vector<int64_t> out;
    for (size_t k = 0; k < Q.size(); ++k)
        if (bad[k]) out.push_back(static_cast<int64_t>(k));
    return out;
}

// connected groups of repair balls below level i, measured in the level-f(i) metric
nlohmann::ordered_json chain_report(const Labeling& lab, const std::vector<RepairRecord>& recs, int top) {
    const Window& w = *lab.win;
    const auto& sch = lab.sch;
    auto out = nlohmann::ordered_json::array();
    for (int i = 3; i <= top; ++i) {
        std::vector<RepairRecord> b;
        for (auto& rc : recs)
            if (rc.level < i) b.push_back(rc);
        const int lvl = lab.level(i);
        auto rho = [&](const RepairRecord& rc) { return sch.s(rc.level) + 5 * sch.r(rc.level - 1); };
        std::vector<size_t> par(b.size());
        std::iota(par.begin(), par.end(), 0);
        std::function<size_t(size_t)> root = [&](size_t x) { return par[x] == x ? x : par[x] = root(par[x]); };
        std::vector<std::vector<int64_t>> d(b.size(), std::vector<int64_t>(b.size(), 0));
        for (size_t a = 0; a < b.size(); ++a)
            for (size_t c = a + 1; c < b.size(); ++c) {
                d[a][c] = d[c][a] = w.distance(b[a].host, b[c].host, lvl);
                if (d[a][c] <= rho(b[a]) + rho(b[c])) par[root(a)] = root(c);
            }
        int64_t diam = 0;
        for (size_t a = 0; a < b.size(); ++a)
            for (size_t c = a; c < b.size(); ++c)
                if (root(a) == root(c)) diam = std::max(diam, d[a][c] + rho(b[a]) + rho(b[c]));
        const int64_t r = sch.r(i - 1);
        out.push_back({{"i", i},
                       {"balls", b.size()},
                       {"diameter", diam},
                       {"bound_half", r / 2},
                       {"bound_tenth", r / 10},
                       {"ok", diam < r / 2 || b.empty()},
                       {"below_tenth", diam < r / 10 || b.empty()}});
    }
    return out;
}

struct DonorCover {
    std::vector<Id> donors;
    std::vector<int32_t> donor_of;  // per type
    std::vector<Id> occ;            // per type, an occurrence within the donor's reach
};

DonorCover cover_types(const Labeling& lab, const Census& cs, int n) {
    const Window& w = *lab.win;
    const auto& sch = lab.sch;
    const int lvl = lab.level(n);
    const int64_t reach = 2 * sch.r(n) - sch.s(n) - 1;
    const int64_t keep = source_radius(sch, PatchKind::Supersize, n);
    const size_t nt = cs.types.size();
    DonorCover dc;
    dc.donor_of.assign(nt, -1);
    dc.occ.assign(nt, -1);
    std::vector<size_t> order(nt);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return cs.types[a].first < cs.types[b].first; });
    std::vector<int64_t> stamp(nt, -1);
    int64_t tick = 0;
    for (size_t k : order) {
        if (dc.donor_of[k] >= 0) continue;
        Id best = -1;
        int64_t best_gain = -1;
        for (Id z : w.neighborhood(cs.types[k].first, reach, lvl)) {
            if (!lab.is_q(n, z) || depth_of(w, z) + keep > w.radius()) continue;
            ++tick;
            int64_t gain = 0;
            for (Id y : w.neighborhood(z, reach, lvl)) {
                int32_t t = cs.type_of[y];
                if (t < 0 || dc.donor_of[t] >= 0 || stamp[t] == tick) continue;
                stamp[t] = tick;
                ++gain;
            }
            if (gain > best_gain || (gain == best_gain && z < best)) best = z, best_gain = gain;
        }
        if (best < 0)
            throw Error("SearchExhausted", "no marker of layer " + std::to_string(n) + " hosts the type first seen at " +
                                               show(w, cs.types[k].first));
        dc.donors.push_back(best);
        const int32_t di = static_cast<int32_t>(dc.donors.size() - 1);
        auto nb = w.neighborhood(best, reach, lvl);
        std::sort(nb.begin(), nb.end());
        for (Id y : nb) {
            int32_t t = cs.type_of[y];
            if (t >= 0 && dc.donor_of[t] < 0) dc.donor_of[t] = di, dc.occ[t] = y;
        }
    }
    return dc;
}

std::vector<uint64_t> ball_labels(const Labeling& lab, Id c, int64_t t, int j) {
    std::vector<uint64_t> v;
    for (Id y : lab.win->ball(c, t, lab.level(j))) v.push_back(lab.packed(y, j));
    return v;
}

}  // namespace

nlohmann::ordered_json Codeball::to_json(const Window& w) const {
    nlohmann::ordered_json j;
    j["j"] = this->j;
    j["center"] = w.encode(center);
    j["radius"] = pattern.t;
    j["key"] = {std::to_string(pattern.key[0]), std::to_string(pattern.key[1])};
    j["size"] = pattern.labels.size();
    auto dir = nlohmann::ordered_json::array();
    for (auto& e : directory)
        dir.push_back({{"key", {std::to_string(e.key[0]), std::to_string(e.key[1])}},
                       {"site", w.encode(e.site)},
                       {"offset", e.offset}});
    j["directory"] = dir;
    auto enc = [&](const std::vector<Id>& v) {
        auto a = nlohmann::ordered_json::array();
        for (Id x : v) a.push_back(nlohmann::ordered_json(w.encode(x)));
        return a;
    };
    j["sites"] = enc(sites);
    j["donors"] = enc(donors);
    return j;
}

int64_t census_core(const Labeling& lab, int n) {
    return std::min(lab.core, lab.win->radius() - 6 * lab.sch.r(n)) - lab.sch.s(n);
}

Census stage_census(const Labeling& lab, int n) {
    int64_t cc = census_core(lab, n);
    if (cc < 0) {
        Census none;
        none.j = n;
        none.t = lab.sch.s(n);
        none.center_core = -1;
        return none;
    }
    return enumerate_ball_types(lab, n, lab.sch.s(n), cc);
}

StageState first_stage(Labeling lab) {
    StageState st;
    st.n = 1;
    st.lab = std::move(lab);
    st.lab.stage = 1;
    st.census = stage_census(st.lab, 1);
    st.log["core"] = st.lab.core;
    st.log["census_types"] = st.census.types.size();
    return st;
}

std::vector<Id> bad_set(const Labeling& lab, const Codeball& cb) {
    auto Q = lab.q_set(cb.j);
    std::vector<Id> out;
    for (int64_t k : bad_positions(lab, cb, Q)) out.push_back(Q[k]);
    return out;
}

PatchLog repair(Labeling& lab, const Codeball& cb, std::vector<RepairRecord>* out) {
    const Window& w = *lab.win;
    const int i = cb.j;
    if (cb.repair.f.empty()) throw Error("PreconditionViolated", "codeball " + std::to_string(i) + " has no repair donor");
    auto rad = patch_radii(lab.sch, PatchKind::Regular, i);
    const int64_t margin = lab.sch.r(i - 1), s = lab.sch.s(i);
    std::vector<PatchRequest> reqs;
    for (Id y : bad_set(lab, cb)) {
        int64_t d = depth_of(w, y);
        if (d + rad.dirty + margin <= w.radius()) {
            reqs.push_back({PatchKind::Regular, i, y, &cb.repair});
            if (out) out->push_back({i, y});
        } else {
            lab.core = std::min(lab.core, d + s - 1);
        }
    }
    return apply_patches(lab, reqs);
}

nlohmann::ordered_json repair_cascade(Labeling& lab, const std::vector<Codeball>& cbs, int top) {
    const Window& w = *lab.win;
    nlohmann::ordered_json log;
    auto& reps = log["repairs"] = nlohmann::ordered_json::array();
    std::vector<RepairRecord> recs;
    for (int i = top; i >= 2; --i) {
        auto pl = repair(lab, cbs.at(i - 2), &recs);
        reps.push_back({{"i", i}, {"patches", pl.requests}, {"changed", pl.changed.size()}});
    }
    log["chains"] = chain_report(lab, recs, top);
    for (int i = 2; i <= top; ++i)
        for (Id y : bad_set(lab, cbs.at(i - 2)))
            if (depth_of(w, y) + lab.sch.s(i) <= lab.core)
                throw Error("CascadeDiverged", "layer " + std::to_string(i) + " marker " + show(w, y) +
                                                   " still differs from its codeball; chains " + log["chains"].dump());
    log["core"] = lab.core;
    return log;
}

RoundOne build_codeball(const StageState& st) {
    const Labeling& lab = st.lab;
    const Window& w = *lab.win;
    const auto& sch = lab.sch;
    const int n = st.n;
    if (lab.M < n + 1) throw Error("NoMarkerInCore", "layer " + std::to_string(n + 1) + " is not materialized");
    const int64_t S = sch.s(n + 1), r = sch.r(n), sn = sch.s(n);
    Id z = -1;
    for (Id q : lab.q_set(n + 1))
        if (depth_of(w, q) + S <= lab.core && (z < 0 || q < z)) z = q;
    if (z < 0) throw Error("NoMarkerInCore", "no layer-" + std::to_string(n + 1) + " marker has its ball inside the core");
    const Census& cs = st.census;
    if (cs.center_core < 0) throw Error("CoreTooSmall", "stage " + std::to_string(n) + " census does not fit the window");

    RoundOne ro;
    auto& log = ro.log;
    log["center"] = w.encode(z);
    log["census_types"] = cs.types.size();

    auto dc = cover_types(lab, cs, n);
    const int64_t tau = static_cast<int64_t>(dc.donors.size());
    log["donors"] = tau;
    auto sites = select_annulus_sites(w, z, lab.level(n + 1), lab.q_set(n), tau, S, r, sch.cfg.c);

    const int64_t keep = source_radius(sch, PatchKind::Supersize, n);
    std::vector<PatchSource> srcs;
    srcs.reserve(dc.donors.size());
    for (Id x : dc.donors) srcs.push_back(take_source(lab, x, n, keep));
    std::vector<PatchRequest> reqs;
    for (size_t k = 0; k < sites.size(); ++k) reqs.push_back({PatchKind::Supersize, n, sites[k], &srcs[k]});
    ro.lab = lab;
    auto pl = apply_patches(ro.lab, reqs);
    log["supersize_changed"] = pl.changed.size();
    if (n >= 2) log["cascade"] = repair_cascade(ro.lab, st.codeballs, n);

    Codeball& cb = ro.cb;
    cb.j = n + 1;
    cb.center = z;
    cb.sites = sites;
    cb.donors = dc.donors;
    cb.pattern = extract_ball(ro.lab, z, S, n + 1);

    // each type sits at the transported copy of its donor occurrence
    const int lvl = lab.level(n), big_lvl = lab.level(n + 1);
    const int64_t reach = 2 * r - sn - 1;
    auto big = w.ball(z, S, big_lvl);
    std::unordered_map<Id, int64_t> pos;
    pos.reserve(big.size() * 2);
    for (size_t k = 0; k < big.size(); ++k) pos.emplace(big[k], static_cast<int64_t>(k));
    std::vector<std::unordered_map<Id, size_t>> donor_pos(tau);
    std::vector<std::vector<Id>> site_ball(tau);
    for (int64_t d = 0; d < tau; ++d) {
        auto db = w.ball(dc.donors[d], reach, lvl);
        for (size_t k = 0; k < db.size(); ++k) donor_pos[d].emplace(db[k], k);
        site_ball[d] = w.ball(sites[d], reach, lvl);
    }
    for (size_t t = 0; t < cs.types.size(); ++t) {
        const int32_t d = dc.donor_of[t];
        Id c = dc.occ[t];
        Id copy = site_ball[d][donor_pos[d].at(c)];
        auto want = ball_labels(lab, c, sn, n);
        auto it = pos.find(copy);
        bool ok = it != pos.end() && w.offset_depth(it->second, big_lvl) + sn < S &&
                  ball_labels(ro.lab, copy, sn, n) == want;
        if (!ok) {
            LabeledBall small;
            small.j = n;
            small.t = sn;
            small.labels = want;
            small.key = cs.types[t].key;
            int64_t k = fully_contains(ro.lab, z, S, small);
            if (k < 0)
                throw Error("SearchExhausted", "codeball " + std::to_string(n + 1) + " lost the copy of the type first seen at " +
                                                   show(w, cs.types[t].first));
            copy = w.ball(z, S - sn - 1, lvl)[k];
            it = pos.find(copy);
        }
        cb.directory.push_back({cs.types[t].key, copy, it->second});
    }
    auto sj = nlohmann::ordered_json::array();
    for (Id x : sites) sj.push_back({{"site", w.encode(x)}, {"distance", w.distance(z, x, big_lvl)}});
    log["sites"] = sj;
    return ro;
}

StageState advance_stage(const StageState& st) {
    auto ro = build_codeball(st);
    const Window& w = *st.lab.win;
    const auto& sch = st.lab.sch;
    const int n = st.n;
    const int64_t S = sch.s(n + 1);

    StageState nx;
    nx.n = n + 1;
    nx.lab = st.lab;
    nx.log["round_one"] = ro.log;
    const PatchSource donor = take_source(ro.lab, ro.cb.center, n + 1, source_radius(sch, PatchKind::Regular, n + 1));
    auto rad = patch_radii(sch, PatchKind::Regular, n + 1);
    std::vector<PatchRequest> reqs;
    int64_t skipped = 0;
    for (Id y : st.lab.q_set(n + 1)) {
        int64_t d = depth_of(w, y);
        if (d + rad.dirty + sch.r(n) <= w.radius()) {
            reqs.push_back({PatchKind::Regular, n + 1, y, &donor});
        } else {
            nx.lab.core = std::min(nx.lab.core, d + S - 1);
            ++skipped;
        }
    }
    auto pl = apply_patches(nx.lab, reqs);
    nx.log["round_two"] = {{"patches", pl.requests}, {"skipped_at_rim", skipped}, {"changed", pl.changed.size()}};

    nx.codeballs = st.codeballs;
    nx.codeballs.push_back(std::move(ro.cb));
    if (n >= 2) nx.log["cascade"] = repair_cascade(nx.lab, nx.codeballs, n);

    auto carried = verify_codeballs(nx.lab, nx.codeballs);
    if (!carried.pass) throw Error("CascadeDiverged", carried.witnesses.front());
    Codeball& top = nx.codeballs.back();
    top.repair = take_source(nx.lab, top.center, n + 1, source_radius(sch, PatchKind::Regular, n + 1));
    nx.lab.stage = n + 1;

    const auto& a = st.lab;
    const auto& b = nx.lab;
    std::vector<char> diff(w.size(), 0);
    parallel_for(w.size(), [&](int64_t lo, int64_t hi) {
        for (int64_t id = lo; id < hi; ++id) {
            bool d = a.cbits[id] != b.cbits[id];
            for (int m = 0; m < a.M && !d; ++m) d = a.f[m][id] != b.f[m][id];
            diff[id] = d;
        }
    });
    for (Id id = 0; id < static_cast<Id>(w.size()); ++id)
        if (diff[id]) {
            nx.changed.push_back(id);
            nx.change_depth = std::min(nx.change_depth, depth_of(w, id));
        }
    nx.census = stage_census(nx.lab, n + 1);
    nx.log["codeballs_carried"] = carried.measured;
    nx.log["changed"] = nx.changed.size();
    nx.log["change_depth"] = nx.change_depth == kInf ? -1 : nx.change_depth;
    nx.log["core"] = nx.lab.core;
    nx.log["census_types"] = nx.census.types.size();
    return nx;
}

int64_t donor_demand(const StageState& st) {
    if (st.census.center_core < 0) throw Error("CoreTooSmall", "stage " + std::to_string(st.n) + " census does not fit the window");
    return static_cast<int64_t>(cover_types(st.lab, st.census, st.n).donors.size());
}

Run run_scaled(const GeneratorSystem& gs, const RunOptions& opt, const std::vector<StageState>& resume,
               const StageHook& hook) {
    if (opt.stages < 1) throw Error("Usage", "at least one stage");
    Run run;
    std::vector<int64_t> planned;
    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        ScaledConfig cfg = opt.cfg;
        cfg.empirical_types = true;
        std::vector<int64_t> sites = planned;
        while (static_cast<int>(sites.size()) < opt.stages) sites.push_back(cfg.site_budget);
        run.sch = scaled_schedule(gs, opt.stages, cfg, sites);
        const int64_t R = opt.radius > 0 ? opt.radius : recommended_radius(run.sch, opt.stages);
        nlohmann::ordered_json entry;
        entry["sites"] = sites;
        entry["radius"] = R;
        const int L = run.sch.f(opt.stages);
        run.states.clear();
        const bool reuse = !resume.empty() && nlohmann::json(resume[0].lab.sch.to_json()) == nlohmann::json(run.sch.to_json()) &&
                           resume[0].lab.win->radius() == R && resume[0].lab.win->level() == L;
        if (reuse) {
            run.states.assign(resume.begin(), resume.begin() + std::min<size_t>(resume.size(), opt.stages));
            entry["resumed_stages"] = run.states.size();
            for (size_t n = 1; n < run.states.size(); ++n) entry["demand"].push_back(donor_demand(run.states[n - 1]));
        } else {
            auto w = make_window(gs, R, L);
            run.states.push_back(first_stage(initial_clean_labeling(w, run.sch, opt.stages, opt.c_init, opt.seed, opt.D)));
            if (hook) hook(run.sch, run.states.back());
        }
        bool replan = false;
        const int last = opt.upto > 0 ? std::min(opt.upto, opt.stages) : opt.stages;
        for (int n = static_cast<int>(run.states.size()); n < last && !replan; ++n) {
            const int64_t demand = donor_demand(run.states.back());
            entry["demand"].push_back(demand);
            if (demand > sites[n - 1]) {
                planned.assign(sites.begin(), sites.begin() + n);
                planned[n - 1] = demand;
                replan = true;
                break;
            }
            try {
                run.states.push_back(advance_stage(run.states.back()));
                if (hook) hook(run.sch, run.states.back());
            } catch (const Error& e) {
                if (e.kind() != "CapacityExceeded" || opt.radius > 0) throw;
                planned.assign(sites.begin(), sites.begin() + n);
                planned[n - 1] = 2 * std::max<int64_t>(demand, 1);
                replan = true;
            }
        }
        entry["outcome"] = replan ? "replan" : "done";
        run.plan.push_back(entry);
        if (!replan) return run;
    }
    throw Error("Infeasible", "donor demand kept outgrowing the planned annulus sites");
}

Certificate verify_codeballs(const Labeling& lab, const std::vector<Codeball>& cbs) {
    const Window& w = *lab.win;
    Certificate c;
    c.name = "codeballs";
    c.stage = lab.stage;
    c.core = lab.core;
    auto& per = c.measured["layers"] = nlohmann::ordered_json::array();
    for (const auto& cb : cbs) {
        const int64_t s = lab.sch.s(cb.j);
        std::vector<Id> Q;
        for (Id q : lab.q_set(cb.j))
            if (depth_of(w, q) + s <= lab.core) Q.push_back(q);
        auto bad = bad_positions(lab, cb, Q);
        for (int64_t k : bad) c.fail("layer " + std::to_string(cb.j) + " marker " + show(w, Q[k]) + " differs from its codeball");
        per.push_back({{"j", cb.j}, {"markers", Q.size()}, {"mismatched", bad.size()}});
    }
    return c;
}

int64_t stabilized_radius(const std::vector<StageState>& states) {
    if (states.size() < 2) throw Error("NothingStabilized", "need at least two stages");
    const auto& last = states.back();
    const Labeling& lab = last.lab;
    const Window& w = *lab.win;
    const auto& sch = lab.sch;
    const int n = last.n;
    // the next stage only changes points within s_{n+1} + 4 r_n (plus a repair chain) of a layer-(n+1) marker
    int64_t future = kInf;
    try {
        const int64_t S = n + 1 <= sch.stages() ? sch.s(n + 1) : sch.s_next();
        const int64_t reach = S + 4 * sch.r(n) + sch.r(n) / 2;
        int64_t nearest;
        if (lab.M > n) {
            nearest = w.radius() + 1;
            for (Id q : lab.q_set(n + 1)) nearest = std::min(nearest, depth_of(w, q));
        } else {
            nearest = 10 * S + 1;
        }
        future = nearest - reach;
    } catch (const Error& e) {
        if (e.kind() != "ValueTooLarge") throw;
    }
    int64_t rad = std::min(lab.core, future == kInf ? kInf : future - 1);
    if (rad < 0) throw Error("NothingStabilized", "the window supports no exclusion radius");
    return rad;
}

Labeling stabilized_limit(const std::vector<StageState>& states) {
    int64_t rad = stabilized_radius(states);
    Labeling out = states.back().lab;
    out.core = rad;
    return out;
}

}  // namespace forge
