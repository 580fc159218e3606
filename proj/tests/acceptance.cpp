// One line per acceptance criterion. Usage: acceptance [path/to/forge]
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "forge/embedding.hpp"
#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/sparse.hpp"
#include "forge/verifier.hpp"

using namespace forge;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void need(bool ok, const std::string& what) {
        if (!ok && pass) detail = "failed: " + what;
        pass &= ok;
    }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string forge_path;

int64_t X(Id id) { return LineWindow::coord(id); }

// ---- 1: exact schedule against big-integer arithmetic done here

Outcome exact_schedule_on_Z() {
    Outcome o;
    auto t0 = Clock::now();
    auto sch = exact_schedule(integers(), 2);
    auto chk = check_schedule(integers(), sch);
    auto tail = rule2_tail(sch, integers());
    const double secs = since(t0);

    // |B_t| = 2t + 1 at every level; r = 10 * (least t with |B_t| >= 10^m |B_5s|)
    auto ball = [](const BigInt& t) -> BigInt { return 2 * t + 1; };
    auto least = [](const BigInt& target) -> BigInt {
        BigInt a = target - 1;
        return (a + 1) / 2;
    };
    BigInt s1 = 10, r1 = 10 * least(10 * ball(5 * s1)), F1 = ball(r1) + 1;
    BigInt k1 = boost::multiprecision::pow(F1, static_cast<unsigned>(ball(s1)));
    BigInt s2 = 1000 * r1 * k1;
    BigInt r2 = 10 * least(100 * ball(5 * s2));
    r2 = std::max(r2, BigInt(1000 * (s1 + 5 * r1 + s2)));

    o.need(sch.at(1).s == s1 && sch.f(1) == 1, "s_1 = 10, f(1) = 1");
    o.need(sch.at(1).r == 5050 && r1 == 5050, "r_1 = 5050");
    o.need(sch.at(1).F == 10102 && F1 == 10102, "|F_1| = 10102");
    o.need(sch.at(1).kappa == boost::multiprecision::pow(BigInt(10102), 21) && sch.at(1).kappa == k1, "kappa_1 = 10102^21");
    o.need(sch.at(2).s == s2 && s2 == 1000 * 5050 * k1, "s_2 = 1000 * 5050 * kappa_1");
    o.need(sch.at(2).r == r2, "r_2");
    o.need(sch.at(2).F == ball(r2) + 1, "|F_2|");
    o.need(chk.pass, "schedule rules: " + (chk.witnesses.empty() ? std::string() : chk.witnesses[0]));
    o.need(tail.pass, "rule 2 tail");
    o.need(secs < 1.0, "runtime under 1 s");
    if (o.pass)
        o.detail = "s_1 10, r_1 5050, |F_1| 10102, kappa_1 = 10102^21 (" + std::to_string(k1.str().size()) + " digits), s_2 " +
                   std::to_string(s2.str().size()) + " digits; schedule rules and rule 2 tail hold";
    return o;
}

// ---- 2: sparse sets and nets, by brute force over coordinates

Outcome sparse_net_suite() {
    Outcome o;
    std::mt19937_64 rng(2024);
    GeneratorSystem z2;
    z2.backend = make_lattice(2);
    z2.gens = {{1, 0}, {0, 1}};
    int instances = 0;
    for (int it = 0; it < 200 && o.pass; ++it) {
        const bool plane = it % 2 == 1;
        const int64_t R = plane ? std::uniform_int_distribution<int64_t>(8, 24)(rng) : std::uniform_int_distribution<int64_t>(20, 200)(rng);
        const int L = plane ? 2 : 1;
        auto w = make_window(plane ? z2 : integers(), R, L);
        const Id n = static_cast<Id>(w->size());
        std::vector<std::vector<int64_t>> at(n);
        for (Id id = 0; id < n; ++id) at[id] = w->element(id);
        auto dist = [&](Id a, Id b) {
            int64_t d = 0;
            for (size_t k = 0; k < at[a].size(); ++k) d += std::abs(at[a][k] - at[b][k]);
            return d;
        };
        auto depth = [&](Id a) { return dist(a, w->identity()); };
        const double p = std::uniform_real_distribution<double>(0.05, 0.7)(rng);
        std::vector<Id> S;
        for (Id id = 0; id < n; ++id)
            if (id == 0 || std::bernoulli_distribution(p)(rng)) S.push_back(id);
        const int64_t r = std::uniform_int_distribution<int64_t>(1, plane ? 4 : 8)(rng);
        auto T = greedy_maximal_sparse(*w, S, r, L).elements;

        bool sparse = true, maximal = true, net = true;
        for (size_t a = 0; a < T.size(); ++a)
            for (size_t b = a + 1; b < T.size(); ++b) sparse &= dist(T[a], T[b]) > r;
        std::set<Id> inT(T.begin(), T.end());
        for (Id x : S) {
            if (inT.count(x)) continue;
            bool near = false;
            for (Id t : T) near |= dist(x, t) <= r;
            maximal &= near;
        }
        // s: how far the core is from S; T should be an (s + r)-net there
        const int64_t core = R / 2;
        int64_t s = 0;
        for (Id g = 0; g < n; ++g) {
            if (depth(g) > core) continue;
            int64_t best = kInf;
            for (Id x : S) best = std::min(best, dist(g, x));
            s = std::max(s, best);
        }
        if (core + s + r <= R)
            for (Id g = 0; g < n; ++g) {
                if (depth(g) > core) continue;
                int64_t best = kInf;
                for (Id t : T) best = std::min(best, dist(g, t));
                net &= best <= s + r;
            }
        o.need(sparse, "instance " + std::to_string(it) + " is not r-sparse");
        o.need(maximal, "instance " + std::to_string(it) + " is not S-maximal");
        o.need(net, "instance " + std::to_string(it) + " is not an (s + r)-net");
        o.need(verify_sparse(*w, T, r, L).pass && verify_maximal(*w, T, S, r, L, R).pass,
               "module certificates disagree on instance " + std::to_string(it));
        ++instances;
    }
    if (o.pass) o.detail = std::to_string(instances) + " instances on Z and Z^2 (R <= 200): sparse, maximal, (s + r)-nets";
    return o;
}

// ---- 3: patching contract

Id marker_after(const Labeling& lab, int n, int64_t from) {
    Id best = -1;
    for (Id q : lab.q_set(n))
        if (X(q) >= from && (best < 0 || X(q) < X(best))) best = q;
    return best;
}

// layer-n marker at or after `from` with every layer-(n+1) marker farther than gap
Id lonely_marker(const Labeling& lab, int n, int64_t gap, int64_t from) {
    auto up = lab.q_set(n + 1);
    std::vector<int64_t> ux;
    for (Id u : up) ux.push_back(X(u));
    std::sort(ux.begin(), ux.end());
    std::vector<Id> qs = lab.q_set(n);
    std::sort(qs.begin(), qs.end(), [](Id a, Id b) { return X(a) < X(b); });
    for (Id q : qs) {
        int64_t x = X(q);
        if (x < from || std::abs(x) > lab.core / 2) continue;
        auto it = std::lower_bound(ux.begin(), ux.end(), x - gap);
        if (it == ux.end() || *it > x + gap) return q;
    }
    return -1;
}

Outcome patching_contract() {
    Outcome o;
    ScaledConfig cfg;
    cfg.s1 = 1;
    auto sch = scaled_schedule(integers(), 3, cfg, {2, 2});
    auto w = make_window(integers(), 30000, 2);
    std::vector<Labeling> pool;
    for (int k = 0; k < 4; ++k) pool.push_back(initial_clean_labeling(w, sch, 2, CInit::Hash, 11 + k, -1, k == 0 ? 0 : 5 + k));
    std::mt19937_64 rng(99);
    int regular = 0, supersize = 0, selfp = 0;
    for (int it = 0; it < 50 && o.pass; ++it) {
        const size_t hi = rng() % pool.size(), di = it % 10 == 0 ? hi : rng() % pool.size();
        const auto& host = pool[hi];
        const auto& donor = pool[di];
        const bool super = it % 2 == 1;
        const int n = super ? 1 : 2;
        const PatchKind kind = super ? PatchKind::Supersize : PatchKind::Regular;
        // both balls stay clear of the marker-free ball around e, or the copy would carry its hole
        const int64_t margin = 10 * sch.s(n) + patch_radii(sch, kind, n).dirty;
        auto pick = [&](const Labeling& lab) {
            int64_t v = std::uniform_int_distribution<int64_t>(-lab.core / 2, lab.core / 3)(rng);
            return std::abs(v) < margin + 2 * sch.r(n) ? margin : v;
        };
        const int64_t from = pick(host);
        Id y = super ? lonely_marker(host, 1, 20 * sch.r(1), from) : marker_after(host, 2, from);
        Id x = marker_after(donor, n, pick(donor));
        if (y < 0 || x < 0) {
            --it;
            continue;
        }
        if (it % 10 == 0) x = y;  // a few self patches
        const bool self = it % 10 == 0;
        auto src = take_source(donor, x, n, source_radius(sch, kind, n));
        PatchRequest rq{kind, n, y, &src};
        auto out = patch(host, rq);
        auto cert = check_patch(host, out, rq);
        o.need(cert.pass, "patch " + std::to_string(it) + " (host " + std::to_string(hi) + " at " + std::to_string(X(y)) + ", donor " +
                              std::to_string(di) + " at " + std::to_string(X(x)) + "): " + (cert.witnesses.empty() ? std::string() : cert.witnesses[0]));
        // transport of the copy region, recomputed here
        auto rad = patch_radii(sch, kind, n);
        const uint32_t low = (1u << n) - 1;
        bool moved = true;
        for (int64_t d = -rad.copy; d <= rad.copy; ++d) {
            Id z = LineWindow::id_of(X(y) + d), zd = LineWindow::id_of(X(x) + d);
            for (int m = 1; m <= n; ++m) moved &= out.f[m - 1][z] == donor.f[m - 1][zd];
            moved &= (out.cbits[z] & low) == (donor.cbits[zd] & low);
            moved &= (out.cbits[z] & ~low) == (host.cbits[z] & ~low);
        }
        o.need(moved, "copy region of patch " + std::to_string(it));
        if (self) {
            bool same = true;
            for (Id z = 0; z < static_cast<Id>(w->size()); ++z) {
                int64_t d = std::abs(X(z) - X(y));
                if (d > rad.copy && d < rad.dirty) continue;
                same &= out.cbits[z] == host.cbits[z];
                for (int m = 0; m < host.M; ++m) same &= out.f[m][z] == host.f[m][z];
            }
            o.need(same, "self patch " + std::to_string(it) + " moved labels on copy or outside regions");
            ++selfp;
        }
        (super ? supersize : regular) += 1;
    }
    // order independence on disjoint supports
    const auto& host = pool[0];
    Id y1 = marker_after(host, 2, 7000), y2 = marker_after(host, 2, X(y1) + 1);
    auto src = take_source(pool[1], marker_after(pool[1], 2, 9000), 2, source_radius(sch, PatchKind::Regular, 2));
    PatchRequest a{PatchKind::Regular, 2, y1, &src}, b{PatchKind::Regular, 2, y2, &src};
    auto ab = patch(patch(host, a), b), ba = patch(patch(host, b), a);
    auto both = host;
    apply_patches(both, {b, a});
    o.need(ab.f == ba.f && ab.cbits == ba.cbits && both.f == ab.f && both.cbits == ab.cbits, "simultaneous patching depends on order");
    if (o.pass)
        o.detail = std::to_string(regular) + " regular and " + std::to_string(supersize) + " supersize patches (" + std::to_string(selfp) +
                   " self) satisfy all six postconditions; simultaneous patching is order-free";
    return o;
}

}  // namespace

namespace {

// ---- the 3-stage scaled run shared by 4 to 8

const Run& three_stage_run() {
    static Run run = run_scaled(integers(), RunOptions{});
    return run;
}

const Labeling& stabilized() {
    static Labeling lim = stabilized_limit(three_stage_run().states);
    return lim;
}

Outcome pipeline_invariants() {
    Outcome o;
    const auto& run = three_stage_run();
    const auto& st = run.states;
    o.need(st.size() == 3, "three stages");
    int64_t markers = 0, contained = 0;
    for (const auto& s : st) {
        if (s.n < 2) continue;
        const Labeling& lab = s.lab;
        auto cert = verify_codeballs(lab, s.codeballs);
        o.need(cert.pass, "codeballs at stage " + std::to_string(s.n));
        for (const auto& cb : s.codeballs) {
            // every q_j point whose s_j-ball sits in core carries the codeball, label by label
            const int64_t sj = lab.sch.s(cb.j);
            for (Id q : lab.q_set(cb.j)) {
                if (std::abs(X(q)) + sj > lab.core) continue;
                ++markers;
                bool same = true;
                for (size_t k = 0; k < cb.pattern.labels.size() && same; ++k)
                    same = lab.packed(LineWindow::id_of(X(q) + X(static_cast<Id>(k))), cb.j) == cb.pattern.labels[k];
                o.need(same, "marker " + std::to_string(X(q)) + " differs from codeball " + std::to_string(cb.j));
            }
            for (Id b : bad_set(lab, cb))
                o.need(std::abs(X(b)) + sj > lab.core, "bad point of codeball " + std::to_string(cb.j) + " in core at stage " + std::to_string(s.n));
        }
    }
    // codeball j holds every radius-s_{j-1} type of stage j-1, found by scanning its ball
    const Labeling& last = st.back().lab;
    for (const auto& cb : st.back().codeballs) {
        const auto& prev = st[cb.j - 2].census;
        const int64_t t = last.sch.s(cb.j - 1), sj = last.sch.s(cb.j);
        std::set<std::array<uint64_t, 2>> inside;
        const Labeling& holder = st[cb.j - 1].lab;
        std::vector<std::array<uint64_t, 2>> keys(2 * (sj - t) + 1);
        parallel_for(static_cast<int64_t>(keys.size()), [&](int64_t a, int64_t b) {
            for (int64_t k = a; k < b; ++k) keys[k] = ball_key(holder, LineWindow::id_of(X(cb.center) - (sj - t) + k), t, cb.j - 1);
        });
        inside.insert(keys.begin(), keys.end());
        for (const auto& ty : prev.types) {
            const bool found = inside.count(ty.key) > 0;
            contained += found;
            o.need(found, "codeball " + std::to_string(cb.j) + " lacks a stage-" + std::to_string(cb.j - 1) + " type");
        }
    }
    if (o.pass)
        o.detail = "all " + std::to_string(markers) + " core markers carry their codeball, no bad points in core, codeballs hold all " +
                   std::to_string(contained) + " prior types; window " + std::to_string(st[0].lab.win->radius()) +
                   ", demand " + run.plan.back()["demand"].dump();
    return o;
}

Outcome minimality_certificate() {
    Outcome o;
    const auto& st = three_stage_run().states;
    const auto& sch = st[1].lab.sch;
    auto two = verify_syndetic(st[1].lab, 1, sch.s(1), 2 * sch.r(2), st[1].lab.level(2));
    o.need(two.pass, "radius-s_1 types of the stage-2 labeling are not (2 r_2, 2)-syndetic");
    auto all = verify_minimality_all(stabilized());
    o.need(all.pass, "stabilized core: " + (all.witnesses.empty() ? std::string() : all.witnesses[0]));
    int64_t unverified = two.measured["unverified_points"].get<int64_t>();
    std::string cells;
    for (auto& row : all.measured["checks"]) {
        unverified += row["unverified_points"].get<int64_t>();
        cells += (cells.empty() ? "" : "; ") + row["covers"].get<std::string>() + " at rho " + row["rho"].dump() + " (" +
                 row["types"].dump() + " types)";
    }
    o.need(unverified == 0, "unverified points");
    if (o.pass)
        o.detail = std::to_string(two.measured["types"].get<int64_t>()) + " stage-2 types within 2 r_2 = " + std::to_string(2 * sch.r(2)) +
                   " at level 2; stabilized core: " + cells + "; j = 3 or t >= s_2 would need stage 4";
    return o;
}

// least depth separating x and y: first differing C digit or layer
int split_depth(const Labeling& lab, Id a, Id b) {
    int best = 64;
    uint32_t c = lab.cbits[a] ^ lab.cbits[b];
    if (c) best = std::countr_zero(c) + 1;
    for (int m = 1; m <= lab.M && m < best; ++m)
        if (lab.f[m - 1][a] != lab.f[m - 1][b]) best = m;
    return best;
}

Outcome freeness_certificate() {
    Outcome o;
    const Labeling& lim = stabilized();
    const int r_max = 12;
    auto fr = verify_freeness(lim, r_max);
    o.need(fr.pass, "freeness table");
    // the table again, from pairwise split depths
    std::vector<int> worst(r_max + 1, 0);
    for (int d = 1; d <= r_max; ++d)
        for (int64_t x = -lim.core; x + d <= lim.core; ++x)
            worst[d] = std::max(worst[d], split_depth(lim, LineWindow::id_of(x), LineWindow::id_of(x + d)));
    std::string table;
    int deepest = 0;
    for (int r = 1; r <= r_max; ++r) {
        deepest = std::max(deepest, worst[r]);
        const int64_t S = separation_depth(fr, r);
        o.need(S == deepest && S <= std::max(lim.D, lim.M), "S_" + std::to_string(r) + " = " + std::to_string(S) + ", pairs need " + std::to_string(deepest));
        auto bw = bernoulli_freeness_witness(lim, r, static_cast<int>(S));
        o.need(bw.pass, "Bernoulli witness at r = " + std::to_string(r));
        table += (table.empty() ? "" : ",") + std::to_string(S);
    }
    if (o.pass) o.detail = "S_1..S_12 = " + table + " on core " + std::to_string(lim.core) + "; Bernoulli witness passes at every S_r";
    return o;
}

Outcome stability_and_density() {
    Outcome o;
    const auto& st = three_stage_run().states;
    auto c = verify_stability(st);
    o.need(c.pass, "stability: " + (c.witnesses.empty() ? std::string() : c.witnesses[0]));
    auto tail = rule2_tail(exact_schedule(integers(), 2), integers());
    o.need(tail.pass, "rule 2 tail");
    // hand count: V = 100Z, t = 99, s = 4 covers 9 of every 100 points
    auto w = make_window(integers(), 549, 1);
    std::vector<Id> V;
    for (int64_t x = -500; x <= 500; x += 100) V.push_back(LineWindow::id_of(x));
    auto fx = density_bound(*w, V, 99, 4, 1, 549);
    o.need(fx.pass && fx.measured["covered"].get<int64_t>() == 11 * 9 && fx.measured["bound"] == "9/99", "100Z fixture");
    std::string rows;
    for (auto& t : c.measured["transitions"])
        rows += (rows.empty() ? "" : "; ") + std::string("stage ") + t["to"].dump() + ": dirty " + t["dirty_radius"].dump() + ", density " +
                t["density"].dump() + " <= " + t["bound"].get<std::string>();
    if (o.pass) o.detail = rows + "; fixture 99/1099 <= 9/99; rule 2 tail holds";
    return o;
}

Outcome embedding_suite() {
    Outcome o;
    GeneratorSystem z2, f2;
    z2.backend = make_lattice(2);
    z2.gens = {{1, 0}, {0, 1}};
    f2.backend = make_free(2);
    f2.gens = {{1}, {2}};
    struct Case {
        GeneratorSystem gs;
        int64_t R;
    };
    std::string palettes;
    for (auto& [gs, R] : {Case{integers(), 60}, Case{z2, 12}, Case{f2, 5}}) {
        auto w = make_window(gs, R, std::min(2, static_cast<int>(gs.gens.size())));
        auto pc = proper_coloring(*w, 5);
        o.need(check_proper_coloring(*w, pc).pass, gs.backend->name() + " coloring certificate");
        const Id n = static_cast<Id>(w->size());
        // G_r distance from the words: lattice by coordinates, free group by reduced words
        auto dist = [&](Id a, Id b, int lvl) -> int64_t {
            auto x = w->element(a), y = w->element(b);
            if (gs.backend->name() == "lattice") {
                int64_t d = 0;
                for (size_t k = 0; k < x.size(); ++k) {
                    if (lvl < 2 && k > 0 && x[k] != y[k]) return kInf;
                    d += std::abs(x[k] - y[k]);
                }
                return d;
            }
            size_t c = 0;  // y x^{-1}: drop the common suffix
            while (c < x.size() && c < y.size() && x[x.size() - 1 - c] == y[y.size() - 1 - c]) ++c;
            if (lvl < 2) {
                for (size_t k = 0; k + c < x.size(); ++k) if (std::abs(x[k]) != 1) return kInf;
                for (size_t k = 0; k + c < y.size(); ++k) if (std::abs(y[k]) != 1) return kInf;
            }
            return static_cast<int64_t>(x.size() + y.size() - 2 * c);
        };
        bool proper = true;
        for (int r = 1; r <= 5; ++r)
            for (Id a = 0; a < n; ++a)
                for (Id b = a + 1; b < n; ++b)
                    if (dist(a, b, std::min(r, 2)) <= r) proper &= pc.colors[r - 1][a] != pc.colors[r - 1][b];
        o.need(proper, gs.backend->name() + " coloring against pairwise distances");
        palettes += (palettes.empty() ? "" : ", ") + gs.backend->name() + std::to_string(gs.gens.size()) + " " + pc.summary()[4]["palette"].dump();
    }
    std::mt19937_64 rng(5);
    for (int k = 0; k < 500; ++k) {
        const size_t len = rng() % 40;
        std::string a, b;
        for (size_t i = 0; i < len; ++i) a += char('0' + rng() % 2), b += char('0' + rng() % 2);
        auto s = interleave(a, b);
        auto [p, q] = deinterleave(s);
        o.need(p == a && q == b && interleave(p, q) == s, "interleave round trip");
    }
    // witness depth agrees with the freeness table on the stabilized core
    const Labeling& lim = stabilized();
    auto fr = verify_freeness(lim, 8);
    for (int r = 1; r <= 8; ++r) {
        const int S = static_cast<int>(separation_depth(fr, r));
        o.need(bernoulli_freeness_witness(lim, r, S).pass, "witness at S_" + std::to_string(r));
        if (S > 1) o.need(!bernoulli_freeness_witness(lim, r, S - 1).pass, "witness below S_" + std::to_string(r));
    }
    if (o.pass) o.detail = "blocks r <= 5 proper on Z, Z^2, F_2 (r = 5 palettes: " + palettes + "); 500 interleave round trips; witness depth = S_r for r <= 8";
    return o;
}

// ---- 9: the CLI run twice from the same configuration

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
    Outcome o;
    if (forge_path.empty()) {
        o.need(false, "no forge binary given");
        return o;
    }
    const fs::path base = fs::temp_directory_path() / ("forge-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(base);
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* name : {"a", "b"}) {
        const fs::path d = base / name;
        const std::string cmd = "\"" + forge_path + "\" --out \"" + d.string() + "\" evolve --stages 3 > /dev/null 2>&1 && \"" + forge_path +
                                "\" --out \"" + d.string() + "\" verify > /dev/null 2>&1";
        o.need(std::system(cmd.c_str()) == 0, std::string("run ") + name + " exited nonzero");
        std::map<std::string, std::string> files;
        if (fs::is_directory(d))
            for (auto& e : fs::directory_iterator(d)) files[e.path().filename().string()] = slurp(e.path());
        runs.push_back(std::move(files));
    }
    o.need(runs[0].count("stage-3.json") && runs[0].count("certificates.json"), "snapshots and certificates written");
    o.need(runs[0].size() == runs[1].size(), "same file set");
    size_t bytes = 0;
    for (auto& [name, body] : runs[0]) {
        auto it = runs[1].find(name);
        o.need(it != runs[1].end() && it->second == body, name + " differs");
        bytes += body.size();
    }
    fs::remove_all(base);
    if (o.pass) o.detail = std::to_string(runs[0].size()) + " files, " + std::to_string(bytes / 1000000) + " MB byte-identical across two runs (evolve + verify)";
    return o;
}

}  // namespace

// usage: acceptance [forge] [criterion ...]
int main(int argc, char** argv) {
    if (argc > 1) forge_path = argv[1];
    std::set<size_t> only;
    for (int k = 2; k < argc; ++k) only.insert(std::stoul(argv[k]));
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact schedule on Z", exact_schedule_on_Z},
        {"sparse sets and nets", sparse_net_suite},
        {"patching contract", patching_contract},
        {"3-stage pipeline invariants", pipeline_invariants},
        {"minimality", minimality_certificate},
        {"freeness", freeness_certificate},
        {"stability and density", stability_and_density},
        {"embedding", embedding_suite},
        {"determinism", determinism},
    };
    bool all = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && !only.count(i + 1)) continue;
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw ") + e.what();
        }
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1f s", since(t0));
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": " << o.detail << " (" << secs
                  << ")" << std::endl;
        all &= o.pass;
    }
    return all ? 0 : 1;
}
