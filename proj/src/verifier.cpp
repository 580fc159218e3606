#include "forge/verifier.hpp"

#include <algorithm>

#include "forge/parallel.hpp"

namespace forge {

namespace {

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

int64_t depth_of(const Window& w, Id id) { return w.depth(id, w.level()); }

BigInt ball_count(const Window& w, int64_t t, int level) {
    auto c = ball_size_formula(w.gens(), level, BigInt(t));
    if (c.kind == Count::Finite) return c.value;
    if (t > w.radius()) throw Error("CoreTooSmall", "ball of radius " + std::to_string(t) + " does not fit the window");
    return BigInt(w.ball_size(t, level));
}

std::string frac(const BigInt& a, const BigInt& b) { return big_str(a) + "/" + big_str(b); }

double ratio(const BigInt& a, const BigInt& b) { return b == 0 ? 0.0 : a.convert_to<double>() / b.convert_to<double>(); }

int metric_level_for(const Window& w, int r) {
    if (r <= w.level()) return r;
    if (w.same_graph(w.level(), r)) return w.level();
    throw Error("WindowTooSmall", "window level " + std::to_string(w.level()) + " below G_" + std::to_string(r));
}

int64_t core_count(const Window& w, int64_t core) {
    if (w.as_line()) return 2 * std::min(core, w.radius()) + 1;
    int64_t n = 0;
    for (Id id = 0; id < static_cast<Id>(w.size()); ++id) n += depth_of(w, id) <= core;
    return n;
}

}  // namespace

Certificate verify_syndetic(const Labeling& lab, int j, int64_t t, int64_t rho, int metric_level) {
    const int64_t cc = lab.core - t;
    if (cc < 0) throw Error("CoreTooSmall", "core " + std::to_string(lab.core) + " cannot hold radius " + std::to_string(t) + " balls");
    auto cs = enumerate_ball_types(lab, j, t, cc);
    auto c = all_syndetic(lab, cs, rho, cc, metric_level);
    c.stage = lab.stage;
    return c;
}

Certificate verify_minimality(const Labeling& lab, int max_j, int64_t max_t) {
    const auto& sch = lab.sch;
    Certificate c;
    c.name = "minimality";
    c.stage = lab.stage;
    c.core = lab.core;
    auto& rows = c.measured["checks"] = nlohmann::ordered_json::array();
    for (int j = 1; j <= max_j; ++j)
        for (int64_t t = 0; t <= max_t; ++t) {
            int n = j;
            while (n <= sch.stages() && sch.s(n) <= t) ++n;
            if (n + 1 > lab.stage)
                throw Error("CoreTooSmall", "type (" + std::to_string(j) + ", " + std::to_string(t) + ") needs stage " +
                                                std::to_string(n + 1) + " but the labeling is at stage " +
                                                std::to_string(lab.stage));
            const int64_t rho = 3 * sch.r(n + 1);
            auto sc = verify_syndetic(lab, j, t, rho);
            for (auto& wi : sc.witnesses) c.fail("(" + std::to_string(j) + ", " + std::to_string(t) + ") " + wi);
            rows.push_back({{"j", j}, {"t", t}, {"stage", n}, {"rho", rho}, {"types", sc.measured["types"]},
                            {"test_core", sc.core}, {"pass", sc.pass}});
        }
    return c;
}

Certificate verify_minimality_all(const Labeling& lab) {
    const auto& sch = lab.sch;
    Certificate c;
    c.name = "minimality";
    c.stage = lab.stage;
    c.core = lab.core;
    auto& rows = c.measured["checks"] = nlohmann::ordered_json::array();
    for (int n = 1; n + 1 <= lab.stage && n <= sch.stages(); ++n) {
        const int64_t t = sch.s(n) - 1, rho = 3 * sch.r(n + 1);
        auto sc = verify_syndetic(lab, n, t, rho);
        for (auto& wi : sc.witnesses) c.fail("(" + std::to_string(n) + ", " + std::to_string(t) + ") " + wi);
        rows.push_back({{"j", n}, {"t", t}, {"rho", rho}, {"covers", "j <= " + std::to_string(n) + ", t < " + std::to_string(sch.s(n))},
                        {"types", sc.measured["types"]}, {"unverified_points", sc.measured["unverified_points"]}, {"pass", sc.pass}});
    }
    if (rows.empty()) throw Error("CoreTooSmall", "minimality needs at least two stages");
    return c;
}

Certificate verify_freeness(const Labeling& lab, int r_max) {
    const Window& w = *lab.win;
    const auto& sch = lab.sch;
    Certificate c;
    c.name = "freeness";
    c.stage = lab.stage;
    c.core = lab.core;
    auto& table = c.measured["table"] = nlohmann::ordered_json::array();
    const int Smax = std::max(lab.D, lab.M);
    const int64_t core = lab.core;
    int S = 1;
    std::vector<uint64_t> P(w.size());
    auto fill = [&] {
        parallel_for(w.size(), [&](int64_t a, int64_t b) {
            for (int64_t id = a; id < b; ++id) P[id] = lab.packed(static_cast<Id>(id), S);
        });
    };
    fill();
    // first pair at distance in (0, r] with equal truncations, or {-1, -1}
    auto clash = [&](int r) -> std::pair<Id, Id> {
        if (w.as_line()) {
            const int64_t lo = -std::min(core, w.radius()), hi = -lo;
            for (int64_t x = lo; x <= hi; ++x)
                for (int64_t d = 1; d <= r && x + d <= hi; ++d)
                    if (P[LineWindow::id_of(x)] == P[LineWindow::id_of(x + d)])
                        return {LineWindow::id_of(x), LineWindow::id_of(x + d)};
            return {-1, -1};
        }
        const int lvl = metric_level_for(w, r);
        for (Id x = 0; x < static_cast<Id>(w.size()); ++x) {
            if (depth_of(w, x) > core) continue;
            for (Id y : w.neighborhood(x, r, lvl))
                if (y > x && depth_of(w, y) <= core && P[x] == P[y]) return {x, y};
        }
        return {-1, -1};
    };
    for (int r = 1; r <= r_max; ++r) {
        metric_level_for(w, r);
        std::pair<Id, Id> bad{-1, -1};
        while (S <= Smax && (bad = clash(r)).first >= 0) {
            if (++S <= Smax) fill();
        }
        int64_t bound = -1;
        for (int m = 1; m <= sch.stages(); ++m)
            if (sch.r(m) >= r && sch.f(m) >= r) {
                bound = m;
                break;
            }
        nlohmann::ordered_json row{{"r", r}};
        if (S > Smax) {
            c.fail("r=" + std::to_string(r) + ": " + show(w, bad.first) + " and " + show(w, bad.second) +
                   " agree at every depth up to " + std::to_string(Smax));
            row["S"] = -1;
        } else {
            row["S"] = S;
        }
        row["schedule_bound"] = bound;
        table.push_back(row);
    }
    return c;
}

int64_t separation_depth(const Certificate& freeness, int r) {
    for (auto& row : freeness.measured.at("table"))
        if (row.at("r").get<int>() == r) return row.at("S").get<int64_t>();
    return -1;
}

Certificate density_bound(const Window& w, const std::vector<Id>& V, int64_t t, int64_t s, int level, int64_t core) {
    if (s >= t) throw Error("Usage", "density bound needs s < t");
    Certificate c;
    c.name = "density";
    c.core = core;
    // separation
    if (w.as_line()) {
        std::vector<int64_t> xs;
        for (Id v : V) xs.push_back(LineWindow::coord(v));
        std::sort(xs.begin(), xs.end());
        for (size_t k = 1; k < xs.size(); ++k)
            if (xs[k] - xs[k - 1] <= t)
                throw Error("NotSeparated", std::to_string(xs[k - 1]) + " and " + std::to_string(xs[k]) + " within " +
                                                std::to_string(t));
    } else {
        std::vector<char> in(w.size(), 0);
        for (Id v : V) in[v] = 1;
        for (Id v : V)
            for (Id y : w.neighborhood(v, t, level))
                if (y != v && in[y]) throw Error("NotSeparated", show(w, v) + " and " + show(w, y) + " within " + std::to_string(t));
    }
    int64_t inside = 0;
    if (!V.empty()) {
        auto d = w.dist_to_set(V, level, s);
        for (Id id = 0; id < static_cast<Id>(w.size()); ++id)
            if (d[id] >= 0 && depth_of(w, id) <= core) ++inside;
    }
    const int64_t total = core_count(w, core);
    const BigInt Bs = ball_count(w, s, level), Bh = ball_count(w, t / 2, level), Bt = ball_count(w, t, level);
    const BigInt num = inside, den = total;
    c.pass = num * Bh <= Bs * den;
    if (!c.pass) c.fail("density " + frac(num, den) + " exceeds " + frac(Bs, Bh));
    c.measured["t"] = t;
    c.measured["s"] = s;
    c.measured["points"] = V.size();
    c.measured["covered"] = inside;
    c.measured["core_points"] = total;
    c.measured["density"] = ratio(num, den);
    c.measured["bound"] = frac(Bs, Bh);
    c.measured["bound_value"] = ratio(Bs, Bh);
    c.measured["literal_bound"] = frac(Bs, Bt);
    c.measured["literal_holds"] = num * Bt <= Bs * den;
    return c;
}

Certificate verify_stability(const std::vector<StageState>& states) {
    Certificate c;
    c.name = "stability";
    if (states.empty()) return c;
    c.stage = states.back().n;
    c.core = states.back().lab.core;
    auto& rows = c.measured["transitions"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k + 1 < states.size(); ++k) {
        const auto& a = states[k];
        const auto& b = states[k + 1];
        const Window& w = *a.lab.win;
        const auto& sch = a.lab.sch;
        const int n = a.n;
        const int lvl = a.lab.level(n + 1);
        auto V = a.lab.q_set(n + 1);
        nlohmann::ordered_json row{{"from", n}, {"to", b.n}, {"changed", b.changed.size()}};
        int64_t nearest = w.radius() + 1;
        for (Id v : V) nearest = std::min(nearest, depth_of(w, v));
        const int64_t reach = sch.s(n + 1) + 4 * sch.r(n) + sch.r(n) / 2;
        const int64_t excl = nearest - reach;
        int64_t least = kInf, dirty = 0;
        if (!b.changed.empty()) {
            auto d = w.dist_to_set(V, lvl);
            for (Id x : b.changed) {
                least = std::min(least, depth_of(w, x));
                dirty = std::max(dirty, d[x] < 0 ? kInf : d[x]);
            }
        }
        row["least_change_depth"] = least == kInf ? -1 : least;
        row["exclusion_radius"] = excl;
        row["five_s"] = 5 * sch.s(n + 1);
        row["beyond_five_s"] = least == kInf || least >= 5 * sch.s(n + 1);
        if (least != kInf && least < excl)
            c.fail("stage " + std::to_string(b.n) + " changed depth " + std::to_string(least) + " inside the exclusion radius " +
                   std::to_string(excl));
        row["dirty_radius"] = dirty;
        const int64_t t = sch.r(n + 1), core = b.lab.core;
        if (!b.changed.empty() && dirty >= t) {
            c.fail("stage " + std::to_string(b.n) + " changes reach " + std::to_string(dirty) + " from the markers");
        } else if (!b.changed.empty()) {
            auto db = density_bound(w, V, t, dirty, lvl, core);
            int64_t qin = 0;
            for (Id x : b.changed) qin += depth_of(w, x) <= core;
            const BigInt Bs = ball_count(w, dirty, lvl), Bh = ball_count(w, t / 2, lvl);
            const BigInt num = qin, den = core_count(w, core);
            bool ok = num * Bh <= Bs * den;
            row["density"] = ratio(num, den);
            row["bound"] = db.measured["bound"];
            row["bound_value"] = db.measured["bound_value"];
            row["neighbourhood_density"] = db.measured["density"];
            row["literal_holds"] = db.measured["literal_holds"];
            if (!ok || !db.pass) c.fail("stage " + std::to_string(b.n) + " change density " + frac(num, den) + " above " + frac(Bs, Bh));
        } else {
            row["density"] = 0.0;
        }
        rows.push_back(row);
    }
    if (states.front().lab.sch.mode == "exact") {
        auto r2 = rule2_tail(states.front().lab.sch, states.front().lab.win->gens());
        c.measured["rule2"] = r2.measured;
        for (auto& wi : r2.witnesses) c.fail(wi);
    }
    return c;
}

Certificate rule2_tail(const Schedule& sch, const GeneratorSystem& gs) {
    Certificate c;
    c.name = "rule2_tail";
    auto& rows = c.measured["checks"] = nlohmann::ordered_json::array();
    for (int m = 1; m < sch.stages(); ++m) {
        const auto& nx = sch.at(m + 1);
        const int f = nx.f;
        auto order = subgroup_order(gs, f);
        nlohmann::ordered_json row{{"m", m}, {"level", f}};
        if (order.kind == Count::Infinite) {
            row["holds"] = true;
            row["reason"] = "infinite subgroup";
        } else {
            auto b = ball_size_formula(gs, f, BigInt(5) * nx.s);
            if (b.kind != Count::Finite || order.kind != Count::Finite) {
                row["holds"] = false;
                row["reason"] = "unknown ball or subgroup size";
                c.fail("m=" + std::to_string(m) + ": cannot evaluate");
            } else {
                BigInt lhs = b.value;
                for (int k = 0; k <= m; ++k) lhs *= 10;
                bool ok = lhs < order.value;
                row["holds"] = ok;
                row["lhs"] = big_str(lhs);
                row["rhs"] = big_str(order.value);
                if (!ok) c.fail("m=" + std::to_string(m) + ": " + big_str(lhs) + " >= " + big_str(order.value));
            }
        }
        rows.push_back(row);
    }
    return c;
}

}  // namespace forge
