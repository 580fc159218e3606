#include "forge/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace forge {

namespace {

using boost::multiprecision::pow;

const BigInt kSmallLimit = BigInt(1) << 62;

BigInt ball(const GeneratorSystem& gs, int level, const BigInt& t) {
    auto c = ball_size_formula(gs, level, t);
    if (c.kind != Count::Finite)
        throw Error("BackendCannotCount", "no exact ball size at level " + std::to_string(level) +
                                              ", radius " + big_str(t));
    return c.value;
}

// |Gamma_level| < bound, with infinite groups always passing
bool group_exceeds(const GeneratorSystem& gs, int level, const BigInt& bound) {
    auto c = subgroup_order(gs, level);
    if (c.kind == Count::Infinite) return true;
    if (c.kind == Count::Unknown)
        throw Error("BackendCannotCount", "order of level " + std::to_string(level) + " unknown");
    return bound < c.value;
}

// smallest t with |B_t| >= target, or -1 if the ball saturates below it
BigInt least_radius(const GeneratorSystem& gs, int level, const BigInt& target) {
    if (ball(gs, level, 0) >= target) return 0;
    BigInt hi = 1;
    BigInt prev = ball(gs, level, 0);
    while (true) {
        BigInt b = ball(gs, level, hi);
        if (b >= target) break;
        if (b == prev && hi > 64) return -1;
        prev = b;
        hi *= 2;
    }
    BigInt lo = hi / 2;  // ball(lo) < target
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (ball(gs, level, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// first level past `after` containing points at least T away
int far_level(const GeneratorSystem& gs, int after, const BigInt& T, int budget = 256) {
    for (int n = after + 1; n <= after + budget; ++n) {
        auto c = subgroup_order(gs, n);
        if (c.kind == Count::Infinite) return n;
        if (T <= 1000000) {
            try {
                auto fp = far_point_index(gs, static_cast<int64_t>(T), n);
                if (fp.n <= n) return std::max(fp.n, n);
            } catch (const Error&) {
            }
        }
    }
    throw Error("ValueTooLarge", "no level within budget has points " + big_str(T) + " away");
}

double log2_big(const BigInt& v) {
    if (v <= 0) return 0;
    size_t bits = boost::multiprecision::msb(v);
    if (bits < 60) return std::log2(static_cast<double>(v));
    BigInt top = v >> (bits - 52);
    return std::log2(static_cast<double>(top)) + static_cast<double>(bits - 52);
}

// base^exp, or empty with the expression filled in when it would not fit
bool power_or_expr(const BigInt& base, const BigInt& exp, BigInt& out, std::string& expr,
                   double max_bits = 1 << 20) {
    if (exp > 100000000 || log2_big(base) * static_cast<double>(exp) > max_bits) {
        expr = big_str(base) + "^" + big_str(exp);
        return false;
    }
    out = pow(base, static_cast<unsigned>(exp));
    return true;
}

int64_t small(const BigInt& v, const char* what) {
    if (v > kSmallLimit || v < -kSmallLimit)
        throw Error("ValueTooLarge", std::string(what) + " = " + big_str(v) + " does not fit a run");
    return static_cast<int64_t>(v);
}

nlohmann::ordered_json big_json(const BigInt& v) { return big_str(v); }

BigInt parse_big(const nlohmann::json& j) {
    if (j.is_number_integer()) return BigInt(j.get<int64_t>());
    return BigInt(j.get<std::string>());
}

}  // namespace

nlohmann::json ScaledConfig::to_json() const {
    return {{"s1", s1},       {"c", c}, {"growth", growth}, {"empirical_types", empirical_types},
            {"site_budget", site_budget}, {"card_slack", card_slack}};
}

ScaledConfig ScaledConfig::from_json(const nlohmann::json& j) {
    ScaledConfig c;
    c.s1 = j.value("s1", c.s1);
    c.c = j.value("c", c.c);
    c.growth = j.value("growth", c.growth);
    c.empirical_types = j.value("empirical_types", c.empirical_types);
    c.site_budget = j.value("site_budget", c.site_budget);
    c.card_slack = j.value("card_slack", c.card_slack);
    return c;
}

int64_t Schedule::s(int m) const { return small(at(m).s, "s"); }
int64_t Schedule::r(int m) const { return m == 0 ? 0 : small(at(m).r, "r"); }
int64_t Schedule::F(int m) const { return small(at(m).F, "|F|"); }
int64_t Schedule::s_next() const {
    if (!next_s_expr.empty()) throw Error("ValueTooLarge", "next s = " + next_s_expr);
    return small(next_s, "next s");
}

nlohmann::ordered_json Schedule::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = mode;
    if (mode == "scaled") j["config"] = cfg.to_json();
    j["stages"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < st.size(); ++i) {
        const auto& r = st[i];
        nlohmann::ordered_json e;
        e["m"] = i + 1;
        e["s"] = big_json(r.s);
        e["f"] = r.f;
        e["r"] = big_json(r.r);
        e["cardF"] = big_json(r.F);
        if (r.kappa_expr.empty())
            e["kappa"] = big_json(r.kappa);
        else
            e["kappa_expr"] = r.kappa_expr;
        if (r.sites >= 0) e["sites"] = r.sites;
        e["notes"] = r.notes;
        j["stages"].push_back(e);
    }
    if (next_s_expr.empty())
        j["next_s"] = big_json(next_s);
    else
        j["next_s_expr"] = next_s_expr;
    return j;
}

Schedule Schedule::from_json(const nlohmann::ordered_json& j) {
    Schedule s;
    s.mode = j.at("mode").get<std::string>();
    if (j.contains("config")) s.cfg = ScaledConfig::from_json(j["config"]);
    for (auto& e : j.at("stages")) {
        StageRecord r;
        r.s = parse_big(e.at("s"));
        r.f = e.at("f").get<int>();
        r.r = parse_big(e.at("r"));
        r.F = parse_big(e.at("cardF"));
        if (e.contains("kappa")) r.kappa = parse_big(e["kappa"]);
        r.kappa_expr = e.value("kappa_expr", std::string());
        r.sites = e.value("sites", int64_t(-1));
        if (e.contains("notes")) r.notes = e["notes"];
        s.st.push_back(r);
    }
    if (j.contains("next_s")) s.next_s = parse_big(j["next_s"]);
    s.next_s_expr = j.value("next_s_expr", std::string());
    return s;
}

Schedule exact_schedule(const GeneratorSystem& gs, int stages) {
    if (stages < 1) throw Error("Usage", "stages must be positive");
    Schedule sch;
    sch.mode = "exact";
    BigInt s = 10;
    int f = 0;
    // first level: 10|B_50| < |Gamma_f|
    for (int n = 1; n <= 4096 && f == 0; ++n)
        if (group_exceeds(gs, n, 10 * ball(gs, n, 50))) f = n;
    if (f == 0) throw Error("Infeasible", "no level with 10|B_50| < |Gamma_f| within 4096 levels");
    BigInt sum = 0;  // sum over j <= m of 5 r_{j-1} + s_j
    BigInt r_prev = 0;
    BigInt ten_m = 1;
    for (int m = 1; m <= stages; ++m) {
        if (m > 1) {
            if (!sch.next_s_expr.empty())
                throw Error("ValueTooLarge", "stage " + std::to_string(m) + " needs s = " +
                                                 sch.next_s_expr + ", which cannot be expanded");
            s = sch.next_s;
            int nT = far_level(gs, 0, s);
            int nf = std::max(f, nT) + 1;
            BigInt bound = ten_m * 10 * ball(gs, nf, 5 * s);
            int guard = 0;
            while (!group_exceeds(gs, nf, bound)) {
                if (++guard > 4096)
                    throw Error("Infeasible", "no level with 10^m |B_5s| < |Gamma_f|");
                ++nf;
                bound = ten_m * 10 * ball(gs, nf, 5 * s);
            }
            f = nf;
        }
        ten_m *= 10;
        StageRecord rec;
        rec.s = s;
        rec.f = f;
        sum += 5 * r_prev + s;
        rec.notes["s"] = m == 1 ? "fixed start value" : "1000 r kappa of the previous stage";
        rec.notes["f"] = m == 1 ? "least level with 10|B_50| < |Gamma|"
                                : "least level past max(f, far-point level) with 10^m|B_5s| < |Gamma|";

        BigInt target = ten_m * ball(gs, f, 5 * s);
        BigInt t = least_radius(gs, f, target);
        if (t < 0) throw Error("Infeasible", "|B_{r/10}| never reaches 10^m |B_{5s}| at level " +
                                                 std::to_string(f));
        BigInt r = 10 * t;
        rec.notes["r"] = "least r with |B_{floor(r/10)}| >= 10^m |B_{5s}|";
        if (m > 1 && r < 1000 * sum) {
            r = 1000 * sum;
            rec.notes["r"] = "1000 * sum(5 r_{j-1} + s_j)";
        }
        if (r <= s) r = s + 1;
        rec.r = r;
        rec.F = ball(gs, f, r) + 1;
        rec.notes["cardF"] = "|B_r| + 1";
        BigInt bs = ball(gs, f, s);
        power_or_expr(rec.F, bs, rec.kappa, rec.kappa_expr);
        rec.notes["kappa"] = "cardF^|B_s|";
        if (rec.kappa_expr.empty()) {
            sch.next_s = 1000 * r * rec.kappa;
            sch.next_s_expr.clear();
        } else {
            sch.next_s = 0;
            sch.next_s_expr = "1000*" + big_str(r) + "*" + rec.kappa_expr;
        }
        sch.st.push_back(rec);
        r_prev = r;
    }
    return sch;
}

int64_t annulus_capacity(int64_t s_next, int64_t r, int64_t c) {
    int64_t lo = (s_next + 2) / 3, hi = 2 * s_next / 3;
    int64_t width = hi - lo;
    if (width < 2 * r) return 0;
    int64_t per_side = (width - 2 * r) / (c * r + 2 * r + 1) + 1;
    return 2 * per_side;
}

Schedule scaled_schedule(const GeneratorSystem& gs, int stages, const ScaledConfig& cfg,
                         const std::vector<int64_t>& observed_sites) {
    if (stages < 1) throw Error("Usage", "stages must be positive");
    if (cfg.s1 < 1 || cfg.growth < 1 || cfg.site_budget < 0)
        throw Error("Infeasible", "multipliers must be at least 1");
    if (cfg.c < 20) throw Error("Infeasible", "site spacing c = " + std::to_string(cfg.c) + " < 20");
    if (cfg.card_slack < 1)
        throw Error("Infeasible", "|B_{r_1}| < |F_1| violated: requested |F| = |B_r| + " +
                                      std::to_string(cfg.card_slack));
    Schedule sch;
    sch.mode = "scaled";
    sch.cfg = cfg;
    int64_t s = cfg.s1, sum = 0, r_prev = 0;
    int f = 0;
    BigInt ten_m = 1;
    for (int m = 1; m <= stages; ++m) {
        ten_m *= 10;
        if (m > 1) s = small(sch.next_s, "s");
        // least level past f(m-1) with 10^m |B_5s| < |Gamma_f|
        int nf = f + 1;
        while (!group_exceeds(gs, nf, ten_m * ball(gs, nf, 5 * s)))
            if (++nf > f + 4096) throw Error("Infeasible", "no level with 10^m|B_5s| < |Gamma_f|");
        f = nf;
        StageRecord rec;
        rec.s = s;
        rec.f = f;
        rec.notes["s"] = m == 1 ? "configured" : "max(60 r + 3, site capacity) of the previous stage";
        rec.notes["f"] = "least level past the previous with 10^m|B_5s| < |Gamma|";
        sum += 5 * r_prev + s;
        int64_t r = std::max(cfg.growth * sum, 10 * s + 1);
        rec.notes["r"] = cfg.growth * sum >= 10 * s + 1 ? "growth * sum(5 r_{j-1} + s_j)" : "10 s + 1";
        rec.r = r;
        rec.F = ball(gs, f, r) + cfg.card_slack;
        rec.notes["cardF"] = "|B_r| + " + std::to_string(cfg.card_slack);
        power_or_expr(rec.F, ball(gs, f, s), rec.kappa, rec.kappa_expr, 4096);
        rec.notes["kappa"] = "cardF^|B_s|, informational";

        int64_t tau = cfg.site_budget;
        if (cfg.empirical_types && static_cast<size_t>(m) <= observed_sites.size())
            tau = observed_sites[m - 1];
        rec.sites = tau;
        int64_t next = r + 1;
        if (tau > 0) {
            next = std::max(next, 60 * r + 3);
            while (annulus_capacity(next, r, cfg.c) < tau) next += std::max<int64_t>(1, next / 64);
            // walk back to the least value with enough room
            int64_t step = std::max<int64_t>(1, next / 64);
            while (step > 0) {
                if (next - step >= 60 * r + 3 && annulus_capacity(next - step, r, cfg.c) >= tau)
                    next -= step;
                else
                    step /= 2;
            }
            rec.notes["next_s"] = "max(60 r + 3, room for " + std::to_string(tau) + " sites)";
        } else {
            rec.notes["next_s"] = "r + 1, no sites requested";
        }
        sch.next_s = next;
        sch.st.push_back(rec);
        r_prev = r;
    }
    return sch;
}

Certificate check_schedule(const GeneratorSystem& gs, const Schedule& sch) {
    Certificate c;
    c.name = "schedule";
    auto& checks = c.measured["checks"] = nlohmann::ordered_json::array();
    auto check = [&](bool ok, const std::string& what) {
        checks.push_back({{"check", what}, {"pass", ok}});
        if (!ok) c.fail(what);
    };
    BigInt sum = 0, r_prev = 0, ten_m = 1;
    int f_prev = 0;
    for (int m = 1; m <= sch.stages(); ++m) {
        const auto& e = sch.at(m);
        std::string tag = " (m=" + std::to_string(m) + ")";
        ten_m *= 10;
        sum += 5 * r_prev + e.s;
        check(r_prev < e.s && e.s < e.r, "interleaving s_m < r_m" + tag);
        check(e.f > f_prev, "f increasing" + tag);
        check(ball(gs, e.f, e.r) < e.F, "|B_r| < |F|" + tag);
        check(group_exceeds(gs, e.f, ten_m * ball(gs, e.f, 5 * e.s)), "10^m |B_5s| < |Gamma_f|" + tag);
        if (sch.mode == "exact") {
            if (m == 1) {
                check(e.s == 10, "s_1 = 10");
                check(group_exceeds(gs, e.f, 10 * ball(gs, e.f, 50)), "10|B_50| < |Gamma_f(1)|");
            }
            check(ball(gs, e.f, e.r / 10) >= ten_m * ball(gs, e.f, 5 * e.s),
                  "|B_{r/10}| >= 10^m |B_5s|" + tag);
            if (m > 1) check(e.r >= 1000 * sum, "r >= 1000 sum(5 r_{j-1} + s_j)" + tag);
            if (e.kappa_expr.empty()) {
                BigInt k = 1, base = e.F;
                BigInt ex = ball(gs, e.f, e.s);
                // square and multiply, separate from the builder's pow
                while (ex > 0) {
                    if ((ex & 1) != 0) k *= base;
                    base *= base;
                    ex >>= 1;
                }
                check(k == e.kappa, "kappa = |F|^|B_s|" + tag);
                BigInt next = m < sch.stages() ? sch.at(m + 1).s : sch.next_s;
                if (m < sch.stages() || sch.next_s_expr.empty())
                    check(next == 1000 * e.r * e.kappa, "s_{m+1} = 1000 r kappa" + tag);
            } else {
                check(e.kappa_expr == big_str(e.F) + "^" + big_str(ball(gs, e.f, e.s)),
                      "kappa expression = |F|^|B_s|" + tag);
            }
        } else {
            const auto& cfg = sch.cfg;
            check(cfg.c >= 20, "c >= 20");
            check(e.r >= cfg.growth * sum, "r >= growth sum(5 r_{j-1} + s_j)" + tag);
            check(e.r >= 10 * e.s + 1, "r >= 10 s + 1" + tag);
            BigInt next = m < sch.stages() ? sch.at(m + 1).s : sch.next_s;
            check(next > e.r, "r_m < s_{m+1}" + tag);
            if (e.sites > 0 && next <= kSmallLimit && e.r <= kSmallLimit) {
                int64_t nx = static_cast<int64_t>(next), r = static_cast<int64_t>(e.r);
                check(nx >= 60 * r + 3, "s_{m+1} >= 60 r + 3" + tag);
                check(annulus_capacity(nx, r, cfg.c) >= e.sites, "annulus holds the sites" + tag);
            }
        }
        r_prev = e.r;
        f_prev = e.f;
    }
    return c;
}

int64_t recommended_radius(const Schedule& sch, int stages) {
    int64_t R = 11 * sch.s(stages) + 6 * sch.r(stages - 1) + 2;
    for (int i = 1; i < stages; ++i) R += sch.r(i);
    return R;
}

std::vector<Id> select_annulus_sites(const Window& w, Id z, int level, const std::vector<Id>& T,
                                     int64_t count, int64_t s_next, int64_t r, int64_t c) {
    if (count <= 0) return {};
    int64_t lo = (s_next + 2) / 3, hi = 2 * s_next / 3;
    if (w.depth(z, w.level()) + hi > w.radius())
        throw Error("CapacityExceeded", "annulus leaves the window");
    std::vector<int64_t> dz;
    if (!w.as_line()) dz = w.dist_to_set({z}, level, hi);
    std::vector<std::pair<int64_t, Id>> cand;
    for (Id t : T) {
        int64_t d = w.as_line() ? w.distance(z, t, level) : dz[t];
        if (d >= lo && d <= hi) cand.push_back({d, t});
    }
    std::sort(cand.begin(), cand.end());
    std::vector<Id> out;
    std::vector<char> blocked(w.size(), 0);
    for (auto& [d, t] : cand) {
        if (blocked[t]) continue;
        out.push_back(t);
        if (static_cast<int64_t>(out.size()) == count) break;
        for (Id y : w.neighborhood(t, c * r, level)) blocked[y] = 1;
    }
    if (static_cast<int64_t>(out.size()) < count)
        throw Error("CapacityExceeded", "only " + std::to_string(out.size()) + " of " +
                                            std::to_string(count) + " sites fit in the annulus");
    return out;
}

}  // namespace forge
