#include "forge/labeling.hpp"

#include <algorithm>
#include <unordered_map>

#include "forge/sparse.hpp"

namespace forge {

namespace {

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t kMod = (uint64_t(1) << 61) - 1;
constexpr uint64_t kBase[2] = {0x1f2e3d4c5b6a798ULL % kMod, 0x0123456789abcdeULL % kMod};

uint64_t mulmod(uint64_t a, uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    uint64_t lo = static_cast<uint64_t>(p & kMod), hi = static_cast<uint64_t>(p >> 61);
    uint64_t s = lo + hi;
    return s >= kMod ? s - kMod : s;
}
uint64_t addmod(uint64_t a, uint64_t b) {
    uint64_t s = a + b;
    return s >= kMod ? s - kMod : s;
}
uint64_t submod(uint64_t a, uint64_t b) { return a >= b ? a - b : a + kMod - b; }

uint64_t element_hash(const Window& w, Id id, uint64_t seed) {
    if (w.as_line()) return mix(seed ^ mix(static_cast<uint64_t>(LineWindow::coord(id))));
    auto j = w.encode(id);
    if (j.is_number_integer()) return mix(seed ^ mix(static_cast<uint64_t>(j.get<int64_t>())));
    uint64_t h = 1469598103934665603ULL;
    for (char ch : j.dump()) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    return mix(seed ^ h);
}

// colors present with their counts; finds the least absent color >= 1
class FreeColors {
public:
    explicit FreeColors(int64_t n) : cnt_(n, 0), bits_((n + 63) / 64, 0), full_((bits_.size() + 63) / 64, 0) {}
    void add(int32_t c) {
        if (c <= 0) return;
        if (cnt_[c]++ == 0) {
            bits_[c >> 6] |= uint64_t(1) << (c & 63);
            if (bits_[c >> 6] == ~uint64_t(0)) full_[c >> 12] |= uint64_t(1) << ((c >> 6) & 63);
        }
    }
    void remove(int32_t c) {
        if (c <= 0) return;
        if (--cnt_[c] == 0) {
            bits_[c >> 6] &= ~(uint64_t(1) << (c & 63));
            full_[c >> 12] &= ~(uint64_t(1) << ((c >> 6) & 63));
        }
    }
    bool used(int32_t c) const { return c > 0 && cnt_[c] > 0; }
    // least color >= 1 not present, or -1
    int64_t least_free() const {
        for (size_t s = 0; s < full_.size(); ++s) {
            uint64_t f = full_[s];
            while (f != ~uint64_t(0)) {
                int b = __builtin_ctzll(~f);
                size_t wi = s * 64 + b;
                if (wi >= bits_.size()) return -1;
                uint64_t word = bits_[wi];
                if (wi == 0) word |= 1;  // skip color 0
                if (word != ~uint64_t(0)) {
                    int64_t c = static_cast<int64_t>(wi) * 64 + __builtin_ctzll(~word);
                    return c < static_cast<int64_t>(cnt_.size()) ? c : -1;
                }
                f |= uint64_t(1) << b;
            }
        }
        return -1;
    }

private:
    std::vector<int32_t> cnt_;
    std::vector<uint64_t> bits_, full_;
};

void recolor_line(Labeling& lab, int m, std::vector<Id> region) {
    const Window& w = *lab.win;
    auto& L = lab.f[m - 1];
    const int64_t r = lab.sch.r(m), R = w.radius(), ncol = lab.sch.F(m);
    std::vector<int64_t> qs;
    for (Id id : lab.q_set(m)) qs.push_back(LineWindow::coord(id));
    std::sort(qs.begin(), qs.end());
    std::vector<int64_t> xs;
    xs.reserve(region.size());
    for (Id id : region)
        if (L[id] != 0) xs.push_back(LineWindow::coord(id));
    std::sort(xs.begin(), xs.end());
    for (int64_t x : xs) L[LineWindow::id_of(x)] = -1;

    FreeColors fc(ncol);
    // one left-to-right pass; pick returns the color or -1 to leave x for later
    auto sweep = [&](const std::vector<int64_t>& pts, auto pick) {
        int64_t lo = 0, hi = -1;
        bool empty = true;
        auto add = [&](int64_t x) { fc.add(L[LineWindow::id_of(x)]); };
        auto rem = [&](int64_t x) { fc.remove(L[LineWindow::id_of(x)]); };
        std::vector<int64_t> left;
        for (int64_t x : pts) {
            int64_t a = std::max(-R, x - r), b = std::min(R, x + r);
            if (empty || a > hi) {
                for (int64_t y = lo; y <= hi && !empty; ++y) rem(y);
                lo = a;
                hi = a - 1;
                empty = false;
            }
            while (lo < a) rem(lo++);
            while (hi < b) add(++hi);
            int64_t c = pick(x);
            if (c < 1) {
                left.push_back(x);
                continue;
            }
            L[LineWindow::id_of(x)] = static_cast<int32_t>(c);
            fc.add(static_cast<int32_t>(c));
        }
        for (int64_t y = lo; y <= hi && !empty; ++y) rem(y);
        return left;
    };
    auto rest = sweep(xs, [&](int64_t x) -> int64_t {
        auto it = std::lower_bound(qs.begin(), qs.end(), x);
        int64_t dr = it == qs.end() ? kInf : *it - x;
        int64_t dl = it == qs.begin() ? kInf : x - *(it - 1);
        if (std::min(dl, dr) > r) return -1;
        int32_t cand = dl <= dr ? LineWindow::id_of(dl) : LineWindow::id_of(-dr);
        return fc.used(cand) ? -1 : cand;
    });
    auto stuck = sweep(rest, [&](int64_t) { return fc.least_free(); });
    if (!stuck.empty()) throw Error("ColoringStuck", "no free color at " + std::to_string(stuck[0]));
}

void recolor_graph(Labeling& lab, int m, std::vector<Id> region) {
    const Window& w = *lab.win;
    auto& L = lab.f[m - 1];
    const int lvl = lab.level(m);
    const int64_t r = lab.sch.r(m), ncol = lab.sch.F(m);
    std::sort(region.begin(), region.end());
    region.erase(std::remove_if(region.begin(), region.end(), [&](Id x) { return L[x] == 0; }),
                 region.end());
    if (region.empty()) return;
    // best (depth, offset index) per point from markers near the region
    std::vector<int64_t> best(w.size(), -1);
    auto near = w.dist_to_set(region, lvl, r);
    for (Id y : lab.q_set(m)) {
        if (near[y] < 0) continue;
        auto bc = w.ball_clipped(y, r, lvl);
        for (size_t k = 1; k < bc.size(); ++k) {
            Id x = bc[k];
            if (x < 0) continue;
            if (best[x] < 0 || static_cast<int64_t>(k) < best[x]) best[x] = static_cast<int64_t>(k);
        }
    }
    for (Id x : region) L[x] = -1;
    std::vector<char> used(ncol, 0);
    for (int pass = 0; pass < 2; ++pass)
        for (Id x : region) {
            if (L[x] > 0) continue;
            auto nb = w.neighborhood(x, r, lvl);
            for (Id y : nb)
                if (y != x && L[y] > 0) used[L[y]] = 1;
            int64_t c = -1;
            if (pass == 0) {
                if (best[x] > 0 && best[x] < ncol && !used[best[x]]) c = best[x];
            } else {
                for (int64_t k = 1; c < 0 && k < ncol; ++k)
                    if (!used[k]) c = k;
                if (c < 1) throw Error("ColoringStuck", "no free color at " + w.encode(x).dump());
            }
            if (c > 0) L[x] = static_cast<int32_t>(c);
            for (Id y : nb)
                if (y != x && L[y] > 0) used[L[y]] = 0;
        }
}

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

}  // namespace

std::vector<Id> Labeling::q_set(int m) const {
    std::vector<Id> out;
    const auto& L = f[m - 1];
    for (Id id = 0; id < static_cast<Id>(L.size()); ++id)
        if (L[id] == 0) out.push_back(id);
    return out;
}

uint64_t Labeling::packed(Id id, int j) const {
    uint64_t mask = j >= 32 ? ~uint32_t(0) : ((uint32_t(1) << j) - 1);
    uint64_t h = mix(cbits[id] & mask);
    for (int m = 1; m <= std::min(j, M); ++m) h = mix(h ^ (static_cast<uint64_t>(static_cast<uint32_t>(f[m - 1][id])) + (uint64_t(m) << 40)));
    return h;
}

nlohmann::ordered_json Labeling::to_json() const {
    nlohmann::ordered_json j;
    j["group"] = win->gens().to_json();
    j["schedule"] = sch.to_json();
    j["R"] = win->radius();
    j["level"] = win->level();
    j["core"] = core;
    j["stage"] = stage;
    j["M"] = M;
    j["D"] = D;
    auto& els = j["elements"] = nlohmann::ordered_json::array();
    for (Id id = 0; id < static_cast<Id>(win->size()); ++id) {
        nlohmann::ordered_json e;
        e["word"] = win->encode(id);
        std::string bits;
        for (int k = 0; k < D; ++k) bits.push_back((cbits[id] >> k) & 1 ? '1' : '0');
        e["c_prefix"] = bits;
        auto fl = nlohmann::ordered_json::array();
        for (int m = 1; m <= M; ++m) fl.push_back(f[m - 1][id]);
        e["f_labels"] = fl;
        els.push_back(e);
    }
    return j;
}

CInit parse_cinit(const std::string& s) {
    if (s == "zero") return CInit::Zero;
    if (s == "hash") return CInit::Hash;
    if (s == "digits") return CInit::Digits;
    throw Error("Usage", "unknown C policy " + s);
}

void recolor_layer(Labeling& lab, int m, const std::vector<Id>& region) {
    if (lab.win->as_line())
        recolor_line(lab, m, region);
    else
        recolor_graph(lab, m, region);
}

Labeling initial_clean_labeling(std::shared_ptr<const Window> w, const Schedule& sch, int M,
                                CInit c_init, uint64_t seed, int D, uint64_t marker_seed) {
    if (M < 1 || M > sch.stages()) throw Error("Usage", "layer count outside the schedule");
    if (D < 0) D = std::max(M, 16);
    if (D < M || D > 32) throw Error("Usage", "C-prefix depth must lie in [M, 32]");
    if (sch.f(M) > w->level()) throw Error("WindowTooSmall", "window level below f(M)");
    Labeling lab;
    lab.win = w;
    lab.sch = sch;
    lab.M = M;
    lab.D = D;
    lab.stage = 1;
    // window-greedy layers are maximal inside the window, so only a thin rim is given up
    lab.core = w->radius() - sch.r(1) - 1;
    if (lab.core < 0) throw Error("WindowTooSmall", "no core left after r_1");
    const int64_t n = w->size();
    lab.cbits.assign(n, 0);
    if (c_init != CInit::Zero) {
        uint32_t mask = D >= 32 ? ~uint32_t(0) : ((uint32_t(1) << D) - 1);
        for (Id id = 0; id < n; ++id) {
            uint64_t x = element_hash(*w, id, seed);
            if (c_init == CInit::Hash) {
                lab.cbits[id] = static_cast<uint32_t>(x) & mask;
                continue;
            }
            // y_{2^k} = x_1, y_a = x_{a - 2^k + 1} for 2^k < a < 2^{k+1}
            uint32_t y = 0;
            for (int a = 1; a <= D; ++a) {
                int p = 1;
                while (p * 2 <= a) p *= 2;
                int src = a - p + 1;
                if ((x >> (src - 1)) & 1) y |= uint32_t(1) << (a - 1);
            }
            lab.cbits[id] = y;
        }
    }
    lab.f.assign(M, std::vector<int32_t>(n, -1));
    std::vector<Id> ambient = all_elements(*w);
    for (int m = 1; m <= M; ++m) {
        int lvl = sch.f(m);
        auto forbidden = w->neighborhood(w->identity(), 10 * sch.s(m), lvl);
        std::vector<Id> first;
        if (marker_seed != 0) {
            // greedy in hashed order; the shortlex pass below then adds nothing
            std::vector<std::pair<uint64_t, Id>> order;
            for (Id id : ambient) order.push_back({mix(marker_seed ^ mix(uint64_t(id) + (uint64_t(m) << 33))), id});
            std::sort(order.begin(), order.end());
            std::vector<char> blocked(w->size(), 0);
            for (Id f : forbidden) blocked[f] = 1;
            for (auto& [h, id] : order) {
                if (blocked[id]) continue;
                first.push_back(id);
                for (Id y : w->neighborhood(id, sch.r(m), lvl)) blocked[y] = 1;
            }
        }
        auto T = greedy_maximal_sparse(*w, ambient, sch.r(m), lvl, forbidden, -1, first);
        for (Id q : T.elements) lab.f[m - 1][q] = 0;
        recolor_layer(lab, m, all_elements(*w));
        ambient = T.elements;
    }
    return lab;
}

Certificate verify_clean(const Labeling& lab, bool strict, int64_t core, int max_layer) {
    const Window& w = *lab.win;
    if (core < 0) core = lab.core;
    if (max_layer < 0) max_layer = lab.M;
    Certificate c;
    c.name = strict ? "clean" : "almost-clean";
    c.stage = lab.stage;
    c.core = core;
    auto& per = c.measured["layers"] = nlohmann::ordered_json::array();
    std::vector<Id> prev;
    for (int m = 1; m <= max_layer; ++m) {
        const int lvl = lab.level(m);
        const int64_t r = lab.sch.r(m), ncol = lab.sch.F(m);
        const auto& L = lab.f[m - 1];
        std::string tag = "m=" + std::to_string(m) + " ";
        bool ok1 = true, ok3 = true, ok4 = true, range = true;
        auto Q = lab.q_set(m);
        std::vector<Id> Qnear;
        for (Id q : Q)
            if (w.depth(q, w.level()) <= core + r) Qnear.push_back(q);
        for (Id id = 0; id < static_cast<Id>(w.size()); ++id)
            if (w.depth(id, w.level()) <= core && (L[id] < 0 || L[id] >= ncol)) {
                if (range) c.fail(tag + "label out of range at " + show(w, id));
                range = false;
            }
        // conditions (1)/(2): sparse, nested, maximal
        auto sp = verify_sparse(w, Qnear, r, lvl);
        if (!sp.pass) {
            ok1 = false;
            c.fail(tag + "markers too close: " + sp.witnesses[0]);
        }
        if (m > 1) {
            std::vector<char> inprev(w.size(), 0);
            for (Id q : prev) inprev[q] = 1;
            for (Id q : Qnear)
                if (!inprev[q]) {
                    ok1 = false;
                    c.fail(tag + "marker not in previous layer: " + show(w, q));
                    break;
                }
        }
        auto forb = w.neighborhood(w.identity(), 10 * lab.sch.s(m), lvl);
        bool respects4 = true;
        for (Id x : forb) respects4 &= L[x] != 0;
        auto mx = verify_maximal(w, Q, m == 1 ? all_elements(w) : prev, r, lvl, core,
                                 respects4 ? forb : std::vector<Id>{});
        if (!mx.pass) {
            ok1 = false;
            c.fail(tag + "not maximal: " + mx.witnesses[0]);
        }
        // condition (3)
        if (w.as_line()) {
            std::vector<int64_t> last(ncol + 1, kInf);
            int64_t lo = std::max(-w.radius(), -core - r), hi = std::min(w.radius(), core + r);
            for (int64_t x = lo; x <= hi; ++x) {
                int32_t v = L[LineWindow::id_of(x)];
                if (v < 0 || v >= ncol) continue;
                if (last[v] != kInf && x - last[v] <= r && (std::abs(x) <= core || std::abs(last[v]) <= core)) {
                    if (ok3) c.fail(tag + "equal labels " + std::to_string(last[v]) + " ~ " + std::to_string(x));
                    ok3 = false;
                }
                last[v] = x;
            }
        } else {
            for (Id x = 0; x < static_cast<Id>(w.size()) && ok3; ++x) {
                if (w.depth(x, w.level()) > core) continue;
                for (Id y : w.neighborhood(x, r, lvl))
                    if (y != x && L[y] == L[x]) {
                        c.fail(tag + "equal labels " + show(w, x) + " ~ " + show(w, y));
                        ok3 = false;
                        break;
                    }
            }
        }
        // condition (4)
        int64_t qdist = kInf;
        for (Id q : Q) qdist = std::min(qdist, w.depth(q, lvl));
        if (strict && qdist <= 10 * lab.sch.s(m)) {
            ok4 = false;
            c.fail(tag + "marker within 10 s of e at distance " + std::to_string(qdist));
        }
        per.push_back({{"m", m}, {"markers", Q.size()}, {"sparse_maximal", ok1}, {"proper", ok3},
                       {"labels_in_range", range}, {"far_from_e", ok4},
                       {"nearest_marker", qdist == kInf ? -1 : qdist}});
        prev = std::move(Q);
    }
    return c;
}

std::array<uint64_t, 2> ball_key(const Labeling& lab, Id z, int64_t t, int j) {
    const Window& w = *lab.win;
    std::array<uint64_t, 2> h{0, 0};
    auto feed = [&](uint64_t v) {
        v %= kMod;
        for (int i = 0; i < 2; ++i) h[i] = addmod(mulmod(h[i], kBase[i]), v);
    };
    if (w.as_line()) {
        int64_t c = LineWindow::coord(z);
        for (int64_t x = c - t; x <= c + t; ++x) feed(lab.packed(LineWindow::id_of(x), j));
    } else {
        for (Id y : w.ball(z, t, lab.level(j))) feed(lab.packed(y, j));
    }
    return h;
}

LabeledBall extract_ball(const Labeling& lab, Id z, int64_t t, int j) {
    const Window& w = *lab.win;
    if (j < 1 || j > lab.M) throw Error("LevelMismatch", "layer " + std::to_string(j) + " not present");
    if (w.depth(z, w.level()) + t > lab.core)
        throw Error("BallEscapesCore", "ball of radius " + std::to_string(t) + " at " + show(w, z));
    LabeledBall b;
    b.j = j;
    b.t = t;
    for (Id y : w.ball(z, t, lab.level(j))) b.labels.push_back(lab.packed(y, j));
    b.key = ball_key(lab, z, t, j);
    return b;
}

bool ball_isomorphic(const LabeledBall& a, const LabeledBall& b) {
    if (a.j != b.j || a.t != b.t) throw Error("LevelMismatch", "balls of different level or radius");
    return a.labels == b.labels;
}

int64_t fully_contains(const Labeling& lab, Id big_center, int64_t big_t, const LabeledBall& small) {
    if (small.t >= big_t) return -1;
    const Window& w = *lab.win;
    auto inner = w.ball(big_center, big_t - small.t - 1, lab.level(small.j));
    for (size_t k = 0; k < inner.size(); ++k) {
        if (ball_key(lab, inner[k], small.t, small.j) != small.key) continue;
        std::vector<uint64_t> got;
        for (Id y : w.ball(inner[k], small.t, lab.level(small.j))) got.push_back(lab.packed(y, small.j));
        if (got == small.labels) return static_cast<int64_t>(k);
    }
    return -1;
}

Census enumerate_ball_types(const Labeling& lab, int j, int64_t t, int64_t center_core) {
    const Window& w = *lab.win;
    if (center_core < 0) center_core = lab.core - t;
    if (center_core < 0) throw Error("CoreTooSmall", "radius exceeds the core");
    Census cs;
    cs.j = j;
    cs.t = t;
    cs.center_core = center_core;
    cs.type_of.assign(w.size(), -1);
    std::vector<std::array<uint64_t, 2>> keys;
    std::vector<Id> centers;
    if (w.as_line()) {
        const int64_t lo = -center_core - t, hi = center_core + t, n = hi - lo + 1;
        std::array<std::vector<uint64_t>, 2> pre, pw;
        for (int i = 0; i < 2; ++i) {
            pre[i].assign(n + 1, 0);
            pw[i].assign(2 * t + 2, 1);
            for (int64_t k = 1; k <= 2 * t + 1; ++k) pw[i][k] = mulmod(pw[i][k - 1], kBase[i]);
        }
        for (int64_t p = 0; p < n; ++p) {
            uint64_t v = lab.packed(LineWindow::id_of(lo + p), j) % kMod;
            for (int i = 0; i < 2; ++i) pre[i][p + 1] = addmod(mulmod(pre[i][p], kBase[i]), v);
        }
        // centers in id order so the first occurrence is shortlex-first
        for (int64_t k = 0; k <= 2 * center_core; ++k) {
            Id z = static_cast<Id>(k);
            int64_t c = LineWindow::coord(z);
            int64_t a = c - t - lo, b = c + t - lo + 1;
            std::array<uint64_t, 2> key;
            for (int i = 0; i < 2; ++i) key[i] = submod(pre[i][b], mulmod(pre[i][a], pw[i][2 * t + 1]));
            keys.push_back(key);
            centers.push_back(z);
        }
    } else {
        for (Id z = 0; z < static_cast<Id>(w.size()); ++z) {
            if (w.depth(z, w.level()) > center_core) continue;
            keys.push_back(ball_key(lab, z, t, j));
            centers.push_back(z);
        }
    }
    std::map<std::array<uint64_t, 2>, int32_t> index;
    for (size_t i = 0; i < keys.size(); ++i) {
        auto [it, fresh] = index.emplace(keys[i], 0);
        if (fresh) {
            BallType bt;
            bt.key = keys[i];
            bt.first = centers[i];
            cs.types.push_back(bt);
        }
    }
    std::sort(cs.types.begin(), cs.types.end(), [](auto& a, auto& b) { return a.key < b.key; });
    for (size_t i = 0; i < cs.types.size(); ++i) index[cs.types[i].key] = static_cast<int32_t>(i);
    for (size_t i = 0; i < keys.size(); ++i) {
        int32_t ti = index[keys[i]];
        cs.type_of[centers[i]] = ti;
        cs.types[ti].count++;
        cs.types[ti].first = std::min(cs.types[ti].first, centers[i]);
    }
    return cs;
}

namespace {

Certificate syndetic_impl(const Labeling& lab, const Census& cs, const std::vector<size_t>& which,
                          int64_t rho, int64_t test_core, int metric_level) {
    const Window& w = *lab.win;
    if (metric_level < 0) metric_level = lab.level(cs.j);
    Certificate c;
    c.name = "syndetic";
    c.core = test_core;
    c.measured["rho"] = rho;
    c.measured["radius"] = cs.t;
    c.measured["j"] = cs.j;
    c.measured["metric_level"] = metric_level;
    c.measured["types"] = which.size();
    if (test_core < 0) throw Error("CoreTooSmall", "nothing to test");
    // a miss is only conclusive when the rho-ball stays inside the census core
    const int64_t sure = cs.center_core - rho;
    int64_t missed = 0, unverified = 0;
    if (w.as_line()) {
        std::vector<char> want(cs.types.size(), 0);
        for (size_t t : which) want[t] = 1;
        std::vector<int64_t> last(cs.types.size(), kInf);
        std::vector<char> reported(cs.types.size(), 0);
        // test points in [a, b] have no occurrence of type t within rho
        auto gap = [&](size_t t, int64_t a, int64_t b) {
            a = std::max(a, -test_core);
            b = std::min(b, test_core);
            if (a > b) return;
            int64_t lo = std::max(a, -sure), hi = std::min(b, sure);
            int64_t bad = sure >= 0 && lo <= hi ? hi - lo + 1 : 0;
            missed += bad;
            unverified += (b - a + 1) - bad;
            if (reported[t]) return;
            reported[t] = 1;
            if (bad)
                c.fail("type at " + show(w, cs.types[t].first) + " missing near " + std::to_string(lo));
            else
                c.fail("type at " + show(w, cs.types[t].first) + " unverified near " + std::to_string(a) +
                       " (rho-ball leaves the census core)");
        };
        for (int64_t x = -cs.center_core; x <= cs.center_core; ++x) {
            int32_t t = cs.type_of[LineWindow::id_of(x)];
            if (t < 0 || !want[t]) continue;
            gap(t, last[t] == kInf ? -kInf : last[t] + rho + 1, x - rho - 1);
            last[t] = x;
        }
        for (size_t t : which) gap(t, last[t] == kInf ? -kInf : last[t] + rho + 1, kInf);
    } else {
        for (size_t t : which) {
            std::vector<Id> occ;
            for (Id z = 0; z < static_cast<Id>(w.size()); ++z)
                if (cs.type_of[z] == static_cast<int32_t>(t)) occ.push_back(z);
            auto d = w.dist_to_set(occ, metric_level, rho);
            bool named = false;
            for (Id g = 0; g < static_cast<Id>(w.size()); ++g) {
                const int64_t dg = w.depth(g, w.level());
                if (dg > test_core || d[g] >= 0) continue;
                const bool conclusive = dg <= sure;
                (conclusive ? missed : unverified) += 1;
                if (!named) {
                    named = true;
                    c.fail("type at " + show(w, cs.types[t].first) + (conclusive ? " missing near " : " unverified near ") +
                           show(w, g));
                }
            }
        }
    }
    c.measured["missed_points"] = missed;
    c.measured["unverified_points"] = unverified;
    return c;
}

}  // namespace

Certificate is_syndetic(const Labeling& lab, const Census& census, size_t type_index, int64_t rho,
                        int64_t test_core, int metric_level) {
    return syndetic_impl(lab, census, {type_index}, rho, test_core, metric_level);
}

Certificate all_syndetic(const Labeling& lab, const Census& census, int64_t rho, int64_t test_core,
                         int metric_level) {
    std::vector<size_t> all(census.types.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return syndetic_impl(lab, census, all, rho, test_core, metric_level);
}

}  // namespace forge
