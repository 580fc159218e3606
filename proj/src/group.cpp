#include "forge/group.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace forge {

std::string big_str(const BigInt& v) { return v.str(); }

nlohmann::json Backend::encode(const Elem& a) const { return a; }
Elem Backend::decode(const nlohmann::json& j) const { return j.get<Elem>(); }
nlohmann::json Backend::describe() const { return {{"backend", name()}}; }

namespace {

class Lattice final : public Backend {
public:
    explicit Lattice(int d) : d_(d) {}
    std::string name() const override { return "lattice"; }
    Elem identity() const override { return Elem(d_, 0); }
    Elem mul(const Elem& a, const Elem& b) const override {
        Elem c(d_);
        for (int i = 0; i < d_; ++i) c[i] = a[i] + b[i];
        return c;
    }
    Elem inv(const Elem& a) const override {
        Elem c(d_);
        for (int i = 0; i < d_; ++i) c[i] = -a[i];
        return c;
    }
    nlohmann::json encode(const Elem& a) const override {
        if (d_ == 1) return a[0];
        return a;
    }
    Elem decode(const nlohmann::json& j) const override {
        Elem e = j.is_number() ? Elem{j.get<int64_t>()} : j.get<Elem>();
        if (static_cast<int>(e.size()) != d_) throw Error("BadElement", "lattice dimension mismatch");
        return e;
    }
    nlohmann::json describe() const override { return {{"backend", "lattice"}, {"dim", d_}}; }
    int dim() const { return d_; }

private:
    int d_;
};

// reduced words, letter +-(i+1)
class Free final : public Backend {
public:
    explicit Free(int k) : k_(k) {}
    std::string name() const override { return "free"; }
    Elem identity() const override { return {}; }
    Elem mul(const Elem& a, const Elem& b) const override {
        Elem c = a;
        for (int64_t x : b) {
            if (!c.empty() && c.back() == -x)
                c.pop_back();
            else
                c.push_back(x);
        }
        return c;
    }
    Elem inv(const Elem& a) const override {
        Elem c(a.rbegin(), a.rend());
        for (auto& x : c) x = -x;
        return c;
    }
    nlohmann::json encode(const Elem& a) const override {
        std::string s;
        for (int64_t x : a) s += x > 0 ? char('a' + x - 1) : char('A' - x - 1);
        return s;
    }
    Elem decode(const nlohmann::json& j) const override {
        Elem w;
        for (char ch : j.get<std::string>()) {
            int64_t x = (ch >= 'a' && ch <= 'z') ? ch - 'a' + 1 : -(ch - 'A' + 1);
            if (std::abs(x) > k_ || std::abs(x) < 1) throw Error("BadElement", "letter out of range");
            w = mul(w, Elem{x});
        }
        return w;
    }
    nlohmann::json describe() const override { return {{"backend", "free"}, {"rank", k_}}; }
    int rank() const { return k_; }

private:
    int k_;
};

// finite subsets of {1,2,...}, sorted
class Z2Sum final : public Backend {
public:
    std::string name() const override { return "z2sum"; }
    Elem identity() const override { return {}; }
    Elem mul(const Elem& a, const Elem& b) const override {
        Elem c;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        return c;
    }
    Elem inv(const Elem& a) const override { return a; }
    Elem decode(const nlohmann::json& j) const override {
        Elem e = j.get<Elem>();
        std::sort(e.begin(), e.end());
        Elem c;
        for (auto x : e) c = mul(c, Elem{x});
        return c;
    }
};

class Table final : public Backend {
public:
    Table(std::vector<std::vector<int>> m, int id) : m_(std::move(m)), id_(id) {
        int n = static_cast<int>(m_.size());
        inv_.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            if (static_cast<int>(m_[a].size()) != n) throw Error("BadTable", "table is not square");
            for (int b = 0; b < n; ++b)
                if (m_[a][b] == id_) inv_[a] = b;
        }
        for (int a = 0; a < n; ++a)
            if (inv_[a] < 0) throw Error("BadTable", "element without inverse");
    }
    std::string name() const override { return "table"; }
    Elem identity() const override { return {id_}; }
    Elem mul(const Elem& a, const Elem& b) const override { return {m_[a[0]][b[0]]}; }
    Elem inv(const Elem& a) const override { return {inv_[a[0]]}; }
    nlohmann::json encode(const Elem& a) const override { return a[0]; }
    Elem decode(const nlohmann::json& j) const override { return {j.get<int64_t>()}; }
    nlohmann::json describe() const override {
        return {{"backend", "table"}, {"identity", id_}, {"table", m_}};
    }

private:
    std::vector<std::vector<int>> m_;
    int id_;
    std::vector<int> inv_;
};

BigInt binom(const BigInt& n, int64_t k) {
    if (k < 0 || n < k) return 0;
    BigInt r = 1;
    for (int64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// breadth-first walk of Gamma_level through the backend; visit returns false to stop
template <class Visit>
bool walk_subgroup(const GeneratorSystem& gs, int level, int64_t max_depth, int64_t budget,
                   Visit visit) {
    auto sl = gs.slots(level);
    std::vector<Elem> moves;
    for (auto& s : sl) {
        moves.push_back(s);
        moves.push_back(gs.backend->inv(s));
    }
    std::map<Elem, int64_t> seen;
    std::deque<Elem> q;
    Elem e = gs.backend->identity();
    seen[e] = 0;
    q.push_back(e);
    if (!visit(e, 0)) return true;
    while (!q.empty()) {
        Elem p = q.front();
        q.pop_front();
        int64_t d = seen[p];
        if (d >= max_depth) continue;
        for (auto& m : moves) {
            Elem n = gs.backend->mul(m, p);
            if (seen.count(n)) continue;
            if (static_cast<int64_t>(seen.size()) >= budget) return false;
            seen[n] = d + 1;
            if (!visit(n, d + 1)) return true;
            q.push_back(n);
        }
    }
    return true;
}

}  // namespace

std::shared_ptr<const Backend> make_lattice(int dim) { return std::make_shared<Lattice>(dim); }
std::shared_ptr<const Backend> make_free(int rank) { return std::make_shared<Free>(rank); }
std::shared_ptr<const Backend> make_z2sum() { return std::make_shared<Z2Sum>(); }
std::shared_ptr<const Backend> make_table(std::vector<std::vector<int>> mult, int identity) {
    return std::make_shared<Table>(std::move(mult), identity);
}

Elem GeneratorSystem::sigma(int i) const {
    if (i < 1) throw Error("BadLevel", "generator index starts at 1");
    if (basis_rule) {
        if (i <= static_cast<int>(gens.size())) return gens[i - 1];
        return {static_cast<int64_t>(i)};
    }
    if (gens.empty()) throw Error("BadGenerators", "empty generator list");
    if (i <= static_cast<int>(gens.size())) return gens[i - 1];
    if (repeat_last) return gens.back();
    throw Error("BadLevel", "generator list is finite");
}

int GeneratorSystem::count_at(int level) const {
    if (basis_rule) return level;
    return std::min<int>(level, static_cast<int>(gens.size()));
}

std::vector<Elem> GeneratorSystem::slots(int level) const {
    std::vector<Elem> out;
    std::set<Elem> seen;
    int n = count_at(level);
    for (int i = 1; i <= n; ++i) {
        Elem g = sigma(i);
        if (backend->is_identity(g)) continue;
        if (seen.count(g) || seen.count(backend->inv(g))) continue;
        seen.insert(g);
        out.push_back(g);
    }
    return out;
}

nlohmann::json GeneratorSystem::to_json() const {
    nlohmann::json j = backend->describe();
    if (basis_rule) {
        nlohmann::json g = nlohmann::json::array();
        for (auto& e : gens) g.push_back(backend->encode(e));
        j["generators"] = {{"rule", "basis"}, {"prefix", g}};
    } else {
        nlohmann::json g = nlohmann::json::array();
        for (auto& e : gens) g.push_back(backend->encode(e));
        j["generators"] = g;
        j["repeat_last"] = repeat_last;
    }
    return j;
}

GeneratorSystem GeneratorSystem::from_json(const nlohmann::json& j) {
    GeneratorSystem gs;
    std::string b = j.at("backend").get<std::string>();
    if (b == "lattice")
        gs.backend = make_lattice(j.value("dim", 1));
    else if (b == "free")
        gs.backend = make_free(j.value("rank", 2));
    else if (b == "z2sum")
        gs.backend = make_z2sum();
    else if (b == "table")
        gs.backend = make_table(j.at("table").get<std::vector<std::vector<int>>>(), j.value("identity", 0));
    else
        throw Error("BadConfig", "unknown backend " + b);
    const auto& g = j.at("generators");
    if (g.is_string() || g.is_object()) {
        bool basis = g.is_string() ? g.get<std::string>() == "basis" : g.value("rule", "") == "basis";
        if (!basis || b != "z2sum") throw Error("BadConfig", "generator rule 'basis' needs the z2sum backend");
        gs.basis_rule = true;
        if (g.is_object())
            for (auto& x : g.value("prefix", nlohmann::json::array())) gs.gens.push_back(gs.backend->decode(x));
    } else {
        for (auto& x : g) gs.gens.push_back(gs.backend->decode(x));
        gs.repeat_last = j.value("repeat_last", true);
        if (gs.gens.empty()) throw Error("BadConfig", "no generators");
    }
    return gs;
}

GeneratorSystem integers() {
    GeneratorSystem gs;
    gs.backend = make_lattice(1);
    gs.gens = {{1}};
    return gs;
}

Count ball_size_formula(const GeneratorSystem& gs, int level, const BigInt& t) {
    auto sl = gs.slots(level);
    int64_t k = static_cast<int64_t>(sl.size());
    const std::string nm = gs.backend->name();
    if (nm == "lattice") {
        std::set<size_t> axes;
        for (auto& s : sl) {
            int nz = 0;
            size_t ax = 0;
            for (size_t i = 0; i < s.size(); ++i)
                if (s[i] != 0) ++nz, ax = i;
            if (nz != 1 || std::abs(s[ax]) != 1 || !axes.insert(ax).second) return Count::unknown();
        }
        BigInt sum = 0;
        for (int64_t i = 0; i <= k; ++i) sum += (BigInt(1) << i) * binom(k, i) * binom(t, i);
        return Count::finite(sum);
    }
    if (nm == "free") {
        std::set<int64_t> letters;
        for (auto& s : sl)
            if (s.size() != 1 || !letters.insert(std::abs(s[0])).second) return Count::unknown();
        if (k == 0) return Count::finite(1);
        if (k == 1) return Count::finite(2 * t + 1);
        if (t > 200000) return Count::unknown();
        BigInt p = boost::multiprecision::pow(BigInt(2 * k - 1), static_cast<unsigned>(t));
        return Count::finite(1 + 2 * k * (p - 1) / (2 * k - 2));
    }
    if (nm == "z2sum") {
        std::set<int64_t> idx;
        for (auto& s : sl)
            if (s.size() != 1 || !idx.insert(s[0]).second) return Count::unknown();
        if (t >= k) return Count::finite(BigInt(1) << k);
        BigInt sum = 1, term = 1;
        for (int64_t i = 1; i <= t; ++i) {
            term = term * (k - i + 1) / i;
            sum += term;
        }
        return Count::finite(sum);
    }
    if (nm == "table") {
        int64_t tt = t > 1000000 ? 1000000 : static_cast<int64_t>(t);
        int64_t n = 0;
        walk_subgroup(gs, level, tt, 1 << 22, [&](const Elem&, int64_t) { ++n; return true; });
        return Count::finite(n);
    }
    return Count::unknown();
}

Count subgroup_order(const GeneratorSystem& gs, int level) {
    auto sl = gs.slots(level);
    const std::string nm = gs.backend->name();
    if ((nm == "lattice" || nm == "free") && !sl.empty()) return Count::infinite();
    if (sl.empty()) return Count::finite(1);
    if (nm == "z2sum") {
        auto c = ball_size_formula(gs, level, BigInt(sl.size()));
        if (c.kind == Count::Finite) return c;
    }
    int64_t n = 0;
    bool done = walk_subgroup(gs, level, kInf, 1 << 22, [&](const Elem&, int64_t) { ++n; return true; });
    return done ? Count::finite(n) : Count::unknown();
}

namespace {

// rank of integer vectors over Q (small dimension)
int rational_rank(std::vector<std::vector<long double>> m) {
    int rank = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    for (size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
        size_t piv = rank;
        for (size_t r = rank; r < m.size(); ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-9) continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = 0; r < m.size(); ++r) {
            if (static_cast<int>(r) == rank) continue;
            long double f = m[r][c] / m[rank][c];
            for (size_t k = 0; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// 1 member, 0 not a member, -1 undecided
int member(const GeneratorSystem& gs, int level, const Elem& g, const std::set<Elem>& seen,
           bool exhausted) {
    if (seen.count(g)) return 1;
    if (exhausted) return 0;
    auto sl = gs.slots(level);
    for (auto& s : sl)
        if (s == g || gs.backend->inv(s) == g) return 1;
    const std::string nm = gs.backend->name();
    if (nm == "lattice") {
        std::vector<std::vector<long double>> m;
        for (auto& s : sl) m.emplace_back(s.begin(), s.end());
        int r0 = rational_rank(m);
        m.emplace_back(g.begin(), g.end());
        if (rational_rank(m) > r0) return 0;
    }
    if (nm == "free") {
        std::set<int64_t> letters;
        bool single = true;
        for (auto& s : sl) {
            if (s.size() != 1) single = false;
            else letters.insert(std::abs(s[0]));
        }
        if (single) {
            for (auto x : g)
                if (!letters.count(std::abs(x))) return 0;
            return 1;
        }
    }
    if (nm == "z2sum") {
        // subgroup of a vector space over F_2 spanned by the slots
        std::vector<std::set<int64_t>> basis;
        auto reduce = [&](std::set<int64_t> v) {
            for (auto& b : basis) {
                int64_t lead = *b.rbegin();
                if (v.count(lead)) {
                    std::set<int64_t> w;
                    std::set_symmetric_difference(v.begin(), v.end(), b.begin(), b.end(),
                                                  std::inserter(w, w.begin()));
                    v = w;
                }
            }
            return v;
        };
        for (auto& s : sl) {
            auto v = reduce(std::set<int64_t>(s.begin(), s.end()));
            if (!v.empty()) {
                basis.push_back(v);
                std::sort(basis.begin(), basis.end(),
                          [](auto& a, auto& b) { return *a.rbegin() > *b.rbegin(); });
            }
        }
        return reduce(std::set<int64_t>(g.begin(), g.end())).empty() ? 1 : 0;
    }
    return -1;
}

}  // namespace

Certificate validate_generator_chain(const GeneratorSystem& gs, int depth, int64_t budget) {
    Certificate c;
    c.name = "generator_chain";
    if (depth < 1) throw Error("BadArgument", "depth must be at least 1");
    int horizon = gs.basis_rule ? depth + 1 : static_cast<int>(gs.gens.size());
    nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
    for (int n = 1; n < depth; ++n) {
        std::set<Elem> seen;
        bool exhausted = walk_subgroup(gs, n, kInf, budget, [&](const Elem& e, int64_t) {
            seen.insert(e);
            return true;
        });
        if (exhausted) {
            sizes.push_back({{"n", n}, {"order", seen.size()}});
            if (n < 63 && seen.size() < (uint64_t(1) << n))
                c.fail("|Gamma_" + std::to_string(n) + "| = " + std::to_string(seen.size()) + " < 2^" +
                       std::to_string(n));
        }
        // Gamma_n = Gamma iff every later generator lies in Gamma_n
        bool whole = !gs.basis_rule;
        if (whole) {
            for (int i = n + 1; i <= horizon; ++i) {
                int m = member(gs, n, gs.sigma(i), seen, exhausted);
                if (m < 0) throw Error("WindowTooSmall", "cannot decide membership at level " + std::to_string(n));
                if (m == 0) {
                    whole = false;
                    break;
                }
            }
        }
        if (whole) continue;
        int m = member(gs, n, gs.sigma(n + 1), seen, exhausted);
        if (m < 0) throw Error("WindowTooSmall", "cannot decide membership at level " + std::to_string(n));
        if (m == 1)
            c.fail("sigma_" + std::to_string(n + 1) + " lies in Gamma_" + std::to_string(n) +
                   " while Gamma_" + std::to_string(n) + " != Gamma");
    }
    c.measured["finite_levels"] = sizes;
    return c;
}

FarPoint far_point_index(const GeneratorSystem& gs, int64_t T, int budget_levels, int64_t node_budget) {
    if (T < 1) throw Error("BadArgument", "T must be positive");
    for (int n = 1; n <= budget_levels; ++n) {
        Elem found;
        bool hit = false;
        bool done = walk_subgroup(gs, n, T, node_budget, [&](const Elem& e, int64_t d) {
            if (d >= T) {
                found = e;
                hit = true;
                return false;
            }
            return true;
        });
        if (hit) return {n, found};
        if (!done) throw Error("BudgetExhausted", "node budget exhausted at level " + std::to_string(n));
    }
    throw Error("BudgetExhausted", "no level up to " + std::to_string(budget_levels) + " reaches distance " +
                                       std::to_string(T));
}

void Window::check_level(int lvl) const {
    if (lvl < 1 || lvl > L_)
        throw Error("LevelOutOfRange", "level " + std::to_string(lvl) + " outside 1.." + std::to_string(L_));
}

// ---------------------------------------------------------------- line

LineWindow::LineWindow(GeneratorSystem gs, int64_t R, int L) : Window(std::move(gs), R, L) {
    auto sl = gs_.slots(L);
    if (gs_.backend->name() != "lattice" || sl.size() != 1 || sl[0].size() != 1 || std::abs(sl[0][0]) != 1)
        throw Error("BadWindow", "line window needs Z generated by +-1");
    if (gs_.slots(1).empty()) throw Error("BadWindow", "level 1 has no generator");
    if (R > (int64_t(1) << 29)) throw Error("BadWindow", "radius too large");
}

Id LineWindow::find(const Elem& e) const {
    if (e.size() != 1 || !contains(e[0])) return -1;
    return id_of(e[0]);
}

std::vector<Id> LineWindow::ball(Id center, int64_t t, int lvl) const {
    check_level(lvl);
    int64_t c = coord(center);
    if (t < 0 || !contains(c - t) || !contains(c + t))
        throw Error("BallEscapesWindow", "ball of radius " + std::to_string(t) + " at " + std::to_string(c));
    std::vector<Id> out;
    out.reserve(2 * t + 1);
    out.push_back(center);
    for (int64_t k = 1; k <= t; ++k) {
        out.push_back(id_of(c + k));
        out.push_back(id_of(c - k));
    }
    return out;
}

std::vector<Id> LineWindow::ball_clipped(Id center, int64_t t, int lvl) const {
    check_level(lvl);
    int64_t c = coord(center);
    std::vector<Id> out;
    out.reserve(2 * t + 1);
    out.push_back(center);
    for (int64_t k = 1; k <= t; ++k) {
        out.push_back(contains(c + k) ? id_of(c + k) : -1);
        out.push_back(contains(c - k) ? id_of(c - k) : -1);
    }
    return out;
}

std::vector<Id> LineWindow::neighborhood(Id x, int64_t t, int lvl) const {
    check_level(lvl);
    int64_t c = coord(x);
    int64_t lo = std::max(-R_, c - t), hi = std::min(R_, c + t);
    std::vector<Id> out;
    out.reserve(hi - lo + 1);
    for (int64_t y = lo; y <= hi; ++y) out.push_back(id_of(y));
    return out;
}

std::vector<int64_t> LineWindow::dist_to_set(const std::vector<Id>& set, int lvl, int64_t cap) const {
    check_level(lvl);
    const int64_t n = size();
    std::vector<char> mark(n, 0);
    for (Id s : set) mark[s] = 1;
    std::vector<int64_t> out(n, -1);
    // sweep by coordinate
    int64_t last = kInf;
    for (int64_t x = -R_; x <= R_; ++x) {
        if (mark[id_of(x)]) last = x;
        if (last != kInf) out[id_of(x)] = x - last;
    }
    last = kInf;
    for (int64_t x = R_; x >= -R_; --x) {
        if (mark[id_of(x)]) last = x;
        if (last != kInf) {
            int64_t d = last - x;
            int64_t& o = out[id_of(x)];
            if (o < 0 || d < o) o = d;
        }
    }
    if (cap != kInf)
        for (auto& d : out)
            if (d > cap) d = -1;
    return out;
}

// ---------------------------------------------------------------- graph

GraphWindow::GraphWindow(GeneratorSystem gs, int64_t R, int L) : Window(std::move(gs), R, L) {
    auto sl = gs_.slots(L);
    std::vector<Elem> moves;
    for (auto& s : sl) {
        moves.push_back(s);
        moves.push_back(gs_.backend->inv(s));
    }
    Elem e = gs_.backend->identity();
    elems_.push_back(e);
    index_[e] = 0;
    std::vector<int64_t> dep{0};
    for (size_t head = 0; head < elems_.size(); ++head) {
        if (dep[head] >= R) continue;
        for (auto& m : moves) {
            Elem n = gs_.backend->mul(m, elems_[head]);
            if (index_.count(n)) continue;
            if (elems_.size() >= (size_t(1) << 30)) throw Error("BadWindow", "window too large");
            index_[n] = static_cast<Id>(elems_.size());
            elems_.push_back(std::move(n));
            dep.push_back(dep[head] + 1);
        }
    }
    nbr_.assign(moves.size(), std::vector<Id>(elems_.size(), -1));
    for (size_t i = 0; i < elems_.size(); ++i)
        for (size_t m = 0; m < moves.size(); ++m) {
            auto it = index_.find(gs_.backend->mul(moves[m], elems_[i]));
            if (it != index_.end()) nbr_[m][i] = it->second;
        }
    slot_count_.assign(L + 1, 0);
    for (int l = 1; l <= L; ++l) slot_count_[l] = static_cast<int>(gs_.slots(l).size());
    levels_.resize(sl.size() + 1);
    for (size_t k = 0; k <= sl.size(); ++k) {
        bool used = false;
        for (int l = 1; l <= L; ++l) used |= slot_count_[l] == static_cast<int>(k);
        if (!used) continue;
        LevelData& d = levels_[k];
        d.dep.assign(elems_.size(), -1);
        d.order.push_back(0);
        d.parent.push_back(-1);
        d.move.push_back(-1);
        d.dep[0] = 0;
        for (size_t h = 0; h < d.order.size(); ++h) {
            Id p = d.order[h];
            for (int m = 0; m < static_cast<int>(2 * k); ++m) {
                Id n = nbr_[m][p];
                if (n < 0) d.closed = false;
                if (n < 0 || d.dep[n] >= 0) continue;
                d.dep[n] = d.dep[p] + 1;
                d.order.push_back(n);
                d.parent.push_back(static_cast<int32_t>(h));
                d.move.push_back(m);
            }
        }
        int64_t maxd = d.dep[d.order.back()];
        d.upto.assign(maxd + 1, 0);
        d.pos.assign(elems_.size(), -1);
        for (size_t h = 0; h < d.order.size(); ++h) d.pos[d.order[h]] = static_cast<int32_t>(h);
        for (Id id : d.order) d.upto[d.dep[id]]++;
        for (int64_t t = 1; t <= maxd; ++t) d.upto[t] += d.upto[t - 1];
    }
}

const GraphWindow::LevelData& GraphWindow::data(int lvl) const {
    check_level(lvl);
    return levels_[slot_count_[lvl]];
}

Id GraphWindow::find(const Elem& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? -1 : it->second;
}

int64_t GraphWindow::depth(Id id, int lvl) const {
    int32_t d = data(lvl).dep[id];
    return d < 0 ? kInf : d;
}

std::vector<Id> GraphWindow::ball_clipped(Id center, int64_t t, int lvl) const {
    const LevelData& d = data(lvl);
    int64_t n = ball_size(t, lvl);
    std::vector<Id> out(n);
    out[0] = center;
    for (int64_t k = 1; k < n; ++k) {
        Id from = out[d.parent[k]];
        out[k] = from < 0 ? -1 : step(d.move[k], from);
    }
    return out;
}

std::vector<Id> GraphWindow::ball(Id center, int64_t t, int lvl) const {
    const LevelData& d = data(lvl);
    if (t < 0 || (t > R_ && !d.closed))
        throw Error("BallEscapesWindow", "radius exceeds window");
    auto out = ball_clipped(center, t, lvl);
    for (Id id : out)
        if (id < 0)
            throw Error("BallEscapesWindow", "ball of radius " + std::to_string(t) + " leaves the window");
    return out;
}

int64_t GraphWindow::rank(Id id, int lvl) const { return data(lvl).pos[id]; }

int64_t GraphWindow::ball_size(int64_t t, int lvl) const {
    const LevelData& d = data(lvl);
    if (t < 0) return 0;
    if (t >= static_cast<int64_t>(d.upto.size())) return d.upto.back();
    return d.upto[t];
}

int64_t GraphWindow::offset_depth(int64_t k, int lvl) const {
    const LevelData& d = data(lvl);
    return d.dep[d.order.at(k)];
}

int64_t GraphWindow::distance(Id x, Id y, int lvl) const {
    int k = slot_count_.at(lvl);
    check_level(lvl);
    if (x == y) return 0;
    std::vector<int32_t> dist(elems_.size(), -1);
    std::deque<Id> q{x};
    dist[x] = 0;
    while (!q.empty()) {
        Id p = q.front();
        q.pop_front();
        for (int m = 0; m < 2 * k; ++m) {
            Id n = nbr_[m][p];
            if (n < 0 || dist[n] >= 0) continue;
            dist[n] = dist[p] + 1;
            if (n == y) return dist[n];
            q.push_back(n);
        }
    }
    return kInf;
}

std::vector<Id> GraphWindow::neighborhood(Id x, int64_t t, int lvl) const {
    int k = slot_count_.at(lvl);
    check_level(lvl);
    std::unordered_map<Id, int64_t> dist{{x, 0}};
    std::vector<Id> out{x};
    for (size_t h = 0; h < out.size(); ++h) {
        Id p = out[h];
        int64_t d = dist[p];
        if (d >= t) continue;
        for (int m = 0; m < 2 * k; ++m) {
            Id n = nbr_[m][p];
            if (n < 0 || dist.count(n)) continue;
            dist[n] = d + 1;
            out.push_back(n);
        }
    }
    return out;
}

std::vector<int64_t> GraphWindow::dist_to_set(const std::vector<Id>& set, int lvl, int64_t cap) const {
    int k = slot_count_.at(lvl);
    check_level(lvl);
    std::vector<int64_t> dist(elems_.size(), -1);
    std::deque<Id> q;
    for (Id s : set)
        if (dist[s] < 0) {
            dist[s] = 0;
            q.push_back(s);
        }
    while (!q.empty()) {
        Id p = q.front();
        q.pop_front();
        if (dist[p] >= cap) continue;
        for (int m = 0; m < 2 * k; ++m) {
            Id n = nbr_[m][p];
            if (n < 0 || dist[n] >= 0) continue;
            dist[n] = dist[p] + 1;
            q.push_back(n);
        }
    }
    return dist;
}

std::shared_ptr<const Window> make_window(const GeneratorSystem& gs, int64_t R, int L) {
    if (R < 0 || L < 1) throw Error("BadWindow", "radius must be >= 0 and level >= 1");
    auto sl = gs.slots(L);
    bool line = gs.backend->name() == "lattice" && sl.size() == 1 && sl[0].size() == 1 &&
                std::abs(sl[0][0]) == 1 && !gs.slots(1).empty();
    if (line) return std::make_shared<LineWindow>(gs, R, L);
    return std::make_shared<GraphWindow>(gs, R, L);
}

}  // namespace forge
