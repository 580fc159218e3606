#pragma once
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "forge/certificate.hpp"
#include "forge/errors.hpp"

namespace forge {

using BigInt = boost::multiprecision::cpp_int;
using Elem = std::vector<int64_t>;
using Id = int32_t;
constexpr int64_t kInf = std::numeric_limits<int64_t>::max();

std::string big_str(const BigInt& v);

// Counting answer for closed-form ball sizes and subgroup orders.
struct Count {
    enum Kind { Finite, Infinite, Unknown } kind = Unknown;
    BigInt value = 0;
    static Count finite(BigInt v) { return {Finite, std::move(v)}; }
    static Count infinite() { return {Infinite, 0}; }
    static Count unknown() { return {Unknown, 0}; }
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual Elem identity() const = 0;
    virtual Elem mul(const Elem& a, const Elem& b) const = 0;
    virtual Elem inv(const Elem& a) const = 0;
    virtual nlohmann::json encode(const Elem& a) const;
    virtual Elem decode(const nlohmann::json& j) const;
    virtual nlohmann::json describe() const;
    bool is_identity(const Elem& a) const { return a == identity(); }
};

std::shared_ptr<const Backend> make_lattice(int dim);
std::shared_ptr<const Backend> make_free(int rank);
std::shared_ptr<const Backend> make_z2sum();
// mult[i][j] = index of g_i * g_j
std::shared_ptr<const Backend> make_table(std::vector<std::vector<int>> mult, int identity);

struct GeneratorSystem {
    std::shared_ptr<const Backend> backend;
    std::vector<Elem> gens;  // sigma_1 .. sigma_K
    bool repeat_last = true; // sigma_i = sigma_K for i > K
    bool basis_rule = false; // direct sum of Z/2: sigma_i = e_i past the listed prefix

    // 1-based; past the list the last generator repeats (or the list ends)
    Elem sigma(int i) const;
    int count_at(int level) const;  // number of listed generators usable at level
    // distinct generators usable at this level, in order of first appearance
    // (duplicates and inverses merged); each level uses a prefix of slots(L)
    std::vector<Elem> slots(int level) const;

    nlohmann::json to_json() const;
    static GeneratorSystem from_json(const nlohmann::json& j);
};

GeneratorSystem integers();  // Z with sigma_i = 1 for all i

// Closed form |B_t(G_level, e)| where the backend allows one.
Count ball_size_formula(const GeneratorSystem& gs, int level, const BigInt& t);
Count subgroup_order(const GeneratorSystem& gs, int level);

Certificate validate_generator_chain(const GeneratorSystem& gs, int depth,
                                     int64_t budget = 200000);

struct FarPoint {
    int n;
    Elem witness;
};
FarPoint far_point_index(const GeneratorSystem& gs, int64_t T, int budget_levels,
                         int64_t node_budget = 2000000);

class LineWindow;

// Finite ball B_R(G_L, e) with per-level adjacency. Ids follow the
// breadth-first discovery order at level L, which is the shortlex order.
class Window {
public:
    Window(GeneratorSystem gs, int64_t R, int L) : gs_(std::move(gs)), R_(R), L_(L) {}
    virtual ~Window() = default;

    const GeneratorSystem& gens() const { return gs_; }
    int64_t radius() const { return R_; }
    int level() const { return L_; }

    virtual int64_t size() const = 0;
    virtual Elem element(Id id) const = 0;
    virtual Id find(const Elem& e) const = 0;  // -1 when outside
    virtual int64_t depth(Id id, int lvl) const = 0;  // kInf if unreachable at lvl
    // canonical order: the k-th entry is w_k * center, w_k the k-th element of B_t(e)
    virtual std::vector<Id> ball(Id center, int64_t t, int lvl) const = 0;
    // same order, -1 where the offset leaves the window
    virtual std::vector<Id> ball_clipped(Id center, int64_t t, int lvl) const = 0;
    // index of the element in the canonical order of balls around e (-1 if unreachable)
    virtual int64_t rank(Id id, int lvl) const = 0;
    virtual int64_t distance(Id x, Id y, int lvl) const = 0;
    // window elements within window distance t of x (clipped at the boundary, any order)
    virtual std::vector<Id> neighborhood(Id x, int64_t t, int lvl) const = 0;
    // multi-source distances, -1 where unreachable or beyond cap
    virtual std::vector<int64_t> dist_to_set(const std::vector<Id>& set, int lvl,
                                             int64_t cap = kInf) const = 0;
    virtual int64_t ball_size(int64_t t, int lvl) const = 0;
    // depth of the k-th canonical offset
    virtual int64_t offset_depth(int64_t k, int lvl) const = 0;
    virtual const LineWindow* as_line() const { return nullptr; }

    // levels with the same generator slots give the same graph
    bool same_graph(int a, int b) const { return gs_.slots(a).size() == gs_.slots(b).size(); }
    nlohmann::json encode(Id id) const { return gs_.backend->encode(element(id)); }
    Id identity() const { return 0; }

protected:
    void check_level(int lvl) const;
    GeneratorSystem gs_;
    int64_t R_;
    int L_;
};

// Z with every generator equal to +-1: elements are stored implicitly.
class LineWindow final : public Window {
public:
    LineWindow(GeneratorSystem gs, int64_t R, int L);
    static Id id_of(int64_t x) { return static_cast<Id>(x > 0 ? 2 * x - 1 : -2 * x); }
    static int64_t coord(Id id) { return (id & 1) ? (int64_t(id) + 1) / 2 : -int64_t(id) / 2; }
    bool contains(int64_t x) const { return x >= -R_ && x <= R_; }

    int64_t size() const override { return 2 * R_ + 1; }
    Elem element(Id id) const override { return {coord(id)}; }
    Id find(const Elem& e) const override;
    int64_t depth(Id id, int) const override { return std::abs(coord(id)); }
    std::vector<Id> ball(Id center, int64_t t, int lvl) const override;
    std::vector<Id> ball_clipped(Id center, int64_t t, int lvl) const override;
    int64_t rank(Id id, int) const override { return id; }
    int64_t distance(Id x, Id y, int) const override { return std::abs(coord(x) - coord(y)); }
    std::vector<Id> neighborhood(Id x, int64_t t, int lvl) const override;
    std::vector<int64_t> dist_to_set(const std::vector<Id>& set, int lvl,
                                     int64_t cap = kInf) const override;
    int64_t ball_size(int64_t t, int) const override { return 2 * t + 1; }
    int64_t offset_depth(int64_t k, int) const override { return (k + 1) / 2; }
    const LineWindow* as_line() const override { return this; }
};

class GraphWindow final : public Window {
public:
    GraphWindow(GeneratorSystem gs, int64_t R, int L);

    int64_t size() const override { return static_cast<int64_t>(elems_.size()); }
    Elem element(Id id) const override { return elems_.at(id); }
    Id find(const Elem& e) const override;
    int64_t depth(Id id, int lvl) const override;
    std::vector<Id> ball(Id center, int64_t t, int lvl) const override;
    std::vector<Id> ball_clipped(Id center, int64_t t, int lvl) const override;
    int64_t rank(Id id, int lvl) const override;
    int64_t distance(Id x, Id y, int lvl) const override;
    std::vector<Id> neighborhood(Id x, int64_t t, int lvl) const override;
    std::vector<int64_t> dist_to_set(const std::vector<Id>& set, int lvl,
                                     int64_t cap = kInf) const override;
    int64_t ball_size(int64_t t, int lvl) const override;
    int64_t offset_depth(int64_t k, int lvl) const override;

private:
    struct LevelData {
        std::vector<Id> order;           // BFS order from e
        std::vector<int32_t> dep;        // by id, -1 unreachable
        std::vector<int32_t> pos;        // by id, index in order or -1
        std::vector<int32_t> parent;     // by order index
        std::vector<int32_t> move;       // by order index
        std::vector<int64_t> upto;       // upto[t] = |B_t|
        bool closed = true;              // component of e lies inside the window
    };
    const LevelData& data(int lvl) const;
    Id step(int move, Id from) const { return nbr_[move][from]; }

    std::vector<Elem> elems_;
    std::map<Elem, Id> index_;
    std::vector<std::vector<Id>> nbr_;  // per move code
    std::vector<LevelData> levels_;     // indexed by slot count - 1
    std::vector<int> slot_count_;       // by level
};

std::shared_ptr<const Window> make_window(const GeneratorSystem& gs, int64_t R, int L);

}  // namespace forge
