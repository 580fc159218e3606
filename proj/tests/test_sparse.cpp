#include <doctest.h>

#include <random>
#include <set>

#include "forge/sparse.hpp"

using namespace forge;

namespace {

std::set<int64_t> coords(const Window& w, const std::vector<Id>& ids) {
    std::set<int64_t> s;
    for (Id id : ids) s.insert(w.element(id)[0]);
    return s;
}

// shortlex greedy on an interval of Z, written out directly
std::set<int64_t> greedy_oracle(int64_t R, int64_t r, bool evens_only) {
    std::vector<int64_t> order{0};
    for (int64_t k = 1; k <= R; ++k) {
        order.push_back(k);
        order.push_back(-k);
    }
    std::set<int64_t> T;
    for (int64_t x : order) {
        if (evens_only && x % 2 != 0) continue;
        bool ok = true;
        for (int64_t t : T) ok &= std::abs(t - x) > r;
        if (ok) T.insert(x);
    }
    return T;
}

std::vector<Id> multiples(const Window& w, int64_t k) {
    std::vector<Id> v;
    for (Id id = 0; id < w.size(); ++id)
        if (w.element(id)[0] % k == 0) v.push_back(id);
    return v;
}

}  // namespace

TEST_CASE("greedy maximal sparse sets on Z") {
    auto w = make_window(integers(), 20, 1);
    auto T = greedy_maximal_sparse(*w, all_elements(*w), 2, 1);
    auto got = coords(*w, T.elements);
    CHECK(got == greedy_oracle(20, 2, false));
    CHECK(got == coords(*w, multiples(*w, 3)));

    auto evens = multiples(*w, 2);
    auto T2 = greedy_maximal_sparse(*w, evens, 2, 1);
    CHECK(coords(*w, T2.elements) == greedy_oracle(20, 2, true));
    CHECK(coords(*w, T2.elements) == coords(*w, multiples(*w, 4)));

    CHECK(greedy_maximal_sparse(*w, {}, 2, 1).elements.empty());
}

TEST_CASE("net verification") {
    auto w = make_window(integers(), 20, 1);
    CHECK(verify_net(*w, multiples(*w, 3), 2, 1, 18).pass);
    auto bad = verify_net(*w, multiples(*w, 4), 1, 1, 18);
    CHECK_FALSE(bad.pass);
    REQUIRE_FALSE(bad.witnesses.empty());
    CHECK(bad.witnesses[0] == "2");

    auto T = greedy_maximal_sparse(*w, multiples(*w, 2), 2, 1);
    CHECK(verify_net(*w, T.elements, net_radius(1, 2), 1, 17).pass);
    CHECK(net_radius(1, 2) == 3);
    CHECK(net_radius(0, 7) == 7);
}

TEST_CASE("nested chain on Z is a sum-of-radii net") {
    auto w = make_window(integers(), 400, 3);
    auto t1 = greedy_maximal_sparse(*w, all_elements(*w), 4, 1);
    CHECK(verify_net(*w, t1.elements, 4, 1, 396).pass);
    auto t2 = greedy_maximal_sparse(*w, t1.elements, 30, 2);
    CHECK(verify_net(*w, t2.elements, 34, 2, 360).pass);
    auto t3 = greedy_maximal_sparse(*w, t2.elements, 90, 3);
    CHECK(verify_net(*w, t3.elements, 124, 3, 270).pass);
}

TEST_CASE("sparse, maximal and net radius on random Z^2 instances") {
    GeneratorSystem gs;
    gs.backend = make_lattice(2);
    gs.gens = {{1, 0}, {0, 1}};
    auto w = make_window(gs, 30, 2);
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<Id> S;
        double p = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
        for (Id id = 0; id < w->size(); ++id)
            if (std::bernoulli_distribution(p)(rng) || id == 0) S.push_back(id);
        auto dist = w->dist_to_set(S, 2);
        int64_t core = 20, s = 0;
        for (Id id = 0; id < w->size(); ++id)
            if (w->depth(id, 2) <= core + 4) s = std::max(s, dist[id]);
        int64_t r = std::uniform_int_distribution<int64_t>(1, 4)(rng);
        auto T = greedy_maximal_sparse(*w, S, r, 2);
        CHECK(verify_sparse(*w, T.elements, r, 2).pass);
        CHECK(verify_maximal(*w, T.elements, S, r, 2, w->radius()).pass);
        if (core + s + r <= w->radius()) CHECK(verify_net(*w, T.elements, s + r, 2, core).pass);
    }
}

TEST_CASE("a non-maximal set is caught") {
    auto w = make_window(integers(), 20, 1);
    auto six = multiples(*w, 6);
    auto c = verify_maximal(*w, six, all_elements(*w), 2, 1, 20);
    CHECK_FALSE(c.pass);
    auto s = verify_sparse(*w, multiples(*w, 2), 2, 1);
    CHECK_FALSE(s.pass);
}
