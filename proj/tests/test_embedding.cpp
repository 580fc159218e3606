#include <doctest.h>

#include <set>

#include "forge/embedding.hpp"
#include "forge/verifier.hpp"

using namespace forge;

namespace {

GeneratorSystem lattice2() {
    GeneratorSystem gs;
    gs.backend = make_lattice(2);
    gs.gens = {{1, 0}, {0, 1}};
    return gs;
}

GeneratorSystem free2() {
    GeneratorSystem gs;
    gs.backend = make_free(2);
    gs.gens = {{1}, {2}};
    return gs;
}

}  // namespace

TEST_CASE("proper colorings on Z, Z^2 and F_2") {
    auto line = make_window(integers(), 60, 1);
    auto pc = proper_coloring(*line, 5);
    CHECK(pc.palette[1] == 5);
    CHECK(pc.width[1] == 3);
    CHECK(check_proper_coloring(*line, pc).pass);

    for (auto gs : {lattice2(), free2()}) {
        auto w = make_window(gs, gs.backend->name() == "free" ? 5 : 12, 2);
        auto p = proper_coloring(*w, 5);
        auto c = check_proper_coloring(*w, p);
        CHECK(c.pass);
        CHECK(c.measured["edges"].get<int64_t>() > 0);
        // an independent edge scan by pairwise distance
        for (int r = 1; r <= 5; ++r)
            for (Id x = 0; x < static_cast<Id>(std::min<int64_t>(w->size(), 25)); ++x)
                for (Id y = 0; y < static_cast<Id>(w->size()); ++y)
                    if (x != y && w->distance(x, y, std::min(r, 2)) <= r) REQUIRE(p.colors[r - 1][x] != p.colors[r - 1][y]);
    }

    auto dot = make_window(integers(), 0, 1);
    auto p0 = proper_coloring(*dot, 3);
    CHECK(p0.bits(0).empty());
    CHECK(check_proper_coloring(*dot, p0).pass);

    // a broken block is caught
    auto broken = pc;
    broken.colors[0][LineWindow::id_of(3)] = broken.colors[0][LineWindow::id_of(4)];
    CHECK_FALSE(check_proper_coloring(*line, broken).pass);
}

TEST_CASE("interleave") {
    CHECK(interleave("101", "000") == "100010");
    CHECK(interleave("", "") == "");
    CHECK(interleave("000", "000") == "000000");
    auto [a, b] = deinterleave("100010");
    CHECK(a == "101");
    CHECK(b == "000");
    CHECK_THROWS_AS(interleave("1", "10"), Error);

    auto w = make_window(lattice2(), 6, 2);
    auto pc = proper_coloring(*w, 3);
    std::set<std::string> seen;
    for (Id id = 0; id < static_cast<Id>(w->size()); ++id) {
        auto s = separating_bits(*w, pc, id);
        seen.insert(s);
        auto [p, q] = deinterleave(s);
        CHECK(p.substr(0, pc.bits(id).size()) == pc.bits(id));
    }
    CHECK(seen.size() == static_cast<size_t>(w->size()));
    auto pat = psi_pattern(*w, pc, 0, 1, 2);
    CHECK(pat["pattern"].size() == 5);
}

TEST_CASE("Bernoulli witness agrees with the freeness table") {
    ScaledConfig cfg;
    cfg.s1 = 1;
    auto sch = scaled_schedule(integers(), 2, cfg, {2});
    auto w = make_window(integers(), 2 * recommended_radius(sch, 2), 2);
    auto st = first_stage(initial_clean_labeling(w, sch, 2));
    auto lab = advance_stage(st).lab;
    lab.core = 4000;
    auto fr = verify_freeness(lab, 13);
    REQUIRE(fr.pass);
    for (int r : {1, 5, 11, 12, 13}) {
        int S = static_cast<int>(separation_depth(fr, r));
        CHECK(bernoulli_freeness_witness(lab, r, S).pass);
        if (S > 1) CHECK_FALSE(bernoulli_freeness_witness(lab, r, S - 1).pass);
    }
    CHECK(bernoulli_freeness_witness(lab, 0, 1).pass);

    auto flat = lab;
    for (auto& layer : flat.f) std::fill(layer.begin(), layer.end(), 1);
    auto bad = bernoulli_freeness_witness(flat, 1, 2);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.witnesses.empty());
}
