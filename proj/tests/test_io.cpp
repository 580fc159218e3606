#include <doctest.h>

#include <fstream>

#include "forge/io.hpp"

using namespace forge;

namespace {

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / "forge-io-test";
    fs::create_directories(d);
    return d / name;
}

bool same(const Labeling& a, const Labeling& b) {
    return a.cbits == b.cbits && a.f == b.f && a.core == b.core && a.stage == b.stage && a.M == b.M && a.D == b.D &&
           a.win->size() == b.win->size() && a.sch.to_json() == b.sch.to_json();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("labeling and codeball snapshots round trip") {
    ScaledConfig cfg;
    cfg.s1 = 1;
    auto sch = scaled_schedule(integers(), 2, cfg, {2});
    auto w = make_window(integers(), 4 * recommended_radius(sch, 2), 2);
    auto st = first_stage(initial_clean_labeling(w, sch, 2, CInit::Zero));
    auto nx = advance_stage(st);

    auto p = scratch("stage-2.json");
    save_labeling(p, nx.lab);
    auto back = load_labeling(p);
    CHECK(same(back, nx.lab));
    // the plain DOM reader sees the same thing
    CHECK(same(labeling_from_json(read_json(p)), nx.lab));
    // saving again is byte-identical
    auto p2 = scratch("stage-2b.json");
    save_labeling(p2, back);
    CHECK(slurp(p) == slurp(p2));
    for (auto& e : fs::directory_iterator(p.parent_path())) CHECK(e.path().string().find(".tmp.") == std::string::npos);

    auto q = scratch("codeball-2.json");
    save_codeball(q, nx.codeball(2), *nx.lab.win);
    auto cb = load_codeball(q, *back.win);
    const auto& orig = nx.codeball(2);
    CHECK(cb.center == orig.center);
    CHECK(cb.pattern.labels == orig.pattern.labels);
    CHECK(cb.pattern.key == orig.pattern.key);
    CHECK(cb.directory.size() == orig.directory.size());
    CHECK(cb.sites == orig.sites);
    CHECK(cb.donors == orig.donors);
    CHECK(cb.repair.f == orig.repair.f);
    CHECK(cb.repair.cbits == orig.repair.cbits);
    CHECK(verify_codeballs(back, {cb}).pass);

    auto log = change_log(st.lab, nx.lab, 5);
    CHECK(log["changed_points"].get<size_t>() == nx.changed.size());
    CHECK(log["least_depth"].get<int64_t>() == nx.change_depth);
    CHECK(log["first_changes"].size() == 5);
}

TEST_CASE("broken snapshots are rejected") {
    CHECK_THROWS_AS(load_labeling(scratch("nope.json")), Error);
    auto w = make_window(integers(), 3, 1);
    Labeling lab;
    lab.win = w;
    ScaledConfig cfg;
    cfg.s1 = 1;
    lab.sch = scaled_schedule(integers(), 1, cfg, {1});
    lab.M = 1;
    lab.D = 1;
    lab.cbits.assign(w->size(), 0);
    lab.cbits[3] = 1;
    lab.f.assign(1, std::vector<int32_t>(w->size(), 2));
    auto p = scratch("tiny.json");
    save_labeling(p, lab);
    auto back = load_labeling(p);
    CHECK(back.cbits == lab.cbits);
    CHECK(back.f == lab.f);
    CHECK(back.sch.to_json() == lab.sch.to_json());

    auto text = slurp(p);
    auto cut = scratch("cut.json");
    write_atomic(cut, [&](std::ostream& o) { o << text.substr(0, text.size() / 2); });
    CHECK_THROWS_AS(load_labeling(cut), Error);

    auto shortrow = text;
    shortrow.replace(shortrow.rfind("[3,0,2]"), 7, "[3,0]");
    write_atomic(cut, [&](std::ostream& o) { o << shortrow; });
    CHECK_THROWS_AS(load_labeling(cut), Error);

    auto neg = text;
    neg.replace(neg.rfind("[3,0,2]"), 7, "[3,0,-2]");
    write_atomic(cut, [&](std::ostream& o) { o << neg; });
    CHECK_THROWS_AS(load_labeling(cut), Error);

    auto moved = text;
    moved.replace(moved.rfind("[3,0,2]"), 7, "[4,0,2]");
    write_atomic(cut, [&](std::ostream& o) { o << moved; });
    CHECK_THROWS_AS(load_labeling(cut), Error);
}

TEST_CASE("snapshots on Z^2 and F_2 name their elements") {
    for (int kind = 0; kind < 2; ++kind) {
        GeneratorSystem gs;
        gs.backend = kind ? make_free(2) : make_lattice(2);
        gs.gens = kind ? std::vector<Elem>{{1}, {2}} : std::vector<Elem>{{1, 0}, {0, 1}};
        auto w = make_window(gs, 4, 2);
        Labeling lab;
        lab.win = w;
        ScaledConfig cfg;
        lab.sch = scaled_schedule(gs, 1, cfg, {1});
        lab.M = 1;
        lab.D = 2;
        lab.cbits.assign(w->size(), 0);
        lab.f.assign(1, std::vector<int32_t>(w->size(), 0));
        for (Id id = 0; id < static_cast<Id>(w->size()); ++id) lab.f[0][id] = id % 7, lab.cbits[id] = id % 3;
        auto p = scratch(kind ? "f2.json" : "z2.json");
        save_labeling(p, lab);
        auto back = load_labeling(p);
        CHECK(back.f == lab.f);
        CHECK(back.cbits == lab.cbits);
        auto viaDom = labeling_from_json(read_json(p));
        CHECK(viaDom.f == lab.f);
    }
}
