#include <doctest.h>

#include "forge/patcher.hpp"

using namespace forge;

namespace {

Schedule two_stage() {
    ScaledConfig cfg;
    cfg.s1 = 1;
    return scaled_schedule(integers(), 3, cfg, {2, 2});
}

int64_t X(Id id) { return LineWindow::coord(id); }

// a layer-n marker whose distance to every layer-(n+1) marker exceeds gap
Id lonely_marker(const Labeling& lab, int n, int64_t gap, int64_t from) {
    auto up = lab.q_set(n + 1);
    for (Id q : lab.q_set(n)) {
        int64_t x = X(q);
        if (x < from || std::abs(x) > lab.core / 2) continue;
        bool ok = true;
        for (Id u : up) ok &= std::abs(X(u) - x) > gap;
        if (ok) return q;
    }
    return -1;
}

Id marker_after(const Labeling& lab, int n, int64_t from) {
    Id best = -1;
    for (Id q : lab.q_set(n))
        if (X(q) >= from && (best < 0 || X(q) < X(best))) best = q;
    return best;
}

}  // namespace

TEST_CASE("self patch is the identity on copy and outside regions") {
    auto sch = two_stage();
    auto w = make_window(integers(), 30000, 2);
    auto lab = initial_clean_labeling(w, sch, 2, CInit::Hash, 4);
    REQUIRE(verify_clean(lab, true).pass);
    Id y = marker_after(lab, 2, 7000);
    REQUIRE(y >= 0);
    auto src = take_source(lab, y, 2, source_radius(sch, PatchKind::Regular, 2));
    PatchRequest rq{PatchKind::Regular, 2, y, &src};
    auto out = patch(lab, rq);
    auto rad = patch_radii(sch, PatchKind::Regular, 2);
    for (Id z = 0; z < w->size(); ++z) {
        int64_t d = std::abs(X(z) - X(y));
        if (d <= rad.copy || d >= rad.dirty) {
            CHECK(out.cbits[z] == lab.cbits[z]);
            CHECK(out.f[0][z] == lab.f[0][z]);
            CHECK(out.f[1][z] == lab.f[1][z]);
        }
    }
    auto cert = check_patch(lab, out, rq);
    CHECK(cert.pass);
    if (!cert.pass) MESSAGE(cert.to_json().dump());
}

TEST_CASE("regular and supersize patches from a different labeling") {
    auto sch = two_stage();
    auto w = make_window(integers(), 30000, 2);
    auto host = initial_clean_labeling(w, sch, 2, CInit::Hash, 4);
    auto donor = initial_clean_labeling(w, sch, 2, CInit::Hash, 99, -1, 17);
    REQUIRE(verify_clean(donor, true).pass);

    Id y = marker_after(host, 2, 9000), x = marker_after(donor, 2, -12000);
    REQUIRE(y >= 0);
    REQUIRE(x >= 0);
    auto src = take_source(donor, x, 2, source_radius(sch, PatchKind::Regular, 2));
    PatchRequest rq{PatchKind::Regular, 2, y, &src};
    auto out = patch(host, rq);
    auto cert = check_patch(host, out, rq);
    CHECK(cert.pass);
    if (!cert.pass) MESSAGE(cert.to_json().dump());
    // transport z -> z - y + x, computed independently
    auto rad = patch_radii(sch, PatchKind::Regular, 2);
    for (int64_t d = -rad.copy; d <= rad.copy; ++d) {
        Id z = LineWindow::id_of(X(y) + d), zd = LineWindow::id_of(X(x) + d);
        CHECK(out.f[0][z] == donor.f[0][zd]);
        CHECK(out.f[1][z] == donor.f[1][zd]);
        CHECK((out.cbits[z] & 3u) == (donor.cbits[zd] & 3u));
        CHECK((out.cbits[z] >> 2) == (host.cbits[z] >> 2));
    }

    Id ys = lonely_marker(host, 1, 20 * sch.r(1), 8000);
    REQUIRE(ys >= 0);
    Id xs = marker_after(donor, 1, 500);
    auto ssrc = take_source(donor, xs, 1, source_radius(sch, PatchKind::Supersize, 1));
    PatchRequest sq{PatchKind::Supersize, 1, ys, &ssrc};
    auto sout = patch(host, sq);
    auto sc = check_patch(host, sout, sq);
    CHECK(sc.pass);
    if (!sc.pass) MESSAGE(sc.to_json().dump());

    // a supersize host next to a layer-2 marker is refused
    Id bad = marker_after(host, 2, 7000);
    PatchRequest near{PatchKind::Supersize, 1, bad, &ssrc};
    CHECK_THROWS_AS(patch(host, near), Error);
}

TEST_CASE("simultaneous patching") {
    auto sch = two_stage();
    auto w = make_window(integers(), 40000, 2);
    auto host = initial_clean_labeling(w, sch, 2, CInit::Hash, 4);
    auto donor = initial_clean_labeling(w, sch, 2, CInit::Hash, 5, -1, 3);
    Id y1 = marker_after(host, 2, 7000);
    Id y2 = marker_after(host, 2, X(y1) + 1);
    Id x = marker_after(donor, 2, 9000);
    auto src = take_source(donor, x, 2, source_radius(sch, PatchKind::Regular, 2));
    PatchRequest a{PatchKind::Regular, 2, y1, &src}, b{PatchKind::Regular, 2, y2, &src};

    auto ab = patch(patch(host, a), b);
    auto ba = patch(patch(host, b), a);
    auto both = host;
    auto log = apply_patches(both, {a, b});
    CHECK(ab.f == ba.f);
    CHECK(ab.cbits == ba.cbits);
    CHECK(both.f == ab.f);
    CHECK(both.cbits == ab.cbits);
    std::vector<Id> ids;
    for (auto& ch : diff_labelings(host, both)) ids.push_back(ch.id);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    CHECK(ids == log.changed);

    auto same = host;
    CHECK(apply_patches(same, {}).changed.empty());
    CHECK(same.f == host.f);

    PatchRequest c{PatchKind::Regular, 2, y1, &src};
    auto again = host;
    CHECK_THROWS_AS(apply_patches(again, {a, c}), Error);
}
