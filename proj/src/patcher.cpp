#include "forge/patcher.hpp"

#include <algorithm>

#include "forge/sparse.hpp"

namespace forge {

namespace {

uint32_t low_mask(int n) { return n >= 32 ? ~uint32_t(0) : ((uint32_t(1) << n) - 1); }

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

struct Placed {
    const PatchRequest* req;
    PatchRadii rad;
    std::vector<Id> ball;  // canonical, radius rad.dirty
    int lvl;
};

int64_t offset_depth_at(const Window& w, size_t k, int lvl) { return w.offset_depth(static_cast<int64_t>(k), lvl); }

}  // namespace

PatchRadii patch_radii(const Schedule& sch, PatchKind kind, int n) {
    PatchRadii p;
    if (kind == PatchKind::Regular) {
        if (n < 2) throw Error("PreconditionViolated", "regular patches start at stage 2");
        int64_t s = sch.s(n), r = sch.r(n - 1);
        p.copy = s + r;
        p.dirty = s + 4 * r;
        p.donor_keep = s + 2 * r;
        p.host_keep = s + 3 * r;
        p.top = n - 1;
    } else {
        int64_t r = sch.r(n);
        p.copy = 3 * r;
        p.dirty = 7 * r;
        p.donor_keep = 4 * r;
        p.host_keep = 6 * r;
        p.top = n;
    }
    return p;
}

int64_t source_radius(const Schedule& sch, PatchKind kind, int n) {
    return patch_radii(sch, kind, n).donor_keep;
}

PatchSource take_source(const Labeling& donor, Id x, int n, int64_t radius) {
    PatchSource src;
    src.n = n;
    src.radius = radius;
    src.center = donor.win->element(x);
    auto b = donor.win->ball(x, radius, donor.level(n));
    src.cbits.reserve(b.size());
    for (Id id : b) src.cbits.push_back(donor.cbits[id]);
    src.f.assign(n, {});
    for (int m = 1; m <= n; ++m) {
        src.f[m - 1].reserve(b.size());
        for (Id id : b) src.f[m - 1].push_back(donor.f[m - 1][id]);
    }
    return src;
}

PatchLog apply_patches(Labeling& lab, const std::vector<PatchRequest>& reqs) {
    PatchLog log;
    log.requests = static_cast<int64_t>(reqs.size());
    if (reqs.empty()) return log;
    const Window& w = *lab.win;
    std::vector<Placed> placed;
    for (const auto& rq : reqs) {
        const int n = rq.n;
        if (!rq.src) throw Error("PreconditionViolated", "patch without a donor");
        if (n > lab.M || rq.src->n < n) throw Error("PreconditionViolated", "donor or host lacks layer " + std::to_string(n));
        Placed p{&rq, patch_radii(lab.sch, rq.kind, n), {}, lab.level(n)};
        if (rq.src->radius < p.rad.donor_keep) throw Error("PreconditionViolated", "donor radius too small");
        if (rq.src->f[n - 1][0] != 0) throw Error("PreconditionViolated", "donor center is not a marker of layer " + std::to_string(n));
        if (!lab.is_q(n, rq.host))
            throw Error("PreconditionViolated", "host " + show(w, rq.host) + " is not a marker of layer " + std::to_string(n));
        if (w.depth(rq.host, w.level()) + p.rad.dirty > w.radius())
            throw Error("CoreExhausted", "dirty ball at " + show(w, rq.host) + " leaves the window");
        if (rq.kind == PatchKind::Supersize && lab.M > n) {
            for (Id z : w.neighborhood(rq.host, 20 * lab.sch.r(n), lab.level(n + 1)))
                if (lab.is_q(n + 1, z))
                    throw Error("PreconditionViolated", "marker of layer " + std::to_string(n + 1) + " at " + show(w, z) +
                                                            " within 20 r_n of " + show(w, rq.host));
        }
        p.ball = w.ball(rq.host, p.rad.dirty, p.lvl);
        placed.push_back(std::move(p));
    }
    // disjoint dirty balls
    for (size_t a = 0; a < placed.size(); ++a)
        for (size_t b = a + 1; b < placed.size(); ++b) {
            int64_t lim = placed[a].rad.dirty + placed[b].rad.dirty;
            int lvl = std::min(placed[a].lvl, placed[b].lvl);
            int64_t d;
            if (w.as_line())
                d = w.distance(placed[a].req->host, placed[b].req->host, lvl);
            else {
                auto nb = w.neighborhood(placed[a].req->host, lim, lvl);
                d = std::find(nb.begin(), nb.end(), placed[b].req->host) == nb.end() ? kInf : 0;
            }
            if (d < lim)
                throw Error("OverlapViolation", show(w, placed[a].req->host) + " and " + show(w, placed[b].req->host));
        }

    // before-images for the change log
    std::vector<std::pair<Id, std::vector<int32_t>>> before;
    for (auto& p : placed)
        for (Id id : p.ball) {
            std::vector<int32_t> v{static_cast<int32_t>(lab.cbits[id])};
            for (int m = 1; m <= lab.M; ++m) v.push_back(lab.f[m - 1][id]);
            before.push_back({id, std::move(v)});
        }

    int top = 0, nmax = 0;
    for (auto& p : placed) top = std::max(top, p.rad.top), nmax = std::max(nmax, p.req->n);
    // marker seeds per layer (kappa), gathered before anything is overwritten
    std::vector<std::vector<Id>> seeds(top + 1);
    std::vector<Id> annulus;
    for (auto& p : placed) {
        const auto& src = *p.req->src;
        for (int i = 1; i <= p.rad.top; ++i) {
            int64_t reach = p.rad.dirty + lab.sch.r(i);
            std::vector<int64_t> hd;
            if (!w.as_line()) hd = w.dist_to_set({p.req->host}, p.lvl, reach);
            for (Id z : w.neighborhood(p.req->host, reach, p.lvl)) {
                int64_t d = w.as_line() ? w.distance(p.req->host, z, p.lvl) : hd[z];
                if (lab.is_q(i, z) && d > p.rad.host_keep) seeds[i].push_back(z);
            }
            for (size_t k = 0; k < p.ball.size(); ++k)
                if (offset_depth_at(w, k, p.lvl) <= p.rad.donor_keep && src.f[i - 1][k] == 0) seeds[i].push_back(p.ball[k]);
        }
    }
    // transported copy and cleared annulus
    for (auto& p : placed) {
        const auto& src = *p.req->src;
        const int n = p.req->n;
        const uint32_t lo = low_mask(n);
        for (size_t k = 0; k < p.ball.size(); ++k) {
            int64_t d = offset_depth_at(w, k, p.lvl);
            Id z = p.ball[k];
            if (d <= p.rad.copy) {
                lab.cbits[z] = (lab.cbits[z] & ~lo) | (src.cbits[k] & lo);
                for (int m = 1; m <= n; ++m) lab.f[m - 1][z] = src.f[m - 1][k];
            } else if (d < p.rad.dirty) {
                annulus.push_back(z);
                for (int m = 1; m <= n; ++m) lab.f[m - 1][z] = -1;
            }
        }
    }
    std::sort(annulus.begin(), annulus.end());
    annulus.erase(std::unique(annulus.begin(), annulus.end()), annulus.end());
    // marker hierarchy on the annuli: lambda_i contains kappa_i, grows inside the annulus only
    std::vector<Id> prev = annulus;
    for (int i = 1; i <= top; ++i) {
        std::vector<Id> cand, forbidden;
        for (Id z : prev)
            if (w.depth(z, lab.level(i)) <= 10 * lab.sch.s(i))
                forbidden.push_back(z);
            else
                cand.push_back(z);
        auto& sd = seeds[i];
        std::sort(sd.begin(), sd.end());
        sd.erase(std::unique(sd.begin(), sd.end()), sd.end());
        auto lam = greedy_maximal_sparse(w, cand, lab.sch.r(i), lab.level(i), forbidden, -1, sd);
        std::vector<char> in(w.size(), 0);
        for (Id z : lam.elements) in[z] = 1;
        std::vector<Id> next;
        for (Id z : annulus)
            if (in[z]) {
                lab.f[i - 1][z] = 0;
                next.push_back(z);
            }
        prev = std::move(next);
    }
    for (int m = 1; m <= nmax; ++m) recolor_layer(lab, m, annulus);

    for (auto& [id, v] : before) {
        bool diff = static_cast<uint32_t>(v[0]) != lab.cbits[id];
        for (int m = 1; m <= lab.M && !diff; ++m) diff = v[m] != lab.f[m - 1][id];
        if (diff) log.changed.push_back(id);
    }
    std::sort(log.changed.begin(), log.changed.end());
    log.changed.erase(std::unique(log.changed.begin(), log.changed.end()), log.changed.end());
    return log;
}

Labeling patch(const Labeling& host, const PatchRequest& req) {
    Labeling out = host;
    apply_patches(out, {req});
    return out;
}

Certificate check_patch(const Labeling& before, const Labeling& after, const PatchRequest& req) {
    const Window& w = *before.win;
    const int n = req.n;
    const auto rad = patch_radii(before.sch, req.kind, n);
    const int lvl = before.level(n);
    const auto& src = *req.src;
    Certificate c;
    c.name = req.kind == PatchKind::Regular ? "regular-patch" : "supersize-patch";
    c.stage = n;
    c.core = after.core;
    auto dist = w.dist_to_set({req.host}, lvl, rad.dirty);
    bool b1 = true, b2 = true, b3 = true, b4 = true, b5 = true;
    const uint32_t lo = low_mask(n);
    for (Id z = 0; z < static_cast<Id>(w.size()); ++z) {
        if ((before.cbits[z] & ~lo) != (after.cbits[z] & ~lo)) {
            if (b1) c.fail("C bits above n changed at " + show(w, z));
            b1 = false;
        }
        for (int m = n + 1; m <= before.M; ++m)
            if (before.f[m - 1][z] != after.f[m - 1][z]) {
                if (b4) c.fail("layer " + std::to_string(m) + " changed at " + show(w, z));
                b4 = false;
            }
        if (dist[z] < 0 || dist[z] >= rad.dirty) {
            bool same = before.cbits[z] == after.cbits[z];
            for (int m = 1; m <= before.M; ++m) same &= before.f[m - 1][z] == after.f[m - 1][z];
            if (!same) {
                if (b2) c.fail("change outside the dirty ball at " + show(w, z));
                b2 = false;
            }
        }
    }
    auto ball = w.ball(req.host, rad.dirty, lvl);
    for (size_t k = 0; k < ball.size(); ++k) {
        if (w.offset_depth(static_cast<int64_t>(k), lvl) > rad.copy) continue;
        Id z = ball[k];
        bool same = (after.cbits[z] & lo) == (src.cbits[k] & lo);
        for (int m = 1; m <= n; ++m) same &= after.f[m - 1][z] == src.f[m - 1][k];
        if (!same) {
            if (b3) c.fail("copy region differs from the donor at " + show(w, z));
            b3 = false;
        }
    }
    // marker hierarchy
    std::vector<Id> prev;
    for (size_t k = 0; k < ball.size(); ++k) {
        int64_t d = w.offset_depth(static_cast<int64_t>(k), lvl);
        if (d > rad.copy && d < rad.dirty) prev.push_back(ball[k]);
    }
    const std::vector<Id> annulus = prev;
    for (int i = 1; i <= rad.top; ++i) {
        std::vector<char> lam(w.size(), 0);
        std::vector<Id> lam_near;
        for (Id z : w.neighborhood(req.host, rad.dirty + after.sch.r(i), lvl))
            if (after.is_q(i, z)) lam[z] = 1, lam_near.push_back(z);
        for (size_t k = 0; k < ball.size(); ++k) {
            int64_t d = w.offset_depth(static_cast<int64_t>(k), lvl);
            bool kd = d <= rad.donor_keep && src.f[i - 1][k] == 0;
            bool kh = d > rad.host_keep && before.is_q(i, ball[k]);
            if ((kd || kh) && !lam[ball[k]]) {
                if (b5) c.fail("kept marker dropped on layer " + std::to_string(i) + " at " + show(w, ball[k]));
                b5 = false;
            }
        }
        auto sp = verify_sparse(w, lam_near, after.sch.r(i), after.level(i));
        if (!sp.pass) {
            if (b5) c.fail("layer " + std::to_string(i) + " markers too close: " + sp.witnesses[0]);
            b5 = false;
        }
        auto dq = w.dist_to_set(lam_near, after.level(i), after.sch.r(i));
        std::vector<Id> next;
        for (Id z : prev) {
            if (w.depth(z, after.level(i)) > 10 * after.sch.s(i) && dq[z] < 0) {
                if (b5) c.fail("layer " + std::to_string(i) + " can grow at " + show(w, z));
                b5 = false;
            }
        }
        for (Id z : annulus)
            if (lam[z]) next.push_back(z);
        prev = std::move(next);
    }
    bool strict = verify_clean(before, true).pass;
    auto clean = verify_clean(after, strict);
    if (!clean.pass)
        for (auto& s : clean.witnesses) c.fail("clean: " + s);
    c.measured["higher_c_bits"] = b1;
    c.measured["outside_unchanged"] = b2;
    c.measured["copy_matches_donor"] = b3;
    c.measured["higher_layers"] = b4;
    c.measured["marker_hierarchy"] = b5;
    c.measured["clean"] = clean.pass;
    c.measured["strict"] = strict;
    return c;
}

std::vector<LabelChange> diff_labelings(const Labeling& a, const Labeling& b, size_t limit) {
    std::vector<LabelChange> out;
    for (Id z = 0; z < static_cast<Id>(a.cbits.size()) && out.size() < limit; ++z) {
        if (a.cbits[z] != b.cbits[z]) out.push_back({z, 0, a.cbits[z], b.cbits[z]});
        for (int m = 1; m <= std::min(a.M, b.M); ++m)
            if (a.f[m - 1][z] != b.f[m - 1][z]) out.push_back({z, m, a.f[m - 1][z], b.f[m - 1][z]});
    }
    return out;
}

nlohmann::ordered_json diff_json(const Labeling& a, const std::vector<LabelChange>& d) {
    auto j = nlohmann::ordered_json::array();
    for (auto& ch : d) j.push_back({a.win->encode(ch.id), ch.layer, ch.before, ch.after});
    return j;
}

}  // namespace forge
