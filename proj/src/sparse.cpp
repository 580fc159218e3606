#include "forge/sparse.hpp"

#include <algorithm>

namespace forge {

namespace {

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

std::vector<char> mask_of(const Window& w, const std::vector<Id>& ids) {
    std::vector<char> m(w.size(), 0);
    for (Id i : ids) m[i] = 1;
    return m;
}

}  // namespace

nlohmann::json MarkerSet::to_json(const Window& w) const {
    nlohmann::json els = nlohmann::json::array();
    for (Id id : elements) els.push_back(w.encode(id));
    return {{"r", r}, {"level", level}, {"core", core}, {"elements", els}};
}

std::vector<Id> all_elements(const Window& w) {
    std::vector<Id> v(w.size());
    for (Id i = 0; i < static_cast<Id>(v.size()); ++i) v[i] = i;
    return v;
}

MarkerSet greedy_maximal_sparse(const Window& w, const std::vector<Id>& S, int64_t r, int level,
                                const std::vector<Id>& forbidden, int64_t interior,
                                const std::vector<Id>& seed) {
    MarkerSet out;
    out.r = r;
    out.level = level;
    out.core = interior < 0 ? w.radius() - r : interior;
    std::vector<char> blocked(w.size(), 0);
    for (Id f : forbidden) blocked[f] |= 2;
    auto take = [&](Id x) {
        out.elements.push_back(x);
        for (Id y : w.neighborhood(x, r, level)) blocked[y] |= 1;
    };
    std::vector<Id> seeds = seed;
    std::sort(seeds.begin(), seeds.end());
    for (Id x : seeds) take(x);
    std::vector<Id> cand = S;
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (Id x : cand)
        if (!blocked[x]) take(x);
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

Certificate verify_sparse(const Window& w, const std::vector<Id>& T, int64_t r, int level) {
    Certificate c;
    c.name = "sparse";
    c.measured["r"] = r;
    c.measured["size"] = T.size();
    if (const LineWindow* line = w.as_line()) {
        std::vector<int64_t> xs;
        for (Id id : T) xs.push_back(LineWindow::coord(id));
        std::sort(xs.begin(), xs.end());
        for (size_t i = 1; i < xs.size(); ++i)
            if (xs[i] - xs[i - 1] <= r)
                c.fail(std::to_string(xs[i - 1]) + " ~ " + std::to_string(xs[i]));
        (void)line;
        return c;
    }
    auto m = mask_of(w, T);
    for (Id x : T)
        for (Id y : w.neighborhood(x, r, level))
            if (y != x && m[y] && x < y) c.fail(show(w, x) + " ~ " + show(w, y));
    return c;
}

Certificate verify_maximal(const Window& w, const std::vector<Id>& T, const std::vector<Id>& S,
                           int64_t r, int level, int64_t core, const std::vector<Id>& forbidden) {
    Certificate c;
    c.name = "maximal";
    c.core = core;
    auto dist = w.dist_to_set(T, level, r);
    auto fb = mask_of(w, forbidden);
    int64_t checked = 0;
    for (Id x : S) {
        if (fb[x] || w.depth(x, w.level()) > core) continue;
        ++checked;
        if (dist[x] < 0) c.fail(show(w, x) + " can be added");
    }
    c.measured["checked"] = checked;
    return c;
}

Certificate verify_net(const Window& w, const std::vector<Id>& T, int64_t s, int level, int64_t core) {
    Certificate c;
    c.name = "net";
    c.core = core;
    c.measured["s"] = s;
    auto dist = w.dist_to_set(T, level, s);
    for (Id x = 0; x < static_cast<Id>(w.size()); ++x) {
        if (w.depth(x, w.level()) > core) continue;
        if (dist[x] < 0) c.fail(show(w, x));
    }
    return c;
}

}  // namespace forge
