#include "forge/embedding.hpp"

#include <algorithm>
#include <bit>

#include "forge/parallel.hpp"

namespace forge {

namespace {

std::string show(const Window& w, Id id) { return w.encode(id).dump(); }

int metric_level(const Window& w, int r) {
    if (r <= w.level()) return r;
    if (w.same_graph(w.level(), r)) return w.level();
    throw Error("WindowTooSmall", "window level " + std::to_string(w.level()) + " below G_" + std::to_string(r));
}

int bits_for(int64_t n) { return n <= 1 ? 0 : static_cast<int>(std::bit_width(static_cast<uint64_t>(n - 1))); }

std::string to_bits(uint64_t v, int width) {
    std::string s(width, '0');
    for (int k = 0; k < width; ++k)
        if ((v >> (width - 1 - k)) & 1) s[k] = '1';
    return s;
}

}  // namespace

std::string ProperColoring::bits(Id id) const {
    std::string s;
    for (int r = 1; r <= r_max; ++r) s += to_bits(colors[r - 1][id], width[r - 1]);
    return s;
}

nlohmann::ordered_json ProperColoring::summary() const {
    auto a = nlohmann::ordered_json::array();
    for (int r = 1; r <= r_max; ++r)
        a.push_back({{"r", r}, {"palette", palette[r - 1]}, {"colors_used", used[r - 1]}, {"bits", width[r - 1]}});
    return a;
}

ProperColoring proper_coloring(const Window& w, int r_max) {
    ProperColoring pc;
    pc.r_max = r_max;
    const Id n = static_cast<Id>(w.size());
    for (int r = 1; r <= r_max; ++r) {
        const int lvl = metric_level(w, r);
        std::vector<uint32_t> col(n, 0);
        int64_t maxdeg = 0, used = 0;
        std::vector<int64_t> seen;
        for (Id x = 0; x < n; ++x) {
            auto nb = w.neighborhood(x, r, lvl);
            maxdeg = std::max<int64_t>(maxdeg, static_cast<int64_t>(nb.size()) - 1);
            seen.assign(nb.size() + 1, 0);
            for (Id y : nb)
                if (y < x && col[y] < seen.size()) seen[col[y]] = 1;
            uint32_t c = 0;
            while (seen[c]) ++c;
            col[x] = c;
            used = std::max<int64_t>(used, c + 1);
        }
        pc.palette.push_back(maxdeg + 1);
        pc.used.push_back(n == 0 ? 0 : used);
        pc.width.push_back(bits_for(maxdeg + 1));
        pc.colors.push_back(std::move(col));
    }
    return pc;
}

Certificate check_proper_coloring(const Window& w, const ProperColoring& pc) {
    Certificate c;
    c.name = "proper_coloring";
    c.measured["blocks"] = pc.summary();
    int64_t edges = 0;
    for (int r = 1; r <= pc.r_max; ++r) {
        const int lvl = metric_level(w, r);
        const auto& col = pc.colors[r - 1];
        for (Id x = 0; x < static_cast<Id>(w.size()); ++x) {
            if (col[x] >> pc.width[r - 1] && pc.width[r - 1] < 32)
                c.fail("r=" + std::to_string(r) + ": color of " + show(w, x) + " overflows its block");
            for (Id y : w.neighborhood(x, r, lvl)) {
                if (y <= x) continue;
                ++edges;
                if (col[x] == col[y]) c.fail("r=" + std::to_string(r) + ": " + show(w, x) + " ~ " + show(w, y));
            }
        }
    }
    c.measured["edges"] = edges;
    return c;
}

std::string interleave(const std::string& a, const std::string& b) {
    if (a.size() != b.size())
        throw Error("DepthMismatch", "streams of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    std::string s;
    s.reserve(2 * a.size());
    for (size_t k = 0; k < a.size(); ++k) s += a[k], s += b[k];
    return s;
}

std::pair<std::string, std::string> deinterleave(const std::string& s) {
    if (s.size() % 2) throw Error("DepthMismatch", "odd stream length " + std::to_string(s.size()));
    std::string a, b;
    for (size_t k = 0; k < s.size(); k += 2) a += s[k], b += s[k + 1];
    return {a, b};
}

std::string separating_bits(const Window& w, const ProperColoring& pc, Id id) {
    int pw = 0;
    for (int x : pc.width) pw += x;
    const int iw = bits_for(w.size());
    const int width = std::max(pw, iw);
    std::string a = pc.bits(id), b = to_bits(static_cast<uint64_t>(id), iw);
    a.append(width - a.size(), '0');
    b.append(width - b.size(), '0');
    return interleave(a, b);
}

nlohmann::ordered_json psi_pattern(const Window& w, const ProperColoring& pc, Id center, int64_t radius, int level) {
    nlohmann::ordered_json j;
    j["center"] = nlohmann::ordered_json(w.encode(center));
    j["radius"] = radius;
    auto& m = j["pattern"] = nlohmann::ordered_json::array();
    auto offsets = w.ball_clipped(w.identity(), radius, level);
    auto ball = w.ball_clipped(center, radius, level);
    for (size_t k = 0; k < ball.size(); ++k) {
        if (ball[k] < 0 || offsets[k] < 0) continue;
        m.push_back({{"gamma", nlohmann::ordered_json(w.encode(offsets[k]))}, {"bits", separating_bits(w, pc, ball[k])}});
    }
    return j;
}

Certificate bernoulli_freeness_witness(const Labeling& lab, int r, int S) {
    const Window& w = *lab.win;
    Certificate c;
    c.name = "bernoulli_witness";
    c.stage = lab.stage;
    c.core = lab.core;
    c.measured["r"] = r;
    c.measured["depth"] = S;
    if (r <= 0) return c;
    const int lvl = metric_level(w, r);
    const Id n = static_cast<Id>(w.size());
    std::vector<Id> first(n, -1), other(n, -1);
    parallel_for(n, [&](int64_t a, int64_t b) {
        for (Id p = static_cast<Id>(a); p < b; ++p) {
            if (w.depth(p, w.level()) > lab.core) continue;
            auto orbit = w.ball_clipped(p, r, lvl);  // entry k is gamma_k * p
            const uint64_t here = lab.packed(p, S);
            for (size_t k = 1; k < orbit.size(); ++k) {
                Id g = orbit[k];
                if (g < 0 || w.depth(g, w.level()) > lab.core) continue;
                if (lab.packed(g, S) == here) {
                    first[p] = p;
                    other[p] = g;
                    break;
                }
            }
        }
    });
    int64_t pairs = 0;
    for (Id p = 0; p < n; ++p)
        if (first[p] >= 0) {
            ++pairs;
            c.fail("point " + show(w, p) + " and its translate " + show(w, other[p]) + " agree at depth " + std::to_string(S));
        }
    c.measured["failing_points"] = pairs;
    return c;
}

}  // namespace forge
