#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>

#include "forge/embedding.hpp"
#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/verifier.hpp"

using namespace forge;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct Config {
    std::string group = "Z";
    std::string mode = "scaled";
    int stages = 3;
    ScaledConfig cfg;
    std::vector<int64_t> sites;
    int64_t radius = -1;
    int D = -1;
    std::string c_init = "zero";
    uint64_t seed = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["group"] = group;
        j["mode"] = mode;
        j["stages"] = stages;
        j["scaled"] = nlohmann::ordered_json(cfg.to_json());
        j["radius"] = radius;
        j["D"] = D;
        j["c_init"] = c_init;
        j["seed"] = std::to_string(seed);
        return j;
    }
};

std::string out_flag;
int jobs_flag = 1;

fs::path out_dir() {
    if (!out_flag.empty()) return out_flag;
    if (const char* e = std::getenv("FORGE_OUT_DIR"); e && *e) return e;
    return "forge-out";
}

void note(const std::string& s) { std::cerr << s << '\n'; }

GeneratorSystem parse_group(const std::string& text) {
    std::smatch m;
    GeneratorSystem gs;
    if (text == "Z") return integers();
    if (std::regex_match(text, m, std::regex(R"(Z\^?(\d+))"))) {
        int d = std::stoi(m[1]);
        if (d < 1 || d > 8) throw Error("Usage", "lattice dimension must be 1..8");
        gs.backend = make_lattice(d);
        for (int i = 0; i < d; ++i) {
            Elem e(d, 0);
            e[i] = 1;
            gs.gens.push_back(e);
        }
        return gs;
    }
    if (std::regex_match(text, m, std::regex(R"(F_?(\d+))"))) {
        int k = std::stoi(m[1]);
        if (k < 1 || k > 26) throw Error("Usage", "free rank must be 1..26");
        gs.backend = make_free(k);
        for (int i = 1; i <= k; ++i) gs.gens.push_back({i});
        return gs;
    }
    if (text == "Z2sum") {
        gs.backend = make_z2sum();
        gs.basis_rule = true;
        return gs;
    }
    if (text.size() > 5 && text.ends_with(".json")) return GeneratorSystem::from_json(nlohmann::json(read_json(text)));
    throw Error("Usage", "unknown group '" + text + "' (Z, Z^d, F_k, Z2sum or a generator JSON file)");
}

void add_run_options(CLI::App* sub, Config& c, bool with_sites) {
    sub->add_option("--group", c.group, "Z, Z^d, F_k, Z2sum or a generator JSON file")->capture_default_str();
    sub->add_option("--mode", c.mode, "scaled or exact")->check(CLI::IsMember({"scaled", "exact"}))->capture_default_str();
    sub->add_option("--stages", c.stages, "number of stages")->check(CLI::Range(1, 32))->capture_default_str();
    sub->add_option("--s1", c.cfg.s1, "first radius (scaled)")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--c", c.cfg.c, "annulus site spacing factor (scaled)")->capture_default_str();
    sub->add_option("--growth", c.cfg.growth, "r growth factor (scaled)")->capture_default_str();
    sub->add_option("--site-budget", c.cfg.site_budget, "sites planned per stage before any census")->capture_default_str();
    sub->add_option("--card-slack", c.cfg.card_slack, "extra colors per layer")->capture_default_str();
    if (with_sites) sub->add_option("--sites", c.sites, "observed site counts per stage")->delimiter(',');
    sub->add_option("--radius", c.radius, "window radius (-1: recommended)")->capture_default_str();
    sub->add_option("--D", c.D, "C-prefix depth (-1: number of stages)")->capture_default_str();
    sub->add_option("--c-init", c.c_init, "C-prefix policy")->check(CLI::IsMember({"zero", "hash", "digits"}))->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for the hash C-prefix policy")->capture_default_str();
}

Schedule make_schedule(const GeneratorSystem& gs, const Config& c) {
    if (c.mode == "exact") return exact_schedule(gs, c.stages);
    return scaled_schedule(gs, c.stages, c.cfg, c.sites);
}

std::string small_or_expr(const BigInt& v, const std::string& expr) {
    if (!expr.empty()) return expr;
    return v.str();
}

int stage_number(const fs::path& p, const std::string& prefix) {
    std::smatch m;
    std::string name = p.filename().string();
    if (std::regex_match(name, m, std::regex(prefix + R"(-(\d+)\.json)"))) return std::stoi(m[1]);
    return -1;
}

std::vector<fs::path> stage_files(const fs::path& dir) {
    std::vector<std::pair<int, fs::path>> found;
    if (!fs::is_directory(dir)) return {};
    for (auto& e : fs::directory_iterator(dir))
        if (int k = stage_number(e.path(), "stage"); k > 0) found.push_back({k, e.path()});
    std::sort(found.begin(), found.end());
    std::vector<fs::path> out;
    for (auto& [k, p] : found) out.push_back(p);
    return out;
}

fs::path sibling(const fs::path& snap, const std::string& kind, int n) {
    return snap.parent_path() / (kind + "-" + std::to_string(n) + ".json");
}

// stages with their codeballs, logs and change sets; a stage follows the
// one before it only when the stage numbers are consecutive
std::vector<StageState> load_states(const std::vector<fs::path>& snaps, bool with_census) {
    std::vector<StageState> out;
    for (const auto& p : snaps) {
        StageState st;
        st.lab = load_labeling(p);
        st.n = st.lab.stage;
        for (int j = 2; j <= st.n; ++j) {
            auto cp = sibling(p, "codeball", j);
            if (!fs::exists(cp)) throw Error("MissingFile", cp.string() + " (codeball for " + p.filename().string() + ")");
            st.codeballs.push_back(load_codeball(cp, *st.lab.win));
        }
        if (auto lp = sibling(p, "log", st.n); fs::exists(lp)) st.log = read_json(lp);
        if (!out.empty() && out.back().n == st.n - 1) {
            st.changed = changed_ids(out.back().lab, st.lab);
            for (Id id : st.changed) st.change_depth = std::min(st.change_depth, st.lab.win->depth(id, st.lab.win->level()));
        }
        if (with_census) st.census = stage_census(st.lab, st.n);
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace

namespace {

int64_t max_elements = 60'000'000;

void print_schedule(const Schedule& sch) {
    std::cout << "mode " << sch.mode << "\n";
    std::cout << "m\ts\tf\tr\t|F|\tkappa\tsites\n";
    for (int m = 1; m <= sch.stages(); ++m) {
        const auto& r = sch.at(m);
        std::cout << m << '\t' << r.s.str() << '\t' << r.f << '\t' << r.r.str() << '\t' << r.F.str() << '\t'
                  << small_or_expr(r.kappa, r.kappa_expr) << '\t' << (r.sites < 0 ? std::string("-") : std::to_string(r.sites))
                  << '\n';
    }
    std::cout << "next s\t" << small_or_expr(sch.next_s, sch.next_s_expr) << '\n';
    for (int m = 1; m <= sch.stages(); ++m)
        for (auto& [k, v] : sch.at(m).notes.items()) std::cout << "  stage " << m << ' ' << k << ": " << v.get<std::string>() << '\n';
}

Certificate feasible_or_throw(const GeneratorSystem& gs, const Schedule& sch) {
    auto chk = check_schedule(gs, sch);
    if (!chk.pass) {
        std::string why = chk.witnesses.empty() ? std::string("schedule check failed") : chk.witnesses.front();
        throw Error("Infeasible", why);
    }
    return chk;
}

// refuse windows that cannot be held in memory
void check_window_size(const GeneratorSystem& gs, int64_t R, int level) {
    auto c = ball_size_formula(gs, level, BigInt(R));
    if (c.kind == Count::Finite && c.value > max_elements)
        throw Error("Infeasible", "window of radius " + std::to_string(R) + " has " + c.value.str() +
                                      " elements, more than --max-elements " + std::to_string(max_elements));
}

RunOptions run_options(const Config& c) {
    RunOptions opt;
    opt.stages = c.stages;
    opt.cfg = c.cfg;
    opt.c_init = parse_cinit(c.c_init);
    opt.seed = c.seed;
    opt.D = c.D;
    opt.radius = c.radius;
    return opt;
}

void remove_stale(const fs::path& dir, int keep) {
    if (!fs::is_directory(dir)) return;
    for (auto& e : fs::directory_iterator(dir))
        for (const char* kind : {"stage", "codeball", "log", "diff"})
            if (int k = stage_number(e.path(), kind); k > keep) fs::remove(e.path());
}

void write_stage(const fs::path& dir, const StageState& st) {
    save_labeling(dir / ("stage-" + std::to_string(st.n) + ".json"), st.lab);
    if (st.n >= 2) save_codeball(dir / ("codeball-" + std::to_string(st.n) + ".json"), st.codeball(st.n), *st.lab.win);
    write_json(dir / ("log-" + std::to_string(st.n) + ".json"), st.log);
}

void write_run(const fs::path& dir, const Config& c, const Schedule& sch, const nlohmann::ordered_json& plan,
               const std::vector<StageState>& states) {
    nlohmann::ordered_json j;
    j["format"] = "forge-run/1";
    j["config"] = c.to_json();
    j["schedule"] = sch.to_json();
    j["plan"] = plan;
    auto& rows = j["stages"] = nlohmann::ordered_json::array();
    for (auto& st : states) {
        nlohmann::ordered_json r;
        r["n"] = st.n;
        r["snapshot"] = "stage-" + std::to_string(st.n) + ".json";
        r["core"] = st.lab.core;
        r["census_types"] = st.census.types.size();
        r["changed_points"] = st.changed.size();
        r["change_depth"] = st.change_depth == kInf ? -1 : st.change_depth;
        rows.push_back(r);
    }
    if (states.size() >= 2) j["stabilized_radius"] = stabilized_radius(states);
    write_json(dir / "run.json", j);
    nlohmann::ordered_json sj;
    sj["schedule"] = sch.to_json();
    write_json(dir / "schedule.json", sj);
}

void summarize(const StageState& st) {
    std::cout << "stage " << st.n << ": window " << st.lab.win->size() << " elements, core " << st.lab.core << ", census "
              << st.census.types.size() << " types";
    if (st.n >= 2)
        std::cout << ", changed " << st.changed.size() << " (least depth " << (st.change_depth == kInf ? -1 : st.change_depth)
                  << ")";
    std::cout << '\n';
}

int cmd_schedule(const Config& c) {
    auto gs = parse_group(c.group);
    auto sch = make_schedule(gs, c);
    print_schedule(sch);
    auto chk = check_schedule(gs, sch);
    nlohmann::ordered_json j;
    j["schedule"] = sch.to_json();
    j["check"] = chk.to_json();
    write_json(out_dir() / "schedule.json", j);
    if (!chk.pass) {
        for (auto& w : chk.witnesses) std::cerr << "infeasible: " << w << '\n';
        return kUsage;
    }
    std::cout << "feasible: all schedule rules hold\n";
    return kPass;
}

int cmd_build(const Config& c) {
    auto gs = parse_group(c.group);
    const fs::path dir = out_dir();
    std::vector<StageState> states;
    Schedule sch;
    nlohmann::ordered_json plan;
    if (c.mode == "exact") {
        if (c.stages != 1) throw Error("Infeasible", "the exact schedule is materialized at stage 1 only");
        sch = exact_schedule(gs, 1);
        feasible_or_throw(gs, sch);
        const int64_t R = c.radius > 0 ? c.radius : 2 * sch.r(1) + 1;
        check_window_size(gs, R, sch.f(1));
        auto w = make_window(gs, R, sch.f(1));
        states.push_back(first_stage(initial_clean_labeling(w, sch, 1, parse_cinit(c.c_init), c.seed, c.D)));
        plan["radius"] = R;
    } else {
        auto opt = run_options(c);
        opt.upto = 1;
        std::vector<int64_t> sites(c.stages, c.cfg.site_budget);
        auto probe = scaled_schedule(gs, c.stages, c.cfg, sites);
        feasible_or_throw(gs, probe);
        check_window_size(gs, c.radius > 0 ? c.radius : recommended_radius(probe, c.stages), probe.f(c.stages));
        auto run = run_scaled(gs, opt);
        sch = run.sch;
        states = std::move(run.states);
        plan = run.plan.back();
        plan.erase("outcome");
    }
    write_stage(dir, states[0]);
    remove_stale(dir, 1);
    write_run(dir, c, sch, plan, states);
    summarize(states[0]);
    return kPass;
}

int cmd_evolve(const Config& c) {
    if (c.mode == "exact")
        throw Error("Infeasible", "the exact schedule is materialized at stage 1 only (use build); its r_2 is beyond any window");
    auto gs = parse_group(c.group);
    const fs::path dir = out_dir();
    auto opt = run_options(c);
    {
        std::vector<int64_t> sites(c.stages, c.cfg.site_budget);
        auto probe = scaled_schedule(gs, c.stages, c.cfg, sites);
        feasible_or_throw(gs, probe);
        check_window_size(gs, c.radius > 0 ? c.radius : recommended_radius(probe, c.stages), probe.f(c.stages));
    }

    std::vector<StageState> resume;
    if (fs::exists(dir / "run.json") && read_json(dir / "run.json").value("config", nlohmann::ordered_json()) == c.to_json()) {
        std::vector<fs::path> snaps;
        for (auto& p : stage_files(dir)) {
            if (stage_number(p, "stage") != static_cast<int>(snaps.size()) + 1) break;
            snaps.push_back(p);
        }
        if (!snaps.empty()) {
            note("resuming from " + snaps.back().filename().string());
            resume = load_states(snaps, true);
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    auto run = run_scaled(gs, opt, resume, [&](const Schedule&, const StageState& st) {
        write_stage(dir, st);
        note("stage " + std::to_string(st.n) + " written");
    });
    if (run.plan.size() > 1) note("replanned " + std::to_string(run.plan.size() - 1) + " time(s)");
    auto plan = run.plan.back();
    plan.erase("outcome");
    plan.erase("resumed_stages");
    remove_stale(dir, c.stages);
    for (size_t k = 1; k < run.states.size(); ++k)
        write_json(dir / ("diff-" + std::to_string(run.states[k].n) + ".json"), change_log(run.states[k - 1].lab, run.states[k].lab));
    write_run(dir, c, run.sch, plan, run.states);
    for (auto& st : run.states) summarize(st);
    if (run.states.size() >= 2) std::cout << "stabilized radius " << stabilized_radius(run.states) << '\n';
    note("elapsed " + std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
    return kPass;
}

}  // namespace

namespace {

struct VerifyOpts {
    std::vector<std::string> paths;
    int r_max = 12;
    int max_j = 1;
    int64_t max_t = 0;
    bool explicit_min = false;
};

std::vector<fs::path> collect_snapshots(const std::vector<std::string>& paths) {
    std::vector<fs::path> snaps;
    if (paths.empty()) return stage_files(out_dir());
    for (const auto& s : paths) {
        fs::path p = s;
        if (fs::is_directory(p)) {
            auto more = stage_files(p);
            snaps.insert(snaps.end(), more.begin(), more.end());
        } else if (fs::exists(p)) {
            snaps.push_back(p);
        } else {
            throw Error("MissingFile", p.string());
        }
    }
    return snaps;
}

int cmd_verify(const VerifyOpts& o) {
    auto snaps = collect_snapshots(o.paths);
    if (snaps.empty()) throw Error("MissingFile", "no stage snapshots in " + (o.paths.empty() ? out_dir().string() : o.paths[0]));
    auto states = load_states(snaps, false);
    bool chain = true;
    for (size_t k = 0; k < states.size(); ++k) chain &= states[k].n == static_cast<int>(k) + 1;

    nlohmann::ordered_json certs = nlohmann::ordered_json::array(), skipped = nlohmann::ordered_json::array();
    bool ok = true;
    auto add = [&](const Certificate& c) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (c.measured.contains("r")) std::cout << " r " << c.measured["r"].dump();
        std::cout << " stage " << c.stage << " core " << c.core;
        if (!c.pass && !c.witnesses.empty()) std::cout << ": " << c.witnesses.front();
        std::cout << '\n';
        certs.push_back(c.to_json());
        ok &= c.pass;
    };
    auto skip = [&](const std::string& name, const std::string& why) {
        std::cout << "SKIP " << name << ": " << why << '\n';
        skipped.push_back({{"name", name}, {"reason", why}});
    };

    for (const auto& st : states) {
        add(verify_clean(st.lab, true, st.lab.core));
        if (st.n >= 2) add(verify_codeballs(st.lab, st.codeballs));
    }
    Labeling limit = states.back().lab;
    if (chain && states.size() >= 2) {
        add(verify_stability(states));
        limit = stabilized_limit(states);
        const auto& sch = states[1].lab.sch;
        try {
            auto c = verify_syndetic(states[1].lab, 1, sch.s(1), 2 * sch.r(2), states[1].lab.level(2));
            c.name = "syndetic_first_types_at_stage_2";
            add(c);
        } catch (const Error& e) {
            if (e.kind() != "CoreTooSmall") throw;
            skip("syndetic_first_types_at_stage_2", e.what());
        }
    } else if (states.size() >= 2) {
        skip("stability", "snapshots are not the consecutive stages 1..N");
    }
    try {
        add(o.explicit_min ? verify_minimality(limit, o.max_j, o.max_t) : verify_minimality_all(limit));
    } catch (const Error& e) {
        if (o.explicit_min || e.kind() != "CoreTooSmall") throw;
        skip("minimality", e.what());
    }
    auto fr = verify_freeness(limit, o.r_max);
    add(fr);
    for (int r = 1; r <= o.r_max; ++r) {
        int64_t S = separation_depth(fr, r);
        if (S < 0) continue;
        auto c = bernoulli_freeness_witness(limit, r, static_cast<int>(S));
        add(c);
    }

    nlohmann::ordered_json j;
    auto names = nlohmann::ordered_json::array();
    for (auto& p : snaps) names.push_back(p.filename().string());
    j["snapshots"] = names;
    j["limit_core"] = limit.core;
    j["pass"] = ok;
    j["certificates"] = certs;
    j["skipped"] = skipped;
    write_json(out_dir() / "certificates.json", j);
    std::cout << (ok ? "verdict: pass" : "verdict: FAIL") << '\n';
    return ok ? kPass : kFail;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string census_csv(const Labeling& lab, int j, int64_t t, int64_t core, size_t* types) {
    auto cs = enumerate_ball_types(lab, j, t, core);
    std::string out = "hash,j,radius,count,first_site\n";
    for (const auto& bt : cs.types)
        out += std::to_string(bt.key[0]) + ":" + std::to_string(bt.key[1]) + "," + std::to_string(j) + "," + std::to_string(t) + "," +
               std::to_string(bt.count) + "," + csv_field(lab.win->encode(bt.first).dump()) + "\n";
    *types = cs.types.size();
    return out;
}

struct CensusOpts {
    std::string snapshot;
    int j = 1;
    int64_t t = 1;
    int64_t core = -1;
};

int cmd_census(const CensusOpts& o) {
    auto lab = load_labeling(o.snapshot);
    if (o.j < 1 || o.j > lab.M) throw Error("Usage", "layer must be 1.." + std::to_string(lab.M));
    size_t types = 0;
    auto csv = census_csv(lab, o.j, o.t, o.core, &types);
    auto p = out_dir() / ("census-stage-" + std::to_string(lab.stage) + "-j" + std::to_string(o.j) + "-t" + std::to_string(o.t) + ".csv");
    write_atomic(p, [&](std::ostream& s) { s << csv; });
    std::cout << types << " types of radius " << o.t << " on layer " << o.j << " -> " << p.string() << '\n';
    return kPass;
}

struct RenderOpts {
    std::string snapshot;
    int layer = 1;
    std::string format = "text";
    int64_t from = -100, to = 100;
    int64_t t = 1;
};

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int cmd_render(const RenderOpts& o) {
    auto lab = load_labeling(o.snapshot);
    const Window& w = *lab.win;
    if (o.layer < 1 || o.layer > lab.M) throw Error("Usage", "layer must be 1.." + std::to_string(lab.M));
    const std::string base = "render-stage-" + std::to_string(lab.stage) + "-layer-" + std::to_string(o.layer);
    const bool lattice = w.gens().backend->name() == "lattice";
    const size_t dim = w.element(w.identity()).size();
    const auto& f = lab.f[o.layer - 1];

    if (o.format == "csv") {
        size_t types = 0;
        auto csv = census_csv(lab, o.layer, o.t, -1, &types);
        auto p = out_dir() / (base + ".csv");
        write_atomic(p, [&](std::ostream& s) { s << csv; });
        std::cout << types << " types -> " << p.string() << '\n';
        return kPass;
    }
    if (o.format == "text") {
        if (!lattice || dim != 1) throw Error("Usage", "text strips need Z; use --format csv for this group");
        const int64_t a = std::max(o.from, -w.radius()), b = std::min(o.to, w.radius());
        if (a > b) throw Error("Usage", "empty range");
        std::string txt = "layer " + std::to_string(o.layer) + ", '|' marks the marker set, x from " + std::to_string(a) + " to " +
                          std::to_string(b) + "\n";
        for (int64_t x0 = a; x0 <= b; x0 += 100) {
            std::string row = std::to_string(x0);
            row.resize(std::max<size_t>(row.size(), 12), ' ');
            for (int64_t x = x0; x <= std::min(b, x0 + 99); ++x) row += f[LineWindow::id_of(x)] == 0 ? '|' : '.';
            txt += row + "\n";
        }
        auto p = out_dir() / (base + ".txt");
        write_atomic(p, [&](std::ostream& s) { s << txt; });
        std::cout << txt;
        return kPass;
    }
    if (o.format == "ppm") {
        if (!lattice || dim != 2) throw Error("Usage", "PPM images need Z^2; use --format csv for this group");
        const int64_t R = w.radius(), side = 2 * R + 1;
        std::string px(static_cast<size_t>(side * side * 3), char(255));
        for (Id id = 0; id < static_cast<Id>(w.size()); ++id) {
            auto e = w.element(id);
            const int64_t col = e[0] + R, row = R - e[1];
            if (col < 0 || col >= side || row < 0 || row >= side) continue;
            const size_t k = static_cast<size_t>((row * side + col) * 3);
            uint64_t h = f[id] == 0 ? 0 : mix(static_cast<uint64_t>(f[id])) | 0x404040;
            px[k] = char(h >> 16 & 255), px[k + 1] = char(h >> 8 & 255), px[k + 2] = char(h & 255);
        }
        auto p = out_dir() / (base + ".ppm");
        write_atomic(p, [&](std::ostream& s) { s << "P6\n" << side << ' ' << side << "\n255\n" << px; });
        std::cout << side << "x" << side << " image -> " << p.string() << '\n';
        return kPass;
    }
    throw Error("Usage", "unknown format " + o.format);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge: staged marker labelings on Cayley graph windows, with certificates"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--out", out_flag, "output directory (default $FORGE_OUT_DIR, else forge-out)");
    app.add_option("--jobs", jobs_flag, "worker threads (0: all cores)")->check(CLI::Range(0, 256))->capture_default_str();
    app.add_option("--max-elements", max_elements, "largest window the run may allocate")->capture_default_str();

    Config sc, bc, ec;
    auto* s_schedule = app.add_subcommand("schedule", "print and check the stage schedule");
    add_run_options(s_schedule, sc, true);
    auto* s_build = app.add_subcommand("build", "build the stage-1 labeling");
    add_run_options(s_build, bc, false);
    auto* s_evolve = app.add_subcommand("evolve", "run the stages, resuming from saved snapshots");
    add_run_options(s_evolve, ec, false);

    VerifyOpts vo;
    auto* s_verify = app.add_subcommand("verify", "check snapshots and write certificates.json");
    s_verify->add_option("paths", vo.paths, "snapshot files or directories (default: output directory)");
    s_verify->add_option("--r-max", vo.r_max, "largest radius for the freeness table")->check(CLI::Range(0, 64))->capture_default_str();
    auto* mj = s_verify->add_option("--max-j", vo.max_j, "minimality: largest layer (default: every cell the stages reach)")->check(CLI::PositiveNumber)->capture_default_str();
    auto* mt = s_verify->add_option("--max-t", vo.max_t, "minimality: largest radius")->check(CLI::NonNegativeNumber)->capture_default_str();

    RenderOpts ro;
    auto* s_render = app.add_subcommand("render", "draw one layer of a snapshot");
    s_render->add_option("snapshot", ro.snapshot)->required();
    s_render->add_option("--layer", ro.layer)->capture_default_str();
    s_render->add_option("--format", ro.format, "text (Z), ppm (Z^2) or csv")->check(CLI::IsMember({"text", "ppm", "csv"}))->capture_default_str();
    s_render->add_option("--from", ro.from, "text: first x")->capture_default_str();
    s_render->add_option("--to", ro.to, "text: last x")->capture_default_str();
    s_render->add_option("--t", ro.t, "csv: ball radius")->capture_default_str();

    CensusOpts co;
    auto* s_census = app.add_subcommand("census", "ball types of a snapshot as CSV");
    s_census->add_option("snapshot", co.snapshot)->required();
    s_census->add_option("--j", co.j, "layer")->capture_default_str();
    s_census->add_option("--t", co.t, "ball radius")->capture_default_str();
    s_census->add_option("--core", co.core, "largest center depth (-1: core minus t)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }
    set_jobs(jobs_flag);
    try {
        if (s_schedule->parsed()) return cmd_schedule(sc);
        if (s_build->parsed()) return cmd_build(bc);
        if (s_evolve->parsed()) return cmd_evolve(ec);
        if (s_verify->parsed()) {
            vo.explicit_min = mj->count() > 0 || mt->count() > 0;
            return cmd_verify(vo);
        }
        if (s_render->parsed()) return cmd_render(ro);
        if (s_census->parsed()) return cmd_census(co);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
