#include "forge/io.hpp"

#include <charconv>
#include <fstream>
#include <unistd.h>

#include "forge/parallel.hpp"

namespace forge {

void write_atomic(const fs::path& p, const std::function<void(std::ostream&)>& fill) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("IoError", "cannot write " + tmp.string());
        fill(out);
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw Error("IoError", "short write to " + tmp.string());
        }
    }
    fs::rename(tmp, p);
}

void write_json(const fs::path& p, const nlohmann::ordered_json& j) {
    write_atomic(p, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

nlohmann::ordered_json read_json(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("MissingFile", p.string());
    try {
        return nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("BadSnapshot", p.string() + ": " + e.what());
    }
}

namespace {

constexpr const char* kFormat = "forge-labeling/1";

nlohmann::ordered_json header(const Labeling& lab) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["group"] = nlohmann::ordered_json(lab.win->gens().to_json());
    j["schedule"] = lab.sch.to_json();
    j["R"] = lab.win->radius();
    j["level"] = lab.win->level();
    j["size"] = lab.win->size();
    j["core"] = lab.core;
    j["stage"] = lab.stage;
    j["M"] = lab.M;
    j["D"] = lab.D;
    j["rows"] = "shortlex order: [word, C prefix, f_1 .. f_M]";
    return j;
}

struct Header {
    std::shared_ptr<const Window> win;
    int M = 0;
};

Header open_header(const nlohmann::ordered_json& h) {
    if (h.value("format", "") != kFormat) throw Error("BadSnapshot", "not a labeling snapshot");
    Header hd;
    auto gs = GeneratorSystem::from_json(nlohmann::json(h.at("group")));
    hd.win = make_window(gs, h.at("R").get<int64_t>(), h.at("level").get<int>());
    hd.M = h.at("M").get<int>();
    if (h.value("size", int64_t(-1)) != hd.win->size()) throw Error("BadSnapshot", "window size disagrees with the header");
    return hd;
}

// Rows land in one flat array: C prefix then f_1 .. f_M per id.
struct Rows {
    Header hd;
    std::vector<int64_t> vals;
    int64_t count = 0;

    void check_word(const nlohmann::json& word) {
        if (count >= hd.win->size()) throw Error("BadSnapshot", "more rows than window elements");
        if (word != hd.win->encode(static_cast<Id>(count)))
            throw Error("BadSnapshot", "row " + std::to_string(count) + " names " + word.dump() + ", expected " +
                                           hd.win->encode(static_cast<Id>(count)).dump());
    }
    void end_row(size_t start) {
        if (vals.size() - start != static_cast<size_t>(hd.M) + 1)
            throw Error("BadSnapshot", "row " + std::to_string(count) + " has the wrong length");
        ++count;
    }
};

// top-level fields go to a DOM, the "labels" rows straight into Rows
struct SnapshotSax {
    using WordParser = nlohmann::detail::json_sax_dom_parser<nlohmann::json>;
    nlohmann::ordered_json head;
    nlohmann::detail::json_sax_dom_parser<nlohmann::ordered_json> dom{head};
    Rows rows;
    int depth = 0;
    bool in_labels = false;
    int item = 0;          // position inside the current row
    size_t row_start = 0;
    nlohmann::json word;
    std::unique_ptr<WordParser> wp;

    bool in_word() const { return wp != nullptr; }
    void finish_word() {
        wp.reset();
        rows.check_word(word);
        ++item;
    }
    template <class V>
    bool scalar(V v, bool numeric) {
        if (in_word()) return wp->number_integer(static_cast<int64_t>(v));
        if (depth != 3) throw Error("BadSnapshot", "label outside a row");
        if (item == 0) {
            word = static_cast<int64_t>(v);
            finish_word();
            return true;
        }
        if (!numeric) throw Error("BadSnapshot", "non-integer label");
        rows.vals.push_back(static_cast<int64_t>(v));
        ++item;
        return true;
    }

    bool null() {
        if (in_labels) throw Error("BadSnapshot", "null in labels");
        return dom.null();
    }
    bool boolean(bool b) {
        if (in_labels) throw Error("BadSnapshot", "boolean in labels");
        return dom.boolean(b);
    }
    bool number_integer(int64_t v) { return in_labels ? scalar(v, true) : dom.number_integer(v); }
    bool number_unsigned(uint64_t v) {
        if (!in_labels) return dom.number_unsigned(v);
        if (v > static_cast<uint64_t>(INT64_MAX)) throw Error("BadSnapshot", "label out of range");
        return scalar(static_cast<int64_t>(v), true);
    }
    bool number_float(double d, const std::string& s) {
        if (in_labels) throw Error("BadSnapshot", "non-integer label " + s);
        return dom.number_float(d, s);
    }
    bool string(std::string& s) {
        if (!in_labels) return dom.string(s);
        if (in_word()) return wp->string(s);
        if (depth == 3 && item == 0) {
            word = s;
            finish_word();
            return true;
        }
        throw Error("BadSnapshot", "string label " + s);
    }
    bool binary(nlohmann::ordered_json::binary_t& b) {
        if (in_labels) throw Error("BadSnapshot", "binary in labels");
        return dom.binary(b);
    }
    bool start_object(size_t n) {
        ++depth;
        if (!in_labels) return dom.start_object(n);
        if (!in_word()) throw Error("BadSnapshot", "object in labels");
        return wp->start_object(n);
    }
    bool key(std::string& k) {
        if (in_word()) return wp->key(k);
        if (depth == 1 && k == "labels") {
            rows.hd = open_header(head);
            rows.vals.reserve(static_cast<size_t>(rows.hd.win->size()) * (rows.hd.M + 1));
            in_labels = true;
            return true;
        }
        return dom.key(k);
    }
    bool end_object() {
        --depth;
        if (!in_labels) return dom.end_object();
        return wp->end_object();
    }
    bool start_array(size_t n) {
        ++depth;
        if (!in_labels) return dom.start_array(n);
        if (in_word()) return wp->start_array(n);
        if (depth == 2) return true;
        if (depth == 3) {
            item = 0;
            row_start = rows.vals.size();
            return true;
        }
        if (depth == 4 && item == 0) {
            word = nlohmann::json();
            wp = std::make_unique<WordParser>(word);
            return wp->start_array(n);
        }
        throw Error("BadSnapshot", "nested array in labels");
    }
    bool end_array() {
        --depth;
        if (!in_labels) return dom.end_array();
        if (in_word()) {
            bool ok = wp->end_array();
            if (depth == 3) finish_word();
            return ok;
        }
        if (depth == 2) rows.end_row(row_start);
        if (depth == 1) in_labels = false;
        return true;
    }
    bool parse_error(size_t pos, const std::string& tok, const nlohmann::detail::exception& e) {
        throw Error("BadSnapshot", "at byte " + std::to_string(pos) + " near '" + tok + "': " + e.what());
    }
};

Labeling assemble(const nlohmann::ordered_json& h, const Rows& rows) {
    Labeling lab;
    lab.win = rows.hd.win;
    lab.sch = Schedule::from_json(h.at("schedule"));
    lab.core = h.at("core").get<int64_t>();
    lab.stage = h.at("stage").get<int>();
    lab.M = rows.hd.M;
    lab.D = h.at("D").get<int>();
    const size_t n = lab.win->size();
    if (static_cast<size_t>(rows.count) != n)
        throw Error("BadSnapshot", "expected " + std::to_string(n) + " rows, found " + std::to_string(rows.count));
    lab.cbits.assign(n, 0);
    lab.f.assign(lab.M, std::vector<int32_t>(n, 0));
    const size_t w = lab.M + 1;
    for (size_t id = 0; id < n; ++id) {
        const int64_t* r = rows.vals.data() + id * w;
        if (r[0] < 0 || r[0] > UINT32_MAX) throw Error("BadSnapshot", "C prefix out of range in row " + std::to_string(id));
        lab.cbits[id] = static_cast<uint32_t>(r[0]);
        for (int m = 1; m <= lab.M; ++m) {
            if (r[m] < 0 || r[m] > INT32_MAX) throw Error("BadSnapshot", "label out of range in row " + std::to_string(id));
            lab.f[m - 1][id] = static_cast<int32_t>(r[m]);
        }
    }
    return lab;
}

std::vector<Id> ids_from(const Window& w, const nlohmann::ordered_json& a) {
    std::vector<Id> v;
    for (auto& e : a) {
        Id id = w.find(w.gens().backend->decode(nlohmann::json(e)));
        if (id < 0) throw Error("BadSnapshot", "element " + e.dump() + " outside the window");
        v.push_back(id);
    }
    return v;
}

std::array<uint64_t, 2> key_from(const nlohmann::ordered_json& a) {
    return {std::stoull(a.at(0).get<std::string>()), std::stoull(a.at(1).get<std::string>())};
}

}  // namespace

void save_labeling(const fs::path& p, const Labeling& lab) {
    write_atomic(p, [&](std::ostream& o) {
        std::string head = header(lab).dump(2);
        head.pop_back();  // reopen the object for the rows
        while (!head.empty() && (head.back() == '\n' || head.back() == ' ')) head.pop_back();
        o << head << ",\n  \"labels\": [";
        std::string buf;
        char num[16];
        const size_t n = lab.cbits.size();
        for (size_t id = 0; id < n; ++id) {
            buf += id ? ",\n    [" : "\n    [";
            auto put = [&](int64_t v) {
                auto r = std::to_chars(num, num + sizeof num, v);
                buf.append(num, r.ptr);
            };
            buf += lab.win->encode(static_cast<Id>(id)).dump();
            buf += ',';
            put(lab.cbits[id]);
            for (int m = 0; m < lab.M; ++m) {
                buf += ',';
                put(lab.f[m][id]);
            }
            buf += ']';
            if (buf.size() > (1 << 20)) {
                o << buf;
                buf.clear();
            }
        }
        o << buf << (n ? "\n  ]\n}\n" : "]\n}\n");
    });
}

Labeling load_labeling(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("MissingFile", p.string());
    SnapshotSax sax;
    bool ok = false;
    try {
        ok = nlohmann::ordered_json::sax_parse(in, &sax);
    } catch (const nlohmann::json::exception& e) {
        throw Error("BadSnapshot", p.string() + ": " + e.what());
    }
    if (!ok) throw Error("BadSnapshot", p.string() + ": malformed labels");
    if (!sax.rows.hd.win) throw Error("BadSnapshot", p.string() + ": no labels");
    return assemble(sax.head, sax.rows);
}

Labeling labeling_from_json(const nlohmann::ordered_json& j) {
    Rows rows;
    rows.hd = open_header(j);
    for (auto& r : j.at("labels")) {
        if (!r.is_array() || r.empty()) throw Error("BadSnapshot", "row is not an array");
        rows.check_word(nlohmann::json(r[0]));
        size_t start = rows.vals.size();
        for (size_t k = 1; k < r.size(); ++k) rows.vals.push_back(r[k].get<int64_t>());
        rows.end_row(start);
    }
    return assemble(j, rows);
}

void save_codeball(const fs::path& p, const Codeball& cb, const Window& w) {
    auto j = cb.to_json(w);
    auto& pat = j["pattern"] = nlohmann::ordered_json::array();
    for (uint64_t v : cb.pattern.labels) pat.push_back(std::to_string(v));
    auto& rep = j["repair"];
    rep["n"] = cb.repair.n;
    rep["radius"] = cb.repair.radius;
    rep["center"] = nlohmann::ordered_json(w.gens().backend->encode(cb.repair.center));
    rep["c_prefix"] = cb.repair.cbits;
    rep["f"] = cb.repair.f;
    write_json(p, j);
}

Codeball load_codeball(const fs::path& p, const Window& w) {
    auto j = read_json(p);
    Codeball cb;
    try {
        cb.j = j.at("j").get<int>();
        cb.center = ids_from(w, nlohmann::ordered_json::array({j.at("center")}))[0];
        cb.pattern.j = cb.j;
        cb.pattern.t = j.at("radius").get<int64_t>();
        cb.pattern.key = key_from(j.at("key"));
        for (auto& s : j.at("pattern")) cb.pattern.labels.push_back(std::stoull(s.get<std::string>()));
        if (cb.pattern.labels.size() != j.at("size").get<size_t>()) throw Error("BadSnapshot", "pattern size mismatch");
        for (auto& e : j.at("directory")) {
            EmbeddedType t;
            t.key = key_from(e.at("key"));
            t.site = ids_from(w, nlohmann::ordered_json::array({e.at("site")}))[0];
            t.offset = e.at("offset").get<int64_t>();
            cb.directory.push_back(t);
        }
        cb.sites = ids_from(w, j.at("sites"));
        cb.donors = ids_from(w, j.at("donors"));
        const auto& r = j.at("repair");
        cb.repair.n = r.at("n").get<int>();
        cb.repair.radius = r.at("radius").get<int64_t>();
        cb.repair.center = w.gens().backend->decode(nlohmann::json(r.at("center")));
        cb.repair.cbits = r.at("c_prefix").get<std::vector<uint32_t>>();
        cb.repair.f = r.at("f").get<std::vector<std::vector<int32_t>>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("BadSnapshot", p.string() + ": " + e.what());
    } catch (const std::invalid_argument&) {
        throw Error("BadSnapshot", p.string() + ": label is not a decimal integer");
    } catch (const std::out_of_range&) {
        throw Error("BadSnapshot", p.string() + ": label out of range");
    }
    return cb;
}

std::vector<Id> changed_ids(const Labeling& a, const Labeling& b) {
    if (a.win->size() != b.win->size() || a.M != b.M) throw Error("Usage", "labelings live on different windows");
    const Id n = static_cast<Id>(a.win->size());
    std::vector<char> diff(n, 0);
    parallel_for(n, [&](int64_t lo, int64_t hi) {
        for (int64_t id = lo; id < hi; ++id) {
            bool d = a.cbits[id] != b.cbits[id];
            for (int m = 0; m < a.M && !d; ++m) d = a.f[m][id] != b.f[m][id];
            diff[id] = d;
        }
    });
    std::vector<Id> out;
    for (Id id = 0; id < n; ++id)
        if (diff[id]) out.push_back(id);
    return out;
}

nlohmann::ordered_json change_log(const Labeling& a, const Labeling& b, size_t limit) {
    const Window& w = *a.win;
    auto ids = changed_ids(a, b);
    int64_t least = -1;
    for (Id id : ids) {
        int64_t d = w.depth(id, w.level());
        if (least < 0 || d < least) least = d;
    }
    nlohmann::ordered_json j;
    j["from_stage"] = a.stage;
    j["to_stage"] = b.stage;
    j["changed_points"] = ids.size();
    j["least_depth"] = least;
    j["columns"] = {"element", "layer (0 = C prefix)", "before", "after"};
    j["first_changes"] = diff_json(a, diff_labelings(a, b, limit));
    return j;
}

}  // namespace forge
