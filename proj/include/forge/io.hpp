#pragma once
#include <filesystem>
#include <functional>
#include <ostream>

#include "forge/pipeline.hpp"

namespace forge {

namespace fs = std::filesystem;

// write to a sibling temp file, then rename over the target
void write_atomic(const fs::path& p, const std::function<void(std::ostream&)>& fill);
void write_json(const fs::path& p, const nlohmann::ordered_json& j);
nlohmann::ordered_json read_json(const fs::path& p);  // MissingFile / BadSnapshot

// One row per window id (shortlex order): [C prefix, f_1 .. f_M]. The
// header carries everything needed to rebuild the window.
void save_labeling(const fs::path& p, const Labeling& lab);
Labeling load_labeling(const fs::path& p);
Labeling labeling_from_json(const nlohmann::ordered_json& j);

// pattern labels go out as decimal strings (they are 64-bit)
void save_codeball(const fs::path& p, const Codeball& cb, const Window& w);
Codeball load_codeball(const fs::path& p, const Window& w);

// changes from a to b: counts, least depth and the first `limit` entries
nlohmann::ordered_json change_log(const Labeling& a, const Labeling& b, size_t limit = 200);

// ids whose labels differ, same window required
std::vector<Id> changed_ids(const Labeling& a, const Labeling& b);

}  // namespace forge
