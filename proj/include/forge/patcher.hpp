#pragma once
#include <vector>

#include "forge/labeling.hpp"

namespace forge {

enum class PatchKind { Regular, Supersize };

// Donor labels in canonical offset order around the donor center.
struct PatchSource {
    int n = 1;
    int64_t radius = 0;
    std::vector<uint32_t> cbits;
    std::vector<std::vector<int32_t>> f;  // f[m-1][k] for m <= n
    Elem center;                          // donor center, for the record
};

// radius the donor must cover for a patch of this kind at stage n
int64_t source_radius(const Schedule& sch, PatchKind kind, int n);
PatchSource take_source(const Labeling& donor, Id x, int n, int64_t radius);

struct PatchRadii {
    int64_t copy = 0, dirty = 0;          // copy: d <= copy; changes only at d < dirty
    int64_t donor_keep = 0, host_keep = 0;  // markers kept: donor d <= donor_keep, host d > host_keep
    int top = 0;                          // highest layer rebuilt on the annulus
};
PatchRadii patch_radii(const Schedule& sch, PatchKind kind, int n);

struct PatchRequest {
    PatchKind kind = PatchKind::Regular;
    int n = 2;
    Id host = -1;
    const PatchSource* src = nullptr;
};

struct PatchLog {
    std::vector<Id> changed;  // ascending
    int64_t requests = 0;
};

// All requests at once: transported copies, then the marker hierarchy of
// every annulus, then colors. Dirty balls must be disjoint.
PatchLog apply_patches(Labeling& lab, const std::vector<PatchRequest>& reqs);
Labeling patch(const Labeling& host, const PatchRequest& req);

// the six postconditions of one patch, by exhaustive comparison
Certificate check_patch(const Labeling& before, const Labeling& after, const PatchRequest& req);

struct LabelChange {
    Id id;
    int layer;  // 0 = C prefix
    int64_t before, after;
};
std::vector<LabelChange> diff_labelings(const Labeling& a, const Labeling& b, size_t limit = SIZE_MAX);
nlohmann::ordered_json diff_json(const Labeling& a, const std::vector<LabelChange>& d);

}  // namespace forge
