#include "seedseg/regions.hpp"

#include <cmath>
#include <numbers>

#include "seedseg/color.hpp"

namespace seedseg {

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return parent.back();
    }

    std::int32_t find(std::int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]]; // path halving
            a = parent[a];
        }
        return a;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
    }
};

} // namespace

LabelMap label_components(const BinaryMask& mask, int connectivity) {
    LabelMap out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(mask.bits.size(), 0);

    const int w = mask.width;
    const int h = mask.height;
    if (w == 0 || h == 0) return out;

    const bool diag = connectivity == 8;

    // first pass: provisional labels from already-scanned neighbors
    std::vector<std::int32_t> prov(mask.bits.size(), -1);
    UnionFind uf;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits[i]) continue;

            std::int32_t label = -1;
            auto absorb = [&](int nx, int ny) {
                const std::int32_t n = prov[static_cast<std::size_t>(ny) * w + nx];
                if (n < 0) return;
                if (label < 0)
                    label = n;
                else
                    uf.unite(label, n);
            };
            if (x > 0 && mask.bits[i - 1]) absorb(x - 1, y);
            if (y > 0) {
                if (mask.at(x, y - 1)) absorb(x, y - 1);
                if (diag) {
                    if (x > 0 && mask.at(x - 1, y - 1)) absorb(x - 1, y - 1);
                    if (x < w - 1 && mask.at(x + 1, y - 1)) absorb(x + 1, y - 1);
                }
            }
            prov[i] = label >= 0 ? label : uf.make();
        }
    }

    // second pass: dense ids in raster order of first occurrence
    std::vector<std::int32_t> dense(uf.parent.size(), 0);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < prov.size(); ++i) {
        if (prov[i] < 0) continue;
        const std::int32_t root = uf.find(prov[i]);
        if (dense[root] == 0) dense[root] = ++next;
        out.labels[i] = dense[root];
    }
    out.count = next;
    return out;
}

int count_seeds(const LabelMap& labels) {
    return labels.count;
}

std::vector<SeedRecord> component_stats(const LabelMap& labels, const RgbImage& img, double dpi) {
    if (labels.width != img.width || labels.height != img.height)
        throw DimensionMismatch("component_stats: label map and image dimensions differ");

    const int n = labels.count;
    struct Acc {
        long long area = 0;
        long long sum_x = 0, sum_y = 0;
        long long sum_r = 0, sum_g = 0, sum_b = 0;
        long long perimeter = 0;
        int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
        double sum_s = 0.0, sum_bri = 0.0;
        double hue_x = 0.0, hue_y = 0.0; // saturation-weighted hue vector
    };
    std::vector<Acc> acc(static_cast<std::size_t>(n) + 1);

    const int w = labels.width;
    const int h = labels.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t id = labels.at(x, y);
            if (id == 0) continue;
            Acc& a = acc[static_cast<std::size_t>(id)];
            if (a.area == 0) {
                a.min_x = a.max_x = x;
                a.min_y = a.max_y = y;
            } else {
                a.min_x = std::min(a.min_x, x);
                a.max_x = std::max(a.max_x, x);
                a.min_y = std::min(a.min_y, y);
                a.max_y = std::max(a.max_y, y);
            }
            ++a.area;
            a.sum_x += x;
            a.sum_y += y;

            const Rgb8 p = img.at(x, y);
            a.sum_r += p.r;
            a.sum_g += p.g;
            a.sum_b += p.b;
            const HsbColor hsb = rgb_to_hsb(p.r, p.g, p.b);
            a.sum_s += hsb.s;
            a.sum_bri += hsb.b;
            const double rad = hsb.h * std::numbers::pi / 180.0;
            a.hue_x += hsb.s * std::cos(rad);
            a.hue_y += hsb.s * std::sin(rad);

            const bool boundary = x == 0 || x == w - 1 || y == 0 || y == h - 1 ||
                                  labels.at(x - 1, y) == 0 || labels.at(x + 1, y) == 0 ||
                                  labels.at(x, y - 1) == 0 || labels.at(x, y + 1) == 0;
            if (boundary) ++a.perimeter;
        }
    }

    const double mm_per_px = 25.4 / dpi;
    std::vector<SeedRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (int id = 1; id <= n; ++id) {
        const Acc& a = acc[static_cast<std::size_t>(id)];
        SeedRecord rec;
        rec.seed_id = id;
        rec.area_px = a.area;
        rec.area_mm2 = static_cast<double>(a.area) * mm_per_px * mm_per_px;
        rec.perimeter_px = a.perimeter;
        rec.centroid_x = static_cast<double>(a.sum_x) / a.area;
        rec.centroid_y = static_cast<double>(a.sum_y) / a.area;
        rec.bbox = {a.min_x, a.min_y, a.max_x - a.min_x + 1, a.max_y - a.min_y + 1};
        rec.mean_r = static_cast<double>(a.sum_r) / a.area;
        rec.mean_g = static_cast<double>(a.sum_g) / a.area;
        rec.mean_b = static_cast<double>(a.sum_b) / a.area;
        rec.mean_s = a.sum_s / a.area;
        rec.mean_bri = a.sum_bri / a.area;
        if (a.hue_x != 0.0 || a.hue_y != 0.0) {
            double deg = std::atan2(a.hue_y, a.hue_x) * 180.0 / std::numbers::pi;
            if (deg < 0.0) deg += 360.0;
            if (deg >= 360.0) deg -= 360.0;
            rec.mean_h = deg;
        }
        records.push_back(rec);
    }
    return records;
}

CountComparison compare_counts(const std::vector<int>& auto_counts,
                               const std::vector<int>& truth_counts) {
    if (auto_counts.size() != truth_counts.size())
        throw LengthMismatch("compare_counts: list lengths differ");
    if (auto_counts.empty()) throw EmptyInput("compare_counts: empty input");

    CountComparison cmp;
    cmp.n_images = static_cast<int>(auto_counts.size());
    for (std::size_t i = 0; i < auto_counts.size(); ++i) {
        if (auto_counts[i] == truth_counts[i])
            ++cmp.n_success;
        else
            cmp.mismatched_indices.push_back(static_cast<int>(i));
    }
    cmp.n_error = cmp.n_images - cmp.n_success;
    cmp.success_pct = 100.0 * cmp.n_success / cmp.n_images;
    cmp.error_pct = 100.0 * cmp.n_error / cmp.n_images;
    return cmp;
}

} // namespace seedseg
