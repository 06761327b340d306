#pragma once

#include <cstdint>
#include <vector>

#include "seedseg/image.hpp"

namespace seedseg {

// Connected-component labels, 0 = background, 1..count = components.
// Ids are dense and assigned in raster-scan order of each component's first
// pixel, so downstream output is deterministic.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int count = 0;

    std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

// Per-seed geometry and color features.
struct SeedRecord {
    int seed_id = 0;
    long long area_px = 0;
    double area_mm2 = 0.0;       // area_px * (25.4 / dpi)^2
    long long perimeter_px = 0;  // foreground pixels with a background/off-image 4-neighbor
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    Rect bbox;
    double mean_r = 0.0, mean_g = 0.0, mean_b = 0.0;
    double mean_h = 0.0;         // circular mean, saturation-weighted, degrees [0,360)
    double mean_s = 0.0, mean_bri = 0.0;

    bool operator==(const SeedRecord&) const = default;
};

// Outcome of comparing automatic counts against ground truth.
struct CountComparison {
    int n_images = 0;
    int n_success = 0;
    int n_error = 0;
    double success_pct = 0.0;
    double error_pct = 0.0;
    std::vector<int> mismatched_indices;
};

// Two-pass union-find labeling under 4- or 8-connectivity.
LabelMap label_components(const BinaryMask& mask, int connectivity);

int count_seeds(const LabelMap& labels);

// One record per component, ordered by label id. img must match labels in
// size (throws DimensionMismatch).
std::vector<SeedRecord> component_stats(const LabelMap& labels, const RgbImage& img, double dpi);

// Index-wise equality of two equally sized, non-empty count vectors.
// Throws LengthMismatch / EmptyInput.
CountComparison compare_counts(const std::vector<int>& auto_counts,
                               const std::vector<int>& truth_counts);

} // namespace seedseg
