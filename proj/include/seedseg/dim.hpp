#pragma once

#include <cstdint>

#include "seedseg/image.hpp"
#include "seedseg/params.hpp"

namespace seedseg {

struct OtsuResult {
    std::uint8_t threshold = 0;
    bool degenerate = false; // all pixels share one value; threshold is that value
};

struct DimResult {
    BinaryMask mask;
    std::uint8_t threshold = 0;  // Otsu value used on the difference image
    double overlap_score = 0.0;  // IoU of the two single-image masks, in [0,1]
    double elapsed_seconds = 0.0;
};

// Otsu's threshold over the 256-bin histogram: the t maximizing between-class
// variance, ties broken toward the smallest t. Class 0 holds values <= t.
// Values above 255 land in bin 255.
OtsuResult otsu_threshold(const GrayImage& gray);

// Double-image baseline: seeds are where the white- and black-background
// scans agree. diff = |gray(white) - gray(black)|, foreground = diff <= Otsu
// threshold of diff, then hole filling and noise removal as in the
// single-image pipeline. overlap_score measures how well the two scans'
// independent binarizations coincide; misaligned acquisitions drive it down.
// Throws DimensionMismatch; NoForeground when diff is uniformly zero.
DimResult segment_dim(const RgbImage& white_img, const RgbImage& black_img,
                      const SegmentationParams& params);

} // namespace seedseg
