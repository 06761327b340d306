#pragma once

#include "seedseg/errors.hpp"

namespace seedseg {

// Every tunable of the segmentation pipeline. Defaults segment seed scans on
// any of the supported blue background shades without adjustment.
struct SegmentationParams {
    double hue_lo = 170.0;         // blue band lower bound, degrees
    double hue_hi = 260.0;         // blue band upper bound, degrees
    int min_b_minus_r = 20;        // required B-R excess, 8-bit levels
    double noise_ratio = 1.0 / 3.0; // components below ratio * largest area are dropped
    int connectivity = 8;          // foreground connectivity, 4 or 8
    bool auto_crop = true;         // crop to edge-detected content before segmenting
    int edge_threshold = 120;      // raw Sobel magnitude cut for the content crop
    int crop_margin = 10;          // pixels added around the content bbox
    double dpi = 400.0;            // scan resolution, converts px areas to mm^2

    void validate() const {
        if (!(hue_lo >= 0.0 && hue_lo < hue_hi && hue_hi <= 360.0))
            throw InvalidParams("hue band must satisfy 0 <= hue_lo < hue_hi <= 360");
        if (min_b_minus_r < 0 || min_b_minus_r > 255)
            throw InvalidParams("min_b_minus_r must be in [0,255]");
        if (!(noise_ratio > 0.0 && noise_ratio < 1.0))
            throw InvalidParams("noise_ratio must be in (0,1)");
        if (connectivity != 4 && connectivity != 8)
            throw InvalidParams("connectivity must be 4 or 8");
        if (!(dpi > 0.0))
            throw InvalidParams("dpi must be positive");
        if (edge_threshold < 0)
            throw InvalidParams("edge_threshold must be non-negative");
        if (crop_margin < 0)
            throw InvalidParams("crop_margin must be non-negative");
    }

    bool operator==(const SegmentationParams&) const = default;
};

} // namespace seedseg
