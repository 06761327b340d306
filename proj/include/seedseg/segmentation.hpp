#pragma once

#include "seedseg/color.hpp"
#include "seedseg/image.hpp"
#include "seedseg/params.hpp"

namespace seedseg {

struct SegmentationResult {
    BinaryMask mask;       // foreground = seeds, dimensions equal crop_rect
    Rect crop_rect;        // region of the original image the mask covers
    double elapsed_seconds = 0.0;
};

// Blue-background classifier. A pixel is background iff all three hold:
//   (i)  channel B is the maximum of (R,G,B),
//   (ii) B - R >= params.min_b_minus_r,
//   (iii) hue lies inside [params.hue_lo, params.hue_hi].
bool is_blue_background(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                        const SegmentationParams& params);

// Per-pixel mask: foreground iff the pixel is not blue background.
BinaryMask blue_mask(const RgbImage& img, const SegmentationParams& params);

// Region filling. Background pixels not reachable from the image border
// through background become foreground. The flood runs on the complementary
// connectivity (foreground 8 -> background 4 and vice versa).
BinaryMask fill_holes(const BinaryMask& mask, int connectivity);

// Deletes every component whose area is strictly less than
// noise_ratio * largest component area. Empty masks pass through.
BinaryMask remove_noise(const BinaryMask& mask, const SegmentationParams& params);

// Full single-image pipeline: optional content crop (grayscale -> Sobel ->
// bbox -> crop), then blue_mask -> fill_holes -> remove_noise. elapsed_seconds
// covers the whole call.
SegmentationResult segment(const RgbImage& img, const SegmentationParams& params);

} // namespace seedseg
