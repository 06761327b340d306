#pragma once

#include <cstdint>

#include "seedseg/image.hpp"

namespace seedseg {

// Hue in degrees [0,360), saturation and brightness as fractions in [0,1].
// Achromatic pixels carry h = 0 and s = 0 by convention.
struct HsbColor {
    double h = 0.0;
    double s = 0.0;
    double b = 0.0;

    bool operator==(const HsbColor&) const = default;
};

// BT.601 luma of one pixel, rounded half away from zero. Exact integer
// arithmetic so results are platform-independent.
inline std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

// Standard hexcone RGB -> HSB conversion.
HsbColor rgb_to_hsb(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Per-pixel BT.601 grayscale conversion.
GrayImage to_grayscale(const RgbImage& img);

// 3x3 Sobel gradient magnitude, rounded to nearest integer, borders zero.
// Output is raw (unclamped); for 8-bit input the maximum is below 1443.
GrayImage sobel_edges(const GrayImage& img);

// Tightest rect containing all pixels with magnitude >= threshold, grown by
// margin on every side and clamped to the image. Falls back to the full-image
// rect when nothing clears the threshold, so cropping degrades to a no-op.
Rect content_bbox(const GrayImage& edges, int threshold, int margin);

// Copies exactly rect out of img. Throws RectOutOfBounds.
RgbImage crop(const RgbImage& img, const Rect& rect);

} // namespace seedseg
