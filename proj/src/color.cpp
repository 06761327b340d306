#include "seedseg/color.hpp"

#include <algorithm>
#include <cmath>

namespace seedseg {

HsbColor rgb_to_hsb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int max = std::max({r, g, b});
    const int min = std::min({r, g, b});
    const int delta = max - min;

    HsbColor out;
    out.b = max / 255.0;
    if (max == 0 || delta == 0) {
        // achromatic: s = 0, h = 0 by convention
        return out;
    }
    out.s = static_cast<double>(delta) / max;

    double h;
    if (max == r)
        h = 60.0 * std::fmod((g - b) / static_cast<double>(delta), 6.0);
    else if (max == g)
        h = 60.0 * ((b - r) / static_cast<double>(delta) + 2.0);
    else
        h = 60.0 * ((r - g) / static_cast<double>(delta) + 4.0);

    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Rgb8 p = img.pixels[i];
        out.values[i] = luma601(p.r, p.g, p.b);
    }
    return out;
}

GrayImage sobel_edges(const GrayImage& img) {
    GrayImage out(img.width, img.height, 0);
    if (img.width < 3 || img.height < 3) return out;

    const int w = img.width;
    for (int y = 1; y < img.height - 1; ++y) {
        const std::uint16_t* up = &img.values[static_cast<std::size_t>(y - 1) * w];
        const std::uint16_t* mid = &img.values[static_cast<std::size_t>(y) * w];
        const std::uint16_t* dn = &img.values[static_cast<std::size_t>(y + 1) * w];
        std::uint16_t* dst = &out.values[static_cast<std::size_t>(y) * w];
        for (int x = 1; x < w - 1; ++x) {
            const int gx = (up[x + 1] + 2 * mid[x + 1] + dn[x + 1]) -
                           (up[x - 1] + 2 * mid[x - 1] + dn[x - 1]);
            const int gy = (dn[x - 1] + 2 * dn[x] + dn[x + 1]) -
                           (up[x - 1] + 2 * up[x] + up[x + 1]);
            const long mag = std::lround(std::sqrt(static_cast<double>(gx) * gx +
                                                   static_cast<double>(gy) * gy));
            dst[x] = static_cast<std::uint16_t>(mag);
        }
    }
    return out;
}

Rect content_bbox(const GrayImage& edges, int threshold, int margin) {
    int min_x = edges.width, min_y = edges.height, max_x = -1, max_y = -1;
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (edges.at(x, y) >= threshold) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) return Rect::full(edges.width, edges.height);

    const int x0 = std::max(0, min_x - margin);
    const int y0 = std::max(0, min_y - margin);
    const int x1 = std::min(edges.width - 1, max_x + margin);
    const int y1 = std::min(edges.height - 1, max_y + margin);
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

RgbImage crop(const RgbImage& img, const Rect& rect) {
    if (!rect.inside(img.width, img.height))
        throw RectOutOfBounds("crop rect outside image bounds");
    RgbImage out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y) {
        const Rgb8* src = &img.pixels[static_cast<std::size_t>(rect.y + y) * img.width + rect.x];
        std::copy(src, src + rect.w, &out.pixels[static_cast<std::size_t>(y) * rect.w]);
    }
    return out;
}

RgbImage overlay(const RgbImage& img, const BinaryMask& mask) {
    if (img.width != mask.width || img.height != mask.height)
        throw DimensionMismatch("overlay: image and mask dimensions differ");
    RgbImage out = img;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const bool boundary =
                x == 0 || x == mask.width - 1 || y == 0 || y == mask.height - 1 ||
                !mask.at(x - 1, y) || !mask.at(x + 1, y) ||
                !mask.at(x, y - 1) || !mask.at(x, y + 1);
            if (boundary) out.at(x, y) = {255, 0, 255};
        }
    }
    return out;
}

} // namespace seedseg
