#pragma once

#include <cstdint>
#include <vector>

#include "seedseg/errors.hpp"

namespace seedseg {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

// Axis-aligned pixel rectangle, {x,y} top-left corner, {w,h} extents.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Rect&) const = default;

    static Rect full(int width, int height) { return {0, 0, width, height}; }

    bool inside(int img_w, int img_h) const {
        return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= img_w && y + h <= img_h;
    }
};

// 8-bit RGB raster, row-major. Pure value type: every pipeline stage takes
// images by const reference and returns fresh ones.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb8> pixels; // size == width * height

    RgbImage() = default;
    RgbImage(int w, int h, Rgb8 fill = {0, 0, 0})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    Rgb8& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb8& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const RgbImage&) const = default;
};

// Single-channel raster. 16-bit so raw Sobel magnitudes fit without clamping;
// plain luminance stays in [0,255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> values;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint16_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::uint16_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

// Foreground/background raster; 1 = foreground (seed), 0 = background.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }

    void set(int x, int y, bool fg) { at(x, y) = fg ? 1 : 0; }

    std::size_t count_foreground() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

// Recolors the boundary of every foreground component magenta (255,0,255) for
// visual QA. Boundary = foreground pixel with a background or off-image
// 4-neighbor; all other pixels pass through unchanged.
RgbImage overlay(const RgbImage& img, const BinaryMask& mask);

} // namespace seedseg
