#include "seedseg/segmentation.hpp"

#include <chrono>
#include <vector>

#include "seedseg/regions.hpp"

namespace seedseg {

bool is_blue_background(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                        const SegmentationParams& params) {
    if (b < r || b < g) return false;
    if (b - r < params.min_b_minus_r) return false;
    const double hue = rgb_to_hsb(r, g, b).h;
    return hue >= params.hue_lo && hue <= params.hue_hi;
}

BinaryMask blue_mask(const RgbImage& img, const SegmentationParams& params) {
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Rgb8 p = img.pixels[i];
        mask.bits[i] = is_blue_background(p.r, p.g, p.b, params) ? 0 : 1;
    }
    return mask;
}

BinaryMask fill_holes(const BinaryMask& mask, int connectivity) {
    const int w = mask.width;
    const int h = mask.height;
    if (w == 0 || h == 0) return mask;

    // Flood background from the border; the background flood uses the
    // connectivity complementary to the foreground's.
    const bool diag = connectivity == 4;

    std::vector<std::uint8_t> reached(mask.bits.size(), 0);
    std::vector<int> stack;
    stack.reserve(static_cast<std::size_t>(w) * 2 + static_cast<std::size_t>(h) * 2);

    auto push = [&](int x, int y) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!mask.bits[i] && !reached[i]) {
            reached[i] = 1;
            stack.push_back(static_cast<int>(i));
        }
    };

    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }

    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w;
        const int y = i / w;
        if (x > 0) push(x - 1, y);
        if (x < w - 1) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y < h - 1) push(x, y + 1);
        if (diag) {
            if (x > 0 && y > 0) push(x - 1, y - 1);
            if (x < w - 1 && y > 0) push(x + 1, y - 1);
            if (x > 0 && y < h - 1) push(x - 1, y + 1);
            if (x < w - 1 && y < h - 1) push(x + 1, y + 1);
        }
    }

    BinaryMask out = mask;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        if (!out.bits[i] && !reached[i]) out.bits[i] = 1;
    return out;
}

BinaryMask remove_noise(const BinaryMask& mask, const SegmentationParams& params) {
    const LabelMap labels = label_components(mask, params.connectivity);
    if (labels.count == 0) return mask;

    std::vector<long long> area(static_cast<std::size_t>(labels.count) + 1, 0);
    for (const auto label : labels.labels)
        if (label > 0) ++area[static_cast<std::size_t>(label)];

    long long max_area = 0;
    for (int id = 1; id <= labels.count; ++id) max_area = std::max(max_area, area[id]);

    // strict inequality: a component exactly at the cutoff survives
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(labels.count) + 1, 0);
    for (int id = 1; id <= labels.count; ++id)
        keep[id] = static_cast<double>(area[id]) <
                           params.noise_ratio * static_cast<double>(max_area)
                       ? 0
                       : 1;

    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i) {
        const std::int32_t label = labels.labels[i];
        out.bits[i] = (label > 0 && keep[static_cast<std::size_t>(label)]) ? 1 : 0;
    }
    return out;
}

SegmentationResult segment(const RgbImage& img, const SegmentationParams& params) {
    const auto t0 = std::chrono::steady_clock::now();

    SegmentationResult result;
    result.crop_rect = Rect::full(img.width, img.height);

    const RgbImage* working = &img;
    RgbImage cropped;
    if (params.auto_crop) {
        const GrayImage gray = to_grayscale(img);
        const GrayImage edges = sobel_edges(gray);
        result.crop_rect = content_bbox(edges, params.edge_threshold, params.crop_margin);
        if (result.crop_rect != Rect::full(img.width, img.height)) {
            cropped = crop(img, result.crop_rect);
            working = &cropped;
        }
    }

    BinaryMask mask = blue_mask(*working, params);
    mask = fill_holes(mask, params.connectivity);
    result.mask = remove_noise(mask, params);

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace seedseg
