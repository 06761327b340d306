#include "seedseg/dim.hpp"

#include <array>
#include <chrono>
#include <cstdlib>

#include "seedseg/color.hpp"
#include "seedseg/segmentation.hpp"

namespace seedseg {

namespace {

std::array<long long, 256> histogram256(const GrayImage& gray) {
    std::array<long long, 256> hist{};
    for (const auto v : gray.values) ++hist[v > 255 ? 255 : v];
    return hist;
}

// Between-class variance, evaluated the same way for every threshold:
// exact integer class sums, one long-double division at the end. Keeps the
// argmax reproducible and exactly comparable against a brute-force search.
long double between_class_variance(long long w0, long long s0, long long w1, long long s1) {
    const long long num = s0 * w1 - s1 * w0;
    return static_cast<long double>(num) * static_cast<long double>(num) /
           (static_cast<long double>(w0) * static_cast<long double>(w1));
}

} // namespace

OtsuResult otsu_threshold(const GrayImage& gray) {
    const auto hist = histogram256(gray);

    int nonzero_bins = 0;
    int only_value = 0;
    long long total_w = 0, total_s = 0;
    for (int v = 0; v < 256; ++v) {
        if (hist[v] > 0) {
            ++nonzero_bins;
            only_value = v;
        }
        total_w += hist[v];
        total_s += static_cast<long long>(v) * hist[v];
    }
    if (nonzero_bins <= 1)
        return {static_cast<std::uint8_t>(only_value), true};

    int best_t = 0;
    long double best_var = -1.0L;
    long long w0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        s0 += static_cast<long long>(t) * hist[t];
        const long long w1 = total_w - w0;
        if (w0 == 0 || w1 == 0) continue;
        const long double var = between_class_variance(w0, s0, w1, total_s - s0);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return {static_cast<std::uint8_t>(best_t), false};
}

namespace {

double intersection_over_union(const BinaryMask& a, const BinaryMask& b) {
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool fa = a.bits[i] != 0;
        const bool fb = b.bits[i] != 0;
        inter += fa && fb;
        uni += fa || fb;
    }
    if (uni == 0) return 1.0; // both empty, trivially identical
    return static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

DimResult segment_dim(const RgbImage& white_img, const RgbImage& black_img,
                      const SegmentationParams& params) {
    if (white_img.width != black_img.width || white_img.height != black_img.height)
        throw DimensionMismatch("segment_dim: image dimensions differ");

    const auto t0 = std::chrono::steady_clock::now();

    const GrayImage gray_w = to_grayscale(white_img);
    const GrayImage gray_b = to_grayscale(black_img);

    GrayImage diff(gray_w.width, gray_w.height);
    for (std::size_t i = 0; i < diff.values.size(); ++i)
        diff.values[i] = static_cast<std::uint16_t>(
            std::abs(static_cast<int>(gray_w.values[i]) - static_cast<int>(gray_b.values[i])));

    const OtsuResult otsu = otsu_threshold(diff);
    if (otsu.degenerate && otsu.threshold == 0)
        throw NoForeground("segment_dim: white and black images are identical");

    // seeds look alike in both scans, backgrounds differ maximally
    DimResult result;
    result.threshold = otsu.threshold;
    BinaryMask mask(diff.width, diff.height);
    for (std::size_t i = 0; i < diff.values.size(); ++i)
        mask.bits[i] = diff.values[i] <= otsu.threshold ? 1 : 0;

    mask = fill_holes(mask, params.connectivity);
    result.mask = remove_noise(mask, params);

    // how well the two acquisitions' own binarizations line up
    const OtsuResult otsu_w = otsu_threshold(gray_w);
    const OtsuResult otsu_b = otsu_threshold(gray_b);
    BinaryMask fg_w(gray_w.width, gray_w.height);
    BinaryMask fg_b(gray_b.width, gray_b.height);
    for (std::size_t i = 0; i < gray_w.values.size(); ++i) {
        fg_w.bits[i] = gray_w.values[i] < otsu_w.threshold ? 1 : 0;
        fg_b.bits[i] = gray_b.values[i] > otsu_b.threshold ? 1 : 0;
    }
    result.overlap_score = intersection_over_union(fg_w, fg_b);

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace seedseg
