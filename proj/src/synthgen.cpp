#include "seedseg/synthgen.hpp"

#include <cmath>
#include <string>

#include "seedseg/segmentation.hpp"

namespace seedseg {

namespace {

// Deterministic, platform-independent stream; one instance per scene.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; } // [0,1)

    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

struct SceneObject {
    double cx = 0.0, cy = 0.0;
    double a = 0.0, b = 0.0; // semi-axes
    double cos_t = 1.0, sin_t = 0.0;
    double theta = 0.0;
    Rgb8 color;
    double hole_r = 0.0; // 0 = no hole
    bool is_seed = true;

    double bound() const { return std::max(a, b); }

    bool inside(double x, double y) const {
        const double dx = x - cx;
        const double dy = y - cy;
        const double u = (dx * cos_t + dy * sin_t) / a;
        const double v = (-dx * sin_t + dy * cos_t) / b;
        return u * u + v * v <= 1.0;
    }

    bool in_hole(double x, double y) const {
        if (hole_r <= 0.0) return false;
        const double dx = x - cx;
        const double dy = y - cy;
        return dx * dx + dy * dy <= hole_r * hole_r;
    }
};

struct Layout {
    std::vector<SceneObject> objects; // seeds first, then dust
    GroundTruth truth;
};

// Seeds stay this far from the frame so pair shifts of modest size cannot
// push them out.
constexpr int kBorderPad = 16;

long long rasterized_area(const SceneObject& obj) {
    const int x0 = static_cast<int>(std::floor(obj.cx - obj.bound() - 1));
    const int x1 = static_cast<int>(std::ceil(obj.cx + obj.bound() + 1));
    const int y0 = static_cast<int>(std::floor(obj.cy - obj.bound() - 1));
    const int y1 = static_cast<int>(std::ceil(obj.cy + obj.bound() + 1));
    long long area = 0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (obj.inside(x, y)) ++area;
    return area;
}

Layout build_layout(const SceneSpec& spec) {
    SplitMix64 rng(spec.rng_seed);
    Layout layout;

    const double dust_r_max = std::max(1.0, 0.35 * spec.axis_min);
    const int total = spec.n_seeds + spec.n_dust;

    for (int i = 0; i < total; ++i) {
        const bool is_seed = i < spec.n_seeds;

        SceneObject obj;
        obj.is_seed = is_seed;
        if (is_seed) {
            obj.a = rng.range(spec.axis_min, spec.axis_max);
            obj.b = rng.range(spec.axis_min, spec.axis_max);
            obj.theta = rng.range(0.0, 3.141592653589793);
            obj.color = spec.palette[rng.index(spec.palette.size())];
            if (rng.uniform() < spec.hole_prob)
                obj.hole_r = (0.25 + 0.15 * rng.uniform()) * std::min(obj.a, obj.b);
        } else {
            obj.a = obj.b = rng.range(1.0, dust_r_max);
            obj.color = spec.palette[rng.index(spec.palette.size())];
        }
        obj.cos_t = std::cos(obj.theta);
        obj.sin_t = std::sin(obj.theta);

        const double pad = obj.bound() + spec.min_gap + 2 + kBorderPad;
        if (2.0 * pad >= spec.width || 2.0 * pad >= spec.height)
            throw PlacementFailure("scene too small for requested seed size");

        bool placed = false;
        for (int attempt = 0; attempt < 5000 && !placed; ++attempt) {
            obj.cx = rng.range(pad, spec.width - pad);
            obj.cy = rng.range(pad, spec.height - pad);

            placed = true;
            for (const SceneObject& other : layout.objects) {
                const double dx = obj.cx - other.cx;
                const double dy = obj.cy - other.cy;
                const double min_dist = obj.bound() + other.bound() + spec.min_gap + 2;
                if (dx * dx + dy * dy < min_dist * min_dist) {
                    placed = false;
                    break;
                }
            }
        }
        if (!placed)
            throw PlacementFailure("could not place object " + std::to_string(i) +
                                   " of " + std::to_string(total));

        layout.objects.push_back(obj);
        if (is_seed) {
            SeedTruth truth;
            truth.cx = obj.cx;
            truth.cy = obj.cy;
            truth.axis_a = obj.a;
            truth.axis_b = obj.b;
            truth.rotation = obj.theta;
            truth.color = obj.color;
            truth.area_px = rasterized_area(obj);
            layout.truth.per_seed.push_back(truth);
        }
    }
    layout.truth.count = spec.n_seeds;
    return layout;
}

RgbImage render_layout(const Layout& layout, const SceneSpec& spec, Rgb8 background,
                       int shift_x, int shift_y) {
    RgbImage img(spec.width, spec.height, background);
    for (const SceneObject& obj : layout.objects) {
        const double cx = obj.cx + shift_x;
        const double cy = obj.cy + shift_y;
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - obj.bound() - 1)));
        const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(cx + obj.bound() + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - obj.bound() - 1)));
        const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(cy + obj.bound() + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double lx = x - shift_x;
                const double ly = y - shift_y;
                if (!obj.inside(lx, ly)) continue;
                img.at(x, y) = obj.in_hole(lx, ly) ? background : obj.color;
            }
        }
    }
    return img;
}

} // namespace

std::vector<Rgb8> default_seed_palette() {
    // tans and near-blacks; mid browns are avoided because their luma is too
    // close to the darker blue shades for reliable edge-based cropping
    return {
        {190, 150, 100}, // tan
        {180, 140, 90},  // light brown
        {200, 155, 95},  // pale tan
        {170, 145, 105}, // sand
        {205, 145, 75},  // ochre
        {25, 18, 12},    // near-black
        {22, 16, 10},    // black-brown
    };
}

void SceneSpec::validate() const {
    if (width < 1 || height < 1) throw InvalidSceneSpec("image dimensions must be positive");
    if (n_seeds < 0) throw InvalidSceneSpec("n_seeds must be non-negative");
    if (n_dust < 0) throw InvalidSceneSpec("n_dust must be non-negative");
    if (!(axis_min >= 3.0)) throw InvalidSceneSpec("axis_min must be at least 3 px");
    if (!(axis_max >= axis_min)) throw InvalidSceneSpec("axis_max must be >= axis_min");
    if (min_gap < 0) throw InvalidSceneSpec("min_gap must be non-negative");
    if (!(hole_prob >= 0.0 && hole_prob <= 1.0))
        throw InvalidSceneSpec("hole_prob must be in [0,1]");
    if (palette.empty()) throw InvalidSceneSpec("palette must not be empty");

    // keep the smallest possible seed above 1/3 of the largest possible one,
    // so the noise rule can only ever delete dust
    if (axis_min < 0.624 * axis_max)
        throw InvalidSceneSpec("axis_min must be at least 0.624 * axis_max");

    const SegmentationParams defaults;
    for (const Rgb8 c : palette)
        if (is_blue_background(c.r, c.g, c.b, defaults))
            throw InvalidSceneSpec("palette color would classify as blue background");
}

Scene generate_scene(const SceneSpec& spec, Rgb8 background) {
    spec.validate();
    const Layout layout = build_layout(spec);
    Scene scene;
    scene.image = render_layout(layout, spec, background, 0, 0);
    scene.truth = layout.truth;
    return scene;
}

ScenePair generate_pair(const SceneSpec& spec, int shift_x, int shift_y) {
    spec.validate();
    const Layout layout = build_layout(spec);

    for (const SceneObject& obj : layout.objects) {
        const double r = obj.bound() + 1;
        if (obj.cx + shift_x - r < 0 || obj.cx + shift_x + r > spec.width - 1 ||
            obj.cy + shift_y - r < 0 || obj.cy + shift_y + r > spec.height - 1)
            throw ShiftOutOfFrame("shifted object would leave the frame");
    }

    ScenePair pair;
    pair.white_img = render_layout(layout, spec, Rgb8{255, 255, 255}, 0, 0);
    pair.black_img = render_layout(layout, spec, Rgb8{0, 0, 0}, shift_x, shift_y);
    pair.truth = layout.truth;
    return pair;
}

} // namespace seedseg
