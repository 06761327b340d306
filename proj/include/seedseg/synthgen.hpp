#pragma once

#include <cstdint>
#include <vector>

#include "seedseg/image.hpp"

namespace seedseg {

// The four supported blue background shades, light to dark.
inline constexpr Rgb8 kLightBlue{140, 220, 250};
inline constexpr Rgb8 kMediumLightBlue{25, 130, 210};
inline constexpr Rgb8 kMediumDarkBlue{20, 60, 150};
inline constexpr Rgb8 kDarkBlue{30, 60, 100};

// Seed colors every generated scene draws from. Each color keeps R >= B (so
// the blue classifier can never call it background) and a luma well separated
// from all four blue shades plus white and black, so content cropping and the
// double-image baseline both see every seed.
std::vector<Rgb8> default_seed_palette();

// Recipe for one synthetic scene. validate() runs before generation and
// throws InvalidSceneSpec on violations, including a palette color that would
// classify as blue background or an axis range wide enough that the 1/3-area
// noise rule could delete a legitimate seed.
struct SceneSpec {
    int width = 1024;
    int height = 768;
    int n_seeds = 10;
    double axis_min = 11.0; // semi-axis range for the seed ellipses, px
    double axis_max = 16.0;
    int min_gap = 5;        // minimum pixel gap between object boundaries
    std::vector<Rgb8> palette = default_seed_palette();
    int n_dust = 0;         // small specks the noise rule must delete
    double hole_prob = 0.0; // fraction of seeds given one background-colored hole
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct SeedTruth {
    double cx = 0.0, cy = 0.0;   // ellipse center
    double axis_a = 0.0, axis_b = 0.0;
    double rotation = 0.0;       // radians
    Rgb8 color;
    long long area_px = 0;       // rasterized full-ellipse area (holes not subtracted)
};

struct GroundTruth {
    int count = 0;
    std::vector<SeedTruth> per_seed;
};

struct Scene {
    RgbImage image;
    GroundTruth truth;
};

struct ScenePair {
    RgbImage white_img;
    RgbImage black_img;
    GroundTruth truth; // unshifted layout; black-image centroids are truth + shift
};

// Renders non-overlapping rotated ellipses plus dust specks on the given
// background. Deterministic for a fixed spec: the layout depends only on the
// spec, the background only recolors pixels. Throws PlacementFailure when the
// rejection-sampling budget runs out.
Scene generate_scene(const SceneSpec& spec, Rgb8 background);

// Same layout rendered on white and on black, the black rendering translated
// by (shift_x, shift_y) to model seeds moving between the two acquisitions.
// Throws ShiftOutOfFrame if any object would leave the frame.
ScenePair generate_pair(const SceneSpec& spec, int shift_x, int shift_y);

} // namespace seedseg
