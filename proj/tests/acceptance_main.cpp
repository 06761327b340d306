// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1 and 4 drive the seedseg executable end to end; the
// rest exercise the library against independent oracles and fixed tolerances.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "seedseg/batch.hpp"
#include "seedseg/color.hpp"
#include "seedseg/dim.hpp"
#include "seedseg/imageio.hpp"
#include "seedseg/regions.hpp"
#include "seedseg/segmentation.hpp"
#include "seedseg/synthgen.hpp"

using namespace seedseg;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

const std::string kBin = SEEDSEG_BIN;

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = kBin + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Failure {
    std::string reason;
};

void expect(bool ok, const std::string& reason) {
    if (!ok) throw Failure{reason};
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const std::array<Rgb8, 4> kHues = {kLightBlue, kMediumLightBlue, kMediumDarkBlue, kDarkBlue};

// ---- criterion 1: zero-error segmentation over 120 synthetic scenes -------

std::string criterion_zero_error() {
    TempDir scenes("acc1_scenes"), out("acc1_out"), logs("acc1_logs");

    SceneSpec spec;
    spec.width = 1400;
    spec.height = 1050;
    spec.axis_min = 11;
    spec.axis_max = 16;
    spec.min_gap = 5;
    spec.n_dust = 10;
    spec.hole_prob = 0.4;

    std::vector<std::pair<std::string, int>> truth_rows;
    char name[48];
    for (int hue = 0; hue < 4; ++hue) {
        for (int k = 0; k < 30; ++k) {
            const int idx = hue * 30 + k;
            spec.n_seeds = 5 + (95 * k + 14) / 29; // 5..100 across each hue block
            spec.rng_seed = 1000 + static_cast<std::uint64_t>(idx);
            const Scene scene = generate_scene(spec, kHues[static_cast<std::size_t>(hue)]);
            std::snprintf(name, sizeof name, "scene_%03d.png", idx);
            save_image_png(scene.image, scenes.path / name);
            truth_rows.emplace_back(name, scene.truth.count);
        }
    }
    write_truth_csv(scenes.path / "truth.csv", truth_rows);

    const fs::path log = logs.path / "log";
    expect(run_cli("segment --input " + scenes.path.string() + " --output " +
                       out.path.string() + " --report csv --workers 4",
                   log) == 0,
           "seedseg segment exited nonzero: " + slurp(log));

    expect(run_cli("check --report " + (out.path / "images.csv").string() + " --truth " +
                       (scenes.path / "truth.csv").string(),
                   log) == 0,
           "seedseg check exited nonzero: " + slurp(log));
    const std::string check_out = slurp(log);
    expect(check_out.find("success: 120 (100.00%)") != std::string::npos,
           "check did not report 100% success:\n" + check_out);

    // independent verification through the library path
    const BatchReport loaded = load_images_csv(out.path / "images.csv");
    const CountComparison cmp = run_count_check(loaded, scenes.path / "truth.csv");
    expect(cmp.n_images == 120, "expected 120 compared images");
    expect(cmp.n_error == 0, std::to_string(cmp.n_error) + " scenes counted wrong");
    return "120/120 scenes across 4 hues counted correctly (CLI reported 100.00%)";
}

// ---- criterion 2: hue invariance of one fixed layout -----------------------

std::string criterion_hue_invariance() {
    SceneSpec spec;
    spec.width = 1000;
    spec.height = 760;
    spec.n_seeds = 40;
    spec.axis_min = 11;
    spec.axis_max = 16;
    spec.n_dust = 10;
    spec.hole_prob = 0.5;
    spec.rng_seed = 777;

    const SegmentationParams params;
    std::vector<std::vector<SeedRecord>> per_hue;
    for (const Rgb8 bg : kHues) {
        const Scene scene = generate_scene(spec, bg);
        const SegmentationResult result = segment(scene.image, params);
        const LabelMap labels = label_components(result.mask, params.connectivity);
        expect(labels.count == spec.n_seeds,
               "count " + std::to_string(labels.count) + " != " + std::to_string(spec.n_seeds));
        const RgbImage cropped = crop(scene.image, result.crop_rect);
        per_hue.push_back(component_stats(labels, cropped, params.dpi));
    }

    double worst = 0.0;
    for (std::size_t i = 1; i < per_hue.size(); ++i) {
        for (int s = 0; s < spec.n_seeds; ++s) {
            const double ref = static_cast<double>(per_hue[0][static_cast<std::size_t>(s)].area_px);
            const double got =
                static_cast<double>(per_hue[i][static_cast<std::size_t>(s)].area_px);
            worst = std::max(worst, std::fabs(got - ref) / ref);
        }
    }
    expect(worst <= 0.005, "per-seed area deviation " + fmt("%.4f%%", worst * 100.0));
    return "identical counts on all 4 hues; max per-seed area deviation " +
           fmt("%.4f%%", worst * 100.0);
}

// ---- criterion 3: throughput at scan resolution ----------------------------

std::string criterion_throughput() {
    SceneSpec spec;
    spec.width = 2125;
    spec.height = 2834;
    spec.n_seeds = 80;
    spec.axis_min = 18;
    spec.axis_max = 28;
    spec.min_gap = 6;
    spec.n_dust = 10;
    spec.hole_prob = 0.3;

    const SegmentationParams params;
    double total_ms = 0.0;
    for (int i = 0; i < 20; ++i) {
        spec.rng_seed = 2000 + static_cast<std::uint64_t>(i);
        const Scene scene = generate_scene(spec, kHues[static_cast<std::size_t>(i % 4)]);

        const auto t0 = std::chrono::steady_clock::now();
        const SegmentationResult result = segment(scene.image, params);
        const LabelMap labels = label_components(result.mask, params.connectivity);
        const RgbImage cropped = crop(scene.image, result.crop_rect);
        const auto stats = component_stats(labels, cropped, params.dpi);
        total_ms +=
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        expect(labels.count == spec.n_seeds, "throughput scene miscounted");
        expect(stats.size() == static_cast<std::size_t>(spec.n_seeds), "stats size mismatch");
    }
    const double mean_ms = total_ms / 20.0;
    expect(mean_ms <= 1000.0, "mean " + fmt("%.1f", mean_ms) + " ms exceeds 1000 ms");
    return "mean " + fmt("%.1f", mean_ms) +
           " ms/image over 20 scenes at 2125x2834 (limit 1000 ms; original plugin: 0.02 s)";
}

// ---- criterion 4: the double-image overlap failure mode --------------------

std::string criterion_dim_failure() {
    SceneSpec spec;
    spec.width = 900;
    spec.height = 700;
    spec.n_seeds = 30;
    spec.axis_min = 11;
    spec.axis_max = 16;
    spec.min_gap = 4;
    spec.n_dust = 6;
    spec.hole_prob = 0.3;

    const SegmentationParams params;
    int shifted_count_errors = 0;
    double worst_drop = 1.0;
    for (int i = 0; i < 20; ++i) {
        spec.rng_seed = 3000 + static_cast<std::uint64_t>(i);

        const ScenePair aligned = generate_pair(spec, 0, 0);
        const ScenePair shifted = generate_pair(spec, 10, 0);
        const DimResult dim_aligned = segment_dim(aligned.white_img, aligned.black_img, params);
        const DimResult dim_shifted = segment_dim(shifted.white_img, shifted.black_img, params);

        expect(dim_shifted.overlap_score < dim_aligned.overlap_score,
               "pair " + std::to_string(i) + ": shifted overlap " +
                   fmt("%.4f", dim_shifted.overlap_score) + " not below aligned " +
                   fmt("%.4f", dim_aligned.overlap_score));
        worst_drop = std::min(worst_drop, dim_aligned.overlap_score - dim_shifted.overlap_score);

        const int shifted_count =
            count_seeds(label_components(dim_shifted.mask, params.connectivity));
        if (shifted_count != shifted.truth.count) ++shifted_count_errors;

        // the single-image path stays exact on the very same layouts
        const Scene sim_scene = generate_scene(spec, kLightBlue);
        const SegmentationResult sim = segment(sim_scene.image, params);
        const int sim_count = count_seeds(label_components(sim.mask, params.connectivity));
        expect(sim_count == sim_scene.truth.count,
               "pair " + std::to_string(i) + ": single-image count " +
                   std::to_string(sim_count) + " != " + std::to_string(sim_scene.truth.count));
    }
    expect(shifted_count_errors >= 1, "no shifted pair produced a count error");
    return "overlap dropped in 20/20 shifted pairs (min drop " + fmt("%.4f", worst_drop) +
           "); " + std::to_string(shifted_count_errors) +
           "/20 shifted pairs miscounted; single-image path 20/20 correct";
}

// ---- criterion 5: oracle equivalence suites ---------------------------------

std::string criterion_oracles() {
    testutil::Rng rng(50505);

    // hole filling vs border-sweep oracle, 500 masks, both connectivities
    for (int trial = 0; trial < 500; ++trial) {
        const double density = 0.2 + 0.6 * rng.uniform();
        const BinaryMask mask = testutil::random_mask(rng, 32, 32, density);
        const int conn = trial % 2 == 0 ? 8 : 4;
        expect(fill_holes(mask, conn) == testutil::fill_holes_oracle(mask, conn),
               "fill_holes mismatch at trial " + std::to_string(trial));
    }

    // labeling vs flood oracle, 500 masks
    for (int trial = 0; trial < 500; ++trial) {
        const double density = 0.2 + 0.6 * rng.uniform();
        const BinaryMask mask = testutil::random_mask(rng, 24, 24, density);
        const int conn = trial % 2 == 0 ? 8 : 4;
        const LabelMap got = label_components(mask, conn);
        int want_count = 0;
        const auto want = testutil::flood_label_oracle(mask, conn, want_count);
        expect(got.count == want_count, "component count mismatch");
        std::vector<std::int32_t> fwd(static_cast<std::size_t>(got.count) + 1, 0);
        for (std::size_t i = 0; i < want.size(); ++i) {
            expect((got.labels[i] == 0) == (want[i] == 0), "foreground mismatch");
            if (want[i] == 0) continue;
            auto& slot = fwd[static_cast<std::size_t>(got.labels[i])];
            if (slot == 0) slot = want[i];
            expect(slot == want[i], "partition mismatch");
        }
    }

    // noise rule: survivors at or above the cutoff, idempotent, 1000 masks
    const SegmentationParams params;
    for (int trial = 0; trial < 1000; ++trial) {
        const BinaryMask mask = testutil::random_mask(rng, 32, 32, 0.15 + 0.7 * rng.uniform());
        const BinaryMask out = remove_noise(mask, params);
        expect(remove_noise(out, params) == out, "remove_noise not idempotent");

        const LabelMap labels = label_components(out, params.connectivity);
        std::vector<long long> area(static_cast<std::size_t>(labels.count) + 1, 0);
        for (const auto l : labels.labels)
            if (l > 0) ++area[static_cast<std::size_t>(l)];
        long long max_area = 0;
        for (int id = 1; id <= labels.count; ++id) max_area = std::max(max_area, area[id]);
        for (int id = 1; id <= labels.count; ++id)
            expect(3 * area[id] >= max_area, "survivor below one third of the largest area");
    }

    // Otsu vs exhaustive search, 1000 histograms
    int otsu_checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::array<long long, 256> hist{};
        const int bins = 2 + rng.below(60);
        for (int k = 0; k < bins; ++k) hist[rng.below(256)] += 1 + rng.below(2000);
        long long total = 0;
        int distinct = 0;
        for (const auto c : hist) {
            total += c;
            distinct += c > 0;
        }
        GrayImage img(static_cast<int>(total), 1);
        std::size_t pos = 0;
        for (int v = 0; v < 256; ++v)
            for (long long c = 0; c < hist[v]; ++c) img.values[pos++] = static_cast<std::uint16_t>(v);

        const OtsuResult got = otsu_threshold(img);
        if (distinct < 2) {
            expect(got.degenerate, "degenerate histogram not flagged");
            continue;
        }
        expect(!got.degenerate, "non-degenerate histogram flagged");
        expect(got.threshold == testutil::otsu_oracle(hist),
               "otsu mismatch at trial " + std::to_string(trial));
        ++otsu_checked;
    }
    expect(otsu_checked > 900, "too few non-degenerate otsu trials");

    // HSB round trip on the 17^3 lattice plus 10,000 fuzz triples
    std::vector<int> lattice;
    for (int v = 0; v < 256; v += 16) lattice.push_back(v);
    lattice.push_back(255);
    auto check_roundtrip = [](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        const HsbColor hsb = rgb_to_hsb(r, g, b);
        const Rgb8 back = testutil::hsb_to_rgb(hsb.h, hsb.s, hsb.b);
        expect(std::abs(back.r - r) <= 1 && std::abs(back.g - g) <= 1 &&
                   std::abs(back.b - b) <= 1,
               "hsb round trip off by more than 1 level");
    };
    for (const int r : lattice)
        for (const int g : lattice)
            for (const int b : lattice)
                check_roundtrip(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                static_cast<std::uint8_t>(b));
    for (int i = 0; i < 10000; ++i)
        check_roundtrip(static_cast<std::uint8_t>(rng.below(256)),
                        static_cast<std::uint8_t>(rng.below(256)),
                        static_cast<std::uint8_t>(rng.below(256)));

    return "fill/label/noise/otsu/hsb all match their oracles exactly";
}

// ---- criterion 6: the 13-seed light-blue fixture ----------------------------

std::string criterion_thirteen_seeds() {
    SceneSpec spec;
    spec.width = 850;
    spec.height = 650;
    spec.n_seeds = 13;
    spec.axis_min = 14;
    spec.axis_max = 20;
    spec.n_dust = 13;
    spec.hole_prob = 1.0;
    spec.rng_seed = 4242;

    const SegmentationParams params;
    const Scene scene = generate_scene(spec, kLightBlue);
    expect(scene.truth.count == 13, "fixture truth is not 13 seeds");

    // before noise removal the 13 dust specks are still present
    SegmentationParams no_crop = params;
    no_crop.auto_crop = false;
    const BinaryMask filled =
        fill_holes(blue_mask(scene.image, no_crop), no_crop.connectivity);
    expect(count_seeds(label_components(filled, no_crop.connectivity)) == 26,
           "expected 13 seeds + 13 dust before noise removal");

    const SegmentationResult result = segment(scene.image, params);
    const int count = count_seeds(label_components(result.mask, params.connectivity));
    expect(count == 13, "final count " + std::to_string(count) + " != 13");
    expect(fill_holes(result.mask, params.connectivity) == result.mask,
           "a seed still contains an interior hole");
    return "13 components, all 13 dust specks removed, every seed simply connected";
}

// ---- criterion 7: count-metric arithmetic -----------------------------------

std::string criterion_count_metric() {
    std::vector<int> truth(120);
    for (int i = 0; i < 120; ++i) truth[static_cast<std::size_t>(i)] = 5 + i % 7;
    std::vector<int> got(truth);
    for (int i = 0; i < 26; ++i) got[static_cast<std::size_t>(i * 4 + 1)] += 1;

    const CountComparison cmp = compare_counts(got, truth);
    expect(cmp.n_images == 120 && cmp.n_error == 26, "mismatch bookkeeping wrong");
    expect(std::fabs(cmp.success_pct - 78.33) <= 0.01,
           "success " + fmt("%.4f", cmp.success_pct) + " not within 78.33 +/- 0.01");
    expect(std::fabs(cmp.error_pct - 21.67) <= 0.01,
           "error " + fmt("%.4f", cmp.error_pct) + " not within 21.67 +/- 0.01");
    return "success " + fmt("%.2f%%", cmp.success_pct) + ", error " +
           fmt("%.2f%%", cmp.error_pct) + " for 26 mismatches in 120";
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Entry> criteria = {
        {"zero-error segmentation of 120 scenes", criterion_zero_error},
        {"hue invariance of a fixed layout", criterion_hue_invariance},
        {"throughput at 2125x2834", criterion_throughput},
        {"double-image overlap failure mode", criterion_dim_failure},
        {"oracle equivalence suites", criterion_oracles},
        {"13-seed light-blue fixture", criterion_thirteen_seeds},
        {"count-metric arithmetic", criterion_count_metric},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = true;
        try {
            detail = criteria[i].run();
        } catch (const Failure& f) {
            ok = false;
            detail = f.reason;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %zu (%s): %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
