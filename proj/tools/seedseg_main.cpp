#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seedseg/batch.hpp"
#include "seedseg/dim.hpp"
#include "seedseg/imageio.hpp"
#include "seedseg/regions.hpp"
#include "seedseg/segmentation.hpp"
#include "seedseg/synthgen.hpp"

namespace fs = std::filesystem;
using namespace seedseg;

namespace {

Rgb8 parse_background(const std::string& s) {
    if (s == "light") return kLightBlue;
    if (s == "mediumlight") return kMediumLightBlue;
    if (s == "mediumdark") return kMediumDarkBlue;
    if (s == "dark") return kDarkBlue;
    int r, g, b;
    if (std::sscanf(s.c_str(), "%d,%d,%d", &r, &g, &b) == 3 &&
        r >= 0 && r <= 255 && g >= 0 && g <= 255 && b >= 0 && b <= 255)
        return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                static_cast<std::uint8_t>(b)};
    throw CLI::ValidationError("--background",
                               "expected light|mediumlight|mediumdark|dark or R,G,B");
}

std::pair<int, int> parse_size(const std::string& s) {
    int w, h;
    if (std::sscanf(s.c_str(), "%dx%d", &w, &h) == 2 && w >= 1 && h >= 1) return {w, h};
    throw CLI::ValidationError("--size", "expected WxH, e.g. 1400x1050");
}

std::pair<int, int> parse_shift(const std::string& s) {
    int dx, dy;
    if (std::sscanf(s.c_str(), "%d,%d", &dx, &dy) == 2) return {dx, dy};
    throw CLI::ValidationError("--shift", "expected DX,DY, e.g. 10,0");
}

// Derives a seed size that scales with the canvas and keeps the generator's
// axis-ratio constraint satisfied.
void fit_axes(SceneSpec& spec) {
    const double base = std::min(spec.width, spec.height);
    spec.axis_max = std::clamp(base / 40.0, 6.0, 26.0);
    spec.axis_min = std::max(3.0, 0.7 * spec.axis_max);
}

int run_segment(const std::string& input, const std::string& output,
                const SegmentationParams& params, const std::string& report_format,
                int workers) {
    if (const char* env = std::getenv("SEEDSEG_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) workers = n;
    }
    const BatchReport report = process_folder(input, output, params, workers);
    write_report(report,
                 report_format == "json" ? ReportFormat::Json : ReportFormat::Csv, output);

    std::printf("processed %d image(s): %d ok, %d skipped\n", report.total_images,
                report.total_ok, report.total_skipped);
    std::printf("mean %.2f ms/image (segmentation + features), batch total %.2f ms\n",
                report.mean_elapsed_ms, report.total_elapsed_ms);
    for (const ImageReport& r : report.reports)
        if (!r.ok) std::printf("  %s -> %s\n", r.filename.c_str(), r.status().c_str());
    return 0;
}

int run_synth(const std::string& output, int count, int seeds_per_image,
              const std::string& background, const std::string& size,
              std::uint64_t rng_seed, bool pairs, const std::string& shift) {
    const auto [w, h] = parse_size(size);
    const Rgb8 bg = parse_background(background);
    const auto [dx, dy] = parse_shift(shift);

    std::error_code ec;
    fs::create_directories(output, ec);
    if (ec) throw OutputIoError("cannot create output directory: " + output);

    SceneSpec spec;
    spec.width = w;
    spec.height = h;
    spec.n_seeds = seeds_per_image;
    // with no seeds the noise rule has nothing to anchor on, so skip dust too
    spec.n_dust = seeds_per_image > 0 ? 8 : 0;
    spec.hole_prob = 0.35;
    fit_axes(spec);

    std::vector<std::pair<std::string, int>> truth_rows;
    char name[64];
    for (int i = 0; i < count; ++i) {
        spec.rng_seed = rng_seed + static_cast<std::uint64_t>(i);
        if (pairs) {
            const ScenePair pair = generate_pair(spec, dx, dy);
            std::snprintf(name, sizeof name, "pair_%03d_white.png", i);
            save_image_png(pair.white_img, fs::path(output) / name);
            truth_rows.emplace_back(name, pair.truth.count);
            std::snprintf(name, sizeof name, "pair_%03d_black.png", i);
            save_image_png(pair.black_img, fs::path(output) / name);
        } else {
            const Scene scene = generate_scene(spec, bg);
            std::snprintf(name, sizeof name, "scene_%03d.png", i);
            save_image_png(scene.image, fs::path(output) / name);
            truth_rows.emplace_back(name, scene.truth.count);
        }
    }
    write_truth_csv(fs::path(output) / "truth.csv", truth_rows);
    std::printf("wrote %d %s and truth.csv to %s\n", count, pairs ? "pair(s)" : "scene(s)",
                output.c_str());
    return 0;
}

int run_dim(const std::string& white, const std::string& black, const std::string& output) {
    const RgbImage white_img = load_image(white);
    const RgbImage black_img = load_image(black);

    std::error_code ec;
    fs::create_directories(output, ec);
    if (ec) throw OutputIoError("cannot create output directory: " + output);

    const SegmentationParams params;
    const DimResult result = segment_dim(white_img, black_img, params);
    const int count = count_seeds(label_components(result.mask, params.connectivity));

    save_mask(result.mask, fs::path(output) / "dim_mask.png");
    save_image_png(overlay(white_img, result.mask), fs::path(output) / "dim_overlay.png");

    std::printf("otsu threshold: %d\n", result.threshold);
    std::printf("overlap score:  %.4f\n", result.overlap_score);
    std::printf("seed count:     %d\n", count);
    return 0;
}

int run_check(const std::string& report_csv, const std::string& truth_csv) {
    const BatchReport report = load_images_csv(report_csv);
    const CountComparison cmp = run_count_check(report, truth_csv);

    std::printf("images:  %d\n", cmp.n_images);
    std::printf("success: %d (%.2f%%)\n", cmp.n_success, cmp.success_pct);
    std::printf("errors:  %d (%.2f%%)\n", cmp.n_error, cmp.error_pct);
    if (!cmp.mismatched_indices.empty()) {
        std::vector<std::string> ok_names;
        for (const ImageReport& r : report.reports)
            if (r.ok) ok_names.push_back(r.filename);
        std::printf("mismatched:\n");
        for (const int idx : cmp.mismatched_indices)
            std::printf("  %s\n", ok_names[static_cast<std::size_t>(idx)].c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"seedseg - batch seed scan segmentation"};
    app.require_subcommand(1);

    // segment
    auto* seg = app.add_subcommand("segment", "segment every image in a folder");
    std::string seg_input, seg_output, seg_report = "csv";
    SegmentationParams params;
    int workers = 1;
    bool no_crop = false;
    seg->add_option("--input", seg_input, "input folder of scans")->required();
    seg->add_option("--output", seg_output, "output folder for masks/overlays/reports")
        ->required();
    seg->add_option("--hue-lo", params.hue_lo, "blue band lower hue, degrees")
        ->capture_default_str();
    seg->add_option("--hue-hi", params.hue_hi, "blue band upper hue, degrees")
        ->capture_default_str();
    seg->add_option("--min-br-diff", params.min_b_minus_r, "required B-R difference")
        ->capture_default_str();
    seg->add_option("--noise-ratio", params.noise_ratio,
                    "delete components below ratio * largest area (default 1/3)");
    seg->add_option("--connectivity", params.connectivity, "foreground connectivity")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    seg->add_option("--dpi", params.dpi, "scan resolution")->capture_default_str();
    seg->add_flag("--no-crop", no_crop, "skip the automatic content crop");
    seg->add_option("--report", seg_report, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    seg->add_option("--workers", workers, "parallel image workers (env SEEDSEG_WORKERS overrides)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic seed scenes with ground truth");
    std::string synth_output, synth_background = "light", synth_size = "1400x1050";
    std::string synth_shift = "0,0";
    int synth_count = 0, synth_k = 0;
    std::uint64_t synth_seed = 1;
    bool synth_pairs = false;
    synth->add_option("--output", synth_output, "output folder")->required();
    synth->add_option("--count", synth_count, "number of images (or pairs)")
        ->required()
        ->check(CLI::PositiveNumber);
    synth->add_option("--seeds-per-image", synth_k, "seeds per scene")
        ->required()
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--background", synth_background,
                      "light|mediumlight|mediumdark|dark or R,G,B")
        ->capture_default_str();
    synth->add_option("--size", synth_size, "scene size WxH")->capture_default_str();
    synth->add_option("--rng-seed", synth_seed, "base RNG seed")->capture_default_str();
    synth->add_flag("--pairs", synth_pairs, "emit white/black pairs instead of blue scenes");
    synth->add_option("--shift", synth_shift, "pair misalignment DX,DY")->capture_default_str();

    // dim
    auto* dim = app.add_subcommand("dim", "double-image baseline on one white/black pair");
    std::string dim_white, dim_black, dim_output;
    dim->add_option("--white", dim_white, "white-background scan")->required();
    dim->add_option("--black", dim_black, "black-background scan")->required();
    dim->add_option("--output", dim_output, "output folder")->required();

    // check
    auto* check = app.add_subcommand("check", "compare a report against truth counts");
    std::string check_report, check_truth;
    check->add_option("--report", check_report, "images.csv from a segment run")->required();
    check->add_option("--truth", check_truth, "truth CSV (filename,count)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*seg) {
            params.auto_crop = !no_crop;
            params.validate();
            return run_segment(seg_input, seg_output, params, seg_report, workers);
        }
        if (*synth)
            return run_synth(synth_output, synth_count, synth_k, synth_background, synth_size,
                             synth_seed, synth_pairs, synth_shift);
        if (*dim) return run_dim(dim_white, dim_black, dim_output);
        if (*check) return run_check(check_report, check_truth);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const EmptyFolder& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const EmptyInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NoForeground& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InvalidParams& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const InvalidSceneSpec& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const PlacementFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ShiftOutOfFrame& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DimensionMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const LengthMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
