#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedseg/params.hpp"
#include "seedseg/regions.hpp"

namespace seedseg {

struct ImageReport {
    std::string filename;
    int width = 0;
    int height = 0;
    int seed_count = 0;
    double elapsed_ms = 0.0; // segmentation + feature extraction, no file I/O
    std::vector<SeedRecord> seeds;
    bool ok = false;
    std::string skip_reason; // error kind when skipped, e.g. "CorruptImage"

    std::string status() const { return ok ? "ok" : "skipped(" + skip_reason + ")"; }
};

struct BatchReport {
    std::vector<ImageReport> reports; // lexicographic filename order
    int total_images = 0;
    int total_ok = 0;
    int total_skipped = 0;
    double mean_elapsed_ms = 0.0;  // over ok images
    double total_elapsed_ms = 0.0; // wall time of the whole batch, I/O included
    SegmentationParams params;
};

enum class ReportFormat { Csv, Json };

// Segments every supported image directly inside in_dir (non-recursive,
// lexicographic order) and writes <stem>_mask.png / <stem>_overlay.png into
// out_dir. Unreadable files are recorded as skipped, never aborting the
// batch. workers > 1 fans images out to that many threads; the report order
// stays deterministic. Throws InputDirNotFound, EmptyFolder, OutputIoError.
BatchReport process_folder(const std::filesystem::path& in_dir,
                           const std::filesystem::path& out_dir,
                           const SegmentationParams& params,
                           int workers = 1);

// Csv writes images.csv and seeds.csv into dir; Json writes report.json.
// Floating values carry 4 decimals, files are UTF-8 with LF endings.
void write_report(const BatchReport& report, ReportFormat format,
                  const std::filesystem::path& dir);

// Rebuilds the per-image rows (filename/dimensions/count/status) from an
// images.csv written by write_report. Seed records are not restored.
BatchReport load_images_csv(const std::filesystem::path& csv_path);

// Joins the report's ok images against a (filename,count) truth CSV and
// compares counts. Throws MissingTruthRow / ParseError.
CountComparison run_count_check(const BatchReport& report,
                                const std::filesystem::path& truth_csv);

// Truth CSV helpers shared by the generator CLI and the checker.
void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, int>>& rows);

// JSON bindings for the report types, so reports round-trip structurally.
void to_json(nlohmann::json& j, const SeedRecord& s);
void from_json(const nlohmann::json& j, SeedRecord& s);
void to_json(nlohmann::json& j, const SegmentationParams& p);
void from_json(const nlohmann::json& j, SegmentationParams& p);
void to_json(nlohmann::json& j, const ImageReport& r);
void from_json(const nlohmann::json& j, ImageReport& r);
void to_json(nlohmann::json& j, const BatchReport& b);
void from_json(const nlohmann::json& j, BatchReport& b);

} // namespace seedseg
