#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "seedseg/batch.hpp"
#include "seedseg/imageio.hpp"
#include "seedseg/synthgen.hpp"

using namespace seedseg;
using testutil::TempDir;

namespace {

const SegmentationParams kDefaults;

// three small scenes with known counts
void write_scene_folder(const std::filesystem::path& dir, const std::vector<int>& counts,
                        std::vector<std::pair<std::string, int>>* truth_rows = nullptr) {
    SceneSpec spec;
    spec.width = 360;
    spec.height = 280;
    spec.n_dust = 3;
    spec.hole_prob = 0.5;
    char name[32];
    for (std::size_t i = 0; i < counts.size(); ++i) {
        spec.n_seeds = counts[i];
        spec.rng_seed = 9000 + i;
        const Scene scene = generate_scene(spec, kLightBlue);
        std::snprintf(name, sizeof name, "scene_%02zu.png", i);
        save_image_png(scene.image, dir / name);
        if (truth_rows) truth_rows->emplace_back(name, scene.truth.count);
    }
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("a folder of valid scenes produces ok rows, masks and overlays") {
    TempDir in("batch_in"), out("batch_out");
    write_scene_folder(in.path, {4, 6, 5});

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    CHECK(report.total_images == 3);
    CHECK(report.total_ok == 3);
    CHECK(report.total_skipped == 0);
    CHECK(report.mean_elapsed_ms > 0.0);

    const std::vector<int> expected{4, 6, 5};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.reports[i].seed_count == expected[i]);
        CHECK(report.reports[i].seeds.size() == static_cast<std::size_t>(expected[i]));
        CHECK(report.reports[i].status() == "ok");
    }
    CHECK(std::filesystem::exists(out.path / "scene_00_mask.png"));
    CHECK(std::filesystem::exists(out.path / "scene_00_overlay.png"));
    CHECK(std::filesystem::exists(out.path / "scene_02_mask.png"));
}

TEST_CASE("missing and empty input folders raise distinct errors") {
    TempDir out("batch_out2");
    CHECK_THROWS_AS(process_folder(out.path / "nope", out.path, kDefaults, 1), InputDirNotFound);

    TempDir in("batch_empty");
    CHECK_THROWS_AS(process_folder(in.path, out.path, kDefaults, 1), EmptyFolder);

    std::ofstream(in.path / "notes.txt") << "not an image";
    CHECK_THROWS_AS(process_folder(in.path, out.path, kDefaults, 1), EmptyFolder);
}

TEST_CASE("corrupt files are skipped without aborting the batch") {
    TempDir in("batch_corrupt"), out("batch_corrupt_out");
    write_scene_folder(in.path, {3, 4});
    std::ofstream(in.path / "broken.png") << "garbage bytes";

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    CHECK(report.total_images == 3);
    CHECK(report.total_ok == 2);
    CHECK(report.total_skipped == 1);

    // lexicographic order: broken.png < scene_00.png < scene_01.png
    CHECK(report.reports[0].filename == "broken.png");
    CHECK(report.reports[0].status() == "skipped(CorruptImage)");
    CHECK(report.reports[1].seed_count == 3);
    CHECK(report.reports[2].seed_count == 4);
}

TEST_CASE("report rows are lexicographic regardless of creation order") {
    TempDir in("batch_order"), out("batch_order_out");
    SceneSpec spec;
    spec.width = 300;
    spec.height = 220;
    spec.n_seeds = 3;
    spec.rng_seed = 1;
    const Scene scene = generate_scene(spec, kLightBlue);
    save_image_png(scene.image, in.path / "zebra.png");
    save_image_png(scene.image, in.path / "alpha.png");
    save_image_png(scene.image, in.path / "mango.png");

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    REQUIRE(report.reports.size() == 3);
    CHECK(report.reports[0].filename == "alpha.png");
    CHECK(report.reports[1].filename == "mango.png");
    CHECK(report.reports[2].filename == "zebra.png");
}

TEST_CASE("parallel workers deliver the single-threaded result") {
    TempDir in("batch_par"), out1("batch_par1"), out4("batch_par4");
    write_scene_folder(in.path, {5, 3, 7, 4, 6});

    const BatchReport serial = process_folder(in.path, out1.path, kDefaults, 1);
    const BatchReport parallel = process_folder(in.path, out4.path, kDefaults, 4);
    REQUIRE(serial.reports.size() == parallel.reports.size());
    for (std::size_t i = 0; i < serial.reports.size(); ++i) {
        CHECK(serial.reports[i].filename == parallel.reports[i].filename);
        CHECK(serial.reports[i].seed_count == parallel.reports[i].seed_count);
        CHECK(serial.reports[i].seeds == parallel.reports[i].seeds);
    }
    // masks must be byte-identical between runs
    for (const auto& r : serial.reports) {
        const std::string stem = std::filesystem::path(r.filename).stem().string();
        CHECK(slurp(out1.path / (stem + "_mask.png")) == slurp(out4.path / (stem + "_mask.png")));
    }
}

TEST_CASE("reruns are byte-identical except elapsed fields") {
    TempDir in("batch_rerun"), outa("batch_rerun_a"), outb("batch_rerun_b");
    write_scene_folder(in.path, {4, 5});

    const BatchReport a = process_folder(in.path, outa.path, kDefaults, 1);
    const BatchReport b = process_folder(in.path, outb.path, kDefaults, 1);
    for (const char* name : {"scene_00_mask.png", "scene_00_overlay.png", "scene_01_mask.png"})
        CHECK(slurp(outa.path / name) == slurp(outb.path / name));
    REQUIRE(a.reports.size() == b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i)
        CHECK(a.reports[i].seeds == b.reports[i].seeds);
}

TEST_CASE("jpeg scans survive chroma noise with exact counts") {
    TempDir in("batch_jpeg"), out("batch_jpeg_out");
    SceneSpec spec;
    spec.width = 420;
    spec.height = 320;
    spec.n_seeds = 6;
    spec.n_dust = 4;
    spec.hole_prob = 0.5;

    std::vector<std::pair<std::string, int>> truth_rows;
    char name[32];
    int i = 0;
    for (const Rgb8 bg : {kLightBlue, kMediumLightBlue, kMediumDarkBlue, kDarkBlue}) {
        spec.rng_seed = 600 + i;
        const Scene scene = generate_scene(spec, bg);
        std::snprintf(name, sizeof name, "scan_%02d.jpg", i++);
        save_image_jpeg(scene.image, in.path / name, 90);
        truth_rows.emplace_back(name, scene.truth.count);
    }

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    CHECK(report.total_ok == 4);
    write_truth_csv(out.path / "truth.csv", truth_rows);
    const CountComparison cmp = run_count_check(report, out.path / "truth.csv");
    CHECK(cmp.success_pct == doctest::Approx(100.0));
}

TEST_CASE("per-image elapsed never exceeds the batch total") {
    TempDir in("batch_time"), out("batch_time_out");
    write_scene_folder(in.path, {4, 4, 4});
    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    double sum = 0.0;
    for (const auto& r : report.reports) sum += r.elapsed_ms;
    CHECK(sum <= report.total_elapsed_ms);
}

TEST_CASE("csv report layout") {
    TempDir in("batch_csv"), out("batch_csv_out");
    write_scene_folder(in.path, {2});
    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    write_report(report, ReportFormat::Csv, out.path);

    const std::string images = slurp(out.path / "images.csv");
    CHECK(images.starts_with("filename,width,height,seed_count,elapsed_ms,status\n"));
    CHECK(images.find("scene_00.png,360,280,2,") != std::string::npos);
    CHECK(images.find("\r") == std::string::npos); // LF only

    const std::string seeds = slurp(out.path / "seeds.csv");
    CHECK(seeds.starts_with(
        "filename,seed_id,area_px,area_mm2,perimeter_px,centroid_x,centroid_y,"
        "bbox_x,bbox_y,bbox_w,bbox_h,mean_r,mean_g,mean_b,mean_h,mean_s,mean_bri\n"));
    // header + 2 seed rows
    CHECK(std::count(seeds.begin(), seeds.end(), '\n') == 3);
}

TEST_CASE("empty-but-valid report writes header-only csv files") {
    TempDir out("batch_csv_empty");
    BatchReport report;
    report.params = kDefaults;
    write_report(report, ReportFormat::Csv, out.path);
    CHECK(slurp(out.path / "images.csv") ==
          "filename,width,height,seed_count,elapsed_ms,status\n");
    const std::string seeds = slurp(out.path / "seeds.csv");
    CHECK(std::count(seeds.begin(), seeds.end(), '\n') == 1);
}

TEST_CASE("json report round-trips structurally") {
    TempDir in("batch_json"), out("batch_json_out");
    write_scene_folder(in.path, {3, 2});
    std::ofstream(in.path / "broken.png") << "garbage";

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 2);
    write_report(report, ReportFormat::Json, out.path);

    const nlohmann::json j = nlohmann::json::parse(slurp(out.path / "report.json"));
    const BatchReport back = j.get<BatchReport>();
    const nlohmann::json j2 = back;
    CHECK(j == j2);

    CHECK(back.total_images == report.total_images);
    CHECK(back.total_ok == report.total_ok);
    CHECK(back.params == report.params);
    REQUIRE(back.reports.size() == report.reports.size());
    for (std::size_t i = 0; i < report.reports.size(); ++i) {
        CHECK(back.reports[i].filename == report.reports[i].filename);
        CHECK(back.reports[i].seed_count == report.reports[i].seed_count);
        CHECK(back.reports[i].status() == report.reports[i].status());
        CHECK(back.reports[i].seeds == report.reports[i].seeds);
    }
}

TEST_CASE("count check joins by filename and flags mismatches") {
    TempDir in("batch_check"), out("batch_check_out");
    std::vector<std::pair<std::string, int>> truth_rows;
    write_scene_folder(in.path, {4, 6, 5}, &truth_rows);
    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);

    SUBCASE("matching truth gives 100 percent success") {
        write_truth_csv(out.path / "truth.csv", truth_rows);
        const CountComparison cmp = run_count_check(report, out.path / "truth.csv");
        CHECK(cmp.n_images == 3);
        CHECK(cmp.success_pct == doctest::Approx(100.0));
    }

    SUBCASE("a wrong count is reported at its index") {
        truth_rows[1].second += 1;
        write_truth_csv(out.path / "truth.csv", truth_rows);
        const CountComparison cmp = run_count_check(report, out.path / "truth.csv");
        CHECK(cmp.n_error == 1);
        CHECK(cmp.mismatched_indices == std::vector<int>{1});
    }

    SUBCASE("a missing truth row names the file") {
        truth_rows.pop_back();
        write_truth_csv(out.path / "truth.csv", truth_rows);
        CHECK_THROWS_AS(run_count_check(report, out.path / "truth.csv"), MissingTruthRow);
    }

    SUBCASE("malformed truth content raises ParseError") {
        std::ofstream(out.path / "truth.csv") << "scene_00.png,notanumber\n";
        CHECK_THROWS_AS(run_count_check(report, out.path / "truth.csv"), ParseError);
    }
}

TEST_CASE("images.csv loads back for checking") {
    TempDir in("batch_load"), out("batch_load_out");
    std::vector<std::pair<std::string, int>> truth_rows;
    write_scene_folder(in.path, {3, 5}, &truth_rows);
    std::ofstream(in.path / "broken.png") << "garbage";

    const BatchReport report = process_folder(in.path, out.path, kDefaults, 1);
    write_report(report, ReportFormat::Csv, out.path);

    const BatchReport loaded = load_images_csv(out.path / "images.csv");
    CHECK(loaded.total_images == 3);
    CHECK(loaded.total_ok == 2);
    CHECK(loaded.total_skipped == 1);
    CHECK(loaded.reports[0].status() == "skipped(CorruptImage)");

    write_truth_csv(out.path / "truth.csv", truth_rows);
    const CountComparison cmp = run_count_check(loaded, out.path / "truth.csv");
    CHECK(cmp.success_pct == doctest::Approx(100.0));

    CHECK_THROWS_AS(load_images_csv(out.path / "missing.csv"), IoError);
    std::ofstream(out.path / "bad.csv") << "who,what\n";
    CHECK_THROWS_AS(load_images_csv(out.path / "bad.csv"), ParseError);
}
