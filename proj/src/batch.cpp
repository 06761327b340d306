#include "seedseg/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "seedseg/color.hpp"
#include "seedseg/imageio.hpp"
#include "seedseg/segmentation.hpp"

namespace fs = std::filesystem;

namespace seedseg {

namespace {

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

ImageReport process_one(const fs::path& file, const fs::path& out_dir,
                        const SegmentationParams& params) {
    ImageReport report;
    report.filename = file.filename().string();

    RgbImage img;
    try {
        img = load_image(file);
    } catch (const Error& e) {
        report.ok = false;
        report.skip_reason = e.kind();
        return report;
    }
    report.width = img.width;
    report.height = img.height;

    // timed window covers segmentation and feature extraction, not file I/O
    const auto t0 = std::chrono::steady_clock::now();
    const SegmentationResult seg = segment(img, params);
    const LabelMap labels = label_components(seg.mask, params.connectivity);

    const RgbImage* region = &img;
    RgbImage cropped;
    if (seg.crop_rect != Rect::full(img.width, img.height)) {
        cropped = crop(img, seg.crop_rect);
        region = &cropped;
    }
    report.seeds = component_stats(labels, *region, params.dpi);
    report.seed_count = labels.count;
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.ok = true;

    const std::string stem = file.stem().string();
    try {
        save_mask(seg.mask, out_dir / (stem + "_mask.png"));
        save_image_png(overlay(*region, seg.mask), out_dir / (stem + "_overlay.png"));
    } catch (const Error& e) {
        throw OutputIoError(std::string("writing outputs failed: ") + e.what());
    }
    return report;
}

} // namespace

BatchReport process_folder(const fs::path& in_dir, const fs::path& out_dir,
                           const SegmentationParams& params, int workers) {
    params.validate();
    if (!fs::exists(in_dir) || !fs::is_directory(in_dir))
        throw InputDirNotFound("input directory not found: " + in_dir.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir))
        if (entry.is_regular_file() && is_supported_image(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    if (files.empty())
        throw EmptyFolder("no supported images in " + in_dir.string());

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw OutputIoError("cannot create output directory: " + out_dir.string());

    const auto batch_t0 = std::chrono::steady_clock::now();

    BatchReport batch;
    batch.params = params;
    batch.reports.resize(files.size());

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            try {
                batch.reports[i] = process_one(files[i], out_dir, params);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const int n_threads = std::clamp<int>(workers, 1, static_cast<int>(files.size()));
    if (n_threads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    batch.total_images = static_cast<int>(batch.reports.size());
    double sum_ms = 0.0;
    for (const ImageReport& r : batch.reports) {
        if (r.ok) {
            ++batch.total_ok;
            sum_ms += r.elapsed_ms;
        } else {
            ++batch.total_skipped;
        }
    }
    batch.mean_elapsed_ms = batch.total_ok > 0 ? sum_ms / batch.total_ok : 0.0;
    batch.total_elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - batch_t0)
            .count();
    return batch;
}

// ---- report serialization -------------------------------------------------

namespace {

const char* kImagesHeader = "filename,width,height,seed_count,elapsed_ms,status";
const char* kSeedsHeader =
    "filename,seed_id,area_px,area_mm2,perimeter_px,centroid_x,centroid_y,"
    "bbox_x,bbox_y,bbox_w,bbox_h,mean_r,mean_g,mean_b,mean_h,mean_s,mean_bri";

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_csv_reports(const BatchReport& report, const fs::path& dir) {
    auto images = open_out(dir / "images.csv");
    images << kImagesHeader << '\n';
    for (const ImageReport& r : report.reports) {
        images << csv_field(r.filename) << ',' << r.width << ',' << r.height << ','
               << r.seed_count << ',' << fmt4(r.elapsed_ms) << ',' << r.status() << '\n';
    }
    if (!images.flush()) throw IoError("write failed: images.csv");

    auto seeds = open_out(dir / "seeds.csv");
    seeds << kSeedsHeader << '\n';
    for (const ImageReport& r : report.reports) {
        for (const SeedRecord& s : r.seeds) {
            seeds << csv_field(r.filename) << ',' << s.seed_id << ',' << s.area_px << ','
                  << fmt4(s.area_mm2) << ',' << s.perimeter_px << ',' << fmt4(s.centroid_x)
                  << ',' << fmt4(s.centroid_y) << ',' << s.bbox.x << ',' << s.bbox.y << ','
                  << s.bbox.w << ',' << s.bbox.h << ',' << fmt4(s.mean_r) << ','
                  << fmt4(s.mean_g) << ',' << fmt4(s.mean_b) << ',' << fmt4(s.mean_h) << ','
                  << fmt4(s.mean_s) << ',' << fmt4(s.mean_bri) << '\n';
        }
    }
    if (!seeds.flush()) throw IoError("write failed: seeds.csv");
}

} // namespace

void to_json(nlohmann::json& j, const SeedRecord& s) {
    j = {{"seed_id", s.seed_id},
         {"area_px", s.area_px},
         {"area_mm2", s.area_mm2},
         {"perimeter_px", s.perimeter_px},
         {"centroid_x", s.centroid_x},
         {"centroid_y", s.centroid_y},
         {"bbox", {{"x", s.bbox.x}, {"y", s.bbox.y}, {"w", s.bbox.w}, {"h", s.bbox.h}}},
         {"mean_rgb", {{"r", s.mean_r}, {"g", s.mean_g}, {"b", s.mean_b}}},
         {"mean_hsb", {{"h", s.mean_h}, {"s", s.mean_s}, {"b", s.mean_bri}}}};
}

void from_json(const nlohmann::json& j, SeedRecord& s) {
    j.at("seed_id").get_to(s.seed_id);
    j.at("area_px").get_to(s.area_px);
    j.at("area_mm2").get_to(s.area_mm2);
    j.at("perimeter_px").get_to(s.perimeter_px);
    j.at("centroid_x").get_to(s.centroid_x);
    j.at("centroid_y").get_to(s.centroid_y);
    const auto& bb = j.at("bbox");
    s.bbox = {bb.at("x").get<int>(), bb.at("y").get<int>(), bb.at("w").get<int>(),
              bb.at("h").get<int>()};
    const auto& rgb = j.at("mean_rgb");
    rgb.at("r").get_to(s.mean_r);
    rgb.at("g").get_to(s.mean_g);
    rgb.at("b").get_to(s.mean_b);
    const auto& hsb = j.at("mean_hsb");
    hsb.at("h").get_to(s.mean_h);
    hsb.at("s").get_to(s.mean_s);
    hsb.at("b").get_to(s.mean_bri);
}

void to_json(nlohmann::json& j, const SegmentationParams& p) {
    j = {{"hue_lo", p.hue_lo},
         {"hue_hi", p.hue_hi},
         {"min_b_minus_r", p.min_b_minus_r},
         {"noise_ratio", p.noise_ratio},
         {"connectivity", p.connectivity},
         {"auto_crop", p.auto_crop},
         {"edge_threshold", p.edge_threshold},
         {"crop_margin", p.crop_margin},
         {"dpi", p.dpi}};
}

void from_json(const nlohmann::json& j, SegmentationParams& p) {
    j.at("hue_lo").get_to(p.hue_lo);
    j.at("hue_hi").get_to(p.hue_hi);
    j.at("min_b_minus_r").get_to(p.min_b_minus_r);
    j.at("noise_ratio").get_to(p.noise_ratio);
    j.at("connectivity").get_to(p.connectivity);
    j.at("auto_crop").get_to(p.auto_crop);
    j.at("edge_threshold").get_to(p.edge_threshold);
    j.at("crop_margin").get_to(p.crop_margin);
    j.at("dpi").get_to(p.dpi);
}

void to_json(nlohmann::json& j, const ImageReport& r) {
    j = {{"filename", r.filename}, {"width", r.width},           {"height", r.height},
         {"seed_count", r.seed_count}, {"elapsed_ms", r.elapsed_ms}, {"status", r.status()},
         {"seeds", r.seeds}};
}

void from_json(const nlohmann::json& j, ImageReport& r) {
    j.at("filename").get_to(r.filename);
    j.at("width").get_to(r.width);
    j.at("height").get_to(r.height);
    j.at("seed_count").get_to(r.seed_count);
    j.at("elapsed_ms").get_to(r.elapsed_ms);
    j.at("seeds").get_to(r.seeds);
    const std::string status = j.at("status").get<std::string>();
    r.ok = status == "ok";
    if (!r.ok && status.size() > 9 && status.starts_with("skipped("))
        r.skip_reason = status.substr(8, status.size() - 9);
}

void to_json(nlohmann::json& j, const BatchReport& b) {
    j = {{"params", b.params},
         {"total_images", b.total_images},
         {"total_ok", b.total_ok},
         {"total_skipped", b.total_skipped},
         {"mean_elapsed_ms", b.mean_elapsed_ms},
         {"total_elapsed_ms", b.total_elapsed_ms},
         {"images", b.reports}};
}

void from_json(const nlohmann::json& j, BatchReport& b) {
    j.at("params").get_to(b.params);
    j.at("total_images").get_to(b.total_images);
    j.at("total_ok").get_to(b.total_ok);
    j.at("total_skipped").get_to(b.total_skipped);
    j.at("mean_elapsed_ms").get_to(b.mean_elapsed_ms);
    j.at("total_elapsed_ms").get_to(b.total_elapsed_ms);
    j.at("images").get_to(b.reports);
}

void write_report(const BatchReport& report, ReportFormat format, const fs::path& dir) {
    if (format == ReportFormat::Csv) {
        write_csv_reports(report, dir);
        return;
    }
    auto out = open_out(dir / "report.json");
    const nlohmann::json j = report;
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("write failed: report.json");
}

BatchReport load_images_csv(const fs::path& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("cannot read " + csv_path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty report: " + csv_path.string());
    if (split_csv_line(line) != split_csv_line(kImagesHeader))
        throw ParseError("unexpected images.csv header: " + line);

    BatchReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) throw ParseError("bad images.csv row: " + line);
        ImageReport r;
        r.filename = fields[0];
        try {
            r.width = std::stoi(fields[1]);
            r.height = std::stoi(fields[2]);
            r.seed_count = std::stoi(fields[3]);
            r.elapsed_ms = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw ParseError("bad images.csv row: " + line);
        }
        r.ok = fields[5] == "ok";
        if (!r.ok && fields[5].size() > 9 && fields[5].starts_with("skipped("))
            r.skip_reason = fields[5].substr(8, fields[5].size() - 9);
        report.reports.push_back(std::move(r));
        ++report.total_images;
        if (report.reports.back().ok)
            ++report.total_ok;
        else
            ++report.total_skipped;
    }
    return report;
}

CountComparison run_count_check(const BatchReport& report, const fs::path& truth_csv) {
    std::ifstream in(truth_csv, std::ios::binary);
    if (!in) throw IoError("cannot read " + truth_csv.string());

    std::unordered_map<std::string, int> truth;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (first && fields.size() == 2 && fields[0] == "filename" && fields[1] == "count") {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 2) throw ParseError("bad truth row: " + line);
        try {
            truth[fields[0]] = std::stoi(fields[1]);
        } catch (const std::exception&) {
            throw ParseError("bad truth count: " + line);
        }
    }

    std::vector<int> auto_counts, truth_counts;
    for (const ImageReport& r : report.reports) {
        if (!r.ok) continue;
        const auto it = truth.find(r.filename);
        if (it == truth.end())
            throw MissingTruthRow("no truth count for " + r.filename);
        auto_counts.push_back(r.seed_count);
        truth_counts.push_back(it->second);
    }
    return compare_counts(auto_counts, truth_counts);
}

void write_truth_csv(const fs::path& path,
                     const std::vector<std::pair<std::string, int>>& rows) {
    auto out = open_out(path);
    out << "filename,count\n";
    for (const auto& [name, count] : rows) out << csv_field(name) << ',' << count << '\n';
    if (!out.flush()) throw IoError("write failed: " + path.string());
}

} // namespace seedseg
