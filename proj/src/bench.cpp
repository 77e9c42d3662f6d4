#include "vsstereo/bench.hpp"

#include <cstdio>
#include <fstream>

#include "vsstereo/error.hpp"

namespace vsstereo {

namespace {

std::optional<std::filesystem::path> find_entry(const std::filesystem::path& dir, const std::string& stem) {
    for (const char* ext : {".pgm", ".ppm", ".pnm"}) {
        auto p = dir / (stem + ext);
        if (std::filesystem::exists(p)) return p;
    }
    return std::nullopt;
}

std::string cell_stem(const std::string& name, Algorithm a, double level) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", level);
    return name + "_" + to_string(a) + "_n" + buf;
}

}  // namespace

DatasetDefaults dataset_defaults(const std::string& name) {
    if (name == "tsukuba") return {16, 16.0};
    if (name == "venus") return {20, 8.0};
    if (name == "teddy") return {60, 4.0};
    if (name == "cones") return {60, 4.0};
    return {};
}

DatasetLoad load_dataset(const std::filesystem::path& dir, const BenchOptions& options) {
    DatasetLoad out;
    if (!std::filesystem::is_directory(dir)) {
        out.errors.push_back("dataset directory " + dir.string() + " does not exist");
        return out;
    }
    for (const std::string& name : options.names) {
        const auto entry = dir / name;
        if (!std::filesystem::is_directory(entry)) {
            if (options.require_all) out.errors.push_back(name + ": missing directory " + entry.string());
            continue;
        }
        try {
            const auto left = find_entry(entry, "left");
            const auto right = find_entry(entry, "right");
            const auto gt = find_entry(entry, "gt");
            if (!left || !right || !gt) {
                out.errors.push_back(name + ": expected left, right and gt images in " + entry.string());
                continue;
            }
            const DatasetDefaults defaults = dataset_defaults(name);
            StereoSample s;
            s.name = name;
            s.left = load_image(*left);
            s.right = load_image(*right);
            s.gt = load_ground_truth(*gt, options.scale.value_or(defaults.scale));
            s.max_disp = options.max_disp.value_or(defaults.max_disp);
            if (const auto mask = find_entry(entry, "nonocc")) s.nonocc = load_mask(*mask);
            if (!s.left.same_shape(s.right) || !s.gt.disparity.same_shape(s.left) ||
                (s.nonocc && !s.nonocc->same_shape(s.left))) {
                out.errors.push_back(name + ": image sizes differ");
                continue;
            }
            out.samples.push_back(std::move(s));
        } catch (const std::exception& e) {
            out.errors.push_back(name + ": " + e.what());
        }
    }
    return out;
}

BenchResult run_bench(const PipelineConfig& cfg, const std::filesystem::path& dataset_dir, const BenchOptions& options) {
    cfg.validate();
    BenchResult result;
    DatasetLoad data = load_dataset(dataset_dir, options);
    result.errors = data.errors;
    if (data.samples.empty()) {
        result.errors.push_back("no usable stereo pairs under " + dataset_dir.string());
        return result;
    }
    const std::vector<double> levels = cfg.noise.empty() ? std::vector<double>{0.0} : cfg.noise;

    CellObserver observer;
    if (!cfg.overlay_dir.empty()) {
        std::filesystem::create_directories(cfg.overlay_dir);
        observer = [&](const StereoSample& s, Algorithm a, double level, const MatchResult& r) {
            const std::filesystem::path dir(cfg.overlay_dir);
            const std::string stem = cell_stem(s.name, a, level);
            save_color_image(error_overlay(r.disparity, s.gt, s.left, cfg.bad_thresh, s.nonocc ? &*s.nonocc : nullptr),
                             dir / (stem + "_errors.ppm"));
            save_disparity(r.disparity, s.gt.scale, dir / (stem + "_disp.pgm"));
        };
    }
    result.report = noise_sweep(data.samples, levels, {Algorithm::Census, Algorithm::Vsi}, cfg, cfg.seed, observer);
    for (const auto& f : result.report.failures) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", f.noise);
        result.errors.push_back(f.name + "/" + f.algorithm + "/noise " + buf + ": " + f.message);
    }
    if (!cfg.report.empty()) {
        std::ofstream f(cfg.report, std::ios::binary);
        if (!f) throw IoError("cannot write " + cfg.report);
        f << result.report.to_csv();
    }
    return result;
}

}  // namespace vsstereo
