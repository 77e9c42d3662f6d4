#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsstereo/eval.hpp"

namespace vsstereo {

/// Default disparity range and ground-truth scale of a Middlebury 2.0 pair.
struct DatasetDefaults {
    int max_disp = 64;
    double scale = 4.0;
};

/// tsukuba (16, 16), venus (20, 8), teddy (60, 4), cones (60, 4); other
/// names fall back to (64, 4).
DatasetDefaults dataset_defaults(const std::string& name);

struct BenchOptions {
    std::vector<std::string> names{"cones", "tsukuba", "teddy", "venus"};
    std::optional<int> max_disp;  // overrides the per-image default
    std::optional<double> scale;  // overrides the per-image default
    bool require_all = false;     // missing entries are errors instead of skipped
};

struct DatasetLoad {
    std::vector<StereoSample> samples;
    std::vector<std::string> errors;  // one per unusable entry, naming it
};

/// Reads <dir>/<name>/{left,right,gt}[.pgm|.ppm] and an optional nonocc mask.
DatasetLoad load_dataset(const std::filesystem::path& dir, const BenchOptions& options = {});

struct BenchResult {
    EvalReport report;
    std::vector<std::string> errors;  // dataset problems plus failed cells
    bool ok() const { return errors.empty(); }
};

/// Evaluates both algorithms at every level of cfg.noise (a single zero level
/// when empty). Writes cfg.report as CSV and, when cfg.overlay_dir is set,
/// one error overlay and one disparity PGM per cell.
BenchResult run_bench(const PipelineConfig& cfg, const std::filesystem::path& dataset_dir,
                      const BenchOptions& options = {});

}  // namespace vsstereo
