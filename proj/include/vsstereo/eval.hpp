#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vsstereo/disparity.hpp"
#include "vsstereo/imgio.hpp"
#include "vsstereo/pipeline.hpp"

namespace vsstereo {

struct Mismatch {
    std::size_t evaluated = 0;
    std::size_t bad = 0;
    double percent = 0.0;
};

/// Whether `p` counts toward the evaluation: ground truth known and, when a
/// mask is given, mask set.
bool is_evaluated(const GroundTruth& gt, const Mask* mask, std::size_t p);

/// |pred - gt| > bad_thresh at an evaluated pixel.
bool is_bad(const DisparityMap& pred, const GroundTruth& gt, std::size_t p, double bad_thresh);

/// Bad-pixel percentage over evaluated pixels. Throws if nothing is evaluated.
Mismatch mismatch_rate(const DisparityMap& pred, const GroundTruth& gt, const Mask* mask, double bad_thresh);

/// Gray base promoted to RGB with every bad evaluated pixel painted (255, 0, 0).
ColorImage error_overlay(const DisparityMap& pred, const GroundTruth& gt, const Image& base, double bad_thresh,
                         const Mask* mask = nullptr);

struct StereoSample {
    std::string name;
    Image left;
    Image right;
    GroundTruth gt;
    std::optional<Mask> nonocc;
    int max_disp = 64;
};

struct EvalReport {
    struct Entry {
        std::string name;
        std::string algorithm;
        double noise = 0.0;
        std::size_t evaluated = 0;
        std::size_t bad = 0;
        double percent = 0.0;
    };
    struct Failure {
        std::string name;
        std::string algorithm;
        double noise = 0.0;
        std::string message;
    };

    double bad_thresh = 1.0;
    std::vector<Entry> per_image;
    std::vector<Entry> averages;  // name "average": mean percent, summed counts
    std::vector<Failure> failures;

    /// Looks up an average row; nullptr when absent.
    const Entry* average(const std::string& algorithm, double noise) const;
    const Entry* find(const std::string& name, const std::string& algorithm, double noise) const;

    /// name,algorithm,noise,evaluated,bad,percent
    std::string to_csv() const;
};

/// Seed for one view of one (image, level) cell.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& name, double level, int view);

/// Called after every successful cell, e.g. to write overlays.
using CellObserver = std::function<void(const StereoSample&, Algorithm, double level, const MatchResult&)>;

/// For every image, level and algorithm: add noise to both views, run the
/// pipeline with the sample's disparity range, evaluate. Failing cells are
/// recorded in `failures` and the sweep continues.
EvalReport noise_sweep(const std::vector<StereoSample>& dataset, const std::vector<double>& levels,
                       const std::vector<Algorithm>& algorithms, const PipelineConfig& cfg, std::uint64_t seed,
                       const CellObserver& observer = {});

}  // namespace vsstereo
