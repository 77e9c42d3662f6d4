#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vsstereo/aggregation.hpp"
#include "vsstereo/cost.hpp"
#include "vsstereo/disparity.hpp"
#include "vsstereo/gradient.hpp"

namespace vsstereo {

enum class Algorithm {
    Vsi,     // gradient-gated census cost + direction-guided cross aggregation
    Census,  // census cost + fixed box aggregation
};

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

enum class KernelFamily { Sobel, Prewitt };

struct PipelineConfig {
    Algorithm algorithm = Algorithm::Vsi;
    CostParams cost;
    CrossParams cross;
    KernelFamily kernels = KernelFamily::Sobel;
    MagnitudeMode magnitude = MagnitudeMode::Euclidean;
    float t_sens = 20.0f;
    int agg_passes = 1;
    int box_radius = 0;
    bool lr_check = true;
    double t_lr = 1.0;
    bool median = true;
    double gt_scale = 4.0;
    double bad_thresh = 1.0;
    std::vector<double> noise{0.0};
    std::uint64_t seed = 1;

    std::string out;
    std::string report;
    std::string overlay_dir;
    std::string dump_cost;

    /// Throws ParameterError naming the first invalid field.
    void validate() const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// "key = value" lines, one per field, keys matching the CLI long options.
std::string to_config_text(const PipelineConfig& cfg);

/// Applies every key in `text` on top of `base`. Blank lines and '#'
/// comments are ignored; unknown keys and bad values throw ParameterError.
PipelineConfig parse_config_text(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Every key accepted by set_config_value, in dump order.
std::vector<std::string> config_keys();

/// Applies a single key (also used by the CLI for flag values).
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct MatchResult {
    DisparityMap disparity;    // after refinement
    DisparityMap left_raw;     // WTA output, left reference
    DisparityMap right_raw;    // WTA output, right reference (empty when LR check is off)
    CostVolume initial_cost;   // left-reference cost before aggregation
    GradientField left_gradient;
    CrossArms left_arms;       // vsi only
    std::vector<StageTiming> timings;
};

/// Raw WTA disparity with `ref` as the reference view and `other` searched
/// toward smaller x.
DisparityMap match_one_way(const Image& ref, const Image& other, const PipelineConfig& cfg,
                           std::vector<StageTiming>* timings = nullptr, MatchResult* artifacts = nullptr);

/// gradient -> cost -> aggregation -> WTA for both views (the right view by
/// mirroring both images), then LR check, fill and optional median.
MatchResult run_match(const Image& left, const Image& right, const PipelineConfig& cfg);

Image mirror(const Image& img);

}  // namespace vsstereo
