#include "vsstereo/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>

#include "vsstereo/error.hpp"

namespace vsstereo {

namespace {

void check_shapes(const DisparityMap& pred, const GroundTruth& gt, const Mask* mask) {
    if (!pred.disp.same_shape(gt.disparity)) {
        throw DimensionError("prediction is " + std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                             ", ground truth is " + std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
    }
    if (mask && !mask->same_shape(gt.disparity)) throw DimensionError("mask does not match the ground truth");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string fmt_noise(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

bool is_evaluated(const GroundTruth& gt, const Mask* mask, std::size_t p) {
    return !gt.unknown.data()[p] && (!mask || mask->data()[p]);
}

bool is_bad(const DisparityMap& pred, const GroundTruth& gt, std::size_t p, double bad_thresh) {
    return std::abs(static_cast<double>(pred.disp.data()[p]) - gt.disparity.data()[p]) > bad_thresh;
}

Mismatch mismatch_rate(const DisparityMap& pred, const GroundTruth& gt, const Mask* mask, double bad_thresh) {
    if (!(bad_thresh > 0.0)) throw ParameterError("bad-thresh", "must be positive");
    check_shapes(pred, gt, mask);
    Mismatch m;
    for (std::size_t p = 0; p < pred.disp.size(); ++p) {
        if (!is_evaluated(gt, mask, p)) continue;
        ++m.evaluated;
        if (is_bad(pred, gt, p, bad_thresh)) ++m.bad;
    }
    if (m.evaluated == 0) throw Error("mismatch_rate: no pixel has ground truth inside the mask");
    m.percent = 100.0 * static_cast<double>(m.bad) / static_cast<double>(m.evaluated);
    return m;
}

ColorImage error_overlay(const DisparityMap& pred, const GroundTruth& gt, const Image& base, double bad_thresh,
                         const Mask* mask) {
    check_shapes(pred, gt, mask);
    if (!base.same_shape(gt.disparity)) throw DimensionError("overlay base does not match the ground truth");
    ColorImage out(base.width(), base.height());
    for (std::size_t p = 0; p < base.size(); ++p) {
        if (is_evaluated(gt, mask, p) && is_bad(pred, gt, p, bad_thresh)) {
            out.data()[p] = {255, 0, 0};
        } else {
            const auto g = static_cast<std::uint8_t>(std::clamp(std::floor(base.data()[p] + 0.5f), 0.0f, 255.0f));
            out.data()[p] = {g, g, g};
        }
    }
    return out;
}

const EvalReport::Entry* EvalReport::average(const std::string& algorithm, double noise) const {
    for (const auto& e : averages) {
        if (e.algorithm == algorithm && e.noise == noise) return &e;
    }
    return nullptr;
}

const EvalReport::Entry* EvalReport::find(const std::string& name, const std::string& algorithm, double noise) const {
    for (const auto& e : per_image) {
        if (e.name == name && e.algorithm == algorithm && e.noise == noise) return &e;
    }
    return nullptr;
}

std::string EvalReport::to_csv() const {
    std::string out = "name,algorithm,noise,evaluated,bad,percent\n";
    char pct[32];
    auto row = [&](const Entry& e) {
        std::snprintf(pct, sizeof pct, "%.4f", e.percent);
        out += e.name + "," + e.algorithm + "," + fmt_noise(e.noise) + "," + std::to_string(e.evaluated) + "," +
               std::to_string(e.bad) + "," + pct + "\n";
    };
    for (const auto& e : per_image) row(e);
    for (const auto& e : averages) row(e);
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name, double level, int view) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the image name
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ h);
    s = splitmix64(s ^ std::bit_cast<std::uint64_t>(level));
    return splitmix64(s ^ static_cast<std::uint64_t>(view));
}

EvalReport noise_sweep(const std::vector<StereoSample>& dataset, const std::vector<double>& levels,
                       const std::vector<Algorithm>& algorithms, const PipelineConfig& cfg, std::uint64_t seed,
                       const CellObserver& observer) {
    if (dataset.empty()) throw ParameterError("dataset", "must not be empty");
    if (levels.empty()) throw ParameterError("noise", "level list must not be empty");
    EvalReport report;
    report.bad_thresh = cfg.bad_thresh;

    // (algorithm, level index) -> member rows, in dataset order.
    std::map<std::pair<int, std::size_t>, std::vector<EvalReport::Entry>> groups;

    for (const StereoSample& sample : dataset) {
        for (std::size_t li = 0; li < levels.size(); ++li) {
            const double level = levels[li];
            Image left, right;
            try {
                left = add_gaussian_noise(sample.left, level, derive_seed(seed, sample.name, level, 0));
                right = add_gaussian_noise(sample.right, level, derive_seed(seed, sample.name, level, 1));
            } catch (const std::exception& e) {
                for (Algorithm a : algorithms) report.failures.push_back({sample.name, to_string(a), level, e.what()});
                continue;
            }
            for (Algorithm algo : algorithms) {
                try {
                    PipelineConfig cell = cfg;
                    cell.algorithm = algo;
                    cell.cost.max_disp = sample.max_disp;
                    const MatchResult result = run_match(left, right, cell);
                    const Mismatch m = mismatch_rate(result.disparity, sample.gt,
                                                     sample.nonocc ? &*sample.nonocc : nullptr, cfg.bad_thresh);
                    EvalReport::Entry e{sample.name, to_string(algo), level, m.evaluated, m.bad, m.percent};
                    report.per_image.push_back(e);
                    groups[{static_cast<int>(algo), li}].push_back(e);
                    if (observer) observer(sample, algo, level, result);
                } catch (const std::exception& e) {
                    report.failures.push_back({sample.name, to_string(algo), level, e.what()});
                }
            }
        }
    }

    for (Algorithm algo : algorithms) {
        for (std::size_t li = 0; li < levels.size(); ++li) {
            const auto it = groups.find({static_cast<int>(algo), li});
            if (it == groups.end()) continue;
            EvalReport::Entry avg{"average", to_string(algo), levels[li], 0, 0, 0.0};
            for (const auto& e : it->second) {
                avg.evaluated += e.evaluated;
                avg.bad += e.bad;
                avg.percent += e.percent;
            }
            avg.percent /= static_cast<double>(it->second.size());
            report.averages.push_back(avg);
        }
    }
    return report;
}

}  // namespace vsstereo
