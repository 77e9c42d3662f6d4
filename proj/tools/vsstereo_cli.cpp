// Command line front end: match, eval and bench subcommands.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "vsstereo/bench.hpp"
#include "vsstereo/error.hpp"
#include "vsstereo/eval.hpp"
#include "vsstereo/gradient.hpp"
#include "vsstereo/imgio.hpp"
#include "vsstereo/parallel.hpp"
#include "vsstereo/pipeline.hpp"

namespace {

using namespace vsstereo;

// Flags that mirror configuration keys. Values are applied through the same
// setter as config files, after the file, so flags take precedence.
struct ConfigFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app, const std::vector<std::string>& skip = {}) {
        for (const std::string& key : config_keys()) {
            if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
            options[key] = app.add_option("--" + key, values[key], "configuration value '" + key + "'");
        }
    }

    void apply(PipelineConfig& cfg) const {
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) set_config_value(cfg, key, values.at(key));
        }
    }
};

void print_timings(const MatchResult& r) {
    double total = 0.0;
    for (const auto& t : r.timings) {
        std::fprintf(stderr, "  %-18s %10.2f ms\n", t.stage.c_str(), t.ms);
        total += t.ms;
    }
    std::fprintf(stderr, "  %-18s %10.2f ms\n", "total", total);
}

void dump_arms(const CrossArms& arms, const std::string& prefix) {
    const std::pair<const char*, Arm> dirs[] = {
        {"left", Arm::Left}, {"right", Arm::Right}, {"up", Arm::Up}, {"down", Arm::Down}};
    for (const auto& [name, arm] : dirs) {
        const auto& g = arms[arm];
        Image img(g.width(), g.height());
        for (std::size_t i = 0; i < g.size(); ++i) img.data()[i] = static_cast<float>(g.data()[i]);
        save_image(img, prefix + "_" + name + ".pgm");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense two-frame stereo matching with gradient-gated census costs"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "key = value configuration file (flags override it)")
        ->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "worker threads (default: hardware, capped by STEREO_THREADS)")
        ->check(CLI::NonNegativeNumber);

    // match
    auto* match = app.add_subcommand("match", "compute a disparity map for a rectified pair");
    std::string left_path, right_path, dump_config, dump_gradient, dump_arms_prefix;
    match->add_option("--left", left_path, "left view (PGM/PPM)")->required()->check(CLI::ExistingFile);
    match->add_option("--right", right_path, "right view (PGM/PPM)")->required()->check(CLI::ExistingFile);
    match->add_option("--dump-config", dump_config, "write the effective configuration");
    match->add_option("--dump-gradient", dump_gradient, "prefix for gradient magnitude/theta/sensitivity PGMs");
    match->add_option("--dump-arms", dump_arms_prefix, "prefix for per-direction arm length PGMs");
    ConfigFlags match_flags;
    match_flags.attach(*match, {"report", "overlay-dir"});

    // eval
    auto* eval = app.add_subcommand("eval", "score a disparity PGM against ground truth");
    std::string pred_path, gt_path, mask_path, overlay_path, base_path;
    double scale = 0.0;
    double bad_thresh = 1.0;
    eval->add_option("--pred", pred_path, "predicted disparity PGM")->required()->check(CLI::ExistingFile);
    eval->add_option("--gt", gt_path, "ground-truth disparity PGM")->required()->check(CLI::ExistingFile);
    eval->add_option("--scale", scale, "gray levels per disparity unit (both files)")->required();
    eval->add_option("--mask", mask_path, "non-occlusion mask PGM")->check(CLI::ExistingFile);
    eval->add_option("--bad-thresh", bad_thresh, "disparity error tolerance");
    eval->add_option("--overlay", overlay_path, "write a PPM with bad pixels in red");
    eval->add_option("--base", base_path, "overlay background (default: ground truth)")->check(CLI::ExistingFile);

    // bench
    auto* bench = app.add_subcommand("bench", "evaluate both algorithms over a Middlebury-style dataset");
    std::string dataset_dir;
    bool require_all = false;
    bench->add_option("--dataset", dataset_dir, "directory with <name>/{left,right,gt[,nonocc]}")->required();
    bench->add_flag("--require-all", require_all, "fail when any of the four standard pairs is missing");
    ConfigFlags bench_flags;
    bench_flags.attach(*bench, {"algo", "out", "dump-cost"});

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) set_thread_count(threads);

    try {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);

        if (*match) {
            match_flags.apply(cfg);
            cfg.validate();
            if (cfg.out.empty()) throw ParameterError("out", "an output path is required");
            const Image left = load_image(left_path);
            const Image right = load_image(right_path);
            const MatchResult r = run_match(left, right, cfg);
            save_disparity(r.disparity, cfg.gt_scale, cfg.out);
            if (!cfg.dump_cost.empty()) write_cost_volume(r.initial_cost, cfg.dump_cost);
            if (!dump_config.empty()) {
                std::ofstream f(dump_config);
                if (!f) throw IoError("cannot write " + dump_config);
                f << to_config_text(cfg);
            }
            if (!dump_gradient.empty()) {
                const GradientField g = cfg.algorithm == Algorithm::Vsi ? r.left_gradient : gradient_field(left);
                save_image(magnitude_image(g), dump_gradient + "_mag.pgm");
                save_image(theta_image(g), dump_gradient + "_theta.pgm");
                Mask m = sensitivity_mask(g, cfg.t_sens);
                Image mi(m.width(), m.height());
                for (std::size_t i = 0; i < m.size(); ++i) mi.data()[i] = m.data()[i] ? 255.0f : 0.0f;
                save_image(mi, dump_gradient + "_sensitive.pgm");
            }
            if (!dump_arms_prefix.empty()) {
                if (cfg.algorithm != Algorithm::Vsi) throw ParameterError("dump-arms", "only the vsi algorithm grows arms");
                dump_arms(r.left_arms, dump_arms_prefix);
            }
            std::fprintf(stderr, "%s %dx%d, %d disparities, %zu pixels filled\n", to_string(cfg.algorithm),
                         left.width(), left.height(), cfg.cost.max_disp,
                         static_cast<std::size_t>(std::count(r.disparity.filled.data().begin(),
                                                             r.disparity.filled.data().end(), 1)));
            print_timings(r);
            return 0;
        }

        if (*eval) {
            if (!(scale > 0.0)) throw ParameterError("scale", "must be positive");
            const GroundTruth gt = load_ground_truth(gt_path, scale);
            const auto pred_levels = load_gray_levels(pred_path);
            DisparityMap pred(pred_levels.width(), pred_levels.height());
            for (std::size_t i = 0; i < pred_levels.size(); ++i) {
                pred.disp.data()[i] = static_cast<float>(pred_levels.data()[i] / scale);
            }
            std::optional<Mask> mask;
            if (!mask_path.empty()) mask = load_mask(mask_path);
            const Mismatch m = mismatch_rate(pred, gt, mask ? &*mask : nullptr, bad_thresh);
            std::printf("evaluated,bad,percent\n%zu,%zu,%.4f\n", m.evaluated, m.bad, m.percent);
            if (!overlay_path.empty()) {
                Image base;
                if (!base_path.empty()) {
                    base = load_image(base_path);
                } else {
                    base = Image(gt.width(), gt.height());
                    for (std::size_t i = 0; i < base.size(); ++i) {
                        base.data()[i] = std::min(255.0f, gt.disparity.data()[i] * static_cast<float>(scale));
                    }
                }
                save_color_image(error_overlay(pred, gt, base, bad_thresh, mask ? &*mask : nullptr), overlay_path);
            }
            return 0;
        }

        if (*bench) {
            BenchOptions options;
            options.require_all = require_all;
            // Explicit range/scale flags override the per-image defaults.
            if (bench_flags.options.at("max-disp")->count() > 0) options.max_disp = std::stoi(bench_flags.values.at("max-disp"));
            if (bench_flags.options.at("gt-scale")->count() > 0) options.scale = std::stod(bench_flags.values.at("gt-scale"));
            bench_flags.apply(cfg);
            const BenchResult r = run_bench(cfg, dataset_dir, options);
            if (cfg.report.empty()) std::fputs(r.report.to_csv().c_str(), stdout);
            for (const auto& e : r.report.averages) {
                std::fprintf(stderr, "%-7s noise %5g%%  average mismatch %7.3f%%\n", e.algorithm.c_str(), e.noise,
                             e.percent);
            }
            for (const auto& e : r.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
            return r.ok() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
