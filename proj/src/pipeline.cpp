#include "vsstereo/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vsstereo/error.hpp"

namespace vsstereo {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
std::string fmt_num(T v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

template <typename T>
T parse_num(const std::string& key, const std::string& value) {
    T v{};
    const std::string t = trim(value);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw ParameterError(key, "cannot parse \"" + value + "\" as a number");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string t = trim(value);
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    throw ParameterError(key, "expected true/false, got \"" + value + "\"");
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_num(v[i]);
    }
    return s;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_num<double>(key, item));
    }
    return out;
}

struct Field {
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
};

template <typename T, typename Fn>
Field num_field(Fn member) {
    return {[member](const PipelineConfig& c) {
                PipelineConfig copy = c;
                return fmt_num(member(copy));
            },
            [member](PipelineConfig& c, const std::string& k, const std::string& v) { member(c) = parse_num<T>(k, v); }};
}

template <typename Fn>
Field bool_field(Fn member) {
    return {[member](const PipelineConfig& c) {
                PipelineConfig copy = c;
                return std::string(member(copy) ? "true" : "false");
            },
            [member](PipelineConfig& c, const std::string& k, const std::string& v) { member(c) = parse_bool(k, v); }};
}

template <typename Fn>
Field str_field(Fn member) {
    return {[member](const PipelineConfig& c) {
                PipelineConfig copy = c;
                return member(copy);
            },
            [member](PipelineConfig& c, const std::string&, const std::string& v) { member(c) = trim(v); }};
}

// Ordered so that dumps are stable.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"algo",
         {[](const PipelineConfig& c) { return std::string(to_string(c.algorithm)); },
          [](PipelineConfig& c, const std::string&, const std::string& v) { c.algorithm = parse_algorithm(trim(v)); }}},
        {"max-disp", num_field<int>([](PipelineConfig& c) -> int& { return c.cost.max_disp; })},
        {"census-radius", num_field<int>([](PipelineConfig& c) -> int& { return c.cost.census_radius; })},
        {"lambda-s", num_field<float>([](PipelineConfig& c) -> float& { return c.cost.lambda_s; })},
        {"lambda-g", num_field<float>([](PipelineConfig& c) -> float& { return c.cost.lambda_g; })},
        {"gate-t", num_field<float>([](PipelineConfig& c) -> float& { return c.cost.gate_t; })},
        {"penalty", num_field<float>([](PipelineConfig& c) -> float& { return c.cost.penalty; })},
        {"l1", num_field<int>([](PipelineConfig& c) -> int& { return c.cross.l1; })},
        {"l2", num_field<int>([](PipelineConfig& c) -> int& { return c.cross.l2; })},
        {"tau1", num_field<float>([](PipelineConfig& c) -> float& { return c.cross.tau1; })},
        {"tau2", num_field<float>([](PipelineConfig& c) -> float& { return c.cross.tau2; })},
        {"tau3", num_field<float>([](PipelineConfig& c) -> float& { return c.cross.tau3; })},
        {"alpha", num_field<float>([](PipelineConfig& c) -> float& { return c.cross.alpha; })},
        {"modulation",
         {[](const PipelineConfig& c) {
              return std::string(c.cross.modulation == Modulation::Relax ? "relax" : "tighten");
          },
          [](PipelineConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "relax") c.cross.modulation = Modulation::Relax;
              else if (t == "tighten") c.cross.modulation = Modulation::Tighten;
              else throw ParameterError(k, "expected relax or tighten");
          }}},
        {"kernel",
         {[](const PipelineConfig& c) { return std::string(c.kernels == KernelFamily::Sobel ? "sobel" : "prewitt"); },
          [](PipelineConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "sobel") c.kernels = KernelFamily::Sobel;
              else if (t == "prewitt") c.kernels = KernelFamily::Prewitt;
              else throw ParameterError(k, "expected sobel or prewitt");
          }}},
        {"magnitude",
         {[](const PipelineConfig& c) {
              return std::string(c.magnitude == MagnitudeMode::Euclidean ? "euclidean" : "abs-sum");
          },
          [](PipelineConfig& c, const std::string& k, const std::string& v) {
              const std::string t = trim(v);
              if (t == "euclidean") c.magnitude = MagnitudeMode::Euclidean;
              else if (t == "abs-sum") c.magnitude = MagnitudeMode::AbsoluteSum;
              else throw ParameterError(k, "expected euclidean or abs-sum");
          }}},
        {"t-sens", num_field<float>([](PipelineConfig& c) -> float& { return c.t_sens; })},
        {"agg-passes", num_field<int>([](PipelineConfig& c) -> int& { return c.agg_passes; })},
        {"box-radius", num_field<int>([](PipelineConfig& c) -> int& { return c.box_radius; })},
        {"lr-check", bool_field([](PipelineConfig& c) -> bool& { return c.lr_check; })},
        {"t-lr", num_field<double>([](PipelineConfig& c) -> double& { return c.t_lr; })},
        {"median", bool_field([](PipelineConfig& c) -> bool& { return c.median; })},
        {"gt-scale", num_field<double>([](PipelineConfig& c) -> double& { return c.gt_scale; })},
        {"bad-thresh", num_field<double>([](PipelineConfig& c) -> double& { return c.bad_thresh; })},
        {"noise",
         {[](const PipelineConfig& c) { return fmt_list(c.noise); },
          [](PipelineConfig& c, const std::string& k, const std::string& v) { c.noise = parse_list(k, v); }}},
        {"seed", num_field<std::uint64_t>([](PipelineConfig& c) -> std::uint64_t& { return c.seed; })},
        {"out", str_field([](PipelineConfig& c) -> std::string& { return c.out; })},
        {"report", str_field([](PipelineConfig& c) -> std::string& { return c.report; })},
        {"overlay-dir", str_field([](PipelineConfig& c) -> std::string& { return c.overlay_dir; })},
        {"dump-cost", str_field([](PipelineConfig& c) -> std::string& { return c.dump_cost; })},
    };
    return table;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void record(std::vector<StageTiming>* timings, const std::string& stage, Stopwatch& sw) {
    const double ms = sw.lap_ms();
    if (timings) timings->push_back({stage, ms});
}

KernelPair kernels_for(KernelFamily f) { return f == KernelFamily::Sobel ? KernelPair::sobel() : KernelPair::prewitt(); }

}  // namespace

const char* to_string(Algorithm a) { return a == Algorithm::Vsi ? "vsi" : "census"; }

Algorithm parse_algorithm(const std::string& s) {
    if (s == "vsi") return Algorithm::Vsi;
    if (s == "census") return Algorithm::Census;
    throw ParameterError("algo", "expected vsi or census, got \"" + s + "\"");
}

void PipelineConfig::validate() const {
    cost.validate();
    cross.validate();
    if (agg_passes < 1) throw ParameterError("agg-passes", "must be at least 1");
    if (box_radius < 0) throw ParameterError("box-radius", "must be nonnegative");
    if (!(t_lr >= 0.0)) throw ParameterError("t-lr", "must be nonnegative");
    if (!(t_sens >= 0.0f)) throw ParameterError("t-sens", "must be nonnegative");
    if (!(gt_scale > 0.0)) throw ParameterError("gt-scale", "must be positive");
    if (!(bad_thresh > 0.0)) throw ParameterError("bad-thresh", "must be positive");
    for (double n : noise) {
        if (!(n >= 0.0)) throw ParameterError("noise", "levels must be nonnegative");
    }
}

std::string to_config_text(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& [key, field] : fields()) out += key + " = " + field.get(cfg) + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [key, field] : fields()) keys.push_back(key);
    return keys;
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [k, field] : fields()) {
        if (k == key) {
            field.set(cfg, key, value);
            return;
        }
    }
    throw ParameterError(key, "unknown configuration key");
}

PipelineConfig parse_config_text(const std::string& text, PipelineConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("line " + std::to_string(lineno), "expected key = value");
        }
        set_config_value(base, trim(t.substr(0, eq)), t.substr(eq + 1));
    }
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

Image mirror(const Image& img) {
    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) out(x, y) = img(img.width() - 1 - x, y);
    }
    return out;
}

DisparityMap match_one_way(const Image& ref, const Image& other, const PipelineConfig& cfg,
                           std::vector<StageTiming>* timings, MatchResult* artifacts) {
    Stopwatch sw;
    CostVolume aggregated;
    if (cfg.algorithm == Algorithm::Vsi) {
        const KernelPair kernels = kernels_for(cfg.kernels);
        GradientField gref = gradient_field(ref, kernels, cfg.magnitude);
        const GradientField gother = gradient_field(other, kernels, cfg.magnitude);
        record(timings, "gradient", sw);
        CostVolume cost = vsi_cost_volume(ref, other, gref, gother, cfg.cost);
        record(timings, "cost", sw);
        CrossArms arms = grow_arms(ref, gref, cfg.cross);
        record(timings, "arms", sw);
        aggregated = aggregate(cost, arms);
        for (int pass = 1; pass < cfg.agg_passes; ++pass) aggregated = aggregate(aggregated, arms);
        record(timings, "aggregate", sw);
        if (artifacts) {
            artifacts->initial_cost = std::move(cost);
            artifacts->left_gradient = std::move(gref);
            artifacts->left_arms = std::move(arms);
        }
    } else {
        CostVolume cost = census_cost_volume(ref, other, cfg.cost);
        record(timings, "cost", sw);
        aggregated = aggregate_fixed(cost, cfg.box_radius);
        record(timings, "aggregate", sw);
        if (artifacts) artifacts->initial_cost = std::move(cost);
    }
    DisparityMap dm = winner_take_all(aggregated);
    record(timings, "wta", sw);
    return dm;
}

MatchResult run_match(const Image& left, const Image& right, const PipelineConfig& cfg) {
    cfg.validate();
    if (!left.same_shape(right)) {
        throw DimensionError("left image is " + std::to_string(left.width()) + "x" + std::to_string(left.height()) +
                             ", right image is " + std::to_string(right.width()) + "x" +
                             std::to_string(right.height()));
    }
    MatchResult result;
    std::vector<StageTiming> left_t, right_t;
    result.left_raw = match_one_way(left, right, cfg, &left_t, &result);
    for (auto& t : left_t) result.timings.push_back({"left." + t.stage, t.ms});

    Stopwatch sw;
    DisparityMap dm = result.left_raw;
    if (cfg.lr_check) {
        result.right_raw = mirror(match_one_way(mirror(right), mirror(left), cfg, &right_t));
        for (auto& t : right_t) result.timings.push_back({"right." + t.stage, t.ms});
        sw.lap_ms();
        dm = left_right_check(result.left_raw, result.right_raw, cfg.t_lr);
        record(&result.timings, "lr-check", sw);
        dm = fill_invalid(dm);
        record(&result.timings, "fill", sw);
    }
    if (cfg.median) {
        dm = median_filter_3x3(dm);
        record(&result.timings, "median", sw);
    }
    result.disparity = std::move(dm);
    return result;
}

}  // namespace vsstereo
