#include "vsstereo/disparity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vsstereo/error.hpp"
#include "vsstereo/imgio.hpp"
#include "vsstereo/parallel.hpp"

namespace vsstereo {

std::size_t DisparityMap::invalid_count() const {
    return static_cast<std::size_t>(std::count(valid.data().begin(), valid.data().end(), 0));
}

DisparityMap winner_take_all(const CostVolume& vol) {
    DisparityMap dm(vol.width(), vol.height());
    const int dc = vol.disp_count();
    parallel_for(vol.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < vol.width(); ++x) {
                const float* c = vol.pixel(x, y);
                int best = 0;
                for (int d = 1; d < dc; ++d) {
                    if (c[d] < c[best]) best = d;
                }
                dm.disp(x, y) = static_cast<float>(best);
            }
        }
    });
    return dm;
}

DisparityMap left_right_check(const DisparityMap& left, const DisparityMap& right, double tolerance) {
    if (!left.disp.same_shape(right.disp)) throw DimensionError("left_right_check: maps differ in size");
    if (!(tolerance >= 0.0)) throw ParameterError("t-lr", "must be nonnegative");
    DisparityMap out = left;
    for (int y = 0; y < left.height(); ++y) {
        for (int x = 0; x < left.width(); ++x) {
            const float dl = left.disp(x, y);
            const long xr = std::lround(x - static_cast<double>(dl));
            const bool ok = xr >= 0 && xr < left.width() &&
                            std::abs(static_cast<double>(dl) - right.disp(static_cast<int>(xr), y)) <= tolerance;
            if (!ok) out.valid(x, y) = 0;
        }
    }
    return out;
}

DisparityMap fill_invalid(const DisparityMap& dm) {
    DisparityMap out = dm;
    const int w = dm.width();
    constexpr float none = std::numeric_limits<float>::infinity();
    std::vector<float> from_left(static_cast<std::size_t>(w));
    for (int y = 0; y < dm.height(); ++y) {
        float last = none;
        for (int x = 0; x < w; ++x) {
            if (dm.valid(x, y)) last = dm.disp(x, y);
            from_left[static_cast<std::size_t>(x)] = last;
        }
        float next = none;
        for (int x = w - 1; x >= 0; --x) {
            if (dm.valid(x, y)) {
                next = dm.disp(x, y);
                continue;
            }
            float v = std::min(from_left[static_cast<std::size_t>(x)], next);
            if (v == none) v = 0.0f;
            out.disp(x, y) = v;
            out.valid(x, y) = 1;
            out.filled(x, y) = 1;
        }
    }
    return out;
}

DisparityMap median_filter_3x3(const DisparityMap& dm) {
    DisparityMap out = dm;
    parallel_for(dm.height(), [&](int y0, int y1) {
        std::array<float, 9> window{};
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < dm.width(); ++x) {
                std::size_t n = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) window[n++] = dm.disp.clamped(x + dx, y + dy);
                }
                std::nth_element(window.begin(), window.begin() + 4, window.end());
                out.disp(x, y) = window[4];
            }
        }
    });
    return out;
}

DisparityMap mirror(const DisparityMap& dm) {
    DisparityMap out = dm;
    const int w = dm.width();
    for (int y = 0; y < dm.height(); ++y) {
        for (int x = 0; x < w; ++x) {
            out.disp(x, y) = dm.disp(w - 1 - x, y);
            out.valid(x, y) = dm.valid(w - 1 - x, y);
            out.filled(x, y) = dm.filled(w - 1 - x, y);
        }
    }
    return out;
}

Image disparity_to_image(const DisparityMap& dm, double scale) {
    if (!(scale > 0.0)) throw ParameterError("gt-scale", "must be positive");
    Image img(dm.width(), dm.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = std::floor(dm.disp.data()[i] * scale + 0.5);
        img.data()[i] = static_cast<float>(std::clamp(v, 0.0, 255.0));
    }
    return img;
}

void save_disparity(const DisparityMap& dm, double scale, const std::filesystem::path& path) {
    save_image(disparity_to_image(dm, scale), path);
}

}  // namespace vsstereo
