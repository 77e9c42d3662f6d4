#include "vsstereo/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "vsstereo/error.hpp"
#include "vsstereo/parallel.hpp"

namespace vsstereo {

void CrossParams::validate() const {
    if (!(tau1 > 0.0f)) throw ParameterError("tau1", "must be positive");
    if (!(tau2 > 0.0f)) throw ParameterError("tau2", "must be positive");
    if (!(tau3 > 0.0f)) throw ParameterError("tau3", "must be positive");
    if (!(tau2 <= tau1)) throw ParameterError("tau2", "must not exceed tau1");
    if (!(tau3 < tau2)) throw ParameterError("tau3", "must be below tau2");
    if (l1 < 1) throw ParameterError("l1", "must be at least 1");
    if (!(l1 < l2)) throw ParameterError("l2", "must exceed l1");
    if (l2 > 65535) throw ParameterError("l2", "must fit in 16 bits");
    if (!(alpha >= 0.0f)) throw ParameterError("alpha", "must be nonnegative");
}

const Grid<std::uint16_t>& CrossArms::operator[](Arm a) const {
    switch (a) {
        case Arm::Left: return left;
        case Arm::Right: return right;
        case Arm::Up: return up;
        case Arm::Down: return down;
    }
    return left;
}

Grid<std::uint16_t>& CrossArms::operator[](Arm a) {
    return const_cast<Grid<std::uint16_t>&>(std::as_const(*this)[a]);
}

double arm_direction(Arm a) {
    constexpr double pi = std::numbers::pi;
    switch (a) {
        case Arm::Right: return 0.0;
        case Arm::Down: return pi / 2;
        case Arm::Left: return pi;
        case Arm::Up: return -pi / 2;
    }
    return 0.0;
}

double modulated_threshold(double tau, double arm_dir, double theta, double alpha, Modulation mode) {
    const double factor = 1.0 + alpha * std::abs(std::cos(arm_dir - theta));
    return mode == Modulation::Relax ? tau * factor : tau / factor;
}

CrossArms grow_arms(const Image& img, const GradientField& grad, const CrossParams& params) {
    params.validate();
    if (!grad.theta.same_shape(img)) throw DimensionError("grow_arms: gradient field does not match the image");
    const int w = img.width();
    const int h = img.height();
    CrossArms arms{Grid<std::uint16_t>(w, h), Grid<std::uint16_t>(w, h), Grid<std::uint16_t>(w, h),
                   Grid<std::uint16_t>(w, h)};

    struct Step {
        Arm arm;
        int dx, dy;
    };
    constexpr Step steps[] = {{Arm::Left, -1, 0}, {Arm::Right, 1, 0}, {Arm::Up, 0, -1}, {Arm::Down, 0, 1}};

    parallel_for(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                const float ref = img(x, y);
                const double theta = grad.theta(x, y);
                for (const Step& s : steps) {
                    const double dir = arm_direction(s.arm);
                    const double near_t = modulated_threshold(params.tau1, dir, theta, params.alpha, params.modulation);
                    const double far_t = modulated_threshold(params.tau3, dir, theta, params.alpha, params.modulation);
                    int len = 0;
                    float prev = ref;
                    for (int i = 1; i < params.l2; ++i) {
                        const int px = x + i * s.dx;
                        const int py = y + i * s.dy;
                        if (px < 0 || px >= w || py < 0 || py >= h) break;
                        const float v = img(px, py);
                        const double to_ref = std::abs(v - ref);
                        if (to_ref >= (i < params.l1 ? near_t : far_t)) break;
                        if (std::abs(v - prev) >= params.tau2) break;
                        prev = v;
                        len = i;
                    }
                    arms[s.arm](x, y) = static_cast<std::uint16_t>(len);
                }
            }
        }
    });
    return arms;
}

Grid<std::int32_t> support_size(const CrossArms& arms) {
    const int w = arms.width();
    const int h = arms.height();
    Grid<std::int32_t> out(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int32_t n = 0;
            for (int qy = y - arms.up(x, y); qy <= y + arms.down(x, y); ++qy) {
                n += arms.left(x, qy) + arms.right(x, qy) + 1;
            }
            out(x, y) = n;
        }
    }
    return out;
}

CostVolume aggregate(const CostVolume& vol, const CrossArms& arms) {
    const int w = vol.width();
    const int h = vol.height();
    const int dc = vol.disp_count();
    if (arms.width() != w || arms.height() != h) {
        throw DimensionError("aggregate: cost volume and arms differ in size");
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x - arms.left(x, y) < 0 || x + arms.right(x, y) >= w || y - arms.up(x, y) < 0 ||
                y + arms.down(x, y) >= h) {
                throw DimensionError("aggregate: arm crosses the image border");
            }
        }
    }

    // Horizontal pass: per-pixel sums over the horizontal segment.
    std::vector<double> hsum(vol.data().size());
    parallel_for(h, [&](int y0, int y1) {
        std::vector<double> prefix(static_cast<std::size_t>(w + 1) * dc);
        for (int y = y0; y < y1; ++y) {
            std::fill(prefix.begin(), prefix.begin() + dc, 0.0);
            for (int x = 0; x < w; ++x) {
                const float* c = vol.pixel(x, y);
                const double* p0 = prefix.data() + static_cast<std::size_t>(x) * dc;
                double* p1 = prefix.data() + static_cast<std::size_t>(x + 1) * dc;
                for (int d = 0; d < dc; ++d) p1[d] = p0[d] + c[d];
            }
            for (int x = 0; x < w; ++x) {
                const double* hi = prefix.data() + static_cast<std::size_t>(x + arms.right(x, y) + 1) * dc;
                const double* lo = prefix.data() + static_cast<std::size_t>(x - arms.left(x, y)) * dc;
                double* out = hsum.data() + (static_cast<std::size_t>(y) * w + x) * dc;
                for (int d = 0; d < dc; ++d) out[d] = hi[d] - lo[d];
            }
        }
    });

    // Vertical pass over the horizontal sums, then normalize by region size.
    CostVolume out(w, h, dc);
    parallel_for(w, [&](int x0, int x1) {
        std::vector<double> prefix(static_cast<std::size_t>(h + 1) * dc);
        std::vector<std::int64_t> count_prefix(static_cast<std::size_t>(h + 1));
        for (int x = x0; x < x1; ++x) {
            std::fill(prefix.begin(), prefix.begin() + dc, 0.0);
            count_prefix[0] = 0;
            for (int y = 0; y < h; ++y) {
                const double* s = hsum.data() + (static_cast<std::size_t>(y) * w + x) * dc;
                const double* p0 = prefix.data() + static_cast<std::size_t>(y) * dc;
                double* p1 = prefix.data() + static_cast<std::size_t>(y + 1) * dc;
                for (int d = 0; d < dc; ++d) p1[d] = p0[d] + s[d];
                count_prefix[static_cast<std::size_t>(y + 1)] =
                    count_prefix[static_cast<std::size_t>(y)] + arms.left(x, y) + arms.right(x, y) + 1;
            }
            for (int y = 0; y < h; ++y) {
                const int top = y - arms.up(x, y);
                const int bottom = y + arms.down(x, y) + 1;
                const double n = static_cast<double>(count_prefix[static_cast<std::size_t>(bottom)] -
                                                     count_prefix[static_cast<std::size_t>(top)]);
                const double* hi = prefix.data() + static_cast<std::size_t>(bottom) * dc;
                const double* lo = prefix.data() + static_cast<std::size_t>(top) * dc;
                float* o = out.pixel(x, y);
                for (int d = 0; d < dc; ++d) o[d] = static_cast<float>((hi[d] - lo[d]) / n);
            }
        }
    });
    return out;
}

CostVolume aggregate_fixed(const CostVolume& vol, int radius) {
    if (radius < 0) throw ParameterError("box-radius", "must be nonnegative");
    if (radius == 0) return vol;
    const int w = vol.width();
    const int h = vol.height();
    const int dc = vol.disp_count();
    const double norm = 1.0 / ((2.0 * radius + 1) * (2.0 * radius + 1));

    // Separable: horizontal window sums, then vertical, both clamp-to-edge.
    std::vector<double> hsum(vol.data().size(), 0.0);
    parallel_for(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double* o = hsum.data() + (static_cast<std::size_t>(y) * w + x) * dc;
                for (int k = -radius; k <= radius; ++k) {
                    const float* c = vol.pixel(std::clamp(x + k, 0, w - 1), y);
                    for (int d = 0; d < dc; ++d) o[d] += c[d];
                }
            }
        }
    });
    CostVolume out(w, h, dc);
    parallel_for(h, [&](int y0, int y1) {
        std::vector<double> acc(static_cast<std::size_t>(dc));
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int k = -radius; k <= radius; ++k) {
                    const double* s = hsum.data() + (static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x) * dc;
                    for (int d = 0; d < dc; ++d) acc[static_cast<std::size_t>(d)] += s[d];
                }
                float* o = out.pixel(x, y);
                for (int d = 0; d < dc; ++d) o[d] = static_cast<float>(acc[static_cast<std::size_t>(d)] * norm);
            }
        }
    });
    return out;
}

}  // namespace vsstereo
