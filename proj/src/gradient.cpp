#include "vsstereo/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vsstereo/error.hpp"
#include "vsstereo/parallel.hpp"

namespace vsstereo {

Kernel Kernel::transposed() const {
    Kernel t;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) t.k[static_cast<std::size_t>(c * 3 + r)] = (*this)(r, c);
    }
    return t;
}

Kernel Kernel::identity() { return {{0, 0, 0, 0, 1, 0, 0, 0, 0}}; }
Kernel Kernel::sobel_x() { return {{-1, 0, 1, -2, 0, 2, -1, 0, 1}}; }
Kernel Kernel::sobel_y() { return sobel_x().transposed(); }
Kernel Kernel::prewitt_x() { return {{-1, 0, 1, -1, 0, 1, -1, 0, 1}}; }
Kernel Kernel::prewitt_y() { return prewitt_x().transposed(); }

Grid<float> convolve(const Grid<float>& img, const Kernel& k) {
    if (img.width() < 3 || img.height() < 3) {
        throw DimensionError("convolve: image " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()) + " is smaller than the 3x3 kernel");
    }
    Grid<float> out(img.width(), img.height());
    parallel_for(img.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < img.width(); ++x) {
                float acc = 0.0f;
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 3; ++c) acc += k(r, c) * img.clamped(x + c - 1, y + r - 1);
                }
                out(x, y) = acc;
            }
        }
    });
    return out;
}

GradientField gradient_field(const Image& img, const KernelPair& kernels, MagnitudeMode mode) {
    GradientField f;
    f.gx = convolve(img, kernels.horizontal);
    f.gy = convolve(img, kernels.vertical);
    f.mag = Grid<float>(img.width(), img.height());
    f.theta = Grid<float>(img.width(), img.height());
    for (std::size_t i = 0; i < f.gx.size(); ++i) {
        const float gx = f.gx.data()[i];
        const float gy = f.gy.data()[i];
        f.mag.data()[i] = mode == MagnitudeMode::Euclidean ? std::hypot(gx, gy) : std::abs(gx) + std::abs(gy);
        float t = (gx == 0.0f && gy == 0.0f) ? 0.0f : std::atan2(gy, gx);
        // atan2 may return -pi for (negative, -0); fold onto the half-open range.
        if (t <= -std::numbers::pi_v<float>) t = std::numbers::pi_v<float>;
        f.theta.data()[i] = t;
    }
    return f;
}

Mask sensitivity_mask(const GradientField& field, float threshold) {
    Mask m(field.width(), field.height(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = field.mag.data()[i] >= threshold ? 1 : 0;
    return m;
}

Image magnitude_image(const GradientField& field) {
    Image out(field.width(), field.height());
    std::transform(field.mag.data().begin(), field.mag.data().end(), out.data().begin(),
                   [](float m) { return std::min(m, 255.0f); });
    return out;
}

Image theta_image(const GradientField& field) {
    constexpr float pi = std::numbers::pi_v<float>;
    Image out(field.width(), field.height());
    std::transform(field.theta.data().begin(), field.theta.data().end(), out.data().begin(),
                   [](float t) { return std::clamp((t + pi) / (2.0f * pi) * 255.0f, 0.0f, 255.0f); });
    return out;
}

}  // namespace vsstereo
