#pragma once

#include <array>

#include "vsstereo/grid.hpp"

namespace vsstereo {

/// 3x3 template, row-major, applied correlation-style (no flip).
struct Kernel {
    std::array<float, 9> k{};

    float operator()(int row, int col) const { return k[static_cast<std::size_t>(row * 3 + col)]; }
    Kernel transposed() const;

    static Kernel identity();
    static Kernel sobel_x();
    static Kernel sobel_y();
    static Kernel prewitt_x();
    static Kernel prewitt_y();
};

struct KernelPair {
    Kernel horizontal = Kernel::sobel_x();
    Kernel vertical = Kernel::sobel_y();

    static KernelPair sobel() { return {Kernel::sobel_x(), Kernel::sobel_y()}; }
    static KernelPair prewitt() { return {Kernel::prewitt_x(), Kernel::prewitt_y()}; }
};

enum class MagnitudeMode {
    Euclidean,    // sqrt(gx^2 + gy^2)
    AbsoluteSum,  // |gx| + |gy|
};

/// Brightness differences and the derived visual-sensitivity quantities.
/// theta is atan2(gy, gx) in (-pi, pi], 0 where gx = gy = 0. Because image
/// rows grow downward, theta = pi/2 points toward increasing y.
struct GradientField {
    Grid<float> gx;
    Grid<float> gy;
    Grid<float> mag;
    Grid<float> theta;

    int width() const { return gx.width(); }
    int height() const { return gx.height(); }
};

/// Correlates `img` with `k`, replicating edge pixels. Requires at least 3x3.
Grid<float> convolve(const Grid<float>& img, const Kernel& k);

GradientField gradient_field(const Image& img, const KernelPair& kernels = KernelPair::sobel(),
                             MagnitudeMode mode = MagnitudeMode::Euclidean);

/// mask(p) = mag(p) >= threshold.
Mask sensitivity_mask(const GradientField& field, float threshold);

/// Debug renderings: magnitude clamped to [0, 255]; theta mapped linearly
/// from (-pi, pi] onto [0, 255].
Image magnitude_image(const GradientField& field);
Image theta_image(const GradientField& field);

}  // namespace vsstereo
