#pragma once

#include <cstdint>

#include "vsstereo/cost.hpp"
#include "vsstereo/gradient.hpp"
#include "vsstereo/grid.hpp"

namespace vsstereo {

/// How the direction factor adjusts a gray threshold along an arm.
enum class Modulation {
    Relax,    // tau * (1 + alpha |cos(arm - theta)|)
    Tighten,  // tau / (1 + alpha |cos(arm - theta)|)
};

struct CrossParams {
    int l1 = 17;   // near-zone length
    int l2 = 34;   // hard arm cap (exclusive)
    float tau1 = 20.0f;
    float tau2 = 20.0f;
    float tau3 = 6.0f;
    float alpha = 0.5f;
    Modulation modulation = Modulation::Relax;

    /// tau3 < tau2 <= tau1, l1 < l2, thresholds > 0, alpha >= 0.
    void validate() const;

    friend bool operator==(const CrossParams&, const CrossParams&) = default;
};

enum class Arm { Left = 0, Right = 1, Up = 2, Down = 3 };

/// Arm lengths per pixel, in pixels, excluding the reference pixel.
struct CrossArms {
    Grid<std::uint16_t> left;
    Grid<std::uint16_t> right;
    Grid<std::uint16_t> up;
    Grid<std::uint16_t> down;

    int width() const { return left.width(); }
    int height() const { return left.height(); }
    const Grid<std::uint16_t>& operator[](Arm a) const;
    Grid<std::uint16_t>& operator[](Arm a);
};

/// Direction of an arm in the gradient's angle convention (y grows downward).
double arm_direction(Arm a);

double modulated_threshold(double tau, double arm_dir, double theta, double alpha,
                           Modulation mode = Modulation::Relax);

/// Grows the four arms of every pixel. A step to distance i is accepted while
/// i < l2, the gray difference to the reference stays below the modulated
/// tau1 (i < l1) or tau3 (i >= l1), the difference to the previous pixel on
/// the arm stays below tau2, and the step is inside the image.
CrossArms grow_arms(const Image& img, const GradientField& grad, const CrossParams& params);

/// Mean cost over each pixel's support region: the union of the horizontal
/// segments of every pixel on its vertical segment.
CostVolume aggregate(const CostVolume& vol, const CrossArms& arms);

/// Number of pixels in each support region.
Grid<std::int32_t> support_size(const CrossArms& arms);

/// (2r+1)^2 clamp-to-edge box mean over each disparity slice.
CostVolume aggregate_fixed(const CostVolume& vol, int radius);

}  // namespace vsstereo
