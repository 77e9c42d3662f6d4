#pragma once

#include <cstdint>
#include <filesystem>

#include "vsstereo/cost.hpp"
#include "vsstereo/grid.hpp"

namespace vsstereo {

struct DisparityMap {
    Grid<float> disp;
    Mask valid;
    Mask filled;  // set by fill_invalid on pixels it repaired

    DisparityMap() = default;
    DisparityMap(int width, int height)
        : disp(width, height, 0.0f), valid(width, height, 1), filled(width, height, 0) {}

    int width() const { return disp.width(); }
    int height() const { return disp.height(); }
    std::size_t invalid_count() const;

    friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

/// Per-pixel argmin over d; ties resolve to the smallest d.
DisparityMap winner_take_all(const CostVolume& vol);

/// Keeps (x, y) valid iff x - dl >= 0 and |dl - dr(x - dl, y)| <= tolerance.
/// Disparities are rounded to the nearest pixel to index the right map.
DisparityMap left_right_check(const DisparityMap& left, const DisparityMap& right, double tolerance);

/// Replaces each invalid pixel by the smaller of the nearest valid disparities
/// to its left and right on the same row (either side alone if only one
/// exists, 0 if the row has none). Repaired pixels become valid and filled.
DisparityMap fill_invalid(const DisparityMap& dm);

/// 3x3 clamp-to-edge median of the disparities; flags are kept.
DisparityMap median_filter_3x3(const DisparityMap& dm);

/// Horizontal mirror of every plane.
DisparityMap mirror(const DisparityMap& dm);

/// Stored gray = round(disp * scale), clamped to [0, 255].
Image disparity_to_image(const DisparityMap& dm, double scale);
void save_disparity(const DisparityMap& dm, double scale, const std::filesystem::path& path);

}  // namespace vsstereo
