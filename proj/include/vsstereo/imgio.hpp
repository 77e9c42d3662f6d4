#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "vsstereo/grid.hpp"

namespace vsstereo {

/// Decoded ground-truth disparity. `unknown` is set exactly where the stored
/// gray level was 0; disparity there is 0 and must not be evaluated.
struct GroundTruth {
    Grid<float> disparity;
    Mask unknown;
    double scale = 1.0;

    int width() const { return disparity.width(); }
    int height() const { return disparity.height(); }
};

/// Reads P2/P5 (gray) or P3/P6 (color) Netpbm files. Color is reduced to luma
/// (0.299 R + 0.587 G + 0.114 B); sources with maxval other than 255 are
/// rescaled to [0, 255]. Throws FormatError or IoError.
Image load_image(const std::filesystem::path& path);

/// Same as load_image but from an in-memory buffer.
Image decode_image(std::string_view bytes);

/// Writes a binary P5 PGM, rounding half-up and clamping to [0, 255].
void save_image(const Image& img, const std::filesystem::path& path);

/// Writes a binary P6 PPM.
void save_color_image(const ColorImage& img, const std::filesystem::path& path);

/// Reads the raw stored gray levels (no rescaling), for ground truth and masks.
Grid<std::uint16_t> load_gray_levels(const std::filesystem::path& path);

/// disparity = stored gray / scale, unknown where stored gray == 0.
GroundTruth load_ground_truth(const std::filesystem::path& path, double scale);
GroundTruth ground_truth_from_levels(const Grid<std::uint16_t>& levels, double scale);

/// Non-occlusion mask: true where the stored level is in the upper half of
/// the value range (255 in Middlebury nonocc images).
Mask load_mask(const std::filesystem::path& path);

/// Zero-mean Gaussian noise with sigma = level% of 255, clamped to [0, 255].
/// Deterministic for a given seed; identity when level == 0.
Image add_gaussian_noise(const Image& img, double level_percent, std::uint64_t seed);

}  // namespace vsstereo
