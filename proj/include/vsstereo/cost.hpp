#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsstereo/gradient.hpp"
#include "vsstereo/grid.hpp"

namespace vsstereo {

/// Matching costs for every pixel and candidate disparity, stored H x W x D
/// with disparity varying fastest.
class CostVolume {
public:
    CostVolume() = default;
    CostVolume(int width, int height, int disp_count, float fill = 0.0f)
        : width_(width), height_(height), disp_count_(disp_count),
          cost_(static_cast<std::size_t>(width) * height * disp_count, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int disp_count() const { return disp_count_; }

    float& operator()(int x, int y, int d) { return cost_[index(x, y, d)]; }
    float operator()(int x, int y, int d) const { return cost_[index(x, y, d)]; }

    /// Contiguous costs of pixel (x, y) over all disparities.
    float* pixel(int x, int y) { return cost_.data() + index(x, y, 0); }
    const float* pixel(int x, int y) const { return cost_.data() + index(x, y, 0); }

    std::vector<float>& data() { return cost_; }
    const std::vector<float>& data() const { return cost_; }

    friend bool operator==(const CostVolume&, const CostVolume&) = default;

private:
    std::size_t index(int x, int y, int d) const {
        return (static_cast<std::size_t>(y) * width_ + x) * disp_count_ + d;
    }

    int width_ = 0;
    int height_ = 0;
    int disp_count_ = 0;
    std::vector<float> cost_;
};

struct CostParams {
    int census_radius = 2;
    int max_disp = 64;
    float lambda_s = 8.0f;
    float lambda_g = 25.0f;
    float gate_t = 50.0f;
    float penalty = 2.5f;

    /// Throws ParameterError naming the first violated field.
    void validate() const;

    friend bool operator==(const CostParams&, const CostParams&) = default;
};

/// Per-pixel census signatures. Bit (bit_width - 1 - i) holds the i-th
/// neighbour in raster order (center skipped), so printing MSB first gives
/// the raster-order string.
struct CensusImage {
    Grid<std::uint64_t> bits;
    int bit_width = 0;

    std::string to_string(int x, int y) const;
};

/// bit = 1 iff neighbour < center, clamp-to-edge. Radius 1..3 (8..48 bits).
CensusImage census_transform(const Image& img, int radius);

/// C_s(p, d) = popcount(left(x, y) ^ right(x - d, y)); bit_width when x - d < 0.
CostVolume hamming_cost(const CensusImage& left, const CensusImage& right, int max_disp);

/// 1 - exp(-c / lambda).
double map_cost(double c, double lambda);

/// Gradient-gated census cost: penalty where |G_L(p) - G_R(p - d)| > gate_t or
/// x - d < 0, otherwise map_cost(C_s, lambda_s) + map_cost(C_g, lambda_g).
CostVolume vsi_cost_volume(const Image& left, const Image& right, const GradientField& left_grad,
                           const GradientField& right_grad, const CostParams& params);

/// Raw Hamming counts, the classical census baseline.
CostVolume census_cost_volume(const Image& left, const Image& right, const CostParams& params);

/// Raw dump: ASCII header "H W D\n" followed by little-endian float32 costs.
void write_cost_volume(const CostVolume& vol, const std::filesystem::path& path);
CostVolume read_cost_volume(const std::filesystem::path& path);

}  // namespace vsstereo
