#include "vsstereo/cost.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vsstereo/error.hpp"
#include "vsstereo/parallel.hpp"

namespace vsstereo {

namespace {

void check_same_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": left is " + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + ", right is " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()));
    }
}

}  // namespace

void CostParams::validate() const {
    if (census_radius < 1 || census_radius > 3) throw ParameterError("census-radius", "must be in [1, 3]");
    if (max_disp < 1) throw ParameterError("max-disp", "must be at least 1");
    if (!(lambda_s > 0.0f)) throw ParameterError("lambda-s", "must be positive");
    if (!(lambda_g > 0.0f)) throw ParameterError("lambda-g", "must be positive");
    if (!(gate_t >= 0.0f)) throw ParameterError("gate-t", "must be nonnegative");
    if (!(penalty >= 2.0f)) throw ParameterError("penalty", "must be at least 2");
}

std::string CensusImage::to_string(int x, int y) const {
    std::string s(static_cast<std::size_t>(bit_width), '0');
    const std::uint64_t v = bits(x, y);
    for (int i = 0; i < bit_width; ++i) {
        if ((v >> (bit_width - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

CensusImage census_transform(const Image& img, int radius) {
    if (radius < 1 || radius > 3) throw ParameterError("census-radius", "must be in [1, 3]");
    const int window = 2 * radius + 1;
    if (img.width() < window || img.height() < window) {
        throw DimensionError("census window " + std::to_string(window) + "x" + std::to_string(window) +
                             " is larger than the " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()) + " image");
    }
    CensusImage out;
    out.bit_width = window * window - 1;
    out.bits = Grid<std::uint64_t>(img.width(), img.height(), 0);
    parallel_for(img.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const float center = img(x, y);
                std::uint64_t code = 0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        code = (code << 1) | (img.clamped(x + dx, y + dy) < center ? 1u : 0u);
                    }
                }
                out.bits(x, y) = code;
            }
        }
    });
    return out;
}

CostVolume hamming_cost(const CensusImage& left, const CensusImage& right, int max_disp) {
    if (max_disp < 1) throw ParameterError("max-disp", "must be at least 1");
    if (!left.bits.same_shape(right.bits) || left.bit_width != right.bit_width) {
        throw DimensionError("hamming_cost: census images differ in shape or bit width");
    }
    const int w = left.bits.width();
    CostVolume vol(w, left.bits.height(), max_disp);
    const auto worst = static_cast<float>(left.bit_width);
    parallel_for(vol.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                float* c = vol.pixel(x, y);
                const std::uint64_t l = left.bits(x, y);
                for (int d = 0; d < max_disp; ++d) {
                    c[d] = x - d < 0 ? worst : static_cast<float>(std::popcount(l ^ right.bits(x - d, y)));
                }
            }
        }
    });
    return vol;
}

double map_cost(double c, double lambda) { return 1.0 - std::exp(-c / lambda); }

CostVolume vsi_cost_volume(const Image& left, const Image& right, const GradientField& left_grad,
                           const GradientField& right_grad, const CostParams& params) {
    params.validate();
    check_same_shape(left, right, "vsi_cost_volume");
    if (!left_grad.mag.same_shape(left) || !right_grad.mag.same_shape(right)) {
        throw DimensionError("vsi_cost_volume: gradient fields do not match the images");
    }
    const CensusImage cl = census_transform(left, params.census_radius);
    const CensusImage cr = census_transform(right, params.census_radius);

    // Hamming distances are small integers, so f_s is tabulated.
    std::array<float, 65> fs{};
    for (int c = 0; c <= cl.bit_width; ++c) fs[static_cast<std::size_t>(c)] = static_cast<float>(map_cost(c, params.lambda_s));

    const int w = left.width();
    const int dcount = params.max_disp;
    CostVolume vol(w, left.height(), dcount);
    parallel_for(vol.height(), [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                float* c = vol.pixel(x, y);
                const std::uint64_t l = cl.bits(x, y);
                const float gl = left_grad.mag(x, y);
                for (int d = 0; d < dcount; ++d) {
                    if (x - d < 0) {
                        c[d] = params.penalty;
                        continue;
                    }
                    const float cg = std::abs(gl - right_grad.mag(x - d, y));
                    if (cg > params.gate_t) {
                        c[d] = params.penalty;
                        continue;
                    }
                    const int cs = std::popcount(l ^ cr.bits(x - d, y));
                    c[d] = fs[static_cast<std::size_t>(cs)] + static_cast<float>(map_cost(cg, params.lambda_g));
                }
            }
        }
    });
    return vol;
}

CostVolume census_cost_volume(const Image& left, const Image& right, const CostParams& params) {
    params.validate();
    check_same_shape(left, right, "census_cost_volume");
    return hamming_cost(census_transform(left, params.census_radius), census_transform(right, params.census_radius),
                        params.max_disp);
}

void write_cost_volume(const CostVolume& vol, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << vol.height() << ' ' << vol.width() << ' ' << vol.disp_count() << '\n';
    std::vector<unsigned char> buf(vol.data().size() * 4);
    for (std::size_t i = 0; i < vol.data().size(); ++i) {
        const auto bits = std::bit_cast<std::uint32_t>(vol.data()[i]);
        for (int b = 0; b < 4; ++b) buf[i * 4 + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw IoError("write failed for " + path.string());
}

CostVolume read_cost_volume(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::string header;
    std::getline(f, header);
    std::istringstream hs(header);
    int h = 0, w = 0, d = 0;
    if (!(hs >> h >> w >> d) || h <= 0 || w <= 0 || d <= 0) {
        throw FormatError(FormatError::Kind::MalformedHeader, 0, "expected \"H W D\"");
    }
    CostVolume vol(w, h, d);
    std::vector<unsigned char> buf(vol.data().size() * 4);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (f.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw FormatError(FormatError::Kind::TruncatedPayload, header.size() + 1 + static_cast<std::size_t>(f.gcount()),
                          "cost payload too short");
    }
    for (std::size_t i = 0; i < vol.data().size(); ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(buf[i * 4 + b]) << (8 * b);
        vol.data()[i] = std::bit_cast<float>(bits);
    }
    return vol;
}

}  // namespace vsstereo
