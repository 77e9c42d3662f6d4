#include "vsstereo/imgio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "vsstereo/error.hpp"

namespace vsstereo {

namespace {

struct Header {
    char magic = 0;  // '2', '3', '5' or '6'
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t payload = 0;  // byte offset of the first sample
};

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

    // Skips whitespace and '#' comments (which run to end of line).
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            const auto c = static_cast<unsigned char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Reads an unsigned decimal field; `what` names it in the error.
    long read_uint(FormatError::Kind on_eof, const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        if (at_end()) {
            throw FormatError(on_eof, start, std::string("missing ") + what);
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw FormatError(FormatError::Kind::MalformedHeader, start, std::string(what) + " too large");
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw FormatError(on_eof == FormatError::Kind::TruncatedPayload ? FormatError::Kind::MalformedHeader
                                                                            : on_eof,
                              start, std::string("expected ") + what);
        }
        return value;
    }

    unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }
    void advance(std::size_t n) { pos_ += n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

Header parse_header(Reader& in, std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw FormatError(FormatError::Kind::UnsupportedMagic, 0, "not a Netpbm file");
    }
    Header h;
    h.magic = bytes[1];
    if (h.magic != '2' && h.magic != '3' && h.magic != '5' && h.magic != '6') {
        throw FormatError(FormatError::Kind::UnsupportedMagic, 0,
                          std::string("P") + h.magic + " is not P2/P3/P5/P6");
    }
    in.advance(2);
    const auto hdr = FormatError::Kind::MalformedHeader;
    h.width = static_cast<int>(in.read_uint(hdr, "width"));
    h.height = static_cast<int>(in.read_uint(hdr, "height"));
    const std::size_t maxval_pos = in.pos();
    h.maxval = static_cast<int>(in.read_uint(hdr, "maxval"));
    if (h.width <= 0 || h.height <= 0) {
        throw FormatError(hdr, maxval_pos, "zero image dimension");
    }
    if (h.maxval <= 0 || h.maxval > 65535) {
        throw FormatError(hdr, maxval_pos, "maxval must be in [1, 65535]");
    }
    if (h.magic == '5' || h.magic == '6') {
        // Exactly one whitespace byte separates the header from binary data.
        if (in.at_end() || !std::isspace(static_cast<unsigned char>(bytes[in.pos()]))) {
            throw FormatError(hdr, in.pos(), "missing separator before payload");
        }
        in.advance(1);
    }
    h.payload = in.pos();
    return h;
}

// Decodes samples as raw integer levels, `channels` per pixel.
std::vector<std::uint16_t> read_samples(Reader& in, const Header& h, int channels) {
    const std::size_t count = static_cast<std::size_t>(h.width) * h.height * channels;
    std::vector<std::uint16_t> samples(count);
    const bool binary = h.magic == '5' || h.magic == '6';
    if (binary) {
        const std::size_t bps = h.maxval > 255 ? 2 : 1;
        if (in.remaining() < count * bps) {
            throw FormatError(FormatError::Kind::TruncatedPayload, h.payload + in.remaining(),
                              "expected " + std::to_string(count * bps) + " payload bytes, found " +
                                  std::to_string(in.remaining()));
        }
        for (std::size_t i = 0; i < count; ++i) {
            std::uint16_t v = in.byte();
            if (bps == 2) v = static_cast<std::uint16_t>((v << 8) | in.byte());  // big-endian
            samples[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            samples[i] = static_cast<std::uint16_t>(
                in.read_uint(FormatError::Kind::TruncatedPayload, "sample"));
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (samples[i] > h.maxval) {
            throw FormatError(FormatError::Kind::MalformedHeader, h.payload,
                              "sample " + std::to_string(i) + " exceeds maxval");
        }
    }
    return samples;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& header, const std::vector<std::uint8_t>& payload) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(header.data(), static_cast<std::streamsize>(header.size()));
    f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!f) throw IoError("write failed for " + path.string());
}

std::uint8_t to_byte(float v) {
    // Round half-up, clamp.
    const double r = std::floor(static_cast<double>(v) + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace

Image decode_image(std::string_view bytes) {
    Reader in(bytes);
    const Header h = parse_header(in, bytes);
    const bool color = h.magic == '3' || h.magic == '6';
    const auto samples = read_samples(in, h, color ? 3 : 1);
    const double to_255 = 255.0 / h.maxval;

    Image img(h.width, h.height);
    auto& out = img.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        double v;
        if (color) {
            v = 0.299 * samples[3 * i] + 0.587 * samples[3 * i + 1] + 0.114 * samples[3 * i + 2];
        } else {
            v = samples[i];
        }
        out[i] = static_cast<float>(std::clamp(v * to_255, 0.0, 255.0));
    }
    return img;
}

Image load_image(const std::filesystem::path& path) {
    return decode_image(read_file(path));
}

Grid<std::uint16_t> load_gray_levels(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    Reader in(bytes);
    const Header h = parse_header(in, bytes);
    if (h.magic != '2' && h.magic != '5') {
        throw FormatError(FormatError::Kind::UnsupportedMagic, 0, "expected a gray PGM (P2/P5)");
    }
    return {h.width, h.height, read_samples(in, h, 1)};
}

void save_image(const Image& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> payload(img.size());
    std::transform(img.data().begin(), img.data().end(), payload.begin(), to_byte);
    write_file(path, "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n", payload);
}

void save_color_image(const ColorImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> payload;
    payload.reserve(img.size() * 3);
    for (const Rgb& p : img.data()) {
        payload.push_back(p.r);
        payload.push_back(p.g);
        payload.push_back(p.b);
    }
    write_file(path, "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n", payload);
}

GroundTruth ground_truth_from_levels(const Grid<std::uint16_t>& levels, double scale) {
    if (!(scale > 0.0)) throw ParameterError("scale", "must be positive");
    GroundTruth gt;
    gt.scale = scale;
    gt.disparity = Grid<float>(levels.width(), levels.height(), 0.0f);
    gt.unknown = Mask(levels.width(), levels.height(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::uint16_t v = levels.data()[i];
        if (v == 0) {
            gt.unknown.data()[i] = 1;
        } else {
            gt.disparity.data()[i] = static_cast<float>(v / scale);
        }
    }
    return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path, double scale) {
    if (!(scale > 0.0)) throw ParameterError("scale", "must be positive");
    return ground_truth_from_levels(load_gray_levels(path), scale);
}

Mask load_mask(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    Reader in(bytes);
    const Header h = parse_header(in, bytes);
    if (h.magic != '2' && h.magic != '5') {
        throw FormatError(FormatError::Kind::UnsupportedMagic, 0, "expected a gray PGM (P2/P5)");
    }
    const auto samples = read_samples(in, h, 1);
    Mask m(h.width, h.height, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        m.data()[i] = 2 * samples[i] > h.maxval ? 1 : 0;
    }
    return m;
}

Image add_gaussian_noise(const Image& img, double level_percent, std::uint64_t seed) {
    if (!(level_percent >= 0.0)) throw ParameterError("noise", "level must be nonnegative");
    if (level_percent == 0.0) return img;
    const double sigma = level_percent / 100.0 * 255.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    Image out = img;
    for (float& v : out.data()) {
        v = static_cast<float>(std::clamp(v + noise(rng), 0.0, 255.0));
    }
    return out;
}

}  // namespace vsstereo
