#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "vsstereo/error.hpp"
#include "vsstereo/gradient.hpp"

namespace vsstereo {
namespace {

Image transpose(const Image& img) {
    Image t(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) t(y, x) = img(x, y);
    }
    return t;
}

Image step_image(int w, int h, int edge_x, float lo, float hi) {
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) img(x, y) = x < edge_x ? lo : hi;
    }
    return img;
}

TEST(Convolve, ZeroSumKernelOnFlatImage) {
    const Image flat(7, 5, 93.0f);
    for (const Kernel& k : {Kernel::sobel_x(), Kernel::sobel_y(), Kernel::prewitt_x(), Kernel::prewitt_y()}) {
        const Image out = convolve(flat, k);
        for (float v : out.data()) EXPECT_EQ(v, 0.0f);
    }
}

TEST(Convolve, IdentityKernel) {
    const Image img = testing::random_image(9, 6, 1);
    EXPECT_EQ(convolve(img, Kernel::identity()), img);
}

TEST(Convolve, VerticalSobelHandValue) {
    // rows 0 / 10 / 20: -1*0 -2*0 -1*0 + 1*20 + 2*20 + 1*20 = 80
    const Image img(3, 3, std::vector<float>{0, 0, 0, 10, 10, 10, 20, 20, 20});
    EXPECT_FLOAT_EQ(convolve(img, Kernel::sobel_y())(1, 1), 80.0f);
}

TEST(Convolve, ClampToEdgeBorders) {
    // A horizontal ramp: clamping makes the border response half the interior one.
    Image ramp(5, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 5; ++x) ramp(x, y) = 10.0f * x;
    }
    const auto gx = convolve(ramp, Kernel::sobel_x());
    EXPECT_FLOAT_EQ(gx(2, 1), 80.0f);
    EXPECT_FLOAT_EQ(gx(0, 1), 40.0f);
    EXPECT_FLOAT_EQ(gx(4, 0), 40.0f);
}

TEST(Convolve, RejectsTinyImages) {
    EXPECT_THROW(convolve(Image(2, 5), Kernel::sobel_x()), DimensionError);
    EXPECT_THROW(gradient_field(Image(5, 2)), DimensionError);
}

TEST(Convolve, Linearity) {
    const Image a = testing::random_image(12, 10, 2);
    const Image b = testing::random_image(12, 10, 3);
    const float alpha = 0.75f, beta = -1.5f;
    Image mix(12, 10);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.data()[i] = alpha * a.data()[i] + beta * b.data()[i];
    // Relative to the largest possible response: kernel L1 norm 8 times the input range.
    const double scale = (std::abs(alpha) + std::abs(beta)) * 255.0 * 8.0;
    for (const Kernel& k : {Kernel::sobel_x(), Kernel::sobel_y()}) {
        const auto lhs = convolve(mix, k);
        const auto ca = convolve(a, k);
        const auto cb = convolve(b, k);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const double rhs = alpha * ca.data()[i] + beta * cb.data()[i];
            EXPECT_NEAR(lhs.data()[i], rhs, 1e-6 * scale);
        }
    }
}

TEST(GradientField, MagnitudeAndThetaRules) {
    // Single pixel values are checked through a synthetic image whose Sobel
    // responses at the center are gx = 3*8, gy = 4*8 (a planar ramp).
    Image ramp(3, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) ramp(x, y) = 3.0f * x + 4.0f * y;
    }
    const GradientField f = gradient_field(ramp);
    EXPECT_FLOAT_EQ(f.gx(1, 1), 24.0f);
    EXPECT_FLOAT_EQ(f.gy(1, 1), 32.0f);
    EXPECT_FLOAT_EQ(f.mag(1, 1), 40.0f);  // 8 * (3-4-5)
    EXPECT_NEAR(f.theta(1, 1), std::atan2(4.0, 3.0), 1e-6);

    const GradientField l1 = gradient_field(ramp, KernelPair::sobel(), MagnitudeMode::AbsoluteSum);
    EXPECT_FLOAT_EQ(l1.mag(1, 1), 56.0f);
}

TEST(GradientField, VerticalRampPointsDown) {
    Image ramp(4, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) ramp(x, y) = 10.0f * y;
    }
    const GradientField f = gradient_field(ramp);
    EXPECT_FLOAT_EQ(f.gx(1, 1), 0.0f);
    EXPECT_GT(f.gy(1, 1), 0.0f);
    EXPECT_FLOAT_EQ(f.theta(1, 1), std::numbers::pi_v<float> / 2);
}

TEST(GradientField, FlatImageIsZero) {
    const GradientField f = gradient_field(Image(6, 6, 50.0f));
    for (std::size_t i = 0; i < f.mag.size(); ++i) {
        EXPECT_EQ(f.mag.data()[i], 0.0f);
        EXPECT_EQ(f.theta.data()[i], 0.0f);
    }
}

TEST(GradientField, Invariants) {
    const Image img = testing::random_image(17, 13, 4);
    const GradientField f = gradient_field(img);
    for (std::size_t i = 0; i < f.mag.size(); ++i) {
        const float gx = f.gx.data()[i], gy = f.gy.data()[i], mag = f.mag.data()[i], t = f.theta.data()[i];
        EXPECT_NEAR(mag, std::sqrt(gx * gx + gy * gy), 1e-3);
        EXPECT_GE(mag, std::abs(gx));
        EXPECT_GE(mag, std::abs(gy));
        EXPECT_GT(t, -std::numbers::pi_v<float>);
        EXPECT_LE(t, std::numbers::pi_v<float>);
        // Quadrant consistency.
        if (gy > 0) EXPECT_GT(t, 0.0f);
        if (gy < 0) EXPECT_LT(t, 0.0f);
        if (gx > 0) EXPECT_LT(std::abs(t), std::numbers::pi_v<float> / 2 + 1e-6f);
    }
}

TEST(GradientField, TransposeSwapsComponents) {
    const Image img = testing::random_image(11, 7, 5);
    const GradientField f = gradient_field(img);
    const GradientField ft = gradient_field(transpose(img));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            EXPECT_NEAR(ft.gx(y, x), f.gy(x, y), 1e-3);
            EXPECT_NEAR(ft.gy(y, x), f.gx(x, y), 1e-3);
            EXPECT_NEAR(ft.mag(y, x), f.mag(x, y), 1e-3);
            // theta reflects about the diagonal: theta' = pi/2 - theta (mod 2 pi).
            if (f.mag(x, y) > 1e-3f) {
                const double expected = std::atan2(std::cos(f.theta(x, y)), std::sin(f.theta(x, y)));
                EXPECT_NEAR(std::remainder(ft.theta(y, x) - expected, 2 * std::numbers::pi), 0.0, 1e-4);
            }
        }
    }
}

TEST(GradientField, InjectablePrewitt) {
    Image ramp(3, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) ramp(x, y) = 5.0f * x;
    }
    EXPECT_FLOAT_EQ(gradient_field(ramp, KernelPair::prewitt()).gx(1, 1), 30.0f);
    EXPECT_FLOAT_EQ(gradient_field(ramp, KernelPair::sobel()).gx(1, 1), 40.0f);
}

TEST(SensitivityMask, ZeroThresholdMarksAll) {
    const Mask m = sensitivity_mask(gradient_field(testing::random_image(8, 8, 6)), 0.0f);
    EXPECT_EQ(std::count(m.data().begin(), m.data().end(), 1), 64);
}

TEST(SensitivityMask, FlatImageMarksNone) {
    const Mask m = sensitivity_mask(gradient_field(Image(8, 8, 12.0f)), 20.0f);
    EXPECT_EQ(std::count(m.data().begin(), m.data().end(), 1), 0);
}

TEST(SensitivityMask, StepEdgeBand) {
    // Step between columns 4 and 5: Sobel gx = 4 * 100 on columns 4 and 5, zero elsewhere.
    const Image step = step_image(10, 10, 5, 0.0f, 100.0f);
    const GradientField f = gradient_field(step);
    const Mask m = sensitivity_mask(f, 20.0f);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) {
            const bool band = x == 4 || x == 5;
            EXPECT_EQ(m(x, y) != 0, band) << x << "," << y;
            EXPECT_FLOAT_EQ(f.mag(x, y), band ? 400.0f : 0.0f);
        }
    }
}

TEST(DebugImages, ThetaMapping) {
    GradientField f{Image(3, 1), Image(3, 1), Image(3, 1),
                    Grid<float>(3, 1, std::vector<float>{std::numbers::pi_v<float>, 0.0f,
                                                         -std::numbers::pi_v<float> / 2})};
    const Image t = theta_image(f);
    EXPECT_FLOAT_EQ(t(0, 0), 255.0f);
    EXPECT_FLOAT_EQ(t(1, 0), 127.5f);
    EXPECT_FLOAT_EQ(t(2, 0), 63.75f);
}

}  // namespace
}  // namespace vsstereo
