#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "test_support.hpp"
#include "vsstereo/disparity.hpp"
#include "vsstereo/error.hpp"

namespace vsstereo {
namespace {

DisparityMap row_map(const std::vector<float>& disp, const std::vector<int>& valid) {
    DisparityMap dm(static_cast<int>(disp.size()), 1);
    for (int x = 0; x < dm.width(); ++x) {
        dm.disp(x, 0) = disp[x];
        dm.valid(x, 0) = static_cast<std::uint8_t>(valid[x]);
    }
    return dm;
}

TEST(WinnerTakeAll, PicksMinimumWithSmallestTie) {
    CostVolume v(2, 1, 4);
    const float a[] = {5, 2, 2, 9};
    for (int d = 0; d < 4; ++d) {
        v(0, 0, d) = a[d];
        v(1, 0, d) = 1.0f;
    }
    const DisparityMap dm = winner_take_all(v);
    EXPECT_EQ(dm.disp(0, 0), 1.0f);
    EXPECT_EQ(dm.disp(1, 0), 0.0f);
    EXPECT_EQ(dm.invalid_count(), 0u);
}

TEST(WinnerTakeAll, ExhaustiveOptimality) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        CostVolume v = testing::random_volume(7, 6, 9, rng());
        // Quantize to force ties.
        for (float& c : v.data()) c = std::floor(c / 3.0f);
        const DisparityMap dm = winner_take_all(v);
        for (int y = 0; y < 6; ++y) {
            for (int x = 0; x < 7; ++x) {
                const int d = static_cast<int>(dm.disp(x, y));
                for (int k = 0; k < 9; ++k) {
                    if (k < d) EXPECT_GT(v(x, y, k), v(x, y, d));
                    else EXPECT_GE(v(x, y, k), v(x, y, d));
                }
            }
        }
    }
}

TEST(LeftRightCheck, ConsistencyRules) {
    // Left pixel 6 with d = 5 lands on right pixel 1.
    DisparityMap left(8, 1), right(8, 1);
    left.disp(6, 0) = 5.0f;
    right.disp(1, 0) = 5.0f;
    left.disp(7, 0) = 5.0f;
    right.disp(2, 0) = 8.0f;
    left.disp(2, 0) = 3.0f;  // x - d < 0
    const DisparityMap out = left_right_check(left, right, 1.0);
    EXPECT_EQ(out.valid(6, 0), 1);
    EXPECT_EQ(out.valid(7, 0), 0);
    EXPECT_EQ(out.valid(2, 0), 0);
    EXPECT_EQ(out.valid(0, 0), 1);  // 0 vs 0
    EXPECT_EQ(out.disp(7, 0), 5.0f);  // disparity kept, flag cleared
}

TEST(LeftRightCheck, InfiniteToleranceOnlyRejectsOutOfFrame) {
    const DisparityMap left = [] {
        DisparityMap dm(12, 5);
        std::mt19937 rng(1);
        for (float& d : dm.disp.data()) d = static_cast<float>(rng() % 6);
        return dm;
    }();
    DisparityMap right(12, 5);
    for (float& d : right.disp.data()) d = 100.0f;
    const DisparityMap out = left_right_check(left, right, std::numeric_limits<double>::infinity());
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 12; ++x) EXPECT_EQ(out.valid(x, y), x - left.disp(x, y) >= 0 ? 1 : 0);
    }
}

TEST(LeftRightCheck, RejectsBadInput) {
    EXPECT_THROW(left_right_check(DisparityMap(4, 4), DisparityMap(4, 4), -1.0), ParameterError);
    EXPECT_THROW(left_right_check(DisparityMap(4, 4), DisparityMap(5, 4), 1.0), DimensionError);
}

TEST(FillInvalid, TakesSmallerNeighbour) {
    const DisparityMap out = fill_invalid(row_map({4, 0, 9}, {1, 0, 1}));
    EXPECT_EQ(out.disp(1, 0), 4.0f);
    EXPECT_EQ(out.valid(1, 0), 1);
    EXPECT_EQ(out.filled(1, 0), 1);
    EXPECT_EQ(out.filled(0, 0), 0);
}

TEST(FillInvalid, RowStartUsesOnlyRightSide) {
    const DisparityMap out = fill_invalid(row_map({0, 0, 7, 2}, {0, 0, 1, 1}));
    EXPECT_EQ(out.disp(0, 0), 7.0f);
    EXPECT_EQ(out.disp(1, 0), 7.0f);
}

TEST(FillInvalid, EmptyRowBecomesZero) {
    const DisparityMap out = fill_invalid(row_map({3, 5}, {0, 0}));
    EXPECT_EQ(out.disp(0, 0), 0.0f);
    EXPECT_EQ(out.disp(1, 0), 0.0f);
    EXPECT_EQ(out.invalid_count(), 0u);
}

TEST(FillInvalid, ValuesComeFromTheRow) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        DisparityMap dm(20, 3);
        for (float& d : dm.disp.data()) d = static_cast<float>(rng() % 30);
        for (auto& v : dm.valid.data()) v = static_cast<std::uint8_t>(rng() % 3 != 0);
        const DisparityMap out = fill_invalid(dm);
        EXPECT_EQ(out.invalid_count(), 0u);
        for (int y = 0; y < 3; ++y) {
            std::set<float> row_valid;
            for (int x = 0; x < 20; ++x) {
                if (dm.valid(x, y)) row_valid.insert(dm.disp(x, y));
            }
            for (int x = 0; x < 20; ++x) {
                if (dm.valid(x, y)) {
                    EXPECT_EQ(out.disp(x, y), dm.disp(x, y));
                } else if (!row_valid.empty()) {
                    EXPECT_TRUE(row_valid.count(out.disp(x, y)));
                }
            }
        }
    }
}

TEST(MedianFilter, RemovesImpulse) {
    DisparityMap dm(5, 5);
    for (float& d : dm.disp.data()) d = 8.0f;
    dm.disp(2, 2) = 100.0f;
    const DisparityMap out = median_filter_3x3(dm);
    for (float d : out.disp.data()) EXPECT_EQ(d, 8.0f);
}

TEST(MedianFilter, KeepsStepEdge) {
    DisparityMap dm(6, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 6; ++x) dm.disp(x, y) = x < 3 ? 2.0f : 9.0f;
    }
    EXPECT_EQ(median_filter_3x3(dm), dm);
}

TEST(Mirror, Involution) {
    DisparityMap dm(5, 2);
    for (int i = 0; i < 10; ++i) dm.disp.data()[i] = static_cast<float>(i);
    dm.valid(1, 0) = 0;
    EXPECT_EQ(mirror(mirror(dm)), dm);
    EXPECT_EQ(mirror(dm).disp(0, 0), 4.0f);
    EXPECT_EQ(mirror(dm).valid(3, 0), 0);
}

TEST(DisparityImage, ScaleAndClamp) {
    const DisparityMap dm = row_map({0.0f, 2.6f, 15.0f, 80.0f}, {1, 1, 1, 1});
    const Image img = disparity_to_image(dm, 4.0);
    EXPECT_EQ(img(0, 0), 0.0f);
    EXPECT_EQ(img(1, 0), 10.0f);
    EXPECT_EQ(img(2, 0), 60.0f);
    EXPECT_EQ(img(3, 0), 255.0f);
}

}  // namespace
}  // namespace vsstereo
