#include "roai/stats.hpp"

#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "oracles.hpp"

namespace {

using roai::kth_largest;
using roai::mad_of;
using roai::median_of;

TEST(MedianTest, OddLengthIsMiddle) {
    EXPECT_DOUBLE_EQ(median_of(std::vector<double>{3, 1, 2}), 2.0);
}

TEST(MedianTest, EvenLengthIsUpperMiddle) {
    // m-th largest with m = n/2 for n = 2m: the upper of the two middle values.
    EXPECT_DOUBLE_EQ(median_of(std::vector<double>{1, 2, 3, 4}), 3.0);
}

TEST(MedianTest, Singleton) {
    EXPECT_DOUBLE_EQ(median_of(std::vector<double>{5}), 5.0);
}

TEST(MedianTest, EmptyThrows) {
    EXPECT_THROW(median_of(std::vector<double>{}), std::invalid_argument);
}

TEST(MadTest, HandExample) {
    // median 1, deviations {1, 0, 4}, middle one is 1
    EXPECT_DOUBLE_EQ(mad_of(std::vector<double>{0, 1, 5}), 1.0);
}

TEST(MadTest, ConstantSequenceIsZero) {
    EXPECT_DOUBLE_EQ(mad_of(std::vector<double>{2.5, 2.5, 2.5}), 0.0);
}

TEST(MadTest, LadderWithOutliers) {
    // 15 equally spaced means on [0, 2] plus two outliers: the MAD is the
    // 9th largest deviation, 4/7.
    std::vector<double> values;
    for (int i = 0; i < 15; ++i) {
        values.push_back(i * (2.0 / 14.0));
    }
    values.push_back(2.9);
    values.push_back(3.1);
    EXPECT_NEAR(mad_of(values), 4.0 / 7.0, 1e-12);
    EXPECT_NEAR(median_of(values), 8.0 / 7.0, 1e-12);
}

TEST(MadTest, EmptyThrows) {
    EXPECT_THROW(mad_of(std::vector<double>{}), std::invalid_argument);
}

TEST(KthLargestTest, Basics) {
    const std::vector<double> values{4, 1, 3, 2};
    EXPECT_DOUBLE_EQ(kth_largest(values, 1), 4.0);
    EXPECT_DOUBLE_EQ(kth_largest(values, 4), 1.0);
    EXPECT_THROW(kth_largest(values, 0), std::invalid_argument);
    EXPECT_THROW(kth_largest(values, 5), std::invalid_argument);
}

TEST(StatsOracleTest, ExhaustiveAgainstSortingOracle) {
    // Every sequence of length <= 8 over a five-value alphabet.
    const std::vector<double> alphabet{-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int length = 1; length <= 8; ++length) {
        oracle::for_each_sequence(alphabet, length, [](const std::vector<double>& seq) {
            ASSERT_EQ(median_of(seq), oracle::median(seq));
            ASSERT_EQ(mad_of(seq), oracle::mad(seq));
        });
    }
}

}  // namespace
