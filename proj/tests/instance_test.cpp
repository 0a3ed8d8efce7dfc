#include "roai/instance.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"

namespace {

using namespace roai;

TEST(RobustThresholdTest, HandExample) {
    EXPECT_DOUBLE_EQ(robust_threshold(std::vector<double>{0, 1, 5}, 2.0), 3.0);
}

TEST(RobustThresholdTest, ConstantMeans) {
    EXPECT_DOUBLE_EQ(robust_threshold(std::vector<double>{0.7, 0.7, 0.7, 0.7}, 2.0), 0.7);
}

TEST(RobustThresholdTest, LadderReproducesReferenceTheta) {
    std::vector<double> means;
    for (int i = 0; i < 15; ++i) {
        means.push_back(i * (2.0 / 14.0));
    }
    means.push_back(3.0);
    means.push_back(3.2);
    EXPECT_NEAR(robust_threshold(means, 2.0 * 1.4826), 2.8372, 1e-3);
}

TEST(RobustThresholdTest, PermutationAndTranslation) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> means(11);
        for (double& m : means) {
            m = value(rng);
        }
        const double base = robust_threshold(means, 2.0);

        std::vector<double> shuffled = means;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_DOUBLE_EQ(robust_threshold(shuffled, 2.0), base);

        const double shift = value(rng);
        std::vector<double> translated = means;
        for (double& m : translated) {
            m += shift;
        }
        EXPECT_NEAR(robust_threshold(translated, 2.0), base + shift, 1e-9);
    }
}

TEST(NonrobustThresholdTest, HandExamples) {
    EXPECT_NEAR(nonrobust_threshold(std::vector<double>{0, 1, 5}, 2.0),
                2.0 + 2.0 * std::sqrt(14.0 / 3.0), 1e-12);
    EXPECT_DOUBLE_EQ(nonrobust_threshold(std::vector<double>{4, 4, 4}, 3.0), 4.0);
    EXPECT_NEAR(nonrobust_threshold(std::vector<double>{0, 0, 0, 4}, 1.0), 1.0 + std::sqrt(3.0),
                1e-12);
}

TEST(BreakdownPointTest, MedianMadSurviveOneExtremeArm) {
    // One arm pushed to 1e6 moves the robust threshold by less than 0.1
    // while the mean/std threshold blows past 1e3.
    GeneratorConfig config;
    config.n = 105;
    config.contamination_fraction = 0.0;
    const BanditInstance clean = generate_contaminated(config, 11, 3.0, 1.4826);
    const double clean_theta = theta_of(clean);

    BanditInstance spiked = clean;
    auto top = std::max_element(spiked.means.begin(), spiked.means.end());
    *top = 1e6;
    EXPECT_LT(std::abs(robust_threshold(spiked.means, spiked.k_eff()) - clean_theta), 0.1);
    EXPECT_GT(nonrobust_threshold(spiked.means, 3.0), 1e3);
}

TEST(TrueOutlierSetTest, StrictExceedance) {
    const OutlierSet set = true_outlier_set(std::vector<double>{0, 1, 5}, 3.0);
    EXPECT_EQ(set.indices, (std::vector<int>{2}));
    EXPECT_FALSE(set.degenerate);
}

TEST(TrueOutlierSetTest, EmptyWhenNothingExceeds) {
    const OutlierSet set = true_outlier_set(std::vector<double>{0, 1, 5}, 10.0);
    EXPECT_TRUE(set.indices.empty());
    EXPECT_FALSE(set.degenerate);
}

TEST(TrueOutlierSetTest, BoundaryEqualityFlagsDegeneracy) {
    const OutlierSet set = true_outlier_set(std::vector<double>{0, 3, 5}, 3.0);
    EXPECT_EQ(set.indices, (std::vector<int>{2}));
    EXPECT_TRUE(set.degenerate);
}

TEST(TrueOutlierSetTest, MatchesBruteForceOnRobustThreshold) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> means(9);
        for (double& m : means) {
            m = value(rng);
        }
        const double theta = robust_threshold(means, 2.0);
        EXPECT_EQ(true_outlier_set(means, theta).indices, oracle::outlier_set(means, theta));
    }
}

TEST(GeneratorTest, NoContaminationMeansAllFromBody) {
    GeneratorConfig config;
    config.n = 50;
    config.contamination_fraction = 0.0;
    const BanditInstance instance = generate_contaminated(config, 3);
    ASSERT_EQ(instance.num_arms(), 50);
    // Clipped body values stay within three sigma of the body mean.
    for (double m : instance.means) {
        EXPECT_LE(m, config.normal_mean + 3 * config.normal_sd + 1e-12);
        EXPECT_GE(m, config.normal_mean - 3 * config.normal_sd - 1e-12);
    }
}

TEST(GeneratorTest, DeterministicContaminationCount) {
    GeneratorConfig config;
    config.n = 105;
    config.contamination_fraction = 0.2;
    const BanditInstance instance = generate_contaminated(config, 5);
    // Contaminated arms come from Unif(0.7, 1), well above the clipped body.
    const long above = std::count_if(instance.means.begin(), instance.means.end(),
                                     [](double m) { return m >= 0.7; });
    EXPECT_EQ(above, 21);  // floor(105 * 0.2)
}

TEST(GeneratorTest, SeedDeterminism) {
    GeneratorConfig config;
    config.n = 40;
    config.contamination_fraction = 0.1;
    const BanditInstance a = generate_contaminated(config, 99);
    const BanditInstance b = generate_contaminated(config, 99);
    EXPECT_EQ(a.means, b.means);
    const BanditInstance c = generate_contaminated(config, 100);
    EXPECT_NE(a.means, c.means);
}

TEST(GeneratorTest, HalfContaminationRejected) {
    GeneratorConfig config;
    config.contamination_fraction = 0.5;
    EXPECT_THROW(config.validate(), std::invalid_argument);
}

TEST(BanditInstanceTest, BernoulliRequiresUnitIntervalMeans) {
    BanditInstance instance;
    instance.means = {0.2, 1.3};
    instance.reward_model = RewardModel::kBernoulli;
    EXPECT_THROW(instance.validate(), std::invalid_argument);
}

TEST(BanditInstanceTest, NonFiniteMeansRejected) {
    BanditInstance instance;
    instance.means = {0.2, std::numeric_limits<double>::quiet_NaN()};
    EXPECT_THROW(instance.validate(), std::invalid_argument);
}

TEST(LadderInstanceTest, ReferenceConfiguration) {
    const BanditInstance instance = ladder_instance(15, 0.0, 2.0, 0.2, 0.2, 2.0, 1.4826);
    ASSERT_EQ(instance.num_arms(), 17);
    const double theta = theta_of(instance);
    EXPECT_NEAR(theta, 2.8372, 1e-3);
    EXPECT_NEAR(instance.means[15], theta + 0.2, 1e-12);
    EXPECT_NEAR(instance.means[16], theta + 0.4, 1e-12);
    EXPECT_EQ(true_outlier_set(instance).indices, (std::vector<int>{15, 16}));
}

TEST(LadderInstanceTest, ThetaInvariantToOutlierPlacement) {
    const BanditInstance near = ladder_instance(15, 0.0, 2.0, 0.2, 0.2, 2.0, 1.4826);
    const BanditInstance far = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    EXPECT_DOUBLE_EQ(theta_of(near), theta_of(far));
    EXPECT_NEAR(far.means[15], theta_of(far) + 0.6, 1e-12);
}

TEST(LadderInstanceTest, RejectsConfigurationsWhereNormalsCrossTheta) {
    // With k_eff = 1 the threshold lands inside the ladder, so the two
    // planted arms are not the whole outlier set.
    EXPECT_THROW(ladder_instance(15, 0.0, 2.0, 0.2, 0.2, 1.0, 1.0), std::domain_error);
}

TEST(LadderInstanceTest, RejectsTooFewNormals) {
    EXPECT_THROW(ladder_instance(2, 0.0, 2.0, 0.2, 0.2, 2.0), std::invalid_argument);
}

}  // namespace
