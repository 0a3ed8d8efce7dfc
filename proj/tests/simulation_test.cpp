#include "roai/simulation.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"

namespace {

using namespace roai;

BanditInstance three_arm_instance(double sigma) {
    BanditInstance instance;
    instance.means = {0.0, 1.0, 5.0};
    instance.sigma = sigma;
    instance.k = 2.0;
    return instance;
}

TEST(PullTest, DegenerateBernoulliArms) {
    BanditInstance instance;
    instance.means = {1.0, 0.0};
    instance.reward_model = RewardModel::kBernoulli;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        EXPECT_DOUBLE_EQ(pull(instance, 0, rng), 1.0);
        EXPECT_DOUBLE_EQ(pull(instance, 1, rng), 0.0);
    }
}

TEST(PullTest, GaussianDeterministicGivenSeed) {
    const BanditInstance instance = three_arm_instance(0.3);
    std::mt19937_64 a(9), b(9);
    for (int i = 0; i < 100; ++i) {
        EXPECT_DOUBLE_EQ(pull(instance, i % 3, a), pull(instance, i % 3, b));
    }
}

TEST(RunTest, IdentifiesTheOutlierWithHighProbability) {
    const BanditInstance instance = three_arm_instance(0.1);
    int correct = 0;
    for (int r = 0; r < 100; ++r) {
        RoaiLucbSampler sampler(3, 0.1, instance.k_eff());
        const RunRecord record = run(sampler, instance, RunOptions{}, split_seed(5, r));
        correct += record.correct ? 1 : 0;
        EXPECT_FALSE(record.hit_cap);
        EXPECT_GE(record.total_pulls, 3);
    }
    EXPECT_GE(correct, 95);
}

TEST(RunTest, TinyNoiseStopsQuicklyAndCorrectly) {
    const BanditInstance instance = three_arm_instance(1e-4);
    for (int r = 0; r < 20; ++r) {
        RoaiElimSampler sampler(3, 0.1, instance.k_eff());
        const RunRecord record = run(sampler, instance, RunOptions{}, split_seed(6, r));
        EXPECT_TRUE(record.correct);
        EXPECT_LE(record.total_rounds, 200);
    }
}

TEST(RunTest, DeterministicGivenSeed) {
    const BanditInstance instance = three_arm_instance(0.5);
    RunOptions options;
    options.trace = true;
    RoaiLucbSampler a(3, 0.1, instance.k_eff()), b(3, 0.1, instance.k_eff());
    const RunRecord ra = run(a, instance, options, 77);
    const RunRecord rb = run(b, instance, options, 77);
    EXPECT_EQ(ra.total_pulls, rb.total_pulls);
    EXPECT_EQ(ra.total_rounds, rb.total_rounds);
    EXPECT_EQ(ra.returned_set, rb.returned_set);
    ASSERT_EQ(ra.anytime_trace.size(), rb.anytime_trace.size());
    for (std::size_t i = 0; i < ra.anytime_trace.size(); ++i) {
        EXPECT_EQ(ra.anytime_trace[i].pulls, rb.anytime_trace[i].pulls);
        EXPECT_EQ(ra.anytime_trace[i].correct, rb.anytime_trace[i].correct);
    }
}

TEST(ReplicateTest, SingleRunSummaryMatchesRecord) {
    ReplicationPlan plan;
    plan.instance = three_arm_instance(0.5);
    plan.runs = 1;
    plan.master_seed = 3;
    const ReplicationSummary summary = replicate(plan, make_factory(AlgorithmId::kLucb));
    ASSERT_EQ(summary.records.size(), 1u);
    EXPECT_DOUBLE_EQ(summary.mean_pulls, static_cast<double>(summary.records[0].total_pulls));
    EXPECT_DOUBLE_EQ(summary.median_pulls, summary.mean_pulls);
    EXPECT_EQ(summary.error_rate, summary.records[0].correct ? 0.0 : 1.0);
}

TEST(ReplicateTest, UniformBaselineIsDeltaPac) {
    ReplicationPlan plan;
    plan.instance = three_arm_instance(0.5);
    plan.runs = 500;
    plan.delta = 0.1;
    plan.master_seed = 8;
    const ReplicationSummary summary = replicate(plan, make_factory(AlgorithmId::kUniform));
    EXPECT_LE(summary.error_rate, 0.1);
    EXPECT_LE(summary.coverage_violation_rate, 0.1);
}

TEST(ReplicateTest, ElimIntersectionViolationsStayBelowDelta) {
    // Interval intersections can only collapse off the confidence event, so
    // the fraction of runs with a recorded violation stays below delta.
    ReplicationPlan plan;
    plan.instance = three_arm_instance(0.5);
    plan.runs = 500;
    plan.delta = 0.1;
    plan.master_seed = 88;
    const ReplicationSummary summary = replicate(plan, make_factory(AlgorithmId::kElim));
    EXPECT_LE(summary.error_rate, 0.1);
    EXPECT_LE(summary.coverage_violation_rate, 0.1);
}

TEST(ReplicateTest, DeterministicGivenMasterSeed) {
    ReplicationPlan plan;
    plan.generator = GeneratorConfig{};
    plan.generator->n = 21;
    plan.generator->contamination_fraction = 0.1;
    plan.k = 3.0;
    plan.mad_scale = 1.4826;
    plan.reward_model = RewardModel::kBernoulli;
    plan.runs = 5;
    plan.round_cap = 500;
    plan.master_seed = 12;
    const ReplicationSummary a = replicate(plan, make_factory(AlgorithmId::kLucb));
    const ReplicationSummary b = replicate(plan, make_factory(AlgorithmId::kLucb));
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].total_pulls, b.records[i].total_pulls);
        EXPECT_EQ(a.records[i].returned_set, b.records[i].returned_set);
    }
}

TEST(AnytimeErrorTest, AllCorrectGivesZeros) {
    std::vector<RunRecord> records(3);
    for (RunRecord& rec : records) {
        rec.anytime_trace = {{3, true}, {10, true}};
    }
    const std::vector<std::int64_t> grid{3, 5, 10, 20};
    EXPECT_EQ(anytime_error(records, grid), (std::vector<double>{0, 0, 0, 0}));
}

TEST(AnytimeErrorTest, HalfCorrectGivesHalf) {
    std::vector<RunRecord> records(2);
    records[0].anytime_trace = {{3, true}, {10, true}};
    records[1].anytime_trace = {{3, false}, {10, false}};
    const std::vector<std::int64_t> grid{4, 12};
    EXPECT_EQ(anytime_error(records, grid), (std::vector<double>{0.5, 0.5}));
}

TEST(AnytimeErrorTest, NoRecommendationYetCountsAsIncorrect) {
    std::vector<RunRecord> records(1);
    records[0].anytime_trace = {{10, true}};
    const std::vector<std::int64_t> grid{5, 10};
    EXPECT_EQ(anytime_error(records, grid), (std::vector<double>{1.0, 0.0}));
}

TEST(AnytimeErrorTest, EmptyGridGivesEmptyCurve) {
    std::vector<RunRecord> records(1);
    records[0].anytime_trace = {{1, true}};
    EXPECT_TRUE(anytime_error(records, std::vector<std::int64_t>{}).empty());
}

// Whenever every true mean lies in its arm interval, every derived true
// quantity lies in its derived interval.  Audited per round against the
// ground truth; violations of the implication never occur.
TEST(CoverageAuditTest, DerivedFailuresRequireArmFailures) {
    BanditInstance instance;
    instance.means = {0.0, 0.6, 3.0};
    instance.sigma = 2.0;  // wider than the 1-subgaussian the widths assume
    instance.k = 2.0;
    const double true_median = oracle::median(instance.means);
    const double true_mad = oracle::mad(instance.means);
    const double true_theta = true_median + instance.k_eff() * true_mad;

    std::int64_t rounds_seen = 0, arm_fail_rounds = 0, bad_rounds = 0;
    const RoundObserver audit = [&](int, const CiSnapshot& snap, const SamplerStep&,
                                    std::span<const ArmStatistics>) {
        ++rounds_seen;
        bool arm_fail = false;
        for (int i = 0; i < snap.num_arms(); ++i) {
            arm_fail |= !snap.arm_intervals[i].contains(instance.means[i]);
        }
        bool derived_fail = !snap.median_interval.contains(true_median) ||
                            !snap.mad_interval.contains(true_mad) ||
                            !snap.theta_interval.contains(true_theta);
        for (int i = 0; i < snap.num_arms(); ++i) {
            derived_fail |= !snap.ad_intervals[i].contains(
                std::abs(instance.means[i] - true_median));
        }
        arm_fail_rounds += arm_fail ? 1 : 0;
        bad_rounds += (derived_fail && !arm_fail) ? 1 : 0;
    };

    RunOptions options;
    options.round_cap = 400;
    for (int r = 0; rounds_seen < 10'000 && r < 500; ++r) {
        UniformSampler uniform(3, 0.5, instance.k_eff());
        run(uniform, instance, options, split_seed(40, r), audit);
        RoaiElimSampler elim(3, 0.5, instance.k_eff());
        run(elim, instance, options, split_seed(41, r), audit);
    }
    EXPECT_GE(rounds_seen, 10'000);
    EXPECT_GT(arm_fail_rounds, 0);  // the audit actually exercises failures
    EXPECT_EQ(bad_rounds, 0);
}

// Derived intervals built from intersecting arm intervals only ever shrink.
TEST(NestingTest, ElimDerivedIntervalsAreNested) {
    const BanditInstance instance = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    for (int r = 0; r < 3; ++r) {
        RoaiElimSampler sampler(instance.num_arms(), 0.1, instance.k_eff());
        CiSnapshot previous;
        bool have_previous = false;
        const RoundObserver check = [&](int, const CiSnapshot& snap, const SamplerStep&,
                                        std::span<const ArmStatistics>) {
            if (have_previous) {
                ASSERT_TRUE(previous.median_interval.contains(snap.median_interval));
                ASSERT_TRUE(previous.mad_interval.contains(snap.mad_interval));
                ASSERT_TRUE(previous.theta_interval.contains(snap.theta_interval));
                for (int i = 0; i < snap.num_arms(); ++i) {
                    ASSERT_TRUE(previous.arm_intervals[i].contains(snap.arm_intervals[i]));
                    ASSERT_TRUE(previous.ad_intervals[i].contains(snap.ad_intervals[i]));
                }
            }
            previous = snap;
            have_previous = true;
        };
        BanditInstance noisy = instance;
        noisy.sigma = 0.5;
        run(sampler, noisy, RunOptions{}, split_seed(50, r), check);
    }
}

TEST(LucbInvariantsTest, BudgetAndAdWidthBoundEveryRound) {
    const BanditInstance instance = ladder_instance(15, 0.0, 2.0, 0.4, 0.2, 2.0, 1.4826);
    BanditInstance noisy = instance;
    noisy.sigma = 0.5;
    for (int r = 0; r < 3; ++r) {
        RoaiLucbSampler sampler(instance.num_arms(), 0.1, instance.k_eff());
        const RoundObserver check = [&](int, const CiSnapshot& snap, const SamplerStep& step,
                                        std::span<const ArmStatistics>) {
            ASSERT_LE(step.arms_to_pull.size(), 10u);
            for (int i = 0; i < snap.num_arms(); ++i) {
                ASSERT_LE(snap.ad_intervals[i].width(),
                          snap.arm_intervals[i].width() + snap.median_interval.width() + 1e-9);
            }
        };
        run(sampler, noisy, RunOptions{}, split_seed(60, r), check);
    }
}

TEST(ElimInvariantsTest, ActiveSetsShrinkMonotonically) {
    const BanditInstance instance = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    BanditInstance noisy = instance;
    noisy.sigma = 0.5;
    RoaiElimSampler sampler(instance.num_arms(), 0.1, instance.k_eff());
    std::vector<std::uint8_t> prev_median, prev_mad, prev_theta;
    const RoundObserver check = [&](int, const CiSnapshot&, const SamplerStep&,
                                    std::span<const ArmStatistics>) {
        const ElimState& state = sampler.state();
        if (!prev_median.empty()) {
            for (int i = 0; i < instance.num_arms(); ++i) {
                ASSERT_LE(state.in_median[i], prev_median[i]);
                ASSERT_LE(state.in_mad[i], prev_mad[i]);
                ASSERT_LE(state.in_theta[i], prev_theta[i]);
            }
        }
        prev_median = state.in_median;
        prev_mad = state.in_mad;
        prev_theta = state.in_theta;
    };
    run(sampler, noisy, RunOptions{}, 1234, check);
}

TEST(SubsampledTest, FullSubsetRunsIdenticallyToLucb) {
    const BanditInstance instance = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    BanditInstance noisy = instance;
    noisy.sigma = 0.5;
    const int n = noisy.num_arms();
    std::vector<int> omega(n);
    std::iota(omega.begin(), omega.end(), 0);

    for (int r = 0; r < 3; ++r) {
        std::vector<std::vector<int>> pulls_a, pulls_b;
        const RoundObserver grab_a = [&](int, const CiSnapshot&, const SamplerStep& step,
                                         std::span<const ArmStatistics>) {
            pulls_a.push_back(step.arms_to_pull);
        };
        const RoundObserver grab_b = [&](int, const CiSnapshot&, const SamplerStep& step,
                                         std::span<const ArmStatistics>) {
            pulls_b.push_back(step.arms_to_pull);
        };
        RoaiLucbSampler lucb(n, 0.1, noisy.k_eff());
        SubsampledLucbSampler sub(n, 0.1, noisy.k_eff(), omega);
        const RunRecord a = run(lucb, noisy, RunOptions{}, split_seed(70, r), grab_a);
        const RunRecord b = run(sub, noisy, RunOptions{}, split_seed(70, r), grab_b);
        EXPECT_EQ(a.total_pulls, b.total_pulls);
        EXPECT_EQ(a.total_rounds, b.total_rounds);
        EXPECT_EQ(a.returned_set, b.returned_set);
        EXPECT_EQ(pulls_a, pulls_b);
    }
}

TEST(SubsampledTest, OmegaExcludingContaminationTracksCleanThreshold) {
    // A subset that drops the one extreme arm produces a threshold close to
    // the clean instance's robust threshold.
    BanditInstance instance;
    instance.means = {0.30, 0.28, 0.33, 0.26, 0.35, 0.24, 0.31, 0.29, 0.27, 0.32, 0.25,
                      0.34, 0.23, 0.36, 100.0};
    instance.k = 3.0;
    const int n = instance.num_arms();
    std::vector<int> omega(n - 1);
    std::iota(omega.begin(), omega.end(), 0);  // everything except the spike

    std::vector<double> clean(instance.means.begin(), instance.means.end() - 1);
    const double clean_theta = robust_threshold(clean, instance.k_eff());

    SubsampledLucbSampler sampler(n, 0.1, instance.k_eff(), omega);
    BanditInstance noisy = instance;
    noisy.sigma = 0.02;
    double last_theta_mid = 0.0;
    const RoundObserver grab = [&](int, const CiSnapshot& snap, const SamplerStep&,
                                   std::span<const ArmStatistics>) {
        last_theta_mid = snap.theta_midpoint;
    };
    RunOptions options;
    options.round_cap = 4000;
    run(sampler, noisy, options, 5, grab);
    EXPECT_NEAR(last_theta_mid, clean_theta, 0.05);
}

// At stopping, no arm interval overlaps the threshold interval, so the
// recommendation coincides with the arms whose interval sits entirely
// above it (on runs without a coverage violation).
TEST(AgreementTest, RecommendationMatchesSeparatedIntervalsAtStopping) {
    const BanditInstance ladder = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    BanditInstance noisy = ladder;
    noisy.sigma = 0.5;
    const int n = noisy.num_arms();
    for (int r = 0; r < 3; ++r) {
        std::vector<std::unique_ptr<Sampler>> samplers;
        samplers.push_back(std::make_unique<RoaiElimSampler>(n, 0.1, noisy.k_eff()));
        samplers.push_back(std::make_unique<RoaiLucbSampler>(n, 0.1, noisy.k_eff()));
        samplers.push_back(std::make_unique<UniformSampler>(n, 0.1, noisy.k_eff()));
        for (auto& sampler : samplers) {
            const RunRecord record = run(*sampler, noisy, RunOptions{}, split_seed(95, r));
            ASSERT_FALSE(record.hit_cap);
            if (record.coverage_violated) {
                continue;
            }
            const CiSnapshot& snap = sampler->last_snapshot();
            std::vector<int> above;
            for (int i = 0; i < n; ++i) {
                if (snap.arm_intervals[i].lo > snap.theta_interval.hi) {
                    above.push_back(i);
                }
            }
            EXPECT_EQ(record.returned_set, above) << sampler->name();
        }
    }
}

TEST(TerminationTest, AllSamplersStopWithinTheCap)
{
    const BanditInstance ladder = ladder_instance(15, 0.0, 2.0, 0.6, 0.2, 2.0, 1.4826);
    BanditInstance noisy = ladder;
    noisy.sigma = 0.5;
    for (AlgorithmId id : {AlgorithmId::kElim, AlgorithmId::kLucb, AlgorithmId::kUniform,
                           AlgorithmId::kSubsampledLucb}) {
        ReplicationPlan plan;
        plan.instance = noisy;
        plan.runs = 3;
        plan.master_seed = 90;
        SubsetParams subset;
        subset.floor_size = noisy.num_arms();  // subsampled variant with omega = [n]
        const ReplicationSummary summary = replicate(plan, make_factory(id, subset));
        for (const RunRecord& rec : summary.records) {
            EXPECT_FALSE(rec.hit_cap) << algorithm_name(id);
        }
    }
}

}  // namespace
