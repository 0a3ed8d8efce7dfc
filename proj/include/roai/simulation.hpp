#ifndef ROAI_SIMULATION_HPP
#define ROAI_SIMULATION_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roai/algorithms.hpp"
#include "roai/complexity.hpp"
#include "roai/confidence.hpp"
#include "roai/instance.hpp"

/**
 * @file simulation.hpp
 *
 * @brief Seeded Monte-Carlo runs and replication aggregates.
 *
 * A run is fully determined by (sampler, instance, options, seed).  A
 * replication plan splits one master seed into independent per-run streams;
 * each stream first drives instance generation (when a generator is used)
 * and then the rewards, so replications are reproducible run by run.
 */

namespace roai {

/// One arm pull.
inline double pull(const BanditInstance& instance, int arm, std::mt19937_64& rng) {
    if (arm < 0 || arm >= instance.num_arms()) {
        throw std::out_of_range("pull: arm index out of range");
    }
    switch (instance.reward_model) {
        case RewardModel::kGaussian: {
            std::normal_distribution<double> noise(0.0, instance.sigma);
            return instance.means[arm] + noise(rng);
        }
        case RewardModel::kBernoulli: {
            std::bernoulli_distribution coin(instance.means[arm]);
            return coin(rng) ? 1.0 : 0.0;
        }
    }
    throw std::logic_error("pull: unknown reward model");
}

/// Anytime recommendation status after a given number of pulls.
struct TracePoint {
    std::int64_t pulls = 0;
    bool correct = false;
};

/// Outcome of one simulated run.
struct RunRecord {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::int64_t total_pulls = 0;
    int total_rounds = 0;
    std::vector<int> returned_set;
    bool correct = false;
    bool degenerate_instance = false;
    bool coverage_violated = false;
    bool hit_cap = false;
    std::vector<TracePoint> anytime_trace;  // one point per round when tracing
};

struct RunOptions {
    int round_cap = 1'000'000;
    std::int64_t pull_budget = 0;  ///< 0 = none; otherwise stop once total pulls reach it
    bool trace = false;
};

/// Called after every round with the snapshot the decision was based on.
using RoundObserver =
    std::function<void(int round, const CiSnapshot& snapshot, const SamplerStep& step,
                       std::span<const ArmStatistics> stats)>;

/**
 * Runs one sampler to its stopping rule (or a cap) on one instance.
 *
 * Every arm is pulled once up front; each subsequent round builds a
 * snapshot, asks the sampler for a decision, and pulls the requested arms.
 * A capped run keeps the latest recommendation rather than failing.
 */
inline RunRecord run_with_rng(Sampler& sampler, const BanditInstance& instance,
                              const RunOptions& options, std::mt19937_64& rng,
                              const RoundObserver& observer = {}) {
    instance.validate();
    if (options.round_cap < 1) {
        throw std::invalid_argument("run: round_cap must be >= 1");
    }
    const int n = instance.num_arms();
    const OutlierSet truth = true_outlier_set(instance);

    RunRecord record;
    record.algorithm = sampler.name();
    record.degenerate_instance = truth.degenerate;

    std::vector<ArmStatistics> stats(n);
    for (int i = 0; i < n; ++i) {
        stats[i].record(pull(instance, i, rng));
    }
    record.total_pulls = n;

    for (int round = 1;; ++round) {
        const SamplerStep step = sampler.step(stats);
        record.total_rounds = round;

        std::vector<int> current = step.stopped
                                       ? *step.recommendation
                                       : recommend(sampler.last_snapshot(),
                                                   detail::empirical_means_of(stats));
        if (observer) {
            observer(round, sampler.last_snapshot(), step, stats);
        }
        if (options.trace) {
            record.anytime_trace.push_back({record.total_pulls, current == truth.indices});
        }
        if (step.stopped) {
            record.returned_set = std::move(current);
            break;
        }
        const bool budget_spent =
            options.pull_budget > 0 && record.total_pulls >= options.pull_budget;
        if (round >= options.round_cap || budget_spent) {
            record.hit_cap = true;
            record.returned_set = std::move(current);
            break;
        }
        for (int arm : step.arms_to_pull) {
            stats[arm].record(pull(instance, arm, rng));
        }
        record.total_pulls += static_cast<std::int64_t>(step.arms_to_pull.size());
    }

    record.correct = (record.returned_set == truth.indices);
    record.coverage_violated = sampler.coverage_violated();
    return record;
}

inline RunRecord run(Sampler& sampler, const BanditInstance& instance, const RunOptions& options,
                     std::uint64_t seed, const RoundObserver& observer = {}) {
    std::mt19937_64 rng(seed);
    RunRecord record = run_with_rng(sampler, instance, options, rng, observer);
    record.seed = seed;
    return record;
}

/// Splits one master seed into decorrelated per-run seeds (splitmix64).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class AlgorithmId { kElim, kLucb, kUniform, kSubsampledLucb };

inline const char* algorithm_name(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::kElim: return "roai-elim";
        case AlgorithmId::kLucb: return "roai-lucb";
        case AlgorithmId::kUniform: return "uniform";
        case AlgorithmId::kSubsampledLucb: return "roai-lucb-subsampled";
    }
    throw std::logic_error("algorithm_name: unknown id");
}

inline std::optional<AlgorithmId> algorithm_from_name(const std::string& name) {
    for (AlgorithmId id : {AlgorithmId::kElim, AlgorithmId::kLucb, AlgorithmId::kUniform,
                           AlgorithmId::kSubsampledLucb}) {
        if (name == algorithm_name(id)) {
            return id;
        }
    }
    return std::nullopt;
}

/// Parameters of the subset used by the subsampled variant.
struct SubsetParams {
    double epsilon = 0.0;  ///< known contamination upper bound
    double lambda = 3.0;
    int floor_size = 15;
};

/// Builds a fresh sampler for one run; may draw from the run's rng stream.
using SamplerFactory = std::function<std::unique_ptr<Sampler>(
    const BanditInstance& instance, double delta, std::mt19937_64& rng)>;

inline SamplerFactory make_factory(AlgorithmId id, SubsetParams subset = {}) {
    return [id, subset](const BanditInstance& instance, double delta,
                        std::mt19937_64& rng) -> std::unique_ptr<Sampler> {
        const int n = instance.num_arms();
        const double k_eff = instance.k_eff();
        switch (id) {
            case AlgorithmId::kElim:
                return std::make_unique<RoaiElimSampler>(n, delta, k_eff);
            case AlgorithmId::kLucb:
                return std::make_unique<RoaiLucbSampler>(n, delta, k_eff);
            case AlgorithmId::kUniform:
                return std::make_unique<UniformSampler>(n, delta, k_eff);
            case AlgorithmId::kSubsampledLucb: {
                const SubsetSelection sel =
                    select_subset(n, subset.epsilon, subset.lambda, subset.floor_size, rng());
                return std::make_unique<SubsampledLucbSampler>(n, delta, k_eff, sel.omega);
            }
        }
        throw std::logic_error("make_factory: unknown id");
    };
}

/// What to run, on what, and how often.
struct ReplicationPlan {
    std::optional<BanditInstance> instance;     ///< fixed instance, or
    std::optional<GeneratorConfig> generator;   ///< a fresh instance per run
    double k = 2.0;                             ///< instance params used with the generator
    double mad_scale = 1.0;
    RewardModel reward_model = RewardModel::kGaussian;
    double sigma = 1.0;
    double delta = 0.1;
    int runs = 1;
    int round_cap = 0;             ///< 0 = derived from the C=10 upper bound
    std::int64_t pull_budget = 0;  ///< 0 = none
    bool trace = false;
    std::uint64_t master_seed = 0;
    /// Generator-based plans only: also treat runs whose threshold-induced
    /// outlier set differs from the planted contamination arms as
    /// degenerate, excluding them from error statistics.
    bool exclude_label_mismatch = false;
};

struct ReplicationSummary {
    std::vector<RunRecord> records;
    int degenerate_runs = 0;
    int hit_cap_runs = 0;
    double error_rate = 0.0;      ///< over non-degenerate runs
    double coverage_violation_rate = 0.0;
    double mean_pulls = 0.0;      ///< over non-degenerate runs
    double median_pulls = 0.0;
};

namespace detail {

struct PlannedInstance {
    BanditInstance instance;
    bool label_mismatch = false;
};

inline PlannedInstance plan_instance(const ReplicationPlan& plan, std::mt19937_64& rng) {
    PlannedInstance out;
    if (plan.instance) {
        out.instance = *plan.instance;
        return out;
    }
    if (!plan.generator) {
        throw std::invalid_argument("replicate: plan needs an instance or a generator");
    }
    const LabeledMeans drawn = generate_contaminated_labeled(*plan.generator, rng);
    out.instance.means = drawn.means;
    out.instance.k = plan.k;
    out.instance.mad_scale = plan.mad_scale;
    out.instance.reward_model = plan.reward_model;
    out.instance.sigma = plan.sigma;
    out.instance.validate();
    if (plan.exclude_label_mismatch) {
        out.label_mismatch = true_outlier_set(out.instance).indices != drawn.contaminated;
    }
    return out;
}

/// Safety cap: ten times the C=10 bound, expressed in rounds.
inline int default_round_cap(const BanditInstance& instance, double delta) {
    try {
        const GapProfile profile = gap_profile(instance);
        const double bound =
            upper_bound(profile, instance.num_arms(), instance.k_eff(), delta, 10.0);
        const double rounds = 10.0 * bound / std::max(1, instance.num_arms());
        return static_cast<int>(std::clamp(rounds, 1000.0, 100'000'000.0));
    } catch (const std::domain_error&) {
        return 1'000'000;  // degenerate gaps: fall back to a generous fixed cap
    }
}

}  // namespace detail

/// Independent seeded runs of one sampler configuration.
inline ReplicationSummary replicate(const ReplicationPlan& plan, const SamplerFactory& factory,
                                    const RoundObserver& observer = {}) {
    if (plan.runs < 1) {
        throw std::invalid_argument("replicate: runs must be >= 1");
    }
    ReplicationSummary summary;
    summary.records.reserve(plan.runs);

    for (int r = 0; r < plan.runs; ++r) {
        const std::uint64_t seed = split_seed(plan.master_seed, static_cast<std::uint64_t>(r));
        std::mt19937_64 rng(seed);
        const detail::PlannedInstance planned = detail::plan_instance(plan, rng);
        std::unique_ptr<Sampler> sampler = factory(planned.instance, plan.delta, rng);

        RunOptions options;
        options.round_cap = plan.round_cap > 0
                                ? plan.round_cap
                                : detail::default_round_cap(planned.instance, plan.delta);
        options.pull_budget = plan.pull_budget;
        options.trace = plan.trace;

        RunRecord record = run_with_rng(*sampler, planned.instance, options, rng, observer);
        record.seed = seed;
        record.degenerate_instance |= planned.label_mismatch;
        summary.records.push_back(std::move(record));
    }

    std::vector<double> pulls;
    int errors = 0, violations = 0;
    for (const RunRecord& rec : summary.records) {
        summary.hit_cap_runs += rec.hit_cap ? 1 : 0;
        if (rec.degenerate_instance) {
            ++summary.degenerate_runs;
            continue;
        }
        pulls.push_back(static_cast<double>(rec.total_pulls));
        errors += rec.correct ? 0 : 1;
        violations += rec.coverage_violated ? 1 : 0;
    }
    if (!pulls.empty()) {
        const double count = static_cast<double>(pulls.size());
        summary.error_rate = errors / count;
        summary.coverage_violation_rate = violations / count;
        summary.mean_pulls = std::accumulate(pulls.begin(), pulls.end(), 0.0) / count;
        summary.median_pulls = median_of(pulls);
    }
    return summary;
}

/**
 * Error curve over a shared pull grid: at each grid point, the fraction of
 * runs whose most recent recommendation (at that many pulls or fewer) is
 * incorrect.  Runs that already stopped hold their final recommendation;
 * runs with no recommendation yet count as incorrect.
 */
inline std::vector<double> anytime_error(std::span<const RunRecord> records,
                                         std::span<const std::int64_t> pull_grid) {
    for (const RunRecord& rec : records) {
        if (rec.anytime_trace.empty()) {
            throw std::invalid_argument("anytime_error: every record needs a trace");
        }
    }
    std::vector<double> curve;
    curve.reserve(pull_grid.size());
    if (records.empty()) {
        curve.assign(pull_grid.size(), 0.0);
        return curve;
    }
    for (std::int64_t budget : pull_grid) {
        int incorrect = 0;
        for (const RunRecord& rec : records) {
            bool correct = false;  // no recommendation yet counts as incorrect
            for (const TracePoint& point : rec.anytime_trace) {
                if (point.pulls > budget) {
                    break;
                }
                correct = point.correct;
            }
            incorrect += correct ? 0 : 1;
        }
        curve.push_back(static_cast<double>(incorrect) / static_cast<double>(records.size()));
    }
    return curve;
}

}  // namespace roai

#endif
