#ifndef ROAI_ALGORITHMS_HPP
#define ROAI_ALGORITHMS_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "roai/confidence.hpp"
#include "roai/interval.hpp"

/**
 * @file algorithms.hpp
 *
 * @brief Sampling, stopping, and recommendation rules.
 *
 * Every sampler shares the same stopping and recommendation rule: stop at
 * the first round where no arm interval overlaps the threshold interval,
 * and return the empirical outlier set {i : mean_i > theta_hat}.  They
 * differ in which arms they pull while that condition fails:
 *
 *  - elimination: all arms whose intervals still overlap the median, MAD,
 *    or threshold intervals (running intersections, monotone active sets);
 *  - LUCB: at most ten boundary arms per round (four at the median, four
 *    at the MAD, two at the threshold);
 *  - uniform: every arm, every round;
 *  - subsampled LUCB: median/MAD/threshold built from a fixed subset of
 *    arms, threshold separation still enforced over all arms.
 *
 * All argmin/argmax selections and top-k rankings break ties by lowest arm
 * index, so runs are reproducible.
 */

namespace roai {

/// One round's decision: arms to pull, or stop with a recommendation.
struct SamplerStep {
    std::vector<int> arms_to_pull;                    // sorted ascending
    bool stopped = false;
    std::optional<std::vector<int>> recommendation;   // present iff stopped
};

/// Empirical outlier set: arms whose empirical mean strictly exceeds
/// theta_hat.  Ranges over the means, so a snapshot built from a subset of
/// arms still classifies all of them.
inline std::vector<int> recommend(const CiSnapshot& snapshot,
                                  std::span<const double> empirical_means) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(empirical_means.size()); ++i) {
        if (empirical_means[i] > snapshot.theta_midpoint) {
            out.push_back(i);
        }
    }
    return out;
}

namespace detail {

/// Indices of the k largest values, ties broken by lowest index.
inline std::vector<int> top_k_indices(std::span<const double> values, int k) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(k, 0))));
    return order;
}

/// Index minimizing key over `candidates`, exact ties broken by lowest
/// index; empty candidates yield nothing.
template <typename Key>
std::optional<int> argmin_by(std::span<const int> candidates, Key key) {
    std::optional<int> best;
    for (int i : candidates) {
        if (!best || key(i) < key(*best) || (key(i) == key(*best) && i < *best)) {
            best = i;
        }
    }
    return best;
}

template <typename Key>
std::optional<int> argmax_by(std::span<const int> candidates, Key key) {
    std::optional<int> best;
    for (int i : candidates) {
        if (!best || key(i) > key(*best) || (key(i) == key(*best) && i < *best)) {
            best = i;
        }
    }
    return best;
}

inline void insert_sorted_unique(std::vector<int>& set, std::optional<int> value) {
    if (!value) {
        return;
    }
    auto it = std::lower_bound(set.begin(), set.end(), *value);
    if (it == set.end() || *it != *value) {
        set.insert(it, *value);
    }
}

/**
 * The four LUCB boundary arms around ranking positions kappa1 and kappa2:
 * for each kappa, the weakest member of the top-kappa set (smallest lower
 * bound) and the strongest non-member (largest upper bound).
 */
inline std::vector<int> lucb_boundary_arms(std::span<const double> ranking_values,
                                           std::span<const Interval> bounds, int kappa1,
                                           int kappa2) {
    const int n = static_cast<int>(ranking_values.size());
    std::vector<int> selected;
    for (int kappa : {kappa1, kappa2}) {
        const std::vector<int> top = top_k_indices(ranking_values, kappa);
        std::vector<std::uint8_t> in_top(n, 0);
        for (int i : top) {
            in_top[i] = 1;
        }
        std::vector<int> rest;
        for (int i = 0; i < n; ++i) {
            if (!in_top[i]) {
                rest.push_back(i);
            }
        }
        insert_sorted_unique(selected, argmin_by(std::span<const int>(top),
                                                 [&](int i) { return bounds[i].lo; }));
        insert_sorted_unique(selected, argmax_by(std::span<const int>(rest),
                                                 [&](int i) { return bounds[i].hi; }));
    }
    return selected;
}

}  // namespace detail

/// Monotone active sets of the elimination sampler.
struct ElimState {
    std::vector<std::uint8_t> in_median;
    std::vector<std::uint8_t> in_mad;
    std::vector<std::uint8_t> in_theta;
    int round = 0;

    static ElimState initial(int n) {
        ElimState s;
        s.in_median.assign(n, 1);
        s.in_mad.assign(n, 1);
        s.in_theta.assign(n, 1);
        return s;
    }

    static std::vector<int> to_indices(const std::vector<std::uint8_t>& mask) {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
            if (mask[i]) {
                out.push_back(i);
            }
        }
        return out;
    }
};

/**
 * One elimination round: shrink each active set to the arms whose current
 * interval still overlaps the corresponding derived interval, pull the
 * union, and stop once the threshold set empties.
 */
inline SamplerStep elim_step(ElimState& state, const CiSnapshot& snapshot,
                             std::span<const double> empirical_means) {
    const int n = snapshot.num_arms();
    bool any_theta = false;
    for (int i = 0; i < n; ++i) {
        state.in_median[i] &= snapshot.arm_intervals[i].overlaps(snapshot.median_interval);
        state.in_mad[i] &= snapshot.ad_intervals[i].overlaps(snapshot.mad_interval);
        state.in_theta[i] &= snapshot.arm_intervals[i].overlaps(snapshot.theta_interval);
        any_theta |= (state.in_theta[i] != 0);
    }
    ++state.round;

    SamplerStep step;
    if (!any_theta) {
        step.stopped = true;
        step.recommendation = recommend(snapshot, empirical_means);
        return step;
    }
    for (int i = 0; i < n; ++i) {
        if (state.in_median[i] || state.in_mad[i] || state.in_theta[i]) {
            step.arms_to_pull.push_back(i);
        }
    }
    return step;
}

/// Round counter and last boundary selections of the LUCB sampler.
struct LucbState {
    int round = 0;
    int kappa1 = 0;
    int kappa2 = 0;
    std::vector<int> median_set;
    std::vector<int> mad_set;
    std::vector<int> theta_set;
};

/**
 * One LUCB round: pull the union of the median boundary arms (up to 4),
 * the MAD boundary arms over empirical absolute deviations (up to 4), and
 * the threshold boundary arms (up to 2, restricted to arms whose interval
 * still overlaps the threshold interval).  Stops once that last set is
 * empty.
 */
inline SamplerStep lucb_step(LucbState& state, const CiSnapshot& snapshot,
                             std::span<const double> empirical_means) {
    const int n = snapshot.num_arms();
    const int m = static_cast<int>(median_rank(static_cast<std::size_t>(n)));
    state.kappa1 = m - 1;
    state.kappa2 = m;
    ++state.round;

    state.median_set = detail::lucb_boundary_arms(empirical_means, snapshot.arm_intervals,
                                                  state.kappa1, state.kappa2);
    state.mad_set = detail::lucb_boundary_arms(snapshot.ad_midpoints, snapshot.ad_intervals,
                                               state.kappa1, state.kappa2);

    const std::vector<int> outliers = recommend(snapshot, empirical_means);
    std::vector<int> normals;
    {
        std::vector<std::uint8_t> is_outlier(n, 0);
        for (int i : outliers) {
            is_outlier[i] = 1;
        }
        for (int i = 0; i < n; ++i) {
            if (!is_outlier[i]) {
                normals.push_back(i);
            }
        }
    }
    std::vector<int> theta_candidates;
    detail::insert_sorted_unique(theta_candidates,
                                 detail::argmin_by(std::span<const int>(outliers),
                                                   [&](int i) { return snapshot.arm_intervals[i].lo; }));
    detail::insert_sorted_unique(theta_candidates,
                                 detail::argmax_by(std::span<const int>(normals),
                                                   [&](int i) { return snapshot.arm_intervals[i].hi; }));
    state.theta_set.clear();
    for (int i : theta_candidates) {
        if (snapshot.arm_intervals[i].overlaps(snapshot.theta_interval)) {
            state.theta_set.push_back(i);
        }
    }

    SamplerStep step;
    if (state.theta_set.empty()) {
        step.stopped = true;
        step.recommendation = outliers;
        return step;
    }
    step.arms_to_pull = state.median_set;
    for (int i : state.mad_set) {
        detail::insert_sorted_unique(step.arms_to_pull, i);
    }
    for (int i : state.theta_set) {
        detail::insert_sorted_unique(step.arms_to_pull, i);
    }
    return step;
}

/// Round-robin baseline: pull everything until the stopping rule fires.
inline SamplerStep uniform_step(const CiSnapshot& snapshot,
                                std::span<const double> empirical_means) {
    const int n = snapshot.num_arms();
    bool any_overlap = false;
    for (int i = 0; i < n && !any_overlap; ++i) {
        any_overlap = snapshot.arm_intervals[i].overlaps(snapshot.theta_interval);
    }
    SamplerStep step;
    if (!any_overlap) {
        step.stopped = true;
        step.recommendation = recommend(snapshot, empirical_means);
        return step;
    }
    step.arms_to_pull.resize(n);
    std::iota(step.arms_to_pull.begin(), step.arms_to_pull.end(), 0);
    return step;
}

/// Subset used by the subsampled threshold, plus a cardinality warning.
struct SubsetSelection {
    std::vector<int> omega;           // sorted ascending
    bool cardinality_warning = false;  // lambda too small for the contamination bound
};

/**
 * Uniformly random subset of size max(floor(lambda * floor(n * epsilon)) + 1,
 * floor_size).  With a true contamination bound epsilon the subset median
 * survives only when lambda >= 2; smaller lambdas are allowed but flagged.
 */
inline SubsetSelection select_subset(int n, double epsilon, double lambda, int floor_size,
                                     std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("select_subset: n must be positive");
    }
    if (epsilon < 0.0 || epsilon >= 0.5) {
        throw std::invalid_argument("select_subset: contamination breaks median");
    }
    const int contaminated = static_cast<int>(std::floor(n * epsilon));
    const int target = std::max(static_cast<int>(std::floor(lambda * contaminated)) + 1,
                                std::max(floor_size, 1));
    if (target > n) {
        throw std::invalid_argument("select_subset: requested size exceeds number of arms");
    }

    SubsetSelection result;
    result.cardinality_warning = (contaminated > 0 && lambda < 2.0);

    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < target; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    result.omega.assign(pool.begin(), pool.begin() + target);
    std::sort(result.omega.begin(), result.omega.end());
    return result;
}

/**
 * One round of LUCB with the threshold built from the subset omega.
 *
 * `snapshot_omega` holds intervals for omega's arms only (in omega order)
 * with the median rank taken over |omega|.  Median and MAD selections are
 * restricted to omega; the stopping test and recommendation run over all n
 * arms against the omega-derived threshold interval.  With omega = [n] the
 * behavior is identical to lucb_step, round for round.
 */
inline SamplerStep subsampled_lucb_step(LucbState& state, const CiSnapshot& snapshot_omega,
                                        std::span<const int> omega,
                                        std::span<const Interval> full_arm_intervals,
                                        std::span<const double> empirical_means) {
    const int subset_size = snapshot_omega.num_arms();
    if (subset_size != static_cast<int>(omega.size())) {
        throw std::invalid_argument("subsampled_lucb_step: snapshot and omega sizes differ");
    }
    const int n = static_cast<int>(full_arm_intervals.size());
    const int m = static_cast<int>(median_rank(static_cast<std::size_t>(subset_size)));
    state.kappa1 = m - 1;
    state.kappa2 = m;
    ++state.round;

    std::vector<double> omega_means(subset_size);
    for (int p = 0; p < subset_size; ++p) {
        omega_means[p] = empirical_means[omega[p]];
    }
    const std::vector<int> median_positions = detail::lucb_boundary_arms(
        omega_means, snapshot_omega.arm_intervals, state.kappa1, state.kappa2);
    const std::vector<int> mad_positions = detail::lucb_boundary_arms(
        snapshot_omega.ad_midpoints, snapshot_omega.ad_intervals, state.kappa1, state.kappa2);
    state.median_set.clear();
    for (int p : median_positions) {
        state.median_set.push_back(omega[p]);
    }
    state.mad_set.clear();
    for (int p : mad_positions) {
        state.mad_set.push_back(omega[p]);
    }

    std::vector<int> outliers, normals;
    for (int i = 0; i < n; ++i) {
        (empirical_means[i] > snapshot_omega.theta_midpoint ? outliers : normals).push_back(i);
    }
    std::vector<int> theta_candidates;
    detail::insert_sorted_unique(theta_candidates,
                                 detail::argmin_by(std::span<const int>(outliers),
                                                   [&](int i) { return full_arm_intervals[i].lo; }));
    detail::insert_sorted_unique(theta_candidates,
                                 detail::argmax_by(std::span<const int>(normals),
                                                   [&](int i) { return full_arm_intervals[i].hi; }));
    state.theta_set.clear();
    for (int i : theta_candidates) {
        if (full_arm_intervals[i].overlaps(snapshot_omega.theta_interval)) {
            state.theta_set.push_back(i);
        }
    }

    SamplerStep step;
    if (state.theta_set.empty()) {
        step.stopped = true;
        step.recommendation = outliers;
        return step;
    }
    step.arms_to_pull = state.median_set;
    std::sort(step.arms_to_pull.begin(), step.arms_to_pull.end());
    for (int i : state.mad_set) {
        detail::insert_sorted_unique(step.arms_to_pull, i);
    }
    for (int i : state.theta_set) {
        detail::insert_sorted_unique(step.arms_to_pull, i);
    }
    return step;
}

/**
 * Uniform interface over the four samplers: one call per round, fed with
 * the current per-arm statistics.
 */
class Sampler {
  public:
    virtual ~Sampler() = default;
    virtual const char* name() const = 0;
    virtual SamplerStep step(std::span<const ArmStatistics> stats) = 0;
    /// Snapshot used by the most recent step (for traces and diagnostics).
    virtual const CiSnapshot& last_snapshot() const = 0;
    /// True once any interval intersection came up empty in this run.
    virtual bool coverage_violated() const { return false; }
};

namespace detail {

inline std::vector<double> empirical_means_of(std::span<const ArmStatistics> stats) {
    std::vector<double> means(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        means[i] = stats[i].empirical_mean();
    }
    return means;
}

inline std::vector<Interval> plain_intervals(std::span<const ArmStatistics> stats, int n,
                                             double delta) {
    std::vector<Interval> out(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out[i] = arm_interval(stats[i], n, delta);
    }
    return out;
}

}  // namespace detail

/// ROAIElim: intersecting intervals, zero-clamped deviations by default.
class RoaiElimSampler final : public Sampler {
  public:
    RoaiElimSampler(int n, double delta, double k_eff, bool clamp_at_zero = true)
        : n_(n), delta_(delta), k_eff_(k_eff), clamp_(clamp_at_zero),
          state_(ElimState::initial(n)), current_(n, Interval::sentinel()) {}

    const char* name() const override { return "roai-elim"; }

    SamplerStep step(std::span<const ArmStatistics> stats) override {
        const std::vector<Interval> fresh = detail::plain_intervals(stats, n_, delta_);
        for (int i = 0; i < n_; ++i) {
            auto [merged, violated] = intersect_update(current_[i], fresh[i]);
            current_[i] = merged;
            violated_ |= violated;
        }
        snapshot_ = build_snapshot(current_, k_eff_, clamp_);
        snapshot_.coverage_violation = violated_;
        return elim_step(state_, snapshot_, detail::empirical_means_of(stats));
    }

    const CiSnapshot& last_snapshot() const override { return snapshot_; }
    bool coverage_violated() const override { return violated_; }
    const ElimState& state() const { return state_; }

  private:
    int n_;
    double delta_;
    double k_eff_;
    bool clamp_;
    ElimState state_;
    std::vector<Interval> current_;
    CiSnapshot snapshot_;
    bool violated_ = false;
};

/// ROAILUCB: plain intervals, unclamped deviations by default.
class RoaiLucbSampler final : public Sampler {
  public:
    RoaiLucbSampler(int n, double delta, double k_eff, bool clamp_at_zero = false)
        : n_(n), delta_(delta), k_eff_(k_eff), clamp_(clamp_at_zero) {}

    const char* name() const override { return "roai-lucb"; }

    SamplerStep step(std::span<const ArmStatistics> stats) override {
        snapshot_ = build_snapshot(detail::plain_intervals(stats, n_, delta_), k_eff_, clamp_);
        return lucb_step(state_, snapshot_, detail::empirical_means_of(stats));
    }

    const CiSnapshot& last_snapshot() const override { return snapshot_; }
    const LucbState& state() const { return state_; }

  private:
    int n_;
    double delta_;
    double k_eff_;
    bool clamp_;
    LucbState state_;
    CiSnapshot snapshot_;
};

/// Random baseline with the shared stopping rule.
class UniformSampler final : public Sampler {
  public:
    UniformSampler(int n, double delta, double k_eff, bool clamp_at_zero = false)
        : n_(n), delta_(delta), k_eff_(k_eff), clamp_(clamp_at_zero) {}

    const char* name() const override { return "uniform"; }

    SamplerStep step(std::span<const ArmStatistics> stats) override {
        snapshot_ = build_snapshot(detail::plain_intervals(stats, n_, delta_), k_eff_, clamp_);
        return uniform_step(snapshot_, detail::empirical_means_of(stats));
    }

    const CiSnapshot& last_snapshot() const override { return snapshot_; }

  private:
    int n_;
    double delta_;
    double k_eff_;
    bool clamp_;
    CiSnapshot snapshot_;
};

/// LUCB with median/MAD/threshold built from a fixed subset of arms.
class SubsampledLucbSampler final : public Sampler {
  public:
    SubsampledLucbSampler(int n, double delta, double k_eff, std::vector<int> omega,
                          bool clamp_at_zero = false)
        : n_(n), delta_(delta), k_eff_(k_eff), clamp_(clamp_at_zero), omega_(std::move(omega)) {
        if (omega_.empty() || omega_.front() < 0 || omega_.back() >= n_) {
            throw std::invalid_argument("SubsampledLucbSampler: omega out of range");
        }
    }

    const char* name() const override { return "roai-lucb-subsampled"; }

    SamplerStep step(std::span<const ArmStatistics> stats) override {
        full_intervals_ = detail::plain_intervals(stats, n_, delta_);
        std::vector<Interval> omega_intervals;
        omega_intervals.reserve(omega_.size());
        for (int i : omega_) {
            omega_intervals.push_back(full_intervals_[i]);
        }
        snapshot_ = build_snapshot(std::move(omega_intervals), k_eff_, clamp_);
        return subsampled_lucb_step(state_, snapshot_, omega_, full_intervals_,
                                    detail::empirical_means_of(stats));
    }

    const CiSnapshot& last_snapshot() const override { return snapshot_; }
    const std::vector<int>& omega() const { return omega_; }
    const std::vector<Interval>& full_arm_intervals() const { return full_intervals_; }

  private:
    int n_;
    double delta_;
    double k_eff_;
    bool clamp_;
    std::vector<int> omega_;
    LucbState state_;
    std::vector<Interval> full_intervals_;
    CiSnapshot snapshot_;
};

}  // namespace roai

#endif
