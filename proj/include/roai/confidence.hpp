#ifndef ROAI_CONFIDENCE_HPP
#define ROAI_CONFIDENCE_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "roai/interval.hpp"
#include "roai/stats.hpp"

/**
 * @file confidence.hpp
 *
 * @brief Per-arm confidence bounds and the derived intervals for the
 * median, the absolute deviations, the MAD, and the outlier threshold.
 *
 * Arm i pulled s times gets the anytime Hoeffding interval
 * [mean - beta_s, mean + beta_s] with beta_s = sqrt(log(4 n s^2 / delta) / (2 s)).
 * A union bound over arms and pull counts makes all intervals
 * simultaneously valid with probability at least 1 - delta, and the
 * derived intervals built here inherit that validity.
 */

namespace roai {

/// Anytime confidence half-width after s pulls (natural log).
inline double beta_width(std::int64_t s, int n, double delta) {
    if (s < 1) {
        throw std::invalid_argument("beta_width: unpulled arm has no finite width");
    }
    if (n < 1 || delta <= 0.0 || delta >= 1.0) {
        throw std::invalid_argument("beta_width: need n >= 1 and delta in (0, 1)");
    }
    const double sd = static_cast<double>(s);
    return std::sqrt(std::log(4.0 * n * sd * sd / delta) / (2.0 * sd));
}

/// Pull count and reward sum of one arm.
struct ArmStatistics {
    std::int64_t pulls = 0;
    double reward_sum = 0.0;

    void record(double reward) {
        ++pulls;
        reward_sum += reward;
    }

    double empirical_mean() const {
        if (pulls < 1) {
            throw std::logic_error("ArmStatistics: empirical mean of an unpulled arm");
        }
        return reward_sum / static_cast<double>(pulls);
    }
};

/// Symmetric interval around the empirical mean; sentinel when unpulled.
inline Interval arm_interval(const ArmStatistics& stat, int n, double delta) {
    if (stat.pulls < 1) {
        return Interval::sentinel();
    }
    const double mean = stat.empirical_mean();
    const double beta = beta_width(stat.pulls, n, delta);
    return Interval{mean - beta, mean + beta};
}

/// Componentwise median of interval endpoints (m-th-largest convention).
inline Interval median_interval(std::span<const Interval> intervals) {
    if (intervals.empty()) {
        throw std::invalid_argument("median_interval: empty sequence");
    }
    std::vector<double> lows, highs;
    lows.reserve(intervals.size());
    highs.reserve(intervals.size());
    for (const Interval& iv : intervals) {
        lows.push_back(iv.lo);
        highs.push_back(iv.hi);
    }
    return Interval{median_of(lows), median_of(highs)};
}

/**
 * Interval for the absolute difference |a - b| given intervals for a and b.
 *
 * The lower bound is the smallest distance between the two intervals (0 when
 * they overlap and clamp_at_zero is set; the unclamped variant can go
 * negative and keeps the midpoint exactly at the empirical deviation, which
 * the LUCB selection rule relies on).  The upper bound is the largest
 * distance between points of the two intervals.
 */
inline Interval find_ad(const Interval& arm, const Interval& median, bool clamp_at_zero) {
    double lower = std::max(arm.lo - median.hi, median.lo - arm.hi);
    if (clamp_at_zero) {
        lower = std::max(lower, 0.0);
    }
    const double upper = std::max(arm.hi - median.lo, median.hi - arm.lo);
    return Interval{lower, upper};
}

/**
 * All derived intervals at one round.
 *
 * theta_interval is [median.lo + k_eff * mad.lo, median.hi + k_eff * mad.hi];
 * ad_midpoints and theta_midpoint are exact interval centers.
 * coverage_violation is set by samplers that intersect intervals over
 * rounds, when an intersection came up empty.
 */
struct CiSnapshot {
    std::vector<Interval> arm_intervals;
    Interval median_interval;
    std::vector<Interval> ad_intervals;
    std::vector<double> ad_midpoints;
    Interval mad_interval;
    Interval theta_interval;
    double theta_midpoint = 0.0;
    bool coverage_violation = false;

    int num_arms() const { return static_cast<int>(arm_intervals.size()); }
};

/// Runs the full interval construction over one set of arm intervals.
inline CiSnapshot build_snapshot(std::vector<Interval> arm_intervals, double k_eff,
                                 bool clamp_at_zero) {
    if (arm_intervals.empty()) {
        throw std::invalid_argument("build_snapshot: empty sequence");
    }
    for (const Interval& iv : arm_intervals) {
        if (iv.is_sentinel()) {
            throw std::invalid_argument("build_snapshot: initialize by pulling every arm once");
        }
    }

    CiSnapshot snap;
    snap.arm_intervals = std::move(arm_intervals);
    snap.median_interval = roai::median_interval(snap.arm_intervals);

    snap.ad_intervals.reserve(snap.arm_intervals.size());
    snap.ad_midpoints.reserve(snap.arm_intervals.size());
    for (const Interval& iv : snap.arm_intervals) {
        const Interval ad = find_ad(iv, snap.median_interval, clamp_at_zero);
        snap.ad_intervals.push_back(ad);
        snap.ad_midpoints.push_back(ad.midpoint());
    }
    snap.mad_interval = roai::median_interval(snap.ad_intervals);

    snap.theta_interval = Interval{snap.median_interval.lo + k_eff * snap.mad_interval.lo,
                                   snap.median_interval.hi + k_eff * snap.mad_interval.hi};
    snap.theta_midpoint = snap.theta_interval.midpoint();
    return snap;
}

}  // namespace roai

#endif
