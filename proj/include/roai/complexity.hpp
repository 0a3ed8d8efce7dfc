#ifndef ROAI_COMPLEXITY_HPP
#define ROAI_COMPLEXITY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roai/instance.hpp"
#include "roai/stats.hpp"

/**
 * @file complexity.hpp
 *
 * @brief Instance-dependent sample-complexity quantities.
 *
 * The hardness of classifying arm i is governed by
 *
 *     gap*_i = max{ gap_theta_min, min{ gap_theta_i, gap_median_i, gap_mad_i } },
 *
 * built from the arm's distances to the threshold, the median, and the MAD.
 * Upper bounds sum C k^2 log(n k / (delta gap*_i)) / gap*_i^2 over arms; the
 * worst-case lower bound sums log(1 / (2.4 delta)) / (5 gap*_i^2) and holds
 * on the instance family checked by check_instance_class.
 */

namespace roai {

/// Per-arm and global gaps of one instance.
struct GapProfile {
    std::vector<double> theta_gap;   ///< |theta - y_i|
    std::vector<double> median_gap;  ///< |median - y_i|
    std::vector<double> mad_gap;     ///< |MAD - AD_i|
    std::vector<double> star_gap;    ///< combined hardness gap per arm
    double theta_gap_min = 0.0;      ///< min_i |theta - y_i|
    double theta = 0.0;
    double median = 0.0;
    double mad = 0.0;
    bool degenerate = false;  ///< some arm sits exactly on the threshold

    int num_arms() const { return static_cast<int>(theta_gap.size()); }
};

inline GapProfile gap_profile(std::span<const double> means, double k_eff) {
    if (means.empty()) {
        throw std::invalid_argument("gap_profile: empty sequence of means");
    }
    GapProfile p;
    p.median = median_of(means);
    p.mad = mad_of(means);
    p.theta = p.median + k_eff * p.mad;

    const int n = static_cast<int>(means.size());
    p.theta_gap.resize(n);
    p.median_gap.resize(n);
    p.mad_gap.resize(n);
    p.star_gap.resize(n);
    p.theta_gap_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        p.theta_gap[i] = std::abs(p.theta - means[i]);
        p.median_gap[i] = std::abs(p.median - means[i]);
        const double ad = std::abs(means[i] - p.median);
        p.mad_gap[i] = std::abs(p.mad - ad);
        p.theta_gap_min = std::min(p.theta_gap_min, p.theta_gap[i]);
        if (p.theta_gap[i] == 0.0) {
            p.degenerate = true;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double inner = std::min({p.theta_gap[i], p.median_gap[i], p.mad_gap[i]});
        p.star_gap[i] = std::max(p.theta_gap_min, inner);
    }
    return p;
}

inline GapProfile gap_profile(const std::vector<double>& means, double k_eff) {
    return gap_profile(std::span<const double>(means), k_eff);
}

inline GapProfile gap_profile(const BanditInstance& instance) {
    return gap_profile(instance.means, instance.k_eff());
}

namespace detail {

inline double bound_term(double gap, double log_numerator, double delta) {
    if (gap <= 0.0) {
        throw std::domain_error("upper_bound: bound undefined on degenerate instance");
    }
    return std::log(log_numerator / (delta * gap)) / (gap * gap);
}

}  // namespace detail

/**
 * Gap-dependent sample-complexity upper bound
 * C k^2 sum_i log(n k / (delta gap*_i)) / gap*_i^2.
 *
 * The multiplier k here is the one the bound is stated for; build the
 * profile with the same effective multiplier the algorithm runs with.
 */
inline double upper_bound(const GapProfile& profile, int n, double k, double delta, double C) {
    if (C <= 0.0 || k <= 0.0 || delta <= 0.0 || delta >= 1.0 || n < 1) {
        throw std::invalid_argument("upper_bound: need C > 0, k > 0, delta in (0,1), n >= 1");
    }
    double total = 0.0;
    for (double gap : profile.star_gap) {
        total += detail::bound_term(gap, n * k, delta);
    }
    return C * k * k * total;
}

/**
 * Bound variant for thresholds built from the subset omega: full gap terms
 * for arms in omega (gaps taken relative to omega's median, MAD, and
 * threshold), plus pure threshold-gap terms for arms outside.
 *
 * mad_scale only rescales the threshold geometry; the k^2 and log factors
 * use k as given.
 */
inline double subsample_upper_bound(std::span<const double> means, std::span<const int> omega,
                                    double k, double delta, double C, double mad_scale = 1.0) {
    if (omega.empty()) {
        throw std::invalid_argument("subsample_upper_bound: empty subset");
    }
    if (C <= 0.0 || k <= 0.0 || delta <= 0.0 || delta >= 1.0) {
        throw std::invalid_argument("subsample_upper_bound: need C > 0, k > 0, delta in (0,1)");
    }
    const int n = static_cast<int>(means.size());
    std::vector<char> in_omega(n, 0);
    std::vector<double> omega_means;
    omega_means.reserve(omega.size());
    for (int i : omega) {
        if (i < 0 || i >= n) {
            throw std::invalid_argument("subsample_upper_bound: omega index out of range");
        }
        in_omega[i] = 1;
        omega_means.push_back(means[i]);
    }

    const double median = median_of(omega_means);
    const double mad = mad_of(omega_means);
    const double theta = median + k * mad_scale * mad;

    double theta_gap_min = std::numeric_limits<double>::infinity();
    std::vector<double> theta_gap(n);
    for (int i = 0; i < n; ++i) {
        theta_gap[i] = std::abs(theta - means[i]);
        theta_gap_min = std::min(theta_gap_min, theta_gap[i]);
    }

    double inside = 0.0, outside = 0.0;
    for (int i = 0; i < n; ++i) {
        if (in_omega[i]) {
            const double median_gap = std::abs(median - means[i]);
            const double mad_gap = std::abs(mad - std::abs(means[i] - median));
            const double star =
                std::max(theta_gap_min, std::min({theta_gap[i], median_gap, mad_gap}));
            inside += detail::bound_term(star, n * k, delta);
        } else {
            outside += detail::bound_term(theta_gap[i], n, delta);
        }
    }
    return C * k * k * inside + C * outside;
}

/// Largest delta for which the worst-case lower bound is stated.
inline constexpr double kLowerBoundMaxDelta = 0.15;

/// Worst-case expected-sample lower bound sum_i log(1/(2.4 delta)) / (5 gap*_i^2).
inline double lower_bound(const GapProfile& profile, double delta) {
    if (delta <= 0.0 || delta >= 1.0) {
        throw std::invalid_argument("lower_bound: delta must lie in (0, 1)");
    }
    double total = 0.0;
    for (double gap : profile.star_gap) {
        if (gap <= 0.0) {
            throw std::domain_error("lower_bound: bound undefined on degenerate instance");
        }
        total += 1.0 / (5.0 * gap * gap);
    }
    return total * std::log(1.0 / (2.4 * delta));
}

/**
 * Membership report for the hard-instance family the lower bound covers.
 *
 * eta is half the smallest neighborhood gap around the median and MAD
 * ranks; membership requires k >= 2, unique median and MAD, rho < eta, two
 * arms strictly inside each of the bands (theta - rho, theta - rho/2) and
 * (theta + rho/2, theta + rho), and no arm in [theta - rho/2, theta + rho/2].
 */
struct InstanceClassReport {
    bool is_member = false;
    double eta = std::numeric_limits<double>::quiet_NaN();
    double theta = std::numeric_limits<double>::quiet_NaN();
    std::optional<int> l1, l2;  ///< witnesses below the threshold
    std::optional<int> u1, u2;  ///< witnesses above the threshold
    std::vector<std::string> failure_reasons;
};

inline InstanceClassReport check_instance_class(std::span<const double> means, double k,
                                                double rho) {
    InstanceClassReport report;
    if (means.empty()) {
        report.failure_reasons.push_back("empty instance");
        return report;
    }
    if (k < 2.0) {
        report.failure_reasons.push_back("k must be >= 2");
    }
    if (rho <= 0.0) {
        report.failure_reasons.push_back("rho must be > 0");
    }

    const std::size_t n = means.size();
    const std::size_t m = median_rank(n);
    if (m < 2 || n < m + 1) {
        report.failure_reasons.push_back("too few arms for the neighborhood gaps");
        return report;
    }

    const double median = median_of(means);
    const std::vector<double> devs = absolute_deviations(means);
    const double mad = median_of(devs);
    report.theta = median + k * mad;

    if (std::count(means.begin(), means.end(), median) != 1) {
        report.failure_reasons.push_back("median is not unique");
    }
    if (std::count(devs.begin(), devs.end(), mad) != 1) {
        report.failure_reasons.push_back("MAD is not unique");
    }

    // eta = 1/2 min over i in {m-1, m} of the descending order-statistic
    // gaps of the means and of the absolute deviations.
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i : {m - 1, m}) {
        min_gap = std::min(min_gap, kth_largest(means, i) - kth_largest(means, i + 1));
        min_gap = std::min(min_gap, kth_largest(devs, i) - kth_largest(devs, i + 1));
    }
    report.eta = min_gap / 2.0;
    if (!(rho < report.eta)) {
        report.failure_reasons.push_back("rho is not smaller than eta");
    }

    std::vector<int> below, above;
    bool forbidden_band_occupied = false;
    for (int i = 0; i < static_cast<int>(n); ++i) {
        const double diff = means[i] - report.theta;
        if (std::abs(diff) <= rho / 2.0) {
            forbidden_band_occupied = true;
        } else if (diff < 0.0 && -diff < rho) {
            below.push_back(i);
        } else if (diff > 0.0 && diff < rho) {
            above.push_back(i);
        }
    }
    if (below.size() >= 2) {
        report.l1 = below[0];
        report.l2 = below[1];
    } else {
        report.failure_reasons.push_back("fewer than two arms in the band below the threshold");
    }
    if (above.size() >= 2) {
        report.u1 = above[0];
        report.u2 = above[1];
    } else {
        report.failure_reasons.push_back("fewer than two arms in the band above the threshold");
    }
    if (forbidden_band_occupied) {
        report.failure_reasons.push_back("an arm lies in the closed band around the threshold");
    }

    report.is_member = report.failure_reasons.empty();
    return report;
}

inline InstanceClassReport check_instance_class(const std::vector<double>& means, double k,
                                                double rho) {
    return check_instance_class(std::span<const double>(means), k, rho);
}

}  // namespace roai

#endif
