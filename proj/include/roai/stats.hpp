#ifndef ROAI_STATS_HPP
#define ROAI_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

/**
 * @file stats.hpp
 *
 * @brief Order statistics with the m-th-largest median convention.
 *
 * Throughout this library the median of n values is the m-th largest value
 * with m = ceil(n/2).  For odd n this is the usual middle element; for even
 * n it is the upper of the two middle values.  The same rule is applied to
 * the median of absolute deviations.
 */

namespace roai {

/// Index of the median in a descending ordering: m = ceil(n/2), 1-based.
inline std::size_t median_rank(std::size_t n) {
    return (n + 1) / 2;
}

/// j-th largest element of `values` (1-based, j in [1, n]).
inline double kth_largest(std::span<const double> values, std::size_t j) {
    if (values.empty()) {
        throw std::invalid_argument("kth_largest: empty sequence");
    }
    if (j < 1 || j > values.size()) {
        throw std::invalid_argument("kth_largest: rank out of range");
    }
    std::vector<double> work(values.begin(), values.end());
    // j-th largest == (j-1)-th element of a descending ordering.
    std::nth_element(work.begin(), work.begin() + (j - 1), work.end(), std::greater<double>());
    return work[j - 1];
}

/**
 * Median as the m-th largest value, m = ceil(n/2).
 *
 * For even length 2m the result is the m-th largest, i.e. the upper of the
 * two middle values: median_of({1,2,3,4}) == 3.
 */
inline double median_of(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median_of: empty sequence");
    }
    return kth_largest(values, median_rank(values.size()));
}

inline double median_of(const std::vector<double>& values) {
    return median_of(std::span<const double>(values));
}

/// Absolute deviations |v_i - median_of(values)| in input order.
inline std::vector<double> absolute_deviations(std::span<const double> values) {
    const double med = median_of(values);
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back(std::abs(v - med));
    }
    return out;
}

/// Median absolute deviation, same m-th-largest convention as median_of.
inline double mad_of(std::span<const double> values) {
    const std::vector<double> devs = absolute_deviations(values);
    return median_of(devs);
}

inline double mad_of(const std::vector<double>& values) {
    return mad_of(std::span<const double>(values));
}

}  // namespace roai

#endif
