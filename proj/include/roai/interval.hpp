#ifndef ROAI_INTERVAL_HPP
#define ROAI_INTERVAL_HPP

#include <algorithm>
#include <limits>
#include <utility>

namespace roai {

/**
 * Closed interval [lo, hi].
 *
 * Unpulled arms carry the unbounded sentinel (-inf, +inf); everything else
 * keeps lo <= hi.  Overlap tests treat intervals as closed, so touching
 * endpoints count as a non-empty intersection.
 */
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static Interval sentinel() { return Interval{}; }

    bool is_sentinel() const {
        return lo == -std::numeric_limits<double>::infinity() &&
               hi == std::numeric_limits<double>::infinity();
    }

    double width() const { return hi - lo; }
    double midpoint() const { return (lo + hi) / 2.0; }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool overlaps(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }

    bool operator==(const Interval& other) const = default;
};

/**
 * Running intersection of confidence intervals.
 *
 * Returns [max(lo), min(hi)].  When the inputs are disjoint (possible only
 * off the high-probability event) the result collapses to the point at the
 * midpoint of the gap and the second member is true; the caller records the
 * violation and the run continues.
 */
inline std::pair<Interval, bool> intersect_update(const Interval& previous, const Interval& fresh) {
    const double lo = std::max(previous.lo, fresh.lo);
    const double hi = std::min(previous.hi, fresh.hi);
    if (lo > hi) {
        const double mid = (lo + hi) / 2.0;
        return {Interval{mid, mid}, true};
    }
    return {Interval{lo, hi}, false};
}

}  // namespace roai

#endif
