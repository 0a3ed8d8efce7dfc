#ifndef ROAI_INSTANCE_HPP
#define ROAI_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roai/stats.hpp"

/**
 * @file instance.hpp
 *
 * @brief Bandit instances, outlier thresholds, and synthetic generators.
 *
 * An instance is a vector of arm means plus a reward model.  Outlier arms
 * are the arms whose mean strictly exceeds
 *
 *     theta = median(means) + k_eff * MAD(means),
 *
 * where k_eff = k * mad_scale.  The mad_scale factor (typically 1.4826, the
 * normal-consistency multiplier for the MAD) is folded into k everywhere,
 * including confidence-interval construction.
 */

namespace roai {

enum class RewardModel {
    kGaussian,   ///< mean + sigma * standard normal
    kBernoulli,  ///< 1 with probability mean, else 0; means must lie in [0, 1]
};

struct BanditInstance {
    std::vector<double> means;
    RewardModel reward_model = RewardModel::kGaussian;
    double sigma = 1.0;      ///< Gaussian reward scale (ignored for Bernoulli)
    double k = 2.0;          ///< outlier parameter, >= 1
    double mad_scale = 1.0;  ///< MAD consistency multiplier, > 0

    int num_arms() const { return static_cast<int>(means.size()); }

    /// Effective multiplier used everywhere theta appears.
    double k_eff() const { return k * mad_scale; }

    void validate() const {
        if (means.empty()) {
            throw std::invalid_argument("BanditInstance: empty sequence of means");
        }
        for (double m : means) {
            if (!std::isfinite(m)) {
                throw std::invalid_argument("BanditInstance: means must be finite");
            }
        }
        if (k < 1.0) {
            throw std::invalid_argument("BanditInstance: k must be >= 1");
        }
        if (mad_scale <= 0.0) {
            throw std::invalid_argument("BanditInstance: mad_scale must be > 0");
        }
        if (reward_model == RewardModel::kGaussian && sigma <= 0.0) {
            throw std::invalid_argument("BanditInstance: sigma must be > 0");
        }
        if (reward_model == RewardModel::kBernoulli) {
            for (double m : means) {
                if (m < 0.0 || m > 1.0) {
                    throw std::invalid_argument(
                        "BanditInstance: Bernoulli model requires every mean in [0, 1]");
                }
            }
        }
    }
};

/// Robust outlier threshold: median + k_eff * MAD.
inline double robust_threshold(std::span<const double> means, double k_eff) {
    if (k_eff <= 0.0) {
        throw std::invalid_argument("robust_threshold: k_eff must be > 0");
    }
    return median_of(means) + k_eff * mad_of(means);
}

inline double robust_threshold(const std::vector<double>& means, double k_eff) {
    return robust_threshold(std::span<const double>(means), k_eff);
}

/// Ground-truth threshold of an instance.
inline double theta_of(const BanditInstance& instance) {
    return robust_threshold(instance.means, instance.k_eff());
}

/**
 * Non-robust threshold: sample mean + k * population standard deviation
 * (divisor n).  Kept for the robustness comparison; a single extreme arm
 * can move it arbitrarily.
 */
inline double nonrobust_threshold(std::span<const double> means, double k) {
    if (means.empty()) {
        throw std::invalid_argument("nonrobust_threshold: empty sequence of means");
    }
    const double n = static_cast<double>(means.size());
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
    double ss = 0.0;
    for (double m : means) {
        ss += (m - mean) * (m - mean);
    }
    return mean + k * std::sqrt(ss / n);
}

inline double nonrobust_threshold(const std::vector<double>& means, double k) {
    return nonrobust_threshold(std::span<const double>(means), k);
}

/**
 * Arms strictly above the threshold, plus a degeneracy flag.
 *
 * The flag is set when some mean equals the threshold exactly; such
 * instances violate the identifiability assumption and are excluded from
 * error statistics by the simulation harness, but the set itself is still
 * well defined (strict inequality).
 */
struct OutlierSet {
    std::vector<int> indices;
    bool degenerate = false;
};

inline OutlierSet true_outlier_set(std::span<const double> means, double threshold) {
    OutlierSet out;
    for (int i = 0; i < static_cast<int>(means.size()); ++i) {
        if (means[i] > threshold) {
            out.indices.push_back(i);
        } else if (means[i] == threshold) {
            out.degenerate = true;
        }
    }
    return out;
}

inline OutlierSet true_outlier_set(const std::vector<double>& means, double threshold) {
    return true_outlier_set(std::span<const double>(means), threshold);
}

/// Ground-truth outlier set of an instance.
inline OutlierSet true_outlier_set(const BanditInstance& instance) {
    return true_outlier_set(instance.means, theta_of(instance));
}

/**
 * Huber-style contaminated generator.
 *
 * Exactly floor(n * contamination_fraction) means come from
 * Unif(outlier_low, outlier_high); the rest come from
 * N(normal_mean, normal_sd^2), optionally clipped to the three-sigma range.
 * Arm order is randomized.
 */
struct GeneratorConfig {
    int n = 105;
    double contamination_fraction = 0.0;  ///< epsilon in [0, 0.5)
    double normal_mean = 0.3;
    double normal_sd = 0.075;
    double outlier_low = 0.7;
    double outlier_high = 1.0;
    bool clip_to_three_sigma = true;

    int contaminated_count() const {
        return static_cast<int>(std::floor(n * contamination_fraction));
    }

    void validate() const {
        if (n <= 0) {
            throw std::invalid_argument("GeneratorConfig: n must be positive");
        }
        if (contamination_fraction < 0.0 || contamination_fraction >= 0.5) {
            throw std::invalid_argument("GeneratorConfig: contamination breaks median");
        }
        if (normal_sd <= 0.0) {
            throw std::invalid_argument("GeneratorConfig: normal_sd must be > 0");
        }
        if (!(outlier_low < outlier_high)) {
            throw std::invalid_argument("GeneratorConfig: outlier_low must be < outlier_high");
        }
    }
};

/// Generated means plus the positions drawn from the contamination
/// distribution (after the order shuffle).
struct LabeledMeans {
    std::vector<double> means;
    std::vector<int> contaminated;  // sorted arm indices
};

inline LabeledMeans generate_contaminated_labeled(const GeneratorConfig& config,
                                                  std::mt19937_64& rng) {
    config.validate();
    const int n_out = config.contaminated_count();
    std::vector<std::pair<double, bool>> draws;
    draws.reserve(config.n);

    std::normal_distribution<double> body(config.normal_mean, config.normal_sd);
    const double lo = config.normal_mean - 3.0 * config.normal_sd;
    const double hi = config.normal_mean + 3.0 * config.normal_sd;
    for (int i = 0; i < config.n - n_out; ++i) {
        double v = body(rng);
        if (config.clip_to_three_sigma) {
            v = std::clamp(v, lo, hi);
        }
        draws.emplace_back(v, false);
    }
    std::uniform_real_distribution<double> tail(config.outlier_low, config.outlier_high);
    for (int i = 0; i < n_out; ++i) {
        draws.emplace_back(tail(rng), true);
    }
    std::shuffle(draws.begin(), draws.end(), rng);

    LabeledMeans out;
    out.means.reserve(config.n);
    for (int i = 0; i < config.n; ++i) {
        out.means.push_back(draws[i].first);
        if (draws[i].second) {
            out.contaminated.push_back(i);
        }
    }
    return out;
}

inline std::vector<double> generate_contaminated_means(const GeneratorConfig& config,
                                                       std::mt19937_64& rng) {
    return generate_contaminated_labeled(config, rng).means;
}

inline BanditInstance generate_contaminated(const GeneratorConfig& config, std::uint64_t seed,
                                            double k = 2.0, double mad_scale = 1.0,
                                            RewardModel model = RewardModel::kGaussian,
                                            double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    BanditInstance instance;
    instance.means = generate_contaminated_means(config, rng);
    instance.reward_model = model;
    instance.sigma = sigma;
    instance.k = k;
    instance.mad_scale = mad_scale;
    instance.validate();
    return instance;
}

namespace detail {

/// Means of a ladder instance for a given outlier offset above theta.
inline std::vector<double> ladder_means(const std::vector<double>& normals, double theta,
                                        double delta_star, double outlier_gap) {
    std::vector<double> means = normals;
    means.push_back(theta + delta_star);
    means.push_back(theta + delta_star + outlier_gap);
    return means;
}

}  // namespace detail

/**
 * Fixed-means ladder instance: n_normal equally spaced arms on [lo, hi]
 * plus two outlier arms at theta + delta_star and
 * theta + delta_star + outlier_gap.
 *
 * theta is the fixed point of the threshold equation over the full
 * instance.  With the two outliers occupying the top mean and deviation
 * ranks, the median is the (m-2)-th largest normal mean and the MAD is the
 * (m-2)-th largest normal deviation (m = ceil((n_normal+2)/2)), so theta
 * does not depend on where exactly the outliers land.  The construction is
 * verified by recomputation; configurations where outlier placement would
 * change the median or MAD rank structure, or where some normal arm ends
 * up at or above theta, are rejected.
 */
inline BanditInstance ladder_instance(int n_normal, double lo, double hi, double delta_star,
                                      double outlier_gap, double k, double mad_scale = 1.0) {
    if (n_normal < 3) {
        throw std::invalid_argument("ladder_instance: n_normal must be >= 3");
    }
    if (!(delta_star > 0.0)) {
        throw std::invalid_argument("ladder_instance: delta_star must be > 0");
    }
    if (!(lo < hi)) {
        throw std::invalid_argument("ladder_instance: need lo < hi");
    }
    if (outlier_gap < 0.0) {
        throw std::invalid_argument("ladder_instance: outlier_gap must be >= 0");
    }

    std::vector<double> normals(n_normal);
    for (int i = 0; i < n_normal; ++i) {
        normals[i] = lo + i * (hi - lo) / (n_normal - 1);
    }

    const double k_eff = k * mad_scale;
    const std::size_t n = static_cast<std::size_t>(n_normal) + 2;
    const std::size_t m = median_rank(n);
    if (m < 3) {
        throw std::domain_error("ladder_instance: non-invariant ladder (median rank hits an outlier)");
    }

    // Candidate fixed point, assuming outliers hold the top two mean and
    // deviation ranks.
    const double median = kth_largest(normals, m - 2);
    std::vector<double> devs(normals.size());
    for (std::size_t i = 0; i < normals.size(); ++i) {
        devs[i] = std::abs(normals[i] - median);
    }
    const double mad = kth_largest(devs, m - 2);
    const double theta = median + k_eff * mad;

    // Verify the fixed point on the assembled instance, and again with the
    // outliers moved, so that theta is genuinely placement-invariant.
    const double tol = 1e-9 * std::max(1.0, std::abs(theta));
    for (double shift : {0.0, outlier_gap + 1.0}) {
        const std::vector<double> means =
            detail::ladder_means(normals, theta, delta_star + shift, outlier_gap);
        if (std::abs(median_of(means) - median) > tol || std::abs(mad_of(means) - mad) > tol ||
            std::abs(robust_threshold(means, k_eff) - theta) > tol) {
            throw std::domain_error("ladder_instance: non-invariant ladder");
        }
    }

    BanditInstance instance;
    instance.means = detail::ladder_means(normals, theta, delta_star, outlier_gap);
    instance.k = k;
    instance.mad_scale = mad_scale;
    instance.validate();

    const OutlierSet truth = true_outlier_set(instance);
    if (truth.degenerate || truth.indices != std::vector<int>{n_normal, n_normal + 1}) {
        throw std::domain_error("ladder_instance: non-invariant ladder (normal arms cross the threshold)");
    }
    return instance;
}

}  // namespace roai

#endif
