#ifndef FIDKIT_STATS_HPP
#define FIDKIT_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fidkit/fit.hpp"

namespace fidkit {

struct KsResult {
    double d_statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double mean1 = 0.0;
    double mean2 = 0.0;
};

// Two-sample Kolmogorov-Smirnov test. D is the exact sup-gap of the two
// empirical CDFs (ties counted fully on both sides); the p-value comes from
// the asymptotic Kolmogorov distribution with the small-sample correction
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D, ne = n1*n2/(n1+n2).
KsResult ks_two_sample(std::span<const double> control,
                       std::span<const double> transect);

// Splits samples by Control/Transect label and runs ks_two_sample; mean2 <
// mean1 indicates avoidance (transect fish sitting closer to shelter).
KsResult compare_groups(std::span<const ObservationSample> samples);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2),
// truncated when a term drops below 1e-12 (max 100 terms; returns 1 when the
// series has not converged by then, which only happens for tiny lambda).
double kolmogorov_q(double lambda);

// Seeded Monte-Carlo permutation p-value for the same D statistic; a
// cross-check for the asymptotic approximation, not the default path. Each
// permutation uses a deterministic seed derived from (seed, index), so the
// result does not depend on evaluation order.
double ks_permutation_p_value(std::span<const double> control,
                              std::span<const double> transect,
                              int n_permutations = 10000,
                              std::uint64_t seed = 0);

nlohmann::ordered_json to_json(const KsResult& result);

}  // namespace fidkit

#endif
