#include "fidkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fidkit/errors.hpp"
#include "fidkit/rng.hpp"

namespace fidkit {

namespace {

// Exact ECDF sup-gap over merged sorted samples. All ties at a value are
// consumed on both sides before the gap is evaluated, so duplicated values
// (common with pixel distances) are handled exactly.
double ks_d(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
            v = a[i];
        else
            v = b[j];
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / n1 - j / n2));
    }
    return d;
}

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
}

void require_finite(std::span<const double> v, const char* which) {
    for (double x : v)
        if (!std::isfinite(x))
            throw InvalidArgument(std::string(which) + " contains a non-finite value");
}

}  // namespace

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) return std::clamp(2.0 * sum, 0.0, 1.0);
    }
    // Series did not converge (lambda near 0): the distribution mass is
    // entirely above, so the tail probability is 1.
    return 1.0;
}

KsResult ks_two_sample(std::span<const double> control,
                       std::span<const double> transect) {
    if (control.empty() || transect.empty())
        throw EmptySample("both samples must be non-empty");
    require_finite(control, "control");
    require_finite(transect, "transect");

    KsResult r;
    r.n1 = control.size();
    r.n2 = transect.size();
    r.mean1 = mean(control);
    r.mean2 = mean(transect);
    r.d_statistic = ks_d({control.begin(), control.end()},
                         {transect.begin(), transect.end()});

    const double ne = static_cast<double>(r.n1) * static_cast<double>(r.n2) /
                      static_cast<double>(r.n1 + r.n2);
    const double sqrt_ne = std::sqrt(ne);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * r.d_statistic;
    r.p_value = kolmogorov_q(lambda);
    return r;
}

KsResult compare_groups(std::span<const ObservationSample> samples) {
    std::vector<double> control, transect;
    for (const auto& s : samples) {
        (s.label == SampleLabel::Control ? control : transect)
            .push_back(s.distance);
    }
    if (control.empty())
        throw MissingGroup("no Control samples");
    if (transect.empty())
        throw MissingGroup("no Transect samples");
    return ks_two_sample(control, transect);
}

double ks_permutation_p_value(std::span<const double> control,
                              std::span<const double> transect,
                              int n_permutations, std::uint64_t seed) {
    if (control.empty() || transect.empty())
        throw EmptySample("both samples must be non-empty");
    const double d_observed = ks_d({control.begin(), control.end()},
                                   {transect.begin(), transect.end()});
    std::vector<double> pooled(control.begin(), control.end());
    pooled.insert(pooled.end(), transect.begin(), transect.end());

    int at_least = 0;
    for (int p = 0; p < n_permutations; ++p) {
        std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(p + 1)));
        std::vector<double> shuffled = pooled;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::vector<double> a(shuffled.begin(),
                              shuffled.begin() + control.size());
        std::vector<double> b(shuffled.begin() + control.size(),
                              shuffled.end());
        if (ks_d(std::move(a), std::move(b)) >= d_observed - 1e-12) ++at_least;
    }
    return (at_least + 1.0) / (n_permutations + 1.0);
}

nlohmann::ordered_json to_json(const KsResult& result) {
    nlohmann::ordered_json j;
    j["d_statistic"] = result.d_statistic;
    j["p_value"] = result.p_value;
    j["n1"] = result.n1;
    j["n2"] = result.n2;
    j["mean1"] = result.mean1;
    j["mean2"] = result.mean2;
    return j;
}

}  // namespace fidkit
