#include "fidkit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fidkit/errors.hpp"

namespace fidkit {

std::string to_string(SampleLabel label) {
    return label == SampleLabel::Control ? "control" : "transect";
}

SampleLabel sample_label_from_string(const std::string& name) {
    if (name == "control") return SampleLabel::Control;
    if (name == "transect") return SampleLabel::Transect;
    throw ParseError("unknown sample label '" + name + "'");
}

namespace {

double clamped_sigmoid(double k, double x0, double x) {
    double u = -k * (x - x0);
    if (u > 700.0) u = 700.0;
    if (u < -700.0) u = -700.0;
    return 1.0 / (1.0 + std::exp(u));
}

using Params = std::array<double, 4>;  // (l_control, l_hide, k, x0)

Params clamp_to_box(Params p) {
    p[1] = std::max(p[1], 0.0);        // l_hide >= 0
    p[0] = std::max(p[0], p[1]);       // l_control >= l_hide
    p[2] = std::max(p[2], 1e-9);       // k > 0
    return p;
}

DisturbanceModel to_model(const Params& p, AbscissaKind kind) {
    return DisturbanceModel{p[0], p[1], p[2], p[3], kind};
}

double weighted_rss(std::span<const ObservationSample> samples,
                    const DisturbanceModel& model) {
    double rss = 0.0;
    for (const auto& s : samples) {
        const double r = s.distance - evaluate(model, s.x);
        rss += s.weight * r * r;
    }
    return rss;
}

// Gaussian elimination with partial pivoting; returns false on a (near)
// singular system.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
            std::array<double, 4>& x) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 4; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[row][c] -= f * a[col][c];
            b[row] -= f * b[col];
        }
    }
    for (int row = 3; row >= 0; --row) {
        double s = b[row];
        for (int c = row + 1; c < 4; ++c) s -= a[row][c] * x[c];
        x[row] = s / a[row][row];
    }
    return true;
}

Params initial_guess(std::span<const ObservationSample> samples) {
    std::vector<double> dist, xs;
    dist.reserve(samples.size());
    xs.reserve(samples.size());
    for (const auto& s : samples) {
        dist.push_back(s.distance);
        xs.push_back(s.x);
    }
    std::sort(dist.begin(), dist.end());
    std::sort(xs.begin(), xs.end());

    const std::size_t n = dist.size();
    const std::size_t decile = std::max<std::size_t>(1, n / 10);
    const double l_hide0 =
        std::accumulate(dist.begin(), dist.begin() + decile, 0.0) / decile;
    const double l_control0 =
        std::accumulate(dist.end() - decile, dist.end(), 0.0) / decile;
    const double x_median = xs[(n - 1) / 2];
    const double x_range = xs.back() - xs.front();
    return clamp_to_box({l_control0, l_hide0, 4.0 / x_range, x_median});
}

}  // namespace

std::vector<double> residuals(std::span<const ObservationSample> samples,
                              const DisturbanceModel& model,
                              AbscissaKind samples_kind) {
    if (samples_kind != model.abscissa_kind)
        throw AbscissaMismatch("sample abscissa kind differs from model");
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.distance - evaluate(model, s.x));
    return out;
}

std::vector<std::array<double, 4>> jacobian(
    std::span<const ObservationSample> samples, const DisturbanceModel& model,
    AbscissaKind samples_kind) {
    if (samples_kind != model.abscissa_kind)
        throw AbscissaMismatch("sample abscissa kind differs from model");
    std::vector<std::array<double, 4>> rows;
    rows.reserve(samples.size());
    const double gap = model.l_control - model.l_hide;
    for (const auto& smp : samples) {
        const double s = clamped_sigmoid(model.k, model.x0, smp.x);
        const double bell = s * (1.0 - s);
        rows.push_back({s, 1.0 - s, gap * bell * (smp.x - model.x0),
                        -gap * bell * model.k});
    }
    return rows;
}

FitResult fit_model(std::span<const ObservationSample> samples,
                    const FitOptions& options) {
    if (samples.size() < 4)
        throw InsufficientData("need at least 4 samples");
    std::set<double> distinct_x;
    for (const auto& s : samples) distinct_x.insert(s.x);
    if (distinct_x.size() < 3)
        throw InsufficientData("need at least 3 distinct abscissa values");
    for (const auto& s : samples) {
        if (s.distance < 0.0) throw InvalidArgument("distance must be >= 0");
        if (!(s.weight > 0.0)) throw InvalidArgument("weight must be > 0");
    }

    const auto [dmin, dmax] = std::minmax_element(
        samples.begin(), samples.end(),
        [](const auto& a, const auto& b) { return a.distance < b.distance; });
    if (dmin->distance == dmax->distance) {
        // Flat data: no response at all. Return the constant model flagged
        // unidentifiable instead of erroring.
        std::vector<double> xs;
        for (const auto& s : samples) xs.push_back(s.x);
        std::sort(xs.begin(), xs.end());
        FitResult flat;
        flat.model = DisturbanceModel{dmin->distance, dmin->distance, 1.0,
                                      xs[(xs.size() - 1) / 2],
                                      options.abscissa_kind};
        flat.converged = true;
        flat.identifiable = false;
        return flat;
    }

    Params theta = initial_guess(samples);
    double rss = weighted_rss(samples, to_model(theta, options.abscissa_kind));

    double lambda = 1e-3;
    FitResult result;
    result.converged = false;

    int iter = 0;
    while (iter < options.max_iterations) {
        const auto model = to_model(theta, options.abscissa_kind);
        const auto res = residuals(samples, model, options.abscissa_kind);
        const auto jac = jacobian(samples, model, options.abscissa_kind);

        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double w = samples[i].weight;
            for (int a = 0; a < 4; ++a) {
                jtr[a] += w * jac[i][a] * res[i];
                for (int b = 0; b < 4; ++b)
                    jtj[a][b] += w * jac[i][a] * jac[i][b];
            }
        }

        bool accepted = false;
        while (lambda <= 1e10) {
            auto damped = jtj;
            for (int a = 0; a < 4; ++a)
                damped[a][a] += lambda * std::max(jtj[a][a], 1e-12);
            std::array<double, 4> delta{};
            if (solve4(damped, jtr, delta)) {
                Params candidate = clamp_to_box(
                    {theta[0] + delta[0], theta[1] + delta[1],
                     theta[2] + delta[2], theta[3] + delta[3]});
                const double candidate_rss = weighted_rss(
                    samples, to_model(candidate, options.abscissa_kind));
                if (candidate_rss < rss) {
                    double step_norm = 0.0;
                    for (int a = 0; a < 4; ++a)
                        step_norm = std::max(step_norm,
                                             std::abs(candidate[a] - theta[a]));
                    const double rel_decrease =
                        (rss - candidate_rss) / std::max(rss, 1e-300);
                    theta = candidate;
                    rss = candidate_rss;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    ++iter;
                    if (rel_decrease < options.rss_tolerance ||
                        step_norm < options.step_tolerance)
                        result.converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No descent direction left at maximum damping; treat the current
            // point as the (local) optimum.
            result.converged = true;
            break;
        }
        if (result.converged) break;
    }

    result.model = to_model(theta, options.abscissa_kind);
    result.rss = rss;
    result.iterations = iter;
    const double dof = static_cast<double>(samples.size()) - 4.0;
    result.residual_stddev = dof > 0.0 ? std::sqrt(rss / dof) : 0.0;
    return result;
}

nlohmann::ordered_json to_json(const FitResult& result) {
    nlohmann::ordered_json j;
    j["model"] = to_json(result.model);
    j["rss"] = result.rss;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["residual_stddev"] = result.residual_stddev;
    j["identifiable"] = result.identifiable;
    return j;
}

}  // namespace fidkit
