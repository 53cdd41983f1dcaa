#ifndef FIDKIT_FIT_HPP
#define FIDKIT_FIT_HPP

#include <array>
#include <span>
#include <vector>

#include "fidkit/model.hpp"

namespace fidkit {

enum class SampleLabel { Control, Transect };

std::string to_string(SampleLabel label);
SampleLabel sample_label_from_string(const std::string& name);

// One (abscissa, fish-to-shelter distance) measurement. Control samples are
// taken while the vehicle idles; Transect samples during a pass.
struct ObservationSample {
    double x = 0.0;
    double distance = 0.0;
    SampleLabel label = SampleLabel::Transect;
    double weight = 1.0;
};

struct FitOptions {
    AbscissaKind abscissa_kind = AbscissaKind::RobotDistance;
    int max_iterations = 200;
    double rss_tolerance = 1e-10;    // relative RSS decrease
    double step_tolerance = 1e-10;   // step infinity-norm
};

struct FitResult {
    DisturbanceModel model;
    double rss = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual_stddev = 0.0;
    // false when the data carried no response signal (zero variance) and
    // k, x0 are placeholders on a flat model.
    bool identifiable = true;
};

// Weighted damped least squares (Levenberg-Marquardt) on the four logistic
// parameters, box-constrained to l_control >= l_hide >= 0, k > 0 by
// clamping each trial step. Needs >= 4 samples with >= 3 distinct x.
FitResult fit_model(std::span<const ObservationSample> samples,
                    const FitOptions& options = {});

// Per-sample (distance - evaluate(model, x)), in input order. Throws
// AbscissaMismatch when the samples' abscissa kind differs from the model's.
std::vector<double> residuals(std::span<const ObservationSample> samples,
                              const DisturbanceModel& model,
                              AbscissaKind samples_kind);

// Analytic partials of the model at each sample x, columns ordered
// (l_control, l_hide, k, x0).
std::vector<std::array<double, 4>> jacobian(
    std::span<const ObservationSample> samples, const DisturbanceModel& model,
    AbscissaKind samples_kind);

nlohmann::ordered_json to_json(const FitResult& result);

}  // namespace fidkit

#endif
