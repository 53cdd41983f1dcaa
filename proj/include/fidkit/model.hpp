#ifndef FIDKIT_MODEL_HPP
#define FIDKIT_MODEL_HPP

#include <string>

#include <json.hpp>

namespace fidkit {

// Unit tag for the model abscissa: distance-to-shelter of the vehicle, or
// time along the transect used as a distance proxy. The library never
// converts between the two; the tag is checked wherever model and data meet.
enum class AbscissaKind { RobotDistance, TimeAlongTransect };

std::string to_string(AbscissaKind kind);
AbscissaKind abscissa_kind_from_string(const std::string& name);

// Four-parameter logistic disturbance response. l_control is the mean
// fish-to-shelter distance without disturbance (upper asymptote), l_hide the
// same under full disturbance (lower asymptote); k and x0 set how reactive
// the fish are and where the transition sits on the abscissa.
struct DisturbanceModel {
    double l_control = 0.0;
    double l_hide = 0.0;
    double k = 1.0;
    double x0 = 0.0;
    AbscissaKind abscissa_kind = AbscissaKind::RobotDistance;
};

// Throws InvalidArgument unless l_control >= l_hide >= 0 and k > 0.
void validate(const DisturbanceModel& model);

// Conservatism parameter for the flight initiation distance: the FID is the
// abscissa where the predicted distance crosses alpha * l_control.
struct FidQuery {
    double alpha = 0.9;
};

inline constexpr double kDefaultAlpha = 0.9;

// Predicted fish-to-shelter distance at abscissa x. Total over finite x:
// the exponent is clamped at +-700 so extreme arguments saturate to the
// asymptotes instead of overflowing.
double evaluate(const DisturbanceModel& model, double x);

// Closed-form flight initiation distance:
//   x_fid = x0 - (1/k) * ln(l_control * (1 - alpha) / (alpha*l_control - l_hide))
// Throws DegenerateModel when l_control == l_hide and ThresholdUnreachable
// when alpha*l_control <= l_hide (the threshold sits at or below the hiding
// floor, so no finite crossing exists).
double fid(const DisturbanceModel& model, const FidQuery& query);

// Unique x with evaluate(model, x) == target_distance. The target must lie
// strictly inside (l_hide, l_control).
double invert(const DisturbanceModel& model, double target_distance);

nlohmann::ordered_json to_json(const DisturbanceModel& model);
DisturbanceModel model_from_json(const nlohmann::json& j);

}  // namespace fidkit

#endif
