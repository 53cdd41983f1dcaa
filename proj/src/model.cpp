#include "fidkit/model.hpp"

#include <cmath>

#include "fidkit/errors.hpp"

namespace fidkit {

std::string to_string(AbscissaKind kind) {
    return kind == AbscissaKind::RobotDistance ? "robot_distance"
                                               : "time_along_transect";
}

AbscissaKind abscissa_kind_from_string(const std::string& name) {
    if (name == "robot_distance") return AbscissaKind::RobotDistance;
    if (name == "time_along_transect") return AbscissaKind::TimeAlongTransect;
    throw ParseError("unknown abscissa_kind '" + name + "'");
}

void validate(const DisturbanceModel& model) {
    if (!(model.l_hide >= 0.0))
        throw InvalidArgument("l_hide must be >= 0");
    if (!(model.l_control >= model.l_hide))
        throw InvalidArgument("l_control must be >= l_hide");
    if (!(model.k > 0.0))
        throw InvalidArgument("k must be > 0");
    if (!std::isfinite(model.l_control) || !std::isfinite(model.k) ||
        !std::isfinite(model.x0))
        throw InvalidArgument("model parameters must be finite");
}

namespace {

// Logistic sigmoid with the exponent clamped so exp() never overflows and
// the result saturates exactly to 0 or 1 at the extremes.
double sigmoid(double k, double x0, double x) {
    double u = -k * (x - x0);
    if (u > 700.0) u = 700.0;
    if (u < -700.0) u = -700.0;
    return 1.0 / (1.0 + std::exp(u));
}

}  // namespace

double evaluate(const DisturbanceModel& model, double x) {
    return (model.l_control - model.l_hide) * sigmoid(model.k, model.x0, x) +
           model.l_hide;
}

double fid(const DisturbanceModel& model, const FidQuery& query) {
    validate(model);
    if (!(query.alpha >= 0.0 && query.alpha < 1.0))
        throw InvalidArgument("alpha must lie in [0, 1)");
    if (model.l_control == model.l_hide)
        throw DegenerateModel("l_control == l_hide: no response to invert");
    const double threshold = query.alpha * model.l_control;
    if (threshold <= model.l_hide)
        throw ThresholdUnreachable(
            "alpha * l_control <= l_hide: the response never drops to the "
            "threshold");
    return model.x0 - (1.0 / model.k) *
                          std::log(model.l_control * (1.0 - query.alpha) /
                                   (threshold - model.l_hide));
}

double invert(const DisturbanceModel& model, double target_distance) {
    validate(model);
    if (!(target_distance > model.l_hide &&
          target_distance < model.l_control))
        throw TargetOutOfRange("target must lie strictly inside (l_hide, "
                               "l_control)");
    // f(x) = t  <=>  s = (t - Lh)/(Lc - Lh),  x = x0 + ln(s/(1-s))/k
    const double s = (target_distance - model.l_hide) /
                     (model.l_control - model.l_hide);
    return model.x0 + std::log(s / (1.0 - s)) / model.k;
}

nlohmann::ordered_json to_json(const DisturbanceModel& model) {
    nlohmann::ordered_json j;
    j["l_control"] = model.l_control;
    j["l_hide"] = model.l_hide;
    j["k"] = model.k;
    j["x0"] = model.x0;
    j["abscissa_kind"] = to_string(model.abscissa_kind);
    return j;
}

DisturbanceModel model_from_json(const nlohmann::json& j) {
    DisturbanceModel model;
    try {
        model.l_control = j.at("l_control").get<double>();
        model.l_hide = j.at("l_hide").get<double>();
        model.k = j.at("k").get<double>();
        model.x0 = j.at("x0").get<double>();
        model.abscissa_kind =
            abscissa_kind_from_string(j.at("abscissa_kind").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    validate(model);
    return model;
}

}  // namespace fidkit
