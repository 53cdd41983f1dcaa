#include "fidkit/plan.hpp"

#include <algorithm>
#include <cmath>

#include "fidkit/errors.hpp"

namespace fidkit {

StandoffPlan plan_standoff(const DisturbanceModel& model, double alpha,
                           double sensor_range) {
    validate(model);
    if (model.abscissa_kind != AbscissaKind::RobotDistance)
        throw TimeDomainModel(
            "time-domain FIDs cannot set an altitude without a transect "
            "speed; fit a distance-domain model");
    if (!(sensor_range > 0.0))
        throw InvalidArgument("sensor_range must be > 0");

    StandoffPlan plan;
    plan.alpha = alpha;
    plan.sensor_range = sensor_range;
    if (model.l_control == model.l_hide) {
        // No response at all: nothing to stay outside of.
        plan.fid = 0.0;
        plan.min_altitude = 0.0;
        plan.feasible = true;
        plan.margin = sensor_range;
        return plan;
    }
    plan.fid = fid(model, FidQuery{alpha});  // may throw ThresholdUnreachable
    plan.min_altitude = std::max(plan.fid, 0.0);
    plan.feasible = plan.fid <= sensor_range;
    plan.margin = sensor_range - plan.fid;
    return plan;
}

std::vector<Waypoint> plan_transect(const DisturbanceModel& model,
                                    double alpha, double speed,
                                    double half_length, double sensor_range) {
    if (!(speed > 0.0) || !(half_length > 0.0))
        throw InvalidArgument("speed and half_length must be > 0");
    const StandoffPlan plan = plan_standoff(model, alpha, sensor_range);
    if (!plan.feasible)
        throw Infeasible("required standoff exceeds the sensor range");

    const double duration = 2.0 * half_length / speed;
    const double dt = 0.2;
    std::vector<Waypoint> waypoints;
    for (double t = 0.0; t < duration - 1e-12; t += dt)
        waypoints.push_back({t, -half_length + speed * t, plan.min_altitude});
    waypoints.push_back({duration, half_length, plan.min_altitude});
    return waypoints;
}

nlohmann::ordered_json to_json(const StandoffPlan& plan) {
    nlohmann::ordered_json j;
    j["fid"] = plan.fid;
    j["alpha"] = plan.alpha;
    j["min_altitude"] = plan.min_altitude;
    j["sensor_range"] = plan.sensor_range;
    j["feasible"] = plan.feasible;
    j["margin"] = plan.margin;
    return j;
}

}  // namespace fidkit
