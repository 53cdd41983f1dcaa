#ifndef FIDKIT_PLAN_HPP
#define FIDKIT_PLAN_HPP

#include <vector>

#include "fidkit/model.hpp"

namespace fidkit {

// Mitigation guidance: keep the vehicle outside the estimated FID while
// staying within its own sensing range.
struct StandoffPlan {
    double fid = 0.0;
    double alpha = 0.0;
    double min_altitude = 0.0;
    double sensor_range = 0.0;
    bool feasible = false;
    double margin = 0.0;  // sensor_range - fid
};

// On a straight overhead transect the closest approach equals the altitude,
// so min_altitude = max(fid, 0). A flat model (l_control == l_hide) shows no
// response and yields an unconstrained plan. Time-domain models are
// rejected: a time-FID cannot set an altitude without a speed convention.
StandoffPlan plan_standoff(const DisturbanceModel& model, double alpha,
                           double sensor_range);

struct Waypoint {
    double t = 0.0;
    double x_horizontal = 0.0;
    double altitude = 0.0;
};

// Constant-altitude transect realizing the standoff, sampled every 0.2 s.
// Every waypoint's 3-D distance to the shelter is >= fid.
std::vector<Waypoint> plan_transect(const DisturbanceModel& model,
                                    double alpha, double speed,
                                    double half_length, double sensor_range);

nlohmann::ordered_json to_json(const StandoffPlan& plan);

}  // namespace fidkit

#endif
