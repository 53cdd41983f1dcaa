#ifndef FIDKIT_SIM_HPP
#define FIDKIT_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fidkit/fit.hpp"
#include "fidkit/model.hpp"

namespace fidkit {

// Field-protocol parameters: straight constant-speed transects over the
// shelter marker, each followed by an idle wait at a fixed standoff while
// the fish re-acclimate.
struct ProtocolConfig {
    double altitude = 1.0;              // m above the shelter marker
    double speed = 0.5;                 // m/s along the transect
    double transect_half_length = 4.0;  // m either side of the marker
    double wait_seconds = 60.0;
    double standoff_during_wait = 4.0;  // horizontal m from the marker
    int n_transects = 1;
    int n_fish = 1;
    double noise_stddev = 0.0;
    std::uint64_t seed = 0;
};

void validate(const ProtocolConfig& config);

// One discretized instant of the protocol: either a transect frame or the
// post-pass control frame. t is seconds since the owning transect started.
struct SimFrame {
    double t = 0.0;
    double robot_distance = 0.0;  // 3-D vehicle-to-shelter distance
    double altitude = 0.0;        // configured altitude for this transect
    std::vector<double> fish_distances;
    SampleLabel label = SampleLabel::Transect;
    int transect_index = 0;
};

// Runs the protocol against a ground-truth response model. Each fish
// distance is drawn from Normal(evaluate(truth, robot_distance),
// noise_stddev) truncated at zero by resampling. Per-transect RNG streams
// are derived from the seed, so output is a pure function of
// (truth, config, frame_rate) and transects may be generated in parallel.
std::vector<SimFrame> simulate(const DisturbanceModel& truth,
                               const ProtocolConfig& config,
                               double frame_rate = 5.0);

// Repeats the protocol once per altitude (an altitude sweep), with derived
// per-block seeds and globally unique transect indices.
std::vector<SimFrame> simulate_campaign(const DisturbanceModel& truth,
                                        const ProtocolConfig& config,
                                        std::span<const double> altitudes,
                                        double frame_rate = 5.0);

// Flattens fish distances into observation samples with x = robot_distance
// (RobotDistance) or x = t (TimeAlongTransect).
std::vector<ObservationSample> to_observations(std::span<const SimFrame> frames,
                                               AbscissaKind abscissa_kind);

// Keeps the first transect frame in each cadence_seconds bucket (per
// transect) plus every control frame; mimics coarser annotation intervals.
std::vector<SimFrame> subsample(std::span<const SimFrame> frames,
                                double cadence_seconds);

nlohmann::json to_json(const ProtocolConfig& config);
ProtocolConfig protocol_config_from_json(const nlohmann::json& j);

}  // namespace fidkit

#endif
