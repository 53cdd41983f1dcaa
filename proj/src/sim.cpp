#include "fidkit/sim.hpp"

#include <cmath>
#include <random>

#include "fidkit/errors.hpp"
#include "fidkit/rng.hpp"

namespace fidkit {

namespace {

// Deterministic normal deviates via Box-Muller on explicit 53-bit uniforms,
// so streams do not depend on the standard library's distribution
// implementation.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next(double mean, double stddev) {
        const double u1 = ((rng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = (rng_() >> 11) * 0x1.0p-53;        // [0, 1)
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * M_PI * u2);
        return mean + stddev * z;
    }

    double next_truncated_nonnegative(double mean, double stddev) {
        double v = next(mean, stddev);
        while (v < 0.0) v = next(mean, stddev);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

std::vector<double> draw_fish(const DisturbanceModel& truth,
                              const ProtocolConfig& config,
                              double robot_distance, NormalStream& stream) {
    const double mean = evaluate(truth, robot_distance);
    std::vector<double> out(static_cast<std::size_t>(config.n_fish));
    for (auto& d : out) {
        d = config.noise_stddev > 0.0
                ? stream.next_truncated_nonnegative(mean, config.noise_stddev)
                : mean;
    }
    return out;
}

}  // namespace

void validate(const ProtocolConfig& config) {
    if (!(config.altitude > 0.0) || !(config.speed > 0.0) ||
        !(config.transect_half_length > 0.0) ||
        !(config.wait_seconds > 0.0) || !(config.standoff_during_wait > 0.0))
        throw InvalidArgument("protocol lengths, speed and wait must be > 0");
    if (config.n_transects < 1 || config.n_fish < 1)
        throw InvalidArgument("n_transects and n_fish must be >= 1");
    if (config.noise_stddev < 0.0)
        throw InvalidArgument("noise_stddev must be >= 0");
}

std::vector<SimFrame> simulate(const DisturbanceModel& truth,
                               const ProtocolConfig& config,
                               double frame_rate) {
    validate(config);
    validate(truth);
    if (truth.abscissa_kind != AbscissaKind::RobotDistance)
        throw UnitMismatch("simulation needs a distance-domain truth model");
    if (!(frame_rate > 0.0))
        throw InvalidArgument("frame_rate must be > 0");

    const double duration =
        2.0 * config.transect_half_length / config.speed;
    const int frames_per_transect =
        static_cast<int>(std::floor(duration * frame_rate)) + 1;

    std::vector<SimFrame> frames;
    frames.reserve(static_cast<std::size_t>(config.n_transects) *
                   (frames_per_transect + 1));
    for (int transect = 0; transect < config.n_transects; ++transect) {
        NormalStream stream(
            splitmix64(config.seed ^ static_cast<std::uint64_t>(transect + 1)));
        for (int j = 0; j < frames_per_transect; ++j) {
            SimFrame frame;
            frame.t = j / frame_rate;
            const double offset =
                -config.transect_half_length + config.speed * frame.t;
            frame.robot_distance =
                std::hypot(config.altitude, offset);
            frame.altitude = config.altitude;
            frame.label = SampleLabel::Transect;
            frame.transect_index = transect;
            frame.fish_distances =
                draw_fish(truth, config, frame.robot_distance, stream);
            frames.push_back(std::move(frame));
        }
        SimFrame control;
        control.t = duration / 2.0 + config.wait_seconds;
        control.robot_distance =
            std::hypot(config.altitude, config.standoff_during_wait);
        control.altitude = config.altitude;
        control.label = SampleLabel::Control;
        control.transect_index = transect;
        control.fish_distances =
            draw_fish(truth, config, control.robot_distance, stream);
        frames.push_back(std::move(control));
    }
    return frames;
}

std::vector<SimFrame> simulate_campaign(const DisturbanceModel& truth,
                                        const ProtocolConfig& config,
                                        std::span<const double> altitudes,
                                        double frame_rate) {
    if (altitudes.empty())
        throw InvalidArgument("altitude sweep must be non-empty");
    std::vector<SimFrame> all;
    for (std::size_t block = 0; block < altitudes.size(); ++block) {
        ProtocolConfig cfg = config;
        cfg.altitude = altitudes[block];
        cfg.seed = splitmix64(config.seed + block + 1);
        auto frames = simulate(truth, cfg, frame_rate);
        for (auto& f : frames)
            f.transect_index += static_cast<int>(block) * config.n_transects;
        all.insert(all.end(), std::make_move_iterator(frames.begin()),
                   std::make_move_iterator(frames.end()));
    }
    return all;
}

std::vector<ObservationSample> to_observations(std::span<const SimFrame> frames,
                                               AbscissaKind abscissa_kind) {
    std::vector<ObservationSample> samples;
    for (const auto& frame : frames) {
        const double x = abscissa_kind == AbscissaKind::RobotDistance
                             ? frame.robot_distance
                             : frame.t;
        for (double d : frame.fish_distances)
            samples.push_back({x, d, frame.label, 1.0});
    }
    return samples;
}

std::vector<SimFrame> subsample(std::span<const SimFrame> frames,
                                double cadence_seconds) {
    if (!(cadence_seconds > 0.0))
        throw InvalidArgument("cadence must be > 0");
    std::vector<SimFrame> kept;
    int last_transect = -1;
    long last_bucket = -1;
    for (const auto& frame : frames) {
        if (frame.label == SampleLabel::Control) {
            kept.push_back(frame);
            continue;
        }
        const long bucket =
            static_cast<long>(std::floor(frame.t / cadence_seconds + 1e-9));
        if (frame.transect_index != last_transect || bucket != last_bucket) {
            kept.push_back(frame);
            last_transect = frame.transect_index;
            last_bucket = bucket;
        }
    }
    return kept;
}

nlohmann::json to_json(const ProtocolConfig& config) {
    return nlohmann::json{{"altitude", config.altitude},
                          {"speed", config.speed},
                          {"transect_half_length", config.transect_half_length},
                          {"wait_seconds", config.wait_seconds},
                          {"standoff_during_wait", config.standoff_during_wait},
                          {"n_transects", config.n_transects},
                          {"n_fish", config.n_fish},
                          {"noise_stddev", config.noise_stddev},
                          {"seed", config.seed}};
}

ProtocolConfig protocol_config_from_json(const nlohmann::json& j) {
    ProtocolConfig config;
    try {
        config.altitude = j.value("altitude", config.altitude);
        config.speed = j.value("speed", config.speed);
        config.transect_half_length =
            j.value("transect_half_length", config.transect_half_length);
        config.wait_seconds = j.value("wait_seconds", config.wait_seconds);
        config.standoff_during_wait =
            j.value("standoff_during_wait", config.standoff_during_wait);
        config.n_transects = j.value("n_transects", config.n_transects);
        config.n_fish = j.value("n_fish", config.n_fish);
        config.noise_stddev = j.value("noise_stddev", config.noise_stddev);
        config.seed = j.value("seed", config.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("protocol config JSON: ") + e.what());
    }
    validate(config);
    return config;
}

}  // namespace fidkit
