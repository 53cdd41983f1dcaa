#include <doctest.h>

#include <cmath>

#include "fidkit/errors.hpp"
#include "fidkit/plan.hpp"
#include "fidkit/sim.hpp"
#include "oracles.hpp"

using namespace fidkit;

namespace {
DisturbanceModel reference_model() {
    return DisturbanceModel{2.0, 1.0, 1.0, 5.0, AbscissaKind::RobotDistance};
}
}  // namespace

TEST_CASE("standoff plan from the reference model") {
    const auto plan = plan_standoff(reference_model(), 0.9, 10.0);
    CHECK(plan.fid == doctest::Approx(6.386294361119891).epsilon(1e-12));
    CHECK(plan.min_altitude == plan.fid);
    CHECK(plan.feasible);
    CHECK(plan.margin == doctest::Approx(10.0 - 6.386294361119891));
    // Against the root-finding oracle.
    const double root = oracles::invert_by_bisection(reference_model(), 1.8);
    CHECK(std::abs(plan.fid - root) < 1e-9);
}

TEST_CASE("a short sensor range makes the plan infeasible") {
    const auto plan = plan_standoff(reference_model(), 0.9, 5.0);
    CHECK_FALSE(plan.feasible);
    CHECK(plan.margin < 0.0);
    CHECK_THROWS_AS(plan_transect(reference_model(), 0.9, 0.5, 4.0, 5.0),
                    Infeasible);
}

TEST_CASE("a flat model imposes no constraint") {
    DisturbanceModel flat{2.0, 2.0, 1.0, 5.0, AbscissaKind::RobotDistance};
    const auto plan = plan_standoff(flat, 0.9, 10.0);
    CHECK(plan.fid == 0.0);
    CHECK(plan.min_altitude == 0.0);
    CHECK(plan.feasible);

    const auto waypoints = plan_transect(flat, 0.9, 0.5, 4.0, 10.0);
    CHECK_FALSE(waypoints.empty());
    for (const auto& w : waypoints) CHECK(w.altitude == 0.0);
}

TEST_CASE("unreachable thresholds propagate for responsive models") {
    CHECK_THROWS_AS(plan_standoff(reference_model(), 0.4, 10.0),
                    ThresholdUnreachable);
}

TEST_CASE("time-domain models are rejected") {
    auto m = reference_model();
    m.abscissa_kind = AbscissaKind::TimeAlongTransect;
    CHECK_THROWS_AS(plan_standoff(m, 0.9, 10.0), TimeDomainModel);
}

TEST_CASE("transect waypoints stay outside the FID") {
    const double speed = 0.5, half_length = 4.0;
    const auto waypoints =
        plan_transect(reference_model(), 0.9, speed, half_length, 10.0);
    const double fid_value = plan_standoff(reference_model(), 0.9, 10.0).fid;

    REQUIRE(waypoints.size() >= 2);
    CHECK(waypoints.front().x_horizontal == -half_length);
    CHECK(waypoints.back().x_horizontal == doctest::Approx(half_length));
    double min_distance = 1e300;
    for (const auto& w : waypoints) {
        CHECK(w.altitude == doctest::Approx(fid_value));
        const double distance = std::hypot(w.altitude, w.x_horizontal);
        CHECK(distance >= fid_value - 1e-9);
        min_distance = std::min(min_distance, distance);
    }
    CHECK(min_distance == doctest::Approx(fid_value).epsilon(1e-9));
    // Spacing is speed * 0.2 s.
    for (std::size_t i = 1; i + 1 < waypoints.size(); ++i)
        CHECK(waypoints[i].x_horizontal - waypoints[i - 1].x_horizontal ==
              doctest::Approx(speed * 0.2));
}

TEST_CASE("raising alpha never lowers the required altitude") {
    double previous = 0.0;
    for (double alpha = 0.55; alpha < 0.99; alpha += 0.02) {
        const auto plan = plan_standoff(reference_model(), alpha, 1e6);
        CHECK(plan.min_altitude >= previous);
        previous = plan.min_altitude;
    }
}

TEST_CASE("flying the planned transect keeps the disturbance bound") {
    const auto truth = reference_model();
    const double alpha = 0.9;
    const auto plan = plan_standoff(truth, alpha, 10.0);

    ProtocolConfig config;
    config.altitude = plan.min_altitude;
    config.speed = 0.5;
    config.transect_half_length = 4.0;
    config.n_transects = 1;
    config.n_fish = 5000;
    config.noise_stddev = 0.05;
    config.seed = 404;
    for (const auto& frame : simulate(truth, config, 5.0)) {
        double sum = 0.0;
        for (double d : frame.fish_distances) sum += d;
        const double mean = sum / frame.fish_distances.size();
        CHECK(mean >= alpha * truth.l_control -
                          3.0 * config.noise_stddev /
                              std::sqrt(static_cast<double>(config.n_fish)));
    }
}
