#include <doctest.h>

#include <cmath>

#include "fidkit/errors.hpp"
#include "fidkit/model.hpp"
#include "oracles.hpp"

using namespace fidkit;

namespace {
DisturbanceModel reference_model() {
    return DisturbanceModel{2.0, 1.0, 1.0, 5.0, AbscissaKind::RobotDistance};
}
}  // namespace

TEST_CASE("evaluate at the midpoint gives (l_control + l_hide) / 2") {
    CHECK(evaluate(reference_model(), 5.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("evaluate approaches the upper asymptote") {
    const auto m = reference_model();
    CHECK(std::abs(evaluate(m, 5.0 + 40.0 / m.k) - 2.0) < 1e-9);
}

TEST_CASE("evaluate matches the high-precision value at x = 7") {
    // 1 + 1/(1 + e^-2), frozen from an arbitrary-precision computation.
    CHECK(evaluate(reference_model(), 7.0) ==
          doctest::Approx(1.8807970779778823).epsilon(1e-15));
}

TEST_CASE("evaluate saturates instead of overflowing at extreme x") {
    const auto m = reference_model();
    CHECK(evaluate(m, 1e12) == 2.0);
    CHECK(evaluate(m, -1e12) == 1.0);
    CHECK(std::isfinite(evaluate(m, 1e300)));
    CHECK(std::isfinite(evaluate(m, -1e300)));
}

TEST_CASE("fid at the midpoint threshold equals x0") {
    CHECK(fid(reference_model(), FidQuery{0.75}) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("fid at alpha = 0.9 matches the bisection oracle") {
    const auto m = reference_model();
    const double closed_form = fid(m, FidQuery{0.9});
    CHECK(closed_form == doctest::Approx(6.386294361119891).epsilon(1e-12));
    const double root = oracles::invert_by_bisection(m, 0.9 * m.l_control);
    CHECK(std::abs(closed_form - root) < 1e-10 * std::abs(root));
}

TEST_CASE("fid rejects an unreachable threshold") {
    CHECK_THROWS_AS(fid(reference_model(), FidQuery{0.5}),
                    ThresholdUnreachable);
}

TEST_CASE("fid rejects a flat model") {
    DisturbanceModel flat{2.0, 2.0, 1.0, 5.0, AbscissaKind::RobotDistance};
    CHECK_THROWS_AS(fid(flat, FidQuery{0.9}), DegenerateModel);
}

TEST_CASE("invert examples") {
    const auto m = reference_model();
    CHECK(invert(m, 1.5) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(invert(m, 1.8) ==
          doctest::Approx(6.386294361119891).epsilon(1e-12));
    CHECK_THROWS_AS(invert(m, 2.5), TargetOutOfRange);
    CHECK_THROWS_AS(invert(m, 1.0), TargetOutOfRange);
}

TEST_CASE("randomized models: monotonicity, bounds and midpoint symmetry") {
    oracles::ModelGen gen(20240901);
    // Offsets in units of 1/k, inside the band where the strict bounds are
    // representable in double precision.
    std::uniform_real_distribution<double> offset(-25.0, 25.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen.next();
        const double a = m.x0 + offset(gen.rng) / m.k;
        const double b = m.x0 + offset(gen.rng) / m.k;
        const double fa = evaluate(m, std::min(a, b));
        const double fb = evaluate(m, std::max(a, b));
        CHECK(fa <= fb);
        CHECK(fa > m.l_hide);
        CHECK(fb < m.l_control);

        const double d = std::abs(offset(gen.rng)) / m.k;
        const double sum = evaluate(m, m.x0 + d) + evaluate(m, m.x0 - d);
        CHECK(std::abs(sum - (m.l_control + m.l_hide)) <=
              1e-12 * (m.l_control + m.l_hide));
    }
}

TEST_CASE("randomized models: invert round-trips evaluate") {
    oracles::ModelGen gen(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen.next();
        const double x = m.x0 + u(gen.rng) / m.k;
        CHECK(std::abs(invert(m, evaluate(m, x)) - x) <=
              1e-8 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("randomized models: closed-form fid agrees with bisection") {
    oracles::ModelGen gen(99);
    for (int trial = 0; trial < 500; ++trial) {
        const auto m = gen.next();
        const double alpha = gen.reachable_alpha(m);
        const double closed_form = fid(m, FidQuery{alpha});
        const double root =
            oracles::invert_by_bisection(m, alpha * m.l_control);
        CHECK(std::abs(closed_form - root) <=
              1e-9 * std::max(1.0, std::abs(root)));
        // And the defining equation holds.
        CHECK(evaluate(m, closed_form) ==
              doctest::Approx(alpha * m.l_control).epsilon(1e-9));
    }
}

TEST_CASE("model JSON round-trip is exact") {
    DisturbanceModel m{2.341234567890123, 0.123456789012345, 0.777,
                       -3.25, AbscissaKind::TimeAlongTransect};
    const auto j = to_json(m);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.l_control == m.l_control);
    CHECK(back.l_hide == m.l_hide);
    CHECK(back.k == m.k);
    CHECK(back.x0 == m.x0);
    CHECK(back.abscissa_kind == m.abscissa_kind);
}

TEST_CASE("validate rejects broken parameter sets") {
    CHECK_THROWS_AS(validate(DisturbanceModel{1.0, 2.0, 1.0, 0.0}),
                    InvalidArgument);
    CHECK_THROWS_AS(validate(DisturbanceModel{2.0, -0.5, 1.0, 0.0}),
                    InvalidArgument);
    CHECK_THROWS_AS(validate(DisturbanceModel{2.0, 1.0, 0.0, 0.0}),
                    InvalidArgument);
}
