#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holokit/metrics.hpp"

using namespace holokit;

TEST_CASE("closed-form wrappers") {
    auto m = closedFormInfMetric("disc", {cplx(0.5, 0)}, {cplx(1, 0)});
    CHECK(m.value == doctest::Approx(4.0 / 3.0));
    CHECK(m.boundKind == BoundKind::Exact);
    auto d = closedFormDistance("disc", {cplx(0, 0)}, {cplx(0.5, 0)});
    CHECK(d.value == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(closedFormInfMetric("disc", {cplx(1.5, 0)}, {cplx(1, 0)}),
                    Error);
    CHECK_THROWS_AS(closedFormInfMetric("nope", {cplx(0, 0)}, {cplx(1, 0)}),
                    Error);
}

TEST_CASE("kobayashi estimate at the ball center") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    cfg.N = 4;
    auto e = kobayashiInfEstimate(ball, ball.basePoint,
                                  {cplx(1, 0), cplx(0, 0)}, cfg);
    CHECK(e.value >= 1.0);
    CHECK(e.value <= 1.05);
    CHECK(e.boundKind == BoundKind::UpperBound);
}

TEST_CASE("kobayashi estimate on the disc at 0.5 needs curved discs") {
    Domain disc = presetBall(1);
    MetricConfig cfg;
    auto e = kobayashiInfEstimate(disc, {cplx(0.5, 0)}, {cplx(1, 0)}, cfg);
    const double truth = 4.0 / 3.0;
    CHECK(e.value >= truth - 1e-9);  // upper bound of the true metric
    CHECK(e.value <= truth * 1.02);
}

TEST_CASE("kobayashi estimate: zero vector") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    auto e = kobayashiInfEstimate(ball, ball.basePoint,
                                  {cplx(0, 0), cplx(0, 0)}, cfg);
    CHECK(e.value == 0.0);
}

TEST_CASE("kobayashi estimate scales linearly in |v|") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    Point z = {cplx(0.2, 0.1), cplx(0.0, 0.3)};
    Point v = {cplx(0.4, -0.1), cplx(0.2, 0.2)};
    auto e1 = kobayashiInfEstimate(ball, z, v, cfg);
    Point v3 = v;
    for (auto& x : v3) x *= 3.0;
    auto e3 = kobayashiInfEstimate(ball, z, v3, cfg);
    CHECK(e3.value == doctest::Approx(3.0 * e1.value).epsilon(1e-12));
}

TEST_CASE("witness disc is admissible and matches the reported alpha") {
    Domain disc = presetBall(1);
    MetricConfig cfg;
    auto e = kobayashiInfEstimate(disc, {cplx(0.5, 0)}, {cplx(1, 0)}, cfg);
    const auto& w = e.witness;
    CHECK(std::abs(w.coeffs[0][0] - cplx(0.5, 0)) < 1e-15);
    CHECK(std::abs(w.coeffs[1][0]) == doctest::Approx(e.alpha));
    for (int j = 0; j < 64; ++j) {
        const double th = 2 * M_PI * j / 64;
        Point p = w.eval(cplx(std::cos(th), std::sin(th)));
        CHECK(evalRho(disc, p) <= 0.0);
    }
}

TEST_CASE("degenerate geometry near the boundary") {
    Domain disc = presetBall(1);
    MetricConfig cfg;
    cfg.eta = 1e-2;
    CHECK_THROWS_AS(
        kobayashiInfEstimate(disc, {cplx(0.999995, 0)}, {cplx(1, 0)}, cfg),
        Error);
}

TEST_CASE("caratheodory lower bounds") {
    MetricConfig cfg;
    Domain ball = presetBall(2);
    auto c = caratheodoryInfLower(ball, ball.basePoint,
                                  {cplx(1, 0), cplx(0, 0)}, cfg);
    CHECK(c.value >= 1.0 - 1e-12);
    Domain pd = presetPolydisc(2);
    auto c2 = caratheodoryInfLower(pd, pd.basePoint,
                                   {cplx(0, 0), cplx(1, 0)}, cfg);
    CHECK(c2.value >= 1.0 - 1e-12);
    auto c0 = caratheodoryInfLower(ball, ball.basePoint,
                                   {cplx(0, 0), cplx(0, 0)}, cfg);
    CHECK(c0.value == 0.0);
}

TEST_CASE("caratheodory below kobayashi on a non-model domain") {
    Domain egg = presetEgg(2);
    MetricConfig cfg;
    Point z = {cplx(0.2, 0.1), cplx(-0.3, 0.2)};
    Point v = {cplx(0.5, 0.2), cplx(1.0, -0.4)};
    auto lo = caratheodoryInfLower(egg, z, v, cfg);
    auto hi = kobayashiInfEstimate(egg, z, v, cfg);
    CHECK(lo.value <= hi.value + 1e-9);
    CHECK(lo.value > 0.0);
}

TEST_CASE("distance estimate on the polydisc") {
    Domain pd = presetPolydisc(2);
    MetricConfig cfg;
    auto d = kobayashiDistanceEstimate(pd, {cplx(0, 0), cplx(0, 0)},
                                       {cplx(0.5, 0), cplx(0, 0)}, cfg);
    const double truth = 0.5 * std::log(3.0);
    CHECK(d.value >= truth - 5e-3);
    CHECK(d.value <= truth * 1.03);
}

TEST_CASE("distance estimate on the ball to 0.9") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    auto d = kobayashiDistanceEstimate(ball, {cplx(0, 0), cplx(0, 0)},
                                       {cplx(0.9, 0), cplx(0, 0)}, cfg);
    const double truth = std::atanh(0.9);
    CHECK(d.value >= truth - 5e-3);
    CHECK(d.value <= truth * 1.03);
}

TEST_CASE("distance of a point to itself") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    auto d = kobayashiDistanceEstimate(ball, ball.basePoint, ball.basePoint,
                                       cfg);
    CHECK(d.value == 0.0);
}

TEST_CASE("ball probe on the disc") {
    Domain disc = presetBall(1);
    MetricConfig cfg;
    const double R = 0.8;
    auto ext = kobayashiBallProbe(disc, {cplx(0, 0)}, R,
                                  {{cplx(1, 0)}, {cplx(-1, 0)}}, cfg);
    for (const auto& e : ext) {
        CHECK(e.extent == doctest::Approx(std::tanh(R)).epsilon(0.05));
        CHECK_FALSE(e.exitedDomain);
    }
    auto zero = kobayashiBallProbe(disc, {cplx(0, 0)}, 0.0, {{cplx(1, 0)}},
                                   cfg);
    CHECK(zero[0].extent == 0.0);
}

TEST_CASE("localization ratio is 1 when the neighborhood swallows D") {
    Domain disc = presetBall(1);
    MetricConfig cfg;
    const double r = localizationRatio(disc, {cplx(0, 0)}, 50.0,
                                       {cplx(0.3, 0)}, {cplx(1, 0)}, cfg);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("localization ratio exceeds 1 for a small neighborhood") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    Point z = {cplx(0.0, 0.0), cplx(0.8, 0.0)};
    const double r = localizationRatio(ball, z, 0.35, z,
                                       {cplx(1, 0), cplx(0, 0)}, cfg);
    CHECK(r >= 1.0 - 1e-9);
}

TEST_CASE("schwarz-pick monotonicity for nested balls") {
    Domain small = presetBall(2);
    Domain big = presetBall(2);
    // radius-2 ball: rho = |z|^2/4 - 1
    big.rho = big.rho * 0.0;
    PolyZ z1 = PolyZ::variable(2, 0), z2 = PolyZ::variable(2, 1);
    big.rho = (ZZbarPoly::absSquared(z1) + ZZbarPoly::absSquared(z2)) * 0.25 +
              ZZbarPoly::constant(2, -1.0);
    big.boundingRadius = 3.0;
    MetricConfig cfg;
    Point z = {cplx(0.3, 0.1), cplx(-0.2, 0.4)};
    Point v = {cplx(1.0, 0.0), cplx(0.5, -0.5)};
    auto inner = kobayashiInfEstimate(small, z, v, cfg);
    auto outer = kobayashiInfEstimate(big, z, v, cfg);
    CHECK(inner.value >= outer.value - 1e-9);
}
