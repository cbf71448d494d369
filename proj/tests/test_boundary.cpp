#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holokit/boundary.hpp"

using namespace holokit;

namespace {

Domain eggChart4() {
    Domain d = presetEggChart(2);
    d.boundingRadius = 6.0;
    return d;
}

}  // namespace

TEST_CASE("shrink factor values") {
    CHECK(shrinkFactor(0.0, 1.0) == doctest::Approx(1.3130352854993312));
    CHECK(shrinkFactor(1.0, 1.1) == doctest::Approx(10.033311132253989));
    CHECK(shrinkFactor(0.0, 40.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(shrinkFactor(1.0, 1.0), Error);
    CHECK_THROWS_AS(shrinkFactor(-1.0, 1.0), Error);
}

TEST_CASE("sqrt hyperbolicity reference values") {
    Domain ball = presetBall(2);
    Point q = {cplx(0, 0), cplx(0.99, 0)};
    // d(q, boundary) = 0.01 exactly on the ball
    CHECK(sqrtHyperbolicityLower(ball, q, {cplx(1, 0), cplx(0, 0)}, 1.0) ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK(sqrtHyperbolicityLower(ball, q, {cplx(0, 0), cplx(0, 0)}, 1.0) ==
          0.0);
}

TEST_CASE("numeric metric upper dominates the sqrt lower with C = 0.3") {
    Domain ball = presetBall(2);
    MetricConfig cfg;
    double fitted = 1e300;
    for (const double d : {1e-1, 1e-2, 1e-3}) {
        Point q = {cplx(0, 0), cplx(1 - d, 0)};
        Point v = {cplx(0, 0), cplx(1, 0)};
        auto est = kobayashiInfEstimate(ball, q, v, cfg);
        fitted = std::min(fitted, est.value * std::sqrt(d));
    }
    CHECK(fitted >= 0.3);
}

TEST_CASE("two-sided log bounds") {
    Domain ball = presetBall(2);
    Point a = {cplx(0, 0), cplx(1 - 1e-4, 0)};
    auto same = frBounds(ball, a, a, 2.5);
    CHECK(same.second == doctest::Approx(2.5).epsilon(1e-12));
    Point b = {cplx(1 - 1e-4, 0), cplx(0, 0)};
    auto far = frBounds(ball, a, b, 1.0);
    CHECK(far.first ==
          doctest::Approx(4.0 * std::log(10.0) - 1.0).epsilon(1e-6));
    // upper >= lower on sampled pairs with separated feet
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 0.9);
    for (int i = 0; i < 20; ++i) {
        Point p = {cplx(u(rng), 0), cplx(0, 0)};
        Point q = {cplx(0, 0), cplx(u(rng), 0)};
        auto bounds = frBounds(ball, p, q, 1.0);
        CHECK(bounds.second >= bounds.first);
    }
}

TEST_CASE("peak function at the top of the ball") {
    Domain ball = presetBall(2);
    Point zeta = {cplx(0, 0), cplx(1, 0)};
    auto pk = peakFunction(ball, zeta, 0.25);
    CHECK(std::abs(pk.eval(zeta) - cplx(1.0, 0.0)) < 1e-13);
    CHECK(pk.r == doctest::Approx(0.25));
    CHECK(pk.c1 > 0.0);
    CHECK(pk.c1 <= pk.c2 * 10.0);
    // fresh samples: modulus below one and both inequalities with slack
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int seen = 0;
    while (seen < 500) {
        Point z = {cplx(0.25 * u(rng), 0.25 * u(rng)),
                   cplx(1 + 0.25 * u(rng), 0.25 * u(rng))};
        double r2 = std::norm(z[0]) + std::norm(z[1] - cplx(1, 0));
        if (r2 > 0.0625) continue;
        if (evalRho(ball, z) >= 0.0) continue;
        ++seen;
        const cplx P = pk.eval(z);
        CHECK(std::abs(P) < 1.0);
        const double gap = std::abs(1.0 - P);
        const double dz = std::sqrt(r2);
        CHECK(0.9 * pk.c1 * gap <= dz + 1e-12);
        CHECK(dz <= 1.1 * pk.c2 * std::sqrt(gap) + 1e-12);
    }
}

TEST_CASE("peak function rejects non-boundary centers") {
    Domain ball = presetBall(2);
    CHECK_THROWS_AS(peakFunction(ball, {cplx(0, 0), cplx(0.5, 0)}), Error);
}

TEST_CASE("bidisc membership and monotonicity") {
    Domain chart = eggChart4();
    Point q = {cplx(0, 0), cplx(-0.05, 0)};
    for (const double delta : {1e-3, 1e-2, 1e-1}) {
        auto spec = catlinBidisc(chart, q, delta);
        CHECK(spec.contains(q));
    }
    auto small = catlinBidisc(chart, q, 0.01);
    auto big = small.withEps(0.02);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int members = 0;
    for (int i = 0; i < 2000; ++i) {
        Point z = {cplx(0.4 * u(rng), 0.4 * u(rng)),
                   cplx(-0.06 + 0.05 * u(rng), 0.05 * u(rng))};
        if (!small.contains(z)) continue;
        ++members;
        CHECK(big.contains(z));
    }
    CHECK(members > 10);
}

TEST_CASE("bidisc reciprocity constant over sampled pairs") {
    Domain chart = eggChart4();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto entryScale = [&](const Point& center, const Point& other) {
        auto family = catlinBidisc(chart, center, 1.0);
        if (!family.withEps(1e3).contains(other)) return 1e300;
        double lo = 1e-12, hi = 1e3;
        for (int it = 0; it < 80; ++it) {
            const double mid = std::sqrt(lo * hi);
            (family.withEps(mid).contains(other) ? hi : lo) = mid;
        }
        return hi;
    };
    std::vector<double> ratios;
    while (ratios.size() < 15) {
        Point q = {cplx(0.3 * u(rng), 0.3 * u(rng)),
                   cplx(-0.1 + 0.05 * u(rng), 0.03 * u(rng))};
        Point p = {cplx(0.3 * u(rng), 0.3 * u(rng)),
                   cplx(-0.1 + 0.05 * u(rng), 0.03 * u(rng))};
        if (evalRho(chart, q) >= -1e-4 || evalRho(chart, p) >= -1e-4)
            continue;
        const double dq = entryScale(q, p);
        const double dp = entryScale(p, q);
        if (dq >= 1e299 || dp >= 1e299) continue;
        ratios.push_back(dp / dq);
    }
    double fitted = 0.0;
    for (size_t i = 0; i < 8; ++i) fitted = std::max(fitted, ratios[i]);
    CHECK(fitted < 50.0);
    for (size_t i = 8; i < ratios.size(); ++i)
        CHECK(ratios[i] <= 1.2 * std::max(fitted, 1.0 / 1.2 * ratios[i]));
}

TEST_CASE("mcneal polydisc membership and radii") {
    Domain ball = presetBall(2);
    ball.classTag = DomainClass::ConvexFiniteType;
    auto pr = mcnealPolydisc(ball, {cplx(0, 0), cplx(0, 0)}, 1.0);
    CHECK(pr.contains({cplx(0, 0), cplx(0, 0)}));
    CHECK(pr.radii()[0] == doctest::Approx(pr.radii()[1]).epsilon(1e-8));

    Domain egg = presetConvexEgg(2);
    Point q = {cplx(0, 0), cplx(-0.95, 0)};
    std::vector<double> r1, r2;
    for (const double eps : {0.0125, 0.025, 0.05}) {
        auto p = mcnealPolydisc(egg, q, eps);
        CHECK(p.contains(q));
        r1.push_back(p.radii()[0]);
        r2.push_back(p.radii()[1]);
    }
    for (int i = 1; i < 3; ++i) {
        CHECK(r1[i] > r1[i - 1]);
        CHECK(r2[i] > r2[i - 1]);
    }
}

TEST_CASE("quasi-distance basics") {
    Domain chart = eggChart4();
    Point a = {cplx(0, 0), cplx(-0.1, 0)};
    CHECK(herbortRhoStar(chart, a, a).value == 0.0);

    // vertical pair: pairing vanishes, both distances are 0.1
    Point b = {cplx(0, 0), cplx(-0.2, 0)};
    auto r = herbortRhoStar(chart, a, b);
    CHECK(r.dBoundary == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(r.tangential < 1e-10);
    CHECK(r.dPair == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-5));
}

TEST_CASE("quasi-distance grows along a ray") {
    Domain chart = eggChart4();
    Point a = {cplx(0, 0), cplx(-0.2, 0)};
    double prev = -1.0;
    for (int s = 1; s <= 5; ++s) {
        Point b = {cplx(0.05 * s, 0), cplx(-0.2 - 0.05 * s, 0)};
        REQUIRE(evalRho(chart, b) < 0.0);
        const double v = herbortRhoStar(chart, a, b).value;
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
    CHECK(prev > 0.0);
}

TEST_CASE("quasi-distance sandwich against the numeric distance") {
    Domain chart = eggChart4();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<Point, Point>> pairs;
    while (pairs.size() < 10) {
        Point a = {cplx(0.3 * u(rng), 0.3 * u(rng)),
                   cplx(-0.08 + 0.05 * u(rng), 0.02 * u(rng))};
        Point b = {cplx(0.3 * u(rng), 0.3 * u(rng)),
                   cplx(-0.08 + 0.05 * u(rng), 0.02 * u(rng))};
        if (evalRho(chart, a) >= -1e-4 || evalRho(chart, b) >= -1e-4)
            continue;
        pairs.emplace_back(a, b);
    }
    MetricConfig cfg;
    cfg.N = 2;
    cfg.iterations = 30;
    cfg.searchM = 16;
    cfg.M = 32;
    auto fit = herbortSandwichFit(chart, pairs, 0, cfg);
    CHECK(fit.cstar >= 0.05);
    CHECK(fit.rows.size() == 10);
}

TEST_CASE("sandwich constants on the ball are stable over dyadic depths") {
    Domain ball = presetBall(2);
    std::vector<Point> qs;
    for (const double d : {1e-1, 1e-2, 1e-3, 1e-4})
        qs.push_back({cplx(0, 0), cplx(1 - d, 0)});
    auto fit = sandwichConstants(ball, qs, 1.0, 16);
    CHECK(fit.c1 > 0.0);
    CHECK(fit.c1 <= fit.c2);
    std::vector<double> inner, outer;
    for (const auto& row : fit.rows) {
        if (row.quantity == "inner_constant") inner.push_back(row.rhs);
        if (row.quantity == "outer_constant") outer.push_back(row.rhs);
    }
    auto ratio = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) /
               *std::min_element(v.begin(), v.end());
    };
    CHECK(ratio(inner) < 4.0);
    CHECK(ratio(outer) < 4.0);
    // shrinking R shrinks the inner constant
    auto smallR = sandwichConstants(ball, {qs[1]}, 0.25, 16);
    auto bigR = sandwichConstants(ball, {qs[1]}, 1.0, 16);
    CHECK(smallR.c1 < bigR.c1);
}

TEST_CASE("sandwich constants on the egg chart") {
    Domain chart = eggChart4();
    std::vector<Point> qs;
    for (const double d : {1e-1, 1e-2, 1e-3})
        qs.push_back({cplx(0, 0), cplx(-d, 0)});
    MetricConfig cfg;
    cfg.N = 2;
    cfg.iterations = 30;
    cfg.searchM = 16;
    cfg.M = 32;
    auto fit = sandwichConstants(chart, qs, 1.0, 4, cfg);
    CHECK(fit.c1 > 0.0);
    CHECK(fit.c1 <= fit.c2);
    std::vector<double> inner, outer;
    for (const auto& row : fit.rows) {
        if (row.quantity == "inner_constant") inner.push_back(row.rhs);
        if (row.quantity == "outer_constant") outer.push_back(row.rhs);
    }
    auto ratio = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) /
               *std::min_element(v.begin(), v.end());
    };
    CHECK(ratio(inner) < 4.0);
    CHECK(ratio(outer) < 4.0);
}

TEST_CASE("residual csv layout") {
    std::vector<ResidualRow> rows = {{0, "thing", 1.0, 2.0}};
    const std::string csv = residualCsv(rows);
    CHECK(csv.find("id,quantity,lhs,rhs,margin\n") == 0);
    CHECK(csv.find("0,thing,1,2,1\n") != std::string::npos);
}
