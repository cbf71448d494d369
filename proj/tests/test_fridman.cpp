#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holokit/fridman.hpp"

using namespace holokit;

TEST_CASE("candidate verification") {
    Domain thullen = presetThullenModel(2);
    Point p = {cplx(0, 0), cplx(-1, 0)};
    auto good = affineCandidate(p, {0.3, 0.4}, "ball");
    CHECK(verifyCandidate(thullen, good).ok);
    // a fat affine image pokes through the boundary
    auto bad = affineCandidate(p, {2.0, 3.0}, "ball");
    CHECK_FALSE(verifyCandidate(thullen, bad).ok);
    // automorphism round trips
    Domain ball = presetBall(2);
    auto aut = ballAutomorphismCandidate({cplx(0.3, 0.1), cplx(0, -0.2)}, 0.99);
    CHECK(verifyCandidate(ball, aut).ok);
    Domain pd = presetPolydisc(2);
    auto paut =
        polydiscAutomorphismCandidate({cplx(0.5, 0), cplx(0, 0.7)}, 0.99);
    CHECK(verifyCandidate(pd, paut).ok);
}

TEST_CASE("shrunken identity on the ball reaches the hyperbolic radius") {
    Domain ball = presetBall(2);
    Point origin = {cplx(0, 0), cplx(0, 0)};
    MetricConfig cfg;
    cfg.preferClosedForm = true;
    std::vector<double> uppers;
    for (const double s : {0.9, 0.99}) {
        auto cand = affineCandidate(origin, {1.0, 1.0}, "ball", s);
        auto fb = fridmanUpper(ball, origin, "ball", {cand}, cfg, 8);
        CHECK_FALSE(fb.noInformation);
        CHECK(fb.bestR >= std::atanh(s * (1 - 1e-6)) - 1e-3);
        CHECK(fb.bestR <= std::atanh(s) + 1e-3);
        uppers.push_back(fb.upper);
    }
    CHECK(uppers[1] < uppers[0]);
}

TEST_CASE("more candidates never hurt") {
    Domain ball = presetBall(2);
    Point origin = {cplx(0, 0), cplx(0, 0)};
    MetricConfig cfg;
    cfg.preferClosedForm = true;
    auto c1 = affineCandidate(origin, {1.0, 1.0}, "ball", 0.9);
    auto c2 = affineCandidate(origin, {1.0, 1.0}, "ball", 0.99);
    auto small = fridmanUpper(ball, origin, "ball", {c1}, cfg, 8);
    auto both = fridmanUpper(ball, origin, "ball", {c1, c2}, cfg, 8);
    CHECK(both.upper <= small.upper + 1e-12);
    CHECK(both.witness == 1);
}

TEST_CASE("cayley candidate on the siegel model") {
    Domain sg = presetSiegel(2);
    Point p = {cplx(0, 0), cplx(-1, 0)};
    MetricConfig cfg;
    cfg.preferClosedForm = true;
    auto cand = cayleyCandidate(p, 0.999);
    auto fb = fridmanUpper(sg, p, "ball", {cand}, cfg, 8);
    CHECK_FALSE(fb.noInformation);
    const double ceiling = std::atanh(0.999 * (1 - 1e-6));
    CHECK(fb.bestR == doctest::Approx(ceiling).epsilon(0.02));
    CHECK(fb.upper <= 0.27);
}

TEST_CASE("upper bound on the thullen model from affine candidates") {
    Domain th = presetThullenModel(2);
    Point p = {cplx(0, 0), cplx(-1, 0)};
    MetricConfig cfg;
    cfg.N = 2;
    cfg.iterations = 30;
    cfg.searchM = 16;
    cfg.M = 32;
    auto fb = fridmanUpper(
        th, p, "ball",
        {affineCandidate(p, {0.5, 0.6}, "ball"),
         affineCandidate(p, {0.7, 0.4}, "ball")},
        cfg, 0);
    CHECK_FALSE(fb.noInformation);
    CHECK(fb.upper > 0.5);
    CHECK(fb.upper < 50.0);
}

TEST_CASE("zero certificates for the cataloged models") {
    Domain ball = presetBall(2);
    auto zb = fridmanZeroCert(ball, {cplx(0.2, 0.1), cplx(0, -0.3)}, "ball");
    CHECK(zb.certified);
    REQUIRE(zb.exhaustion.size() == 3);
    CHECK(zb.exhaustion[0].second < zb.exhaustion[1].second);
    CHECK(zb.exhaustion[1].second < zb.exhaustion[2].second);
    CHECK(zb.exhaustion[2].second ==
          doctest::Approx(std::atanh(0.999 * (1 - 1e-6))));

    Domain sg = presetSiegel(2);
    auto zs = fridmanZeroCert(sg, {cplx(0, 0), cplx(-1, 0)}, "ball");
    CHECK(zs.certified);
    CHECK(zs.biholomorphism.find("Cayley") != std::string::npos);

    Domain pd = presetPolydisc(2);
    auto zp = fridmanZeroCert(pd, {cplx(0.3, 0), cplx(0, 0.2)}, "polydisc");
    CHECK(zp.certified);

    // mismatched or uncataloged targets get refusals, not errors
    CHECK_FALSE(fridmanZeroCert(pd, {cplx(0, 0), cplx(0, 0)}, "ball")
                    .certified);
    CHECK_FALSE(fridmanZeroCert(ball, {cplx(0, 0), cplx(0, 0)}, "polydisc")
                    .certified);
    Domain th = presetThullenModel(2);
    auto zt = fridmanZeroCert(th, {cplx(0, 0), cplx(-1, 0)}, "ball");
    CHECK_FALSE(zt.certified);
    CHECK(zt.reason.find("cataloged") != std::string::npos);
}

TEST_CASE("ball boundary sequence drives the bound down") {
    Domain ball = presetBall(2);
    std::vector<Point> seq;
    for (const double d : {1e-1, 1e-2, 1e-3, 1e-4})
        seq.push_back({cplx(0, 0), cplx(1 - d, 0)});
    MetricConfig cfg;
    cfg.preferClosedForm = true;
    auto rows = fridmanBoundaryExperiment(ball, seq, "ball", cfg, 8);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].error.empty());
        CHECK(rows[i].upper > 0.0);
        if (i) CHECK(rows[i].upper < rows[i - 1].upper);
    }
    CHECK(rows.back().upper <= 0.2);
}

TEST_CASE("polydisc corner sequence drives the bound down") {
    Domain pd = presetPolydisc(2);
    std::vector<Point> seq;
    for (const double d : {1e-1, 1e-2, 1e-3, 1e-4})
        seq.push_back({cplx(1 - d, 0), cplx(1 - d, 0)});
    MetricConfig cfg;
    cfg.preferClosedForm = true;
    auto rows = fridmanBoundaryExperiment(pd, seq, "polydisc", cfg, 8);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].error.empty());
        if (i) CHECK(rows[i].upper < rows[i - 1].upper);
    }
    CHECK(rows.back().upper <= 0.2);
}

TEST_CASE("egg chart sequence levels off at a positive bound") {
    Domain chart = presetEggChart(2);
    chart.boundingRadius = 6.0;
    std::vector<Point> seq;
    for (const double d : {5e-2, 2.5e-2, 1.25e-2})
        seq.push_back({cplx(0, 0), cplx(-d, 0)});
    MetricConfig cfg;
    cfg.N = 2;
    cfg.iterations = 30;
    cfg.searchM = 16;
    cfg.M = 32;
    auto rows = fridmanBoundaryExperiment(chart, seq, "ball", cfg, 0);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.upper > 0.0);
        CHECK(r.upper < 100.0);
    }
}

TEST_CASE("experiment csv layout") {
    std::vector<FridmanRow> rows = {{3, 0.5, 2.0, 0.5, "cand", 0.0, ""}};
    const std::string csv = fridmanRowsCsv(rows);
    CHECK(csv.find("j,d,bestR,upper,candidate,wall\n") == 0);
    CHECK(csv.find("3,0.5,2,0.5,cand,0\n") != std::string::npos);
}
