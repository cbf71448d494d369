#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holokit/automorphism.hpp"

using namespace holokit;

TEST_CASE("translation round trip") {
    auto t = PolyAutomorphism::translation({cplx(1.0, -2.0), cplx(0.5, 0.0)});
    CHECK(t.inverseResidual(3.0, 100, 1) < 1e-12);
    Point z = {cplx(0.1, 0.2), cplx(-0.3, 0.4)};
    Point w = t.apply(z);
    CHECK(std::abs(w[0] - cplx(1.1, -1.8)) < 1e-14);
}

TEST_CASE("linear map uses the exact matrix inverse") {
    std::vector<std::vector<cplx>> A = {
        {cplx(2.0, 1.0), cplx(0.5, 0.0)},
        {cplx(0.0, -1.0), cplx(1.0, 1.0)},
    };
    auto L = PolyAutomorphism::linear(A);
    CHECK(L.inverseResidual(2.0, 100, 2) < 1e-12);
}

TEST_CASE("singular matrix is rejected") {
    std::vector<std::vector<cplx>> A = {
        {cplx(1.0, 0.0), cplx(2.0, 0.0)},
        {cplx(2.0, 0.0), cplx(4.0, 0.0)},
    };
    CHECK_THROWS_AS(PolyAutomorphism::linear(A), Error);
}

TEST_CASE("shear in the last coordinate") {
    PolyZ q = PolyZ::variable(2, 0).pow(2) * cplx(0.0, 3.0);
    auto s = PolyAutomorphism::shearLast(q);
    CHECK(s.inverseResidual(2.0, 100, 3) < 1e-12);
    // q must not depend on z_n
    PolyZ bad = PolyZ::variable(2, 1);
    CHECK_THROWS_AS(PolyAutomorphism::shearLast(bad), Error);
}

TEST_CASE("composition matches pointwise application") {
    auto t = PolyAutomorphism::translation({cplx(0.3, 0.0), cplx(0.0, 0.1)});
    auto dl = PolyAutomorphism::dilation({cplx(2.0, 0.0), cplx(0.0, 1.0)});
    auto comp = dl.after(t);
    Point z = {cplx(0.1, 0.5), cplx(-0.2, 0.2)};
    Point expect = dl.apply(t.apply(z));
    Point got = comp.apply(z);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-13);
    CHECK(comp.inverseResidual(2.0, 100, 4) < 1e-12);
}

TEST_CASE("pushforward of the ball by a dilation") {
    Domain ball = presetBall(2);
    auto dl = PolyAutomorphism::dilation({cplx(2.0, 0.0), cplx(2.0, 0.0)});
    Domain big = dl.pushforward(ball);
    // image is the radius-2 ball: rho(w) = |w/2|^2 - 1
    CHECK(evalRho(big, {cplx(1.9, 0.0), cplx(0.0, 0.0)}) < 0.0);
    CHECK(evalRho(big, {cplx(2.1, 0.0), cplx(0.0, 0.0)}) > 0.0);
    CHECK(evalRho(big, big.basePoint) < 0.0);
    CHECK(big.rho.isReal());
}

TEST_CASE("pushforward by a shear keeps the defining sign") {
    Domain sg = presetSiegel(2);
    PolyZ q = PolyZ::variable(2, 0).pow(2) * cplx(0.5, 0.5);
    auto s = PolyAutomorphism::shearLast(q);
    Domain im = s.pushforward(sg);
    Point z = {cplx(0.2, 0.1), cplx(-1.0, 0.3)};
    CHECK(evalRho(im, s.apply(z)) == doctest::Approx(evalRho(sg, z)).epsilon(1e-11));
}
