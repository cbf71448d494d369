#ifndef HOLOKIT_BOUNDARY_HPP
#define HOLOKIT_BOUNDARY_HPP

#include <string>
#include <utility>
#include <vector>

#include "holokit/metrics.hpp"
#include "holokit/scaling.hpp"

namespace holokit {

/// Anisotropic bidisc region at q in a C^2 boundary chart: preimage of a
/// polydisc with radii (tau(q, eps), eps) under the triangular chart map,
/// recentered so that q itself is the center.
struct BidiscSpec {
    Point q;
    double eps = 0.0;
    double tau = 0.0;
    PolyAutomorphism phi;
    Point phiQ;
    HomogeneousExpansion expansion;

    bool contains(const Point& z) const;
    /// Same chart, different size parameter.
    BidiscSpec withEps(double newEps) const;
};

BidiscSpec catlinBidisc(const Domain& d, const Point& q, double eps);

/// McNeal polydisc at q for the level set {rho < rho(q) + eps}: product
/// of discs with the extremal radii in the frame coordinates.
struct PolydiscRegion {
    Point q;
    double eps = 0.0;
    McnealFrame frame;
    bool contains(const Point& z) const;
    const std::vector<double>& radii() const { return frame.tau; }
};

PolydiscRegion mcnealPolydisc(const Domain& d, const Point& q, double eps);

struct QuasiDistanceResult {
    double value = 0.0;
    double dPair = 0.0;      // min of the region infimum and |a - b|
    double dQuasi = 0.0;     // region infimum (bisected), when bracketed
    double dBoundary = 0.0;  // d(a, boundary)
    double tangential = 0.0; // |<L(a), a - b>| / tau(a, d(a, boundary))
    bool bracketFailed = false;
};

/// log(1 + d(a,b)/d(a,dD) + |<L(a), a-b>| / tau(a, d(a,dD))) with
/// L(a) = (-drho/dz_2(a), drho/dz_1(a)).
QuasiDistanceResult herbortRhoStar(const Domain& d, const Point& a,
                                   const Point& b, int typeBound = 0);

struct ResidualRow {
    int id = 0;
    std::string quantity;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// CSV with columns (sample id, quantity, lhs, rhs, margin).
std::string residualCsv(const std::vector<ResidualRow>& rows);

struct HerbortFit {
    double cstar = 0.0;
    std::vector<ResidualRow> rows;
};

/// Ratios r_i of the numeric distance to the symmetrized quasi-distance
/// over the supplied pairs; cstar = min(min r_i, 1 / max r_i).
HerbortFit herbortSandwichFit(const Domain& d,
                              const std::vector<std::pair<Point, Point>>& pairs,
                              int typeBound = 0,
                              const MetricConfig& cfg = {});

struct SandwichFit {
    double c1 = 0.0;  // global inner constant
    double c2 = 0.0;  // global outer constant
    std::vector<ResidualRow> rows;  // per point: inner and outer constants
    std::string law;
};

/// For each q: match the region-size constant to the hyperbolic-ball
/// extents along sampled rays. The region law follows the class tag:
/// strongly pseudoconvex domains use the (sqrt(d), d) polydisc in the
/// normalized frame, C^2 finite type charts use the bidisc.
SandwichFit sandwichConstants(const Domain& d, const std::vector<Point>& qs,
                              double R, int directions = 8,
                              const MetricConfig& cfg = {});

struct PeakFunction {
    Point zeta;
    PolyZ levi;       // holomorphic quadratic jet at zeta
    int sigma = 1;    // sign making Re(sigma * levi) < 0 inside
    double c1 = 0.0;
    double c2 = 0.0;
    double r = 0.0;
    cplx eval(const Point& z) const;
};

/// exp of the signed Levi polynomial at a strongly pseudoconvex boundary
/// point, with constants fitted so that
///   c1 |1 - P(z)| <= |z - zeta| <= c2 sqrt(|1 - P(z)|)
/// on sampled points of the domain within radius r.
PeakFunction peakFunction(const Domain& d, const Point& zeta,
                          double rRequest = 0.5, int samples = 10000,
                          unsigned seed = 5);

/// Two-sided logarithmic distance reference near the boundary.
std::pair<double, double> frBounds(const Domain& d, const Point& a,
                                   const Point& b, double C);

/// 1 / tanh(b - a).
double shrinkFactor(double a, double b);

/// C |v| / sqrt(d(q, boundary)).
double sqrtHyperbolicityLower(const Domain& d, const Point& q, const Point& v,
                              double C);

}  // namespace holokit

#endif
