#ifndef HOLOKIT_SCALING_HPP
#define HOLOKIT_SCALING_HPP

#include <optional>
#include <string>
#include <vector>

#include "holokit/automorphism.hpp"

namespace holokit {

/// One rescaling step: a sequence point, the center it was normalized
/// around, the composed change of coordinates and the resulting domain.
struct ScalingEntry {
    int j = 0;
    Point p;
    Point center;
    std::vector<double> scales;
    PolyAutomorphism map;
    Domain scaled;
    Point image;  // map(p)
};

struct ScalingRun {
    Domain base;
    Point boundaryPoint;
    std::vector<ScalingEntry> entries;
    std::optional<Domain> limitModel;
};

/// Boundary normalization at a strongly pseudoconvex point: after the
/// change the defining function reads 2 Re z_n + 2 Re K(z) + H(z) + ...
/// with K('z, 0) = 0 and H('z, 0) = |'z|^2.
struct SpscNormalization {
    PolyAutomorphism map;
    Domain normalized;
    double gradientNorm = 0.0;
};

SpscNormalization spscNormalization(const Domain& d, const Point& zeta);

/// Normalize around the closest boundary point of p, then dilate
/// ('z, z_n) -> ('z/sqrt(delta), z_n/delta); p lands at ('0, -1) and the
/// scaled defining functions approach 2 Re z_n + |'z|^2.
ScalingEntry spscScaledDomain(const Domain& d, const Point& p, int j = 0);

/// Homogeneous pieces of the boundary expansion at a finite type point
/// in C^2: parts[l] for 2 <= l <= typeBound, real, harmonic-free.
struct HomogeneousExpansion {
    Point center;
    int typeBound = 2;
    std::vector<ZZbarPoly> parts;  // indexed by degree l; [0], [1] unused
    std::string remainder;
    void checkInvariants() const;
};

/// Triangular normalization at a boundary point of a C^2 domain already
/// in the chart 2 Re z_2 + (higher); kills harmonic powers of z_1 up to
/// the type bound.
struct FiniteTypeNormalization {
    PolyAutomorphism map;  // triangular
    cplx d0{1.0, 0.0};
    std::vector<cplx> d;  // d[l], 1 <= l <= typeBound
    HomogeneousExpansion expansion;
};

FiniteTypeNormalization catlinAutomorphism(const Domain& d, const Point& zeta,
                                           int typeBound);

/// min over l of (eps / ||P_l||)^{1/l}, max-abs-coefficient norm, ties
/// broken toward the smaller degree.
double catlinTau(const HomogeneousExpansion& e, double eps);

struct CatlinEntry {
    ScalingEntry entry;
    cplx d0{1.0, 0.0};
    double eps = 0.0;
    double tau = 0.0;
    double supRatio = 0.0;  // tau^{2m} / eps
    HomogeneousExpansion expansion;
    ZZbarPoly scaledTangential{2};  // (1/eps) sum_l tau^l P_l
};

CatlinEntry catlinScaledDomain(const Domain& d, const Point& p, int typeBound,
                               int j = 0);

/// Coefficientwise extrapolation of the tangential parts of the last
/// three entries; checked for degree, harmonic-freeness and grid
/// subharmonicity.
ZZbarPoly limitPolynomial(const std::vector<CatlinEntry>& entries);

/// Extremal orthogonal frame at q for the sublevel set {rho < rho(q)+eps}
/// of a convex domain; map sends q to 0 and the extremal points to the
/// positive real axes.
struct McnealFrame {
    PolyAutomorphism map;
    std::vector<double> tau;      // tau_1 .. tau_n
    std::vector<Point> extremal;  // p^1 .. p^n on the level set
    double level = 0.0;
};

McnealFrame mcnealFrame(const Domain& d, const Point& q, double eps);

/// Re(a0 + sum a_i z_i) <= 0.
struct HalfSpace {
    Point a;
    cplx a0{0.0, 0.0};
    bool contains(const Point& z, double tol = 1e-9) const;
};

struct ConvexEntry {
    ScalingEntry entry;
    double eps = 0.0;
    std::vector<double> tau;
    std::vector<Point> extremal;
    std::vector<HalfSpace> envelope;
    std::vector<cplx> envelopeGradients;  // d rho~ / d z_k at e^k
};

ConvexEntry convexScaledDomain(const Domain& d, const Point& q, int j = 0);

/// Analytic polyhedron piece {|f_l| < 1} near a corner z0 with
/// |f_l(z0)| = 1 for every generator.
struct PolyhedronSpec {
    std::vector<PolyZ> generators;
    Point z0;
    int n() const { return static_cast<int>(generators.size()); }
};

/// Componentwise Moebius renormalization centered at an interior point;
/// maps the local piece into the unit polydisc and z^k to 0.
struct CornerMap {
    PolyhedronSpec spec;
    std::vector<double> theta;
    std::vector<double> tau;
    std::vector<double> lambda;
    Point apply(const Point& z) const;
    /// Generator values w with Lambda(z) = u iff F(z) = w; membership in
    /// the image reduces to |w_l| < 1.
    Point generatorTarget(const Point& u) const;
};

CornerMap polyhedronCornerMaps(const PolyhedronSpec& spec, const Point& zk);

struct LocalHausdorff {
    double value = 0.0;
    double pitch = 0.0;
    bool bothEmpty = false;
};

/// Grid Hausdorff distance between {rho_A <= 0} and {rho_B <= 0} inside
/// the ball B(center, radius); accurate to the grid pitch.
LocalHausdorff localHausdorff(const Domain& a, const Domain& b,
                              const Point& center, double radius,
                              int perDim = 0);

/// %.17g rendering used by every file export.
std::string fmt17(double x);

std::string scalingRunToJson(const ScalingRun& run);

}  // namespace holokit

#endif
