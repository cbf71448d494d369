#ifndef HOLOKIT_DOMAIN_HPP
#define HOLOKIT_DOMAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "holokit/polynomial.hpp"

namespace holokit {

using Point = std::vector<cplx>;

enum class DomainClass {
    StronglyPseudoconvex,
    FiniteType2D,
    ConvexFiniteType,
    PolynomialModel,
    Polyhedron,
    Generic,
};

std::string to_string(DomainClass c);
DomainClass domainClassFromString(const std::string& s);

/// A domain {rho < 0} in C^n cut out by a real polynomial in (z, zbar).
struct Domain {
    ZZbarPoly rho{1};
    int n = 1;
    DomainClass classTag = DomainClass::Generic;
    std::optional<int> declaredType;  // even 2m >= 2
    double boundingRadius = 10.0;
    Point basePoint;

    /// Validates reality, base-point membership and (for PolynomialModel)
    /// the structural 2Re z_n + P('z) form. Throws on violation.
    void validate() const;

    bool isPlurisubharmonicCertified() const;
};

double evalRho(const Domain& d, const Point& z);
std::vector<cplx> wirtingerGradient(const Domain& d, const Point& z);

struct BoundaryDistanceResult {
    double distance = 0.0;
    Point foot;
    std::string method;  // "newton" or "sampled"
};

/// Euclidean distance from an interior point to {rho = 0} within the
/// bounding ball, with the closest boundary point.
BoundaryDistanceResult boundaryDistance(const Domain& d, const Point& z);

/// Presets: ball(n), polydisc(n), siegel(n), halfplane, thullen_model(m),
/// egg(m), egg_chart(m), perturbed_ball(k, bump).
Domain presetBall(int n);
Domain presetPolydisc(int n);
Domain presetSiegel(int n);
Domain presetHalfplane();
Domain presetThullenModel(int m);
Domain presetEgg(int m);
/// The egg in the boundary chart 2Re z_2 + |z_2|^2 + |z_1|^{2m} < 0
/// (affine image of egg(m); the finite-type pipelines work here).
Domain presetEggChart(int m);
/// egg(m) tagged convex finite type (it is convex for every m >= 1).
Domain presetConvexEgg(int m);
Domain presetPerturbedBall(int k, double bump);

/// "preset:ball:2", "preset:egg:2", "preset:perturbed_ball:16:0.1", ...
Domain presetDomain(const std::string& spec);

/// JSON (de)serialization per the domain spec file schema.
std::string domainToJson(const Domain& d);
Domain domainFromJson(const std::string& text);
/// Accepts either a preset string or a JSON document.
Domain parseDomainSpec(const std::string& text);

}  // namespace holokit

#endif
