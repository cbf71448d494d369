#ifndef HOLOKIT_METRICS_HPP
#define HOLOKIT_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "holokit/closed_forms.hpp"
#include "holokit/domain.hpp"

namespace holokit {

enum class BoundKind { Exact, UpperBound, LowerBound };
std::string to_string(BoundKind b);

/// Polynomial disc map f(lambda) = sum c_k lambda^k, c_k in C^n.
struct AnalyticDisc {
    std::vector<Point> coeffs;  // c_0 .. c_N
    double eta = 0.0;
    Point eval(cplx lambda) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct MetricConfig {
    int N = 8;             // disc degree
    int M = 256;           // boundary samples at certification
    int searchM = 64;      // boundary samples during search
    double eta = 0.0;      // 0 = auto: 1e-6 * coefficient scale of rho
    int iterations = 2000; // objective-evaluation budget for the search
    unsigned seed = 1;
    bool fullSpace = false;  // search all C^n coefficient directions
    // ball-probe shortcut: exact distances when the domain is a model
    bool preferClosedForm = false;
    // restrict admissibility to the intersection with a Euclidean ball
    std::optional<std::pair<Point, double>> ballConstraint;
};

struct MetricEstimate {
    double value = 0.0;
    BoundKind boundKind = BoundKind::UpperBound;
    AnalyticDisc witness;        // Kobayashi side
    std::string witnessDesc;     // Caratheodory side / notes
    double alpha = 0.0;          // certified derivative scale, unit direction
    bool vacuous = false;
    bool sampledContainment = false;  // radial grid used (rho not psh-certified)
    MetricConfig cfg;
};

struct DistanceEstimate {
    double value = 0.0;
    BoundKind boundKind = BoundKind::UpperBound;
    std::vector<Point> path;
    std::vector<double> perSegment;
    bool exitedDomain = false;  // ball-probe ray left the domain first
};

/// kind: disc, polydisc, ball, halfplane, siegel.
MetricEstimate closedFormInfMetric(const std::string& kind, const Point& z,
                                   const Point& v);
DistanceEstimate closedFormDistance(const std::string& kind, const Point& p,
                                    const Point& q);

/// Largest certified alpha with an admissible disc f(0)=z, f'(0)=alpha*v;
/// returns 1/alpha scaled by |v|. Rigorous upper bound for the
/// infinitesimal Kobayashi metric.
MetricEstimate kobayashiInfEstimate(const Domain& d, const Point& z,
                                    const Point& v, const MetricConfig& cfg);

/// Best |df(z)v| over certified candidate maps into the unit disc
/// (domain read as D intersected with its bounding ball).
MetricEstimate caratheodoryInfLower(const Domain& d, const Point& z,
                                    const Point& v, const MetricConfig& cfg);

/// Polyline path optimization of the metric quadrature; upper bound for
/// the Kobayashi distance.
DistanceEstimate kobayashiDistanceEstimate(const Domain& d, const Point& p,
                                           const Point& q,
                                           const MetricConfig& cfg);

struct RadialExtent {
    Point direction;
    double extent = 0.0;
    bool exitedDomain = false;
};

/// For each direction, the radial parameter where the distance upper
/// bound crosses R (inner bound of the Kobayashi ball).
std::vector<RadialExtent> kobayashiBallProbe(const Domain& d, const Point& p,
                                             double R,
                                             const std::vector<Point>& dirs,
                                             const MetricConfig& cfg);

/// F^K(U cap D) / F^K(D) with U a Euclidean ball.
double localizationRatio(const Domain& d, const Point& uCenter,
                         double uRadius, const Point& z, const Point& v,
                         const MetricConfig& cfg);

}  // namespace holokit

#endif
