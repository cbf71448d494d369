#ifndef HOLOKIT_CLOSED_FORMS_HPP
#define HOLOKIT_CLOSED_FORMS_HPP

#include <optional>

#include "holokit/domain.hpp"

namespace holokit {

/// Closed-form invariant metrics and distances for the model domains.
/// Normalization: the disc carries |v| / (1 - |z|^2) and
/// dist(0, r) = atanh(r) = (1/2) log((1+r)/(1-r)).
namespace closed {

double discMetric(cplx z, cplx v);
double discDistance(cplx a, cplx b);

double polydiscMetric(const Point& z, const Point& v);
double polydiscDistance(const Point& a, const Point& b);

double ballMetric(const Point& z, const Point& v);
double ballDistance(const Point& a, const Point& b);

/// Left halfplane {Re z < 0}.
double halfplaneMetric(cplx z, cplx v);
double halfplaneDistance(cplx a, cplx b);

/// Siegel model {2 Re z_n + |'z|^2 < 0}, any n >= 1.
double siegelMetric(const Point& z, const Point& v);
double siegelDistance(const Point& a, const Point& b);

/// Biholomorphism ball -> Siegel model and its inverse.
Point cayleyBallToSiegel(const Point& zeta);
Point cayleySiegelToBall(const Point& w);

enum class ModelKind { Disc, Ball, Polydisc, Halfplane, Siegel };

double modelMetric(ModelKind k, const Point& z, const Point& v);
double modelDistance(ModelKind k, const Point& a, const Point& b);
bool modelContains(ModelKind k, const Point& z);

/// Recognizes the preset model structure of a domain, when one applies.
std::optional<ModelKind> modelForDomain(const Domain& d);

}  // namespace closed
}  // namespace holokit

#endif
