#include "holokit/closed_forms.hpp"

#include <algorithm>
#include <cmath>

namespace holokit {
namespace closed {

namespace {
cplx herm(const Point& a, const Point& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

double norm2(const Point& z) {
    double s = 0.0;
    for (const auto& zi : z) s += std::norm(zi);
    return s;
}

bool sameRho(const ZZbarPoly& a, const ZZbarPoly& b) {
    ZZbarPoly diff = a - b;
    return diff.maxAbsCoefficient() <
           1e-12 * std::max(1.0, a.maxAbsCoefficient());
}
}  // namespace

double discMetric(cplx z, cplx v) {
    const double d = 1.0 - std::norm(z);
    if (d <= 0.0) throw Error("discMetric: point outside the disc");
    return std::abs(v) / d;
}

double discDistance(cplx a, cplx b) {
    if (std::norm(a) >= 1.0 || std::norm(b) >= 1.0)
        throw Error("discDistance: point outside the disc");
    const double m = std::abs((a - b) / (1.0 - a * std::conj(b)));
    return std::atanh(m);
}

double polydiscMetric(const Point& z, const Point& v) {
    double best = 0.0;
    for (size_t i = 0; i < z.size(); ++i)
        best = std::max(best, discMetric(z[i], v[i]));
    return best;
}

double polydiscDistance(const Point& a, const Point& b) {
    double best = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        best = std::max(best, discDistance(a[i], b[i]));
    return best;
}

double ballMetric(const Point& z, const Point& v) {
    const double d = 1.0 - norm2(z);
    if (d <= 0.0) throw Error("ballMetric: point outside the ball");
    const double zv = std::norm(herm(v, z));
    return std::sqrt(norm2(v) / d + zv / (d * d));
}

double ballDistance(const Point& a, const Point& b) {
    const double da = 1.0 - norm2(a), db = 1.0 - norm2(b);
    if (da <= 0.0 || db <= 0.0)
        throw Error("ballDistance: point outside the ball");
    const double denom = std::norm(cplx(1.0, 0.0) - herm(a, b));
    const double t = 1.0 - da * db / denom;
    return std::atanh(std::sqrt(std::clamp(t, 0.0, 1.0 - 1e-300)));
}

double halfplaneMetric(cplx z, cplx v) {
    if (z.real() >= 0.0) throw Error("halfplaneMetric: point outside");
    return std::abs(v) / (-2.0 * z.real());
}

double halfplaneDistance(cplx a, cplx b) {
    if (a.real() >= 0.0 || b.real() >= 0.0)
        throw Error("halfplaneDistance: point outside");
    // Cayley to the disc: w = (1 + z) / (1 - z)
    const cplx wa = (1.0 + a) / (1.0 - a);
    const cplx wb = (1.0 + b) / (1.0 - b);
    return discDistance(wa, wb);
}

Point cayleyBallToSiegel(const Point& zeta) {
    const size_t n = zeta.size();
    const cplx den = 1.0 + zeta[n - 1];
    if (std::abs(den) < 1e-300) throw Error("cayley: pole");
    Point w(n);
    const double s2 = std::sqrt(2.0);
    for (size_t i = 0; i + 1 < n; ++i) w[i] = s2 * zeta[i] / den;
    w[n - 1] = (zeta[n - 1] - 1.0) / den;
    return w;
}

Point cayleySiegelToBall(const Point& w) {
    const size_t n = w.size();
    const cplx den = 1.0 - w[n - 1];
    if (std::abs(den) < 1e-300) throw Error("cayley: pole");
    Point zeta(n);
    const double s2 = std::sqrt(2.0);
    for (size_t i = 0; i + 1 < n; ++i) zeta[i] = s2 * w[i] / den;
    zeta[n - 1] = (1.0 + w[n - 1]) / den;
    return zeta;
}

double siegelMetric(const Point& z, const Point& v) {
    const size_t n = z.size();
    if (n == 1) return halfplaneMetric(z[0], v[0]);
    const Point zeta = cayleySiegelToBall(z);
    const cplx den = 1.0 - z[n - 1];
    const double s2 = std::sqrt(2.0);
    Point dv(n);
    for (size_t i = 0; i + 1 < n; ++i)
        dv[i] = s2 * v[i] / den + s2 * z[i] * v[n - 1] / (den * den);
    dv[n - 1] = 2.0 * v[n - 1] / (den * den);
    return ballMetric(zeta, dv);
}

double siegelDistance(const Point& a, const Point& b) {
    if (a.size() == 1) return halfplaneDistance(a[0], b[0]);
    return ballDistance(cayleySiegelToBall(a), cayleySiegelToBall(b));
}

double modelMetric(ModelKind k, const Point& z, const Point& v) {
    switch (k) {
        case ModelKind::Disc: return discMetric(z[0], v[0]);
        case ModelKind::Ball: return ballMetric(z, v);
        case ModelKind::Polydisc: return polydiscMetric(z, v);
        case ModelKind::Halfplane: return halfplaneMetric(z[0], v[0]);
        case ModelKind::Siegel: return siegelMetric(z, v);
    }
    throw Error("modelMetric: bad kind");
}

double modelDistance(ModelKind k, const Point& a, const Point& b) {
    switch (k) {
        case ModelKind::Disc: return discDistance(a[0], b[0]);
        case ModelKind::Ball: return ballDistance(a, b);
        case ModelKind::Polydisc: return polydiscDistance(a, b);
        case ModelKind::Halfplane: return halfplaneDistance(a[0], b[0]);
        case ModelKind::Siegel: return siegelDistance(a, b);
    }
    throw Error("modelDistance: bad kind");
}

bool modelContains(ModelKind k, const Point& z) {
    switch (k) {
        case ModelKind::Disc: return std::norm(z[0]) < 1.0;
        case ModelKind::Ball: return norm2(z) < 1.0;
        case ModelKind::Polydisc: {
            for (const auto& zi : z)
                if (std::norm(zi) >= 1.0) return false;
            return true;
        }
        case ModelKind::Halfplane: return z[0].real() < 0.0;
        case ModelKind::Siegel: {
            double s = 2.0 * z.back().real();
            for (size_t i = 0; i + 1 < z.size(); ++i) s += std::norm(z[i]);
            return s < 0.0;
        }
    }
    return false;
}

std::optional<ModelKind> modelForDomain(const Domain& d) {
    if (d.n == 1) {
        if (sameRho(d.rho, presetBall(1).rho)) return ModelKind::Disc;
        if (sameRho(d.rho, presetHalfplane().rho)) return ModelKind::Halfplane;
    } else {
        if (sameRho(d.rho, presetBall(d.n).rho)) return ModelKind::Ball;
        if (sameRho(d.rho, presetPolydisc(d.n).rho)) return ModelKind::Polydisc;
        if (sameRho(d.rho, presetSiegel(d.n).rho)) return ModelKind::Siegel;
    }
    return std::nullopt;
}

}  // namespace closed
}  // namespace holokit
