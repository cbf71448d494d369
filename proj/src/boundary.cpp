#include "holokit/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace holokit {

namespace {

double pdist(const Point& a, const Point& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

/// Boundary point straight above q in the chart (q + (0, eps0)).
double verticalGap(const Domain& d, const Point& q) {
    if (evalRho(d, q) >= 0.0) throw Error("chart point must be interior");
    auto at = [&](double t) {
        Point z = q;
        z[1] += t;
        return evalRho(d, z);
    };
    double lo = 0.0, hi = 1e-6 * (1.0 + pdist(q, Point(q.size(), 0.0)));
    while (at(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 4.0 * d.boundingRadius)
            throw Error("no boundary crossing above the point");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) >= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

int resolveTypeBound(const Domain& d, int typeBound) {
    if (typeBound > 0) return typeBound;
    if (d.declaredType) return *d.declaredType;
    throw Error("type bound needed and not declared on the domain");
}

}  // namespace

bool BidiscSpec::contains(const Point& z) const {
    const Point w = phi.apply(z);
    return std::abs(w[0] - phiQ[0]) < tau && std::abs(w[1] - phiQ[1]) < eps;
}

BidiscSpec BidiscSpec::withEps(double newEps) const {
    BidiscSpec out = *this;
    out.eps = newEps;
    out.tau = catlinTau(expansion, newEps);
    return out;
}

BidiscSpec catlinBidisc(const Domain& d, const Point& q, double eps) {
    if (eps <= 0.0) throw Error("bidisc needs a positive size parameter");
    const int typeBound = resolveTypeBound(d, 0);
    const double gap = verticalGap(d, q);
    Point zeta = q;
    zeta[1] += gap;
    auto nrm = catlinAutomorphism(d, zeta, typeBound);
    BidiscSpec spec;
    spec.q = q;
    spec.eps = eps;
    spec.phi = nrm.map;
    spec.phiQ = nrm.map.apply(q);
    spec.expansion = nrm.expansion;
    spec.tau = catlinTau(spec.expansion, eps);
    return spec;
}

bool PolydiscRegion::contains(const Point& z) const {
    const Point w = frame.map.apply(z);
    for (size_t i = 0; i < w.size(); ++i)
        if (std::abs(w[i]) >= frame.tau[i]) return false;
    return true;
}

PolydiscRegion mcnealPolydisc(const Domain& d, const Point& q, double eps) {
    PolydiscRegion out;
    out.q = q;
    out.eps = eps;
    out.frame = mcnealFrame(d, q, eps);
    return out;
}

QuasiDistanceResult herbortRhoStar(const Domain& d, const Point& a,
                                   const Point& b, int typeBound) {
    typeBound = resolveTypeBound(d, typeBound);
    if (evalRho(d, a) >= 0.0 || evalRho(d, b) >= 0.0)
        throw Error("quasi-distance endpoints must be interior");

    QuasiDistanceResult out;
    out.dBoundary = boundaryDistance(d, a).distance;
    const double euclid = pdist(a, b);

    if (euclid == 0.0) return out;

    // region infimum: smallest delta with a inside the bidisc at b
    BidiscSpec family = catlinBidisc(d, b, 1.0);
    double lo = 1e-12, hi = 1e3;
    if (!family.withEps(hi).contains(a)) {
        out.bracketFailed = true;
        out.dPair = euclid;
    } else {
        for (int it = 0; it < 60; ++it) {
            const double mid = std::sqrt(lo * hi);
            (family.withEps(mid).contains(a) ? hi : lo) = mid;
        }
        out.dQuasi = hi;
        out.dPair = std::min(out.dQuasi, euclid);
    }

    Point g = wirtingerGradient(d, a);
    const cplx pairing =
        -g[1] * (a[0] - b[0]) + g[0] * (a[1] - b[1]);
    BidiscSpec atA = catlinBidisc(d, a, out.dBoundary);
    out.tangential = std::abs(pairing) / atA.tau;

    out.value = std::log(1.0 + out.dPair / out.dBoundary + out.tangential);
    return out;
}

std::string residualCsv(const std::vector<ResidualRow>& rows) {
    std::ostringstream os;
    os << "id,quantity,lhs,rhs,margin\n";
    for (const auto& r : rows)
        os << r.id << ',' << r.quantity << ',' << fmt17(r.lhs) << ','
           << fmt17(r.rhs) << ',' << fmt17(r.rhs - r.lhs) << '\n';
    return os.str();
}

HerbortFit herbortSandwichFit(
    const Domain& d, const std::vector<std::pair<Point, Point>>& pairs,
    int typeBound, const MetricConfig& cfg) {
    if (pairs.size() < 10)
        throw Error("sandwich fit needs at least ten pairs");
    HerbortFit fit;
    double rmin = 0.0, rmax = 0.0;
    int id = 0;
    for (const auto& [a, b] : pairs) {
        if (pdist(a, b) == 0.0)
            throw Error("coincident pair in the sandwich fit");
        const double s = herbortRhoStar(d, a, b, typeBound).value +
                         herbortRhoStar(d, b, a, typeBound).value;
        const double dist = kobayashiDistanceEstimate(d, a, b, cfg).value;
        if (s <= 0.0 || dist <= 0.0)
            throw Error("nonpositive ratio in the sandwich fit");
        const double r = dist / s;
        if (id == 0) {
            rmin = rmax = r;
        } else {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        fit.rows.push_back({id, "distance_vs_quasi", s, dist});
        ++id;
    }
    fit.cstar = std::min(rmin, 1.0 / rmax);
    return fit;
}

SandwichFit sandwichConstants(const Domain& d, const std::vector<Point>& qs,
                              double R, int directions,
                              const MetricConfig& cfg) {
    if (qs.empty()) throw Error("sandwich constants need sample points");
    const int n = d.n;
    SandwichFit fit;
    bool first = true;

    MetricConfig probeCfg = cfg;
    probeCfg.preferClosedForm = true;

    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point> dirs;
    for (int k = 0; k < directions; ++k) {
        Point v(n);
        double nv = 0.0;
        for (auto& x : v) {
            x = cplx(gauss(rng), gauss(rng));
            nv += std::norm(x);
        }
        nv = std::sqrt(nv);
        for (auto& x : v) x /= nv;
        dirs.push_back(v);
    }

    int id = 0;
    for (const auto& q : qs) {
        const auto bd = boundaryDistance(d, q);
        const double dist = bd.distance;

        // direction-matched region constant: the C for which the region
        // boundary crosses the hyperbolic-ball boundary along the ray
        std::vector<double> cs;
        auto extents = kobayashiBallProbe(d, q, R, dirs, probeCfg);

        if (d.classTag == DomainClass::StronglyPseudoconvex) {
            fit.law = "normal-frame polydisc, radii C(sqrt(d), d)";
            auto nrm = spscNormalization(d, bd.foot);
            const Point hq = nrm.map.apply(q);
            for (int k = 0; k < directions; ++k) {
                Point z = q;
                for (int i = 0; i < n; ++i)
                    z[i] += extents[k].extent * dirs[k][i];
                const Point hz = nrm.map.apply(z);
                double c = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double u = std::abs(hz[i] - hq[i]);
                    c = std::max(c, i + 1 < n ? u / std::sqrt(dist)
                                              : u / dist);
                }
                cs.push_back(c);
            }
        } else if (d.classTag == DomainClass::FiniteType2D) {
            fit.law = "chart bidisc, size C d";
            BidiscSpec family = catlinBidisc(d, q, dist);
            for (int k = 0; k < directions; ++k) {
                Point z = q;
                for (int i = 0; i < n; ++i)
                    z[i] += extents[k].extent * dirs[k][i];
                const Point w = family.phi.apply(z);
                const double w1 = std::abs(w[0] - family.phiQ[0]);
                const double w2 = std::abs(w[1] - family.phiQ[1]);
                double need = w2;
                for (int l = 2; l <= family.expansion.typeBound; ++l) {
                    const double nl =
                        family.expansion.parts[l].maxAbsCoefficient();
                    if (nl > 0.0)
                        need = std::max(need, nl * std::pow(w1, l));
                }
                cs.push_back(need / dist);
            }
        } else {
            throw Error("no region law for this domain class");
        }

        const double cInner = *std::min_element(cs.begin(), cs.end());
        const double cOuter = *std::max_element(cs.begin(), cs.end());
        fit.rows.push_back({id, "inner_constant", dist, cInner});
        fit.rows.push_back({id, "outer_constant", dist, cOuter});
        if (first) {
            fit.c1 = cInner;
            fit.c2 = cOuter;
            first = false;
        } else {
            fit.c1 = std::min(fit.c1, cInner);
            fit.c2 = std::max(fit.c2, cOuter);
        }
        ++id;
    }
    return fit;
}

cplx PeakFunction::eval(const Point& z) const {
    return std::exp(static_cast<double>(sigma) * levi.eval(z));
}

PeakFunction peakFunction(const Domain& d, const Point& zeta, double rRequest,
                          int samples, unsigned seed) {
    if (d.classTag != DomainClass::StronglyPseudoconvex)
        throw Error("peak functions need a strongly pseudoconvex point");
    if (std::abs(evalRho(d, zeta)) > 1e-10)
        throw Error("peak center is not on the boundary");
    const int n = d.n;

    PolyZ L(n);
    {
        Point g = wirtingerGradient(d, zeta);
        std::vector<PolyZ> shift(n);
        for (int i = 0; i < n; ++i)
            shift[i] = PolyZ::variable(n, i) - PolyZ::constant(n, zeta[i]);
        for (int i = 0; i < n; ++i) L = L + shift[i] * g[i];
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) {
                ZZbarPoly dij = d.rho.wirtingerZ(i).wirtingerZ(jj);
                const cplx c = dij.eval(zeta);
                if (std::abs(c) < 1e-14) continue;
                L = L + shift[i] * shift[jj] * (0.5 * c);
            }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto sampleNear = [&](double radius, int count) {
        std::vector<Point> pts;
        long guard = 0;
        while (static_cast<int>(pts.size()) < count && guard < 400L * count) {
            ++guard;
            Point z(n);
            double r2 = 0.0;
            for (auto& x : z) {
                x = cplx(u(rng), u(rng));
                r2 += std::norm(x);
            }
            if (r2 > 1.0) continue;
            for (int i = 0; i < n; ++i) z[i] = zeta[i] + radius * z[i];
            if (evalRho(d, z) < 0.0) pts.push_back(z);
        }
        return pts;
    };

    // sign: the exponent must have negative real part inside
    int sigma = 1;
    {
        auto probe = sampleNear(std::min(rRequest, 0.1), 200);
        if (probe.empty()) throw Error("no interior points near the center");
        double mean = 0.0;
        for (const auto& z : probe) mean += L.eval(z).real();
        if (mean > 0.0) sigma = -1;
    }

    PeakFunction pk;
    pk.zeta = zeta;
    pk.levi = L;
    pk.sigma = sigma;

    double r = rRequest;
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto pts = sampleNear(r, samples);
        if (pts.empty()) throw Error("no interior points near the center");
        bool ok = true;
        double c1 = 0.0, c2 = 0.0;
        bool firstPt = true;
        for (const auto& z : pts) {
            const cplx P = pk.eval(z);
            if (std::abs(P) >= 1.0) {
                ok = false;
                break;
            }
            const double gap = std::abs(1.0 - P);
            if (gap == 0.0) continue;
            const double dz = pdist(z, zeta);
            const double r1 = dz / gap;
            const double r2v = dz / std::sqrt(gap);
            if (firstPt) {
                c1 = r1;
                c2 = r2v;
                firstPt = false;
            } else {
                c1 = std::min(c1, r1);
                c2 = std::max(c2, r2v);
            }
        }
        if (ok) {
            pk.c1 = c1;
            pk.c2 = c2;
            pk.r = r;
            return pk;
        }
        r *= 0.5;
    }
    throw Error("no radius with a valid peak function");
}

std::pair<double, double> frBounds(const Domain& d, const Point& a,
                                   const Point& b, double C) {
    const double da = boundaryDistance(d, a).distance;
    const double db = boundaryDistance(d, b).distance;
    const double ab = pdist(a, b);
    const double lower = -0.5 * std::log(da) - 0.5 * std::log(db) - C;
    const double upper = -0.5 * std::log(da) + 0.5 * std::log(da + ab) +
                         0.5 * std::log(db + ab) - 0.5 * std::log(db) + C;
    return {lower, upper};
}

double shrinkFactor(double a, double b) {
    if (!(b > a) || a < 0.0)
        throw Error("shrink factor needs b > a >= 0");
    return 1.0 / std::tanh(b - a);
}

double sqrtHyperbolicityLower(const Domain& d, const Point& q, const Point& v,
                              double C) {
    double nv = 0.0;
    for (const auto& x : v) nv += std::norm(x);
    nv = std::sqrt(nv);
    if (nv == 0.0) return 0.0;
    const double dist = boundaryDistance(d, q).distance;
    return C * nv / std::sqrt(dist);
}

}  // namespace holokit
