#include "holokit/fridman.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "holokit/closed_forms.hpp"

namespace holokit {

namespace {

constexpr double kMemberMargin = 1e-6;

double pnorm(const Point& z) {
    double s = 0.0;
    for (const auto& x : z) s += std::norm(x);
    return std::sqrt(s);
}

bool inSource(const std::string& source, const Point& w, double bound) {
    if (source == "ball") return pnorm(w) < bound;
    for (const auto& x : w)
        if (std::abs(x) >= bound) return false;
    return true;
}

Point sampleSource(const std::string& source, int n, double s,
                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Point w(n);
        double r2 = 0.0;
        for (auto& x : w) {
            x = cplx(u(rng), u(rng));
            r2 += std::norm(x);
        }
        if (source == "ball") {
            if (r2 >= 1.0) continue;
        } else {
            bool ok = true;
            for (const auto& x : w) ok = ok && std::abs(x) < 1.0;
            if (!ok) continue;
        }
        for (auto& x : w) x *= s;
        return w;
    }
}

/// Involutive Moebius map of the unit ball exchanging 0 and a.
Point ballMoebius(const Point& a, const Point& z) {
    const int n = static_cast<int>(a.size());
    cplx za(0.0, 0.0);
    double aa = 0.0;
    for (int i = 0; i < n; ++i) {
        za += z[i] * std::conj(a[i]);
        aa += std::norm(a[i]);
    }
    if (aa < 1e-30) {
        Point out(n);
        for (int i = 0; i < n; ++i) out[i] = -z[i];
        return out;
    }
    const double sa = std::sqrt(std::max(0.0, 1.0 - aa));
    const cplx denom = 1.0 - za;
    if (std::abs(denom) < 1e-30) throw Error("ball Moebius pole");
    Point out(n);
    for (int i = 0; i < n; ++i) {
        const cplx proj = (za / aa) * a[i];
        out[i] = (a[i] - proj - sa * (z[i] - proj)) / denom;
    }
    return out;
}

cplx discMoebius(cplx a, cplx z) {
    const cplx denom = 1.0 - std::conj(a) * z;
    if (std::abs(denom) < 1e-30) throw Error("disc Moebius pole");
    return (a - z) / denom;
}

std::vector<Point> probeDirections(int n, int extra, unsigned seed) {
    std::vector<Point> dirs;
    const cplx units[4] = {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
    for (int i = 0; i < n; ++i)
        for (const cplx u : units) {
            Point v(n, cplx(0, 0));
            v[i] = u;
            dirs.push_back(v);
        }
    // full diagonals, capped for larger n
    if (n <= 3) {
        const int total = 1;
        int count = 1;
        for (int i = 0; i < n; ++i) count *= 4;
        (void)total;
        for (int mask = 0; mask < count; ++mask) {
            Point v(n);
            int m = mask;
            for (int i = 0; i < n; ++i) {
                v[i] = units[m % 4] / std::sqrt(static_cast<double>(n));
                m /= 4;
            }
            dirs.push_back(v);
        }
    }
    std::mt19937_64 rng(seed + 101);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < extra; ++k) {
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
    return dirs;
}

double rayExit(const Domain& d, const Point& p, const Point& u,
               bool modelDomain) {
    // the exact models carry globally valid defining functions, so their
    // unbounded reaches stay probeable
    const double cap = modelDomain ? 1e6 : 8.0 * d.boundingRadius;
    const auto outside = [&](double t) {
        Point x(p.size());
        double r2 = 0.0;
        for (size_t i = 0; i < p.size(); ++i) {
            x[i] = p[i] + t * u[i];
            r2 += std::norm(x[i]);
        }
        if (r2 > cap * cap) return true;
        return evalRho(d, x) >= 0.0;
    };
    double lo = 0.0, hi = 0.0, step = 1e-3;
    while (hi < cap) {
        hi = std::min(lo + step, cap);
        if (outside(hi)) break;
        lo = hi;
        step *= 2.0;
    }
    if (!outside(hi)) return cap;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (outside(mid) ? hi : lo) = mid;
    }
    return lo;
}

bool pullsBack(const EmbeddingCandidate& c, const Point& z) {
    try {
        const Point w = c.inverse(z);
        if (!inSource(c.source, w, c.shrink * (1.0 - kMemberMargin)))
            return false;
        const Point back = c.forward(w);
        double err = 0.0;
        for (size_t i = 0; i < z.size(); ++i)
            err = std::max(err, std::abs(back[i] - z[i]));
        return err <= 1e-8 * (1.0 + pnorm(z));
    } catch (const Error&) {
        return false;
    }
}

/// Cumulative straight-ray quadrature of the metric upper bound; shared
/// across candidates so each ray is integrated once.
struct RayProfile {
    Point p;
    Point u;
    double tHi = 0.0;
    std::vector<double> knots;
    std::vector<double> cum;
    // number of segment integrals computed so far; segments near the
    // domain exit are only integrated when a candidate actually reaches them
    int built = 0;
};

constexpr double kGL8x[8] = {0.01985507175123188, 0.10166676129318664,
                             0.2372337950418355,  0.40828267875217505,
                             0.5917173212478249,  0.7627662049581645,
                             0.8983332387068134,  0.9801449282487681};
constexpr double kGL8w[8] = {0.05061426814518813, 0.11119051722668723,
                             0.15685332293894363, 0.18134189168918097,
                             0.18134189168918097, 0.15685332293894363,
                             0.11119051722668723, 0.05061426814518813};

RayProfile buildRayProfile(const Domain& X, const Point& p, const Point& u,
                           double tHi, const MetricConfig& cfg) {
    RayProfile prof;
    prof.p = p;
    prof.u = u;
    prof.tHi = tHi;
    const int S = 16;
    prof.knots.resize(S + 1);
    prof.cum.resize(S + 1, 0.0);
    for (int s = 0; s <= S; ++s) {
        const double x = static_cast<double>(s) / S;
        prof.knots[s] = tHi * (1.0 - (1.0 - x) * (1.0 - x));
    }
    return prof;
}

/// Metric along the ray; if the disc search gives up very close to the
/// boundary, step slightly inward (the integrand is increasing there, so
/// this keeps the quadrature a usable estimate).
double rayMetricAt(const Domain& X, const RayProfile& prof, double t,
                   const MetricConfig& cfg) {
    const auto at = [&](double x) {
        Point z(prof.p.size());
        for (size_t i = 0; i < prof.p.size(); ++i)
            z[i] = prof.p[i] + x * prof.u[i];
        return z;
    };
    for (int tries = 0; tries < 4; ++tries) {
        try {
            return kobayashiInfEstimate(X, at(t), prof.u, cfg).value;
        } catch (const Error&) {
            t = prof.knots.back() - 2.0 * (prof.knots.back() - t);
            if (t <= 0.0) throw;
        }
    }
    return kobayashiInfEstimate(X, at(t), prof.u, cfg).value;
}

void extendProfile(const Domain& X, RayProfile& prof, int upTo,
                   const MetricConfig& cfg) {
    for (int s = prof.built; s < upTo; ++s) {
        const double a = prof.knots[s], b = prof.knots[s + 1];
        double seg = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double t = a + kGL8x[k] * (b - a);
            seg += kGL8w[k] * rayMetricAt(X, prof, t, cfg) * (b - a);
        }
        prof.cum[s + 1] = prof.cum[s] + seg;
    }
    prof.built = std::max(prof.built, upTo);
}

double profileValue(const Domain& X, RayProfile& prof, double t,
                    const MetricConfig& cfg) {
    if (t <= 0.0) return 0.0;
    t = std::min(t, prof.knots.back());
    size_t s = 0;
    while (s + 2 < prof.knots.size() && prof.knots[s + 1] < t) ++s;
    extendProfile(X, prof, static_cast<int>(s), cfg);
    double part = 0.0;
    const double a = prof.knots[s];
    for (int k = 0; k < 8; ++k) {
        const double x = a + kGL8x[k] * (t - a);
        part += kGL8w[k] * rayMetricAt(X, prof, x, cfg) * (t - a);
    }
    return prof.cum[s] + part;
}

/// Largest radius whose sampled sphere around c stays inside the domain.
double largestAffineRadius(const Domain& d, const Point& c, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point> sphere;
    for (int k = 0; k < 200; ++k) {
        Point v(c.size());
        double nv = 0.0;
        for (auto& x : v) {
            x = cplx(gauss(rng), gauss(rng));
            nv += std::norm(x);
        }
        nv = std::sqrt(nv);
        for (auto& x : v) x /= nv;
        sphere.push_back(v);
    }
    const auto fits = [&](double r) {
        for (const auto& v : sphere) {
            Point z(c.size());
            for (size_t i = 0; i < c.size(); ++i) z[i] = c[i] + r * v[i];
            if (evalRho(d, z) >= 0.0) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 1e-3;
    while (fits(hi) && hi < d.boundingRadius) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> shrinkGrid(double dj) {
    std::vector<double> grid = {0.9, 0.99, 0.999};
    for (const double extra : {1.0 - dj, 1.0 - dj / 10.0, 1.0 - dj / 100.0})
        if (extra > 0.0 && extra < 1.0) grid.push_back(extra);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace

EmbeddingCandidate affineCandidate(const Point& center,
                                   const std::vector<double>& radii,
                                   const std::string& source, double shrink) {
    if (center.size() != radii.size())
        throw Error("affine candidate arity mismatch");
    for (const double r : radii)
        if (r <= 0.0) throw Error("affine candidate needs positive radii");
    EmbeddingCandidate c;
    std::ostringstream id;
    id << "affine(";
    for (size_t i = 0; i < radii.size(); ++i)
        id << (i ? "," : "") << radii[i];
    id << ") s=" << shrink;
    c.id = id.str();
    c.source = source;
    c.n = static_cast<int>(center.size());
    c.shrink = shrink;
    c.certificate = "explicit-inverse";
    c.forward = [center, radii](const Point& w) {
        Point z(center.size());
        for (size_t i = 0; i < z.size(); ++i)
            z[i] = center[i] + radii[i] * w[i];
        return z;
    };
    c.inverse = [center, radii](const Point& z) {
        Point w(center.size());
        for (size_t i = 0; i < w.size(); ++i)
            w[i] = (z[i] - center[i]) / radii[i];
        return w;
    };
    return c;
}

EmbeddingCandidate ballAutomorphismCandidate(const Point& a, double shrink) {
    double aa = 0.0;
    for (const auto& x : a) aa += std::norm(x);
    if (aa >= 1.0) throw Error("automorphism center outside the ball");
    EmbeddingCandidate c;
    std::ostringstream id;
    id << "ball-moebius s=" << shrink;
    c.id = id.str();
    c.source = "ball";
    c.n = static_cast<int>(a.size());
    c.shrink = shrink;
    c.certificate = "explicit-inverse";
    c.forward = [a](const Point& w) { return ballMoebius(a, w); };
    c.inverse = [a](const Point& z) { return ballMoebius(a, z); };
    return c;
}

EmbeddingCandidate polydiscAutomorphismCandidate(const Point& a,
                                                 double shrink) {
    for (const auto& x : a)
        if (std::abs(x) >= 1.0)
            throw Error("automorphism center outside the polydisc");
    EmbeddingCandidate c;
    std::ostringstream id;
    id << "polydisc-moebius s=" << shrink;
    c.id = id.str();
    c.source = "polydisc";
    c.n = static_cast<int>(a.size());
    c.shrink = shrink;
    c.certificate = "explicit-inverse";
    const auto map = [a](const Point& w) {
        Point z(a.size());
        for (size_t i = 0; i < z.size(); ++i) z[i] = discMoebius(a[i], w[i]);
        return z;
    };
    c.forward = map;
    c.inverse = map;
    return c;
}

EmbeddingCandidate cayleyCandidate(const Point& siegelPoint, double shrink) {
    const Point b = closed::cayleySiegelToBall(siegelPoint);
    EmbeddingCandidate c;
    std::ostringstream id;
    id << "cayley s=" << shrink;
    c.id = id.str();
    c.source = "ball";
    c.n = static_cast<int>(siegelPoint.size());
    c.shrink = shrink;
    c.certificate = "explicit-inverse";
    c.forward = [b](const Point& w) {
        return closed::cayleyBallToSiegel(ballMoebius(b, w));
    };
    c.inverse = [b](const Point& z) {
        return ballMoebius(b, closed::cayleySiegelToBall(z));
    };
    return c;
}

CandidateCheck verifyCandidate(const Domain& X, const EmbeddingCandidate& c,
                               unsigned seed) {
    CandidateCheck out;
    if (c.n != X.n) {
        out.detail = "dimension mismatch";
        return out;
    }
    if (c.shrink <= 0.0 || c.shrink > 1.0) {
        out.detail = "shrink factor out of range";
        return out;
    }
    std::mt19937_64 rng(seed);
    const auto mk = closed::modelForDomain(X);
    try {
        for (int k = 0; k < 100; ++k) {
            const Point w = sampleSource(c.source, c.n, c.shrink, rng);
            const Point back = c.inverse(c.forward(w));
            double err = 0.0;
            for (int i = 0; i < c.n; ++i)
                err = std::max(err, std::abs(back[i] - w[i]));
            if (err > 1e-10) {
                std::ostringstream os;
                os << "round trip residual " << err;
                out.detail = os.str();
                return out;
            }
        }
        for (int k = 0; k < 400; ++k) {
            Point w = sampleSource(c.source, c.n, c.shrink, rng);
            // half of the samples pushed toward the source boundary where
            // protrusions show up first
            if (k % 2 == 0) {
                const double r = c.source == "ball"
                                     ? pnorm(w)
                                     : [&] {
                                           double m = 0.0;
                                           for (const auto& x : w)
                                               m = std::max(m, std::abs(x));
                                           return m;
                                       }();
                if (r > 1e-9) {
                    const double push =
                        c.shrink * (1.0 - kMemberMargin) / r;
                    for (auto& x : w) x *= push * 0.9999;
                }
            }
            const Point z = c.forward(w);
            bool inside;
            if (mk) {
                inside = closed::modelContains(*mk, z);
            } else {
                inside = evalRho(X, z) < 0.0 &&
                         pnorm(z) <= X.boundingRadius;
            }
            if (!inside) {
                out.detail = "image sample escapes the target";
                return out;
            }
        }
    } catch (const Error& e) {
        out.detail = e.what();
        return out;
    }
    out.ok = true;
    out.detail = "ok";
    return out;
}

FridmanBound fridmanUpper(const Domain& X, const Point& p,
                          const std::string& model,
                          const std::vector<EmbeddingCandidate>& candidates,
                          const MetricConfig& cfg, int extraDirections) {
    if (model != "ball" && model != "polydisc")
        throw Error("fridman model must be ball or polydisc");
    if (evalRho(X, p) >= 0.0)
        throw Error("fridman base point is not interior");
    FridmanBound out;
    out.p = p;
    out.model = model;
    out.upper = std::numeric_limits<double>::infinity();

    const auto dirs = probeDirections(X.n, extraDirections, cfg.seed);
    const auto mk = closed::modelForDomain(X);
    const bool modelDomain = mk.has_value();
    const bool exactDistances = modelDomain && cfg.preferClosedForm;

    std::vector<double> rayHi(dirs.size(), -1.0);
    std::vector<RayProfile> profiles(dirs.size());
    const auto rayTHi = [&](size_t k) {
        if (rayHi[k] < 0.0)
            rayHi[k] = rayExit(X, p, dirs[k], modelDomain) * (1.0 - 1e-6);
        return rayHi[k];
    };
    const auto rayDistance = [&](size_t k, double t) {
        Point z(p.size());
        for (size_t i = 0; i < p.size(); ++i) z[i] = p[i] + t * dirs[k][i];
        if (exactDistances) return closed::modelDistance(*mk, p, z);
        if (profiles[k].knots.empty())
            profiles[k] = buildRayProfile(X, p, dirs[k], rayTHi(k), cfg);
        return profileValue(X, profiles[k], t, cfg);
    };

    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        const auto& c = candidates[ci];
        std::ostringstream line;
        line << c.id << ": ";
        if (c.source != model) {
            line << "source does not match the requested model, skipped";
            out.log.push_back(line.str());
            continue;
        }
        const auto chk = verifyCandidate(X, c, cfg.seed);
        if (!chk.ok) {
            line << "rejected (" << chk.detail << ")";
            out.log.push_back(line.str());
            continue;
        }
        if (!pullsBack(c, p)) {
            line << "does not cover the base point";
            out.log.push_back(line.str());
            continue;
        }
        double R = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < dirs.size(); ++k) {
            const double tHi = rayTHi(k);
            const auto at = [&](double t) {
                Point z(p.size());
                for (size_t i = 0; i < p.size(); ++i)
                    z[i] = p[i] + t * dirs[k][i];
                return z;
            };
            double t;
            if (pullsBack(c, at(tHi))) {
                t = tHi;
            } else {
                double lo = 0.0, hi = tHi;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (pullsBack(c, at(mid)) ? lo : hi) = mid;
                }
                t = lo;
            }
            if (t <= 0.0) {
                R = 0.0;
                break;
            }
            R = std::min(R, rayDistance(k, t * (1.0 - 1e-9)));
        }
        line << "probed radius " << R;
        out.log.push_back(line.str());
        if (R > out.bestR) {
            out.bestR = R;
            out.witness = static_cast<int>(ci);
        }
    }
    out.noInformation = !(out.bestR > 0.0);
    if (!out.noInformation) out.upper = 1.0 / out.bestR;
    return out;
}

ZeroCertificate fridmanZeroCert(const Domain& X, const Point& p,
                                const std::string& model) {
    if (model != "ball" && model != "polydisc")
        throw Error("fridman model must be ball or polydisc");
    if (evalRho(X, p) >= 0.0)
        throw Error("fridman base point is not interior");
    ZeroCertificate zc;
    const auto mk = closed::modelForDomain(X);
    if (!mk) {
        zc.reason = "domain is not a cataloged homogeneous model; "
                    "only upper bounds are available";
        return zc;
    }

    std::function<EmbeddingCandidate(double)> make;
    using closed::ModelKind;
    if (model == "ball") {
        switch (*mk) {
            case ModelKind::Disc:
            case ModelKind::Ball:
                zc.biholomorphism = "ball automorphism exchanging 0 and p";
                make = [&](double s) {
                    return ballAutomorphismCandidate(p, s);
                };
                break;
            case ModelKind::Siegel:
                zc.biholomorphism =
                    "Cayley transform composed with the ball automorphism "
                    "at the pulled-back point";
                make = [&](double s) { return cayleyCandidate(p, s); };
                break;
            case ModelKind::Halfplane: {
                zc.biholomorphism =
                    "disc-to-halfplane Moebius map through the pulled-back "
                    "point";
                const cplx b = (1.0 + p[0]) / (1.0 - p[0]);
                make = [b](double s) {
                    EmbeddingCandidate c;
                    std::ostringstream id;
                    id << "halfplane-moebius s=" << s;
                    c.id = id.str();
                    c.source = "ball";
                    c.n = 1;
                    c.shrink = s;
                    c.certificate = "explicit-inverse";
                    c.forward = [b](const Point& w) {
                        const cplx x = discMoebius(b, w[0]);
                        return Point{(x - 1.0) / (x + 1.0)};
                    };
                    c.inverse = [b](const Point& z) {
                        const cplx x = (1.0 + z[0]) / (1.0 - z[0]);
                        return Point{discMoebius(b, x)};
                    };
                    return c;
                };
                break;
            }
            case ModelKind::Polydisc:
                zc.reason = "the polydisc is not biholomorphic to the ball";
                return zc;
        }
    } else {
        switch (*mk) {
            case ModelKind::Disc:
            case ModelKind::Polydisc:
                zc.biholomorphism =
                    "componentwise Moebius automorphism exchanging 0 and p";
                make = [&](double s) {
                    return polydiscAutomorphismCandidate(p, s);
                };
                break;
            case ModelKind::Halfplane: {
                zc.biholomorphism =
                    "disc-to-halfplane Moebius map through the pulled-back "
                    "point";
                const cplx b = (1.0 + p[0]) / (1.0 - p[0]);
                make = [b](double s) {
                    EmbeddingCandidate c;
                    std::ostringstream id;
                    id << "halfplane-moebius s=" << s;
                    c.id = id.str();
                    c.source = "polydisc";
                    c.n = 1;
                    c.shrink = s;
                    c.certificate = "explicit-inverse";
                    c.forward = [b](const Point& w) {
                        const cplx x = discMoebius(b, w[0]);
                        return Point{(x - 1.0) / (x + 1.0)};
                    };
                    c.inverse = [b](const Point& z) {
                        const cplx x = (1.0 + z[0]) / (1.0 - z[0]);
                        return Point{discMoebius(b, x)};
                    };
                    return c;
                };
                break;
            }
            case ModelKind::Ball:
            case ModelKind::Siegel:
                zc.reason = "the ball-type model is not biholomorphic to "
                            "the polydisc";
                return zc;
        }
    }

    // the s-image is exactly the model ball of radius atanh(s) around p,
    // so the exhaustion radii are closed-form; verification still samples
    // the maps
    for (const double s : {0.9, 0.99, 0.999}) {
        const auto c = make(s);
        const auto chk = verifyCandidate(X, c);
        if (!chk.ok) {
            zc.reason = "exhaustion member failed verification: " +
                        chk.detail;
            zc.certified = false;
            return zc;
        }
        zc.exhaustion.emplace_back(s, std::atanh(s * (1.0 - kMemberMargin)));
    }
    zc.certified = true;
    return zc;
}

std::vector<FridmanRow> fridmanBoundaryExperiment(
    const Domain& D, const std::vector<Point>& seq, const std::string& model,
    const MetricConfig& cfg, int extraDirections) {
    std::vector<FridmanRow> rows;
    const auto mk = closed::modelForDomain(D);
    int j = 0;
    for (const auto& p : seq) {
        FridmanRow row;
        row.j = j;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            row.dj = boundaryDistance(D, p).distance;
            std::vector<EmbeddingCandidate> cands;
            if (model == "polydisc" &&
                (D.classTag == DomainClass::Polyhedron ||
                 (mk && *mk == closed::ModelKind::Polydisc))) {
                PolyhedronSpec spec;
                spec.z0.resize(D.n);
                for (int i = 0; i < D.n; ++i) {
                    spec.generators.push_back(PolyZ::variable(D.n, i));
                    const double m = std::abs(p[i]);
                    if (m < 1e-12)
                        throw Error("corner sequence point has a vanishing "
                                    "coordinate");
                    spec.z0[i] = p[i] / m;
                }
                const CornerMap cm = polyhedronCornerMaps(spec, p);
                for (const double s : shrinkGrid(row.dj)) {
                    EmbeddingCandidate c;
                    std::ostringstream id;
                    id << "corner-moebius s=" << s;
                    c.id = id.str();
                    c.source = "polydisc";
                    c.n = D.n;
                    c.shrink = s;
                    c.certificate = "explicit-inverse";
                    c.forward = [cm](const Point& u) {
                        Point w = cm.generatorTarget(u);
                        Point z(w.size());
                        for (size_t l = 0; l < w.size(); ++l)
                            z[l] = std::polar(1.0, -cm.theta[l]) * w[l];
                        return z;
                    };
                    c.inverse = [cm](const Point& z) { return cm.apply(z); };
                    cands.push_back(std::move(c));
                }
            } else if (D.classTag == DomainClass::StronglyPseudoconvex) {
                const ScalingEntry entry = spscScaledDomain(D, p, j);
                const PolyAutomorphism map = entry.map;
                for (const double s : shrinkGrid(row.dj)) {
                    EmbeddingCandidate c;
                    std::ostringstream id;
                    id << "scaling+cayley s=" << s;
                    c.id = id.str();
                    c.source = "ball";
                    c.n = D.n;
                    c.shrink = s;
                    c.certificate = "explicit-inverse";
                    c.forward = [map](const Point& w) {
                        return map.applyInverse(
                            closed::cayleyBallToSiegel(w));
                    };
                    c.inverse = [map](const Point& z) {
                        return closed::cayleySiegelToBall(map.apply(z));
                    };
                    cands.push_back(std::move(c));
                }
            } else if (D.classTag == DomainClass::FiniteType2D) {
                if (!D.declaredType)
                    throw Error("finite type experiment needs a declared "
                                "type bound");
                const CatlinEntry ce =
                    catlinScaledDomain(D, p, *D.declaredType, j);
                const PolyAutomorphism map = ce.entry.map;
                const Point c0 = ce.entry.image;
                const double rad =
                    largestAffineRadius(ce.entry.scaled, c0, cfg.seed + 13);
                if (rad <= 0.0)
                    throw Error("no affine ball fits in the rescaled "
                                "domain");
                for (const double s : {0.9, 0.99, 0.999}) {
                    EmbeddingCandidate c;
                    std::ostringstream id;
                    id << "scaled-affine r=" << rad << " s=" << s;
                    c.id = id.str();
                    c.source = "ball";
                    c.n = D.n;
                    c.shrink = s;
                    c.certificate = "explicit-inverse";
                    c.forward = [map, c0, rad](const Point& w) {
                        Point z(w.size());
                        for (size_t i = 0; i < w.size(); ++i)
                            z[i] = c0[i] + rad * w[i];
                        return map.applyInverse(z);
                    };
                    c.inverse = [map, c0, rad](const Point& z) {
                        const Point u = map.apply(z);
                        Point w(u.size());
                        for (size_t i = 0; i < u.size(); ++i)
                            w[i] = (u[i] - c0[i]) / rad;
                        return w;
                    };
                    cands.push_back(std::move(c));
                }
            } else {
                throw Error("no candidate family for this domain class");
            }

            const FridmanBound fb =
                fridmanUpper(D, p, model, cands, cfg, extraDirections);
            row.bestR = fb.bestR;
            row.upper = fb.upper;
            if (fb.witness >= 0) row.candidateId = cands[fb.witness].id;
        } catch (const Error& e) {
            row.error = e.what();
        }
        row.wallSeconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        rows.push_back(std::move(row));
        ++j;
    }
    return rows;
}

std::string fridmanRowsCsv(const std::vector<FridmanRow>& rows) {
    std::ostringstream os;
    os << "j,d,bestR,upper,candidate,wall\n";
    for (const auto& r : rows) {
        os << r.j << ',' << fmt17(r.dj) << ',' << fmt17(r.bestR) << ','
           << fmt17(r.upper) << ','
           << (r.error.empty() ? r.candidateId : "error: " + r.error) << ','
           << fmt17(r.wallSeconds) << '\n';
    }
    return os.str();
}

}  // namespace holokit
