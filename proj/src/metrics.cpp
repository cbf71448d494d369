#include "holokit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace holokit {

namespace {

double vecNorm(const Point& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

Point scaled(const Point& v, cplx s) {
    Point w = v;
    for (auto& x : w) x *= s;
    return w;
}

double effectiveEta(const Domain& d, const MetricConfig& cfg) {
    if (cfg.eta > 0.0) return cfg.eta;
    return 1e-6 * std::max(1.0, d.rho.maxAbsCoefficient());
}

/// rho compiled to a flat term list; much faster in the optimizer's
/// inner loop than the map-based representation.
struct FlatRho {
    struct Term {
        MultiIndex a, b;
        cplx c;
    };
    std::vector<Term> terms;
    int n = 0;
    int maxDeg = 0;

    explicit FlatRho(const ZZbarPoly& p) : n(p.nvars()) {
        for (const auto& [k, c] : p.terms()) {
            terms.push_back({k.first, k.second, c});
            for (int e : k.first) maxDeg = std::max(maxDeg, e);
            for (int e : k.second) maxDeg = std::max(maxDeg, e);
        }
    }

    double eval(const Point& z) const {
        // powers table: pw[i][e] = z_i^e, pc[i][e] = conj(z_i)^e
        thread_local std::vector<std::vector<cplx>> pw, pc;
        pw.assign(n, {});
        pc.assign(n, {});
        for (int i = 0; i < n; ++i) {
            pw[i].resize(maxDeg + 1);
            pc[i].resize(maxDeg + 1);
            pw[i][0] = pc[i][0] = 1.0;
            const cplx zc = std::conj(z[i]);
            for (int e = 1; e <= maxDeg; ++e) {
                pw[i][e] = pw[i][e - 1] * z[i];
                pc[i][e] = pc[i][e - 1] * zc;
            }
        }
        cplx s = 0.0;
        for (const auto& t : terms) {
            cplx m = t.c;
            for (int i = 0; i < n; ++i) {
                if (t.a[i]) m *= pw[i][t.a[i]];
                if (t.b[i]) m *= pc[i][t.b[i]];
            }
            s += m;
        }
        return s.real();
    }
};

// circle samples, plus a radial grid when containment cannot lean on the
// subharmonicity of rho o f
std::vector<cplx> sampleLambdas(int M, bool radial) {
    std::vector<cplx> ls;
    ls.reserve(radial ? 4 * M : M);
    const double twoPi = 2.0 * std::numbers::pi;
    static const double radii[3] = {0.5, 0.75, 0.9};
    for (int j = 0; j < M; ++j) {
        const double th = twoPi * j / M;
        const cplx u(std::cos(th), std::sin(th));
        ls.push_back(u);
        if (radial)
            for (double r : radii) ls.push_back(r * u);
    }
    return ls;
}

struct LambdaSet {
    std::vector<cplx> ls;
    std::vector<std::vector<cplx>> pow;  // pow[j][k] = lambda_j^k, k <= N

    LambdaSet(int M, bool radial, int N) : ls(sampleLambdas(M, radial)) {
        pow.resize(ls.size());
        for (size_t j = 0; j < ls.size(); ++j) {
            pow[j].resize(N + 1);
            pow[j][0] = 1.0;
            for (int k = 1; k <= N; ++k) pow[j][k] = pow[j][k - 1] * ls[j];
        }
    }
};

/// Disc family f(lambda) = z + alpha (lambda vhat + T(lambda)) with tail
/// T(lambda) = sum_{k=2}^N t_k lambda^k. Tail scales with alpha so the
/// admissibility search adapts the whole shape at once.
struct DiscProblem {
    const FlatRho* rho;
    int n;
    Point z;
    Point vhat;
    double eta;
    double boundR = 0.0;  // analysis confined to this Euclidean ball
    std::optional<std::pair<Point, double>> ball;
    int N;

    bool admissible(double alpha, const std::vector<Point>& tail,
                    const LambdaSet& L) const {
        thread_local Point w;
        w.resize(n);
        const double boundR2 = boundR * boundR;
        for (size_t j = 0; j < L.ls.size(); ++j) {
            double r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                cplx t = L.ls[j] * vhat[i];
                for (int k = 2; k <= N; ++k) t += tail[k - 2][i] * L.pow[j][k];
                w[i] = z[i] + alpha * t;
                r2 += std::norm(w[i]);
            }
            if (r2 > boundR2) return false;
            if (rho->eval(w) > -eta) return false;
            if (ball) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    s += std::norm(w[i] - ball->first[i]);
                if (std::sqrt(s) > ball->second * (1.0 - 1e-9)) return false;
            }
        }
        return true;
    }

    double alphaMax(const std::vector<Point>& tail, const LambdaSet& L,
                    double hint) const {
        double lo = 0.0, hi = 0.0, a = std::max(hint, 1e-300);
        if (admissible(a, tail, L)) {
            lo = a;
            for (int k = 0; k < 40; ++k) {
                a *= 2.0;
                if (!admissible(a, tail, L)) {
                    hi = a;
                    break;
                }
                lo = a;
            }
            if (hi == 0.0) return lo;
        } else {
            hi = a;
            for (int k = 0; k < 60; ++k) {
                a *= 0.5;
                if (admissible(a, tail, L)) {
                    lo = a;
                    break;
                }
                hi = a;
            }
            if (lo == 0.0) return 0.0;
        }
        for (int it = 0; it < 45; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (admissible(mid, tail, L))
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    /// Windowed geometric tail along vhat: t_k = (-q)^{k-1} w_k vhat,
    /// w_k = (1 - (k-1)/N)^2. Mirrors the truncated extremal series of
    /// the disc with the Gibbs overshoot tapered away.
    std::vector<Point> geomTail(cplx q) const {
        std::vector<Point> tail(std::max(0, N - 1), Point(n, cplx(0.0)));
        cplx p = 1.0;
        for (int k = 2; k <= N; ++k) {
            p *= -q;
            const double w = (1.0 - double(k - 1) / N);
            for (int i = 0; i < n; ++i) tail[k - 2][i] = p * w * w * vhat[i];
        }
        return tail;
    }
};

}  // namespace

std::string to_string(BoundKind b) {
    switch (b) {
        case BoundKind::Exact: return "exact";
        case BoundKind::UpperBound: return "upper";
        case BoundKind::LowerBound: return "lower";
    }
    return "upper";
}

Point AnalyticDisc::eval(cplx lambda) const {
    const int n = static_cast<int>(coeffs.empty() ? 0 : coeffs[0].size());
    Point acc(n, cplx(0.0));
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
        for (int i = 0; i < n; ++i) acc[i] = acc[i] * lambda + coeffs[k][i];
    return acc;
}

MetricEstimate closedFormInfMetric(const std::string& kind, const Point& z,
                                   const Point& v) {
    using closed::ModelKind;
    ModelKind k;
    if (kind == "disc") k = ModelKind::Disc;
    else if (kind == "polydisc") k = ModelKind::Polydisc;
    else if (kind == "ball") k = ModelKind::Ball;
    else if (kind == "halfplane") k = ModelKind::Halfplane;
    else if (kind == "siegel") k = ModelKind::Siegel;
    else throw Error("closedFormInfMetric: unknown kind " + kind);
    if (!closed::modelContains(k, z))
        throw Error("closedFormInfMetric: point outside " + kind);
    MetricEstimate e;
    e.value = closed::modelMetric(k, z, v);
    e.boundKind = BoundKind::Exact;
    e.witnessDesc = "closed form (" + kind + ")";
    return e;
}

DistanceEstimate closedFormDistance(const std::string& kind, const Point& p,
                                    const Point& q) {
    using closed::ModelKind;
    ModelKind k;
    if (kind == "disc") k = ModelKind::Disc;
    else if (kind == "polydisc") k = ModelKind::Polydisc;
    else if (kind == "ball") k = ModelKind::Ball;
    else if (kind == "halfplane") k = ModelKind::Halfplane;
    else if (kind == "siegel") k = ModelKind::Siegel;
    else throw Error("closedFormDistance: unknown kind " + kind);
    if (!closed::modelContains(k, p) || !closed::modelContains(k, q))
        throw Error("closedFormDistance: point outside " + kind);
    DistanceEstimate e;
    e.value = closed::modelDistance(k, p, q);
    e.boundKind = BoundKind::Exact;
    e.path = {p, q};
    return e;
}

MetricEstimate kobayashiInfEstimate(const Domain& d, const Point& z,
                                    const Point& v, const MetricConfig& cfg) {
    MetricEstimate out;
    out.cfg = cfg;
    const double vn = vecNorm(v);
    if (vn == 0.0) {
        out.value = 0.0;
        out.witnessDesc = "constant disc";
        return out;
    }

    const FlatRho flat(d.rho);
    DiscProblem P;
    P.rho = &flat;
    P.n = d.n;
    P.z = z;
    P.vhat = scaled(v, cplx(1.0 / vn, 0.0));
    P.eta = effectiveEta(d, cfg);
    P.boundR = d.boundingRadius;
    P.ball = cfg.ballConstraint;
    P.N = std::max(1, cfg.N);
    const bool radial = !d.isPlurisubharmonicCertified();
    out.sampledContainment = radial;

    if (evalRho(d, z) > -P.eta)
        throw Error("kobayashiInfEstimate: point too close to the boundary "
                    "for the safety margin");
    if (P.ball) {
        double s = 0.0;
        for (int i = 0; i < d.n; ++i)
            s += std::norm(z[i] - P.ball->first[i]);
        if (std::sqrt(s) >= P.ball->second)
            throw Error(
                "kobayashiInfEstimate: point outside the ball constraint");
    }

    const LambdaSet coarse(cfg.searchM, radial, P.N);
    const LambdaSet fine(cfg.M, radial, P.N);

    // stage 0: straight disc
    const std::vector<Point> empty(std::max(0, P.N - 1),
                                   Point(d.n, cplx(0.0)));
    double best = P.alphaMax(empty, coarse, 1.0);
    if (best <= 0.0)
        throw Error("kobayashiInfEstimate: no admissible disc found");
    cplx bestQ = 0.0;

    int budget = cfg.iterations;

    // stage 1: windowed geometric family, real grid then complex compass
    if (P.N >= 2) {
        for (int i = 1; i <= 24 && budget > 0; ++i, --budget) {
            const cplx q(i * 0.05, 0.0);
            const double val = P.alphaMax(P.geomTail(q), coarse, best);
            if (val > best) {
                best = val;
                bestQ = q;
            }
        }
        double step = 0.05;
        while (step > 1e-4 && budget > 0) {
            bool improved = false;
            for (const cplx dq : {cplx(step, 0.0), cplx(-step, 0.0),
                                  cplx(0.0, step), cplx(0.0, -step)}) {
                if (budget-- <= 0) break;
                const double val =
                    P.alphaMax(P.geomTail(bestQ + dq), coarse, best);
                if (val > best * (1.0 + 1e-13)) {
                    best = val;
                    bestQ += dq;
                    improved = true;
                    break;
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    // stage 2: compass refinement on the tail coefficients
    std::vector<Point> tail = P.geomTail(bestQ);
    std::vector<Point> dirs;
    if (cfg.fullSpace) {
        for (int i = 0; i < d.n; ++i) {
            Point e(d.n, cplx(0.0));
            e[i] = 1.0;
            dirs.push_back(e);
        }
    } else {
        dirs.push_back(P.vhat);
    }
    double step = 0.1;
    while (step > 1e-3 && budget > 0) {
        bool improved = false;
        for (int k = 2; k <= P.N && budget > 0; ++k) {
            for (const Point& dir : dirs) {
                for (const cplx ds : {cplx(step, 0.0), cplx(-step, 0.0),
                                      cplx(0.0, step), cplx(0.0, -step)}) {
                    if (budget-- <= 0) break;
                    for (int i = 0; i < d.n; ++i)
                        tail[k - 2][i] += ds * dir[i];
                    const double val = P.alphaMax(tail, coarse, best);
                    if (val > best * (1.0 + 1e-12)) {
                        best = val;
                        improved = true;
                        break;
                    }
                    for (int i = 0; i < d.n; ++i)
                        tail[k - 2][i] -= ds * dir[i];
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    // certification at the full sample count
    double alphaCert = P.alphaMax(tail, fine, best);
    if (alphaCert <= 0.0) alphaCert = P.alphaMax(empty, fine, best);
    if (alphaCert <= 0.0)
        throw Error("kobayashiInfEstimate: certification failed");

    out.alpha = alphaCert;
    out.value = vn / alphaCert;
    out.boundKind = BoundKind::UpperBound;
    out.witness.eta = P.eta;
    out.witness.coeffs.assign(P.N + 1, Point(d.n, cplx(0.0)));
    out.witness.coeffs[0] = z;
    out.witness.coeffs[1] = scaled(P.vhat, alphaCert);
    for (int k = 2; k <= P.N; ++k)
        out.witness.coeffs[k] = scaled(tail[k - 2], alphaCert);
    return out;
}

MetricEstimate caratheodoryInfLower(const Domain& d, const Point& z,
                                    const Point& v, const MetricConfig& cfg) {
    MetricEstimate out;
    out.cfg = cfg;
    out.boundKind = BoundKind::LowerBound;
    const double vn = vecNorm(v);
    if (vn == 0.0) {
        out.witnessDesc = "zero vector";
        return out;
    }
    if (evalRho(d, z) >= 0.0)
        throw Error("caratheodoryInfLower: point not interior");

    if (const auto model = closed::modelForDomain(d)) {
        out.value = closed::modelMetric(*model, z, v);
        out.witnessDesc = "extremal model functional";
        return out;
    }

    const int n = d.n;
    // sample D within the bounding ball; the bound applies to that
    // intersection
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point> samples;
    for (int trial = 0; trial < 6000 && samples.size() < 600; ++trial) {
        Point w(n);
        double r2 = 0.0;
        for (auto& wi : w) {
            wi = d.boundingRadius * cplx(u(rng), u(rng));
            r2 += std::norm(wi);
        }
        if (r2 > d.boundingRadius * d.boundingRadius) continue;
        if (d.rho.eval(w).real() < 0.0) samples.push_back(w);
    }
    samples.push_back(z);

    double best = 0.0;
    std::string desc = "vacuous";

    // linear functionals w -> <w - z, u> / S
    std::vector<Point> dirs;
    dirs.push_back(scaled(v, cplx(1.0 / vn, 0.0)));
    for (int i = 0; i < n; ++i) {
        Point e(n, cplx(0.0));
        e[i] = 1.0;
        dirs.push_back(e);
    }
    for (int k = 0; k < 32; ++k) {
        Point e(n);
        double nr = 0.0;
        for (auto& ei : e) {
            ei = cplx(u(rng), u(rng));
            nr += std::norm(ei);
        }
        if (nr < 1e-12) continue;
        dirs.push_back(scaled(e, cplx(1.0 / std::sqrt(nr), 0.0)));
    }
    const auto insideAt = [&](const Point& w) {
        double r2 = 0.0;
        for (const auto& wi : w) r2 += std::norm(wi);
        return r2 <= d.boundingRadius * d.boundingRadius &&
               d.rho.eval(w).real() < 0.0;
    };
    for (const Point& dir : dirs) {
        const auto formAt = [&](const Point& w) {
            cplx s = 0.0;
            for (int i = 0; i < n; ++i) s += (w[i] - z[i]) * std::conj(dir[i]);
            return s;
        };
        // push the strongest samples to the boundary along the
        // functional's ascent direction before taking the sup; raw
        // sampling badly undershoots the extreme points of curved domains
        std::vector<std::pair<double, size_t>> ranked(samples.size());
        for (size_t si = 0; si < samples.size(); ++si)
            ranked[si] = {std::abs(formAt(samples[si])), si};
        std::sort(ranked.rbegin(), ranked.rend());
        const size_t pushCount = std::min<size_t>(ranked.size(), 40);
        double sup = 0.0;
        for (size_t ri = 0; ri < pushCount; ++ri) {
            const Point& w = samples[ranked[ri].second];
            const cplx fw = formAt(w);
            double val = std::abs(fw);
            const cplx phase =
                val > 1e-12 ? fw / val : cplx(1.0, 0.0);
            Point step(n);
            for (int i = 0; i < n; ++i) step[i] = phase * dir[i];
            double lo = 0.0, hi = 1.0;
            const auto at = [&](double t) {
                Point w2 = w;
                for (int i = 0; i < n; ++i) w2[i] += t * step[i];
                return w2;
            };
            int doubles = 0;
            while (insideAt(at(hi)) && doubles++ < 40) hi *= 2.0;
            if (doubles >= 40) {
                sup = std::max(sup, std::abs(formAt(at(hi))));
                continue;
            }
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                (insideAt(at(mid)) ? lo : hi) = mid;
            }
            sup = std::max(sup, std::abs(formAt(at(lo))));
        }
        if (sup < 1e-12) continue;
        const double S = 1.01 * sup;
        cplx dv = 0.0;
        for (int i = 0; i < n; ++i) dv += v[i] * std::conj(dir[i]);
        const double val = std::abs(dv) / S;
        if (val > best) {
            best = val;
            desc = "linear functional";
        }
    }

    // Levi-polynomial peak candidate at the nearest boundary point
    try {
        const auto bd = boundaryDistance(d, z);
        const Point& zeta = bd.foot;
        std::vector<cplx> g1(n);
        std::vector<std::vector<cplx>> g2(n, std::vector<cplx>(n));
        for (int i = 0; i < n; ++i) {
            const ZZbarPoly di = d.rho.wirtingerZ(i);
            g1[i] = di.eval(zeta);
            for (int j = 0; j < n; ++j) g2[i][j] = di.wirtingerZ(j).eval(zeta);
        }
        const auto levi = [&](const Point& w) {
            cplx L = 0.0;
            for (int i = 0; i < n; ++i) {
                L += g1[i] * (w[i] - zeta[i]);
                for (int j = 0; j < n; ++j)
                    L += 0.5 * g2[i][j] * (w[i] - zeta[i]) * (w[j] - zeta[j]);
            }
            return L;
        };
        const cplx Lz = levi(z);
        const double sigma = Lz.real() < 0.0 ? 1.0 : -1.0;
        double sup = 0.0;
        for (const Point& w : samples)
            sup = std::max(sup, std::abs(std::exp(sigma * levi(w))));
        const double S = 1.01 * std::max(1.0, sup);
        const cplx fz = std::exp(sigma * Lz) / S;
        if (std::abs(fz) < 1.0) {
            cplx dL = 0.0;
            for (int i = 0; i < n; ++i) {
                cplx gi = g1[i];
                for (int j = 0; j < n; ++j) gi += g2[i][j] * (z[j] - zeta[j]);
                dL += gi * v[i];
            }
            const double val =
                std::abs(fz * sigma * dL) / (1.0 - std::norm(fz));
            if (val > best) {
                best = val;
                desc = "peak candidate";
            }
        }
    } catch (const Error&) {
        // boundary foot not found; linear candidates stand
    }

    out.value = best;
    out.vacuous = best == 0.0;
    out.witnessDesc = desc;
    return out;
}

namespace {

struct GaussLegendre8 {
    // nodes/weights on [0, 1]
    static constexpr double x[8] = {
        0.01985507175123188, 0.10166676129318664, 0.2372337950418355,
        0.40828267875217505, 0.5917173212478249,  0.7627662049581645,
        0.8983332387068134,  0.9801449282487681};
    static constexpr double w[8] = {
        0.05061426814518813, 0.11119051722668723, 0.15685332293894363,
        0.18134189168918097, 0.18134189168918097, 0.15685332293894363,
        0.11119051722668723, 0.05061426814518813};
};

MetricConfig quadMetricCfg(const MetricConfig& cfg) {
    MetricConfig c = cfg;
    c.M = std::min(cfg.M, 96);
    c.searchM = std::min(cfg.searchM, 64);
    c.iterations = std::min(cfg.iterations, 80);  // family stages only
    return c;
}

MetricConfig cheapMetricCfg(const MetricConfig& cfg) {
    MetricConfig c = cfg;
    c.N = std::min(cfg.N, 6);
    c.M = std::min(cfg.M, 48);
    c.searchM = std::min(cfg.searchM, 32);
    c.iterations = std::min(cfg.iterations, 40);
    return c;
}

double segmentLength(const Domain& d, const Point& a, const Point& b,
                     const MetricConfig& cfg, std::vector<double>* samples) {
    Point dir(a.size());
    for (size_t i = 0; i < a.size(); ++i) dir[i] = b[i] - a[i];
    double total = 0.0;
    for (int k = 0; k < 8; ++k) {
        Point x(a.size());
        double r2 = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            x[i] = a[i] + GaussLegendre8::x[k] * dir[i];
            r2 += std::norm(x[i]);
        }
        if (r2 > d.boundingRadius * d.boundingRadius) return 1e100;
        if (evalRho(d, x) >= 0.0) return 1e100;  // barrier
        const double f = kobayashiInfEstimate(d, x, dir, cfg).value;
        if (samples) samples->push_back(f);
        total += GaussLegendre8::w[k] * f;
    }
    return total;
}

}  // namespace

DistanceEstimate kobayashiDistanceEstimate(const Domain& d, const Point& p,
                                           const Point& q,
                                           const MetricConfig& cfg) {
    DistanceEstimate out;
    out.boundKind = BoundKind::UpperBound;
    double pq = 0.0;
    for (size_t i = 0; i < p.size(); ++i) pq += std::norm(p[i] - q[i]);
    pq = std::sqrt(pq);
    if (pq == 0.0) {
        out.path = {p, q};
        return out;
    }
    if (evalRho(d, p) >= 0.0 || evalRho(d, q) >= 0.0)
        throw Error("kobayashiDistanceEstimate: endpoint not interior");

    constexpr int K = 8;  // control points including endpoints
    std::vector<Point> path(K, Point(p.size()));
    for (int k = 0; k < K; ++k) {
        const double t = static_cast<double>(k) / (K - 1);
        for (size_t i = 0; i < p.size(); ++i)
            path[k][i] = p[i] + t * (q[i] - p[i]);
    }

    // path search with a cheap metric; final quadrature with the good one
    const MetricConfig cheap = cheapMetricCfg(cfg);
    // cheap segment evaluations; small iteration budgets also shorten the
    // path search, not just the per-point disc search
    int budget = std::min(400, 4 * cfg.iterations);
    std::vector<double> segVal(K - 1);
    for (int s = 0; s < K - 1; ++s)
        segVal[s] = segmentLength(d, path[s], path[s + 1], cheap, nullptr);

    double step = 0.15 * pq;
    while (step > 0.02 * pq && budget > 0) {
        bool improved = false;
        for (int k = 1; k < K - 1 && budget > 0; ++k) {
            for (size_t i = 0; i < p.size() && budget > 0; ++i) {
                for (const cplx delta :
                     {cplx(step, 0.0), cplx(-step, 0.0), cplx(0.0, step),
                      cplx(0.0, -step)}) {
                    if (budget <= 0) break;
                    const cplx old = path[k][i];
                    const double before = segVal[k - 1] + segVal[k];
                    path[k][i] = old + delta;
                    budget -= 2;
                    const double a =
                        segmentLength(d, path[k - 1], path[k], cheap, nullptr);
                    const double b =
                        segmentLength(d, path[k], path[k + 1], cheap, nullptr);
                    if (a + b < before * (1.0 - 1e-10)) {
                        segVal[k - 1] = a;
                        segVal[k] = b;
                        improved = true;
                        break;
                    }
                    path[k][i] = old;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    const MetricConfig fineCfg = quadMetricCfg(cfg);
    out.path = path;
    double total = 0.0;
    for (int s = 0; s < K - 1; ++s) {
        std::vector<double> samples;
        const double val =
            segmentLength(d, path[s], path[s + 1], fineCfg, &samples);
        out.perSegment.push_back(val);
        total += val;
    }
    out.value = total;
    return out;
}

std::vector<RadialExtent> kobayashiBallProbe(const Domain& d, const Point& p,
                                             double R,
                                             const std::vector<Point>& dirs,
                                             const MetricConfig& cfg) {
    if (R < 0.0) throw Error("kobayashiBallProbe: negative radius");
    const std::optional<closed::ModelKind> model =
        cfg.preferClosedForm ? closed::modelForDomain(d)
                             : std::optional<closed::ModelKind>();
    std::vector<RadialExtent> out;
    const MetricConfig mc = quadMetricCfg(cfg);
    for (const Point& u : dirs) {
        RadialExtent ext;
        ext.direction = u;
        if (R == 0.0) {
            out.push_back(ext);
            continue;
        }
        const auto at = [&](double t) {
            Point x(p.size());
            for (size_t i = 0; i < p.size(); ++i) x[i] = p[i] + t * u[i];
            return x;
        };
        // Euclidean exit parameter along the ray (domain or bounding ball)
        double tExit;
        {
            const auto outside = [&](double t) {
                const Point x = at(t);
                double r2 = 0.0;
                for (const auto& xi : x) r2 += std::norm(xi);
                if (r2 > d.boundingRadius * d.boundingRadius) return true;
                return evalRho(d, x) >= 0.0;
            };
            double lo = 0.0, hi = 0.0, stepT = 1e-3;
            const double cap = 8.0 * d.boundingRadius;
            while (hi < cap) {
                hi = std::min(lo + stepT, cap);
                if (outside(hi)) break;
                lo = hi;
                stepT *= 2.0;
            }
            if (outside(hi)) {
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (!outside(mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                tExit = lo;
            } else {
                tExit = cap;
            }
        }
        const double tHi = tExit * (1.0 - 1e-6);

        if (model) {
            // exact distances: plain bisection
            const auto dist = [&](double t) {
                return closed::modelDistance(*model, p, at(t));
            };
            if (dist(tHi) < R) {
                ext.extent = tHi;
                ext.exitedDomain = true;
            } else {
                double lo = 0.0, hi = tHi;
                while (hi - lo > 1e-3 * std::max(hi, 1e-12)) {
                    const double mid = 0.5 * (lo + hi);
                    if (dist(mid) < R)
                        lo = mid;
                    else
                        hi = mid;
                }
                ext.extent = 0.5 * (lo + hi);
            }
            out.push_back(ext);
            continue;
        }

        // cumulative straight-ray quadrature of the metric upper bound;
        // monotone in t, so the crossing is found on the running integral
        const int S = 16;
        std::vector<double> knots(S + 1);
        for (int s = 0; s <= S; ++s) {
            // graded toward the exit where the metric blows up
            const double x = static_cast<double>(s) / S;
            knots[s] = tHi * (1.0 - std::pow(1.0 - x, 2.0));
        }
        Point uv = u;
        double cum = 0.0;
        double prevCum = 0.0;
        double extent = -1.0;
        for (int s = 0; s < S; ++s) {
            const double a = knots[s], b = knots[s + 1];
            double seg = 0.0;
            for (int k = 0; k < 8; ++k) {
                const double t = a + GaussLegendre8::x[k] * (b - a);
                const double f =
                    kobayashiInfEstimate(d, at(t), uv, mc).value;
                seg += GaussLegendre8::w[k] * f * (b - a);
            }
            prevCum = cum;
            cum += seg;
            if (cum >= R) {
                // secant refinement inside [a, b] on the running integral
                double lo = a, hi = b, cLo = prevCum;
                for (int it = 0; it < 25; ++it) {
                    if ((hi - lo) <= 1e-3 * std::max(lo, 1e-12)) break;
                    const double mid = 0.5 * (lo + hi);
                    double part = 0.0;
                    for (int k = 0; k < 8; ++k) {
                        const double t =
                            lo + GaussLegendre8::x[k] * (mid - lo);
                        part += GaussLegendre8::w[k] *
                                kobayashiInfEstimate(d, at(t), uv, mc).value *
                                (mid - lo);
                    }
                    if (cLo + part < R) {
                        lo = mid;
                        cLo += part;
                    } else {
                        hi = mid;
                    }
                }
                extent = 0.5 * (lo + hi);
                break;
            }
        }
        if (extent < 0.0) {
            ext.extent = tHi;
            ext.exitedDomain = true;
        } else {
            ext.extent = extent;
        }
        out.push_back(ext);
    }
    return out;
}

double localizationRatio(const Domain& d, const Point& uCenter,
                         double uRadius, const Point& z, const Point& v,
                         const MetricConfig& cfg) {
    MetricConfig local = cfg;
    local.ballConstraint = std::make_pair(uCenter, uRadius);
    const double num = kobayashiInfEstimate(d, z, v, local).value;
    MetricConfig global = cfg;
    global.ballConstraint.reset();
    const double den = kobayashiInfEstimate(d, z, v, global).value;
    if (den <= 0.0) throw Error("localizationRatio: vacuous denominator");
    return num / den;
}

}  // namespace holokit
