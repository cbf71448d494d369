#include "holokit/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace holokit {

namespace {

cplx hdot(const Point& a, const Point& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

double pnorm(const Point& a) { return std::sqrt(std::abs(hdot(a, a))); }

/// Rows of a unitary matrix whose last row is the given unit vector.
std::vector<Point> completeUnitary(const Point& last) {
    const int n = static_cast<int>(last.size());
    std::vector<Point> rows;
    for (int e = 0; e < n && static_cast<int>(rows.size()) < n - 1; ++e) {
        Point v(n, cplx(0.0, 0.0));
        v[e] = 1.0;
        cplx c = hdot(v, last);
        for (int i = 0; i < n; ++i) v[i] -= c * last[i];
        for (const auto& r : rows) {
            c = hdot(v, r);
            for (int i = 0; i < n; ++i) v[i] -= c * r[i];
        }
        const double nv = pnorm(v);
        if (nv < 1e-8) continue;
        for (auto& x : v) x /= nv;
        rows.push_back(v);
    }
    if (static_cast<int>(rows.size()) != n - 1)
        throw Error("unitary completion failed");
    rows.push_back(last);
    return rows;
}

/// Lower Cholesky factor of a Hermitian positive definite matrix;
/// throws when a pivot degenerates.
std::vector<std::vector<cplx>> cholesky(
    const std::vector<std::vector<cplx>>& G) {
    const int m = static_cast<int>(G.size());
    std::vector<std::vector<cplx>> L(m, std::vector<cplx>(m, cplx(0, 0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) {
            cplx s = G[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * std::conj(L[j][k]);
            if (i == j) {
                const double diag = s.real();
                if (diag < 1e-10 || std::abs(s.imag()) > 1e-10)
                    throw Error("Levi form not positive definite");
                L[i][i] = std::sqrt(diag);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    return L;
}

MultiIndex unitIndex(int n, int i) {
    MultiIndex a(n, 0);
    a[i] = 1;
    return a;
}

}  // namespace

SpscNormalization spscNormalization(const Domain& d, const Point& zeta) {
    if (d.classTag != DomainClass::StronglyPseudoconvex)
        throw Error("spsc normalization needs a strongly pseudoconvex domain");
    if (static_cast<int>(zeta.size()) != d.n)
        throw Error("boundary point arity mismatch");
    if (std::abs(evalRho(d, zeta)) > 1e-10)
        throw Error("normalization center is not on the boundary");
    const int n = d.n;

    Point g = wirtingerGradient(d, zeta);
    const double gn = pnorm(g);
    if (gn < 1e-10) throw Error("degenerate boundary gradient");
    Point gu = g;
    for (auto& x : gu) x /= gn;

    auto rows = completeUnitary(gu);
    auto trans = PolyAutomorphism::translation([&] {
        Point mz = zeta;
        for (auto& x : mz) x = -x;
        return mz;
    }());
    auto rot = PolyAutomorphism::linear(rows);
    std::vector<cplx> dil(n, cplx(1.0, 0.0));
    dil[n - 1] = gn;
    auto step1 = PolyAutomorphism::dilation(dil).after(rot).after(trans);

    // holomorphic quadratic tangential part, removed by a shear
    Domain mid = step1.pushforward(d);
    PolyZ q(n);
    const MultiIndex zero(n, 0);
    for (const auto& [key, c] : mid.rho.terms()) {
        const auto& [alpha, beta] = key;
        if (beta != zero) continue;
        int tot = 0;
        for (int v : alpha) tot += v;
        if (tot != 2 || alpha[n - 1] != 0) continue;
        q.addTerm(alpha, c);
    }
    auto full = PolyAutomorphism::shearLast(q).after(step1);
    Domain sheared = full.pushforward(d);

    // tangential Levi block -> identity via Cholesky
    std::vector<std::vector<cplx>> L(n - 1, std::vector<cplx>(n - 1));
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j)
            L[i][j] =
                sheared.rho.coefficient(unitIndex(n, i), unitIndex(n, j));
    std::vector<std::vector<cplx>> G(n - 1, std::vector<cplx>(n - 1));
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) G[i][j] = L[j][i];
    auto Lc = cholesky(G);
    std::vector<std::vector<cplx>> B(n, std::vector<cplx>(n, cplx(0, 0)));
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) B[i][j] = std::conj(Lc[j][i]);
    B[n - 1][n - 1] = 1.0;
    full = PolyAutomorphism::linear(B).after(full);

    Domain normalized = full.pushforward(d);
    const auto& r = normalized.rho;
    if (std::abs(r.coefficient(zero, zero)) > 1e-8)
        throw Error("normalization lost the boundary");
    if (std::abs(r.coefficient(unitIndex(n, n - 1), zero) - 1.0) > 1e-8)
        throw Error("normal direction not normalized");
    for (const auto& [key, c] : r.terms()) {
        const auto& [alpha, beta] = key;
        if (beta != zero) continue;
        int tot = 0;
        for (int v : alpha) tot += v;
        if (tot == 2 && alpha[n - 1] == 0 && std::abs(c) > 1e-8)
            throw Error("tangential quadratic survived the shear");
        if (tot == 1 && alpha[n - 1] == 0 && std::abs(c) > 1e-8)
            throw Error("tangential linear term survived the rotation");
    }
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) {
            const cplx c =
                r.coefficient(unitIndex(n, i), unitIndex(n, j));
            if (std::abs(c - (i == j ? 1.0 : 0.0)) > 1e-8)
                throw Error("tangential Hessian is not the identity");
        }
    return {full, normalized, gn};
}

ScalingEntry spscScaledDomain(const Domain& d, const Point& p, int j) {
    auto bd = boundaryDistance(d, p);
    if (bd.distance >= 0.1)
        throw Error("scaling point too far from the boundary");
    const int n = d.n;

    // ray scan for a second equidistant boundary point
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 64; ++s) {
        Point u(n);
        for (auto& x : u) x = cplx(gauss(rng), gauss(rng));
        const double nu = pnorm(u);
        if (nu < 1e-9) continue;
        for (auto& x : u) x /= nu;
        double lo = 0.0, hi = bd.distance / 2;
        bool crossed = false;
        while (hi < 2.0 * d.boundingRadius) {
            Point zt = p;
            for (int i = 0; i < n; ++i) zt[i] += hi * u[i];
            if (evalRho(d, zt) >= 0.0) {
                crossed = true;
                break;
            }
            lo = hi;
            hi *= 1.5;
        }
        if (!crossed) continue;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            Point zt = p;
            for (int i = 0; i < n; ++i) zt[i] += mid * u[i];
            (evalRho(d, zt) >= 0.0 ? hi : lo) = mid;
        }
        if (hi < bd.distance * (1.0 + 1e-6)) {
            Point hit = p;
            for (int i = 0; i < n; ++i) hit[i] += hi * u[i];
            double sep = 0.0;
            for (int i = 0; i < n; ++i)
                sep += std::norm(hit[i] - bd.foot[i]);
            if (std::sqrt(sep) > 10.0 * bd.distance)
                throw Error("closest boundary point is ambiguous");
        }
    }

    auto norm = spscNormalization(d, bd.foot);
    Point img = norm.map.apply(p);
    const double delta = -img[n - 1].real();
    if (delta <= 0.0) throw Error("point did not land inside the model");
    double off = std::abs(img[n - 1].imag());
    for (int i = 0; i < n - 1; ++i) off = std::max(off, std::abs(img[i]));
    if (off > 1e-8 + 1e-6 * delta)
        throw Error("point is not on the inner normal");

    std::vector<cplx> scales(n, cplx(1.0 / std::sqrt(delta), 0.0));
    scales[n - 1] = 1.0 / delta;
    auto full = PolyAutomorphism::dilation(scales).after(norm.map);
    Domain scaled = full.pushforward(d);
    scaled.rho = scaled.rho * (1.0 / delta);
    scaled.boundingRadius = std::min(scaled.boundingRadius, 100.0);

    ScalingEntry e;
    e.j = j;
    e.p = p;
    e.center = bd.foot;
    e.scales = {delta};
    e.map = full;
    e.scaled = scaled;
    e.image = full.apply(p);
    return e;
}

void HomogeneousExpansion::checkInvariants() const {
    const int n = static_cast<int>(center.size());
    for (int l = 2; l < static_cast<int>(parts.size()); ++l) {
        const auto& P = parts[l];
        if (P.isZero()) continue;
        if (!P.isReal(1e-10)) throw Error("expansion part is not real");
        for (const auto& [key, c] : P.terms()) {
            const auto& [alpha, beta] = key;
            for (int i = 1; i < n; ++i)
                if (alpha[i] != 0 || beta[i] != 0)
                    throw Error("expansion part leaks other variables");
            if (alpha[0] + beta[0] != l)
                throw Error("expansion part is not homogeneous");
            if ((alpha[0] == 0 || beta[0] == 0) && std::abs(c) > 1e-12)
                throw Error("harmonic term in an expansion part");
        }
    }
}

namespace {

void requireFiniteTypeChart(const Domain& d) {
    if (d.n != 2) throw Error("finite type normalization needs n = 2");
    const MultiIndex zero(2, 0);
    const auto& r = d.rho;
    if (std::abs(r.coefficient(zero, zero)) > 1e-10 ||
        std::abs(r.coefficient({0, 1}, zero) - 1.0) > 1e-10 ||
        std::abs(r.coefficient({1, 0}, zero)) > 1e-10)
        throw Error(
            "expected a boundary chart of the form 2 Re z_2 + higher");
}

}  // namespace

FiniteTypeNormalization catlinAutomorphism(const Domain& d, const Point& zeta,
                                           int typeBound) {
    if (d.classTag != DomainClass::FiniteType2D &&
        d.classTag != DomainClass::PolynomialModel)
        throw Error("finite type normalization needs a C^2 finite type tag");
    requireFiniteTypeChart(d);
    if (typeBound < 2 || typeBound % 2 != 0)
        throw Error("type bound must be an even integer >= 2");
    if (std::abs(evalRho(d, zeta)) > 1e-10)
        throw Error("normalization center is not on the boundary");

    const cplx rz2 = wirtingerGradient(d, zeta)[1];
    if (std::abs(rz2) < 1e-8)
        throw Error("defining function degenerate in z_2 at the center");
    const cplx d0 = 1.0 / rz2;

    std::vector<cplx> dl(typeBound + 1, cplx(0.0, 0.0));
    PolyZ w1 = PolyZ::variable(2, 0), w2 = PolyZ::variable(2, 1);
    ZZbarPoly pulled{2};
    bool converged = false;
    for (int sweep = 0; sweep < 60; ++sweep) {
        PolyZ sum(2);
        for (int l = 1; l <= typeBound; ++l)
            sum = sum + w1.pow(l) * dl[l];
        PolyZ inv1 = w1 + PolyZ::constant(2, zeta[0]);
        PolyZ inv2 = PolyZ::constant(2, zeta[1]) + (w2 - sum) * d0;
        pulled = d.rho.composeHolomorphic({inv1, inv2}).symmetrized();
        double worst = 0.0;
        for (int l = 1; l <= typeBound; ++l) {
            const cplx h = pulled.coefficient({l, 0}, {0, 0});
            worst = std::max(worst, std::abs(h));
            dl[l] += h;
        }
        if (worst < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged) throw Error("harmonic removal did not converge");

    PolyZ z1 = PolyZ::variable(2, 0), z2 = PolyZ::variable(2, 1);
    PolyZ s1 = z1 - PolyZ::constant(2, zeta[0]);
    PolyZ f2 = (z2 - PolyZ::constant(2, zeta[1])) * (1.0 / d0);
    for (int l = 1; l <= typeBound; ++l) f2 = f2 + s1.pow(l) * dl[l];
    PolyZ sum(2);
    for (int l = 1; l <= typeBound; ++l) sum = sum + w1.pow(l) * dl[l];
    PolyZ inv2 = PolyZ::constant(2, zeta[1]) + (w2 - sum) * d0;
    PolyAutomorphism phi({s1, f2}, {w1 + PolyZ::constant(2, zeta[0]), inv2},
                         "Triangular");

    HomogeneousExpansion expn;
    expn.center = zeta;
    expn.typeBound = typeBound;
    expn.parts.resize(typeBound + 1, ZZbarPoly{2});
    double mass = 0.0;
    for (int l = 2; l <= typeBound; ++l) {
        expn.parts[l] =
            pulled.homogeneousPartInFirstVar(l).withoutFirstVarHarmonics();
        mass = std::max(mass, expn.parts[l].maxAbsCoefficient());
    }
    if (mass < 1e-12)
        throw Error("boundary type exceeds the declared bound");
    expn.remainder =
        "degree > bound in z_1 together with every term containing z_2";
    expn.checkInvariants();

    FiniteTypeNormalization out;
    out.map = phi;
    out.d0 = d0;
    out.d = dl;
    out.expansion = expn;
    return out;
}

double catlinTau(const HomogeneousExpansion& e, double eps) {
    if (eps <= 0.0) throw Error("tau needs a positive parameter");
    double best = 0.0;
    bool found = false;
    for (int l = 2; l <= e.typeBound && l < static_cast<int>(e.parts.size());
         ++l) {
        const double nl = e.parts[l].maxAbsCoefficient();
        if (nl <= 0.0) continue;
        const double cand = std::pow(eps / nl, 1.0 / l);
        if (!found || cand < best) {
            best = cand;
            found = true;
        }
    }
    if (!found) throw Error("every expansion part vanishes");
    return best;
}

CatlinEntry catlinScaledDomain(const Domain& d, const Point& p, int typeBound,
                               int j) {
    requireFiniteTypeChart(d);
    if (evalRho(d, p) >= 0.0) throw Error("scaling point must be interior");

    // eps solves rho(p + (0, t)) = 0
    double lo = 0.0, hi = 1e-6 * (1.0 + pnorm(p));
    auto at = [&](double t) {
        Point z = p;
        z[1] += t;
        return evalRho(d, z);
    };
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
    const double eps = 0.5 * (lo + hi);

    Point zeta = p;
    zeta[1] += eps;
    auto norm = catlinAutomorphism(d, zeta, typeBound);
    const double tau = catlinTau(norm.expansion, eps);

    auto full = PolyAutomorphism::dilation({1.0 / tau, 1.0 / eps})
                    .after(norm.map);
    Domain scaled = full.pushforward(d);
    scaled.rho = scaled.rho * (1.0 / eps);
    scaled.boundingRadius = std::min(scaled.boundingRadius, 100.0);

    CatlinEntry ce;
    ce.entry.j = j;
    ce.entry.p = p;
    ce.entry.center = zeta;
    ce.entry.scales = {tau, eps};
    ce.entry.map = full;
    ce.entry.scaled = scaled;
    ce.entry.image = full.apply(p);
    ce.d0 = norm.d0;
    ce.eps = eps;
    ce.tau = tau;
    ce.supRatio = std::pow(tau, typeBound) / eps;
    ce.expansion = norm.expansion;
    ZZbarPoly s{2};
    for (int l = 2; l <= typeBound; ++l)
        s = s + norm.expansion.parts[l] * (std::pow(tau, l) / eps);
    ce.scaledTangential = s;
    return ce;
}

ZZbarPoly limitPolynomial(const std::vector<CatlinEntry>& entries) {
    if (entries.size() < 3)
        throw Error("limit extraction needs at least three entries");
    const auto& A = entries[entries.size() - 3].scaledTangential;
    const auto& B = entries[entries.size() - 2].scaledTangential;
    const auto& C = entries[entries.size() - 1].scaledTangential;
    const double num = (C - B).maxAbsCoefficient();
    const double den = std::max(C.maxAbsCoefficient(), 1e-300);
    if (num / den > 0.05)
        throw Error("tangential parts are not converging");

    const int typeBound = entries.back().expansion.typeBound;
    ZZbarPoly P{2};
    std::map<ZZbarPoly::Key, bool> keys;
    for (const auto* S : {&A, &B, &C})
        for (const auto& [key, c] : S->terms()) keys[key] = true;
    for (const auto& [key, unused] : keys) {
        const cplx a = A.coefficient(key.first, key.second);
        const cplx b = B.coefficient(key.first, key.second);
        const cplx c = C.coefficient(key.first, key.second);
        const cplx denom = (c - b) - (b - a);
        cplx val = c;
        if (std::abs(denom) >
            1e-10 * (std::abs(a) + std::abs(b) + std::abs(c) + 1e-30))
            val = c - (c - b) * (c - b) / denom;
        P.addTerm(key.first, key.second, val);
    }
    P = P.symmetrized();
    const double mx = P.maxAbsCoefficient();
    ZZbarPoly cleaned{2};
    for (const auto& [key, c] : P.terms())
        if (std::abs(c) >= 1e-10 * mx) cleaned.addTerm(key.first, key.second, c);
    P = cleaned;

    if (P.degree() > typeBound)
        throw Error("limit polynomial exceeds the type bound");
    const ZZbarPoly harm = P - P.withoutFirstVarHarmonics();
    if (harm.maxAbsCoefficient() > 1e-8 * std::max(1.0, mx))
        throw Error("limit polynomial has harmonic terms");
    P = P.withoutFirstVarHarmonics();

    // discrete subharmonicity on a 41 x 41 grid over |Re|, |Im| <= 2
    const int K = 41;
    const double h = 4.0 / (K - 1);
    std::vector<double> grid(K * K);
    for (int i = 0; i < K; ++i)
        for (int k = 0; k < K; ++k) {
            const cplx z(-2.0 + i * h, -2.0 + k * h);
            const Point pt = {z, cplx(0, 0)};
            grid[i * K + k] = P.evalReal(pt);
        }
    for (int i = 1; i + 1 < K; ++i)
        for (int k = 1; k + 1 < K; ++k) {
            const double lap =
                (grid[(i + 1) * K + k] + grid[(i - 1) * K + k] +
                 grid[i * K + k + 1] + grid[i * K + k - 1] -
                 4.0 * grid[i * K + k]) /
                (h * h);
            if (lap < -1e-8)
                throw Error("limit polynomial fails subharmonicity");
        }
    return P;
}

namespace {

struct LineHit {
    double t = 0.0;
    double theta = 0.0;
    Point point;
};

/// Distance from q to {rho = 0} along the complex line q + C u; rho(q)
/// must be negative.
LineHit lineDistance(const Domain& d, const Point& q, const Point& u) {
    const int n = d.n;
    const double reach = 2.0 * (d.boundingRadius + pnorm(q));
    auto crossing = [&](double theta) {
        const cplx dir = std::polar(1.0, theta);
        auto at = [&](double t) {
            Point z = q;
            for (int i = 0; i < n; ++i) z[i] += t * dir * u[i];
            return evalRho(d, z);
        };
        double lo = 0.0, hi = 1e-4 * (1.0 + pnorm(q));
        while (at(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > reach) return reach;
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (at(mid) >= 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const int G = 48;
    double bestT = 0.0, bestTheta = 0.0;
    for (int g = 0; g < G; ++g) {
        const double th = 2.0 * M_PI * g / G;
        const double t = crossing(th);
        if (g == 0 || t < bestT) {
            bestT = t;
            bestTheta = th;
        }
    }
    double a = bestTheta - 2.0 * M_PI / G, b = bestTheta + 2.0 * M_PI / G;
    for (int it = 0; it < 45; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (crossing(m1) < crossing(m2))
            b = m2;
        else
            a = m1;
    }
    LineHit hit;
    hit.theta = 0.5 * (a + b);
    hit.t = crossing(hit.theta);
    hit.point = q;
    const cplx dir = std::polar(1.0, hit.theta);
    for (int i = 0; i < n; ++i) hit.point[i] += hit.t * dir * u[i];
    // the segment from q to the crossing must stay inside the level set
    for (int s = 1; s <= 6; ++s) {
        Point z = q;
        const double t = hit.t * s / 7.0;
        for (int i = 0; i < n; ++i) z[i] += t * dir * u[i];
        if (evalRho(d, z) > 1e-9)
            throw Error("level set is not convex along a complex line");
    }
    return hit;
}

std::vector<Point> orthogonalComplementBasis(const std::vector<Point>& used,
                                             int n) {
    std::vector<Point> basis;
    for (int e = 0; e < n; ++e) {
        Point v(n, cplx(0.0, 0.0));
        v[e] = 1.0;
        for (const auto& r : used) {
            const cplx c = hdot(v, r);
            for (int i = 0; i < n; ++i) v[i] -= c * r[i];
        }
        for (const auto& r : basis) {
            const cplx c = hdot(v, r);
            for (int i = 0; i < n; ++i) v[i] -= c * r[i];
        }
        const double nv = pnorm(v);
        if (nv < 1e-8) continue;
        for (auto& x : v) x /= nv;
        basis.push_back(v);
    }
    return basis;
}

}  // namespace

bool HalfSpace::contains(const Point& z, double tol) const {
    cplx s = a0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * z[i];
    return s.real() <= tol;
}

McnealFrame mcnealFrame(const Domain& d, const Point& q, double eps) {
    if (d.classTag != DomainClass::ConvexFiniteType)
        throw Error("extremal frame needs a convex finite type domain");
    if (eps <= 0.0) throw Error("level shift must be positive");
    if (evalRho(d, q) >= 0.0) throw Error("frame center must be interior");
    const int n = d.n;
    const double level = evalRho(d, q) + eps;

    Domain shifted = d;
    shifted.rho = d.rho + ZZbarPoly::constant(n, -level);
    shifted.basePoint = q;

    std::vector<Point> dirs(n);     // u_n .. u_1 as dirs[n-1] .. dirs[0]
    std::vector<double> tau(n, 0.0);
    std::vector<Point> extremal(n);
    std::vector<double> theta(n, 0.0);

    auto bd = boundaryDistance(shifted, q);
    tau[n - 1] = bd.distance;
    extremal[n - 1] = bd.foot;
    {
        Point u(n);
        double nu = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] = bd.foot[i] - q[i];
            nu += std::norm(u[i]);
        }
        nu = std::sqrt(nu);
        if (nu < 1e-14) throw Error("degenerate boundary foot");
        cplx phase = u[0];
        int lead = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(u[i]) > std::abs(phase)) phase = u[lead = i];
        phase /= std::abs(phase);
        for (auto& x : u) x /= nu * phase;
        dirs[n - 1] = u;
        theta[n - 1] = std::arg(phase);
    }

    std::vector<Point> used = {dirs[n - 1]};
    for (int k = n - 2; k >= 0; --k) {
        auto basis = orthogonalComplementBasis(used, n);
        if (static_cast<int>(basis.size()) != k + 1)
            throw Error("complement construction failed");
        Point bestU;
        LineHit bestHit;
        if (basis.size() == 1) {
            bestU = basis[0];
            bestHit = lineDistance(shifted, q, bestU);
        } else {
            // deterministic multi-start over the complement sphere
            std::mt19937_64 rng(7);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const int m = static_cast<int>(basis.size());
            auto assemble = [&](const std::vector<cplx>& c) {
                Point u(n, cplx(0.0, 0.0));
                double nc = 0.0;
                for (int i = 0; i < m; ++i) nc += std::norm(c[i]);
                nc = std::sqrt(nc);
                for (int i = 0; i < m; ++i)
                    for (int v = 0; v < n; ++v)
                        u[v] += (c[i] / nc) * basis[i][v];
                return u;
            };
            std::vector<cplx> bestC;
            double bestVal = -1.0;
            for (int s = 0; s < 96; ++s) {
                std::vector<cplx> c(m);
                for (auto& x : c) x = cplx(gauss(rng), gauss(rng));
                Point u = assemble(c);
                const auto hit = lineDistance(shifted, q, u);
                if (hit.t > bestVal) {
                    bestVal = hit.t;
                    bestC = c;
                    bestU = u;
                    bestHit = hit;
                }
            }
            double step = 0.3;
            while (step > 1e-3) {
                bool improved = false;
                for (int i = 0; i < m && !improved; ++i)
                    for (const cplx delta :
                         {cplx(step, 0.0), cplx(-step, 0.0), cplx(0.0, step),
                          cplx(0.0, -step)}) {
                        auto c = bestC;
                        c[i] += delta;
                        Point u = assemble(c);
                        const auto hit = lineDistance(shifted, q, u);
                        if (hit.t > bestVal) {
                            bestVal = hit.t;
                            bestC = c;
                            bestU = u;
                            bestHit = hit;
                            improved = true;
                            break;
                        }
                    }
                if (!improved) step *= 0.5;
            }
        }
        tau[k] = bestHit.t;
        extremal[k] = bestHit.point;
        theta[k] = bestHit.theta;
        dirs[k] = bestU;
        used.push_back(bestU);
    }

    std::vector<std::vector<cplx>> rows(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i) {
        const cplx phase = std::polar(1.0, theta[i]);
        for (int v = 0; v < n; ++v)
            rows[i][v] = std::conj(phase * dirs[i][v]);
    }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            cplx g = 0.0;
            for (int v = 0; v < n; ++v) g += rows[i][v] * std::conj(rows[k][v]);
            if (std::abs(g - (i == k ? 1.0 : 0.0)) > 1e-10)
                throw Error("extremal lines are not orthogonal");
        }

    McnealFrame out;
    out.map = PolyAutomorphism::linear(rows).after(
        PolyAutomorphism::translation([&] {
            Point mq = q;
            for (auto& x : mq) x = -x;
            return mq;
        }()));
    out.tau = tau;
    out.extremal = extremal;
    out.level = level;
    return out;
}

ConvexEntry convexScaledDomain(const Domain& d, const Point& q, int j) {
    const double eps = -evalRho(d, q);
    if (eps <= 0.0) throw Error("scaling point must be interior");
    auto frame = mcnealFrame(d, q, eps);
    const int n = d.n;

    std::vector<cplx> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = 1.0 / frame.tau[i];
    auto full = PolyAutomorphism::dilation(inv).after(frame.map);
    Domain scaled = full.pushforward(d);
    scaled.rho = scaled.rho * (1.0 / eps);
    scaled.boundingRadius = std::min(scaled.boundingRadius, 100.0);

    ConvexEntry ce;
    ce.entry.j = j;
    ce.entry.p = q;
    ce.entry.center = q;
    ce.entry.scales.assign(frame.tau.begin(), frame.tau.end());
    ce.entry.map = full;
    ce.entry.scaled = scaled;
    ce.entry.image = full.apply(q);
    ce.eps = eps;
    ce.tau = frame.tau;
    ce.extremal = frame.extremal;

    for (int k = 0; k < n; ++k) {
        Point ek(n, cplx(0.0, 0.0));
        ek[k] = 1.0;
        Point g = wirtingerGradient(scaled, ek);
        if (std::abs(g[k]) < 1e-10)
            throw Error("degenerate gradient at an extremal image");
        HalfSpace h;
        h.a.assign(n, cplx(0.0, 0.0));
        h.a[k] = g[k];
        for (int i = k + 1; i < n; ++i) h.a[i] = g[i];
        h.a0 = -g[k];
        ce.envelope.push_back(h);
        ce.envelopeGradients.push_back(g[k]);
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int accepted = 0;
    for (long tries = 0; tries < 300000 && accepted < 1000; ++tries) {
        Point z(n);
        for (auto& x : z) x = cplx(u(rng), u(rng));
        if (evalRho(scaled, z) >= 0.0) continue;
        ++accepted;
        for (const auto& h : ce.envelope)
            if (!h.contains(z, 1e-7))
                throw Error("scaled domain escapes the half-space envelope");
    }
    return ce;
}

Point CornerMap::apply(const Point& z) const {
    const int n = spec.n();
    Point out(n);
    const cplx I(0.0, 1.0);
    for (int l = 0; l < n; ++l) {
        const cplx w =
            std::polar(1.0, theta[l]) * spec.generators[l].eval(z);
        if (std::abs(1.0 + w) < 1e-12)
            throw Error("corner map pole at the given point");
        const cplx xi = I * (1.0 - w) / (1.0 + w);
        const cplx eta = (xi - tau[l]) / lambda[l];
        out[l] = (I - eta) / (I + eta);
    }
    return out;
}

Point CornerMap::generatorTarget(const Point& u) const {
    const int n = spec.n();
    Point w(n);
    const cplx I(0.0, 1.0);
    for (int l = 0; l < n; ++l) {
        if (std::abs(1.0 + u[l]) < 1e-12)
            throw Error("corner map pole at the given point");
        const cplx eta = I * (1.0 - u[l]) / (1.0 + u[l]);
        const cplx xi = lambda[l] * eta + tau[l];
        w[l] = (I - xi) / (I + xi);
    }
    return w;
}

CornerMap polyhedronCornerMaps(const PolyhedronSpec& spec, const Point& zk) {
    const int n = spec.n();
    if (static_cast<int>(spec.z0.size()) != n ||
        static_cast<int>(zk.size()) != n)
        throw Error("polyhedron arity mismatch");
    CornerMap m;
    m.spec = spec;
    m.theta.resize(n);
    m.tau.resize(n);
    m.lambda.resize(n);
    const cplx I(0.0, 1.0);
    for (int l = 0; l < n; ++l) {
        const cplx f0 = spec.generators[l].eval(spec.z0);
        if (std::abs(std::abs(f0) - 1.0) > 1e-8)
            throw Error("generator is not unimodular at the corner");
        m.theta[l] = -std::arg(f0);
        const cplx wk = std::polar(1.0, m.theta[l]) *
                        spec.generators[l].eval(zk);
        if (std::abs(1.0 + wk) < 1e-12)
            throw Error("corner map pole at the given point");
        const cplx xi = I * (1.0 - wk) / (1.0 + wk);
        m.tau[l] = xi.real();
        m.lambda[l] = xi.imag();
        if (m.lambda[l] <= 0.0)
            throw Error("point lies outside the local polyhedron piece");
    }
    const Point img = m.apply(zk);
    for (const auto& x : img)
        if (std::abs(x) > 1e-10)
            throw Error("corner map failed to center the point");
    return m;
}

LocalHausdorff localHausdorff(const Domain& a, const Domain& b,
                              const Point& center, double radius,
                              int perDim) {
    if (a.n != b.n || static_cast<int>(center.size()) != a.n)
        throw Error("hausdorff arity mismatch");
    if (radius > a.boundingRadius || radius > b.boundingRadius)
        throw Error("window exceeds a bounding radius");
    const int n = a.n;
    const int dims = 2 * n;
    if (perDim <= 1) perDim = (n == 1) ? 41 : 13;
    const double step = 2.0 * radius / (perDim - 1);

    long total = 1;
    for (int i = 0; i < dims; ++i) total *= perDim;

    auto coords = [&](long idx) {
        Point z(n);
        for (int i = 0; i < n; ++i) {
            const long xi = idx % perDim;
            idx /= perDim;
            const long yi = idx % perDim;
            idx /= perDim;
            z[i] = center[i] + cplx(-radius + xi * step, -radius + yi * step);
        }
        return z;
    };

    std::vector<signed char> inA(total, 0), inB(total, 0), window(total, 0);
    for (long idx = 0; idx < total; ++idx) {
        const Point z = coords(idx);
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += std::norm(z[i] - center[i]);
        if (r2 > radius * radius + 1e-12) continue;
        window[idx] = 1;
        if (evalRho(a, z) <= 0.0) inA[idx] = 1;
        if (evalRho(b, z) <= 0.0) inB[idx] = 1;
    }

    long strideBase = 1;
    std::vector<long> strides(dims);
    for (int i = 0; i < dims; ++i) {
        strides[i] = strideBase;
        strideBase *= perDim;
    }
    auto axisPos = [&](long idx, int axis) {
        return (idx / strides[axis]) % perDim;
    };

    auto boundaryOf = [&](const std::vector<signed char>& S) {
        std::vector<long> out;
        for (long idx = 0; idx < total; ++idx) {
            if (!S[idx]) continue;
            bool edge = false;
            for (int axis = 0; axis < dims && !edge; ++axis) {
                const long pos = axisPos(idx, axis);
                if (pos == 0 || pos == perDim - 1)
                    edge = true;
                else if (!S[idx - strides[axis]] || !S[idx + strides[axis]])
                    edge = true;
            }
            if (edge) out.push_back(idx);
        }
        return out;
    };

    bool emptyA = true, emptyB = true;
    for (long idx = 0; idx < total; ++idx) {
        if (inA[idx]) emptyA = false;
        if (inB[idx]) emptyB = false;
    }
    if (emptyA && emptyB) return {0.0, step, true};
    if (emptyA || emptyB) return {2.0 * radius, step, false};

    auto oneSided = [&](const std::vector<signed char>& S,
                        const std::vector<signed char>& T) {
        const auto edgeT = boundaryOf(T);
        double worst = 0.0;
        for (long idx = 0; idx < total; ++idx) {
            if (!S[idx] || T[idx]) continue;
            const Point z = coords(idx);
            double best = 1e300;
            for (const long tIdx : edgeT) {
                const Point w = coords(tIdx);
                double d2 = 0.0;
                for (int i = 0; i < n; ++i) d2 += std::norm(z[i] - w[i]);
                best = std::min(best, d2);
            }
            worst = std::max(worst, std::sqrt(best));
        }
        return worst;
    };

    LocalHausdorff out;
    out.pitch = step;
    out.value = std::max(oneSided(inA, inB), oneSided(inB, inA));
    return out;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void writePoint(std::ostringstream& os, const Point& p) {
    os << '[';
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) os << ',';
        os << '[' << fmt17(p[i].real()) << ',' << fmt17(p[i].imag()) << ']';
    }
    os << ']';
}

void writeIndex(std::ostringstream& os, const MultiIndex& a) {
    os << '[';
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ',';
        os << a[i];
    }
    os << ']';
}

void writePolyZ(std::ostringstream& os, const PolyZ& p) {
    os << '[';
    bool first = true;
    for (const auto& [alpha, c] : p.terms()) {
        if (!first) os << ',';
        first = false;
        os << "{\"re\":" << fmt17(c.real()) << ",\"im\":" << fmt17(c.imag())
           << ",\"exp\":";
        writeIndex(os, alpha);
        os << '}';
    }
    os << ']';
}

void writeZZbar(std::ostringstream& os, const ZZbarPoly& p) {
    os << '[';
    bool first = true;
    for (const auto& [key, c] : p.terms()) {
        if (!first) os << ',';
        first = false;
        os << "{\"re\":" << fmt17(c.real()) << ",\"im\":" << fmt17(c.imag())
           << ",\"z\":";
        writeIndex(os, key.first);
        os << ",\"zbar\":";
        writeIndex(os, key.second);
        os << '}';
    }
    os << ']';
}

void writeDomain(std::ostringstream& os, const Domain& d) {
    os << "{\"n\":" << d.n << ",\"class\":\"" << to_string(d.classTag)
       << "\",";
    if (d.declaredType)
        os << "\"type\":" << *d.declaredType << ',';
    os << "\"bounding_radius\":" << fmt17(d.boundingRadius)
       << ",\"base_point\":";
    writePoint(os, d.basePoint);
    os << ",\"terms\":";
    writeZZbar(os, d.rho);
    os << '}';
}

}  // namespace

std::string scalingRunToJson(const ScalingRun& run) {
    std::ostringstream os;
    os << "{\"base\":";
    writeDomain(os, run.base);
    os << ",\"boundary_point\":";
    writePoint(os, run.boundaryPoint);
    os << ",\"limit_model\":";
    if (run.limitModel)
        writeDomain(os, *run.limitModel);
    else
        os << "null";
    os << ",\"entries\":[";
    for (size_t e = 0; e < run.entries.size(); ++e) {
        const auto& en = run.entries[e];
        if (e) os << ',';
        os << "{\"j\":" << en.j << ",\"p\":";
        writePoint(os, en.p);
        os << ",\"center\":";
        writePoint(os, en.center);
        os << ",\"scales\":[";
        for (size_t i = 0; i < en.scales.size(); ++i) {
            if (i) os << ',';
            os << fmt17(en.scales[i]);
        }
        os << "],\"image\":";
        writePoint(os, en.image);
        os << ",\"map\":{\"kind\":\"" << en.map.kind() << "\",\"forward\":[";
        for (int i = 0; i < en.map.n(); ++i) {
            if (i) os << ',';
            writePolyZ(os, en.map.forward()[i]);
        }
        os << "],\"inverse\":[";
        for (int i = 0; i < en.map.n(); ++i) {
            if (i) os << ',';
            writePolyZ(os, en.map.inverse()[i]);
        }
        os << "]},\"scaled_rho\":";
        writeZZbar(os, en.scaled.rho);
        os << '}';
    }
    os << "]}";
    return os.str();
}

}  // namespace holokit
