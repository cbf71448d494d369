#include "holokit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace holokit {

namespace {

double norm2(const Point& z) {
    double s = 0.0;
    for (const auto& zi : z) s += std::norm(zi);
    return s;
}

/// Real gradient of rho in R^{2n} coordinates (x_1, y_1, ..., x_n, y_n).
std::vector<double> realGradient(const Domain& d, const Point& z) {
    std::vector<double> g(2 * d.n);
    for (int i = 0; i < d.n; ++i) {
        const cplx gi = d.rho.wirtingerZ(i).eval(z);
        g[2 * i] = 2.0 * gi.real();
        g[2 * i + 1] = -2.0 * gi.imag();
    }
    return g;
}

Point fromReal(const std::vector<double>& x, int n) {
    Point z(n);
    for (int i = 0; i < n; ++i) z[i] = cplx(x[2 * i], x[2 * i + 1]);
    return z;
}

std::vector<double> toReal(const Point& z) {
    std::vector<double> x(2 * z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        x[2 * i] = z[i].real();
        x[2 * i + 1] = z[i].imag();
    }
    return x;
}

bool solveLinear(std::vector<std::vector<double>>& A, std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-14) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < n; ++i) b[i] /= A[i][i];
    return true;
}

/// Root of rho along z + t*dir, bracketing outward from t=0; returns t or
/// a negative value when no crossing occurs inside the bounding ball.
double rayRoot(const Domain& d, const Point& z, const std::vector<double>& dir) {
    const auto at = [&](double t) {
        Point w(d.n);
        for (int i = 0; i < d.n; ++i)
            w[i] = z[i] + t * cplx(dir[2 * i], dir[2 * i + 1]);
        return w;
    };
    const double r0 = std::sqrt(norm2(z));
    const double tMax = d.boundingRadius + r0 + 1.0;
    double lo = 0.0, hi = 0.0;
    double step = 1e-3;
    while (hi < tMax) {
        hi = std::min(lo + step, tMax);
        if (evalRho(d, at(hi)) >= 0.0) break;
        lo = hi;
        step *= 2.0;
    }
    if (evalRho(d, at(hi)) < 0.0) return -1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (evalRho(d, at(mid)) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * (1.0 + hi)) break;
    }
    // polish on |rho| directly
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 60 && std::abs(evalRho(d, at(t))) > 1e-12; ++it) {
        if (evalRho(d, at(t)) < 0.0)
            lo = t;
        else
            hi = t;
        t = 0.5 * (lo + hi);
    }
    return t;
}

}  // namespace

std::string to_string(DomainClass c) {
    switch (c) {
        case DomainClass::StronglyPseudoconvex: return "strongly_pseudoconvex";
        case DomainClass::FiniteType2D: return "finite_type_2d";
        case DomainClass::ConvexFiniteType: return "convex_finite_type";
        case DomainClass::PolynomialModel: return "polynomial_model";
        case DomainClass::Polyhedron: return "polyhedron";
        case DomainClass::Generic: return "generic";
    }
    return "generic";
}

DomainClass domainClassFromString(const std::string& s) {
    if (s == "strongly_pseudoconvex") return DomainClass::StronglyPseudoconvex;
    if (s == "finite_type_2d") return DomainClass::FiniteType2D;
    if (s == "convex_finite_type") return DomainClass::ConvexFiniteType;
    if (s == "polynomial_model") return DomainClass::PolynomialModel;
    if (s == "polyhedron") return DomainClass::Polyhedron;
    if (s == "generic") return DomainClass::Generic;
    throw Error("unknown domain class: " + s);
}

void Domain::validate() const {
    if (rho.nvars() != n) throw Error("Domain: rho arity != n");
    if (!rho.isReal(1e-12)) {
        // name one offending term for the error message
        for (const auto& [k, c] : rho.terms()) {
            const cplx mirror = rho.coefficient(k.second, k.first);
            if (std::abs(mirror - std::conj(c)) >
                1e-12 * std::max(1.0, rho.maxAbsCoefficient())) {
                std::ostringstream os;
                os << "Domain: reality violated at term alpha=(";
                for (int a : k.first) os << a << " ";
                os << ") beta=(";
                for (int b : k.second) os << b << " ";
                os << ")";
                throw Error(os.str());
            }
        }
        throw Error("Domain: reality violated");
    }
    if (basePoint.empty()) throw Error("Domain: missing base point");
    if (static_cast<int>(basePoint.size()) != n)
        throw Error("Domain: base point arity mismatch");
    if (evalRho(*this, basePoint) >= 0.0)
        throw Error("Domain: base point is not interior (rho >= 0)");
    if (declaredType && (*declaredType < 2 || *declaredType % 2 != 0))
        throw Error("Domain: declaredType must be an even integer >= 2");
    if (classTag == DomainClass::PolynomialModel) {
        // structural check: rho = 2 Re z_n + P('z, 'zbar)
        MultiIndex en(n, 0), zero(n, 0);
        en[n - 1] = 1;
        ZZbarPoly rest = rho;
        rest.addTerm(en, zero, cplx(-1.0, 0.0));
        rest.addTerm(zero, en, cplx(-1.0, 0.0));
        for (const auto& [k, c] : rest.terms())
            if (k.first[n - 1] != 0 || k.second[n - 1] != 0)
                throw Error("Domain: PolynomialModel must be 2Re z_n + P('z)");
    }
}

bool Domain::isPlurisubharmonicCertified() const {
    switch (classTag) {
        case DomainClass::StronglyPseudoconvex:
        case DomainClass::FiniteType2D:
        case DomainClass::ConvexFiniteType:
        case DomainClass::PolynomialModel:
            return true;
        default:
            return false;
    }
}

double evalRho(const Domain& d, const Point& z) {
    for (const auto& zi : z)
        if (!std::isfinite(zi.real()) || !std::isfinite(zi.imag()))
            throw Error("evalRho: non-finite point");
    return d.rho.evalReal(z, 1e-12);
}

std::vector<cplx> wirtingerGradient(const Domain& d, const Point& z) {
    std::vector<cplx> g(d.n);
    for (int i = 0; i < d.n; ++i) g[i] = d.rho.wirtingerZ(i).eval(z);
    return g;
}

BoundaryDistanceResult boundaryDistance(const Domain& d, const Point& z) {
    if (evalRho(d, z) >= 0.0)
        throw Error("boundaryDistance: point is not interior");
    const int dim = 2 * d.n;

    // seed from the outward normal ray
    std::vector<double> g = realGradient(d, z);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    std::vector<double> seedDir(dim, 0.0);
    if (gn > 1e-12)
        for (int i = 0; i < dim; ++i) seedDir[i] = g[i] / gn;
    else
        seedDir[0] = 1.0;

    double bestT = rayRoot(d, z, seedDir);
    std::vector<double> bestDir = seedDir;
    std::string method = "newton";

    if (bestT < 0.0) method = "sampled";

    // Newton on the Lagrange system: 2(w-z) + lam*grad rho(w) = 0, rho(w)=0
    auto tryNewton = [&](double t0, const std::vector<double>& dir,
                         BoundaryDistanceResult& out) -> bool {
        std::vector<double> x = toReal(z);
        for (int i = 0; i < dim; ++i) x[i] += t0 * dir[i];
        std::vector<double> gb = realGradient(d, fromReal(x, d.n));
        double gb2 = 0.0;
        for (double v : gb) gb2 += v * v;
        if (gb2 < 1e-18) return false;
        double lam = 2.0 * t0 / std::sqrt(gb2);
        const std::vector<double> zr = toReal(z);
        for (int it = 0; it < 60; ++it) {
            const Point w = fromReal(x, d.n);
            const double rv = evalRho(d, w);
            const std::vector<double> gr = realGradient(d, w);
            std::vector<double> F(dim + 1);
            double res = std::abs(rv);
            for (int i = 0; i < dim; ++i) {
                F[i] = 2.0 * (x[i] - zr[i]) + lam * gr[i];
                res = std::max(res, std::abs(F[i]));
            }
            F[dim] = rv;
            if (res < 1e-11) {
                out.foot = w;
                double dd = 0.0;
                for (int i = 0; i < dim; ++i)
                    dd += (x[i] - zr[i]) * (x[i] - zr[i]);
                out.distance = std::sqrt(dd);
                out.method = "newton";
                return std::abs(rv) <= 1e-10;
            }
            // Jacobian: FD of the gradient for the Hessian block
            std::vector<std::vector<double>> J(dim + 1,
                                               std::vector<double>(dim + 1));
            const double h = 1e-6;
            for (int j = 0; j < dim; ++j) {
                std::vector<double> xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const auto gp = realGradient(d, fromReal(xp, d.n));
                const auto gm = realGradient(d, fromReal(xm, d.n));
                for (int i = 0; i < dim; ++i)
                    J[i][j] = (i == j ? 2.0 : 0.0) +
                              lam * (gp[i] - gm[i]) / (2.0 * h);
                J[dim][j] = gr[j];
            }
            for (int i = 0; i < dim; ++i) J[i][dim] = gr[i];
            J[dim][dim] = 0.0;
            std::vector<double> rhs = F;
            for (double& v : rhs) v = -v;
            if (!solveLinear(J, rhs)) return false;
            double stepNorm = 0.0;
            for (int i = 0; i < dim; ++i) {
                x[i] += rhs[i];
                stepNorm = std::max(stepNorm, std::abs(rhs[i]));
            }
            lam += rhs[dim];
            if (stepNorm > 10.0 * (1.0 + t0)) return false;  // diverged
        }
        return false;
    };

    BoundaryDistanceResult result;
    if (bestT > 0.0 && tryNewton(bestT, seedDir, result)) {
        // the Newton foot must not be farther than the seed crossing
        if (result.distance <= bestT * (1.0 + 1e-8)) return result;
    }

    // fallback: deterministic direction sweep + compass refinement
    method = "sampled";
    const int samples = 400;
    bestT = -1.0;
    for (int s = 0; s < samples; ++s) {
        // low-discrepancy-ish direction on S^{2n-1}
        std::vector<double> dir(dim);
        double nrm = 0.0;
        uint64_t h = 0x9e3779b97f4a7c15ULL * (s + 1);
        for (int i = 0; i < dim; ++i) {
            h ^= h >> 33;
            h *= 0xff51afd7ed558ccdULL;
            h ^= h >> 33;
            dir[i] = 2.0 * (static_cast<double>(h % 1000003) / 1000003.0) - 1.0;
            nrm += dir[i] * dir[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-9) continue;
        for (double& v : dir) v /= nrm;
        const double t = rayRoot(d, z, dir);
        if (t > 0.0 && (bestT < 0.0 || t < bestT)) {
            bestT = t;
            bestDir = dir;
        }
    }
    if (bestT < 0.0)
        throw Error("boundaryDistance: no boundary crossing inside bounding ball");

    // compass refinement on the direction
    double step = 0.2;
    while (step > 1e-9) {
        bool improved = false;
        for (int i = 0; i < dim; ++i) {
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> dir = bestDir;
                dir[i] += sgn * step;
                double nrm = 0.0;
                for (double v : dir) nrm += v * v;
                nrm = std::sqrt(nrm);
                for (double& v : dir) v /= nrm;
                const double t = rayRoot(d, z, dir);
                if (t > 0.0 && t < bestT) {
                    bestT = t;
                    bestDir = dir;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    result.distance = bestT;
    result.foot.resize(d.n);
    for (int i = 0; i < d.n; ++i)
        result.foot[i] = z[i] + bestT * cplx(bestDir[2 * i], bestDir[2 * i + 1]);
    result.method = method;
    return result;
}

// ------------------------------------------------------------- presets

namespace {
ZZbarPoly sumAbsSquares(int n, int from, int to) {
    ZZbarPoly p(n);
    for (int i = from; i < to; ++i)
        p = p + ZZbarPoly::absSquared(PolyZ::variable(n, i));
    return p;
}
}  // namespace

Domain presetBall(int n) {
    Domain d;
    d.n = n;
    d.rho = sumAbsSquares(n, 0, n) + ZZbarPoly::constant(n, -1.0);
    d.classTag = DomainClass::StronglyPseudoconvex;
    d.declaredType = 2;
    d.boundingRadius = 2.0;
    d.basePoint = Point(n, cplx(0.0, 0.0));
    d.validate();
    return d;
}

Domain presetPolydisc(int n) {
    Domain d;
    d.n = n;
    ZZbarPoly prod = ZZbarPoly::constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
        ZZbarPoly f = ZZbarPoly::constant(n, 1.0) -
                      ZZbarPoly::absSquared(PolyZ::variable(n, i));
        prod = prod * f;
    }
    d.rho = prod * (-1.0);
    d.classTag = DomainClass::Generic;
    // the product rho is also negative past the corners (two or more
    // factors negative); the bounding ball stays below that region
    d.boundingRadius = n == 1 ? 2.0 : 0.999 * std::sqrt(2.0);
    d.basePoint = Point(n, cplx(0.0, 0.0));
    d.validate();
    return d;
}

Domain presetSiegel(int n) {
    Domain d;
    d.n = n;
    d.rho = ZZbarPoly::twoRe(PolyZ::variable(n, n - 1)) +
            sumAbsSquares(n, 0, n - 1);
    d.classTag = DomainClass::PolynomialModel;
    d.declaredType = 2;
    d.boundingRadius = 10.0;
    d.basePoint = Point(n, cplx(0.0, 0.0));
    d.basePoint[n - 1] = cplx(-1.0, 0.0);
    d.validate();
    return d;
}

Domain presetHalfplane() {
    Domain d;
    d.n = 1;
    d.rho = ZZbarPoly::twoRe(PolyZ::variable(1, 0));
    d.classTag = DomainClass::PolynomialModel;
    d.declaredType = 2;
    d.boundingRadius = 10.0;
    d.basePoint = {cplx(-1.0, 0.0)};
    d.validate();
    return d;
}

Domain presetThullenModel(int m) {
    if (m < 1) throw Error("thullen_model: m >= 1 required");
    Domain d;
    d.n = 2;
    PolyZ z1 = PolyZ::variable(2, 0);
    d.rho = ZZbarPoly::twoRe(PolyZ::variable(2, 1)) +
            ZZbarPoly::absSquared(z1.pow(m));
    d.classTag = DomainClass::PolynomialModel;
    d.declaredType = 2 * m;
    d.boundingRadius = 10.0;
    d.basePoint = {cplx(0.0, 0.0), cplx(-1.0, 0.0)};
    d.validate();
    return d;
}

Domain presetEgg(int m) {
    if (m < 1) throw Error("egg: m >= 1 required");
    Domain d;
    d.n = 2;
    PolyZ z1 = PolyZ::variable(2, 0);
    d.rho = ZZbarPoly::absSquared(z1.pow(m)) +
            ZZbarPoly::absSquared(PolyZ::variable(2, 1)) +
            ZZbarPoly::constant(2, -1.0);
    d.classTag = DomainClass::FiniteType2D;
    d.declaredType = 2 * m;
    d.boundingRadius = 2.0;
    d.basePoint = {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    d.validate();
    return d;
}

Domain presetEggChart(int m) {
    if (m < 1) throw Error("egg_chart: m >= 1 required");
    Domain d;
    d.n = 2;
    PolyZ z1 = PolyZ::variable(2, 0);
    PolyZ z2 = PolyZ::variable(2, 1);
    d.rho = ZZbarPoly::twoRe(z2) + ZZbarPoly::absSquared(z2) +
            ZZbarPoly::absSquared(z1.pow(m));
    d.classTag = DomainClass::FiniteType2D;
    d.declaredType = 2 * m;
    d.boundingRadius = 4.0;
    d.basePoint = {cplx(0.0, 0.0), cplx(-1.0, 0.0)};
    d.validate();
    return d;
}

Domain presetConvexEgg(int m) {
    Domain d = presetEgg(m);
    d.classTag = DomainClass::ConvexFiniteType;
    return d;
}

Domain presetPerturbedBall(int k, double bump) {
    if (k < 1) throw Error("perturbed_ball: k >= 1 required");
    Domain d;
    d.n = 2;
    PolyZ z1 = PolyZ::variable(2, 0);
    // pluriharmonic bump: Levi form stays the identity for every k
    d.rho = sumAbsSquares(2, 0, 2) + ZZbarPoly::constant(2, -1.0) +
            ZZbarPoly::twoRe(z1 * z1) * (bump / static_cast<double>(k));
    d.classTag = DomainClass::StronglyPseudoconvex;
    d.declaredType = 2;
    d.boundingRadius = 2.5;
    d.basePoint = Point(2, cplx(0.0, 0.0));
    d.validate();
    return d;
}

Domain presetDomain(const std::string& spec) {
    std::string s = spec;
    if (s.rfind("preset:", 0) == 0) s = s.substr(7);
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw Error("empty preset spec");
    const std::string& name = parts[0];
    auto argInt = [&](size_t i, int dflt) {
        return parts.size() > i ? std::stoi(parts[i]) : dflt;
    };
    if (name == "ball") return presetBall(argInt(1, 2));
    if (name == "polydisc") return presetPolydisc(argInt(1, 2));
    if (name == "siegel") return presetSiegel(argInt(1, 2));
    if (name == "halfplane") return presetHalfplane();
    if (name == "thullen_model") return presetThullenModel(argInt(1, 2));
    if (name == "egg") return presetEgg(argInt(1, 2));
    if (name == "egg_chart") return presetEggChart(argInt(1, 2));
    if (name == "convex_egg") return presetConvexEgg(argInt(1, 2));
    if (name == "perturbed_ball") {
        const int k = argInt(1, 4);
        const double b = parts.size() > 2 ? std::stod(parts[2]) : 0.1;
        return presetPerturbedBall(k, b);
    }
    throw Error("unknown preset: " + name);
}

// ---------------------------------------------------------------- JSON

std::string domainToJson(const Domain& d) {
    nlohmann::json j;
    j["n"] = d.n;
    j["class"] = to_string(d.classTag);
    if (d.declaredType) j["type"] = *d.declaredType;
    j["bounding_radius"] = d.boundingRadius;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : d.rho.terms()) {
        nlohmann::json t;
        t["re"] = c.real();
        t["im"] = c.imag();
        t["z"] = k.first;
        t["zbar"] = k.second;
        terms.push_back(t);
    }
    j["terms"] = terms;
    nlohmann::json bp = nlohmann::json::array();
    for (const auto& p : d.basePoint)
        bp.push_back(nlohmann::json::array({p.real(), p.imag()}));
    j["base_point"] = bp;
    return j.dump(2);
}

Domain domainFromJson(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("domain spec parse error: ") + e.what());
    }
    Domain d;
    if (!j.contains("n")) throw Error("domain spec: missing n");
    d.n = j["n"].get<int>();
    d.rho = ZZbarPoly(d.n);
    d.classTag = j.contains("class")
                     ? domainClassFromString(j["class"].get<std::string>())
                     : DomainClass::Generic;
    if (j.contains("type")) d.declaredType = j["type"].get<int>();
    if (j.contains("bounding_radius"))
        d.boundingRadius = j["bounding_radius"].get<double>();
    if (!j.contains("terms")) throw Error("domain spec: missing terms");
    for (const auto& t : j["terms"]) {
        MultiIndex a = t["z"].get<MultiIndex>();
        MultiIndex b = t["zbar"].get<MultiIndex>();
        d.rho.addTerm(a, b, cplx(t["re"].get<double>(), t["im"].get<double>()));
    }
    if (!j.contains("base_point")) throw Error("domain spec: missing base point");
    for (const auto& p : j["base_point"])
        d.basePoint.push_back(cplx(p[0].get<double>(), p[1].get<double>()));
    d.validate();
    return d;
}

Domain parseDomainSpec(const std::string& text) {
    // preset strings have no braces
    const auto firstNonSpace = text.find_first_not_of(" \t\r\n");
    if (firstNonSpace != std::string::npos && text[firstNonSpace] == '{')
        return domainFromJson(text);
    return presetDomain(text);
}

}  // namespace holokit
