#include "holokit/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace holokit {

namespace {
constexpr double kPruneTol = 0.0;  // exact zeros only; callers symmetrize

cplx powInt(cplx z, int k) {
    cplx r(1.0, 0.0);
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

int indexDegree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}
}  // namespace

// ---------------------------------------------------------------- PolyZ

PolyZ PolyZ::constant(int nvars, cplx c) {
    PolyZ p(nvars);
    p.addTerm(MultiIndex(nvars, 0), c);
    return p;
}

PolyZ PolyZ::variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw Error("PolyZ::variable: index out of range");
    PolyZ p(nvars);
    MultiIndex a(nvars, 0);
    a[i] = 1;
    p.addTerm(a, cplx(1.0, 0.0));
    return p;
}

int PolyZ::degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, indexDegree(a));
    return d;
}

void PolyZ::addTerm(const MultiIndex& alpha, cplx c) {
    if (static_cast<int>(alpha.size()) != nvars_)
        throw Error("PolyZ::addTerm: multi-index arity mismatch");
    auto& slot = terms_[alpha];
    slot += c;
    if (std::abs(slot) <= kPruneTol) terms_.erase(alpha);
}

cplx PolyZ::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

cplx PolyZ::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != nvars_)
        throw Error("PolyZ::eval: arity mismatch");
    cplx acc(0.0, 0.0);
    for (const auto& [a, c] : terms_) {
        cplx m = c;
        for (int i = 0; i < nvars_; ++i)
            if (a[i] > 0) m *= powInt(z[i], a[i]);
        acc += m;
    }
    return acc;
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
    PolyZ r = *this;
    for (const auto& [a, c] : o.terms_) r.addTerm(a, c);
    r.prune();
    return r;
}

PolyZ PolyZ::operator-(const PolyZ& o) const {
    PolyZ r = *this;
    for (const auto& [a, c] : o.terms_) r.addTerm(a, -c);
    r.prune();
    return r;
}

PolyZ PolyZ::operator*(const PolyZ& o) const {
    if (nvars_ != o.nvars_) throw Error("PolyZ::*: arity mismatch");
    PolyZ r(nvars_);
    for (const auto& [a, c] : terms_)
        for (const auto& [b, d] : o.terms_) {
            MultiIndex ab(nvars_);
            for (int i = 0; i < nvars_; ++i) ab[i] = a[i] + b[i];
            r.addTerm(ab, c * d);
        }
    r.prune();
    return r;
}

PolyZ PolyZ::operator*(cplx s) const {
    PolyZ r(nvars_);
    if (s == cplx(0.0, 0.0)) return r;
    for (const auto& [a, c] : terms_) r.addTerm(a, c * s);
    return r;
}

PolyZ PolyZ::derivative(int i) const {
    PolyZ r(nvars_);
    for (const auto& [a, c] : terms_) {
        if (a[i] == 0) continue;
        MultiIndex b = a;
        b[i] -= 1;
        r.addTerm(b, c * static_cast<double>(a[i]));
    }
    return r;
}

PolyZ PolyZ::compose(const std::vector<PolyZ>& f) const {
    if (static_cast<int>(f.size()) != nvars_)
        throw Error("PolyZ::compose: map arity mismatch");
    const int m = f.empty() ? 0 : f[0].nvars();
    for (const auto& fi : f)
        if (fi.nvars() != m) throw Error("PolyZ::compose: inconsistent map");
    PolyZ r(m);
    for (const auto& [a, c] : terms_) {
        PolyZ term = PolyZ::constant(m, c);
        for (int i = 0; i < nvars_; ++i)
            if (a[i] > 0) term = term * f[i].pow(a[i]);
        r = r + term;
    }
    r.prune();
    return r;
}

PolyZ PolyZ::conjugateCoefficients() const {
    PolyZ r(nvars_);
    for (const auto& [a, c] : terms_) r.addTerm(a, std::conj(c));
    return r;
}

PolyZ PolyZ::pow(int k) const {
    PolyZ r = PolyZ::constant(nvars_, cplx(1.0, 0.0));
    PolyZ base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

double PolyZ::maxAbsCoefficient() const {
    double m = 0.0;
    for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

void PolyZ::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

// ------------------------------------------------------------- ZZbarPoly

ZZbarPoly ZZbarPoly::constant(int nvars, double c) {
    ZZbarPoly p(nvars);
    p.addTerm(MultiIndex(nvars, 0), MultiIndex(nvars, 0), cplx(c, 0.0));
    return p;
}

ZZbarPoly ZZbarPoly::twoRe(const PolyZ& p) {
    ZZbarPoly r(p.nvars());
    MultiIndex zero(p.nvars(), 0);
    for (const auto& [a, c] : p.terms()) {
        r.addTerm(a, zero, c);
        r.addTerm(zero, a, std::conj(c));
    }
    r.prune();
    return r;
}

ZZbarPoly ZZbarPoly::absSquared(const PolyZ& p) {
    return holoTimesAntiholo(p, p);
}

ZZbarPoly ZZbarPoly::holoTimesAntiholo(const PolyZ& p, const PolyZ& q) {
    if (p.nvars() != q.nvars())
        throw Error("ZZbarPoly::holoTimesAntiholo: arity mismatch");
    ZZbarPoly r(p.nvars());
    for (const auto& [a, c] : p.terms())
        for (const auto& [b, d] : q.terms())
            r.addTerm(a, b, c * std::conj(d));
    r.prune();
    return r;
}

int ZZbarPoly::degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_)
        d = std::max(d, indexDegree(k.first) + indexDegree(k.second));
    return d;
}

void ZZbarPoly::addTerm(const MultiIndex& alpha, const MultiIndex& beta, cplx c) {
    if (static_cast<int>(alpha.size()) != nvars_ ||
        static_cast<int>(beta.size()) != nvars_)
        throw Error("ZZbarPoly::addTerm: multi-index arity mismatch");
    Key k{alpha, beta};
    auto& slot = terms_[k];
    slot += c;
    if (std::abs(slot) == 0.0) terms_.erase(k);
}

cplx ZZbarPoly::coefficient(const MultiIndex& alpha, const MultiIndex& beta) const {
    auto it = terms_.find({alpha, beta});
    return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

cplx ZZbarPoly::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != nvars_)
        throw Error("ZZbarPoly::eval: arity mismatch");
    cplx acc(0.0, 0.0);
    for (const auto& [k, c] : terms_) {
        cplx m = c;
        for (int i = 0; i < nvars_; ++i) {
            if (k.first[i] > 0) m *= powInt(z[i], k.first[i]);
            if (k.second[i] > 0) m *= powInt(std::conj(z[i]), k.second[i]);
        }
        acc += m;
    }
    return acc;
}

double ZZbarPoly::evalReal(std::span<const cplx> z, double imagTol) const {
    const cplx v = eval(z);
    const double scale = std::max(1.0, std::abs(v));
    if (std::abs(v.imag()) > imagTol * scale)
        throw Error("ZZbarPoly::evalReal: non-real value, |imag| = " +
                    std::to_string(std::abs(v.imag())));
    return v.real();
}

ZZbarPoly ZZbarPoly::operator+(const ZZbarPoly& o) const {
    ZZbarPoly r = *this;
    for (const auto& [k, c] : o.terms_) r.addTerm(k.first, k.second, c);
    r.prune();
    return r;
}

ZZbarPoly ZZbarPoly::operator-(const ZZbarPoly& o) const {
    ZZbarPoly r = *this;
    for (const auto& [k, c] : o.terms_) r.addTerm(k.first, k.second, -c);
    r.prune();
    return r;
}

ZZbarPoly ZZbarPoly::operator*(const ZZbarPoly& o) const {
    if (nvars_ != o.nvars_) throw Error("ZZbarPoly::*: arity mismatch");
    ZZbarPoly r(nvars_);
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) {
            MultiIndex a(nvars_), b(nvars_);
            for (int i = 0; i < nvars_; ++i) {
                a[i] = k1.first[i] + k2.first[i];
                b[i] = k1.second[i] + k2.second[i];
            }
            r.addTerm(a, b, c1 * c2);
        }
    r.prune();
    return r;
}

ZZbarPoly ZZbarPoly::operator*(double s) const {
    ZZbarPoly r(nvars_);
    if (s == 0.0) return r;
    for (const auto& [k, c] : terms_) r.addTerm(k.first, k.second, c * s);
    return r;
}

ZZbarPoly ZZbarPoly::wirtingerZ(int i) const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
        if (k.first[i] == 0) continue;
        MultiIndex a = k.first;
        a[i] -= 1;
        r.addTerm(a, k.second, c * static_cast<double>(k.first[i]));
    }
    return r;
}

ZZbarPoly ZZbarPoly::wirtingerZbar(int i) const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
        if (k.second[i] == 0) continue;
        MultiIndex b = k.second;
        b[i] -= 1;
        r.addTerm(k.first, b, c * static_cast<double>(k.second[i]));
    }
    return r;
}

ZZbarPoly ZZbarPoly::composeHolomorphic(const std::vector<PolyZ>& f) const {
    if (static_cast<int>(f.size()) != nvars_)
        throw Error("ZZbarPoly::composeHolomorphic: map arity mismatch");
    const int m = f.empty() ? 0 : f[0].nvars();
    ZZbarPoly r(m);
    for (const auto& [k, c] : terms_) {
        PolyZ hol = PolyZ::constant(m, c);
        PolyZ anti = PolyZ::constant(m, cplx(1.0, 0.0));
        for (int i = 0; i < nvars_; ++i) {
            if (k.first[i] > 0) hol = hol * f[i].pow(k.first[i]);
            if (k.second[i] > 0)
                anti = anti * f[i].conjugateCoefficients().pow(k.second[i]);
        }
        for (const auto& [a, ch] : hol.terms())
            for (const auto& [b, ca] : anti.terms()) r.addTerm(a, b, ch * ca);
    }
    r.prune();
    return r;
}

bool ZZbarPoly::isReal(double tol) const {
    const double scale = std::max(1.0, maxAbsCoefficient());
    for (const auto& [k, c] : terms_) {
        const cplx mirror = coefficient(k.second, k.first);
        if (std::abs(mirror - std::conj(c)) > tol * scale) return false;
    }
    return true;
}

ZZbarPoly ZZbarPoly::symmetrized() const {
    ZZbarPoly r(nvars_);
    const double scale = std::max(1.0, maxAbsCoefficient());
    for (const auto& [k, c] : terms_) {
        const cplx mirror = std::conj(coefficient(k.second, k.first));
        const cplx avg = 0.5 * (c + mirror);
        if (std::abs(avg) > 1e-14 * scale) r.addTerm(k.first, k.second, avg);
    }
    r.prune();
    return r;
}

double ZZbarPoly::maxAbsCoefficient() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

ZZbarPoly ZZbarPoly::homogeneousPartInFirstVar(int l) const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
        bool othersZero = true;
        for (int i = 1; i < nvars_; ++i)
            if (k.first[i] != 0 || k.second[i] != 0) othersZero = false;
        if (othersZero && k.first[0] + k.second[0] == l)
            r.addTerm(k.first, k.second, c);
    }
    return r;
}

ZZbarPoly ZZbarPoly::firstVarOnlyPart() const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
        bool othersZero = true;
        for (int i = 1; i < nvars_; ++i)
            if (k.first[i] != 0 || k.second[i] != 0) othersZero = false;
        if (othersZero) r.addTerm(k.first, k.second, c);
    }
    return r;
}

ZZbarPoly ZZbarPoly::withoutFirstVarHarmonics() const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_) {
        const bool pureZ = k.second == MultiIndex(nvars_, 0) && k.first[0] > 0;
        const bool pureZbar = k.first == MultiIndex(nvars_, 0) && k.second[0] > 0;
        if (pureZ || pureZbar) continue;
        r.addTerm(k.first, k.second, c);
    }
    return r;
}

ZZbarPoly ZZbarPoly::gradedPart(int d) const {
    ZZbarPoly r(nvars_);
    for (const auto& [k, c] : terms_)
        if (indexDegree(k.first) + indexDegree(k.second) == d)
            r.addTerm(k.first, k.second, c);
    return r;
}

std::string ZZbarPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() >= 0 ? "+" : "") << c.imag() << "i)";
        for (int i = 0; i < nvars_; ++i) {
            if (k.first[i] > 0) os << " z" << i + 1 << "^" << k.first[i];
            if (k.second[i] > 0) os << " zb" << i + 1 << "^" << k.second[i];
        }
    }
    if (first) os << "0";
    return os.str();
}

void ZZbarPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

}  // namespace holokit
