#ifndef HOLOKIT_POLYNOMIAL_HPP
#define HOLOKIT_POLYNOMIAL_HPP

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace holokit {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Holomorphic polynomial in m complex variables, sparse monomial map.
class PolyZ {
public:
    using TermMap = std::map<MultiIndex, cplx>;

    explicit PolyZ(int nvars = 1) : nvars_(nvars) {}

    static PolyZ constant(int nvars, cplx c);
    static PolyZ variable(int nvars, int i);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    int degree() const;

    void addTerm(const MultiIndex& alpha, cplx c);
    cplx coefficient(const MultiIndex& alpha) const;

    cplx eval(std::span<const cplx> z) const;

    PolyZ operator+(const PolyZ& o) const;
    PolyZ operator-(const PolyZ& o) const;
    PolyZ operator*(const PolyZ& o) const;
    PolyZ operator*(cplx s) const;
    PolyZ operator-() const { return *this * cplx(-1.0, 0.0); }

    /// d/dz_i
    PolyZ derivative(int i) const;

    /// Substitute z_i -> f_i(w); all f_i share the same variable count.
    PolyZ compose(const std::vector<PolyZ>& f) const;

    /// Polynomial with conjugated coefficients; represents conj(p)(wbar)
    /// read as a polynomial in wbar.
    PolyZ conjugateCoefficients() const;

    PolyZ pow(int k) const;

    double maxAbsCoefficient() const;

private:
    void prune();
    int nvars_;
    TermMap terms_;
};

/// Real-valued (when well formed) polynomial in (z, zbar) on C^n.
/// Houses every defining function in the toolkit.
class ZZbarPoly {
public:
    using Key = std::pair<MultiIndex, MultiIndex>;
    using TermMap = std::map<Key, cplx>;

    explicit ZZbarPoly(int nvars = 1) : nvars_(nvars) {}

    static ZZbarPoly constant(int nvars, double c);
    /// 2 Re p(z)
    static ZZbarPoly twoRe(const PolyZ& p);
    /// |p(z)|^2
    static ZZbarPoly absSquared(const PolyZ& p);
    /// p(z) * conj(q(z))
    static ZZbarPoly holoTimesAntiholo(const PolyZ& p, const PolyZ& q);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    int degree() const;

    void addTerm(const MultiIndex& alpha, const MultiIndex& beta, cplx c);
    cplx coefficient(const MultiIndex& alpha, const MultiIndex& beta) const;

    cplx eval(std::span<const cplx> z) const;
    /// Evaluates and checks the imaginary part against `imagTol`.
    double evalReal(std::span<const cplx> z, double imagTol = 1e-12) const;

    ZZbarPoly operator+(const ZZbarPoly& o) const;
    ZZbarPoly operator-(const ZZbarPoly& o) const;
    ZZbarPoly operator*(const ZZbarPoly& o) const;
    ZZbarPoly operator*(double s) const;

    /// d/dz_i (Wirtinger)
    ZZbarPoly wirtingerZ(int i) const;
    /// d/dzbar_i
    ZZbarPoly wirtingerZbar(int i) const;

    /// Substitute z -> f(w), zbar -> conj(f)(wbar) for a holomorphic
    /// polynomial map f : C^m -> C^n.
    ZZbarPoly composeHolomorphic(const std::vector<PolyZ>& f) const;

    /// Reality: every (alpha, beta, c) is matched by (beta, alpha, conj c).
    bool isReal(double tol = 1e-12) const;
    /// Symmetrize to the nearest real polynomial and drop negligible terms.
    ZZbarPoly symmetrized() const;

    double maxAbsCoefficient() const;

    /// Terms with total degree in (z_1, zbar_1) equal to l and no other
    /// variables present (used by the finite-type expansions, n >= 1).
    ZZbarPoly homogeneousPartInFirstVar(int l) const;

    /// Terms where every variable other than the first has exponent zero.
    ZZbarPoly firstVarOnlyPart() const;

    /// Drop harmonic monomials z_1^l and zbar_1^l (pure powers of the
    /// first variable).
    ZZbarPoly withoutFirstVarHarmonics() const;

    /// Total-degree-d part.
    ZZbarPoly gradedPart(int d) const;

    std::string str() const;

private:
    void prune();
    int nvars_;
    TermMap terms_;
};

}  // namespace holokit

#endif
