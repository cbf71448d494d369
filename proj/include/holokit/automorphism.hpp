#ifndef HOLOKIT_AUTOMORPHISM_HPP
#define HOLOKIT_AUTOMORPHISM_HPP

#include <string>
#include <vector>

#include "holokit/domain.hpp"

namespace holokit {

/// Polynomial automorphism of C^n with an explicit polynomial inverse.
/// Compositions keep both directions so pullbacks stay exact.
class PolyAutomorphism {
public:
    PolyAutomorphism() = default;
    PolyAutomorphism(std::vector<PolyZ> fwd, std::vector<PolyZ> inv,
                     std::string kind);

    static PolyAutomorphism identity(int n);
    static PolyAutomorphism translation(const Point& t);
    /// z -> A z for an invertible matrix A (row-major n x n).
    static PolyAutomorphism linear(const std::vector<std::vector<cplx>>& A);
    static PolyAutomorphism dilation(const std::vector<cplx>& scales);
    /// z_n -> z_n + q('z) with q independent of z_n; other coords fixed.
    static PolyAutomorphism shearLast(const PolyZ& q);

    int n() const { return static_cast<int>(forward_.size()); }
    const std::vector<PolyZ>& forward() const { return forward_; }
    const std::vector<PolyZ>& inverse() const { return inverse_; }
    const std::string& kind() const { return kind_; }

    Point apply(const Point& z) const;
    Point applyInverse(const Point& w) const;

    /// this after other: (this o other)(z) = this(other(z)).
    PolyAutomorphism after(const PolyAutomorphism& other) const;
    PolyAutomorphism inverted() const;

    /// Max |inv(fwd(z)) - z| over seeded random points in a ball.
    double inverseResidual(double radius, int samples, unsigned seed) const;

    /// Image domain {rho o inverse < 0}; base point is mapped forward.
    Domain pushforward(const Domain& d) const;

private:
    std::vector<PolyZ> forward_;
    std::vector<PolyZ> inverse_;
    std::string kind_;
};

/// Gaussian elimination inverse for small complex matrices; throws when
/// singular.
std::vector<std::vector<cplx>> invertMatrix(
    const std::vector<std::vector<cplx>>& A);

}  // namespace holokit

#endif
