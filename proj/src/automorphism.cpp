#include "holokit/automorphism.hpp"

#include <cmath>
#include <random>

namespace holokit {

PolyAutomorphism::PolyAutomorphism(std::vector<PolyZ> fwd,
                                   std::vector<PolyZ> inv, std::string kind)
    : forward_(std::move(fwd)), inverse_(std::move(inv)),
      kind_(std::move(kind)) {
    if (forward_.size() != inverse_.size() || forward_.empty())
        throw Error("PolyAutomorphism: arity mismatch");
}

PolyAutomorphism PolyAutomorphism::identity(int n) {
    std::vector<PolyZ> id;
    for (int i = 0; i < n; ++i) id.push_back(PolyZ::variable(n, i));
    return PolyAutomorphism(id, id, "identity");
}

PolyAutomorphism PolyAutomorphism::translation(const Point& t) {
    const int n = static_cast<int>(t.size());
    std::vector<PolyZ> fwd, inv;
    for (int i = 0; i < n; ++i) {
        fwd.push_back(PolyZ::variable(n, i) + PolyZ::constant(n, t[i]));
        inv.push_back(PolyZ::variable(n, i) + PolyZ::constant(n, -t[i]));
    }
    return PolyAutomorphism(fwd, inv, "translation");
}

PolyAutomorphism PolyAutomorphism::linear(
    const std::vector<std::vector<cplx>>& A) {
    const int n = static_cast<int>(A.size());
    const auto B = invertMatrix(A);
    std::vector<PolyZ> fwd, inv;
    for (int i = 0; i < n; ++i) {
        PolyZ f(n), g(n);
        for (int j = 0; j < n; ++j) {
            f = f + PolyZ::variable(n, j) * A[i][j];
            g = g + PolyZ::variable(n, j) * B[i][j];
        }
        fwd.push_back(f);
        inv.push_back(g);
    }
    return PolyAutomorphism(fwd, inv, "linear");
}

PolyAutomorphism PolyAutomorphism::dilation(const std::vector<cplx>& s) {
    const int n = static_cast<int>(s.size());
    std::vector<PolyZ> fwd, inv;
    for (int i = 0; i < n; ++i) {
        if (std::abs(s[i]) < 1e-300) throw Error("dilation: zero scale");
        fwd.push_back(PolyZ::variable(n, i) * s[i]);
        inv.push_back(PolyZ::variable(n, i) * (cplx(1.0, 0.0) / s[i]));
    }
    return PolyAutomorphism(fwd, inv, "dilation");
}

PolyAutomorphism PolyAutomorphism::shearLast(const PolyZ& q) {
    const int n = q.nvars();
    for (const auto& [a, c] : q.terms())
        if (a[n - 1] != 0) throw Error("shearLast: q depends on z_n");
    std::vector<PolyZ> fwd, inv;
    for (int i = 0; i < n - 1; ++i) {
        fwd.push_back(PolyZ::variable(n, i));
        inv.push_back(PolyZ::variable(n, i));
    }
    fwd.push_back(PolyZ::variable(n, n - 1) + q);
    inv.push_back(PolyZ::variable(n, n - 1) - q);
    return PolyAutomorphism(fwd, inv, "shear");
}

Point PolyAutomorphism::apply(const Point& z) const {
    Point w(forward_.size());
    for (size_t i = 0; i < forward_.size(); ++i) w[i] = forward_[i].eval(z);
    return w;
}

Point PolyAutomorphism::applyInverse(const Point& w) const {
    Point z(inverse_.size());
    for (size_t i = 0; i < inverse_.size(); ++i) z[i] = inverse_[i].eval(w);
    return z;
}

PolyAutomorphism PolyAutomorphism::after(const PolyAutomorphism& other) const {
    if (n() != other.n()) throw Error("compose: arity mismatch");
    std::vector<PolyZ> fwd, inv;
    for (const auto& f : forward_) fwd.push_back(f.compose(other.forward_));
    for (const auto& g : other.inverse_) inv.push_back(g.compose(inverse_));
    return PolyAutomorphism(fwd, inv, other.kind_ + ";" + kind_);
}

PolyAutomorphism PolyAutomorphism::inverted() const {
    return PolyAutomorphism(inverse_, forward_, kind_ + "^-1");
}

double PolyAutomorphism::inverseResidual(double radius, int samples,
                                         unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Point z(n());
        for (auto& zi : z) zi = cplx(u(rng), u(rng));
        const Point back = applyInverse(apply(z));
        for (int i = 0; i < n(); ++i)
            worst = std::max(worst, std::abs(back[i] - z[i]));
    }
    return worst;
}

Domain PolyAutomorphism::pushforward(const Domain& d) const {
    if (d.n != n()) throw Error("pushforward: arity mismatch");
    Domain out = d;
    out.rho = d.rho.composeHolomorphic(inverse_).symmetrized();
    out.basePoint = apply(d.basePoint);
    // conservative bounding radius from forward images of the old ball
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double maxImage = 0.0;
    for (int s = 0; s < 200; ++s) {
        Point z(n());
        double nrm = 0.0;
        for (auto& zi : z) {
            zi = cplx(u(rng), u(rng));
            nrm += std::norm(zi);
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-9) continue;
        for (auto& zi : z) zi *= d.boundingRadius / nrm;
        double r = 0.0;
        for (const auto& wi : apply(z)) r += std::norm(wi);
        maxImage = std::max(maxImage, std::sqrt(r));
    }
    out.boundingRadius = std::max(1.0, 1.5 * maxImage);
    return out;
}

std::vector<std::vector<cplx>> invertMatrix(
    const std::vector<std::vector<cplx>>& A) {
    const int n = static_cast<int>(A.size());
    std::vector<std::vector<cplx>> M = A, I(n, std::vector<cplx>(n, 0.0));
    for (int i = 0; i < n; ++i) I[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-14)
            throw Error("invertMatrix: singular matrix");
        std::swap(M[piv], M[col]);
        std::swap(I[piv], I[col]);
        const cplx p = M[col][col];
        for (int c = 0; c < n; ++c) {
            M[col][c] /= p;
            I[col][c] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = M[r][col];
            if (f == cplx(0.0)) continue;
            for (int c = 0; c < n; ++c) {
                M[r][c] -= f * M[col][c];
                I[r][c] -= f * I[col][c];
            }
        }
    }
    return I;
}

}  // namespace holokit
