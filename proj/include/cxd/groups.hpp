#pragma once

#include "cxd/lattice.hpp"

#include <stdexcept>

namespace cxd {

// Element kappa_24^p e^alpha of the central extension of (L^perp)^{+l}
// by <kappa_24>; the normal form (p mod 24, alpha) is unique.
struct GroupElement {
    int kappa = 0;  // exponent mod 24
    LatticeVector bar;

    GroupElement() = default;
    GroupElement(int p, LatticeVector v) : kappa(mod_norm(static_cast<long>(p), 24)), bar(std::move(v)) {}

    static GroupElement exp(LatticeVector v) { return GroupElement(0, std::move(v)); }
    static GroupElement kappa_pow(int p, size_t ell) { return GroupElement(p, LatticeVector::zero(ell)); }

    bool operator==(const GroupElement& o) const { return kappa == o.kappa && bar == o.bar; }

    std::string str() const { return "k^" + std::to_string(kappa) + " * e" + bar.str(); }
};

enum class ExtKind { untwisted, twisted };

// eps1(alpha, beta) = -6 sum_s m2^(s) n1^(s)  (mod 24); Z-bilinear.
inline int eps1(const LatticeVector& a, const LatticeVector& b) {
    if (a.ell() != b.ell()) throw std::invalid_argument("eps1: length mismatch");
    Int acc(0);
    for (size_t s = 0; s < a.ell(); ++s) acc += a.site(s)[1] * b.site(s)[0];
    return mod_norm(Int(-6 * acc), 24);
}

// c0 = eps1(a,b) - eps1(b,a), the untwisted commutator exponent.
inline int c0(const LatticeVector& a, const LatticeVector& b) { return mod_norm(static_cast<long>(eps1(a, b) - eps1(b, a)), 24); }

// eps0(alpha, beta) = 20 <nu^2 alpha, beta>  (mod 24) for the nu-twisted
// multiplication, nu = tau^tw; requires the pairing to be integral (true
// on a tau-invariant integral lattice).
inline int eps0(const LatticeVector& a, const LatticeVector& b, int tw = 1) {
    Rat p = inner_product(a.tau_pow(2 * tw), b);
    if (!is_integer(p)) throw std::domain_error("eps0: <nu^2 a, b> not integral");
    return mod_norm(Int(20 * num(p)), 24);
}

// c0_tau(alpha, beta) = 8 <nu alpha + 2 nu^2 alpha, beta>  (mod 24),
// nu = tau^tw.
inline int c0_tau(const LatticeVector& a, const LatticeVector& b, int tw = 1) {
    Rat p = inner_product(a.tau_pow(tw), b) + 2 * inner_product(a.tau_pow(2 * tw), b);
    Rat v = 8 * p;
    if (!is_integer(v)) throw std::domain_error("c0_tau: pairing not integral");
    return mod_norm(num(v), 24);
}

// Same form computed from the per-site coset data (the explicit formula on
// L_{CxD} for self-orthogonal D); used as a cross-check of c0_tau.
inline int c0_tau_explicit(const LatticeVector& a, const LatticeVector& b) {
    Int acc(0);
    for (size_t s = 0; s < a.ell(); ++s) {
        SiteCoset sa = decompose_site(a, s), sb = decompose_site(b, s);
        acc += Int(sa.i) * (-p_of(sb.x) + sb.m1 + sb.m2);
        acc += Int(sb.i) * (p_of(sa.x) - sa.m1 - sa.m2);
    }
    return mod_norm(Int(8 * acc), 24);
}

inline int cocycle(ExtKind kind, const LatticeVector& a, const LatticeVector& b, int tw = 1) {
    int e = eps1(a, b);
    if (kind == ExtKind::twisted) e -= eps0(a, b, tw);
    return mod_norm(static_cast<long>(e), 24);
}

inline GroupElement mult(ExtKind kind, const GroupElement& x, const GroupElement& y, int tw = 1) {
    return GroupElement(x.kappa + y.kappa + cocycle(kind, x.bar, y.bar, tw), x.bar + y.bar);
}

inline GroupElement inverse(ExtKind kind, const GroupElement& x, int tw = 1) {
    LatticeVector neg = -x.bar;
    int e = cocycle(kind, x.bar, neg, tw);
    return GroupElement(-x.kappa - e, std::move(neg));
}

inline GroupElement commutator(ExtKind kind, const GroupElement& a, const GroupElement& b, int tw = 1) {
    GroupElement ab = mult(kind, a, b, tw);
    GroupElement ba = mult(kind, b, a, tw);
    return mult(kind, ab, inverse(kind, ba, tw), tw);
}

// The order-3 lift of tau: e^{m1 bt1 + m2 bt2} maps to
// kappa_8^{3 m1^2 + 2 m2^2 + 6 m1 m2 - 2 m1} e^{tau(...)}, applied per
// site.  The same set map is an automorphism of both extensions.
inline GroupElement tau_lift(const GroupElement& x) {
    Int e8(0);
    for (size_t s = 0; s < x.bar.ell(); ++s) {
        const Int &m1 = x.bar.site(s)[0], &m2 = x.bar.site(s)[1];
        e8 += 3 * m1 * m1 + 2 * m2 * m2 + 6 * m1 * m2 - 2 * m1;
    }
    return GroupElement(x.kappa + 3 * mod_norm(e8, 8), x.bar.tau());
}

inline GroupElement tau_lift_pow(GroupElement x, int k) {
    for (int i = 0; i < mod_norm(k, 3); ++i) x = tau_lift(x);
    return x;
}

// theta: the order-2 lift of -1 fixing kappa_24 and commuting with the
// tau lift.  On the section it is e^alpha -> kappa_2^{g(alpha)} e^{-alpha}
// with the additive exponent g(alpha) = sum_s (m1 + m2) mod 2; this
// reduces to (e^alpha)^{-1} kappa_2^{<alpha,alpha>/2} = e^{-alpha} on
// L_{0xD}.  Requires an even bar norm.  The same set map is an
// automorphism of both extensions.
inline GroupElement theta_lift(const GroupElement& x) {
    Rat n = norm(x.bar);
    if (!is_integer(n) || mod_norm(num(n), 2) != 0) throw std::domain_error("theta_lift: bar norm must be even");
    Int g(0);
    for (size_t s = 0; s < x.bar.ell(); ++s) g += x.bar.site(s)[0] + x.bar.site(s)[1];
    return GroupElement(x.kappa + 12 * mod_norm(g, 2), -x.bar);
}

}  // namespace cxd
