#pragma once

#include "cxd/groups.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cxd {

// Subgroups of the twisted extension over L_{Cx0} and their bar images:
// M0 = (1-tau)L_{Cx0}, M = (1-tau)L_{CxD}, R the radical, and the
// kappa-free ladder K0 < K < K1 < K2.
enum class SubgroupLabel { M0, M, R, LC0, K0, K, K1, K2 };

namespace detail {

// Lattice-level membership v in L_{Cx0}: every site in an i = 0 coset and
// the K-word a codeword of C.
inline bool in_LC0(const GluedLattice& lat, const LatticeVector& v) {
    for (size_t s = 0; s < v.ell(); ++s)
        if (decompose_site(v, s).i != 0) return false;
    return lat.C().contains(kword_of(v));
}

inline bool in_one_minus_tau_image(const GluedLattice& lat, const LatticeVector& v, bool gamma_in_D, int tw = 1) {
    auto w = v.one_minus_tau_preimage(tw);
    if (!w) return false;
    if (!lat.C().contains(kword_of(*w))) return false;
    Z3Word g = z3word_of(*w);
    return gamma_in_D ? lat.D().contains(g) : is_zero_word(g);
}

// Canonical K0 element over a given bar value in M0 (kappa exponent
// included): e^w nu(e^w)^{-1} computed in the nu-twisted group, nu = tau^tw.
inline GroupElement canonical_k0(const LatticeVector& bar_value, int tw = 1) {
    auto w = bar_value.one_minus_tau_preimage(tw);
    if (!w) throw std::logic_error("canonical_k0: bar not in (1-nu) image");
    GroupElement ew = GroupElement::exp(*w);
    return mult(ExtKind::twisted, ew, inverse(ExtKind::twisted, tau_lift_pow(ew, tw), tw), tw);
}

// x written as kappa^p * prod_s (kappa_3 e^{beta_1^(s)})^{g_s} * k0 with
// g = varphi(bar x) and k0 in K0; returns (p, g).  Throws when bar x is
// not in L_{Cx0}.
inline std::pair<int, Z3Word> k2_normal_form(const GluedLattice& lat, const GroupElement& x, int tw = 1) {
    if (!in_LC0(lat, x.bar)) throw std::invalid_argument("element not over L_{Cx0}");
    size_t l = x.bar.ell();
    Z3Word g = varphi(x.bar);
    GroupElement u = GroupElement::kappa_pow(0, l);
    for (size_t s = 0; s < l; ++s) {
        LatticeVector b1(l);
        b1.site(s) = {Int(2), Int(0)};
        GroupElement gen(8, b1);  // kappa_3 e^{beta_1^(s)}
        for (int rep = 0; rep < g[s]; ++rep) u = mult(ExtKind::twisted, u, gen, tw);
    }
    GroupElement k = mult(ExtKind::twisted, inverse(ExtKind::twisted, u, tw), x, tw);
    GroupElement k0 = canonical_k0(k.bar, tw);
    if (!(k0.bar == k.bar)) throw std::logic_error("k2_normal_form: inconsistent K0 bar");
    int p = mod_norm(static_cast<long>(k.kappa - k0.kappa), 24);
    return {p, g};
}

}  // namespace detail

// Membership of a group element (twisted extension over L_{CxD}) in one of
// the named subgroups.  For the bar-level labels only the bar matters.
inline bool subgroup_member(SubgroupLabel label, const GroupElement& x, const GluedLattice& lat, int tw = 1) {
    switch (label) {
        case SubgroupLabel::LC0:
            return detail::in_LC0(lat, x.bar);
        case SubgroupLabel::M0:
            return detail::in_one_minus_tau_image(lat, x.bar, false, tw);
        case SubgroupLabel::M:
            return detail::in_one_minus_tau_image(lat, x.bar, true, tw);
        case SubgroupLabel::R: {
            if (!detail::in_LC0(lat, x.bar)) return false;
            return radical_member(lat, x.bar);
        }
        default:
            break;
    }
    if (!detail::in_LC0(lat, x.bar)) return false;
    auto [p, g] = detail::k2_normal_form(lat, x, tw);
    switch (label) {
        case SubgroupLabel::K2:
            return p == 0;
        case SubgroupLabel::K1:
            return p == 0 && lat.D().dual().contains(g);
        case SubgroupLabel::K:
            return p == 0 && lat.D().contains(g);
        case SubgroupLabel::K0:
            return p == 0 && is_zero_word(g);
        default:
            throw std::logic_error("unreachable");
    }
}

// The character psi_eta of the twisted extension over L_{Cx0}: determined
// by psi(kappa_24) = zeta_24, psi = 1 on K0, and
// psi(kappa_3 e^{beta_i^(s)}) = zeta_3^{eta_s}.
inline Cyclotomic psi_eval(const Z3Word& eta, const GroupElement& x, const GluedLattice& lat, int tw = 1) {
    auto [p, g] = detail::k2_normal_form(lat, x, tw);
    long e3 = 0;
    for (size_t s = 0; s < eta.size(); ++s) e3 += g[s] * eta[s];
    return Cyclotomic::zeta_pow(p) * zeta3_pow(e3);
}

// Irreducible module T_{psi_eta} of the twisted extension over L_{CxD}:
// basis {v_(eta,gamma) : gamma in D}, dimension |D|.
struct TModule {
    Z3Word eta;  // in D^perp
    Code D;

    TModule(Z3Word eta_, Code D_) : eta(std::move(eta_)), D(std::move(D_)) {
        if (!D.dual().contains(eta)) throw std::invalid_argument("TModule: eta not in the dual code");
    }
};

// Action of x on the basis vector v_(eta,gamma): returns the target index
// gamma' = gamma + delta (delta the Z3-word of bar x) and the exact scalar.
inline std::pair<Z3Word, Cyclotomic> t_action(const TModule& mod, const GroupElement& x, const Z3Word& gamma,
                                              const GluedLattice& lat, int tw = 1) {
    if (!lat.contains(x.bar)) throw std::invalid_argument("t_action: element not over L_{CxD}");
    size_t l = x.bar.ell();
    Z3Word delta = z3word_of(x.bar);
    Z3Word target = z3_add(gamma, delta);

    auto a_of = [&](const Z3Word& g) {
        // a(gamma) = sum_s gamma_s (-beta1 + beta2)/3 = (0, -2 gamma_s) per site
        LatticeVector v(l);
        for (size_t s = 0; s < l; ++s) v.site(s) = {Int(0), Int(-2) * g[s]};
        return v;
    };

    GroupElement e_target = GroupElement::exp(a_of(target));
    GroupElement e_gamma = GroupElement::exp(a_of(gamma));
    GroupElement y = mult(ExtKind::twisted, inverse(ExtKind::twisted, e_target, tw),
                          mult(ExtKind::twisted, x, e_gamma, tw), tw);
    return {target, psi_eval(mod.eta, y, lat, tw)};
}

// Partition of candidate characters eta (subset of D^perp) into
// equivalence classes of the modules T_{psi_eta}, by comparing the
// multiset over gamma in D of psi_{eta-gamma} values on the K1 generators.
inline std::vector<std::vector<Z3Word>> equivalence_classes(const Code& D, const std::vector<Z3Word>& candidates) {
    Code dperp = D.dual();
    for (const auto& eta : candidates)
        if (!dperp.contains(eta)) throw std::invalid_argument("equivalence_classes: candidate not in D^perp");
    // K1 generators correspond to a basis of D^perp; psi_eta on the
    // generator labelled rho evaluates to zeta_3^{<rho, eta>}.
    std::vector<Z3Word> rhos = dperp.generators();
    std::map<std::multiset<std::vector<int>>, std::vector<Z3Word>> buckets;
    for (const auto& eta : candidates) {
        std::multiset<std::vector<int>> sig;
        for (const auto& gamma : D.words()) {
            Z3Word shifted = z3_sub(eta, gamma);
            std::vector<int> vals;
            for (const auto& rho : rhos) vals.push_back(z3_inner(rho, shifted));
            sig.insert(std::move(vals));
        }
        buckets[sig].push_back(eta);
    }
    std::vector<std::vector<Z3Word>> classes;
    for (auto& [sig, members] : buckets) classes.push_back(std::move(members));
    return classes;
}

}  // namespace cxd
