#pragma once

#include "cxd/labels.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace cxd {

// Fusion products are finitely supported multiplicity vectors over module
// labels; twisted x twisted products are a distinguished undefined value
// (the tables do not state them), represented by nullopt.
using FusionVector = std::map<ModuleLabel, long>;
using FusionResult = std::optional<FusionVector>;

inline void fv_add(FusionVector& v, const ModuleLabel& m, long mult = 1) {
    if (mult == 0) return;
    v[m] += mult;
    if (v[m] == 0) v.erase(m);
}

inline std::string fv_str(const FusionVector& v) {
    if (v.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : v) {
        if (!s.empty()) s += " + ";
        if (c != 1) s += std::to_string(c) + "*";
        s += m.str();
    }
    return s;
}

namespace detail_fusion {

inline void check_ambient(const ModuleLabel& a, const ModuleLabel& b, size_t ell) {
    if (a.length() != ell || b.length() != ell) throw std::invalid_argument("fusion: ambient length mismatch");
}

}  // namespace detail_fusion

// Fusion rules of the length-l plain ambient ring (Prop 5.4); at l = 1
// this is the 30-label ring of V_L^tau (Prop 4.4).  Arguments with
// non-representative lambda are normalized, not rejected.
inline FusionResult fuse_ll(size_t ell, const ModuleLabel& a, const ModuleLabel& b) {
    using K = ModuleLabel::Kind;
    detail_fusion::check_ambient(a, b, ell);
    if (a.kind == K::twisted && b.kind == K::twisted) return std::nullopt;
    if (b.kind == K::twisted) return fuse_ll(ell, b, a);  // commutativity; keep the twisted factor first
    // now b is untwisted
    FusionVector out;
    if (a.kind == K::untwisted) {
        bool a0 = is_zero_word(a.lambda), b0 = is_zero_word(b.lambda);
        Z3Word gam = z3_add(a.gamma, b.gamma);
        if (a0 && b0) {
            fv_add(out, ModuleLabel::untwisted(KWord(ell, K0), gam, *a.eps + *b.eps));
        } else if (a0 != b0) {
            const ModuleLabel& x = a0 ? b : a;
            fv_add(out, ModuleLabel::untwisted(x.lambda, gam));
        } else if (orbit_rep(a.lambda) == orbit_rep(b.lambda)) {
            for (int eps = 0; eps < 3; ++eps) fv_add(out, ModuleLabel::untwisted(KWord(ell, K0), gam, eps));
            fv_add(out, ModuleLabel::untwisted(a.lambda, gam), 2);
        } else {
            for (int j = 0; j < 3; ++j)
                fv_add(out, ModuleLabel::untwisted(k_add(a.lambda, tau_word_pow(b.lambda, j)), gam));
        }
        return out;
    }
    // a twisted, b untwisted
    int i = a.tw;
    Z3Word eta2(ell);
    for (size_t s = 0; s < ell; ++s) eta2[s] = static_cast<uint8_t>(mod_norm(static_cast<long>(a.gamma[s]) - i * b.gamma[s], 3));
    if (is_zero_word(b.lambda)) {
        fv_add(out, ModuleLabel::twisted(eta2, i, i * *b.eps + *a.eps));
    } else {
        for (int eps = 0; eps < 3; ++eps) fv_add(out, ModuleLabel::twisted(eta2, i, eps));
    }
    return out;
}

// The 30-label ring of V_L^{tau_1}, written from its own table (Prop 4.4
// style, with scalar indices); the l = 1 instance of fuse_ll must agree
// with it label for label, which the tests check.
inline FusionResult fuse_vl(const ModuleLabel& a, const ModuleLabel& b) {
    using K = ModuleLabel::Kind;
    detail_fusion::check_ambient(a, b, 1);
    if (a.kind == K::twisted && b.kind == K::twisted) return std::nullopt;
    if (b.kind == K::twisted) return fuse_vl(b, a);
    FusionVector out;
    if (a.kind == K::untwisted) {
        int jsum = mod_norm(static_cast<long>(a.gamma[0]) + b.gamma[0], 3);
        bool a0 = is_zero_word(a.lambda), b0 = is_zero_word(b.lambda);
        if (a0 && b0) {
            fv_add(out, ModuleLabel::untwisted({K0}, {static_cast<uint8_t>(jsum)}, *a.eps + *b.eps));
        } else if (a0 != b0) {
            fv_add(out, ModuleLabel::untwisted({KC}, {static_cast<uint8_t>(jsum)}));
        } else {
            for (int e = 0; e < 3; ++e) fv_add(out, ModuleLabel::untwisted({K0}, {static_cast<uint8_t>(jsum)}, e));
            fv_add(out, ModuleLabel::untwisted({KC}, {static_cast<uint8_t>(jsum)}), 2);
        }
        return out;
    }
    int i = a.tw;
    int kk = mod_norm(static_cast<long>(a.gamma[0]) - static_cast<long>(i) * b.gamma[0], 3);
    if (is_zero_word(b.lambda)) {
        fv_add(out, ModuleLabel::twisted({static_cast<uint8_t>(kk)}, i, i * *b.eps + *a.eps));
    } else {
        for (int e = 0; e < 3; ++e) fv_add(out, ModuleLabel::twisted({static_cast<uint8_t>(kk)}, i, e));
    }
    return out;
}

// Fusion rules of the V_{L_{0xD}}^tau ring (Prop 6.3): gamma and eta live
// in D^perp mod D; arguments are normalized mod D.
class DRing {
  public:
    explicit DRing(Code D) : D_(std::move(D)), dperp_(D_.dual()) {
        if (D_.kind() != CodeKind::Z3) throw std::invalid_argument("DRing needs a Z3-code");
        if (!D_.is_self_orthogonal()) throw std::invalid_argument("DRing needs a self-orthogonal code");
    }

    const Code& D() const { return D_; }

    Z3Word reduce(const Z3Word& g) const {
        if (!dperp_.contains(g)) throw std::invalid_argument("label word not in D^perp");
        Z3Word best = g;
        for (const auto& d : D_.words()) best = std::min(best, z3_add(g, d));
        return best;
    }

    ModuleLabel normalize(const ModuleLabel& m) const {
        if (m.kind == ModuleLabel::Kind::untwisted) return ModuleLabel::untwisted(m.lambda, reduce(m.gamma), m.eps);
        return ModuleLabel::twisted(reduce(m.gamma), m.tw, *m.eps);
    }

    FusionResult fuse(const ModuleLabel& a0, const ModuleLabel& b0) const {
        using K = ModuleLabel::Kind;
        detail_fusion::check_ambient(a0, b0, D_.length());
        ModuleLabel a = normalize(a0), b = normalize(b0);
        if (a.kind == K::twisted && b.kind == K::twisted) return std::nullopt;
        if (b.kind == K::twisted) return fuse(b, a);
        size_t ell = D_.length();
        FusionVector out;
        if (a.kind == K::untwisted) {
            bool a0z = is_zero_word(a.lambda), b0z = is_zero_word(b.lambda);
            Z3Word gam = reduce(z3_add(a.gamma, b.gamma));
            if (a0z && b0z) {
                fv_add(out, ModuleLabel::untwisted(KWord(ell, K0), gam, *a.eps + *b.eps));
            } else if (a0z != b0z) {
                const ModuleLabel& x = a0z ? b : a;
                fv_add(out, ModuleLabel::untwisted(x.lambda, gam));
            } else if (orbit_rep(a.lambda) == orbit_rep(b.lambda)) {
                for (int eps = 0; eps < 3; ++eps) fv_add(out, ModuleLabel::untwisted(KWord(ell, K0), gam, eps));
                fv_add(out, ModuleLabel::untwisted(a.lambda, gam), 2);
            } else {
                for (int j = 0; j < 3; ++j)
                    fv_add(out, ModuleLabel::untwisted(k_add(a.lambda, tau_word_pow(b.lambda, j)), gam));
            }
            return out;
        }
        int i = a.tw;
        Z3Word eta2(ell);
        for (size_t s = 0; s < ell; ++s)
            eta2[s] = static_cast<uint8_t>(mod_norm(static_cast<long>(a.gamma[s]) - i * b.gamma[s], 3));
        eta2 = reduce(eta2);
        if (is_zero_word(b.lambda)) {
            fv_add(out, ModuleLabel::twisted(eta2, i, i * *b.eps + *a.eps));
        } else {
            for (int eps = 0; eps < 3; ++eps) fv_add(out, ModuleLabel::twisted(eta2, i, eps));
        }
        return out;
    }

    // Theorem 6.2 catalog
    std::vector<ModuleLabel> labels() const {
        std::vector<Z3Word> reps;
        for (const auto& g : dperp_.words()) {
            Z3Word r = reduce(g);
            if (std::find(reps.begin(), reps.end(), r) == reps.end()) reps.push_back(r);
        }
        std::vector<ModuleLabel> out;
        size_t ell = D_.length();
        for (const auto& r : reps) {
            for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::untwisted(KWord(ell, K0), r, eps));
            for (const auto& lam : orbit_representatives(ell))
                if (!is_zero_word(lam)) out.push_back(ModuleLabel::untwisted(lam, r));
            for (int i = 1; i <= 2; ++i)
                for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::twisted(r, i, eps));
        }
        return out;
    }

  private:
    Code D_;
    Code dperp_;
};

// Prop 5.3 catalog for the plain length-l ambient
inline std::vector<ModuleLabel> ll_labels(size_t ell) {
    std::vector<ModuleLabel> out;
    std::vector<Z3Word> zwords;
    {
        Z3Word w(ell, 0);
        size_t total = 1;
        for (size_t i = 0; i < ell; ++i) total *= 3;
        for (size_t n = 0; n < total; ++n) {
            size_t c = n;
            for (size_t s = 0; s < ell; ++s) {
                w[s] = static_cast<uint8_t>(c % 3);
                c /= 3;
            }
            zwords.push_back(w);
        }
    }
    for (const auto& g : zwords)
        for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::untwisted(KWord(ell, K0), g, eps));
    for (const auto& lam : orbit_representatives(ell)) {
        if (is_zero_word(lam)) continue;
        for (const auto& g : zwords) out.push_back(ModuleLabel::untwisted(lam, g));
    }
    for (const auto& g : zwords)
        for (int i = 1; i <= 2; ++i)
            for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::twisted(g, i, eps));
    return out;
}

inline std::vector<ModuleLabel> vl_labels() { return ll_labels(1); }

// Theorem 7.5 catalog: for a tau-invariant self-dual C of minimum weight
// >= 4 and a self-dual D, the 9 labels V_{L_{CxD}}(eps) and
// V^{T,0}(tau^i)[eps].
inline std::vector<ModuleLabel> thm75_labels(const Code& C, const Code& D) {
    if (C.kind() != CodeKind::K || D.kind() != CodeKind::Z3) throw std::invalid_argument("need a K-code and a Z3-code");
    if (C.length() != D.length()) throw std::invalid_argument("length mismatch");
    if (!C.is_self_dual() || !C.is_tau_invariant()) throw std::invalid_argument("C must be tau-invariant self-dual");
    auto mw = C.min_weight();
    if (!mw || *mw < 4) throw std::invalid_argument("C must have minimum weight at least 4");
    if (!D.is_self_dual()) throw std::invalid_argument("D must be self-dual");
    size_t ell = C.length();
    std::vector<ModuleLabel> out;
    for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::untwisted(KWord(ell, K0), Z3Word(ell, 0), eps));
    for (int i = 1; i <= 2; ++i)
        for (int eps = 0; eps < 3; ++eps) out.push_back(ModuleLabel::twisted(Z3Word(ell, 0), i, eps));
    return out;
}

// ---------------------------------------------------------------------------
// Subalgebra label rings of Section 4.

// M_t^0 ring: labels M_t^j, W_t^j, all products defined.
struct MtLabel {
    bool w = false;  // false: M, true: W
    int j = 0;
    bool operator==(const MtLabel& o) const = default;
    bool operator<(const MtLabel& o) const { return std::tie(w, j) < std::tie(o.w, o.j); }
    std::string str() const { return std::string(w ? "Wt" : "Mt") + "^" + std::to_string(j); }
};

using MtVector = std::map<MtLabel, long>;

inline MtVector mt_fuse(const MtLabel& a, const MtLabel& b) {
    MtVector out;
    int j = mod_norm(static_cast<long>(a.j + b.j), 3);
    if (!a.w && !b.w) {
        out[{false, j}] = 1;
    } else if (a.w != b.w) {
        out[{true, j}] = 1;
    } else {
        out[{false, j}] = 1;
        out[{true, j}] = 1;
    }
    return out;
}

inline std::vector<MtLabel> mt_labels() {
    std::vector<MtLabel> out;
    for (bool w : {false, true})
        for (int j = 0; j < 3; ++j) out.push_back({w, j});
    return out;
}

// The 20 irreducible M_k^0(0)-modules; the fusion table is partial (only
// the products the section states).
struct MkLabel {
    enum class Family { Mk, Wk, MkC, WkC, MT, WT };
    Family fam = Family::Mk;
    int eps = 0;  // for Mk/Wk/MT/WT
    int tw = 0;   // for MT/WT
    bool operator==(const MkLabel& o) const = default;
    bool operator<(const MkLabel& o) const { return std::tie(fam, eps, tw) < std::tie(o.fam, o.eps, o.tw); }
    std::string str() const {
        switch (fam) {
            case Family::Mk: return "Mk0(" + std::to_string(eps) + ")";
            case Family::Wk: return "Wk0(" + std::to_string(eps) + ")";
            case Family::MkC: return "Mkc";
            case Family::WkC: return "Wkc";
            case Family::MT: return "MT(t" + std::to_string(tw) + ")(" + std::to_string(eps) + ")";
            default: return "WT(t" + std::to_string(tw) + ")(" + std::to_string(eps) + ")";
        }
    }
};

using MkVector = std::map<MkLabel, long>;

inline std::vector<MkLabel> mk_labels() {
    std::vector<MkLabel> out;
    for (int eps = 0; eps < 3; ++eps) out.push_back({MkLabel::Family::Mk, eps, 0});
    for (int eps = 0; eps < 3; ++eps) out.push_back({MkLabel::Family::Wk, eps, 0});
    out.push_back({MkLabel::Family::MkC, 0, 0});
    out.push_back({MkLabel::Family::WkC, 0, 0});
    for (int tw = 1; tw <= 2; ++tw)
        for (int eps = 0; eps < 3; ++eps) {
            out.push_back({MkLabel::Family::MT, eps, tw});
            out.push_back({MkLabel::Family::WT, eps, tw});
        }
    return out;
}

// The stated part of the M_k^0(0) table: products of the M-type labels.
// Everything involving a W-type label is undefined here.
inline std::optional<MkVector> mk_fuse(const MkLabel& a, const MkLabel& b) {
    using F = MkLabel::Family;
    auto is_m = [](const MkLabel& x) { return x.fam == F::Mk || x.fam == F::MkC || x.fam == F::MT; };
    if (!is_m(a) || !is_m(b)) return std::nullopt;
    if (a.fam == F::MT && b.fam == F::MT) return std::nullopt;  // twisted x twisted unstated
    MkVector out;
    if (a.fam == F::Mk && b.fam == F::Mk) {
        out[{F::Mk, static_cast<int>(mod_norm(static_cast<long>(a.eps + b.eps), 3)), 0}] = 1;
        return out;
    }
    if ((a.fam == F::Mk && b.fam == F::MkC) || (a.fam == F::MkC && b.fam == F::Mk)) {
        out[{F::MkC, 0, 0}] = 1;
        return out;
    }
    if (a.fam == F::MkC && b.fam == F::MkC) {
        for (int eps = 0; eps < 3; ++eps) out[{F::Mk, eps, 0}] = 1;
        out[{F::MkC, 0, 0}] = 2;
        return out;
    }
    const MkLabel& t = (a.fam == F::MT) ? a : b;
    const MkLabel& u = (a.fam == F::MT) ? b : a;
    if (u.fam == F::Mk) {
        out[{F::MT, static_cast<int>(mod_norm(static_cast<long>(t.tw * u.eps + t.eps), 3)), t.tw}] = 1;
    } else {
        for (int eps = 0; eps < 3; ++eps) out[{F::MT, eps, t.tw}] = 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive consistency checks over a finite labelled ring.

struct RingCheckReport {
    long pairs_checked = 0;
    long triples_checked = 0;
    long triples_skipped = 0;  // some bracketing undefined
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

template <typename Label, typename Mul>
RingCheckReport check_ring(const std::vector<Label>& labels, Mul&& mul) {
    RingCheckReport rep;
    using Vec = std::map<Label, long>;
    auto mul_vec = [&](const Vec& v, const Label& c) -> std::optional<Vec> {
        Vec out;
        for (const auto& [m, k] : v) {
            auto p = mul(m, c);
            if (!p) return std::nullopt;
            for (const auto& [n, k2] : *p) out[n] += k * k2;
        }
        return out;
    };
    // commutativity
    for (const auto& a : labels)
        for (const auto& b : labels) {
            auto ab = mul(a, b), ba = mul(b, a);
            if (ab.has_value() != ba.has_value() || (ab && *ab != *ba))
                rep.violations.push_back("commutativity: " + a.str() + " x " + b.str());
            ++rep.pairs_checked;
        }
    // associativity where both bracketings are fully defined
    for (const auto& a : labels)
        for (const auto& b : labels) {
            auto ab = mul(a, b);
            for (const auto& c : labels) {
                auto bc = mul(b, c);
                std::optional<Vec> left = ab ? mul_vec(*ab, c) : std::nullopt;
                std::optional<Vec> right;
                if (bc) {
                    Vec r;
                    bool ok = true;
                    for (const auto& [m, k] : *bc) {
                        auto p = mul(a, m);
                        if (!p) {
                            ok = false;
                            break;
                        }
                        for (const auto& [n, k2] : *p) r[n] += k * k2;
                    }
                    if (ok) right = std::move(r);
                }
                if (!left || !right) {
                    ++rep.triples_skipped;
                    continue;
                }
                ++rep.triples_checked;
                if (*left != *right)
                    rep.violations.push_back("associativity: (" + a.str() + " x " + b.str() + ") x " + c.str());
            }
        }
    return rep;
}

}  // namespace cxd
