#pragma once

#include "cxd/twisted.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace cxd {

// ---------------------------------------------------------------------------
// h-basis vectors.  Every Heisenberg direction is expanded over the
// eigenbasis h_1^(s), h_2^(s) of tau (tau h_i = zeta_3^i h_i), with
// <h_i, h_i> = 0 and <h_1^(s), h_2^(t)> = 2 delta_{s,t}.

struct HVec {
    std::vector<Cyclotomic> c;  // index 2s + (i-1)

    explicit HVec(size_t ell) : c(2 * ell) {}

    size_t ell() const { return c.size() / 2; }
    Cyclotomic& at(size_t s, int i) { return c[2 * s + (i - 1)]; }
    const Cyclotomic& at(size_t s, int i) const { return c[2 * s + (i - 1)]; }

    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }

    // bt1 = (h1 + h2)/2, bt2 = ((1 - zeta3) h1 + (1 - zeta3^2) h2)/6
    static HVec from_lattice(const LatticeVector& v) {
        HVec h(v.ell());
        Cyclotomic w1 = (Cyclotomic(1) - zeta3()) * Rat(1, 6);
        Cyclotomic w2 = (Cyclotomic(1) - zeta3() * zeta3()) * Rat(1, 6);
        for (size_t s = 0; s < v.ell(); ++s) {
            Rat m1(v.site(s)[0]), m2(v.site(s)[1]);
            h.at(s, 1) = Cyclotomic(m1 / 2) + m2 * w1;
            h.at(s, 2) = Cyclotomic(m1 / 2) + m2 * w2;
        }
        return h;
    }
};

inline Cyclotomic h_pair(const HVec& u, const HVec& v) {
    Cyclotomic acc(0);
    for (size_t s = 0; s < u.ell(); ++s) acc += Rat(2) * (u.at(s, 1) * v.at(s, 2) + u.at(s, 2) * v.at(s, 1));
    return acc;
}

// ---------------------------------------------------------------------------
// Untwisted states: linear combinations of  h_{i_1}^{(s_1)}(-n_1) ... e^beta.

struct UMono {
    std::vector<std::array<int, 3>> factors;  // (s, i, level >= 1), sorted
    LatticeVector beta;

    bool operator==(const UMono& o) const { return factors == o.factors && beta == o.beta; }
    bool operator<(const UMono& o) const {
        if (factors != o.factors) return factors < o.factors;
        return beta < o.beta;
    }
};

using UState = std::map<UMono, Cyclotomic>;

inline void add_to(UState& st, const UMono& m, const Cyclotomic& c) {
    if (c.is_zero()) return;
    auto it = st.find(m);
    if (it == st.end())
        st.emplace(m, c);
    else {
        it->second += c;
        if (it->second.is_zero()) st.erase(it);
    }
}

inline UState operator+(UState a, const UState& b) {
    for (const auto& [m, c] : b) add_to(a, m, c);
    return a;
}

inline UState operator-(const UState& a, const UState& b) {
    UState out = a;
    for (const auto& [m, c] : b) add_to(out, m, -c);
    return out;
}

inline UState operator*(const Cyclotomic& k, const UState& a) {
    UState out;
    for (const auto& [m, c] : a) add_to(out, m, k * c);
    return out;
}

inline Rat u_weight(const UMono& m) {
    Rat w = norm(m.beta) / 2;
    for (const auto& f : m.factors) w += f[2];
    return w;
}

// maximal weight present (0 for the empty state)
inline Rat u_max_weight(const UState& st) {
    Rat w(0);
    for (const auto& [m, c] : st) w = std::max(w, u_weight(m));
    return w;
}

// weight when homogeneous
inline std::optional<Rat> u_hom_weight(const UState& st) {
    std::optional<Rat> w;
    for (const auto& [m, c] : st) {
        Rat mw = u_weight(m);
        if (!w)
            w = mw;
        else if (*w != mw)
            return std::nullopt;
    }
    return w;
}

inline UState vacuum_state(size_t ell) {
    UState st;
    st.emplace(UMono{{}, LatticeVector::zero(ell)}, Cyclotomic(1));
    return st;
}

inline UState exp_state(const LatticeVector& beta, const Cyclotomic& c = Cyclotomic(1)) {
    UState st;
    add_to(st, UMono{{}, beta}, c);
    return st;
}

// Monomial with general h-vector directions expanded over the basis.
inline UState heisenberg_state(const std::vector<std::pair<HVec, int>>& dirs, const LatticeVector& beta,
                               const Cyclotomic& coeff = Cyclotomic(1)) {
    UState st = exp_state(beta, coeff);
    for (const auto& [h, level] : dirs) {
        UState next;
        for (const auto& [m, c] : st) {
            for (size_t s = 0; s < h.ell(); ++s)
                for (int i = 1; i <= 2; ++i) {
                    if (h.at(s, i).is_zero()) continue;
                    UMono mm = m;
                    mm.factors.push_back({static_cast<int>(s), i, level});
                    std::sort(mm.factors.begin(), mm.factors.end());
                    add_to(next, mm, c * h.at(s, i));
                }
        }
        st = std::move(next);
    }
    return st;
}

// tau on untwisted states: h_i picks zeta_3^i, e^beta maps by the group
// lift of tau.
inline UState tau_state(const UState& st) {
    UState out;
    for (const auto& [m, c] : st) {
        GroupElement g = tau_lift(GroupElement::exp(m.beta));
        Cyclotomic k = c * Cyclotomic::zeta_pow(g.kappa);
        long charge = 0;
        UMono mm;
        mm.beta = g.bar;
        for (const auto& f : m.factors) {
            charge += f[1];
            mm.factors.push_back(f);
        }
        std::sort(mm.factors.begin(), mm.factors.end());
        add_to(out, mm, k * zeta3_pow(charge));
    }
    return out;
}

inline UState tau_orbit_sum(const UState& st) {
    UState t = tau_state(st);
    return st + t + tau_state(t);
}

// ---------------------------------------------------------------------------
// Untwisted vertex operators.  Y(v,x)w is computed as a Laurent series in
// x with state coefficients, truncated to output weights <= bound.

using XSeriesU = std::map<Rat, UState>;

namespace vop {

struct XTermU {
    Rat xexp;
    UMono mono;
    Cyclotomic coeff;
};

// exp of the annihilation part of a field with direction arg (integer
// modes m >= 1):  exp(sum_m (arg(m)/m) x^{-m}).
inline std::vector<XTermU> apply_exp_annihilators(const std::vector<XTermU>& in, const HVec& arg, const Rat& bound) {
    std::vector<XTermU> cur = in;
    for (size_t s = 0; s < arg.ell(); ++s)
        for (int i = 1; i <= 2; ++i) {
            Cyclotomic comp = arg.at(s, i);
            if (comp.is_zero()) continue;
            std::vector<XTermU> next;
            for (const auto& t : cur) {
                // factors (s, 3-i, m) contract; group them by level
                std::map<int, int> levels;
                for (const auto& f : t.mono.factors)
                    if (f[0] == static_cast<int>(s) && f[1] == 3 - i) ++levels[f[2]];
                // expand product over levels of exp((comp/m) h_i(m) x^{-m})
                std::vector<XTermU> acc{t};
                for (const auto& [m, cnt] : levels) {
                    std::vector<XTermU> acc2;
                    for (const auto& a : acc) {
                        Cyclotomic jcoeff(1);
                        for (int j = 0; j <= cnt; ++j) {
                            if (j > 0) {
                                // one application: (comp/m) * (m * 2 * remaining) / j
                                jcoeff = jcoeff * comp * Rat(2 * (cnt - j + 1), j);
                            }
                            XTermU nt = a;
                            nt.coeff = a.coeff * jcoeff;
                            nt.xexp = a.xexp - j * m;
                            int removed = 0;
                            nt.mono.factors.clear();
                            for (const auto& f : a.mono.factors) {
                                if (removed < j && f[0] == static_cast<int>(s) && f[1] == 3 - i && f[2] == m) {
                                    ++removed;
                                    continue;
                                }
                                nt.mono.factors.push_back(f);
                            }
                            if (!nt.coeff.is_zero()) acc2.push_back(std::move(nt));
                        }
                    }
                    acc = std::move(acc2);
                }
                for (auto& a : acc) next.push_back(std::move(a));
            }
            cur = std::move(next);
        }
    (void)bound;
    return cur;
}

// exp of the creation part:  exp(sum_{n<0} (arg(n)/n) x^{-n})
//   = exp(-sum_{k>0} (argcomp/k) h(-k) x^{k}), truncated by the weight bound.
inline std::vector<XTermU> apply_exp_creators(const std::vector<XTermU>& in, const HVec& arg, const Rat& bound) {
    std::vector<XTermU> cur = in;
    for (size_t s = 0; s < arg.ell(); ++s)
        for (int i = 1; i <= 2; ++i) {
            Cyclotomic comp = arg.at(s, i);
            if (comp.is_zero()) continue;
            std::vector<XTermU> next;
            for (const auto& t : cur) {
                Rat room = bound - u_weight(t.mono);
                std::vector<XTermU> acc{t};
                for (int k = 1; Rat(k) <= room; ++k) {
                    std::vector<XTermU> acc2;
                    for (const auto& a : acc) {
                        Rat aroom = bound - u_weight(a.mono);
                        Cyclotomic jcoeff(1);
                        XTermU nt = a;
                        acc2.push_back(a);
                        for (int j = 1; Rat(j * k) <= aroom; ++j) {
                            jcoeff = jcoeff * comp * Rat(-1, k) * Rat(1, j);
                            nt.coeff = a.coeff * jcoeff;
                            nt.xexp = a.xexp + j * k;
                            nt.mono.factors.push_back({static_cast<int>(s), i, k});
                            std::sort(nt.mono.factors.begin(), nt.mono.factors.end());
                            if (!nt.coeff.is_zero()) acc2.push_back(nt);
                        }
                    }
                    acc = std::move(acc2);
                }
                for (auto& a : acc) next.push_back(std::move(a));
            }
            cur = std::move(next);
        }
    return cur;
}

// normal-ordered product of one dressed exponential against one monomial;
// the zero modes pair against the pre-shift lattice label of w.
inline void y_mono(const UMono& vm, const Cyclotomic& vc, const UMono& wm, const Cyclotomic& wc, const Rat& bound,
                   XSeriesU& out) {
    const LatticeVector &mu = vm.beta, &nu = wm.beta;
    HVec nu_h = HVec::from_lattice(nu);
    HVec minus_mu = HVec::from_lattice(-mu);

    Cyclotomic base = vc * wc * Cyclotomic::zeta_pow(eps1(mu, nu));
    Rat x0 = inner_product(mu, nu);
    Rat shifted_norm_half = norm(mu + nu) / 2;

    // enumerate dressing mode choices; annihilation and zero modes act
    // immediately, creations are deferred
    struct Partial {
        UMono mono;  // current w-part (beta still nu)
        Cyclotomic coeff;
        Rat xexp;
        std::vector<std::array<int, 3>> creations;
        Rat creation_weight;
    };
    std::vector<Partial> parts{{wm, base, x0, {}, Rat(0)}};
    for (const auto& f : vm.factors) {
        int fs = f[0], fi = f[1], fn = f[2];
        std::vector<Partial> next;
        for (const auto& p : parts) {
            // zero mode: <h_i^{(s)}, nu>
            Cyclotomic z = Rat(2) * nu_h.at(fs, 3 - fi);
            if (!z.is_zero()) {
                Partial q = p;
                q.coeff = p.coeff * z * Rat(binomial(Rat(-1), fn - 1));
                q.xexp = p.xexp - fn;
                if (!q.coeff.is_zero()) next.push_back(std::move(q));
            }
            // annihilation modes
            std::map<int, int> levels;
            for (const auto& g : p.mono.factors)
                if (g[0] == fs && g[1] == 3 - fi) ++levels[g[2]];
            for (const auto& [m, cnt] : levels) {
                Partial q = p;
                q.coeff = p.coeff * Rat(2 * m * cnt) * binomial(Rat(-m - 1), fn - 1);
                q.xexp = p.xexp - (m + fn);
                bool removed = false;
                q.mono.factors.clear();
                for (const auto& g : p.mono.factors) {
                    if (!removed && g[0] == fs && g[1] == 3 - fi && g[2] == m) {
                        removed = true;
                        continue;
                    }
                    q.mono.factors.push_back(g);
                }
                if (!q.coeff.is_zero()) next.push_back(std::move(q));
            }
            // creation modes, bounded by the weight room
            Rat room = bound - shifted_norm_half - p.creation_weight;
            for (const auto& g : p.mono.factors) room -= g[2];
            for (int d = 1; Rat(d) <= room; ++d) {
                Partial q = p;
                q.coeff = p.coeff * binomial(Rat(d - 1), fn - 1);
                q.xexp = p.xexp + d - fn;
                q.creations.push_back({fs, fi, d});
                q.creation_weight = p.creation_weight + d;
                if (!q.coeff.is_zero()) next.push_back(std::move(q));
            }
        }
        parts = std::move(next);
    }

    for (const auto& p : parts) {
        std::vector<XTermU> terms{{p.xexp, p.mono, p.coeff}};
        terms = apply_exp_annihilators(terms, minus_mu, bound);
        for (auto& t : terms) t.mono.beta = mu + nu;
        // weight room for E^- must leave space for the deferred creations
        terms = apply_exp_creators(terms, minus_mu, bound - p.creation_weight);
        for (auto& t : terms) {
            for (const auto& cr : p.creations) t.mono.factors.push_back(cr);
            std::sort(t.mono.factors.begin(), t.mono.factors.end());
            if (u_weight(t.mono) > bound) continue;
            add_to(out[t.xexp], t.mono, t.coeff);
        }
    }
}

}  // namespace vop

inline XSeriesU y_series(const UState& v, const UState& w, const Rat& bound) {
    XSeriesU out;
    for (const auto& [vm, vc] : v)
        for (const auto& [wm, wc] : w) vop::y_mono(vm, vc, wm, wc, bound, out);
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.empty())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

// coefficient of x^{-n-1} in Y(v, x) w
inline UState untwisted_coeff(const UState& v, const Rat& n, const UState& w, const Rat& bound) {
    if (auto vw = u_hom_weight(v)) {
        if (auto ww = u_hom_weight(w)) {
            if (*vw + *ww - n - 1 > bound) throw std::domain_error("untwisted_coeff: truncation exceeded");
        }
    }
    XSeriesU s = y_series(v, w, bound);
    auto it = s.find(-n - 1);
    return it == s.end() ? UState{} : it->second;
}

// o(u) w = u_{wt(u)-1} w, extended linearly over weight components
inline UState o_apply(const UState& u, const UState& w, const Rat& bound) {
    std::map<Rat, UState> comps;
    for (const auto& [m, c] : u) add_to(comps[u_weight(m)], m, c);
    UState out;
    for (const auto& [wt, st] : comps) out = out + untwisted_coeff(st, wt - 1, w, bound);
    return out;
}

// u o v = sum_i binom(wt u, i) u_{i-2} v
inline UState zhu_circ(const UState& u, const UState& v, const Rat& bound) {
    auto uw = u_hom_weight(u);
    if (!uw || !is_integer(*uw)) throw std::invalid_argument("zhu_circ: u not homogeneous of integer weight");
    long wt = to_long(num(*uw));
    UState out;
    for (long i = 0; i <= wt; ++i) {
        Rat b = binomial(*uw, i);
        if (b == 0) continue;
        out = out + (Cyclotomic(b) * untwisted_coeff(u, Rat(i - 2), v, bound));
    }
    return out;
}

// u * v = sum_i binom(wt u, i) u_{i-1} v
inline UState zhu_star(const UState& u, const UState& v, const Rat& bound) {
    auto uw = u_hom_weight(u);
    if (!uw || !is_integer(*uw)) throw std::invalid_argument("zhu_star: u not homogeneous of integer weight");
    long wt = to_long(num(*uw));
    UState out;
    for (long i = 0; i <= wt; ++i) {
        Rat b = binomial(*uw, i);
        if (b == 0) continue;
        out = out + (Cyclotomic(b) * untwisted_coeff(u, Rat(i - 1), v, bound));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Delta_x correction constants c^i_{mn}.

struct DeltaConstants {
    int order = 0;
    std::array<std::map<std::pair<int, int>, Cyclotomic>, 3> c;

    Cyclotomic get(int i, int m, int n) const {
        auto it = c[i].find({m, n});
        return it == c[i].end() ? Cyclotomic(0) : it->second;
    }
};

namespace detail_delta {

using BiPoly = std::map<std::pair<int, int>, Cyclotomic>;

inline BiPoly mul(const BiPoly& a, const BiPoly& b, int order) {
    BiPoly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            int m = ea.first + eb.first, n = ea.second + eb.second;
            if (m > order || n > order) continue;
            auto key = std::make_pair(m, n);
            auto it = out.find(key);
            if (it == out.end())
                out.emplace(key, ca * cb);
            else {
                it->second += ca * cb;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    return out;
}

inline void add_scaled(BiPoly& a, const BiPoly& b, const Cyclotomic& k) {
    for (const auto& [e, c] : b) {
        auto it = a.find(e);
        if (it == a.end())
            a.emplace(e, k * c);
        else {
            it->second += k * c;
            if (it->second.is_zero()) a.erase(it);
        }
    }
}

// log(1 + g) for g without constant term
inline BiPoly log1p(const BiPoly& g, int order) {
    BiPoly out, p = g;
    int maxj = 2 * order + 1;
    for (int j = 1; j <= maxj && !p.empty(); ++j) {
        add_scaled(out, p, Cyclotomic(Rat((j % 2) ? 1 : -1, j)));
        p = mul(p, g, order);
    }
    return out;
}

}  // namespace detail_delta

// Exact expansion of the defining log series
//   sum c^0_{mn} x^m y^n = -1/2 sum_{r=1,2} log(((1+x)^{1/3} - zeta_3^{-r}(1+y)^{1/3}) / (1 - zeta_3^{-r}))
//   sum c^i_{mn} x^m y^n = +1/2 log(((1+x)^{1/3} - zeta_3^{-i}(1+y)^{1/3}) / (1 - zeta_3^{-i})),  i = 1, 2.
inline DeltaConstants delta_constants(int order) {
    using detail_delta::BiPoly;
    DeltaConstants out;
    out.order = order;
    BiPoly ax, by;  // (1+x)^{1/3}, (1+y)^{1/3}
    for (int k = 0; k <= order; ++k) {
        Rat b = binomial(Rat(1, 3), k);
        ax[{k, 0}] = Cyclotomic(b);
        by[{0, k}] = Cyclotomic(b);
    }
    std::array<BiPoly, 3> logs;
    for (int r = 1; r <= 2; ++r) {
        Cyclotomic zr = zeta3_pow(-r);
        Cyclotomic a = (Cyclotomic(1) - zr).inverse();
        BiPoly g;
        detail_delta::add_scaled(g, ax, a);
        detail_delta::add_scaled(g, by, -(a * zr));
        g.erase({0, 0});  // the constant term is exactly 1
        logs[r] = detail_delta::log1p(g, order);
    }
    for (int r = 1; r <= 2; ++r) {
        detail_delta::add_scaled(out.c[0], logs[r], Cyclotomic(Rat(-1, 2)));
        detail_delta::add_scaled(out.c[r], logs[r], Cyclotomic(Rat(1, 2)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Twisted states: monomials in h_i^{(s)}(-p), p in (1/3)Z_{>0} with
// 3p = tw * i (mod 3), tensored with the T-module basis vector v_(eta,gamma).

struct TMono {
    std::vector<std::array<int, 3>> factors;  // (s, i, num3 >= 1), level = num3/3, sorted
    Z3Word gamma;

    bool operator==(const TMono& o) const { return factors == o.factors && gamma == o.gamma; }
    bool operator<(const TMono& o) const {
        if (factors != o.factors) return factors < o.factors;
        return gamma < o.gamma;
    }
};

using TState = std::map<TMono, Cyclotomic>;

inline void add_to(TState& st, const TMono& m, const Cyclotomic& c) {
    if (c.is_zero()) return;
    auto it = st.find(m);
    if (it == st.end())
        st.emplace(m, c);
    else {
        it->second += c;
        if (it->second.is_zero()) st.erase(it);
    }
}

inline TState operator+(TState a, const TState& b) {
    for (const auto& [m, c] : b) add_to(a, m, c);
    return a;
}

inline TState operator-(const TState& a, const TState& b) {
    TState out = a;
    for (const auto& [m, c] : b) add_to(out, m, -c);
    return out;
}

inline TState operator*(const Cyclotomic& k, const TState& a) {
    TState out;
    for (const auto& [m, c] : a) add_to(out, m, k * c);
    return out;
}

// S-part weight (the module adds the constant offset l/9)
inline Rat t_weight(const TMono& m) {
    long acc = 0;
    for (const auto& f : m.factors) acc += f[2];
    return Rat(acc, 3);
}

using XSeriesT = std::map<Rat, TState>;

// Context of a twisted-module computation: the ambient lattice, the
// character label eta, the twisting power (tau or tau^2), the S-part
// weight bound, and the Delta_x constant table.
struct TwistContext {
    GluedLattice lat;
    Z3Word eta;
    int tw = 1;  // 1 or 2
    Rat bound = Rat(3);
    DeltaConstants delta;
    TModule mod;

    TwistContext(GluedLattice lat_, Z3Word eta_, int tw_, Rat bound_ = Rat(3))
        : lat(std::move(lat_)),
          eta(std::move(eta_)),
          tw(tw_),
          bound(std::move(bound_)),
          delta(delta_constants(4)),
          mod(eta, lat.D()) {
        if (tw != 1 && tw != 2) throw std::invalid_argument("twist power must be 1 or 2");
    }

    TState ground(const Z3Word& gamma) const {
        TState st;
        add_to(st, TMono{{}, gamma}, Cyclotomic(1));
        return st;
    }
};

namespace vop {

struct XTermT {
    Rat xexp;
    TMono mono;
    Cyclotomic coeff;
};

// e^{Delta_x} v: Delta_x pairs two nonnegative untwisted modes with the
// constants c^r_{mn}; zero modes pair against the monomial's own lattice
// label.  Returns (integer x-shift <= 0) -> state.
inline std::map<int, UState> delta_exp(const UState& v, const DeltaConstants& dc, int tw) {
    // precompute the twist-dependent direction weights
    //   D1_{mn} = 1/2 sum_r c^r_{mn} zeta_3^{-r tw},  (h1(m) h2(n) direction)
    //   D2_{mn} = 1/2 sum_r c^r_{mn} zeta_3^{-2r tw}  (h2(m) h1(n) direction)
    auto dcoef = [&](int which, int m, int n) {
        Cyclotomic acc(0);
        for (int r = 0; r < 3; ++r) acc += dc.get(r, m, n) * zeta3_pow(-r * tw * which);
        return Rat(1, 2) * acc;
    };

    auto apply_mode = [](const UMono& m, int s, int i, int mode, const LatticeVector& beta)
        -> std::vector<std::pair<UMono, Cyclotomic>> {
        // h_i^{(s)}(mode) for mode >= 0 acting on a monomial (pre-existing
        // creation factors only)
        std::vector<std::pair<UMono, Cyclotomic>> out;
        if (mode == 0) {
            Cyclotomic z = Rat(2) * HVec::from_lattice(beta).at(s, 3 - i);
            if (!z.is_zero()) out.push_back({m, z});
            return out;
        }
        int cnt = 0;
        for (const auto& f : m.factors)
            if (f[0] == s && f[1] == 3 - i && f[2] == mode) ++cnt;
        if (cnt == 0) return out;
        UMono mm = m;
        bool removed = false;
        mm.factors.clear();
        for (const auto& f : m.factors) {
            if (!removed && f[0] == s && f[1] == 3 - i && f[2] == mode) {
                removed = true;
                continue;
            }
            mm.factors.push_back(f);
        }
        out.push_back({mm, Cyclotomic(Rat(2 * mode * cnt))});
        return out;
    };

    // one application of Delta_x
    auto delta_once = [&](const std::map<int, UState>& in) {
        std::map<int, UState> out;
        for (const auto& [shift, st] : in)
            for (const auto& [mono, coeff] : st) {
                int maxlvl = 0;
                for (const auto& f : mono.factors) maxlvl = std::max(maxlvl, f[2]);
                for (int m = 0; m <= maxlvl; ++m)
                    for (int n = 0; n <= maxlvl; ++n) {
                        for (int which = 1; which <= 2; ++which) {
                            Cyclotomic w = dcoef(which, m, n);
                            if (w.is_zero()) continue;
                            int i_m = which, i_n = 3 - which;
                            for (size_t s = 0; s < mono.beta.ell(); ++s) {
                                // rightmost mode first: h_{i_n}(n), then h_{i_m}(m)
                                for (const auto& [m1, c1] :
                                     apply_mode(mono, static_cast<int>(s), i_n, n, mono.beta))
                                    for (const auto& [m2, c2] :
                                         apply_mode(m1, static_cast<int>(s), i_m, m, m1.beta))
                                        add_to(out[shift - m - n], m2, coeff * w * c1 * c2);
                            }
                        }
                    }
            }
        return out;
    };

    std::map<int, UState> total{{0, v}};
    std::map<int, UState> power{{0, v}};
    Rat factorial(1);
    for (int j = 1;; ++j) {
        power = delta_once(power);
        bool empty = true;
        for (const auto& [sh, st] : power)
            if (!st.empty()) empty = false;
        if (empty) break;
        factorial *= j;
        for (const auto& [sh, st] : power)
            for (const auto& [m, c] : st) add_to(total[sh], m, Cyclotomic(Rat(1) / factorial) * c);
    }
    return total;
}

// positive modes of h_i sit at numerators num3 = tw*i (mod 3); negative
// modes (creations) at num3 = -tw*i (mod 3)
inline bool mode_allowed(int tw, int i, long num3) { return mod_norm(num3, 3) == mod_norm(static_cast<long>(tw) * i, 3); }
inline bool creation_allowed(int tw, int i, long num3) { return mod_norm(num3, 3) == mod_norm(-static_cast<long>(tw) * i, 3); }

// twisted exp of annihilators: exp(sum_{p>0} (arg(p)/p) x^{-p})
inline std::vector<XTermT> t_exp_annihilators(const std::vector<XTermT>& in, const HVec& arg, int tw) {
    std::vector<XTermT> cur = in;
    for (size_t s = 0; s < arg.ell(); ++s)
        for (int i = 1; i <= 2; ++i) {
            Cyclotomic comp = arg.at(s, i);
            if (comp.is_zero()) continue;
            std::vector<XTermT> next;
            for (const auto& t : cur) {
                std::map<int, int> levels;  // num3 -> count of contractable factors
                for (const auto& f : t.mono.factors)
                    if (f[0] == static_cast<int>(s) && f[1] == 3 - i) ++levels[f[2]];
                std::vector<XTermT> acc{t};
                for (const auto& [num3, cnt] : levels) {
                    if (!mode_allowed(tw, i, num3)) continue;  // arg(p) only has modes on the twist grid
                    std::vector<XTermT> acc2;
                    for (const auto& a : acc) {
                        Cyclotomic jcoeff(1);
                        for (int j = 0; j <= cnt; ++j) {
                            if (j > 0) jcoeff = jcoeff * comp * Rat(2 * (cnt - j + 1), j);
                            XTermT nt = a;
                            nt.coeff = a.coeff * jcoeff;
                            nt.xexp = a.xexp - Rat(static_cast<long>(j) * num3, 3);
                            int removed = 0;
                            nt.mono.factors.clear();
                            for (const auto& f : a.mono.factors) {
                                if (removed < j && f[0] == static_cast<int>(s) && f[1] == 3 - i && f[2] == num3) {
                                    ++removed;
                                    continue;
                                }
                                nt.mono.factors.push_back(f);
                            }
                            if (!nt.coeff.is_zero()) acc2.push_back(std::move(nt));
                        }
                    }
                    acc = std::move(acc2);
                }
                for (auto& a : acc) next.push_back(std::move(a));
            }
            cur = std::move(next);
        }
    return cur;
}

// twisted exp of creators: exp(sum_{n<0} (arg(n)/n) x^{-n})
inline std::vector<XTermT> t_exp_creators(const std::vector<XTermT>& in, const HVec& arg, int tw, const Rat& bound) {
    std::vector<XTermT> cur = in;
    for (size_t s = 0; s < arg.ell(); ++s)
        for (int i = 1; i <= 2; ++i) {
            Cyclotomic comp = arg.at(s, i);
            if (comp.is_zero()) continue;
            std::vector<XTermT> next;
            for (const auto& t : cur) {
                std::vector<XTermT> acc{t};
                for (long num3 = 1; Rat(num3, 3) <= bound; ++num3) {
                    if (!creation_allowed(tw, i, num3)) continue;
                    Rat p(num3, 3);
                    std::vector<XTermT> acc2;
                    for (const auto& a : acc) {
                        Rat room = bound - t_weight(a.mono);
                        Cyclotomic jcoeff(1);
                        XTermT nt = a;
                        acc2.push_back(a);
                        for (int j = 1; Rat(j) * p <= room; ++j) {
                            jcoeff = jcoeff * comp * (Rat(-1) / p) * Rat(1, j);
                            nt.coeff = a.coeff * jcoeff;
                            nt.xexp = a.xexp + Rat(j) * p;
                            nt.mono.factors.push_back({static_cast<int>(s), i, static_cast<int>(num3)});
                            std::sort(nt.mono.factors.begin(), nt.mono.factors.end());
                            if (!nt.coeff.is_zero()) acc2.push_back(nt);
                        }
                    }
                    acc = std::move(acc2);
                }
                for (auto& a : acc) next.push_back(std::move(a));
            }
            cur = std::move(next);
        }
    return cur;
}

// W(v', x) w for one untwisted monomial v' (already Delta-corrected) and
// one twisted monomial.
inline void w_mono(const UMono& vm, const Cyclotomic& vc, const TMono& wm, const Cyclotomic& wc, const TwistContext& ctx,
                   XSeriesT& out) {
    const LatticeVector& mu = vm.beta;
    Rat mu_norm = norm(mu);
    if (!is_integer(mu_norm) || mod_norm(num(mu_norm), 2) != 0)
        throw std::domain_error("twisted operator: exponential with odd norm not supported");
    long half = to_long(num(mu_norm)) / 2;

    Cyclotomic base = vc * wc;
    Rat x0(0);
    if (!mu.is_zero()) {
        base = base * Cyclotomic(pow_rat(Rat(3), -half));
        // phi(mu) = (1 - zeta_3^2)^{<tau mu, mu>}, <tau mu, mu> = -norm/2
        base = base * (Cyclotomic(1) - zeta3_pow(2)).pow(-half);
        x0 = -Rat(half);
    }

    // action of e^mu on the T-part
    auto [gamma2, tscal] = t_action(ctx.mod, GroupElement::exp(mu), wm.gamma, ctx.lat, ctx.tw);
    base = base * tscal;

    HVec minus_mu = HVec::from_lattice(-mu);

    struct Partial {
        TMono mono;
        Cyclotomic coeff;
        Rat xexp;
        std::vector<std::array<int, 3>> creations;
        Rat creation_weight;
    };
    std::vector<Partial> parts{{wm, base, x0, {}, Rat(0)}};
    for (const auto& f : vm.factors) {
        int fs = f[0], fi = f[1], fn = f[2];
        std::vector<Partial> next;
        for (const auto& p : parts) {
            // annihilation modes present in the current monomial
            std::map<int, int> levels;
            for (const auto& g : p.mono.factors)
                if (g[0] == fs && g[1] == 3 - fi) ++levels[g[2]];
            for (const auto& [num3, cnt] : levels) {
                if (!mode_allowed(ctx.tw, fi, num3)) continue;
                Rat pmode(num3, 3);
                Partial q = p;
                q.coeff = p.coeff * Cyclotomic(pmode * Rat(2 * cnt)) * binomial(-pmode - 1, fn - 1);
                q.xexp = p.xexp - (pmode + fn);
                bool removed = false;
                q.mono.factors.clear();
                for (const auto& g : p.mono.factors) {
                    if (!removed && g[0] == fs && g[1] == 3 - fi && g[2] == num3) {
                        removed = true;
                        continue;
                    }
                    q.mono.factors.push_back(g);
                }
                if (!q.coeff.is_zero()) next.push_back(std::move(q));
            }
            // creation modes
            Rat room = ctx.bound - p.creation_weight;
            for (long num3 = 1; Rat(num3, 3) <= room; ++num3) {
                if (!creation_allowed(ctx.tw, fi, num3)) continue;
                Rat pmode(num3, 3);
                Partial q = p;
                q.coeff = p.coeff * binomial(pmode - 1, fn - 1);
                q.xexp = p.xexp + pmode - fn;
                q.creations.push_back({fs, fi, static_cast<int>(num3)});
                q.creation_weight = p.creation_weight + pmode;
                if (!q.coeff.is_zero()) next.push_back(std::move(q));
            }
        }
        parts = std::move(next);
    }

    for (const auto& p : parts) {
        std::vector<XTermT> terms{{p.xexp, p.mono, p.coeff}};
        terms = t_exp_annihilators(terms, minus_mu, ctx.tw);
        for (auto& t : terms) t.mono.gamma = gamma2;
        terms = t_exp_creators(terms, minus_mu, ctx.tw, ctx.bound - p.creation_weight);
        for (auto& t : terms) {
            for (const auto& cr : p.creations) t.mono.factors.push_back(cr);
            std::sort(t.mono.factors.begin(), t.mono.factors.end());
            if (t_weight(t.mono) > ctx.bound) continue;
            add_to(out[t.xexp], t.mono, t.coeff);
        }
    }
}

}  // namespace vop

// Y^tau(v, x) w = W(e^{Delta_x} v, x) w as a Laurent series in x.
inline XSeriesT y_twisted_series(const UState& v, const TState& w, const TwistContext& ctx) {
    XSeriesT out;
    for (const auto& [vm, vc] : v) {
        UState single;
        single.emplace(vm, vc);
        auto corrected = vop::delta_exp(single, ctx.delta, ctx.tw);
        for (const auto& [shift, st] : corrected)
            for (const auto& [m2, c2] : st)
                for (const auto& [wm, wc] : w) {
                    XSeriesT partial;
                    vop::w_mono(m2, c2, wm, wc, ctx, partial);
                    for (const auto& [xe, ts] : partial)
                        for (const auto& [tm, tc] : ts) add_to(out[xe + shift], tm, tc);
                }
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.empty())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

// coefficient of x^{-n-1} in Y^tau(v, x) w, n in (1/3)Z
inline TState twisted_coeff(const UState& v, const Rat& n, const TState& w, const TwistContext& ctx) {
    XSeriesT s = y_twisted_series(v, w, ctx);
    auto it = s.find(-n - 1);
    return it == s.end() ? TState{} : it->second;
}

// ---------------------------------------------------------------------------
// The standard elements of (V_L^tau)^{(x)l} used throughout.

inline LatticeVector beta_vec(size_t ell, size_t s, int i) {
    auto b = beta_basis(i);
    LatticeVector v(ell);
    v.site(s) = {Int(b[0]), Int(b[1])};
    return v;
}

// omega^{(s)} = 1/12 sum_i beta_i^{(s)}(-1)^2 1
inline UState omega_site(size_t ell, size_t s) {
    UState out;
    for (int i = 0; i < 3; ++i) {
        HVec h = HVec::from_lattice(beta_vec(ell, s, i));
        out = out + heisenberg_state({{h, 1}, {h, 1}}, LatticeVector::zero(ell), Cyclotomic(Rat(1, 12)));
    }
    return out;
}

// P^{(s)} = sum_i (e^{beta_i} - e^{-beta_i})
inline UState p_site(size_t ell, size_t s) {
    UState out;
    for (int i = 0; i < 3; ++i) {
        out = out + exp_state(beta_vec(ell, s, i));
        out = out - exp_state(-beta_vec(ell, s, i));
    }
    return out;
}

// J^{(s)} = -1/6 sum_i beta_i(-2)(beta_{i+1}-beta_{i+2})(-1) 1
//           - sum_i (beta_{i+1}-beta_{i+2})(-1)(e^{beta_i} - e^{-beta_i})
inline UState j_site(size_t ell, size_t s) {
    UState out;
    for (int i = 0; i < 3; ++i) {
        LatticeVector bi = beta_vec(ell, s, i);
        LatticeVector diff = beta_vec(ell, s, i + 1) - beta_vec(ell, s, i + 2);
        HVec hb = HVec::from_lattice(bi);
        HVec hd = HVec::from_lattice(diff);
        out = out + heisenberg_state({{hb, 2}, {hd, 1}}, LatticeVector::zero(ell), Cyclotomic(Rat(-1, 6)));
        out = out + heisenberg_state({{hd, 1}}, bi, Cyclotomic(-1));
        out = out - heisenberg_state({{hd, 1}}, -bi, Cyclotomic(-1));
    }
    return out;
}

}  // namespace cxd
