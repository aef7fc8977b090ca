#pragma once

#include "cxd/codes.hpp"
#include "cxd/qseries.hpp"
#include "cxd/rational.hpp"

#include <array>
#include <map>
#include <thread>
#include <vector>

namespace cxd {

// Element of (L^perp)^{+l}, L = sqrt2 * A2, in the integral basis
// bt1 = beta1/2, bt2 = (beta1 - beta2)/6 per site.  In these coordinates
// beta1 = (2,0), beta2 = (2,-6), beta0 = (-4,6), and every element of the
// dual lattice is integral, so membership tests are exact integer
// arithmetic.
class LatticeVector {
  public:
    LatticeVector() = default;
    explicit LatticeVector(size_t ell) : c_(ell, {Int(0), Int(0)}) {}
    LatticeVector(std::vector<std::array<Int, 2>> coords) : c_(std::move(coords)) {}

    static LatticeVector zero(size_t ell) { return LatticeVector(ell); }

    size_t ell() const { return c_.size(); }
    const std::array<Int, 2>& site(size_t s) const { return c_[s]; }
    std::array<Int, 2>& site(size_t s) { return c_[s]; }

    bool is_zero() const {
        for (const auto& m : c_)
            if (m[0] != 0 || m[1] != 0) return false;
        return true;
    }

    friend LatticeVector operator+(LatticeVector u, const LatticeVector& v) {
        check_len(u, v);
        for (size_t s = 0; s < u.ell(); ++s) {
            u.c_[s][0] += v.c_[s][0];
            u.c_[s][1] += v.c_[s][1];
        }
        return u;
    }
    friend LatticeVector operator-(LatticeVector u, const LatticeVector& v) {
        check_len(u, v);
        for (size_t s = 0; s < u.ell(); ++s) {
            u.c_[s][0] -= v.c_[s][0];
            u.c_[s][1] -= v.c_[s][1];
        }
        return u;
    }
    LatticeVector operator-() const {
        LatticeVector w = *this;
        for (auto& m : w.c_) {
            m[0] = -m[0];
            m[1] = -m[1];
        }
        return w;
    }
    friend LatticeVector operator*(const Int& k, LatticeVector v) {
        for (auto& m : v.c_) {
            m[0] *= k;
            m[1] *= k;
        }
        return v;
    }

    // per-site (m1,m2) -> (m1+m2, -3 m1 - 2 m2); tau^3 = 1
    LatticeVector tau() const {
        LatticeVector w(ell());
        for (size_t s = 0; s < ell(); ++s) {
            w.c_[s][0] = c_[s][0] + c_[s][1];
            w.c_[s][1] = -3 * c_[s][0] - 2 * c_[s][1];
        }
        return w;
    }

    LatticeVector tau_pow(int k) const {
        LatticeVector w = *this;
        for (int i = 0; i < mod_norm(k, 3); ++i) w = w.tau();
        return w;
    }

    // Exact preimage under (1 - tau^tw) when it is integral; both per-site
    // matrices have determinant 3.
    std::optional<LatticeVector> one_minus_tau_preimage(int tw = 1) const {
        LatticeVector w(ell());
        for (size_t s = 0; s < ell(); ++s) {
            // tw = 1: inverse of [[0,-1],[3,3]] is (1/3)[[3,1],[-3,0]]
            // tw = 2: inverse of [[3,1],[-3,0]] is (1/3)[[0,-1],[3,3]]
            Int a = (tw == 1) ? Int(3 * c_[s][0] + c_[s][1]) : Int(-c_[s][1]);
            Int b3 = (tw == 1) ? Int(-3 * c_[s][0]) : Int(3 * c_[s][0] + 3 * c_[s][1]);
            if (a % 3 != 0 || b3 % 3 != 0) return std::nullopt;
            w.c_[s][0] = a / 3;
            w.c_[s][1] = b3 / 3;
        }
        return w;
    }

    bool operator==(const LatticeVector& o) const { return c_ == o.c_; }
    bool operator<(const LatticeVector& o) const {
        if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
        for (size_t s = 0; s < c_.size(); ++s)
            for (int j = 0; j < 2; ++j) {
                if (c_[s][j] != o.c_[s][j]) return c_[s][j] < o.c_[s][j];
            }
        return false;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += "; ";
            s += c_[i][0].str() + "," + c_[i][1].str();
        }
        return s + "]";
    }

  private:
    static void check_len(const LatticeVector& u, const LatticeVector& v) {
        if (u.ell() != v.ell()) throw std::invalid_argument("lattice vector length mismatch");
    }
    std::vector<std::array<Int, 2>> c_;
};

// Gram data per site: <bt1,bt1> = 1, <bt2,bt2> = 1/3, <bt1,bt2> = 1/2.
inline Rat inner_product(const LatticeVector& u, const LatticeVector& v) {
    if (u.ell() != v.ell()) throw std::invalid_argument("lattice vector length mismatch");
    Rat s(0);
    for (size_t i = 0; i < u.ell(); ++i) {
        const Int &m1 = u.site(i)[0], &m2 = u.site(i)[1];
        const Int &n1 = v.site(i)[0], &n2 = v.site(i)[1];
        s += Rat(m1 * n1) + Rat(m1 * n2 + m2 * n1, 2) + Rat(m2 * n2, 3);
    }
    return s;
}

inline Rat norm(const LatticeVector& v) { return inner_product(v, v); }

// beta(x) for x in K: beta(0)=0, beta(a)=beta2/2, beta(b)=beta0/2,
// beta(c)=beta1/2, in bt coordinates.
inline std::array<long, 2> beta_of_symbol(uint8_t x) {
    switch (x) {
        case K0: return {0, 0};
        case KA: return {1, -3};
        case KB: return {-2, 3};
        default: return {1, 0};  // KC
    }
}

inline std::array<long, 2> beta_basis(int i) {
    // beta_0, beta_1, beta_2 (index mod 3)
    switch (mod_norm(i, 3)) {
        case 0: return {-4, 6};
        case 1: return {2, 0};
        default: return {2, -6};
    }
}

// P(x) = 1 iff x != 0.
inline int p_of(uint8_t x) { return x == 0 ? 0 : 1; }

// Q(x,y) = 1 if x = y != 0 or tau^2(x) = y != 0, else 0.
inline int q_of(uint8_t x, uint8_t y) {
    if (x == 0 || y == 0) return 0;
    if (x == y) return 1;
    return ktab::tau[ktab::tau[x]] == y ? 1 : 0;
}

inline std::pair<int, int> pq_values(uint8_t x, uint8_t y) { return {p_of(x), q_of(x, y)}; }

struct CosetLabel {
    KWord lambda;
    Z3Word gamma;
};

// Per-site coordinates of a dual-lattice element relative to its coset:
// v = beta(x) + (-i/3 + m1) beta1 + (i/3 + m2) beta2.
struct SiteCoset {
    uint8_t x;
    int i;
    Int m1, m2;
};

inline SiteCoset decompose_site(const Int& c1, const Int& c2) {
    // the K symbol is determined by the parities of the bt coordinates
    int p1 = mod_norm(c1, 2), p2 = mod_norm(c2, 2);
    uint8_t x = p1 ? (p2 ? KA : KC) : (p2 ? KB : K0);
    auto b = beta_of_symbol(x);
    Int r1 = c1 - b[0], r2 = c2 - b[1];  // r = m1*beta1 + m2*beta2 + (i/3)(-beta1+beta2)
    // r1 = 2 m1 + 2 m2, r2 = -2 i - 6 m2
    int i = mod_norm(-(r2 / 2), 3);
    Int m2 = -(r2 + 2 * i) / 6;
    Int m1 = r1 / 2 - m2;
    return SiteCoset{x, i, m1, m2};
}

inline SiteCoset decompose_site(const LatticeVector& v, size_t s) { return decompose_site(v.site(s)[0], v.site(s)[1]); }

// Vector of the coset L_(lambda,gamma) with given integer offsets.
inline LatticeVector coset_vector(const CosetLabel& label, const std::vector<std::array<long, 2>>& offsets) {
    size_t ell = label.lambda.size();
    if (label.gamma.size() != ell || offsets.size() != ell) throw std::invalid_argument("coset_vector: length mismatch");
    LatticeVector v(ell);
    for (size_t s = 0; s < ell; ++s) {
        auto bx = beta_of_symbol(label.lambda[s]);
        long i = label.gamma[s];
        // (-i/3 + m1) beta1 + (i/3 + m2) beta2 = (i/3)(beta2 - beta1) + m1 beta1 + m2 beta2
        v.site(s)[0] = bx[0] + 2 * offsets[s][0] + 2 * offsets[s][1];
        v.site(s)[1] = bx[1] - 2 * i - 6 * offsets[s][1];
    }
    return v;
}

inline KWord kword_of(const LatticeVector& v) {
    KWord w(v.ell());
    for (size_t s = 0; s < v.ell(); ++s) w[s] = decompose_site(v, s).x;
    return w;
}

inline Z3Word z3word_of(const LatticeVector& v) {
    Z3Word w(v.ell());
    for (size_t s = 0; s < v.ell(); ++s) w[s] = static_cast<uint8_t>(decompose_site(v, s).i);
    return w;
}

// varphi: componentwise -P(x) + m1 + m2 (mod 3); an additive homomorphism.
inline Z3Word varphi(const LatticeVector& v) {
    Z3Word w(v.ell());
    for (size_t s = 0; s < v.ell(); ++s) {
        SiteCoset sc = decompose_site(v, s);
        w[s] = static_cast<uint8_t>(mod_norm(Int(-p_of(sc.x) + sc.m1 + sc.m2), 3));
    }
    return w;
}

// The glued lattice L_{CxD} inside (L^perp)^{+l}.
class GluedLattice {
  public:
    GluedLattice(Code C, Code D) : C_(std::move(C)), D_(std::move(D)) {
        if (C_.kind() != CodeKind::K || D_.kind() != CodeKind::Z3)
            throw std::invalid_argument("GluedLattice needs a K-code and a Z3-code");
        if (C_.length() != D_.length()) throw std::invalid_argument("code length mismatch");
    }

    static GluedLattice plain(size_t ell) {
        return GluedLattice(Code::zero(CodeKind::K, ell), Code::zero(CodeKind::Z3, ell));
    }

    const Code& C() const { return C_; }
    const Code& D() const { return D_; }
    size_t ell() const { return C_.length(); }
    long rank() const { return 2 * static_cast<long>(ell()); }

    bool contains(const LatticeVector& v) const {
        if (v.ell() != ell()) return false;
        return C_.contains(kword_of(v)) && D_.contains(z3word_of(v));
    }

    // Z-module generators: the per-site basis of L^{+l} plus one coset
    // vector per code generator.
    std::vector<LatticeVector> generators() const {
        std::vector<LatticeVector> g;
        size_t l = ell();
        for (size_t s = 0; s < l; ++s) {
            LatticeVector b1(l), b2(l);
            b1.site(s) = {Int(2), Int(0)};
            b2.site(s) = {Int(2), Int(-6)};
            g.push_back(b1);
            g.push_back(b2);
        }
        std::vector<std::array<long, 2>> zero_off(l, {0, 0});
        for (const auto& lam : C_.generators()) g.push_back(coset_vector({lam, Z3Word(l, 0)}, zero_off));
        for (const auto& gam : D_.generators()) g.push_back(coset_vector({KWord(l, 0), gam}, zero_off));
        return g;
    }

    // Determinant of the Gram matrix of a Z-basis (exact rational).
    Rat gram_det() const {
        std::vector<std::vector<Int>> basis = hnf_basis();
        size_t n = basis.size();
        std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
        std::vector<LatticeVector> bv;
        for (const auto& row : basis) bv.push_back(from_coords(row));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) g[i][j] = inner_product(bv[i], bv[j]);
        // Gaussian elimination determinant
        Rat det(1);
        for (size_t c = 0; c < n; ++c) {
            size_t piv = c;
            while (piv < n && g[piv][c] == 0) ++piv;
            if (piv == n) return Rat(0);
            if (piv != c) {
                std::swap(g[piv], g[c]);
                det = -det;
            }
            det *= g[c][c];
            for (size_t r = c + 1; r < n; ++r) {
                if (g[r][c] == 0) continue;
                Rat f = g[r][c] / g[c][c];
                for (size_t k = c; k < n; ++k) g[r][k] -= f * g[c][k];
            }
        }
        return det;
    }

    // Integral lattice with all basis norms even.
    bool is_even() const {
        std::vector<std::vector<Int>> basis = hnf_basis();
        std::vector<LatticeVector> bv;
        for (const auto& row : basis) bv.push_back(from_coords(row));
        for (size_t i = 0; i < bv.size(); ++i)
            for (size_t j = i; j < bv.size(); ++j) {
                Rat p = inner_product(bv[i], bv[j]);
                if (!is_integer(p)) return false;
                if (i == j && mod_norm(num(p), 2) != 0) return false;
            }
        return true;
    }

    // Theta series sum_{v} q^{<v,v>/2}, computed as the codeword sum of
    // products of the 12 cached per-coset rank-2 theta series.
    QSeries theta(long order_num, unsigned jobs = 1) const {
        size_t l = ell();
        // cache the 12 coset series and their leading exponents
        std::array<std::array<QSeries, 3>, 4> coset{{{QSeries(0), QSeries(0), QSeries(0)},
                                                     {QSeries(0), QSeries(0), QSeries(0)},
                                                     {QSeries(0), QSeries(0), QSeries(0)},
                                                     {QSeries(0), QSeries(0), QSeries(0)}}};
        std::array<std::array<long, 3>, 4> lead{};
        for (int x = 0; x < 4; ++x)
            for (int i = 0; i < 3; ++i) {
                coset[x][i] = coset_theta(static_cast<uint8_t>(x), i, order_num);
                lead[x][i] = coset[x][i].is_zero() ? order_num + 1 : QSeries::to_num(*coset[x][i].leading_exponent());
            }
        const auto& cwords = C_.words();
        const auto& dwords = D_.words();

        // cheapest possible leading exponent per K-symbol, over all gamma
        std::array<long, 4> lead_min{};
        for (int x = 0; x < 4; ++x) lead_min[x] = std::min({lead[x][0], lead[x][1], lead[x][2]});
        // per-coset series with the leading exponent factored out
        std::array<std::array<QSeries, 3>, 4> reduced = coset;
        for (int x = 0; x < 4; ++x)
            for (int i = 0; i < 3; ++i)
                reduced[x][i] = coset[x][i].shifted(Rat(-lead[x][i], QSeries::kDen));

        auto accumulate_range = [&](size_t begin, size_t end) {
            QSeries total(order_num);
            for (size_t ci = begin; ci < end; ++ci) {
                const auto& lam = cwords[ci];
                long lam_lead = 0;
                for (size_t s = 0; s < l; ++s) lam_lead += lead_min[lam[s]];
                if (lam_lead > order_num) continue;
                for (const auto& gam : dwords) {
                    long lead_sum = 0;
                    for (size_t s = 0; s < l; ++s) lead_sum += lead[lam[s]][gam[s]];
                    if (lead_sum > order_num) continue;
                    // multiply the per-site series with their leading
                    // exponents factored out, so the truncation budget
                    // reserves room for the leads still to come
                    QSeries prod = QSeries::one(order_num - lead_sum);
                    for (size_t s = 0; s < l && !prod.is_zero(); ++s) prod *= reduced[lam[s]][gam[s]];
                    total += prod.shifted(Rat(lead_sum, QSeries::kDen)).truncated(order_num);
                }
            }
            return total;
        };

        if (jobs <= 1 || cwords.size() < 2 * jobs) return accumulate_range(0, cwords.size());

        std::vector<QSeries> partial(jobs, QSeries(order_num));
        std::vector<std::thread> threads;
        size_t chunk = (cwords.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            size_t b = t * chunk, e = std::min(cwords.size(), b + chunk);
            if (b >= e) break;
            threads.emplace_back([&, t, b, e] { partial[t] = accumulate_range(b, e); });
        }
        for (auto& th : threads) th.join();
        QSeries total(order_num);
        for (const auto& p : partial) total += p;  // fixed reduction order
        return total;
    }

    // Rank-2 theta series of the coset L^{(x,i)} of L in L^perp, by
    // exhaustive short-vector enumeration inside a box.
    static QSeries coset_theta(uint8_t x, int i, long order_num) {
        QSeries s(order_num);
        Rat bound = Rat(2 * order_num, QSeries::kDen);  // <v,v> <= 2 * order
        // v = beta(x) + (i/3)(beta2 - beta1) + m1 beta1 + m2 beta2; with
        // u = m1 + f1, w = m2 + f2 the norm is 4u^2 - 4uw + 4w^2 >= 2(u^2 + w^2).
        Rat f1 = Rat(-i, 3), f2 = Rat(i, 3);
        if (x == KA) {
            f1 += Rat(0);
            f2 += Rat(1, 2);
        } else if (x == KB) {
            f1 -= Rat(1, 2);
            f2 -= Rat(1, 2);
        } else if (x == KC) {
            f1 += Rat(1, 2);
        }
        long radius = 1;
        while (Rat(2 * (radius - 1) * (radius - 1)) < bound) ++radius;
        for (long m1 = -radius - 1; m1 <= radius + 1; ++m1) {
            for (long m2 = -radius - 1; m2 <= radius + 1; ++m2) {
                Rat u = Rat(m1) + f1, w = Rat(m2) + f2;
                Rat n = 4 * u * u - 4 * u * w + 4 * w * w;
                if (n > bound) continue;
                s.add_term(n / 2, Cyclotomic(1));
            }
        }
        return s;
    }

  private:
    LatticeVector from_coords(const std::vector<Int>& row) const {
        LatticeVector v(ell());
        for (size_t s = 0; s < ell(); ++s) v.site(s) = {row[2 * s], row[2 * s + 1]};
        return v;
    }

    // Hermite-style integer row reduction of the generator matrix; returns
    // 2l independent rows.
    std::vector<std::vector<Int>> hnf_basis() const {
        size_t n = 2 * ell();
        std::vector<std::vector<Int>> rows;
        for (const auto& g : generators()) {
            std::vector<Int> r(n);
            for (size_t s = 0; s < ell(); ++s) {
                r[2 * s] = g.site(s)[0];
                r[2 * s + 1] = g.site(s)[1];
            }
            rows.push_back(std::move(r));
        }
        size_t rank = 0;
        for (size_t c = 0; c < n; ++c) {
            // gcd-reduce column c over rows rank..end
            while (true) {
                size_t piv = rows.size();
                for (size_t r = rank; r < rows.size(); ++r)
                    if (rows[r][c] != 0 && (piv == rows.size() || abs(rows[r][c]) < abs(rows[piv][c]))) piv = r;
                if (piv == rows.size()) break;
                std::swap(rows[rank], rows[piv]);
                bool done = true;
                for (size_t r = rank + 1; r < rows.size(); ++r) {
                    if (rows[r][c] == 0) continue;
                    Int q = rows[r][c] / rows[rank][c];
                    for (size_t k = 0; k < n; ++k) rows[r][k] -= q * rows[rank][k];
                    if (rows[r][c] != 0) done = false;
                }
                if (done) break;
            }
            if (rank < rows.size() && rows[rank][c] != 0) ++rank;
        }
        rows.resize(rank);
        if (rank != n) throw std::logic_error("glued lattice not of full rank");
        return rows;
    }

    Code C_, D_;
};

// Membership in the radical R of the twisted alternating form: v must lie
// in L_{Cx0} and satisfy sum_s delta_s (P(lambda_s) - m1 - m2) = 0 (mod 3)
// for every delta in D.
inline bool radical_member(const GluedLattice& lat, const LatticeVector& v) {
    if (!lat.contains(v)) throw std::invalid_argument("radical_member: vector not in the lattice");
    std::vector<Int> site_val(v.ell());
    for (size_t s = 0; s < v.ell(); ++s) {
        SiteCoset sc = decompose_site(v, s);
        if (sc.i != 0) return false;  // R is contained in L_{Cx0}
        site_val[s] = p_of(sc.x) - sc.m1 - sc.m2;
    }
    for (const auto& delta : lat.D().generators()) {
        Int acc(0);
        for (size_t s = 0; s < v.ell(); ++s) acc += delta[s] * site_val[s];
        if (mod_norm(acc, 3) != 0) return false;
    }
    return true;
}

}  // namespace cxd
