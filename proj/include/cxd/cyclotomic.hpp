#pragma once

#include "cxd/rational.hpp"

#include <array>
#include <compare>
#include <sstream>
#include <stdexcept>

namespace cxd {

// Element of Q(zeta_24), an exact degree-8 number field.  Coordinates are
// taken in the power basis {zeta^k : 0 <= k <= 7} modulo the 24th
// cyclotomic polynomial x^8 - x^4 + 1, i.e. zeta^8 = zeta^4 - 1.
class Cyclotomic {
  public:
    Cyclotomic() { c_.fill(Rat(0)); }
    Cyclotomic(long n) : Cyclotomic() { c_[0] = n; }
    Cyclotomic(const Int& n) : Cyclotomic() { c_[0] = n; }
    Cyclotomic(const Rat& r) : Cyclotomic() { c_[0] = r; }

    // zeta_24^k for any integer k.
    static Cyclotomic zeta_pow(long k) {
        k = mod_norm(k, 24);
        Cyclotomic z;
        if (k < 8) {
            z.c_[k] = 1;
            return z;
        }
        // zeta^k = zeta^(k-4) - zeta^(k-8)
        return zeta_pow(k - 4) - zeta_pow(k - 8);
    }

    // Primitive n-th root of unity zeta_24^(24/n); n must divide 24.
    static Cyclotomic root_of_unity(long n) {
        if (n <= 0 || 24 % n != 0) throw std::invalid_argument("root_of_unity: n must divide 24");
        return zeta_pow(24 / n);
    }

    const Rat& coeff(int i) const { return c_.at(i); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (int i = 1; i < 8; ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    // Rational part; throws when the element is not rational.
    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
        return c_[0];
    }

    Cyclotomic operator-() const {
        Cyclotomic z;
        for (int i = 0; i < 8; ++i) z.c_[i] = -c_[i];
        return z;
    }

    Cyclotomic& operator+=(const Cyclotomic& o) {
        for (int i = 0; i < 8; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Cyclotomic& operator-=(const Cyclotomic& o) {
        for (int i = 0; i < 8; ++i) c_[i] -= o.c_[i];
        return *this;
    }

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }

    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        std::array<Rat, 15> t;
        t.fill(Rat(0));
        for (int i = 0; i < 8; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < 8; ++j) {
                if (b.c_[j] == 0) continue;
                t[i + j] += a.c_[i] * b.c_[j];
            }
        }
        // reduce top-down by zeta^k = zeta^(k-4) - zeta^(k-8)
        for (int k = 14; k >= 8; --k) {
            if (t[k] == 0) continue;
            t[k - 4] += t[k];
            t[k - 8] -= t[k];
            t[k] = 0;
        }
        Cyclotomic z;
        for (int i = 0; i < 8; ++i) z.c_[i] = t[i];
        return z;
    }

    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    friend Cyclotomic operator*(const Rat& r, Cyclotomic a) {
        for (auto& x : a.c_) x *= r;
        return a;
    }
    friend Cyclotomic operator*(Cyclotomic a, const Rat& r) { return r * a; }

    bool operator==(const Cyclotomic& o) const { return c_ == o.c_; }
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
    // Lexicographic order on coordinates; used only as a map key order.
    auto operator<=>(const Cyclotomic& o) const { return c_ <=> o.c_; }

    // Multiplicative inverse via Gaussian elimination on the multiplication
    // matrix (the field has no zero divisors).
    Cyclotomic inverse() const {
        if (is_zero()) throw std::domain_error("cyclotomic inverse of zero");
        // columns of M are coordinates of (*this) * zeta^j
        std::array<std::array<Rat, 9>, 8> m;  // augmented with e_0
        for (int j = 0; j < 8; ++j) {
            Cyclotomic col = *this * zeta_pow(j);
            for (int i = 0; i < 8; ++i) m[i][j] = col.c_[i];
        }
        for (int i = 0; i < 8; ++i) m[i][8] = (i == 0) ? Rat(1) : Rat(0);
        for (int col = 0; col < 8; ++col) {
            int piv = -1;
            for (int r = col; r < 8; ++r)
                if (m[r][col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw std::domain_error("cyclotomic inverse: singular (zero element?)");
            std::swap(m[col], m[piv]);
            Rat d = m[col][col];
            for (int k = col; k <= 8; ++k) m[col][k] /= d;
            for (int r = 0; r < 8; ++r) {
                if (r == col || m[r][col] == 0) continue;
                Rat f = m[r][col];
                for (int k = col; k <= 8; ++k) m[r][k] -= f * m[col][k];
            }
        }
        Cyclotomic z;
        for (int j = 0; j < 8; ++j) z.c_[j] = m[j][8];
        return z;
    }

    Cyclotomic pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclotomic out(1), b = *this;
        long n = e;
        while (n > 0) {
            if (n & 1) out *= b;
            b *= b;
            n >>= 1;
        }
        return out;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < 8; ++i) {
            if (c_[i] == 0) continue;
            Rat a = c_[i];
            if (!first) {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            } else if (a < 0 && i > 0) {
                os << "-";
                a = -a;
            } else if (a < 0) {
                // keep sign inside the leading rational
            }
            if (i == 0) {
                os << rat_str(first ? c_[0] : a);
            } else {
                if (a != 1) os << rat_str(a) << "*";
                os << "z24";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }

  private:
    std::array<Rat, 8> c_;
};

inline Cyclotomic zeta3() { return Cyclotomic::root_of_unity(3); }
inline Cyclotomic zeta8() { return Cyclotomic::root_of_unity(8); }
inline Cyclotomic zeta24() { return Cyclotomic::root_of_unity(24); }
// sqrt(-3) = zeta_3 - zeta_3^2
inline Cyclotomic sqrt_minus3() { return zeta3() - zeta3() * zeta3(); }
// zeta_3^k for any integer k
inline Cyclotomic zeta3_pow(long k) { return Cyclotomic::zeta_pow(8 * mod_norm(k, 3)); }

}  // namespace cxd
