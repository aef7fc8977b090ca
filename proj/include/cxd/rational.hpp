#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace cxd {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

// Floor of a rational, as an integer.
inline Int rat_floor(const Rat& r) {
    Int q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) --q;
    return q;
}

inline long to_long(const Int& n) {
    return static_cast<long>(n);
}

// Generalized binomial coefficient binom(x, k) = x(x-1)...(x-k+1)/k!
// for rational x and integer k >= 0 (0 for k < 0).
inline Rat binomial(const Rat& x, long k) {
    if (k < 0) return Rat(0);
    Rat out(1);
    for (long j = 0; j < k; ++j) {
        out *= (x - j);
        out /= (j + 1);
    }
    return out;
}

inline Int binomial_int(long n, long k) {
    if (k < 0 || k > n) return Int(0);
    Int out(1);
    for (long j = 0; j < k; ++j) {
        out *= (n - j);
        out /= (j + 1);
    }
    return out;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("pow_rat: zero to negative power");
        return Rat(1) / pow_rat(base, -e);
    }
    Rat out(1), b = base;
    long n = e;
    while (n > 0) {
        if (n & 1) out *= b;
        b *= b;
        n >>= 1;
    }
    return out;
}

inline std::string rat_str(const Rat& r) {
    std::string s = num(r).str();
    if (den(r) != 1) s += "/" + den(r).str();
    return s;
}

// Least nonnegative residue.
inline long mod_norm(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline long mod_norm(const Int& a, long m) {
    Int r = a % m;
    if (r < 0) r += m;
    return static_cast<long>(r);
}

}  // namespace cxd
