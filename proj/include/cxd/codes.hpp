#pragma once

#include "cxd/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cxd {

// Symbols of Klein's four-group K = {0, a, b, c}, indexed 0..3.
enum : uint8_t { K0 = 0, KA = 1, KB = 2, KC = 3 };

namespace ktab {
// addition table of K (Klein four-group)
inline constexpr uint8_t add[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
// tau: a -> b -> c -> a, 0 fixed
inline constexpr uint8_t tau[4] = {0, 2, 3, 1};
// x . y = 1 iff x != y, both nonzero
inline constexpr int dot[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 1},
    {0, 1, 0, 1},
    {0, 1, 1, 0},
};
inline constexpr char name[4] = {'0', 'a', 'b', 'c'};
}  // namespace ktab

// x o y: 1 if x = y != 0, -1/2 if x != y both nonzero, 0 otherwise.
inline Rat k_circ(uint8_t x, uint8_t y) {
    if (x == 0 || y == 0) return Rat(0);
    return x == y ? Rat(1) : Rat(-1, 2);
}

inline int k_dot(uint8_t x, uint8_t y) { return ktab::dot[x][y]; }

// Pairing values (circ, dot) for a pair of K symbols.
inline std::pair<Rat, int> k_pair(uint8_t x, uint8_t y) { return {k_circ(x, y), k_dot(x, y)}; }

using KWord = std::vector<uint8_t>;   // entries in {0..3} = {0,a,b,c}
using Z3Word = std::vector<uint8_t>;  // entries in {0,1,2}

inline KWord k_add(const KWord& u, const KWord& v) {
    KWord w(u.size());
    for (size_t i = 0; i < u.size(); ++i) w[i] = ktab::add[u[i]][v[i]];
    return w;
}

inline KWord tau_word(const KWord& u) {
    KWord w(u.size());
    for (size_t i = 0; i < u.size(); ++i) w[i] = ktab::tau[u[i]];
    return w;
}

inline KWord tau_word_pow(KWord u, int k) {
    for (int i = 0; i < mod_norm(k, 3); ++i) u = tau_word(u);
    return u;
}

inline int k_inner(const KWord& u, const KWord& v) {
    int s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += ktab::dot[u[i]][v[i]];
    return s & 1;
}

inline Z3Word z3_add(const Z3Word& u, const Z3Word& v) {
    Z3Word w(u.size());
    for (size_t i = 0; i < u.size(); ++i) w[i] = static_cast<uint8_t>((u[i] + v[i]) % 3);
    return w;
}

inline Z3Word z3_neg(const Z3Word& u) {
    Z3Word w(u.size());
    for (size_t i = 0; i < u.size(); ++i) w[i] = static_cast<uint8_t>((3 - u[i]) % 3);
    return w;
}

inline Z3Word z3_sub(const Z3Word& u, const Z3Word& v) { return z3_add(u, z3_neg(v)); }

inline int z3_inner(const Z3Word& u, const Z3Word& v) {
    int s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s % 3;
}

template <typename Word>
inline long weight(const Word& u) {
    long w = 0;
    for (auto x : u)
        if (x != 0) ++w;
    return w;
}

inline bool is_zero_word(const std::vector<uint8_t>& u) {
    return std::all_of(u.begin(), u.end(), [](uint8_t x) { return x == 0; });
}

inline std::string word_str(const KWord& u) {
    std::string s;
    for (auto x : u) s += ktab::name[x];
    return s;
}

inline std::string z3_str(const Z3Word& u) {
    std::string s;
    for (auto x : u) s += static_cast<char>('0' + x);
    return s;
}

enum class CodeKind { K, Z3 };

// A code over K or Z3: the additive span of its generators.  Internally a
// K-word of length l is an F2-vector of dimension 2l (coordinates in the
// {a, c} basis per position); a Z3-word is an F3-vector of dimension l.
class Code {
  public:
    static constexpr long kEnumCap = 1 << 24;  // largest code enumerated eagerly

    Code(CodeKind kind, size_t length, std::vector<std::vector<uint8_t>> generators)
        : kind_(kind), len_(length), gens_(std::move(generators)) {
        for (const auto& g : gens_) {
            if (g.size() != len_) throw std::invalid_argument("generator length mismatch");
            for (auto s : g)
                if (s > (kind_ == CodeKind::K ? 3 : 2)) throw std::invalid_argument("bad symbol in generator");
        }
        build_basis();
    }

    static Code zero(CodeKind kind, size_t length) { return Code(kind, length, {}); }

    CodeKind kind() const { return kind_; }
    size_t length() const { return len_; }
    const std::vector<std::vector<uint8_t>>& generators() const { return gens_; }

    int field_order() const { return kind_ == CodeKind::K ? 2 : 3; }
    size_t dim_ambient() const { return kind_ == CodeKind::K ? 2 * len_ : len_; }
    size_t rank() const { return basis_.size(); }

    Int size() const {
        Int s(1);
        for (size_t i = 0; i < rank(); ++i) s *= field_order();
        return s;
    }

    Int ambient_size() const {
        Int s(1);
        for (size_t i = 0; i < len_; ++i) s *= (kind_ == CodeKind::K ? 4 : 3);
        return s;
    }

    bool contains(const std::vector<uint8_t>& w) const {
        if (w.size() != len_) return false;
        std::vector<int> v = to_vec(w);
        reduce(v);
        return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
    }

    // All codewords (cached); throws if the code is too large to enumerate.
    const std::vector<std::vector<uint8_t>>& words() const {
        if (!words_.empty() || rank() == 0) {
            if (words_.empty()) words_.push_back(std::vector<uint8_t>(len_, 0));
            return words_;
        }
        if (size() > kEnumCap) throw std::runtime_error("code too large to enumerate");
        int q = field_order();
        size_t r = rank();
        auto add_scaled = [q](std::vector<int>& acc, const std::vector<int>& b, int k) {
            for (size_t j = 0; j < acc.size(); ++j) acc[j] = mod_norm(acc[j] + k * b[j], q);
        };
        std::vector<int> digits(r, 0);
        std::vector<int> acc(dim_ambient(), 0);
        words_.reserve(static_cast<size_t>(to_long(size())));
        while (true) {
            words_.push_back(from_vec(acc));
            size_t i = 0;
            for (; i < r; ++i) {
                add_scaled(acc, basis_[i], 1);
                if (++digits[i] < q) break;
                digits[i] = 0;
            }
            if (i == r) break;
        }
        return words_;
    }

    // Minimum weight over nonzero words; empty for the zero code (the
    // +infinity convention).
    std::optional<long> min_weight() const {
        if (rank() == 0) return std::nullopt;
        long best = static_cast<long>(len_) + 1;
        for (const auto& w : words()) {
            if (is_zero_word(w)) continue;
            best = std::min(best, weight(w));
        }
        return best;
    }

    bool is_even() const {
        if (kind_ != CodeKind::K) throw std::logic_error("evenness is a K-code notion");
        for (const auto& w : words())
            if (weight(w) % 2 != 0) return false;
        return true;
    }

    bool is_tau_invariant() const {
        if (kind_ != CodeKind::K) return true;  // tau acts trivially on Z3
        for (const auto& g : gens_)
            if (!contains(tau_word(g))) return false;
        return true;
    }

    bool is_self_orthogonal() const {
        for (const auto& g : gens_)
            for (const auto& h : gens_) {
                int p = kind_ == CodeKind::K ? k_inner(g, h) : z3_inner(g, h);
                if (p != 0) return false;
            }
        return true;
    }

    bool is_self_dual() const { return is_self_orthogonal() && 2 * rank() == dim_ambient(); }

    // Dual code via the kernel of the pairing matrix (works at any length;
    // no enumeration needed).
    Code dual() const {
        // rows: pairing functionals of the basis codewords
        size_t n = dim_ambient();
        std::vector<std::vector<int>> rows;
        for (const auto& b : basis_) rows.push_back(pairing_functional(b));
        // kernel over F_q by echelonizing rows
        int q = field_order();
        size_t r = 0;
        std::vector<int> pivot_col;
        for (size_t c = 0; c < n && r < rows.size(); ++c) {
            size_t piv = r;
            while (piv < rows.size() && rows[piv][c] == 0) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[r], rows[piv]);
            int inv = inv_mod(rows[r][c], q);
            for (auto& x : rows[r]) x = x * inv % q;
            for (size_t k = 0; k < rows.size(); ++k) {
                if (k == r || rows[k][c] == 0) continue;
                int f = rows[k][c];
                for (size_t j = 0; j < n; ++j) rows[k][j] = mod_norm(rows[k][j] - f * rows[r][j], q);
            }
            pivot_col.push_back(static_cast<int>(c));
            ++r;
        }
        std::vector<std::vector<uint8_t>> dual_gens;
        std::vector<bool> is_pivot(n, false);
        for (int c : pivot_col) is_pivot[c] = true;
        for (size_t c = 0; c < n; ++c) {
            if (is_pivot[c]) continue;
            std::vector<int> v(n, 0);
            v[c] = 1;
            for (size_t i = 0; i < r; ++i) v[pivot_col[i]] = mod_norm(-rows[i][c], q);
            dual_gens.push_back(from_vec(v));
        }
        return Code(kind_, len_, std::move(dual_gens));
    }

    static Code direct_sum(const Code& a, const Code& b) {
        if (a.kind_ != b.kind_) throw std::invalid_argument("direct_sum kind mismatch");
        std::vector<std::vector<uint8_t>> gens;
        for (const auto& g : a.gens_) {
            auto w = g;
            w.resize(a.len_ + b.len_, 0);
            gens.push_back(w);
        }
        for (const auto& g : b.gens_) {
            std::vector<uint8_t> w(a.len_, 0);
            w.insert(w.end(), g.begin(), g.end());
            gens.push_back(w);
        }
        return Code(a.kind_, a.len_ + b.len_, std::move(gens));
    }

  private:
    void build_basis() {
        int q = field_order();
        size_t n = dim_ambient();
        std::vector<std::vector<int>> rows;
        for (const auto& g : gens_) rows.push_back(to_vec(g));
        size_t r = 0;
        for (size_t c = 0; c < n && r < rows.size(); ++c) {
            size_t piv = r;
            while (piv < rows.size() && rows[piv][c] == 0) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[r], rows[piv]);
            int inv = inv_mod(rows[r][c], q);
            for (auto& x : rows[r]) x = x * inv % q;
            for (size_t k = 0; k < rows.size(); ++k) {
                if (k == r || rows[k][c] == 0) continue;
                int f = rows[k][c];
                for (size_t j = 0; j < n; ++j) rows[k][j] = mod_norm(rows[k][j] - f * rows[r][j], q);
            }
            ++r;
        }
        rows.resize(r);
        basis_ = std::move(rows);
    }

    static int inv_mod(int x, int q) { return x == 1 ? 1 : q - 1; }  // q in {2,3}, x in {1,2}

    // F_q coordinates of a word.  K-symbols are encoded as bit pairs
    // 0 <-> (0,0), a <-> (0,1), b <-> (1,1), c <-> (1,0), one pair per
    // position.
    std::vector<int> to_vec(const std::vector<uint8_t>& w) const {
        std::vector<int> v(dim_ambient(), 0);
        if (kind_ == CodeKind::K) {
            for (size_t s = 0; s < len_; ++s) {
                switch (w[s]) {
                    case K0: break;
                    case KA: v[2 * s + 1] = 1; break;
                    case KB: v[2 * s] = v[2 * s + 1] = 1; break;
                    case KC: v[2 * s] = 1; break;
                }
            }
        } else {
            for (size_t s = 0; s < len_; ++s) v[s] = w[s];
        }
        return v;
    }

    std::vector<uint8_t> from_vec(const std::vector<int>& v) const {
        std::vector<uint8_t> w(len_, 0);
        if (kind_ == CodeKind::K) {
            for (size_t s = 0; s < len_; ++s) {
                int x1 = v[2 * s] & 1, x2 = v[2 * s + 1] & 1;
                w[s] = x1 ? (x2 ? KB : KC) : (x2 ? KA : K0);
            }
        } else {
            for (size_t s = 0; s < len_; ++s) w[s] = static_cast<uint8_t>(mod_norm(v[s], 3));
        }
        return w;
    }

    // Linear functional lambda -> <lambda, w> in ambient coordinates, with
    // entries taken from the dot table rather than the bit encoding (the
    // bit basis vectors are the words with a single c resp. a).
    std::vector<int> pairing_functional(const std::vector<int>& wvec) const {
        std::vector<uint8_t> w = from_vec(wvec);
        std::vector<int> f(dim_ambient(), 0);
        if (kind_ == CodeKind::K) {
            for (size_t s = 0; s < len_; ++s) {
                f[2 * s] = ktab::dot[KC][w[s]];
                f[2 * s + 1] = ktab::dot[KA][w[s]];
            }
        } else {
            for (size_t s = 0; s < len_; ++s) f[s] = w[s];
        }
        return f;
    }

    // reduce v against the echelon basis in place
    void reduce(std::vector<int>& v) const {
        int q = field_order();
        for (const auto& b : basis_) {
            size_t lead = 0;
            while (lead < b.size() && b[lead] == 0) ++lead;
            if (lead == b.size() || v[lead] == 0) continue;
            int f = v[lead];
            for (size_t j = 0; j < v.size(); ++j) v[j] = mod_norm(v[j] - f * b[j], q);
        }
    }

    CodeKind kind_;
    size_t len_;
    std::vector<std::vector<uint8_t>> gens_;
    std::vector<std::vector<int>> basis_;
    mutable std::vector<std::vector<uint8_t>> words_;
};

// One representative per tau-orbit of K^l, l small.  The count is
// 1 + (4^l - 1)/3.
inline std::vector<KWord> orbit_representatives(size_t ell) {
    if (ell > 10) throw std::invalid_argument("orbit_representatives: length too large");
    std::vector<KWord> reps;
    uint64_t total = 1;
    for (size_t i = 0; i < ell; ++i) total *= 4;
    KWord w(ell, 0);
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        for (size_t s = 0; s < ell; ++s) {
            w[s] = static_cast<uint8_t>(c & 3);
            c >>= 2;
        }
        KWord t1 = tau_word(w), t2 = tau_word(t1);
        if (w <= t1 && w <= t2) reps.push_back(w);
    }
    return reps;
}

// Canonical (lexicographically smallest) representative of the tau-orbit.
inline KWord orbit_rep(const KWord& w) {
    KWord t1 = tau_word(w), t2 = tau_word(t1);
    return std::min({w, t1, t2});
}

// ---------------------------------------------------------------------------
// Code file format:
//   kind: K            (or "kind: Z3")
//   length: 4
//   generators:
//   a a 0 0
//   b b 0 0
// Parse errors carry line/column diagnostics.

struct CodeParseError : std::runtime_error {
    CodeParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg) {}
};

inline Code parse_code(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&](const char* expect) {
        while (std::getline(in, line)) {
            ++lineno;
            size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos || line[i] == '#') continue;
            return;
        }
        throw CodeParseError(lineno + 1, 1, std::string("unexpected end of file, expected ") + expect);
    };

    next_line("'kind: K' or 'kind: Z3'");
    CodeKind kind;
    {
        std::istringstream ls(line);
        std::string key, val;
        ls >> key >> val;
        if (key != "kind:") throw CodeParseError(lineno, 1, "expected 'kind: K' or 'kind: Z3'");
        if (val == "K")
            kind = CodeKind::K;
        else if (val == "Z3")
            kind = CodeKind::Z3;
        else
            throw CodeParseError(lineno, static_cast<int>(line.find(val)) + 1, "unknown kind '" + val + "'");
    }

    next_line("'length: <l>'");
    size_t length = 0;
    {
        std::istringstream ls(line);
        std::string key;
        long n = -1;
        ls >> key >> n;
        if (key != "length:" || n < 0) throw CodeParseError(lineno, 1, "expected 'length: <nonnegative integer>'");
        length = static_cast<size_t>(n);
    }

    next_line("'generators:'");
    {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key != "generators:") throw CodeParseError(lineno, 1, "expected 'generators:'");
    }

    std::vector<std::vector<uint8_t>> gens;
    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::vector<uint8_t> g;
        for (size_t i = start; i < line.size(); ++i) {
            char ch = line[i];
            if (ch == ' ' || ch == '\t' || ch == '\r') continue;
            uint8_t sym;
            if (kind == CodeKind::K) {
                switch (ch) {
                    case '0': sym = K0; break;
                    case 'a': sym = KA; break;
                    case 'b': sym = KB; break;
                    case 'c': sym = KC; break;
                    default: throw CodeParseError(lineno, static_cast<int>(i) + 1, std::string("bad K symbol '") + ch + "'");
                }
            } else {
                if (ch < '0' || ch > '2')
                    throw CodeParseError(lineno, static_cast<int>(i) + 1, std::string("bad Z3 symbol '") + ch + "'");
                sym = static_cast<uint8_t>(ch - '0');
            }
            g.push_back(sym);
        }
        if (g.size() != length)
            throw CodeParseError(lineno, 1,
                                 "generator has " + std::to_string(g.size()) + " symbols, expected " + std::to_string(length));
        gens.push_back(std::move(g));
    }
    return Code(kind, length, std::move(gens));
}

}  // namespace cxd
