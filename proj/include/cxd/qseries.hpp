#pragma once

#include "cxd/cyclotomic.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cxd {

// Finitely truncated formal series sum_e c_e q^e with exponents e in
// (1/18)Z and exact cyclotomic coefficients.  The fixed denominator 18
// covers every weight this toolkit produces (untwisted weights have
// denominator dividing 6, twisted ones denominator 9).  A series keeps
// terms with exponent <= its truncation order; an absent exponent means
// coefficient zero.
class QSeries {
  public:
    static constexpr long kDen = 18;

    explicit QSeries(long order_num) : order_(order_num) {}

    // order given as an exact rational; must be representable over /18.
    static QSeries with_order(const Rat& order) { return QSeries(to_num(order, "truncation order")); }

    static long to_num(const Rat& e, const char* what = "exponent") {
        Rat scaled = e * kDen;
        if (!is_integer(scaled)) throw std::invalid_argument(std::string(what) + " not representable over denominator 18");
        return to_long(num(scaled));
    }

    long order_num() const { return order_; }
    Rat order() const { return Rat(order_, kDen); }

    const std::map<long, Cyclotomic>& terms() const { return t_; }

    bool is_zero() const { return t_.empty(); }

    void add_term(const Rat& e, const Cyclotomic& c) { add_term_num(to_num(e), c); }

    void add_term_num(long e, const Cyclotomic& c) {
        if (e > order_ || c.is_zero()) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Cyclotomic coeff(const Rat& e) const {
        auto it = t_.find(to_num(e));
        return it == t_.end() ? Cyclotomic(0) : it->second;
    }

    std::optional<Rat> leading_exponent() const {
        if (t_.empty()) return std::nullopt;
        return Rat(t_.begin()->first, kDen);
    }

    static QSeries one(long order_num) {
        QSeries s(order_num);
        s.add_term_num(0, Cyclotomic(1));
        return s;
    }

    static QSeries monomial(const Rat& e, const Cyclotomic& c, long order_num) {
        QSeries s(order_num);
        s.add_term(e, c);
        return s;
    }

    QSeries truncated(long new_order) const {
        QSeries s(new_order);
        for (const auto& [e, c] : t_) {
            if (e > new_order) break;
            s.t_.emplace(e, c);
        }
        return s;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries s(std::min(a.order_, b.order_));
        for (const auto& [e, c] : a.t_) s.add_term_num(e, c);
        for (const auto& [e, c] : b.t_) s.add_term_num(e, c);
        return s;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) {
        QSeries s(std::min(a.order_, b.order_));
        for (const auto& [e, c] : a.t_) s.add_term_num(e, c);
        for (const auto& [e, c] : b.t_) s.add_term_num(e, -c);
        return s;
    }

    // Cauchy product truncated to the smaller order.
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        QSeries s(std::min(a.order_, b.order_));
        for (const auto& [ea, ca] : a.t_) {
            if (ea > s.order_) break;
            for (const auto& [eb, cb] : b.t_) {
                if (ea + eb > s.order_) break;
                s.add_term_num(ea + eb, ca * cb);
            }
        }
        return s;
    }

    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    friend QSeries operator*(const Cyclotomic& c, const QSeries& a) {
        QSeries s(a.order_);
        for (const auto& [e, x] : a.t_) s.add_term_num(e, c * x);
        return s;
    }

    // shift every exponent (and the truncation horizon) by e
    QSeries shifted(const Rat& e) const {
        long d = to_num(e);
        QSeries s(order_ + d);
        for (const auto& [f, c] : t_) s.add_term_num(f + d, c);
        return s;
    }

    // Inverse of a series with invertible constant term and no negative
    // exponents (the only case the toolkit needs).
    QSeries inverse() const {
        if (t_.empty() || t_.begin()->first != 0)
            throw std::domain_error("QSeries::inverse needs a unit constant term");
        Cyclotomic a0inv = t_.begin()->second.inverse();
        QSeries inv(order_);
        inv.add_term_num(0, a0inv);
        for (long e = 1; e <= order_; ++e) {
            Cyclotomic acc(0);
            for (const auto& [f, c] : t_) {
                if (f == 0) continue;
                if (f > e) break;
                auto it = inv.t_.find(e - f);
                if (it != inv.t_.end()) acc += c * it->second;
            }
            if (!acc.is_zero()) inv.add_term_num(e, -(a0inv * acc));
        }
        return inv;
    }

    QSeries pow(long k) const {
        if (k < 0) return inverse().pow(-k);
        QSeries out = one(order_);
        QSeries b = *this;
        while (k > 0) {
            if (k & 1) out *= b;
            b *= b;
            k >>= 1;
        }
        return out;
    }

    bool operator==(const QSeries& o) const { return order_ == o.order_ && t_ == o.t_; }

    // First exponent where the two series disagree (within the common
    // truncation), if any.
    static std::optional<Rat> first_mismatch(const QSeries& a, const QSeries& b) {
        long ord = std::min(a.order_, b.order_);
        std::map<long, Cyclotomic> d;
        for (const auto& [e, c] : a.t_)
            if (e <= ord) d[e] = c;
        for (const auto& [e, c] : b.t_) {
            if (e > ord) continue;
            auto it = d.find(e);
            if (it == d.end())
                d[e] = -c;
            else {
                it->second -= c;
                if (it->second.is_zero()) d.erase(it);
            }
        }
        if (d.empty()) return std::nullopt;
        return Rat(d.begin()->first, kDen);
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << " + ";
            os << "(" << c.str() << ")";
            if (e != 0) {
                Rat ex(e, kDen);
                os << "*q^";
                if (is_integer(ex))
                    os << rat_str(ex);
                else
                    os << "(" << rat_str(ex) << ")";
            }
            first = false;
        }
        os << " + O(q^" << rat_str(Rat(order_ + 1, kDen)) << ")";
        return os.str();
    }

  private:
    long order_;
    std::map<long, Cyclotomic> t_;
};

}  // namespace cxd
