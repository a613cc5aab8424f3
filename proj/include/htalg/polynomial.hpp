#pragma once

#include "htalg/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htalg {

/// Dense univariate polynomial over Q, coefficient of x^i at index i.
/// Trailing zeros are pruned; the zero polynomial has empty storage.
class XPoly {
public:
    XPoly() = default;
    explicit XPoly(Rational c) { c_.push_back(std::move(c)); prune(); }
    explicit XPoly(std::vector<Rational> c) : c_(std::move(c)) { prune(); }

    static XPoly x() { return XPoly({Rational(0), Rational(1)}); }
    static XPoly monomial(long deg, Rational c) {
        std::vector<Rational> v(deg + 1);
        v[deg] = std::move(c);
        return XPoly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    const Rational& coeff(long i) const {
        static const Rational zero(0);
        return (i >= 0 && i < static_cast<long>(c_.size())) ? c_[i] : zero;
    }
    void set_coeff(long i, Rational c) {
        if (i >= static_cast<long>(c_.size())) c_.resize(i + 1);
        c_[i] = std::move(c);
        prune();
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    XPoly& operator+=(const XPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        prune();
        return *this;
    }
    XPoly& operator-=(const XPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        prune();
        return *this;
    }
    friend XPoly operator+(XPoly a, const XPoly& b) { return a += b; }
    friend XPoly operator-(XPoly a, const XPoly& b) { return a -= b; }
    XPoly operator-() const {
        XPoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend XPoly operator*(const XPoly& a, const XPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return XPoly(std::move(r));
    }
    XPoly& operator*=(const XPoly& o) { return *this = *this * o; }
    XPoly& operator*=(const Rational& s) {
        for (auto& c : c_) c *= s;
        prune();
        return *this;
    }
    friend XPoly operator*(XPoly a, const Rational& s) { return a *= s; }

    friend bool operator==(const XPoly& a, const XPoly& b) { return a.c_ == b.c_; }

    /// Quotient and remainder of *this by d, deg(rem) < deg(d).
    std::pair<XPoly, XPoly> divrem(const XPoly& d) const {
        if (d.is_zero()) throw std::domain_error("XPoly: division by zero polynomial");
        XPoly q, r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            long k = r.degree() - d.degree();
            Rational f = r.c_.back() / d.c_.back();
            q.set_coeff(k, q.coeff(k) + f);
            for (long i = 0; i <= d.degree(); ++i) r.set_coeff(i + k, r.coeff(i + k) - f * d.coeff(i));
        }
        return {q, r};
    }

    XPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return XPoly(std::move(r));
    }

    /// Taylor coefficients around x = a: returns p with p(y) = this(y + a).
    XPoly shifted(const Rational& a) const {
        XPoly r;
        // Horner on (y + a)
        XPoly y_plus_a({a, Rational(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            r = r * y_plus_a;
            r.set_coeff(0, r.coeff(0) + *it);
        }
        return r;
    }

    XPoly monic() const {
        if (is_zero()) return {};
        XPoly r = *this;
        Rational lead = c_.back();
        for (auto& c : r.c_) c /= lead;
        return r;
    }

    static XPoly gcd(XPoly a, XPoly b) {
        while (!b.is_zero()) {
            XPoly r = a.divrem(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    std::string str(const std::string& var = "x") const;

private:
    void prune() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline std::string XPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (long i = degree(); i >= 0; --i) {
        if (coeff(i).is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += coeff(i).str();
        if (i >= 1) s += "*" + var;
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
}

/// Integer roots of p with multiplicities. Throws if p does not factor
/// completely into integer-rooted linears times a constant.
inline std::map<long, long> integer_roots_complete(XPoly p) {
    std::map<long, long> roots;
    if (p.is_zero()) throw std::domain_error("integer_roots: zero polynomial");
    while (p.degree() > 0) {
        if (p.coeff(0).is_zero()) {
            p = p.divrem(XPoly::x()).first;
            ++roots[0];
            continue;
        }
        // Any integer root divides the constant term once denominators are cleared.
        BigInt scale = 1;
        for (long i = 0; i <= p.degree(); ++i) scale = boost::multiprecision::lcm(scale, p.coeff(i).den());
        BigInt c0 = abs(p.coeff(0).num() * (scale / p.coeff(0).den()));
        bool found = false;
        for (BigInt d = 1; d * d <= c0 && !found; ++d) {
            if (c0 % d != 0) continue;
            const BigInt quot = c0 / d;
            for (const BigInt& cand : {BigInt(d), BigInt(-d), quot, BigInt(-quot)}) {
                Rational r(cand);
                if (!p.eval(r).is_zero()) continue;
                auto [q, rem] = p.divrem(XPoly({-r, Rational(1)}));
                if (!rem.is_zero()) throw std::logic_error("integer_roots: inexact deflation");
                ++roots[static_cast<long>(cand)];
                p = q;
                found = true;
                break;
            }
        }
        if (!found) throw std::domain_error("integer_roots: polynomial has a non-integral root");
    }
    return roots;
}

/// Sparse bivariate polynomial over Q in two named variables.
class BiPoly {
public:
    using Key = std::pair<long, long>;  // (deg in first var, deg in second var)

    BiPoly() = default;
    static BiPoly constant(Rational c) {
        BiPoly p;
        p.add({0, 0}, std::move(c));
        return p;
    }
    static BiPoly var1() {
        BiPoly p;
        p.add({1, 0}, Rational(1));
        return p;
    }
    static BiPoly var2() {
        BiPoly p;
        p.add({0, 1}, Rational(1));
        return p;
    }
    static BiPoly from_first(const XPoly& f) {
        BiPoly p;
        for (long i = 0; i <= f.degree(); ++i) p.add({i, 0}, f.coeff(i));
        return p;
    }
    static BiPoly from_second(const XPoly& f) {
        BiPoly p;
        for (long i = 0; i <= f.degree(); ++i) p.add({0, i}, f.coeff(i));
        return p;
    }

    void add(Key k, Rational c) {
        if (c.is_zero()) return;
        auto it = t_.find(k);
        if (it == t_.end()) {
            t_.emplace(k, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, Rational>& terms() const { return t_; }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }
    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [k, c] : b.t_) r.add(k, c);
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (const auto& [k, c] : b.t_) r.add(k, -c);
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_) r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
        return r;
    }

    /// Substitute first |-> u, second |-> v (linear change of variables).
    BiPoly substitute(const BiPoly& u, const BiPoly& v) const {
        BiPoly r;
        for (const auto& [k, c] : t_) {
            BiPoly term = BiPoly::constant(c);
            for (long i = 0; i < k.first; ++i) term = term * u;
            for (long i = 0; i < k.second; ++i) term = term * v;
            r = r + term;
        }
        return r;
    }

    /// Collect by powers of the second variable: result[j] in Q[first].
    std::map<long, XPoly> by_second() const {
        std::map<long, XPoly> out;
        for (const auto& [k, c] : t_) {
            auto& p = out[k.second];
            p.set_coeff(k.first, p.coeff(k.first) + c);
        }
        for (auto it = out.begin(); it != out.end();) {
            if (it->second.is_zero()) it = out.erase(it);
            else ++it;
        }
        return out;
    }

    std::string str(const std::string& v1, const std::string& v2) const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            if (k.first) s += "*" + v1 + (k.first > 1 ? "^" + std::to_string(k.first) : "");
            if (k.second) s += "*" + v2 + (k.second > 1 ? "^" + std::to_string(k.second) : "");
        }
        return s;
    }

private:
    std::map<Key, Rational> t_;
};

}  // namespace htalg
