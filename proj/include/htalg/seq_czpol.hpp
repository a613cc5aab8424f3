#pragma once

#include "htalg/hopf_ht.hpp"
#include "htalg/polynomial.hpp"
#include "htalg/rational.hpp"

#include <map>
#include <string>

namespace htalg {

/// Polynomial sequence in the falling factorial basis: value at n is
/// sum_l c_l (n)_l. The basis sequence tau(l) has l as its tau-degree.
class CzpolElement {
public:
    CzpolElement() = default;
    static CzpolElement tau(long l, Rational c = Rational(1)) {
        CzpolElement e;
        e.add(l, std::move(c));
        return e;
    }
    static CzpolElement one() { return tau(0); }

    void add(long l, const Rational& c) {
        if (c.is_zero()) return;
        auto it = t_.find(l);
        if (it == t_.end()) {
            t_.emplace(l, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    bool is_zero() const { return t_.empty(); }
    long degree() const { return t_.empty() ? -1 : t_.rbegin()->first; }
    const std::map<long, Rational>& terms() const { return t_; }
    Rational coeff(long l) const {
        auto it = t_.find(l);
        return it == t_.end() ? Rational(0) : it->second;
    }

    friend CzpolElement operator+(const CzpolElement& a, const CzpolElement& b) {
        CzpolElement r = a;
        for (const auto& [l, c] : b.t_) r.add(l, c);
        return r;
    }
    friend CzpolElement operator-(const CzpolElement& a, const CzpolElement& b) {
        CzpolElement r = a;
        for (const auto& [l, c] : b.t_) r.add(l, -c);
        return r;
    }
    CzpolElement operator-() const {
        CzpolElement r;
        for (const auto& [l, c] : t_) r.t_.emplace(l, -c);
        return r;
    }
    friend CzpolElement operator*(const CzpolElement& a, const Rational& s) {
        CzpolElement r;
        for (const auto& [l, c] : a.t_) r.add(l, c * s);
        return r;
    }
    friend bool operator==(const CzpolElement& a, const CzpolElement& b) { return a.t_ == b.t_; }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += it->second.str() + (it->first ? "*tau(" + std::to_string(it->first) + ")" : "");
            if (it->first == 0 && it->second.str().empty()) s += "1";
        }
        return s;
    }

private:
    std::map<long, Rational> t_;
};

inline Rational tau_eval(const CzpolElement& f, const Rational& n) {
    Rational r(0);
    for (const auto& [l, c] : f.terms()) r += c * falling_factorial(n, l);
    return r;
}
inline Rational tau_eval(const CzpolElement& f, long n) { return tau_eval(f, Rational(n)); }

/// tau(l) tau(m) = sum_{k<=l} C(l,k) (m)_k tau(l+m-k).
inline CzpolElement czpol_mul(const CzpolElement& f, const CzpolElement& g) {
    CzpolElement r;
    for (const auto& [l, c] : f.terms())
        for (const auto& [m, d] : g.terms()) {
            Rational cd = c * d;
            for (long k = 0; k <= l; ++k)
                r.add(l + m - k, cd * Rational(binomial(l, k) * falling_factorial(BigInt(m), k)));
        }
    return r;
}

/// Delta tau(l) = l tau(l-1); Delta is locally nilpotent.
inline CzpolElement czpol_delta(const CzpolElement& f) {
    CzpolElement r;
    for (const auto& [l, c] : f.terms())
        if (l > 0) r.add(l - 1, c * Rational(l));
    return r;
}

/// T = 1 + Delta.
inline CzpolElement czpol_T(const CzpolElement& f) { return f + czpol_delta(f); }

/// T^{-1} = sum_k (-Delta)^k, finite on each element.
inline CzpolElement czpol_Tinv(const CzpolElement& f) {
    CzpolElement r, p = f;
    bool neg = false;
    while (!p.is_zero()) {
        r = neg ? r - p : r + p;
        p = czpol_delta(p);
        neg = !neg;
    }
    return r;
}

inline CzpolElement czpol_shift(const CzpolElement& f, long n) {
    CzpolElement r = f;
    for (long i = 0; i < n; ++i) r = czpol_T(r);
    for (long i = 0; i > n; --i) r = czpol_Tinv(r);
    return r;
}

/// d_tau = log(1+Delta) = Delta - Delta^2/2 + Delta^3/3 - ..., finite here.
inline CzpolElement czpol_dtau(const CzpolElement& f) {
    CzpolElement r, p = czpol_delta(f);
    long k = 1;
    while (!p.is_zero()) {
        Rational c(((k % 2) == 1) ? 1 : -1, k);
        r = r + p * c;
        p = czpol_delta(p);
        ++k;
    }
    return r;
}

inline CzpolElement ht_act_seq(const HtElement& h, const CzpolElement& f) {
    CzpolElement r;
    for (const auto& [n, c] : h.terms()) r = r + czpol_shift(f, n) * c;
    return r;
}

inline CzpolElement ht_act_seq(const HatHtElement& h, const CzpolElement& f) {
    CzpolElement r;
    for (const auto& [k, c] : h.terms()) {
        CzpolElement p = f;
        for (long i = 0; i < k.second; ++i) p = czpol_dtau(p);
        p = p * Rational(BigInt(1), factorial(k.second));
        r = r + czpol_shift(p, k.first) * c;
    }
    return r;
}

/// (S f)(n) = f(-n).
inline CzpolElement seq_antipode(const CzpolElement& f);

/// tau_bar(l): the sequence n |-> n(n+1)...(n+l-1), re-expanded in the tau basis.
inline CzpolElement rising_to_falling(long l) {
    CzpolElement r = CzpolElement::one();
    CzpolElement base = CzpolElement::tau(1);
    for (long j = 0; j < l; ++j) r = czpol_mul(r, czpol_shift(base, j));
    return r;
}

/// tau[m]: tau(m) for m >= 0, tau_bar(-m) for m < 0 (as a tau-basis element).
inline CzpolElement tau_square(long m) {
    return m >= 0 ? CzpolElement::tau(m) : rising_to_falling(-m);
}

inline CzpolElement seq_antipode(const CzpolElement& f) {
    // S tau[m] = (-1)^m tau[-m]
    CzpolElement r;
    for (const auto& [l, c] : f.terms()) {
        CzpolElement b = tau_square(-l);
        r = r + b * ((l % 2 == 0) ? c : -c);
    }
    return r;
}

/// <P, f> = (P f)(0).
inline Rational pairing(const HtElement& h, const CzpolElement& f) {
    return tau_eval(ht_act_seq(h, f), 0);
}
inline Rational pairing(const HatHtElement& h, const CzpolElement& f) {
    return tau_eval(ht_act_seq(h, f), 0);
}

/// Monomial view: the polynomial function on Z this sequence restricts.
inline XPoly czpol_to_xpoly(const CzpolElement& f) {
    XPoly r;
    XPoly fall(Rational(1));
    long cur = 0;
    for (const auto& [l, c] : f.terms()) {
        for (; cur < l; ++cur) fall = fall * XPoly({Rational(-cur), Rational(1)});
        r += fall * c;
    }
    return r;
}

/// Inverse of the monomial view: Newton coefficients c_k = (Delta^k p)(0)/k!.
inline CzpolElement czpol_from_xpoly(const XPoly& p) {
    CzpolElement r;
    std::vector<Rational> vals;
    for (long n = 0; n <= std::max<long>(p.degree(), 0); ++n) vals.push_back(p.eval(Rational(n)));
    long k = 0;
    while (!vals.empty()) {
        if (!vals[0].is_zero()) r.add(k, vals[0] * Rational(BigInt(1), factorial(k)));
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) vals[i] = vals[i + 1] - vals[i];
        vals.pop_back();
        ++k;
    }
    return r;
}

}  // namespace htalg
