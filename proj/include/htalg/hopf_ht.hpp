#pragma once

#include "htalg/rational.hpp"

#include <map>
#include <string>
#include <utility>

namespace htalg {

/// Laurent polynomial in the shift T: sum of c_n T^n over a finite set of
/// integer exponents. No zero coefficients are stored; the empty map is 0.
class HtElement {
public:
    HtElement() = default;
    static HtElement term(long n, Rational c) {
        HtElement e;
        e.add(n, std::move(c));
        return e;
    }
    static HtElement one() { return term(0, Rational(1)); }
    static HtElement shift(long n) { return term(n, Rational(1)); }           // T^n
    static HtElement delta() { return shift(1) - one(); }                     // T - 1
    static HtElement delta_bar() { return one() - shift(-1); }                // 1 - T^{-1}

    void add(long n, const Rational& c) {
        if (c.is_zero()) return;
        auto it = t_.find(n);
        if (it == t_.end()) {
            t_.emplace(n, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    bool is_zero() const { return t_.empty(); }
    const std::map<long, Rational>& terms() const { return t_; }
    Rational coeff(long n) const {
        auto it = t_.find(n);
        return it == t_.end() ? Rational(0) : it->second;
    }

    friend HtElement operator+(const HtElement& a, const HtElement& b) {
        HtElement r = a;
        for (const auto& [n, c] : b.t_) r.add(n, c);
        return r;
    }
    friend HtElement operator-(const HtElement& a, const HtElement& b) {
        HtElement r = a;
        for (const auto& [n, c] : b.t_) r.add(n, -c);
        return r;
    }
    HtElement operator-() const {
        HtElement r;
        for (const auto& [n, c] : t_) r.t_.emplace(n, -c);
        return r;
    }
    friend HtElement operator*(const HtElement& a, const Rational& s) {
        HtElement r;
        for (const auto& [n, c] : a.t_) r.add(n, c * s);
        return r;
    }
    friend bool operator==(const HtElement& a, const HtElement& b) { return a.t_ == b.t_; }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [n, c] : t_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            if (n != 0) s += "*T^" + std::to_string(n);
        }
        return s;
    }

private:
    std::map<long, Rational> t_;
};

/// Element of H_T (x) H_T over the T^{n1} (x) T^{n2} basis.
class TensorHt {
public:
    void add(long n1, long n2, const Rational& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(n1, n2);
        auto it = t_.find(key);
        if (it == t_.end()) {
            t_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<std::pair<long, long>, Rational>& terms() const { return t_; }
    Rational coeff(long n1, long n2) const {
        auto it = t_.find({n1, n2});
        return it == t_.end() ? Rational(0) : it->second;
    }
    friend bool operator==(const TensorHt& a, const TensorHt& b) { return a.t_ == b.t_; }

private:
    std::map<std::pair<long, long>, Rational> t_;
};

inline HtElement ht_mul(const HtElement& a, const HtElement& b) {
    HtElement r;
    for (const auto& [n, c] : a.terms())
        for (const auto& [m, d] : b.terms()) r.add(n + m, c * d);
    return r;
}

/// S(T^m) = T^{-m}.
inline HtElement ht_antipode(const HtElement& a) {
    HtElement r;
    for (const auto& [n, c] : a.terms()) r.add(-n, c);
    return r;
}

/// eps(T^m) = 1, so eps is the coefficient sum.
inline Rational ht_counit(const HtElement& a) {
    Rational r(0);
    for (const auto& [n, c] : a.terms()) r += c;
    return r;
}

/// T^m |-> T^m (x) T^m, or T^m (x) T^{-m} for the (1 (x) S)-twisted variant.
inline TensorHt ht_coproduct(const HtElement& a, bool twisted = false) {
    TensorHt r;
    for (const auto& [n, c] : a.terms()) r.add(n, twisted ? -n : n, c);
    return r;
}

/// H_T power with small exponent.
inline HtElement ht_pow(const HtElement& a, long k) {
    HtElement r = HtElement::one();
    for (long i = 0; i < k; ++i) r = ht_mul(r, a);
    return r;
}

/// The divided difference basis element D[m]: Delta^m/m! for m >= 0 and
/// DeltaBar^k/k! for m = -k < 0.
inline HtElement delta_basis_element(long m) {
    HtElement p = m >= 0 ? ht_pow(HtElement::delta(), m) : ht_pow(HtElement::delta_bar(), -m);
    long k = m >= 0 ? m : -m;
    return p * Rational(BigInt(1), factorial(k));
}

/// Coordinates of a in the divided difference basis.
/// T^n = sum_k (n)_k D[k] for n >= 0 and T^{-m} = sum_k (-1)^k (m)_k D[-k].
inline std::map<long, Rational> to_delta_basis(const HtElement& a) {
    std::map<long, Rational> out;
    auto add = [&out](long m, const Rational& c) {
        if (c.is_zero()) return;
        auto it = out.find(m);
        if (it == out.end()) {
            out.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto& [n, c] : a.terms()) {
        if (n >= 0) {
            for (long k = 0; k <= n; ++k) add(k, c * Rational(falling_factorial(BigInt(n), k)));
        } else {
            for (long k = 0; k <= -n; ++k) {
                Rational f(falling_factorial(BigInt(-n), k));
                add(-k, (k % 2 == 0) ? c * f : -(c * f));
            }
        }
    }
    return out;
}

inline HtElement from_delta_basis(const std::map<long, Rational>& coords) {
    HtElement r;
    for (const auto& [m, c] : coords) {
        HtElement b = delta_basis_element(m);
        for (const auto& [n, d] : b.terms()) r.add(n, c * d);
    }
    return r;
}

/// Element of the extension of H_T by the divided powers of the logarithmic
/// derivation d_tau, over the basis T^n d_tau^(l), l >= 0.
class HatHtElement {
public:
    using Key = std::pair<long, long>;  // (T exponent n, divided power l)

    HatHtElement() = default;
    static HatHtElement term(long n, long l, Rational c) {
        HatHtElement e;
        e.add(n, l, std::move(c));
        return e;
    }
    static HatHtElement one() { return term(0, 0, Rational(1)); }
    static HatHtElement from_ht(const HtElement& a) {
        HatHtElement e;
        for (const auto& [n, c] : a.terms()) e.add(n, 0, c);
        return e;
    }
    static HatHtElement dtau(long l = 1) { return term(0, l, Rational(1)); }

    void add(long n, long l, const Rational& c) {
        if (c.is_zero()) return;
        Key k{n, l};
        auto it = t_.find(k);
        if (it == t_.end()) {
            t_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, Rational>& terms() const { return t_; }
    friend bool operator==(const HatHtElement& a, const HatHtElement& b) { return a.t_ == b.t_; }

    friend HatHtElement operator+(const HatHtElement& a, const HatHtElement& b) {
        HatHtElement r = a;
        for (const auto& [k, c] : b.t_) r.add(k.first, k.second, c);
        return r;
    }
    friend HatHtElement operator-(const HatHtElement& a, const HatHtElement& b) {
        HatHtElement r = a;
        for (const auto& [k, c] : b.t_) r.add(k.first, k.second, -c);
        return r;
    }
    friend HatHtElement operator*(const HatHtElement& a, const Rational& s) {
        HatHtElement r;
        for (const auto& [k, c] : a.t_) r.add(k.first, k.second, c * s);
        return r;
    }

private:
    std::map<Key, Rational> t_;
};

/// d^(a) d^(b) = C(a+b, a) d^(a+b); the T parts multiply by exponent addition.
inline HatHtElement hat_mul(const HatHtElement& a, const HatHtElement& b) {
    HatHtElement r;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            r.add(ka.first + kb.first, ka.second + kb.second,
                  ca * cb * Rational(binomial(ka.second + kb.second, ka.second)));
    return r;
}

/// S(T^n d^(l)) = (-1)^l T^{-n} d^(l).
inline HatHtElement hat_antipode(const HatHtElement& a) {
    HatHtElement r;
    for (const auto& [k, c] : a.terms()) r.add(-k.first, k.second, (k.second % 2 == 0) ? c : -c);
    return r;
}

/// eps kills every positive d_tau power.
inline Rational hat_counit(const HatHtElement& a) {
    Rational r(0);
    for (const auto& [k, c] : a.terms())
        if (k.second == 0) r += c;
    return r;
}

inline HatHtElement hat_pow(const HatHtElement& a, long k) {
    HatHtElement r = HatHtElement::one();
    for (long i = 0; i < k; ++i) r = hat_mul(r, a);
    return r;
}

/// e_{k,l} = D[k] d_tau^(l) in the T-exponent representation.
inline HatHtElement hat_basis_element(long k, long l) {
    HatHtElement r;
    HtElement d = delta_basis_element(k);
    for (const auto& [n, c] : d.terms()) r.add(n, l, c);
    return r;
}

/// Coordinates of a in the e_{k,l} basis (the T part converted per d_tau power).
inline std::map<HatHtElement::Key, Rational> hat_to_e_basis(const HatHtElement& a) {
    std::map<HatHtElement::Key, Rational> out;
    std::map<long, HtElement> per_l;
    for (const auto& [k, c] : a.terms()) per_l[k.second].add(k.first, c);
    for (const auto& [l, ht] : per_l)
        for (const auto& [m, c] : to_delta_basis(ht))
            if (!c.is_zero()) out[{m, l}] = c;
    return out;
}

}  // namespace htalg
