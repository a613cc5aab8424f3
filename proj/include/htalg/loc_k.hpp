#pragma once

#include "htalg/hopf_ht.hpp"
#include "htalg/polynomial.hpp"
#include "htalg/seq_czpol.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htalg {

struct MalformedInput : std::domain_error {
    using std::domain_error::domain_error;
};

/// Quotient of a polynomial sequence by a product of integer-rooted linears:
/// numerator over prod (x - root)^mult.
struct RationalForm {
    CzpolElement numerator;
    std::map<long, long> den_roots;  // root -> multiplicity >= 1
};

/// Canonical element of the localization: polynomial part plus the partial
/// fraction singular part. The sing key (n, k) is the basis element
/// T^n(1/tau^{k+1}), i.e. the function 1/(x+n)^{k+1} (pole at x = -n).
class KElement {
public:
    using SingKey = std::pair<long, long>;  // (shift n, order k >= 0)

    KElement() = default;
    /*implicit*/ KElement(CzpolElement pol) : pol_(std::move(pol)) {}
    static KElement sing_term(long n, long k, Rational c = Rational(1)) {
        KElement e;
        e.add_sing(n, k, std::move(c));
        return e;
    }
    static KElement one() { return KElement(CzpolElement::one()); }
    /// 1/tau^{k+1} shifted: the function 1/(x+n)^{k+1}.
    static KElement inv_tau_pow(long k = 0, long n = 0) { return sing_term(n, k); }

    void add_sing(long n, long k, const Rational& c) {
        if (c.is_zero()) return;
        SingKey key{n, k};
        auto it = sing_.find(key);
        if (it == sing_.end()) {
            sing_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) sing_.erase(it);
        }
    }

    const CzpolElement& pol() const { return pol_; }
    CzpolElement& pol() { return pol_; }
    const std::map<SingKey, Rational>& sing() const { return sing_; }
    bool is_zero() const { return pol_.is_zero() && sing_.empty(); }
    bool is_polynomial() const { return sing_.empty(); }

    friend KElement operator+(const KElement& a, const KElement& b) {
        KElement r = a;
        r.pol_ = r.pol_ + b.pol_;
        for (const auto& [k, c] : b.sing_) r.add_sing(k.first, k.second, c);
        return r;
    }
    friend KElement operator-(const KElement& a, const KElement& b) {
        KElement r = a;
        r.pol_ = r.pol_ - b.pol_;
        for (const auto& [k, c] : b.sing_) r.add_sing(k.first, k.second, -c);
        return r;
    }
    KElement operator-() const {
        KElement r;
        r.pol_ = -pol_;
        for (const auto& [k, c] : sing_) r.sing_.emplace(k, -c);
        return r;
    }
    friend KElement operator*(const KElement& a, const Rational& s) {
        KElement r;
        r.pol_ = a.pol_ * s;
        for (const auto& [k, c] : a.sing_) r.add_sing(k.first, k.second, c * s);
        return r;
    }
    friend bool operator==(const KElement& a, const KElement& b) {
        return a.pol_ == b.pol_ && a.sing_ == b.sing_;
    }

    std::string str() const {
        std::string s = pol_.is_zero() ? "" : pol_.str();
        for (const auto& [k, c] : sing_) {
            if (!s.empty()) s += " + ";
            s += c.str() + "/(x" + (k.first >= 0 ? "+" : "") + std::to_string(k.first) + ")^" +
                 std::to_string(k.second + 1);
        }
        return s.empty() ? "0" : s;
    }

private:
    CzpolElement pol_;
    std::map<SingKey, Rational> sing_;
};

inline KElement sing_part(const KElement& f) {
    KElement r = f;
    r.pol() = CzpolElement();
    return r;
}
inline KElement hol_part(const KElement& f) { return KElement(f.pol()); }

/// Unique pol + partial fraction decomposition of a rational form.
inline KElement k_normalize(const RationalForm& form) {
    for (const auto& [root, mult] : form.den_roots)
        if (mult < 1) throw MalformedInput("k_normalize: multiplicity < 1");

    XPoly num = czpol_to_xpoly(form.numerator);
    std::map<long, long> roots = form.den_roots;

    // cancel shared roots
    for (auto& [root, mult] : roots) {
        XPoly lin({Rational(-root), Rational(1)});
        while (mult > 0 && !num.is_zero() && num.eval(Rational(root)).is_zero()) {
            num = num.divrem(lin).first;
            --mult;
        }
    }
    for (auto it = roots.begin(); it != roots.end();) {
        if (it->second == 0) it = roots.erase(it);
        else ++it;
    }

    XPoly den(Rational(1));
    for (const auto& [root, mult] : roots)
        for (long i = 0; i < mult; ++i) den = den * XPoly({Rational(-root), Rational(1)});

    auto [q, rem] = num.divrem(den);
    KElement out(czpol_from_xpoly(q));
    if (rem.is_zero()) return out;

    // residue data at each pole: Taylor expansion of rem/(den without this
    // pole) around the root, by truncated power series division
    for (const auto& [root, mult] : roots) {
        XPoly others(Rational(1));
        for (const auto& [r2, m2] : roots) {
            if (r2 == root) continue;
            for (long i = 0; i < m2; ++i) others = others * XPoly({Rational(-r2), Rational(1)});
        }
        XPoly top = rem.shifted(Rational(root));
        XPoly bot = others.shifted(Rational(root));
        std::vector<Rational> series(mult);
        for (long j = 0; j < mult; ++j) {
            Rational acc = top.coeff(j);
            for (long i = 1; i <= j; ++i) acc -= bot.coeff(i) * series[j - i];
            series[j] = acc / bot.coeff(0);
        }
        // series[j] multiplies (x-root)^{j - mult}; order k term is j = mult-1-k
        for (long k = 0; k < mult; ++k) out.add_sing(-root, k, series[mult - 1 - k]);
    }
    return out;
}

/// Rational form with denominator read off the singular part.
inline RationalForm k_to_rational_form(const KElement& f) {
    RationalForm form;
    std::map<long, long> pole_order;  // pole position -> max order+1
    for (const auto& [key, c] : f.sing()) {
        long pole = -key.first;
        pole_order[pole] = std::max(pole_order[pole], key.second + 1);
    }
    XPoly den(Rational(1));
    for (const auto& [pole, d] : pole_order)
        for (long i = 0; i < d; ++i) den = den * XPoly({Rational(-pole), Rational(1)});

    XPoly num = czpol_to_xpoly(f.pol()) * den;
    for (const auto& [key, c] : f.sing()) {
        long pole = -key.first;
        XPoly co = den;
        for (long i = 0; i <= key.second; ++i) co = co.divrem(XPoly({Rational(-pole), Rational(1)})).first;
        num += co * c;
    }
    form.numerator = czpol_from_xpoly(num);
    form.den_roots = pole_order;
    return form;
}

inline KElement k_mul(const KElement& a, const KElement& b) {
    if (a.is_polynomial() && b.is_polynomial()) return KElement(czpol_mul(a.pol(), b.pol()));
    RationalForm fa = k_to_rational_form(a), fb = k_to_rational_form(b);
    RationalForm prod;
    prod.numerator = czpol_mul(fa.numerator, fb.numerator);
    prod.den_roots = fa.den_roots;
    for (const auto& [root, mult] : fb.den_roots) prod.den_roots[root] += mult;
    return k_normalize(prod);
}

inline KElement k_add(const KElement& a, const KElement& b) { return a + b; }

inline KElement k_shift(const KElement& f, long a) {
    KElement r(czpol_shift(f.pol(), a));
    for (const auto& [key, c] : f.sing()) r.add_sing(key.first + a, key.second, c);
    return r;
}

inline KElement ht_act_k(const HtElement& h, const KElement& f) {
    KElement r;
    for (const auto& [n, c] : h.terms()) r = r + k_shift(f, n) * c;
    return r;
}

/// d_tau acts as the formal derivative in the monomial view: finite log
/// series in Delta on the polynomial part, d/dx on each pole term.
inline KElement dtau_act_k(const KElement& f) {
    KElement r(czpol_dtau(f.pol()));
    for (const auto& [key, c] : f.sing())
        r.add_sing(key.first, key.second + 1, c * Rational(-(key.second + 1)));
    return r;
}

inline KElement hat_ht_act_k(const HatHtElement& h, const KElement& f) {
    KElement r;
    for (const auto& [key, c] : h.terms()) {
        KElement p = f;
        for (long i = 0; i < key.second; ++i) p = dtau_act_k(p);
        p = p * Rational(BigInt(1), factorial(key.second));
        r = r + k_shift(p, key.first) * c;
    }
    return r;
}

/// S on functions: x |-> -x.
inline KElement k_antipode(const KElement& f) {
    KElement r(seq_antipode(f.pol()));
    for (const auto& [key, c] : f.sing())
        r.add_sing(-key.first, key.second, (key.second % 2 == 0) ? -c : c);
    return r;
}

/// Sum of residues: only order-0 singular coefficients contribute.
inline Rational trace(const KElement& f) {
    Rational r(0);
    for (const auto& [key, c] : f.sing())
        if (key.second == 0) r += c;
    return r;
}

/// f|_0 = Tr(f/tau) for polynomial f.
inline Rational value_at_zero(const CzpolElement& f) { return tau_eval(f, 0); }

/// tau(n) for n in Z: tau(n) when n >= 0 and 1/tau(-n) when n < 0.
inline KElement tau_full(long n) {
    if (n >= 0) return KElement(CzpolElement::tau(n));
    // 1/tau(m) = 1/(x(x-1)...(x-m+1))
    RationalForm form;
    form.numerator = CzpolElement::one();
    for (long j = 0; j < -n; ++j) form.den_roots[j] = 1;
    return k_normalize(form);
}

/// Components F_n = Tr(F tau(n)) for |n| <= N.
inline std::map<long, Rational> k_expand(const KElement& f, long N) {
    std::map<long, Rational> out;
    for (long n = -N; n <= N; ++n) {
        Rational c = trace(k_mul(f, tau_full(n)));
        if (!c.is_zero()) out[n] = c;
    }
    return out;
}

/// Exact value at an integer; throws on a pole.
inline Rational k_eval(const KElement& f, long x) {
    Rational r = tau_eval(f.pol(), x);
    for (const auto& [key, c] : f.sing()) {
        if (x + key.first == 0) throw std::domain_error("k_eval: evaluation at a pole");
        Rational base(1, x + key.first);
        Rational p(1);
        for (long i = 0; i <= key.second; ++i) p *= base;
        r += c * p;
    }
    return r;
}

/// S(e_{m,k})(1/tau) as a canonical element (= (-1)^m D[-m] acting on x^{-k-1}).
inline KElement s_basis_element(long m, long k) {
    HtElement d = delta_basis_element(-m);
    KElement r;
    for (const auto& [n, c] : d.terms())
        r.add_sing(n, k, (m % 2 == 0) ? c : -c);
    return r;
}

/// Coordinates of the singular part in the S(e_{m,k})(1/tau) basis.
/// T^a(1/tau^{k+1}) = sum_m d_m (-1)^m S(e_{-m,k})(1/tau), d = delta coords of T^a.
inline std::map<KElement::SingKey, Rational> sing_to_sbasis(const KElement& f) {
    std::map<KElement::SingKey, Rational> out;
    auto add = [&out](long m, long k, const Rational& c) {
        if (c.is_zero()) return;
        KElement::SingKey key{m, k};
        auto it = out.find(key);
        if (it == out.end()) {
            out.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    std::map<long, std::map<long, Rational>> delta_coords;  // T-exponent -> coords
    for (const auto& [key, c] : f.sing()) {
        auto dc = delta_coords.find(key.first);
        if (dc == delta_coords.end())
            dc = delta_coords.emplace(key.first, to_delta_basis(HtElement::shift(key.first))).first;
        for (const auto& [m, d] : dc->second)
            add(-m, key.second, (m % 2 == 0) ? c * d : -(c * d));
    }
    return out;
}

inline KElement sing_from_sbasis(const std::map<KElement::SingKey, Rational>& coords) {
    KElement r;
    for (const auto& [key, c] : coords) r = r + s_basis_element(key.first, key.second) * c;
    return r;
}

// ---------------------------------------------------------------------------
// The extension of the dual: span of e*_{n,k}, a formal coefficient table
// with the multiplication induced by the sequence algebra (sigma central).
// ---------------------------------------------------------------------------

class HatCzpol {
public:
    using Key = std::pair<long, long>;  // (n, k): e*_{n,k}

    HatCzpol() = default;
    static HatCzpol term(long n, long k, Rational c = Rational(1)) {
        HatCzpol e;
        e.add(n, k, std::move(c));
        return e;
    }
    void add(long n, long k, const Rational& c) {
        if (c.is_zero()) return;
        Key key{n, k};
        auto it = t_.find(key);
        if (it == t_.end()) {
            t_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, Rational>& terms() const { return t_; }
    Rational coeff(long n, long k) const {
        auto it = t_.find({n, k});
        return it == t_.end() ? Rational(0) : it->second;
    }
    friend HatCzpol operator+(const HatCzpol& a, const HatCzpol& b) {
        HatCzpol r = a;
        for (const auto& [k, c] : b.t_) r.add(k.first, k.second, c);
        return r;
    }
    friend HatCzpol operator*(const HatCzpol& a, const Rational& s) {
        HatCzpol r;
        for (const auto& [k, c] : a.t_) r.add(k.first, k.second, c * s);
        return r;
    }
    friend bool operator==(const HatCzpol& a, const HatCzpol& b) { return a.t_ == b.t_; }

private:
    std::map<Key, Rational> t_;
};

/// Product of two dual difference sequences, as dual difference coordinates.
/// Same-sign products come from restricting a polynomial product; opposite
/// strict signs have disjoint support; index 0 is the unit.
inline std::map<long, Rational> dualdiff_mul(long n, long m) {
    std::map<long, Rational> out;
    if (n == 0) {
        out[m] = Rational(1);
        return out;
    }
    if (m == 0) {
        out[n] = Rational(1);
        return out;
    }
    if ((n > 0) != (m > 0)) return out;  // disjoint supports
    bool neg = n < 0;
    long a = neg ? -n : n, b = neg ? -m : m;
    CzpolElement prod = czpol_mul(CzpolElement::tau(a), CzpolElement::tau(b));
    if (!prod.coeff(0).is_zero()) throw std::logic_error("dualdiff_mul: unexpected constant term");
    for (const auto& [l, c] : prod.terms()) {
        // mirror back through the antipode on the negative side
        if (neg) {
            Rational sign(((a + b + l) % 2 == 0) ? 1 : -1);
            out[-l] = c * sign;
        } else {
            out[l] = c;
        }
    }
    return out;
}

inline HatCzpol hatcz_mul(const HatCzpol& a, const HatCzpol& b) {
    HatCzpol r;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            for (const auto& [n, c] : dualdiff_mul(ka.first, kb.first))
                r.add(n, ka.second + kb.second, ca * cb * c);
    return r;
}

/// Canonical embedding of a polynomial sequence: coefficients (e_{n,l} f)|_0.
inline HatCzpol hatcz_embed(const CzpolElement& f) {
    HatCzpol r;
    long d = std::max<long>(f.degree(), 0);
    for (long n = -d; n <= d; ++n)
        for (long l = 0; l <= d; ++l)
            r.add(n, l, pairing(hat_basis_element(n, l), f));
    return r;
}

/// Tr(H . F) for H in the dual extension and F singular: the dual pairing
/// against the S(e_{n,k})(1/tau) coordinates of F.
inline Rational hatcz_pair_sing(const HatCzpol& h, const KElement& f_sing) {
    Rational r(0);
    auto coords = sing_to_sbasis(f_sing);
    for (const auto& [key, c] : coords) r += h.coeff(key.first, key.second) * c;
    return r;
}

/// Element of the extended localization: formal dual-extension part plus an
/// honest singular part.
struct HatKElement {
    HatCzpol hol;
    KElement sing;  // polynomial part must stay empty

    static HatKElement from_k(const KElement& f) {
        HatKElement r;
        r.hol = hatcz_embed(f.pol());
        r.sing = sing_part(f);
        return r;
    }
};

/// Trace on the extension: dual pairings across the two parts plus the
/// residue trace of the singular-singular product.
inline Rational hatk_trace_mul(const HatKElement& a, const HatKElement& b) {
    Rational r = hatcz_pair_sing(a.hol, b.sing) + hatcz_pair_sing(b.hol, a.sing);
    r += trace(k_mul(a.sing, b.sing));
    return r;
}

/// Module action of a polynomial sequence on the singular quotient:
/// f . F = fF - (fF)_Hol. Multipliers are restricted to polynomial sequences;
/// the action does not extend to arbitrary sequences.
inline KElement czpol_act_sing(const CzpolElement& f, const KElement& F) {
    return sing_part(k_mul(KElement(f), sing_part(F)));
}

}  // namespace htalg
