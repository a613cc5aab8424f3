#pragma once

#include "htalg/hopf_ht.hpp"
#include "htalg/rational.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace htalg {

/// Generator symbol of a free difference algebra.
using GenId = int;

/// Monomial in shifted generators: sorted list of ((generator, shift), power).
struct DiffMonomial {
    std::vector<std::pair<std::pair<GenId, long>, int>> factors;

    friend bool operator<(const DiffMonomial& a, const DiffMonomial& b) { return a.factors < b.factors; }
    friend bool operator==(const DiffMonomial& a, const DiffMonomial& b) { return a.factors == b.factors; }

    bool is_constant() const { return factors.empty(); }
    long min_shift() const {
        long m = 0;
        bool first = true;
        for (const auto& [g, e] : factors) {
            if (first || g.second < m) m = g.second;
            first = false;
        }
        return m;
    }
    DiffMonomial shifted(long a) const {
        DiffMonomial r = *this;
        for (auto& [g, e] : r.factors) g.second += a;
        return r;
    }
    int total_degree() const {
        int d = 0;
        for (const auto& [g, e] : factors) d += e;
        return d;
    }
};

/// Element of the free difference algebra: polynomial in the shifted
/// generators T^n v_a with exact rational coefficients.
class DiffPoly {
public:
    DiffPoly() = default;
    static DiffPoly constant(Rational c) {
        DiffPoly p;
        p.add(DiffMonomial{}, std::move(c));
        return p;
    }
    static DiffPoly one() { return constant(Rational(1)); }
    static DiffPoly generator(GenId g, long shift = 0, Rational c = Rational(1)) {
        DiffPoly p;
        p.add(DiffMonomial{{{{g, shift}, 1}}}, std::move(c));
        return p;
    }

    void add(const DiffMonomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    bool is_zero() const { return t_.empty(); }
    const std::map<DiffMonomial, Rational>& terms() const { return t_; }

    friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r = a;
        for (const auto& [m, c] : b.t_) r.add(m, c);
        return r;
    }
    friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r = a;
        for (const auto& [m, c] : b.t_) r.add(m, -c);
        return r;
    }
    DiffPoly operator-() const {
        DiffPoly r;
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const Rational& s) {
        DiffPoly r;
        for (const auto& [m, c] : a.t_) r.add(m, c * s);
        return r;
    }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add(mul_monomials(ma, mb), ca * cb);
        return r;
    }
    friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.t_ == b.t_; }

    static DiffMonomial mul_monomials(const DiffMonomial& a, const DiffMonomial& b) {
        DiffMonomial r;
        auto ia = a.factors.begin(), ib = b.factors.begin();
        while (ia != a.factors.end() || ib != b.factors.end()) {
            if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
                r.factors.push_back(*ia++);
            } else if (ia == a.factors.end() || ib->first < ia->first) {
                r.factors.push_back(*ib++);
            } else {
                r.factors.push_back({ia->first, ia->second + ib->second});
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names) const;

private:
    std::map<DiffMonomial, Rational> t_;
};

/// T^a as algebra automorphism: shifts every generator occurrence.
inline DiffPoly diff_shift(const DiffPoly& f, long a) {
    DiffPoly r;
    for (const auto& [m, c] : f.terms()) r.add(m.shifted(a), c);
    return r;
}

inline DiffPoly ht_act_diff(const HtElement& h, const DiffPoly& f) {
    DiffPoly r;
    for (const auto& [n, c] : h.terms()) r = r + diff_shift(f, n) * c;
    return r;
}

/// Partial derivative with respect to the shifted generator T^n v_g.
inline DiffPoly diff_partial(const DiffPoly& f, GenId g, long n) {
    DiffPoly r;
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t i = 0; i < m.factors.size(); ++i) {
            if (m.factors[i].first != std::make_pair(g, n)) continue;
            DiffMonomial d = m;
            if (d.factors[i].second == 1) {
                d.factors.erase(d.factors.begin() + i);
            } else {
                d.factors[i].second -= 1;
            }
            r.add(d, c * Rational(m.factors[i].second));
        }
    }
    return r;
}

/// Shifts actually appearing for a generator.
inline std::vector<long> shifts_of(const DiffPoly& f, GenId g) {
    std::vector<long> out;
    for (const auto& [m, c] : f.terms())
        for (const auto& [gen, e] : m.factors)
            if (gen.first == g && std::find(out.begin(), out.end(), gen.second) == out.end())
                out.push_back(gen.second);
    std::sort(out.begin(), out.end());
    return out;
}

/// Difference operator with difference-polynomial coefficients: sum p_n T^n.
class VHtOperator {
public:
    VHtOperator() = default;
    static VHtOperator term(DiffPoly p, long n) {
        VHtOperator r;
        r.add(n, std::move(p));
        return r;
    }
    static VHtOperator identity() { return term(DiffPoly::one(), 0); }

    void add(long n, const DiffPoly& p) {
        if (p.is_zero()) return;
        auto it = t_.find(n);
        if (it == t_.end()) {
            t_.emplace(n, p);
        } else {
            it->second = it->second + p;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<long, DiffPoly>& terms() const { return t_; }
    DiffPoly coeff(long n) const {
        auto it = t_.find(n);
        return it == t_.end() ? DiffPoly() : it->second;
    }

    friend VHtOperator operator+(const VHtOperator& a, const VHtOperator& b) {
        VHtOperator r = a;
        for (const auto& [n, p] : b.t_) r.add(n, p);
        return r;
    }
    friend VHtOperator operator-(const VHtOperator& a, const VHtOperator& b) {
        VHtOperator r = a;
        for (const auto& [n, p] : b.t_) r.add(n, -p);
        return r;
    }
    friend VHtOperator operator*(const VHtOperator& a, const Rational& s) {
        VHtOperator r;
        for (const auto& [n, p] : a.t_) r.add(n, p * s);
        return r;
    }
    friend bool operator==(const VHtOperator& a, const VHtOperator& b) { return a.t_ == b.t_; }

    std::string str(const std::vector<std::string>& names) const;

private:
    std::map<long, DiffPoly> t_;
};

/// (p T^a)(q T^b) = p T^a<q> T^{a+b}.
inline VHtOperator vht_mul(const VHtOperator& a, const VHtOperator& b) {
    VHtOperator r;
    for (const auto& [n, p] : a.terms())
        for (const auto& [m, q] : b.terms()) r.add(n + m, p * diff_shift(q, n));
    return r;
}

/// (p T^n)* = T^{-n} o p.
inline VHtOperator vht_adjoint(const VHtOperator& a) {
    VHtOperator r;
    for (const auto& [n, p] : a.terms()) r.add(-n, diff_shift(p, -n));
    return r;
}

/// P^S = sum p_n T^{-n}.
inline VHtOperator vht_antipodal(const VHtOperator& a) {
    VHtOperator r;
    for (const auto& [n, p] : a.terms()) r.add(-n, p);
    return r;
}

/// P_V = sum T^{-n}<p_n>.
inline DiffPoly vht_pv(const VHtOperator& a) {
    DiffPoly r;
    for (const auto& [n, p] : a.terms()) r = r + diff_shift(p, -n);
    return r;
}

inline DiffPoly sp(const VHtOperator& a) { return a.coeff(0); }

inline VHtOperator vht_commutator(const VHtOperator& a, const VHtOperator& b) {
    return vht_mul(a, b) - vht_mul(b, a);
}

/// Apply the operator to an algebra element: sum p_n T^n<f>.
inline DiffPoly vht_apply(const VHtOperator& a, const DiffPoly& f) {
    DiffPoly r;
    for (const auto& [n, p] : a.terms()) r = r + p * diff_shift(f, n);
    return r;
}

enum class ProjRegion { GE, LE, GT, LT, EQ };

inline VHtOperator project(const VHtOperator& a, ProjRegion region, long k = 0) {
    VHtOperator r;
    for (const auto& [n, p] : a.terms()) {
        bool keep = false;
        switch (region) {
            case ProjRegion::GE: keep = n >= k; break;
            case ProjRegion::LE: keep = n <= k; break;
            case ProjRegion::GT: keep = n > k; break;
            case ProjRegion::LT: keep = n < k; break;
            case ProjRegion::EQ: keep = n == k; break;
        }
        if (keep) r.add(n, p);
    }
    return r;
}

/// Variational derivative: sum_n T^{-n} < df/d(T^n v_g) >.
inline DiffPoly var_derivative(const DiffPoly& f, GenId g) {
    DiffPoly r;
    for (long n : shifts_of(f, g)) r = r + diff_shift(diff_partial(f, g, n), -n);
    return r;
}

/// Translation-normalized representative of the class modulo total
/// differences: each monomial is shifted so its minimal shift is zero.
/// Sound and complete because the span of total differences is exactly the
/// span of T^a m - m over monomials m.
class CoinvClass {
public:
    CoinvClass() = default;
    explicit CoinvClass(const DiffPoly& f) {
        for (const auto& [m, c] : f.terms()) rep_.add(m.shifted(-m.min_shift()), c);
    }
    const DiffPoly& representative() const { return rep_; }
    bool is_zero() const { return rep_.is_zero(); }
    friend bool operator==(const CoinvClass& a, const CoinvClass& b) { return a.rep_ == b.rep_; }

private:
    DiffPoly rep_;
};

inline CoinvClass coinvariant_reduce(const DiffPoly& f) { return CoinvClass(f); }

/// Evolutionary derivation determined by its values on the generators,
/// prolonged by X(T^n v_g) = T^n<X_g>.
class EvolDerivation {
public:
    void set(GenId g, DiffPoly value) { x_[g] = std::move(value); }
    DiffPoly value(GenId g) const {
        auto it = x_.find(g);
        return it == x_.end() ? DiffPoly() : it->second;
    }
    const std::map<GenId, DiffPoly>& values() const { return x_; }

    DiffPoly operator()(const DiffPoly& f) const {
        DiffPoly r;
        for (const auto& [m, c] : f.terms()) {
            for (std::size_t i = 0; i < m.factors.size(); ++i) {
                auto [gen, e] = m.factors[i];
                auto it = x_.find(gen.first);
                if (it == x_.end()) continue;
                DiffMonomial d = m;
                if (d.factors[i].second == 1) {
                    d.factors.erase(d.factors.begin() + i);
                } else {
                    d.factors[i].second -= 1;
                }
                DiffPoly dm;
                dm.add(d, c * Rational(e));
                r = r + dm * diff_shift(it->second, gen.second);
            }
        }
        return r;
    }

private:
    std::map<GenId, DiffPoly> x_;
};

inline DiffPoly evol_apply(const EvolDerivation& x, const DiffPoly& f) { return x(f); }

inline std::string gen_name(const std::vector<std::string>& names, GenId g) {
    return (g >= 0 && g < static_cast<GenId>(names.size())) ? names[g] : "v" + std::to_string(g);
}

inline std::string DiffPoly::str(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : t_) {
        if (!s.empty()) s += " + ";
        std::string mono;
        for (const auto& [g, e] : m.factors) {
            if (!mono.empty()) mono += "*";
            std::string base = gen_name(names, g.first);
            if (g.second != 0) base = "T^" + std::to_string(g.second) + "(" + base + ")";
            mono += base;
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty()) {
            s += c.str();
        } else if (c == Rational(1)) {
            s += mono;
        } else if (c == Rational(-1)) {
            s += "-" + mono;
        } else {
            s += c.str() + "*" + mono;
        }
    }
    return s;
}

inline std::string VHtOperator::str(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        if (!s.empty()) s += " + ";
        std::string c = it->second.str(names);
        if (c.find('+') != std::string::npos) c = "(" + c + ")";
        s += c;
        if (it->first != 0)
            s += "*T" + std::string(it->first == 1 ? "" : "^{" + std::to_string(it->first) + "}");
    }
    return s;
}

}  // namespace htalg
