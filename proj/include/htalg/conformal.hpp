#pragma once

#include "htalg/distrib.hpp"
#include "htalg/loc_k.hpp"
#include "htalg/report.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htalg {

struct UndefinedProduct : std::domain_error {
    using std::domain_error::domain_error;
};

/// Element of a free module over the shift algebra: sum of c T^n g_a.
class FreeHtModuleElement {
public:
    using Key = std::pair<int, long>;  // (generator, shift)

    FreeHtModuleElement() = default;
    static FreeHtModuleElement gen(int a, long shift = 0, Rational c = Rational(1)) {
        FreeHtModuleElement e;
        e.add(a, shift, std::move(c));
        return e;
    }

    void add(int a, long shift, const Rational& c) {
        if (c.is_zero()) return;
        Key k{a, shift};
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

    friend FreeHtModuleElement operator+(const FreeHtModuleElement& x, const FreeHtModuleElement& y) {
        FreeHtModuleElement r = x;
        for (const auto& [k, c] : y.t_) r.add(k.first, k.second, c);
        return r;
    }
    friend FreeHtModuleElement operator-(const FreeHtModuleElement& x, const FreeHtModuleElement& y) {
        FreeHtModuleElement r = x;
        for (const auto& [k, c] : y.t_) r.add(k.first, k.second, -c);
        return r;
    }
    friend FreeHtModuleElement operator*(const FreeHtModuleElement& x, const Rational& s) {
        FreeHtModuleElement r;
        for (const auto& [k, c] : x.t_) r.add(k.first, k.second, c * s);
        return r;
    }
    FreeHtModuleElement shifted(long p) const {
        FreeHtModuleElement r;
        for (const auto& [k, c] : t_) r.add(k.first, k.second + p, c);
        return r;
    }
    FreeHtModuleElement acted(const HtElement& h) const {
        FreeHtModuleElement r;
        for (const auto& [n, c] : h.terms()) r = r + shifted(n) * c;
        return r;
    }
    friend bool operator==(const FreeHtModuleElement& x, const FreeHtModuleElement& y) {
        return x.t_ == y.t_;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            std::string g = k.first < static_cast<int>(names.size()) ? names[k.first]
                                                                     : "g" + std::to_string(k.first);
            if (k.second != 0) g = "T^" + std::to_string(k.second) + "(" + g + ")";
            s += (c == Rational(1)) ? g : c.str() + "*" + g;
        }
        return s;
    }

private:
    std::map<Key, Rational> t_;
};

/// Conformal structure given by the products of bare generators; everything
/// else follows from covariance: (T^p f)_n = f_{n+p} and f_n(T^q g) = T^q<f_{n-q} g>.
class ConformalAlgebra {
public:
    explicit ConformalAlgebra(std::vector<std::string> gens) : names_(std::move(gens)) {}

    const std::vector<std::string>& generators() const { return names_; }
    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        throw std::out_of_range("ConformalAlgebra: unknown generator " + name);
    }

    void declare_pair(int a, int b) { pairs_.insert({a, b}); }
    void set_product(int a, long n, int b, FreeHtModuleElement rhs) {
        declare_pair(a, b);
        if (!rhs.is_zero()) table_[{a, b, n}] = std::move(rhs);
    }

    /// Product of bare generators.
    FreeHtModuleElement gen_product(int a, long n, int b) const {
        if (!pairs_.count({a, b}))
            throw UndefinedProduct("conformal product undefined for pair " + names_[a] + "," + names_[b]);
        auto it = table_.find({a, b, n});
        return it == table_.end() ? FreeHtModuleElement() : it->second;
    }

    /// Indices with nonzero product for a pair, plus overall support bound.
    std::vector<long> support(int a, int b) const {
        std::vector<long> out;
        for (const auto& [k, v] : table_)
            if (std::get<0>(k) == a && std::get<1>(k) == b) out.push_back(std::get<2>(k));
        return out;
    }
    long support_radius() const {
        long r = 0;
        for (const auto& [k, v] : table_) {
            r = std::max(r, std::labs(std::get<2>(k)));
            for (const auto& [key, c] : v.terms()) r = std::max(r, std::abs(key.second));
        }
        return r;
    }

    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::set<std::pair<int, int>> pairs_;
    std::map<std::tuple<int, int, long>, FreeHtModuleElement> table_;
};

/// Bilinear product extended by covariance.
inline FreeHtModuleElement conf_product(const ConformalAlgebra& c, const FreeHtModuleElement& x,
                                        long n, const FreeHtModuleElement& y) {
    FreeHtModuleElement out;
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) {
            FreeHtModuleElement base = c.gen_product(kx.first, n + kx.second - ky.second, ky.first);
            out = out + base.shifted(ky.second) * (cx * cy);
        }
    return out;
}

/// Skew-symmetry and the commutator identity on generators with shifts
/// inside the window; finiteness and covariance hold structurally.
inline CheckReport check_axioms(const ConformalAlgebra& c, long shift_bound) {
    CheckReport rep{"conformal-axioms", shift_bound, 0, {}};
    long w = shift_bound + c.support_radius();
    int g = static_cast<int>(c.size());

    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            for (long n = -w; n <= w; ++n) {
                ++rep.samples;
                FreeHtModuleElement lhs = c.gen_product(a, n, b);
                FreeHtModuleElement rhs = c.gen_product(b, -n, a).shifted(n) * Rational(-1);
                if (!(lhs == rhs))
                    rep.violations.push_back("skew: " + c.generators()[a] + "_{" + std::to_string(n) +
                                             "} " + c.generators()[b]);
            }

    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            for (int x = 0; x < g; ++x)
                for (long m = -shift_bound; m <= shift_bound; ++m)
                    for (long n = -shift_bound; n <= shift_bound; ++n) {
                        ++rep.samples;
                        FreeHtModuleElement xe = FreeHtModuleElement::gen(x);
                        FreeHtModuleElement lhs =
                            conf_product(c, FreeHtModuleElement::gen(a), m, conf_product(c, FreeHtModuleElement::gen(b), n, xe)) -
                            conf_product(c, FreeHtModuleElement::gen(b), n, conf_product(c, FreeHtModuleElement::gen(a), m, xe));
                        FreeHtModuleElement rhs =
                            conf_product(c, c.gen_product(a, m - n, b), n, xe);
                        if (!(lhs == rhs))
                            rep.violations.push_back("commutator: [" + c.generators()[a] + "_" +
                                                     std::to_string(m) + ", " + c.generators()[b] + "_" +
                                                     std::to_string(n) + "] on " + c.generators()[x]);
                    }
    return rep;
}

/// Lie bracket on the coinvariants: forget shifts in sum_n (g_a)_n g_b.
inline std::map<std::pair<int, int>, std::vector<Rational>> coinv_bracket(const ConformalAlgebra& c) {
    std::map<std::pair<int, int>, std::vector<Rational>> out;
    int g = static_cast<int>(c.size());
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            std::vector<Rational> row(g, Rational(0));
            for (long n : c.support(a, b)) {
                FreeHtModuleElement prod = c.gen_product(a, n, b);
                for (const auto& [k, coef] : prod.terms()) row[k.first] += coef;
            }
            out[{a, b}] = row;
        }
    return out;
}

/// Element of the affinization quotient: sum of g_a (x) p_a with the shift
/// normalization absorbed into the localization slot.
class LCElement {
public:
    LCElement() = default;
    static LCElement make(int a, KElement p) {
        LCElement e;
        e.add(a, 0, std::move(p));
        return e;
    }

    /// Insert T^s g_a (x) p == g_a (x) T^{-s} p.
    void add(int a, long shift, const KElement& p) {
        KElement q = k_shift(p, -shift);
        auto it = t_.find(a);
        if (it == t_.end()) {
            if (!q.is_zero()) t_.emplace(a, q);
        } else {
            it->second = it->second + q;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    void add(const FreeHtModuleElement& m, const KElement& p) {
        for (const auto& [k, c] : m.terms()) add(k.first, k.second, p * c);
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<int, KElement>& terms() const { return t_; }
    friend LCElement operator+(const LCElement& x, const LCElement& y) {
        LCElement r = x;
        for (const auto& [a, p] : y.t_) r.add(a, 0, p);
        return r;
    }
    friend LCElement operator-(const LCElement& x, const LCElement& y) {
        LCElement r = x;
        for (const auto& [a, p] : y.t_) r.add(a, 0, -p);
        return r;
    }
    friend bool operator==(const LCElement& x, const LCElement& y) { return x.t_ == y.t_; }

private:
    std::map<int, KElement> t_;
};

/// [f_{p}, g_{q}] = sum_n (f_{<n>} g)_{D[n]<p> q} over the difference basis
/// components of the structure table.
inline LCElement lc_bracket(const ConformalAlgebra& c, const LCElement& x, const LCElement& y) {
    LCElement out;
    for (const auto& [a, p] : x.terms())
        for (const auto& [b, q] : y.terms()) {
            // T-basis components of D(g_a (x) g_b)
            HtElement exps;
            std::map<long, FreeHtModuleElement> tcomp;
            for (long n : c.support(a, b)) {
                tcomp[n] = c.gen_product(a, n, b);
                exps.add(n, Rational(1));
            }
            // regroup into difference-basis components
            std::map<long, FreeHtModuleElement> dcomp;
            for (const auto& [n, elt] : tcomp)
                for (const auto& [j, d] : to_delta_basis(HtElement::shift(n)))
                    if (!d.is_zero()) {
                        auto it = dcomp.find(j);
                        if (it == dcomp.end()) dcomp.emplace(j, elt * d);
                        else it->second = it->second + elt * d;
                    }
            for (const auto& [j, elt] : dcomp) {
                if (elt.is_zero()) continue;
                KElement slot = k_mul(ht_act_k(delta_basis_element(j), p), q);
                if (slot.is_zero()) continue;
                out.add(elt, slot);
            }
        }
    return out;
}

/// Exact index support of the operator expansion of D(f (x) g).
inline std::set<long> product_support(const ConformalAlgebra& c, const FreeHtModuleElement& f,
                                      const FreeHtModuleElement& g) {
    std::set<long> out;
    for (const auto& [kf, cf] : f.terms())
        for (const auto& [kg, cg] : g.terms())
            for (long s : c.support(kf.first, kg.first)) out.insert(s - kf.second + kg.second);
    return out;
}

/// Y_sing(f, tau) g = sum_n f_n g . S(T^n)(1/tau): table over singular keys.
inline std::map<KElement::SingKey, FreeHtModuleElement> ysing(const ConformalAlgebra& c,
                                                              const FreeHtModuleElement& f,
                                                              const FreeHtModuleElement& g) {
    std::map<KElement::SingKey, FreeHtModuleElement> out;
    for (long n : product_support(c, f, g)) {
        FreeHtModuleElement prod = conf_product(c, f, n, g);
        if (prod.is_zero()) continue;
        KElement::SingKey key{-n, 0};
        auto it = out.find(key);
        if (it == out.end()) out.emplace(key, prod);
        else it->second = it->second + prod;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

/// The current commutator as a finite difference-basis expansion:
/// [f(t1), g(t2)] = sum_n (f_{<n>} g)(t2) D[n]_2 delta.
inline std::map<long, FreeHtModuleElement> current_commutator(const ConformalAlgebra& c,
                                                              const FreeHtModuleElement& f,
                                                              const FreeHtModuleElement& g) {
    std::map<long, FreeHtModuleElement> out;
    for (long n : product_support(c, f, g)) {
        FreeHtModuleElement fn = conf_product(c, f, n, g);
        if (fn.is_zero()) continue;
        for (const auto& [j, d] : to_delta_basis(HtElement::shift(n))) {
            auto it = out.find(j);
            if (it == out.end()) out.emplace(j, fn * d);
            else it->second = it->second + fn * d;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// ---------------------------------------------------------------------------
// Stock algebras
// ---------------------------------------------------------------------------

/// First Toda conformal structure. The CC products all vanish; the BC side
/// is fixed by skew-symmetry from B_0 C = -C, B_{-1} C = C.
inline ConformalAlgebra ctoda() {
    ConformalAlgebra c({"B", "C"});
    int B = 0, C = 1;
    c.declare_pair(B, B);
    c.declare_pair(C, C);
    c.set_product(B, 0, C, FreeHtModuleElement::gen(C, 0, Rational(-1)));
    c.set_product(B, -1, C, FreeHtModuleElement::gen(C, 0, Rational(1)));
    c.set_product(C, 0, B, FreeHtModuleElement::gen(C, 0, Rational(1)));
    c.set_product(C, 1, B, FreeHtModuleElement::gen(C, 1, Rational(-1)));
    return c;
}

/// The same table with a C_0 C = C entry forced in; skew-symmetry rules this
/// out, which check_axioms must report.
inline ConformalAlgebra ctoda_literal_typo() {
    ConformalAlgebra c = ctoda();
    c.set_product(1, 0, 1, FreeHtModuleElement::gen(1, 0, Rational(1)));
    return c;
}

/// Affine conformal algebra of a Lie algebra with the given structure
/// constants: bracket[a][b] = coordinates of [x_a, x_b].
inline ConformalAlgebra affine_conformal(std::vector<std::string> names,
                                         const std::map<std::pair<int, int>, std::vector<Rational>>& bracket) {
    ConformalAlgebra c(std::move(names));
    int g = static_cast<int>(c.size());
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            c.declare_pair(a, b);
            auto it = bracket.find({a, b});
            if (it == bracket.end()) continue;
            FreeHtModuleElement rhs;
            for (int x = 0; x < g; ++x) rhs.add(x, 0, it->second[x]);
            c.set_product(a, 0, b, rhs);
        }
    return c;
}

inline ConformalAlgebra cg_sl2() {
    // e=0, f=1, h=2: [e,f]=h, [h,e]=2e, [h,f]=-2f
    std::map<std::pair<int, int>, std::vector<Rational>> br;
    br[{0, 1}] = {Rational(0), Rational(0), Rational(1)};
    br[{1, 0}] = {Rational(0), Rational(0), Rational(-1)};
    br[{2, 0}] = {Rational(2), Rational(0), Rational(0)};
    br[{0, 2}] = {Rational(-2), Rational(0), Rational(0)};
    br[{2, 1}] = {Rational(0), Rational(-2), Rational(0)};
    br[{1, 2}] = {Rational(0), Rational(2), Rational(0)};
    return affine_conformal({"e", "f", "h"}, br);
}

inline ConformalAlgebra cg_abelian(int k = 1) {
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("x" + std::to_string(i));
    return affine_conformal(std::move(names), {});
}

/// Declarative loader. An entry gives (T^p g_lhs)_n g_arg = sum c T^q g_beta:
///   {"lhs": [name, p], "arg": name, "n": n, "rhs": [[coeff, name, q], ...]}.
/// Entries are normalized to bare left generators through covariance.
inline ConformalAlgebra conformal_from_json(const nlohmann::json& j) {
    ConformalAlgebra c(j.at("generators").get<std::vector<std::string>>());
    int g = static_cast<int>(c.size());
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) c.declare_pair(a, b);
    for (const auto& e : j.at("entries")) {
        int lhs = c.index_of(e.at("lhs").at(0).get<std::string>());
        long p = e.at("lhs").at(1).get<long>();
        long n = e.at("n").get<long>();
        int arg = c.index_of(e.at("arg").get<std::string>());
        FreeHtModuleElement rhs;
        for (const auto& t : e.at("rhs"))
            rhs.add(c.index_of(t.at(1).get<std::string>()), t.at(2).get<long>(),
                    Rational::parse(t.at(0).get<std::string>()));
        // (T^p f)_n = f_{n+p}
        c.set_product(lhs, n + p, arg, std::move(rhs));
    }
    return c;
}

}  // namespace htalg
