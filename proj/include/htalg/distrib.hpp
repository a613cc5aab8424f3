#pragma once

#include "htalg/loc_k.hpp"
#include "htalg/prng.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace htalg {

struct UnsupportedExtension : std::domain_error {
    using std::domain_error::domain_error;
};
struct UnsupportedProduct : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotRational : std::domain_error {
    using std::domain_error::domain_error;
};

/// Basis index of the extended localization: Pol(l) is tau(l), Sing(n,k) is
/// S(e_{n,k})(1/tau).
struct BasisIndex {
    enum Kind { Pol, Sing } kind;
    long a = 0;  // l for Pol, n for Sing
    long b = 0;  // k for Sing

    static BasisIndex pol(long l) { return {Pol, l, 0}; }
    static BasisIndex sing(long n, long k) { return {Sing, n, k}; }
    friend bool operator<(const BasisIndex& x, const BasisIndex& y) {
        return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
    }
    friend bool operator==(const BasisIndex& x, const BasisIndex& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
    std::string str() const {
        return kind == Pol ? "tau(" + std::to_string(a) + ")"
                           : "S(e_{" + std::to_string(a) + "," + std::to_string(b) + "})(1/tau)";
    }
};

inline KElement basis_element(const BasisIndex& b) {
    return b.kind == BasisIndex::Pol ? KElement(CzpolElement::tau(b.a)) : s_basis_element(b.a, b.b);
}

/// One-variable distribution: a total component function on basis indices,
/// memoized, with an optional rational kernel certificate. Components of a
/// kernel-certified distribution are traces against the kernel.
template <class W>
class Dist1 {
public:
    using Component = std::function<W(const BasisIndex&)>;

    Dist1() : comp_([](const BasisIndex&) { return W{}; }) {}
    explicit Dist1(Component c) : comp_(std::move(c)) {}

    /// Rational distribution with the given kernel.
    static Dist1 rational(std::vector<std::pair<KElement, W>> kernel) {
        Dist1 d([kernel](const BasisIndex& b) {
            W out{};
            KElement arg = basis_element(b);
            for (const auto& [k, w] : kernel) out = out + w * trace(k_mul(k, arg));
            return out;
        });
        d.kernel_ = std::move(kernel);
        return d;
    }

    W operator()(const BasisIndex& b) const {
        auto it = memo_->find(b);
        if (it != memo_->end()) return it->second;
        W v = comp_(b);
        memo_->emplace(b, v);
        return v;
    }

    /// Value at a general element of the localization, by linearity.
    W at(const KElement& f) const {
        W out{};
        for (const auto& [l, c] : f.pol().terms()) out = out + (*this)(BasisIndex::pol(l)) * c;
        for (const auto& [key, c] : sing_to_sbasis(f))
            out = out + (*this)(BasisIndex::sing(key.first, key.second)) * c;
        return out;
    }

    bool has_kernel() const { return kernel_.has_value(); }
    const std::vector<std::pair<KElement, W>>& kernel() const {
        if (!kernel_) throw std::logic_error("Dist1: no kernel certificate");
        return *kernel_;
    }

    /// Declared bound L such that components at Sing(n,k) vanish unless the
    /// kernel's polynomial part has degree <= L (certificate for finite sums).
    std::optional<long> hol_support_degree() const {
        if (!kernel_) return std::nullopt;
        long d = 0;
        for (const auto& [k, w] : *kernel_) d = std::max(d, k.pol().degree());
        return d;
    }

private:
    Component comp_;
    std::shared_ptr<std::map<BasisIndex, W>> memo_ = std::make_shared<std::map<BasisIndex, W>>();
    std::optional<std::vector<std::pair<KElement, W>>> kernel_;
};

using ScalarDist1 = Dist1<Rational>;

// ---------------------------------------------------------------------------
// Exponential operators
// ---------------------------------------------------------------------------

enum class ExpKind { R, L, RS, LS };
enum class ExpBasis { DeltaSemigroup, HT, HatHT };
enum class ModuleTag { Localization, FreeHtModule };

/// Basis element e_i of the chosen algebra; slot (l) or (n) or (n, l).
struct ExpSlot {
    long a = 0, b = 0;
    friend bool operator<(const ExpSlot& x, const ExpSlot& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    }
};

inline HatHtElement exp_basis_element(ExpBasis basis, const ExpSlot& s) {
    switch (basis) {
        case ExpBasis::DeltaSemigroup:
            if (s.a < 0) throw std::out_of_range("semigroup slot");
            return hat_basis_element(s.a, 0);
        case ExpBasis::HT:
            return hat_basis_element(s.a, 0);
        case ExpBasis::HatHT:
            return hat_basis_element(s.a, s.b);
    }
    throw std::logic_error("exp_basis_element");
}

/// Component of the (twisted) exponential of v at a slot: e_i(v) for the
/// untwisted kinds, S(e_i)(v) for RS, S_M(e_i v) for LS.
inline KElement exp_component(ExpKind kind, ExpBasis basis, const KElement& v, const ExpSlot& s,
                              ModuleTag tag = ModuleTag::Localization) {
    if (tag == ModuleTag::FreeHtModule)
        throw UnsupportedExtension("exponential distributions do not extend to a free module");
    HatHtElement e = exp_basis_element(basis, s);
    switch (kind) {
        case ExpKind::R:
        case ExpKind::L:
            return hat_ht_act_k(e, v);
        case ExpKind::RS:
            return hat_ht_act_k(hat_antipode(e), v);
        case ExpKind::LS:
            return k_antipode(hat_ht_act_k(e, v));
    }
    throw std::logic_error("exp_component");
}

/// All slots with nonzero component for v over the Delta semigroup basis
/// (finite by local nilpotence on the polynomial part; singular parts are
/// reported up to the window).
inline std::map<long, KElement> exp_apply_semigroup(ExpKind kind, const KElement& v, long window) {
    std::map<long, KElement> out;
    for (long l = 0; l <= window; ++l) {
        KElement c = exp_component(kind, ExpBasis::DeltaSemigroup, v, {l, 0});
        if (!c.is_zero()) out[l] = c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dirac kernels
// ---------------------------------------------------------------------------

/// Two-variable distribution given by a component evaluator on pairs of
/// basis elements (extended to K x K by linearity where needed).
struct Dist2 {
    std::function<Rational(const KElement&, const KElement&)> comp;
    Rational operator()(const KElement& f, const KElement& g) const { return comp(f, g); }
};

/// rho(F (x) G) = Tr(F_Hol G_Sing): the expansion of 1/tau "to the right".
inline Dist2 rho() {
    return {[](const KElement& f, const KElement& g) {
        return trace(k_mul(hol_part(f), sing_part(g)));
    }};
}

/// lambda(F (x) G) = -Tr(F_Sing G_Hol).
inline Dist2 lambda() {
    return {[](const KElement& f, const KElement& g) {
        return -trace(k_mul(sing_part(f), hol_part(g)));
    }};
}

/// delta(F (x) G) = Tr(FG).
inline Dist2 dirac_delta() {
    return {[](const KElement& f, const KElement& g) { return trace(k_mul(f, g)); }};
}

/// Series evaluation of rho: sum_l Tr(F/tau(l+1)) Tr(G tau(l)). The first
/// factor vanishes once l exceeds the polynomial degree of F, so the sum is
/// finite. Used as the independent route for the closed forms above.
inline Rational rho_series(const KElement& f, const KElement& g) {
    Rational r(0);
    for (long l = 0; l <= std::max<long>(f.pol().degree(), 0); ++l)
        r += trace(k_mul(f, tau_full(-l - 1))) * trace(k_mul(g, KElement(CzpolElement::tau(l))));
    return r;
}

inline Rational lambda_series(const KElement& f, const KElement& g) {
    Rational r(0);
    for (long l = 0; l <= std::max<long>(g.pol().degree(), 0); ++l)
        r -= trace(k_mul(f, KElement(CzpolElement::tau(l)))) * trace(k_mul(g, tau_full(-l - 1)));
    return r;
}

enum class SpecialKind { Rho, Lambda, Delta };

/// Trace in one variable of D(tau_var) . {rho | lambda | delta}, computed
/// from the explicit expansions of the special kernels. The side that pairs
/// D against 1/tau(l+1) needs a kernel certificate to bound the sum; the
/// other side is bounded by the probe argument.
template <class W>
Dist1<W> distr_trace_in(const Dist1<W>& d, SpecialKind special, int var) {
    if (var != 1 && var != 2) throw std::invalid_argument("distr_trace_in: var must be 1 or 2");

    // sum_l D(1/tau(l+1)) Tr(arg tau(l)); finite only with a certificate
    auto sing_side = [d](const BasisIndex& b) {
        if (!d.has_kernel())
            throw UnsupportedProduct("distr_trace_in: distribution lacks a kernel certificate");
        long cutoff = *d.hol_support_degree();
        W out{};
        KElement arg = basis_element(b);
        for (long l = 0; l <= cutoff; ++l) {
            Rational coupling = trace(k_mul(arg, KElement(CzpolElement::tau(l))));
            if (coupling.is_zero()) continue;
            out = out + d(BasisIndex::sing(l, 0)) * coupling;
        }
        return out;
    };
    // sum_l D(tau(l)) Tr(arg/tau(l+1)); the coupling dies beyond deg(arg_pol)
    auto pol_side = [d](const BasisIndex& b) {
        W out{};
        KElement arg = basis_element(b);
        long lmax = std::max<long>(arg.pol().degree(), 0);
        for (long l = 0; l <= lmax; ++l) {
            Rational coupling = trace(k_mul(arg, tau_full(-l - 1)));
            if (coupling.is_zero()) continue;
            out = out + d(BasisIndex::pol(l)) * coupling;
        }
        return out;
    };

    bool d_on_inverse_leg;  // whether the special kernel pairs D with 1/tau(l+1)
    Rational sign(1);
    switch (special) {
        case SpecialKind::Rho:
            d_on_inverse_leg = (var == 1);
            break;
        case SpecialKind::Lambda:
            d_on_inverse_leg = (var == 2);
            sign = Rational(-1);
            break;
        case SpecialKind::Delta:
            return Dist1<W>([sing_side, pol_side](const BasisIndex& b) {
                return sing_side(b) + pol_side(b);
            });
    }
    if (d_on_inverse_leg)
        return Dist1<W>([sing_side, sign](const BasisIndex& b) { return sing_side(b) * sign; });
    return Dist1<W>([pol_side, sign](const BasisIndex& b) { return pol_side(b) * sign; });
}

// ---------------------------------------------------------------------------
// Rational reconstruction of singular parts
// ---------------------------------------------------------------------------

/// Divided derivative evaluation pairing: Tr(tau(j) . 1/(x-p)^{i}) for i >= 1.
inline Rational residue_pairing(long j, long p, long i) {
    XPoly f = czpol_to_xpoly(CzpolElement::tau(j));
    for (long t = 1; t < i; ++t) f = f.derivative() * Rational(1, t);
    return f.eval(Rational(p));
}

/// Reconstruct the unique kernel sum_{(p,i)} a_{p,i}/(x-p)^i reproducing the
/// given components d_j = Tr(kernel tau(j)), where the candidate pole set is
/// the root multiset of the annihilator. Returns nullopt when the components
/// are inconsistent with every such kernel.
template <class W>
std::optional<std::vector<std::pair<KElement::SingKey, W>>> rational_reconstruct(
    const std::vector<W>& components, const std::map<long, long>& annihilator_roots) {
    long N = 0;
    for (const auto& [p, d] : annihilator_roots) N += d;
    if (N == 0 || static_cast<long>(components.size()) < N) return std::nullopt;

    // unknowns: (pole p, power i) in the fixed enumeration order
    std::vector<std::pair<long, long>> unknowns;
    for (const auto& [p, d] : annihilator_roots)
        for (long i = 1; i <= d; ++i) unknowns.emplace_back(p, i);

    // M[j][u] = Tr(tau(j) . 1/(x-p_u)^{i_u})
    std::vector<std::vector<Rational>> M(N, std::vector<Rational>(N));
    for (long j = 0; j < N; ++j)
        for (long u = 0; u < N; ++u) M[j][u] = residue_pairing(j, unknowns[u].first, unknowns[u].second);

    // Gaussian elimination with W-valued right-hand side
    std::vector<W> rhs(components.begin(), components.begin() + N);
    for (long col = 0; col < N; ++col) {
        long piv = -1;
        for (long r = col; r < N; ++r)
            if (!M[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(M[col], M[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (long r = 0; r < N; ++r) {
            if (r == col || M[r][col].is_zero()) continue;
            Rational f = M[r][col] / M[col][col];
            for (long c = col; c < N; ++c) M[r][c] -= f * M[col][c];
            rhs[r] = rhs[r] - rhs[col] * f;
        }
    }
    std::vector<W> sol(N);
    for (long i = 0; i < N; ++i) sol[i] = rhs[i] * (Rational(1) / M[i][i]);

    // assemble and verify every supplied component
    std::vector<std::pair<KElement::SingKey, W>> kernel;
    for (long u = 0; u < N; ++u) {
        if (sol[u] == W{}) continue;
        kernel.emplace_back(KElement::SingKey{-unknowns[u].first, unknowns[u].second - 1}, sol[u]);
    }
    for (std::size_t j = 0; j < components.size(); ++j) {
        W predicted{};
        for (const auto& [key, w] : kernel)
            predicted = predicted + w * residue_pairing(static_cast<long>(j), -key.first, key.second + 1);
        if (!(predicted == components[j])) return std::nullopt;
    }
    return kernel;
}

/// Scalar convenience wrapper returning the kernel as a canonical element.
inline std::optional<KElement> rational_reconstruct_kernel(const std::vector<Rational>& components,
                                                           const std::map<long, long>& annihilator_roots) {
    auto k = rational_reconstruct<Rational>(components, annihilator_roots);
    if (!k) return std::nullopt;
    KElement out;
    for (const auto& [key, c] : *k) out.add_sing(key.first, key.second, c);
    return out;
}

// ---------------------------------------------------------------------------
// Commutator components
// ---------------------------------------------------------------------------

/// Two-variable Newton coefficients of the twisted coproduct of tau[j]:
/// (m,n) |-> (m-n)_j expanded over tau(a) (x) tau(b).
inline std::map<std::pair<long, long>, Rational> twisted_tau_coefficients(long j) {
    std::map<std::pair<long, long>, Rational> out;
    long sz = j + 1;
    std::vector<std::vector<Rational>> d(sz, std::vector<Rational>(sz));
    for (long m = 0; m < sz; ++m)
        for (long n = 0; n < sz; ++n) d[m][n] = Rational(falling_factorial(BigInt(m - n), j));
    for (long a = 0; a < sz; ++a) {
        std::vector<std::vector<Rational>> e = d;
        for (long b = 0; b < sz; ++b) {
            Rational c = e[0][0] * Rational(BigInt(1), factorial(a) * factorial(b));
            if (!c.is_zero()) out[{a, b}] = c;
            for (long m = 0; m < sz; ++m)
                for (long n = 0; n + 1 < sz; ++n) e[m][n] = e[m][n + 1] - e[m][n];
        }
        for (long m = 0; m + 1 < sz; ++m)
            for (long n = 0; n < sz; ++n) d[m][n] = d[m + 1][n] - d[m][n];
    }
    return out;
}

/// Finite normal form sum_n a_n Delta_2[n] delta with W-valued coefficients.
template <class W>
struct DeltaExpansion {
    std::map<long, W> table;  // n -> a_n

    /// Evaluate against a pair (F, G): sum_n <a_n-weight> Tr(F S(D[n]) G).
    W operator()(const KElement& f, const KElement& g) const {
        W out{};
        for (const auto& [n, w] : table) {
            HtElement sd = ht_antipode(delta_basis_element(n));
            Rational t = trace(k_mul(f, ht_act_k(sd, g)));
            if (!t.is_zero()) out = out + w * t;
        }
        return out;
    }
};

/// a_j extracted by tracing against the twisted coproduct of tau[j]; for an
/// expansion table this must return the j-th entry, which the tests verify.
template <class W>
W commutator_component(const DeltaExpansion<W>& d, long j, const KElement& probe) {
    W out{};
    for (const auto& [ab, c] : twisted_tau_coefficients(j)) {
        W v = d(KElement(CzpolElement::tau(ab.first)),
                k_mul(KElement(CzpolElement::tau(ab.second)), probe));
        out = out + v * c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial separation
// ---------------------------------------------------------------------------

namespace detail {

/// Rational function over Q[x], normalized (monic denominator, reduced).
struct RatFunc {
    XPoly num, den = XPoly(Rational(1));

    void normalize() {
        if (num.is_zero()) {
            den = XPoly(Rational(1));
            return;
        }
        XPoly g = XPoly::gcd(num, den);
        if (g.degree() > 0) {
            num = num.divrem(g).first;
            den = den.divrem(g).first;
        }
        Rational lead = den.coeff(den.degree());
        num *= Rational(1) / lead;
        den *= Rational(1) / lead;
    }
    bool is_zero() const { return num.is_zero(); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        RatFunc r{a.num * b.den + b.num * a.den, a.den * b.den};
        r.normalize();
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        RatFunc r{a.num * b.den - b.num * a.den, a.den * b.den};
        r.normalize();
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        RatFunc r{a.num * b.num, a.den * b.den};
        r.normalize();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
        RatFunc r{a.num * b.den, a.den * b.num};
        r.normalize();
        return r;
    }
};

/// Polynomial in y over the rational function field Q(x).
struct YPoly {
    std::vector<RatFunc> c;  // coefficient of y^i at index i

    void prune() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    static YPoly from_bipoly_xy(const BiPoly& p) {
        // first variable = x, second = y
        YPoly r;
        for (const auto& [k, coeff] : p.terms()) {
            if (static_cast<long>(r.c.size()) <= k.second) r.c.resize(k.second + 1);
            r.c[k.second].num.set_coeff(k.first, r.c[k.second].num.coeff(k.first) + coeff);
        }
        for (auto& f : r.c) f.normalize();
        r.prune();
        return r;
    }
    friend YPoly operator-(const YPoly& a, const YPoly& b) {
        YPoly r = a;
        if (b.c.size() > r.c.size()) r.c.resize(b.c.size());
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
        r.prune();
        return r;
    }
    friend YPoly operator*(const YPoly& a, const YPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        YPoly r;
        r.c.resize(a.c.size() + b.c.size() - 1);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
        r.prune();
        return r;
    }
    std::pair<YPoly, YPoly> divrem(const YPoly& d) const {
        YPoly q, r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            long k = r.degree() - d.degree();
            RatFunc f = r.c.back() / d.c.back();
            if (static_cast<long>(q.c.size()) <= k) q.c.resize(k + 1);
            q.c[k] = q.c[k] + f;
            YPoly sub;
            sub.c.resize(k + 1);
            sub.c[k] = f;
            r = r - sub * d;
        }
        q.prune();
        return {q, r};
    }
};

}  // namespace detail

/// Given nonzero F in the first variable u and H in the second variable v,
/// produce nonzero q, r in Q[u,v] with F(u)q + H(v)r a nonzero polynomial in
/// x = u + v alone. Cofactors come from the extended Euclidean run over
/// Q(x)[y] with y = u - v, denominators cleared.
struct PolySeparation {
    BiPoly q, r;   // in (u, v)
    XPoly target;  // F q + H r as a polynomial in x = u + v
};

inline PolySeparation poly_separate(const XPoly& F, const XPoly& H) {
    using detail::RatFunc;
    using detail::YPoly;
    if (F.is_zero() || H.is_zero()) throw std::invalid_argument("poly_separate: zero input");

    BiPoly u = BiPoly::var1(), v = BiPoly::var2();
    // constant cases: keep both cofactors nonzero
    if (F.degree() == 0 && H.degree() == 0) {
        Rational c = F.coeff(0), d = H.coeff(0);
        Rational qc = (c + d).is_zero() ? Rational(2) : Rational(1);
        PolySeparation out;
        out.q = BiPoly::constant(qc);
        out.r = BiPoly::constant(Rational(1));
        out.target = XPoly(qc * c + d);
        return out;
    }
    if (F.degree() == 0) {
        // F q + H r = 1 with q = (1 + H)/F, r = -1
        PolySeparation out;
        out.q = (BiPoly::constant(Rational(1)) + BiPoly::from_second(H)) *
                BiPoly::constant(Rational(1) / F.coeff(0));
        out.r = BiPoly::constant(Rational(-1));
        out.target = XPoly(Rational(1));
        return out;
    }
    if (H.degree() == 0) {
        PolySeparation out;
        out.q = BiPoly::constant(Rational(-1));
        out.r = (BiPoly::constant(Rational(1)) + BiPoly::from_first(F)) *
                BiPoly::constant(Rational(1) / H.coeff(0));
        out.target = XPoly(Rational(1));
        return out;
    }

    // substitute u = (x+y)/2, v = (x-y)/2 (variables of BiPoly: first = x, second = y)
    Rational half(1, 2), mhalf(-1, 2);
    BiPoly x = BiPoly::var1(), y = BiPoly::var2();
    BiPoly u_xy = (x + y) * BiPoly::constant(half);
    BiPoly v_xy = (x - y) * BiPoly::constant(half);
    BiPoly F_xy = BiPoly::from_first(F).substitute(u_xy, v_xy);
    BiPoly H_xy = BiPoly::from_second(H).substitute(u_xy, v_xy);

    YPoly a = YPoly::from_bipoly_xy(F_xy), b = YPoly::from_bipoly_xy(H_xy);
    // extended Euclid: s*a + t*b = g over Q(x)[y]
    YPoly r0 = a, r1 = b;
    YPoly s0, s1, t0, t1;
    s0.c = {RatFunc{XPoly(Rational(1))}};
    t1.c = {RatFunc{XPoly(Rational(1))}};
    while (!r1.is_zero() && r1.degree() > 0) {
        auto [qq, rr] = r0.divrem(r1);
        YPoly s2 = s0 - qq * s1, t2 = t0 - qq * t1;
        r0 = r1;
        r1 = rr;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (r1.is_zero()) throw std::logic_error("poly_separate: inputs not coprime over Q(x)");
    // r1 is a nonzero element of Q(x): s1*a + t1*b = r1. Divide through by it,
    // then multiply by the denominator lcm so both cofactors are polynomial;
    // the separated target is then exactly that lcm.
    RatFunc r1c = r1.c[0];
    for (auto& f : s1.c) f = f / r1c;
    for (auto& f : t1.c) f = f / r1c;
    XPoly denlcm(Rational(1));
    auto fold = [&denlcm](const YPoly& p) {
        for (const auto& f : p.c) {
            XPoly g = XPoly::gcd(denlcm, f.den);
            denlcm = denlcm.divrem(g).first * f.den;
        }
    };
    fold(s1);
    fold(t1);
    auto to_bipoly = [&denlcm](const YPoly& p) {
        BiPoly out;
        for (std::size_t i = 0; i < p.c.size(); ++i) {
            auto [qq, rr] = (p.c[i].num * denlcm).divrem(p.c[i].den);
            if (!rr.is_zero()) throw std::logic_error("poly_separate: denominator failed to clear");
            for (long k = 0; k <= qq.degree(); ++k) out.add({k, static_cast<long>(i)}, qq.coeff(k));
        }
        return out;
    };
    BiPoly q_xy = to_bipoly(s1);
    BiPoly r_xy = to_bipoly(t1);

    // back to (u, v): x = u + v, y = u - v
    BiPoly x_uv = u + v, y_uv = u - v;
    PolySeparation out;
    out.q = q_xy.substitute(x_uv, y_uv);
    out.r = r_xy.substitute(x_uv, y_uv);

    // target = F q + H r, verified to depend on x alone
    BiPoly total = BiPoly::from_first(F) * out.q + BiPoly::from_second(H) * out.r;
    BiPoly total_xy = total.substitute(u_xy, v_xy);
    XPoly target;
    for (const auto& [k, c] : total_xy.terms()) {
        if (k.second != 0) throw std::logic_error("poly_separate: result depends on u - v");
        target.set_coeff(k.first, c);
    }
    if (target.is_zero() || out.q.is_zero() || out.r.is_zero())
        throw std::logic_error("poly_separate: degenerate output");
    out.target = target;
    return out;
}

}  // namespace htalg
