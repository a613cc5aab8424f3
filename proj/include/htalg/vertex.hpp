#pragma once

#include "htalg/conformal.hpp"
#include "htalg/distrib.hpp"

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htalg {

struct BoundExceeded : std::domain_error {
    using std::domain_error::domain_error;
};

/// Creation symbol X^{gen}_{p} with p the singular basis element T^n(1/tau^{k+1}).
struct CreationKey {
    int gen;
    long n;
    long k;
    friend bool operator<(const CreationKey& a, const CreationKey& b) {
        return std::tie(a.gen, a.n, a.k) < std::tie(b.gen, b.n, b.k);
    }
    friend bool operator==(const CreationKey& a, const CreationKey& b) {
        return a.gen == b.gen && a.n == b.n && a.k == b.k;
    }
};

using Word = std::vector<CreationKey>;  // ordered product applied to the vacuum

/// Induced-module vector: rational combination of ordered creation words.
class VertexState {
public:
    VertexState() = default;
    static VertexState vacuum() {
        VertexState s;
        s.add({}, Rational(1));
        return s;
    }

    void add(const Word& w, const Rational& c) {
        if (c.is_zero()) return;
        auto it = t_.find(w);
        if (it == t_.end()) {
            t_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    bool is_zero() const { return t_.empty(); }
    const std::map<Word, Rational>& terms() const { return t_; }
    long degree() const {
        long d = 0;
        for (const auto& [w, c] : t_) d = std::max<long>(d, static_cast<long>(w.size()));
        return d;
    }

    friend VertexState operator+(const VertexState& a, const VertexState& b) {
        VertexState r = a;
        for (const auto& [w, c] : b.t_) r.add(w, c);
        return r;
    }
    friend VertexState operator-(const VertexState& a, const VertexState& b) {
        VertexState r = a;
        for (const auto& [w, c] : b.t_) r.add(w, -c);
        return r;
    }
    friend VertexState operator*(const VertexState& a, const Rational& s) {
        VertexState r;
        for (const auto& [w, c] : a.t_) r.add(w, c * s);
        return r;
    }
    friend bool operator==(const VertexState& a, const VertexState& b) { return a.t_ == b.t_; }
    friend bool operator<(const VertexState& a, const VertexState& b) { return a.t_ < b.t_; }

    std::string str(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [w, c] : t_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            for (const auto& k : w)
                s += " " + names[k.gen] + "{(" + std::to_string(k.n) + "," + std::to_string(k.k) + ")}";
            s += " |0>";
        }
        return s;
    }

private:
    std::map<Word, Rational> t_;
};

/// Bounded-degree vertex module over a conformal structure table: the induced
/// module with creation symbols indexed by singular basis elements.
class VertexAlgebra {
public:
    VertexAlgebra(ConformalAlgebra conf, long degree_bound = 4)
        : conf_(std::move(conf)), bound_(degree_bound) {}

    const ConformalAlgebra& conformal() const { return conf_; }
    long degree_bound() const { return bound_; }

    /// X^{gen}_{F} applied to a state: the singular part of F creates, the
    /// polynomial part annihilates.
    VertexState act(int gen, const KElement& f, const VertexState& s) const {
        VertexState out;
        for (const auto& [key, c] : f.sing()) out = out + act_creation({gen, key.first, key.second}, s) * c;
        if (!f.pol().is_zero()) out = out + act_annihilation(gen, f.pol(), s);
        return out;
    }

    VertexState act_creation(const CreationKey& c, const VertexState& s) const {
        VertexState out;
        for (const auto& [w, coeff] : s.terms()) out = out + insert_creation(c, w) * coeff;
        return out;
    }

    VertexState act_annihilation(int gen, const CzpolElement& p, const VertexState& s) const {
        VertexState out;
        for (const auto& [w, coeff] : s.terms()) out = out + annihilate_word(gen, p, w) * coeff;
        return out;
    }

    /// H_T action: T . X_{p} = X_{T^{-1} p} on symbols, multiplicative on
    /// words, counit on the vacuum.
    VertexState shift_state(const VertexState& s, long a) const {
        VertexState out;
        for (const auto& [w, c] : s.terms()) {
            Word sw = w;
            for (auto& k : sw) k.n -= a;
            for (std::size_t i = 1; i < sw.size(); ++i)
                if (sw[i] < sw[i - 1]) throw std::logic_error("shift broke word order");
            out.add(sw, c);
        }
        return out;
    }
    VertexState ht_act_state(const HtElement& h, const VertexState& s) const {
        VertexState out;
        for (const auto& [n, c] : h.terms()) out = out + shift_state(s, n) * c;
        return out;
    }

    /// d_tau acts as a derivation over the word, with the antipodal symbol
    /// action d_tau . X_{p} = X_{-d_tau<p>}, raising one pole order.
    VertexState dtau_state(const VertexState& s) const {
        VertexState out;
        for (const auto& [w, c] : s.terms())
            for (std::size_t i = 0; i < w.size(); ++i) {
                Word im = w;
                im[i].k += 1;  // -d_tau<1/(x+n)^{k+1}> = (k+1)/(x+n)^{k+2}
                out = out + reorder_word(im) * (c * Rational(w[i].k + 1));
            }
        return out;
    }

    /// Rebuild a possibly unordered word through the creation machinery.
    VertexState reorder_word(const Word& w) const {
        VertexState s = VertexState::vacuum();
        for (auto it = w.rbegin(); it != w.rend(); ++it) s = act_creation(*it, s);
        return s;
    }

    VertexState hat_act_state(const HatHtElement& h, const VertexState& s) const {
        VertexState out;
        for (const auto& [key, c] : h.terms()) {
            VertexState p = s;
            for (long i = 0; i < key.second; ++i) p = dtau_state(p);
            p = p * Rational(BigInt(1), factorial(key.second));
            out = out + shift_state(p, key.first) * c;
        }
        return out;
    }

private:
    /// c . (w v0) with w already ordered: c h w' = h (c w') + [c, h] w'.
    VertexState insert_creation(const CreationKey& c, const Word& w) const {
        if (w.empty() || !(w[0] < c)) {
            Word r;
            r.reserve(w.size() + 1);
            r.push_back(c);
            r.insert(r.end(), w.begin(), w.end());
            if (static_cast<long>(r.size()) > bound_)
                throw BoundExceeded("vertex state degree bound exceeded");
            VertexState out;
            out.add(r, Rational(1));
            return out;
        }
        CreationKey head = w[0];
        Word tail(w.begin() + 1, w.end());
        VertexState sub = insert_creation(c, tail);
        VertexState out = act_creation(head, sub);
        VertexState tail_state;
        tail_state.add(tail, Rational(1));
        return out + bracket_apply(c.gen, KElement::sing_term(c.n, c.k), head, tail_state);
    }

    /// X^{gen}_{p} (w v0) for polynomial p; the vacuum is annihilated.
    VertexState annihilate_word(int gen, const CzpolElement& p, const Word& w) const {
        if (w.empty()) return {};
        CreationKey head = w[0];
        Word tail(w.begin() + 1, w.end());
        VertexState tail_state;
        tail_state.add(tail, Rational(1));
        VertexState out = act_creation(head, act_annihilation(gen, p, tail_state));
        return out + bracket_apply(gen, KElement(p), head, tail_state);
    }

    /// [X^{a}_{p}, X^{b}_{q}] applied to a state, through the affinization
    /// bracket [f_{p}, g_{q}] = sum_j (f_{<j>} g)_{D[j]<p> q}.
    VertexState bracket_apply(int a, const KElement& p, const CreationKey& bq,
                              const VertexState& rest) const {
        VertexState out;
        LCElement lhs = LCElement::make(a, p);
        LCElement rhs = LCElement::make(bq.gen, KElement::sing_term(bq.n, bq.k));
        LCElement br = lc_bracket(conf_, lhs, rhs);
        for (const auto& [gen, slot] : br.terms()) out = out + act(gen, slot, rest);
        return out;
    }

    ConformalAlgebra conf_;
    long bound_;
};

// ---------------------------------------------------------------------------
// Vertex operator values as distributions
// ---------------------------------------------------------------------------

/// State-valued distribution on the localization, represented by a finite
/// rational kernel plus a lazy table of extra holomorphic coefficients over
/// the dual slots e*_{n,k}. Invariant: values at polynomial arguments are
/// fully reproduced by the kernel; the extra table only feeds values at
/// singular arguments.
class VDist {
public:
    using Kernel = std::vector<std::pair<KElement, VertexState>>;
    using HolExtra = std::function<VertexState(long, long)>;

    VDist() = default;
    VDist(Kernel kernel, HolExtra extra) : kernel_(std::move(kernel)), extra_(std::move(extra)) {}
    static VDist rational(Kernel kernel) { return VDist(std::move(kernel), nullptr); }

    const Kernel& kernel() const { return kernel_; }
    bool has_extra() const { return static_cast<bool>(extra_); }

    VertexState extra_at(long n, long k) const {
        if (!extra_) return {};
        auto key = std::make_pair(n, k);
        auto it = memo_->find(key);
        if (it != memo_->end()) return it->second;
        VertexState v = extra_(n, k);
        memo_->emplace(key, v);
        return v;
    }

    VertexState value(const BasisIndex& b) const {
        VertexState out = kernel_value(basis_element(b));
        if (b.kind == BasisIndex::Sing) out = out + extra_at(b.a, b.b);
        return out;
    }

    /// Value at a general element by linearity over the basis.
    VertexState at(const KElement& f) const {
        VertexState out = kernel_value(f);
        if (extra_)
            for (const auto& [key, c] : sing_to_sbasis(f)) out = out + extra_at(key.first, key.second) * c;
        return out;
    }

    /// e*-slot coefficient of the full holomorphic side: embedded polynomial
    /// kernel parts plus the extra table.
    VertexState hol_coefficient(long n, long k) const {
        VertexState out = extra_at(n, k);
        for (const auto& [ke, w] : kernel_) {
            if (ke.pol().is_zero()) continue;
            Rational c = hatcz_embed(ke.pol()).coeff(n, k);
            if (!c.is_zero()) out = out + w * c;
        }
        return out;
    }

    /// Coefficient of S(e_{n,k})(1/tau) in the singular kernel.
    VertexState sing_coefficient(long n, long k) const {
        VertexState out;
        for (const auto& [ke, w] : kernel_) {
            auto coords = sing_to_sbasis(ke);
            auto it = coords.find({n, k});
            if (it != coords.end()) out = out + w * it->second;
        }
        return out;
    }

    /// All nonzero singular kernel slots (the finite component table of the
    /// singular side of the field).
    std::map<KElement::SingKey, VertexState> sing_table() const {
        std::map<KElement::SingKey, VertexState> out;
        for (const auto& [ke, w] : kernel_)
            for (const auto& [key, c] : sing_to_sbasis(ke)) {
                auto it = out.find(key);
                if (it == out.end()) out.emplace(key, w * c);
                else it->second = it->second + w * c;
            }
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

private:
    VertexState kernel_value(const KElement& arg) const {
        VertexState out;
        for (const auto& [k, w] : kernel_) {
            Rational t = trace(k_mul(k, arg));
            if (!t.is_zero()) out = out + w * t;
        }
        return out;
    }

    Kernel kernel_;
    HolExtra extra_;
    std::shared_ptr<std::map<std::pair<long, long>, VertexState>> memo_ =
        std::make_shared<std::map<std::pair<long, long>, VertexState>>();
};

/// The element S(h) with S(h)(1/tau) = p, read off the dual-basis coordinates.
inline HatHtElement antipodal_symbol(const KElement& p_sing) {
    HatHtElement sh;
    for (const auto& [key, c] : sing_to_sbasis(p_sing))
        sh = sh + hat_antipode(hat_basis_element(key.first, key.second)) * c;
    return sh;
}

/// Twisted generator current h_K<c(tau)>: its value at an argument E is
/// X^{gen}_{S(h)E}.
struct GenCurrent {
    int gen;
    HatHtElement sh;  // S(h)
    KElement twist(const KElement& e) const { return hat_ht_act_k(sh, e); }
};

/// Evaluator for the generated state-field correspondence: fields are nested
/// normal ordered products of twisted generator currents, and their values on
/// states are computed exactly, splitting each factor into its holomorphic
/// and singular halves.
class FieldEngine {
public:
    explicit FieldEngine(const VertexAlgebra& v) : v_(&v) {}

    const VertexAlgebra& algebra() const { return *v_; }

    /// Y(f, tau) s as a state-valued distribution, f given as a state.
    VDist apply(const VertexState& f, const VertexState& s) const {
        std::vector<std::pair<VDist, Rational>> parts;
        for (const auto& [w, c] : f.terms()) parts.emplace_back(apply_word(w, s), c);
        VDist::Kernel kernel;
        for (const auto& [d, c] : parts)
            for (const auto& [ke, st] : d.kernel()) kernel.emplace_back(ke, st * c);
        bool any_extra = false;
        for (const auto& [d, c] : parts) any_extra = any_extra || d.has_extra();
        if (!any_extra) return VDist::rational(std::move(kernel));
        return VDist(std::move(kernel), [parts](long n, long k) {
            VertexState out;
            for (const auto& [d, c] : parts) out = out + d.extra_at(n, k) * c;
            return out;
        });
    }

    /// f_{F} g for F in the localization (the F-normal-ordered product state).
    VertexState f_product(const VertexState& f, const KElement& F, const VertexState& g) const {
        return apply(f, g).at(F);
    }

    /// f_{e*_{n,k}} g: hat-dual component of Y(f, tau) g.
    VertexState hat_product(const VertexState& f, long n, long k, const VertexState& g) const {
        return apply(f, g).sing_coefficient(n, k);
    }

private:
    const VertexAlgebra* v_;
    struct CacheKey {
        Word w;
        VertexState s;
        friend bool operator<(const CacheKey& a, const CacheKey& b) {
            if (a.w != b.w) return a.w < b.w;
            return a.s < b.s;
        }
    };
    mutable std::map<CacheKey, VDist> cache_;

    VDist apply_word(const Word& f, const VertexState& s) const {
        CacheKey key{f, s};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        VDist r = compute_word(f, s);
        cache_.emplace(key, r);
        return r;
    }

    VDist compute_word(const Word& f, const VertexState& s) const {
        if (f.empty()) return VDist::rational({{KElement::one(), s}});  // identity field

        CreationKey c = f[0];
        Word rest(f.begin() + 1, f.end());
        GenCurrent cur{c.gen, antipodal_symbol(KElement::sing_term(c.n, c.k))};

        VDist inner = apply_word(rest, s);
        VDist::Kernel kernel;

        // --- term 2: Y(rest, tau) composed with the singular half of the
        // current. The annihilation family on s has an explicit kernel.
        VDist::Kernel ann = annihilation_kernel(cur, s);
        std::vector<std::pair<VDist, KElement>> parts;  // (Y(rest) on u_j, K_j)
        for (const auto& [kj, uj] : ann) {
            VDist dj = apply_word(rest, uj);
            for (const auto& [ki, wi] : dj.kernel()) kernel.emplace_back(k_mul(ki, kj), wi);
            // fold the inner extra coefficients reachable through K_j at
            // polynomial arguments into explicit kernel entries
            if (dj.has_extra()) {
                for (const auto& [skey, sc] : kj.sing()) {
                    long alpha = skey.first, kappa = skey.second;
                    for (long t = 0; t <= kappa; ++t) {
                        KElement piece = KElement::sing_term(alpha, kappa - t);
                        for (const auto& [slot, conv] : sing_to_sbasis(piece)) {
                            VertexState st = dj.extra_at(slot.first, slot.second);
                            if (!st.is_zero())
                                kernel.emplace_back(KElement::sing_term(alpha, t), st * (sc * conv));
                        }
                    }
                }
            }
            parts.emplace_back(dj, kj);
        }

        // --- term 1 at polynomial arguments: the holomorphic half of the
        // current against the singular kernel parts of the inner field,
        // unfolded through the residue data at each pole.
        for (const auto& [ki, wi] : inner.kernel()) {
            for (const auto& [skey, sc] : ki.sing()) {
                long alpha = skey.first, kappa = skey.second;
                for (long t = 0; t <= kappa; ++t) {
                    VertexState img =
                        v_->act(cur.gen, cur.twist(KElement::sing_term(alpha, kappa - t)), wi);
                    if (!img.is_zero())
                        kernel.emplace_back(KElement::sing_term(alpha, t), img * sc);
                }
            }
        }

        // --- extra coefficients at a singular slot (n, k)
        const VertexAlgebra* valg = v_;
        GenCurrent cur_c = cur;
        VDist inner_c = inner;
        auto extra = [valg, cur_c, inner_c, parts](long n, long k) {
            VertexState out;
            KElement arg = s_basis_element(n, k);
            // term 2: inner values through K_j-multiplied arguments (their
            // kernel side is already in the composite kernel)
            for (const auto& [dj, kj] : parts) {
                if (!dj.has_extra()) continue;
                KElement shifted = k_mul(kj, arg);
                for (const auto& [slot, c2] : sing_to_sbasis(shifted))
                    out = out + dj.extra_at(slot.first, slot.second) * c2;
            }
            // term 1: current against the singular kernel side of the inner
            // field, then the product of the two holomorphic sides
            for (const auto& [ki, wi] : inner_c.kernel()) {
                KElement prod = sing_part(k_mul(sing_part(ki), arg));
                if (!prod.is_zero()) out = out + valg->act(cur_c.gen, cur_c.twist(prod), wi);
            }
            out = out + hol_pairing(*valg, cur_c, inner_c, n, k);
            return out;
        };
        return VDist(std::move(kernel), extra);
    }

    /// (A_Hol . D_Hol) at S(e_{n,k})(1/tau): structure constants of the dual
    /// algebra restrict to same-sign slots bounded by n with sigma-degrees
    /// summing to k.
    static VertexState hol_pairing(const VertexAlgebra& valg, const GenCurrent& cur,
                                   const VDist& inner, long n, long k) {
        VertexState out;
        long lo = std::min<long>(0, n), hi = std::max<long>(0, n);
        for (long n1 = lo; n1 <= hi; ++n1)
            for (long l1 = 0; l1 <= k; ++l1) {
                HatCzpol left = HatCzpol::term(n1, l1);
                for (long n2 = lo; n2 <= hi; ++n2) {
                    long l2 = k - l1;
                    Rational sc = hatcz_mul(left, HatCzpol::term(n2, l2)).coeff(n, k);
                    if (sc.is_zero()) continue;
                    VertexState right = inner.hol_coefficient(n2, l2);
                    if (right.is_zero()) continue;
                    out = out + valg.act(cur.gen, cur.twist(s_basis_element(n1, l1)), right) * sc;
                }
            }
        return out;
    }

    /// Kernel of the annihilation family p |-> X^{gen}_{S(h)p} s over
    /// polynomial p: finite, purely singular couplings.
    VDist::Kernel annihilation_kernel(const GenCurrent& cur, const VertexState& s) const {
        VDist::Kernel out;
        for (const auto& [w, c] : s.terms())
            for (auto& [k, u] : annihilation_kernel_word(cur, w)) out.emplace_back(k, u * c);
        return out;
    }

    VDist::Kernel annihilation_kernel_word(const GenCurrent& cur, const Word& w) const {
        VDist::Kernel out;
        if (w.empty()) return out;
        CreationKey head = w[0];
        Word tail(w.begin() + 1, w.end());
        VertexState tail_state;
        tail_state.add(tail, Rational(1));

        // commute past the head: same couplings, images re-prepended
        for (auto& [k, u] : annihilation_kernel_word(cur, tail))
            out.emplace_back(k, v_->act_creation(head, u));

        // bracket with the head, through the difference components of the
        // table: [X^{a}_{S(h)p}, X^{b}_{q}] = sum_j (a_{<j>} b)_{(D[j]S(h))<p> q}
        const ConformalAlgebra& conf = v_->conformal();
        KElement q = KElement::sing_term(head.n, head.k);
        std::map<long, FreeHtModuleElement> dcomp;
        for (long m : conf.support(cur.gen, head.gen)) {
            FreeHtModuleElement elt = conf.gen_product(cur.gen, m, head.gen);
            for (const auto& [j, d] : to_delta_basis(HtElement::shift(m))) {
                auto it = dcomp.find(j);
                if (it == dcomp.end()) dcomp.emplace(j, elt * d);
                else it->second = it->second + elt * d;
            }
        }
        for (const auto& [j, elt] : dcomp) {
            if (elt.is_zero()) continue;
            HatHtElement u = hat_mul(HatHtElement::from_ht(delta_basis_element(j)), cur.sh);
            HatHtElement su = hat_antipode(u);
            // singular residue couplings of u<p> q at the pole of q
            for (long t = 0; t <= head.k; ++t) {
                KElement coupling = hat_ht_act_k(su, KElement::sing_term(head.n, t));
                KElement piece = KElement::sing_term(head.n, head.k - t);
                for (const auto& [gk, gc] : elt.terms()) {
                    VertexState img = v_->act(gk.first, k_shift(piece, -gk.second), tail_state) * gc;
                    if (!img.is_zero()) out.emplace_back(sing_part(coupling), img);
                }
            }
            // the polynomial part of u<p> q feeds a nested annihilation of
            // the tail; transpose everything onto p through the trace
            for (const auto& [gk, gc] : elt.terms()) {
                GenCurrent plain{gk.first, HatHtElement::one()};
                VDist::Kernel nested = annihilation_kernel_word(plain, tail);
                for (const auto& [kk, uu] : nested) {
                    KElement kshift = k_shift(kk, gk.second);
                    // Tr(Pol(u<p> q) T^{sigma} K) = Tr(p . S(u)<q K'>) -
                    //   sum_t Tr(p . S(u)<T^a x^{-t-1}>) Tr(piece_t K')
                    KElement full = hat_ht_act_k(su, k_mul(q, kshift));
                    if (!sing_part(full).is_zero()) out.emplace_back(sing_part(full), uu * gc);
                    for (long t = 0; t <= head.k; ++t) {
                        Rational corr = trace(k_mul(KElement::sing_term(head.n, head.k - t), kshift));
                        if (corr.is_zero()) continue;
                        KElement coupling = hat_ht_act_k(su, KElement::sing_term(head.n, t));
                        if (!sing_part(coupling).is_zero())
                            out.emplace_back(sing_part(coupling), uu * (-(corr * gc)));
                    }
                }
            }
        }
        return out;
    }
};

}  // namespace htalg
