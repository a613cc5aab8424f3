#pragma once

#include "htalg/diff_alg.hpp"
#include "htalg/prng.hpp"
#include "htalg/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace htalg {

// Generators of the Toda phase-space algebra; A sits at shift exponent +1,
// B at 0, C at -1 in the Lax operator.
inline constexpr GenId kGenA = 0;
inline constexpr GenId kGenB = 1;
inline constexpr GenId kGenC = 2;
inline const std::vector<std::string> kTodaNames = {"A", "B", "C"};

/// How the superdiagonal coefficient enters the Lax operator.
enum class AMode { Symbolic, One, Zero };

inline DiffPoly a_coefficient(AMode mode) {
    switch (mode) {
        case AMode::Symbolic: return DiffPoly::generator(kGenA);
        case AMode::One: return DiffPoly::one();
        case AMode::Zero: return DiffPoly();
    }
    throw std::logic_error("a_coefficient");
}

/// L = A T + B + C T^{-1}.
inline VHtOperator lax_operator(AMode mode = AMode::Symbolic) {
    VHtOperator l;
    l.add(1, a_coefficient(mode));
    l.add(0, DiffPoly::generator(kGenB));
    l.add(-1, DiffPoly::generator(kGenC));
    return l;
}

inline long lax_exponent(GenId g) { return g == kGenA ? 1 : (g == kGenB ? 0 : -1); }

/// Substitute a frozen value for the A generator.
inline DiffPoly freeze_a(const DiffPoly& f, AMode mode) {
    if (mode == AMode::Symbolic) return f;
    DiffPoly r;
    for (const auto& [m, c] : f.terms()) {
        DiffMonomial keep;
        bool dead = false;
        for (const auto& [g, e] : m.factors) {
            if (g.first == kGenA) {
                if (mode == AMode::Zero) dead = true;  // A^e -> 0
                // mode One: A^e -> 1, drop the factor
            } else {
                keep.factors.push_back({g, e});
            }
            if (dead) break;
        }
        if (!dead) r.add(keep, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Fundamental brackets and the pair calculus
// ---------------------------------------------------------------------------

/// {v_a(t_i), v_b(t_j)} = sum_c p_c(t_j) T_j^c<delta_ij>: table of (c -> p_c)
/// per generator pair, fields carried in the second slot.
class TwoVarBracket {
public:
    void set(GenId a, GenId b, long c, DiffPoly p) {
        if (!p.is_zero()) t_[{a, b}][c] = std::move(p);
    }
    const std::map<long, DiffPoly>* entry(GenId a, GenId b) const {
        auto it = t_.find({a, b});
        return it == t_.end() ? nullptr : &it->second;
    }
    VHtOperator entry_operator(GenId a, GenId b) const {
        VHtOperator r;
        if (const auto* e = entry(a, b))
            for (const auto& [c, p] : *e) r.add(c, p);
        return r;
    }

private:
    std::map<std::pair<GenId, GenId>, std::map<long, DiffPoly>> t_;
};

/// {B(t1), C(t2)} = C(t2)(T_2^{-1} - 1)delta, {C(t1), B(t2)} = (1 - T_2)C(t2)delta,
/// everything touching A is central.
inline TwoVarBracket bracket_table() {
    TwoVarBracket t;
    DiffPoly c = DiffPoly::generator(kGenC);
    t.set(kGenB, kGenC, -1, c);
    t.set(kGenB, kGenC, 0, -c);
    t.set(kGenC, kGenB, 0, c);
    t.set(kGenC, kGenB, 1, -diff_shift(c, 1));
    return t;
}

/// Normal form of a two-variable expression: coefficient times monomial at
/// the second variable times T_2^c<delta_12>.
using PairNF = std::map<std::pair<DiffMonomial, long>, Rational>;

inline void pairnf_add(PairNF& nf, const DiffMonomial& m, long c, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto key = std::make_pair(m, c);
    auto it = nf.find(key);
    if (it == nf.end()) {
        nf.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) nf.erase(it);
    }
}

inline void pairnf_add_poly(PairNF& nf, const DiffPoly& p, long c, const Rational& scale = Rational(1)) {
    for (const auto& [m, co] : p.terms()) pairnf_add(nf, m, c, co * scale);
}

/// Full bracket {f(t_i), g(t_j)} of difference polynomials, extended from the
/// generator table as a derivation in each slot, normalized to fields at t_j.
inline PairNF pair_bracket(const TwoVarBracket& table, const DiffPoly& f, const DiffPoly& g) {
    PairNF out;
    for (GenId a : {kGenA, kGenB, kGenC}) {
        for (long m : shifts_of(f, a)) {
            DiffPoly df = diff_partial(f, a, m);
            if (df.is_zero()) continue;
            for (GenId b : {kGenA, kGenB, kGenC}) {
                const auto* entry = table.entry(a, b);
                if (!entry) continue;
                for (long n : shifts_of(g, b)) {
                    DiffPoly dg = diff_partial(g, b, n);
                    if (dg.is_zero()) continue;
                    for (const auto& [c, p] : *entry) {
                        long cp = n + c - m;  // slot-j action after covariance
                        DiffPoly fields = diff_shift(df, cp) * diff_shift(p, n) * dg;
                        pairnf_add_poly(out, fields, cp);
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// r-matrix commutator in the Lax tensor normal form
// ---------------------------------------------------------------------------

/// Term coeff . m(t2) . T_2^c<delta> . T_1^a T_2^b, powers of T kept to the
/// right as formal bookkeeping of the Lax tensor slots.
using LaxTensorKey = std::tuple<DiffMonomial, long, long, long>;
using LaxTensorNF = std::map<LaxTensorKey, Rational>;

inline void laxnf_add(LaxTensorNF& nf, const DiffMonomial& m, long c, long a, long b,
                      const Rational& coeff) {
    if (coeff.is_zero()) return;
    LaxTensorKey key{m, c, a, b};
    auto it = nf.find(key);
    if (it == nf.end()) {
        nf.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) nf.erase(it);
    }
}

/// [L_2, r] - [L_1, r*] with r the half-difference of the two projection
/// kernels; coefficients of T_1^a T_2^b are exact within |a|, |b| <= window
/// because the Lax support is {-1,0,1}.
inline LaxTensorNF lax_r_commutator(AMode mode, long window) {
    LaxTensorNF out;
    std::map<long, DiffPoly> lax;  // exponent -> coefficient
    lax[1] = a_coefficient(mode);
    lax[0] = DiffPoly::generator(kGenB);
    lax[-1] = DiffPoly::generator(kGenC);

    for (long alpha = -window - 2; alpha <= window + 2; ++alpha) {
        Rational eps((alpha <= 0) ? 1 : -1, 2);  // rho(T^{-alpha})/2
        for (const auto& [beta, v] : lax) {
            if (v.is_zero()) continue;
            // [L_2, r]: L(t2) against the slot-2 kernel piece
            //   + v(t2) T_2^{b-a}<delta> T_1^a T_2^{b-a}
            //   - (T^{-a} v)(t2) T_2^{-a}<delta> T_1^a T_2^{b-a}
            for (const auto& [m, c] : v.terms()) laxnf_add(out, m, beta - alpha, alpha, beta - alpha, c * eps);
            DiffPoly v_back = diff_shift(v, -alpha);
            for (const auto& [m, c] : v_back.terms())
                laxnf_add(out, m, -alpha, alpha, beta - alpha, -(c * eps));
            // -[L_1, r*]: slot-1 kernel piece transported to slot 2
            //   - (T^{a-b} v)(t2) T_2^{a-b}<delta> T_1^{b-a} T_2^a
            //   + v(t2) T_2^a<delta> T_1^{b-a} T_2^a
            DiffPoly v_fwd = diff_shift(v, alpha - beta);
            for (const auto& [m, c] : v_fwd.terms())
                laxnf_add(out, m, alpha - beta, beta - alpha, alpha, -(c * eps));
            for (const auto& [m, c] : v.terms()) laxnf_add(out, m, alpha, beta - alpha, alpha, c * eps);
        }
    }
    // keep only the window where every contribution has been collected
    for (auto it = out.begin(); it != out.end();) {
        const auto& [m, c, a, b] = it->first;
        it = (std::labs(a) > window || std::labs(b) > window) ? out.erase(it) : std::next(it);
    }
    return out;
}

/// Expected tensor normal form of the fundamental brackets:
/// sum_{a,b} {v_a(t1), v_b(t2)} T_1^{e(a)} T_2^{e(b)}.
inline LaxTensorNF expected_bracket_tensor(const TwoVarBracket& table, AMode mode, long window) {
    LaxTensorNF out;
    for (GenId a : {kGenA, kGenB, kGenC})
        for (GenId b : {kGenA, kGenB, kGenC}) {
            const auto* e = table.entry(a, b);
            if (!e) continue;
            long ta = lax_exponent(a), tb = lax_exponent(b);
            if (std::labs(ta) > window || std::labs(tb) > window) continue;
            for (const auto& [c, p] : *e) {
                DiffPoly frozen = freeze_a(p, mode);
                for (const auto& [m, co] : frozen.terms()) laxnf_add(out, m, c, ta, tb, co);
            }
        }
    return out;
}

inline CheckReport r_commutator_check(AMode mode = AMode::Symbolic, long window = 3) {
    CheckReport rep{"toda-r-commutator", window, 0, {}};
    LaxTensorNF got = lax_r_commutator(mode, window);
    LaxTensorNF expect = expected_bracket_tensor(bracket_table(), mode, window);
    if (!(got == expect)) {
        for (const auto& [k, c] : got) {
            auto it = expect.find(k);
            if (it == expect.end() || !(it->second == c))
                rep.violations.push_back("unexpected term at T1^" + std::to_string(std::get<2>(k)) +
                                         " T2^" + std::to_string(std::get<3>(k)));
        }
        for (const auto& [k, c] : expect)
            if (!got.count(k))
                rep.violations.push_back("missing term at T1^" + std::to_string(std::get<2>(k)) + " T2^" +
                                         std::to_string(std::get<3>(k)));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Hamiltonians and flows
// ---------------------------------------------------------------------------

/// delta_L f = sum_a T^{-e(a)} (df/dv_a), supported in {-1, 0, 1}.
inline VHtOperator delta_L(const DiffPoly& f, AMode mode = AMode::Symbolic) {
    VHtOperator r;
    std::vector<GenId> gens = {kGenB, kGenC};
    if (mode == AMode::Symbolic) gens.insert(gens.begin(), kGenA);
    for (GenId g : gens) {
        long e = lax_exponent(g);
        DiffPoly d = var_derivative(f, g);
        if (!d.is_zero()) r.add(-e, diff_shift(d, -e));
    }
    return r;
}

/// H_n = Sp(L^n)/2n, coinvariant-reduced.
inline CoinvClass hamiltonian(long n, AMode mode = AMode::Symbolic) {
    if (n < 1) throw std::invalid_argument("hamiltonian: n >= 1");
    VHtOperator p = VHtOperator::identity();
    VHtOperator l = lax_operator(mode);
    for (long i = 0; i < n; ++i) p = vht_mul(p, l);
    return coinvariant_reduce(sp(p) * Rational(1, 2 * n));
}

/// rho = P_{>=0} - P_{<0}; its Sp-adjoint is P_{<=0} - P_{>0}.
inline VHtOperator rmatrix_rho(const VHtOperator& p) {
    return project(p, ProjRegion::GE, 0) - project(p, ProjRegion::LT, 0);
}
inline VHtOperator rmatrix_rho_adj(const VHtOperator& p) {
    return project(p, ProjRegion::LE, 0) - project(p, ProjRegion::GT, 0);
}

/// Flow of an arbitrary density through the r-matrix form:
/// X_f(L) = [L, rho(delta_L f)] + rho*([L, delta_L f]).
inline VHtOperator flow_of_operator(const VHtOperator& dlf, AMode mode) {
    VHtOperator l = lax_operator(mode);
    return vht_commutator(l, rmatrix_rho(dlf)) + rmatrix_rho_adj(vht_commutator(l, dlf));
}

/// The n-th Hamiltonian flow both ways: through the r-matrix form applied to
/// delta_L H_n, and as the Lax equation [L, P_{>=0}(L^{n-1})]. Both must
/// agree coefficientwise on the Lax support.
struct HamFlow {
    std::map<GenId, DiffPoly> rmatrix_form;
    std::map<GenId, DiffPoly> lax_form;
    bool consistent = false;
};

inline std::map<GenId, DiffPoly> flow_components(const VHtOperator& x) {
    std::map<GenId, DiffPoly> out;
    for (const auto& [n, p] : x.terms()) {
        if (n == 1) out[kGenA] = p;
        else if (n == 0) out[kGenB] = p;
        else if (n == -1) out[kGenC] = p;
        else if (!p.is_zero()) throw std::logic_error("flow leaves the Lax support");
    }
    return out;
}

inline HamFlow ham_flow(long n, AMode mode = AMode::Symbolic) {
    VHtOperator l = lax_operator(mode);
    VHtOperator lpow = VHtOperator::identity();
    for (long i = 1; i < n; ++i) lpow = vht_mul(lpow, l);

    // route 1: r-matrix form with delta_L H_n from the variational derivative
    DiffPoly hn;
    {
        VHtOperator p = vht_mul(lpow, l);
        hn = sp(p) * Rational(1, 2 * n);
    }
    VHtOperator x1 = flow_of_operator(delta_L(hn, mode), mode);

    // route 2: Lax equation with the projected power
    VHtOperator x2 = vht_commutator(l, project(lpow * Rational(1, 1), ProjRegion::GE, 0));

    HamFlow out;
    out.rmatrix_form = flow_components(x1);
    out.lax_form = flow_components(x2);
    out.consistent = (x1 == x2);
    if (!out.consistent) throw std::logic_error("hamiltonian flow formulas disagree at n=" + std::to_string(n));
    return out;
}

/// The flow as an evolutionary derivation on the free difference algebra.
inline EvolDerivation ham_flow_derivation(long n, AMode mode = AMode::Symbolic) {
    HamFlow f = ham_flow(n, mode);
    EvolDerivation x;
    for (const auto& [g, p] : f.lax_form) x.set(g, p);
    return x;
}

// ---------------------------------------------------------------------------
// Jacobi identity in the three-variable normal form
// ---------------------------------------------------------------------------

/// Term m(t3) . T_1^u<delta_13> . T_2^v<delta_23>.
using TripleKey = std::tuple<DiffMonomial, long, long>;
using TripleNF = std::map<TripleKey, Rational>;

inline void triplenf_add(TripleNF& nf, const DiffMonomial& m, long u, long v, const Rational& c) {
    if (c.is_zero()) return;
    TripleKey key{m, u, v};
    auto it = nf.find(key);
    if (it == nf.end()) {
        nf.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) nf.erase(it);
    }
}

/// {f(t1), {g(t2), k(t3)}}: outer bracket acts on the inner coefficients.
inline TripleNF double_bracket_1_23(const TwoVarBracket& t, const DiffPoly& f, const DiffPoly& g,
                                    const DiffPoly& k) {
    TripleNF out;
    PairNF inner = pair_bracket(t, g, k);  // q(t3) T_3^c<delta_23>
    for (const auto& [key, coeff] : inner) {
        DiffPoly q;
        q.add(key.first, coeff);
        long v = -key.second;  // slot-2 action on delta_23
        PairNF outer = pair_bracket(t, f, q);  // w(t3) T_3^c'<delta_13>
        for (const auto& [key2, c2] : outer) triplenf_add(out, key2.first, -key2.second, v, c2);
    }
    return out;
}

/// {g(t2), {f(t1), k(t3)}}.
inline TripleNF double_bracket_2_13(const TwoVarBracket& t, const DiffPoly& f, const DiffPoly& g,
                                    const DiffPoly& k) {
    TripleNF out;
    PairNF inner = pair_bracket(t, f, k);  // q(t3) T_3^c<delta_13>
    for (const auto& [key, coeff] : inner) {
        DiffPoly q;
        q.add(key.first, coeff);
        long u = -key.second;
        PairNF outer = pair_bracket(t, g, q);  // w(t3) T_3^c'<delta_23>
        for (const auto& [key2, c2] : outer) triplenf_add(out, key2.first, u, -key2.second, c2);
    }
    return out;
}

/// {{f(t1), g(t2)}, k(t3)}: bracket the inner slot-2 coefficients with k and
/// eliminate delta_12 through delta_12 delta_23 = delta_13 delta_23.
inline TripleNF double_bracket_12_3(const TwoVarBracket& t, const DiffPoly& f, const DiffPoly& g,
                                    const DiffPoly& k) {
    TripleNF out;
    PairNF inner = pair_bracket(t, f, g);  // p(t2) T_2^c<delta_12>
    for (const auto& [key, coeff] : inner) {
        DiffPoly p;
        p.add(key.first, coeff);
        long a = -key.second;  // slot-1 action on delta_12
        PairNF outer = pair_bracket(t, p, k);  // w(t3) T_3^c'<delta_23>
        for (const auto& [key2, c2] : outer) {
            long v = -key2.second;
            // T_1^a<d12> T_2^v<d23> = T_1^{a+v}<d13> T_2^v<d23>
            triplenf_add(out, key2.first, a + v, v, c2);
        }
    }
    return out;
}

/// Jacobi in Leibniz form on all generator triples with shifts in the window.
inline CheckReport jacobi_check(long shift_bound = 3, AMode mode = AMode::Symbolic) {
    CheckReport rep{"toda-jacobi", shift_bound, 0, {}};
    TwoVarBracket table = bracket_table();
    std::vector<GenId> gens = {kGenB, kGenC};
    if (mode == AMode::Symbolic) gens.push_back(kGenA);
    for (GenId a : gens)
        for (GenId b : gens)
            for (GenId c : gens)
                for (long s = -shift_bound; s <= shift_bound; ++s) {
                    DiffPoly f = DiffPoly::generator(a);
                    DiffPoly g = DiffPoly::generator(b, s);
                    DiffPoly k = DiffPoly::generator(c);
                    TripleNF lhs = double_bracket_1_23(table, f, g, k);
                    TripleNF r1 = double_bracket_12_3(table, f, g, k);
                    TripleNF r2 = double_bracket_2_13(table, f, g, k);
                    for (const auto& [key, co] : r1) triplenf_add(lhs, std::get<0>(key), std::get<1>(key), std::get<2>(key), -co);
                    for (const auto& [key, co] : r2) triplenf_add(lhs, std::get<0>(key), std::get<1>(key), std::get<2>(key), -co);
                    if (!lhs.empty())
                        rep.violations.push_back("jacobi fails on (" + kTodaNames[a] + ", T^" +
                                                 std::to_string(s) + " " + kTodaNames[b] + ", " +
                                                 kTodaNames[c] + ")");
                }
    return rep;
}

// ---------------------------------------------------------------------------
// Numeric simulation
// ---------------------------------------------------------------------------

enum class Topology { Open, Periodic };

struct TodaStateNumeric {
    long n = 0;
    Topology topology = Topology::Periodic;
    std::vector<double> b, c;

    static TodaStateNumeric random(long n, Topology topo, std::uint64_t seed) {
        if (n < 2) throw std::invalid_argument("TodaStateNumeric: N >= 2");
        TodaStateNumeric s;
        s.n = n;
        s.topology = topo;
        s.b.resize(n);
        s.c.resize(n);
        Prng rng(seed);
        for (long i = 0; i < n; ++i) s.b[i] = rng.next_double(-1.0, 1.0);
        for (long i = 0; i < n; ++i) s.c[i] = rng.next_double(0.5, 1.5);
        if (topo == Topology::Open) s.c[0] = 0.0;
        return s;
    }
};

struct DivergenceError : std::runtime_error {
    long step;
    explicit DivergenceError(long at)
        : std::runtime_error("numeric divergence at step " + std::to_string(at)), step(at) {}
};

/// dB_i = C_i - C_{i+1}, dC_i = C_i (B_{i-1} - B_i); open ends read zero.
inline void numeric_rhs(const TodaStateNumeric& s, std::vector<double>& db, std::vector<double>& dc) {
    long n = s.n;
    db.assign(n, 0.0);
    dc.assign(n, 0.0);
    for (long i = 0; i < n; ++i) {
        double c_here = s.c[i];
        double c_next = (i + 1 < n) ? s.c[i + 1] : (s.topology == Topology::Periodic ? s.c[0] : 0.0);
        db[i] = c_here - c_next;
        double b_prev = (i > 0) ? s.b[i - 1] : (s.topology == Topology::Periodic ? s.b[n - 1] : 0.0);
        dc[i] = (s.topology == Topology::Open && i == 0) ? 0.0 : c_here * (b_prev - s.b[i]);
    }
}

inline void rk4_step(TodaStateNumeric& s, double dt) {
    long n = s.n;
    std::vector<double> k1b, k1c, k2b, k2c, k3b, k3c, k4b, k4c;
    TodaStateNumeric tmp = s;
    numeric_rhs(s, k1b, k1c);
    for (long i = 0; i < n; ++i) { tmp.b[i] = s.b[i] + 0.5 * dt * k1b[i]; tmp.c[i] = s.c[i] + 0.5 * dt * k1c[i]; }
    numeric_rhs(tmp, k2b, k2c);
    for (long i = 0; i < n; ++i) { tmp.b[i] = s.b[i] + 0.5 * dt * k2b[i]; tmp.c[i] = s.c[i] + 0.5 * dt * k2c[i]; }
    numeric_rhs(tmp, k3b, k3c);
    for (long i = 0; i < n; ++i) { tmp.b[i] = s.b[i] + dt * k3b[i]; tmp.c[i] = s.c[i] + dt * k3c[i]; }
    numeric_rhs(tmp, k4b, k4c);
    for (long i = 0; i < n; ++i) {
        s.b[i] += dt / 6.0 * (k1b[i] + 2 * k2b[i] + 2 * k3b[i] + k4b[i]);
        s.c[i] += dt / 6.0 * (k1c[i] + 2 * k2c[i] + 2 * k3c[i] + k4c[i]);
    }
}

inline void check_finite(const TodaStateNumeric& s, long step) {
    for (double x : s.b)
        if (!std::isfinite(x)) throw DivergenceError(step);
    for (double x : s.c)
        if (!std::isfinite(x)) throw DivergenceError(step);
}

inline std::vector<TodaStateNumeric> simulate(TodaStateNumeric s, double dt, long steps) {
    if (dt <= 0) throw std::invalid_argument("simulate: dt > 0");
    std::vector<TodaStateNumeric> traj;
    traj.push_back(s);
    for (long i = 0; i < steps; ++i) {
        rk4_step(s, dt);
        check_finite(s, i + 1);
        traj.push_back(s);
    }
    return traj;
}

/// tr(L^k) for the N x N Lax matrix: B on the diagonal, 1 above, C below,
/// wrapping in the periodic topology.
inline std::vector<double> conserved_traces(const TodaStateNumeric& s, long kmax) {
    long n = s.n;
    if (kmax < 1 || kmax > n) throw std::invalid_argument("conserved_traces: 1 <= kmax <= N");
    std::vector<std::vector<double>> lax(n, std::vector<double>(n, 0.0));
    for (long i = 0; i < n; ++i) {
        lax[i][i] = s.b[i];
        if (i + 1 < n) {
            lax[i][i + 1] = 1.0;
            lax[i + 1][i] = s.c[i + 1];
        }
    }
    if (s.topology == Topology::Periodic) {
        lax[n - 1][0] = 1.0;
        lax[0][n - 1] = s.c[0];
    }
    std::vector<double> out;
    std::vector<std::vector<double>> power = lax;
    for (long k = 1; k <= kmax; ++k) {
        double tr = 0.0;
        for (long i = 0; i < n; ++i) tr += power[i][i];
        out.push_back(tr);
        if (k == kmax) break;
        std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                double acc = 0.0;
                for (long l = 0; l < n; ++l) acc += power[i][l] * lax[l][j];
                next[i][j] = acc;
            }
        power = std::move(next);
    }
    return out;
}

struct SimConfig {
    long n = 8;
    double dt = 1e-3;
    long steps = 10000;
    Topology topology = Topology::Periodic;
    std::uint64_t seed = 1;
    long kmax = 4;
};

/// Trajectory CSV: header then one line per step, summary line with the max
/// relative drift of each trace. Formatting is fixed so output is byte-stable.
inline std::string simulate_csv(const SimConfig& cfg) {
    TodaStateNumeric s = TodaStateNumeric::random(cfg.n, cfg.topology, cfg.seed);
    std::string out = "t";
    for (long i = 0; i < cfg.n; ++i) out += ",B" + std::to_string(i);
    for (long i = 0; i < cfg.n; ++i) out += ",C" + std::to_string(i);
    for (long k = 1; k <= cfg.kmax; ++k) out += ",trL" + std::to_string(k);
    out += "\n";

    char buf[64];
    std::vector<double> tr0 = conserved_traces(s, cfg.kmax);
    std::vector<double> drift(cfg.kmax, 0.0);
    for (long step = 0; step <= cfg.steps; ++step) {
        double t = step * cfg.dt;
        std::snprintf(buf, sizeof(buf), "%.17g", t);
        out += buf;
        for (double x : s.b) { std::snprintf(buf, sizeof(buf), ",%.17g", x); out += buf; }
        for (double x : s.c) { std::snprintf(buf, sizeof(buf), ",%.17g", x); out += buf; }
        std::vector<double> tr = conserved_traces(s, cfg.kmax);
        for (long k = 0; k < cfg.kmax; ++k) {
            std::snprintf(buf, sizeof(buf), ",%.17g", tr[k]);
            out += buf;
            double scale = std::max(1.0, std::fabs(tr0[k]));
            drift[k] = std::max(drift[k], std::fabs(tr[k] - tr0[k]) / scale);
        }
        out += "\n";
        if (step < cfg.steps) {
            rk4_step(s, cfg.dt);
            check_finite(s, step + 1);
        }
    }
    out += "# max_rel_drift";
    for (long k = 0; k < cfg.kmax; ++k) {
        std::snprintf(buf, sizeof(buf), ",%.17g", drift[k]);
        out += buf;
    }
    out += "\n";
    return out;
}

}  // namespace htalg
