#include "htalg/checks.hpp"
#include "htalg/diff_alg.hpp"
#include "htalg/toda.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace htalg;

namespace {
const GenId A = kGenA, B = kGenB, C = kGenC;

// word-enumeration oracle for Sp(L^n): sum over exponent-balanced words in
// the factors (a T), (b), (c T^{-1}) with shifts accumulated left to right
DiffPoly sp_power_oracle(long n, AMode mode) {
    struct Step {
        long exp;
        GenId gen;
        bool unit;  // coefficient is the constant 1 (frozen A)
    };
    std::vector<Step> steps;
    if (mode != AMode::Zero) steps.push_back({1, A, mode == AMode::One});
    steps.push_back({0, B, false});
    steps.push_back({-1, C, false});

    DiffPoly total;
    std::vector<int> word(n, 0);
    for (;;) {
        long shift = 0;
        DiffPoly term = DiffPoly::one();
        for (long i = 0; i < n; ++i) {
            const Step& s = steps[word[i]];
            if (!s.unit) term = term * DiffPoly::generator(s.gen, shift);
            shift += s.exp;
        }
        if (shift == 0) total = total + term;
        long i = 0;
        while (i < n && word[i] == static_cast<int>(steps.size()) - 1) word[i++] = 0;
        if (i == n) break;
        ++word[i];
    }
    return total;
}
}  // namespace

TEST_CASE("operator composition") {
    VHtOperator bt = VHtOperator::term(DiffPoly::generator(B), 1);
    VHtOperator ct = VHtOperator::term(DiffPoly::generator(C), -1);
    VHtOperator prod = vht_mul(bt, ct);
    // (B T)(C T^{-1}) = B . T<C> at exponent 0
    CHECK(prod.terms().size() == 1);
    CHECK(prod.coeff(0) == DiffPoly::generator(B) * DiffPoly::generator(C, 1));

    CHECK(vht_mul(VHtOperator::term(DiffPoly::one(), 1), VHtOperator::term(DiffPoly::one(), -1)) ==
          VHtOperator::identity());

    // Sp(L^n) against the word-enumeration oracle
    for (long n = 1; n <= 4; ++n)
        for (AMode mode : {AMode::Symbolic, AMode::One, AMode::Zero}) {
            VHtOperator pw = VHtOperator::identity();
            for (long i = 0; i < n; ++i) pw = vht_mul(pw, lax_operator(mode));
            CHECK(sp(pw) == sp_power_oracle(n, mode));
        }
    // the n = 2 case explicitly
    DiffPoly expect = DiffPoly::generator(A) * DiffPoly::generator(C, 1) +
                      DiffPoly::generator(B) * DiffPoly::generator(B) +
                      DiffPoly::generator(C) * DiffPoly::generator(A, -1);
    CHECK(sp_power_oracle(2, AMode::Symbolic) == expect);
}

TEST_CASE("adjoint, antipodal and the scalar piece") {
    VHtOperator bt = VHtOperator::term(DiffPoly::generator(B), 1);
    VHtOperator adj = vht_adjoint(bt);
    CHECK(adj.terms().size() == 1);
    CHECK(adj.coeff(-1) == DiffPoly::generator(B, -1));

    Prng rng(31);
    for (int i = 0; i < 15; ++i) {
        VHtOperator p;
        for (long n = -1; n <= 1; ++n) p.add(n, random_diff_poly(rng, {A, B, C}, 2, 2, 2));
        CHECK(vht_adjoint(vht_adjoint(p)) == p);
        VHtOperator q;
        for (long n = -1; n <= 1; ++n) q.add(n, random_diff_poly(rng, {A, B, C}, 2, 2, 2));
        CHECK(vht_adjoint(vht_mul(p, q)) == vht_mul(vht_adjoint(q), vht_adjoint(p)));
    }

    // P_V of the partial-derivative operator is the variational derivative
    for (int i = 0; i < 10; ++i) {
        DiffPoly f = random_diff_poly(rng, {B, C}, 2, 3, 3);
        for (GenId g : {B, C}) {
            VHtOperator p;
            for (long n : shifts_of(f, g)) p.add(n, diff_partial(f, g, n));
            CHECK(vht_pv(p) == var_derivative(f, g));
        }
    }
}

TEST_CASE("scalar piece and coinvariants") {
    VHtOperator l;
    l.add(0, DiffPoly::generator(B));
    l.add(-1, DiffPoly::generator(C));
    CHECK(sp(l) == DiffPoly::generator(B));

    Prng rng(37);
    for (int i = 0; i < 10; ++i) {
        long a = rng.next_int(-3, 3);
        VHtOperator p = VHtOperator::term(random_diff_poly(rng, {B, C}, 2, 2, 2), a);
        VHtOperator q = VHtOperator::term(random_diff_poly(rng, {B, C}, 2, 2, 2), -a);
        CHECK(coinvariant_reduce(sp(vht_commutator(p, q))).is_zero());
    }
}

TEST_CASE("operator exponent projections") {
    VHtOperator l = lax_operator(AMode::Symbolic);
    VHtOperator up = project(l, ProjRegion::GE, 0);
    CHECK(up.coeff(1) == DiffPoly::generator(A));
    CHECK(up.coeff(0) == DiffPoly::generator(B));
    CHECK(up.coeff(-1).is_zero());
    CHECK(project(l, ProjRegion::LT, 0).coeff(-1) == DiffPoly::generator(C));
    CHECK(project(l, ProjRegion::EQ, 0).coeff(0) == DiffPoly::generator(B));
}

TEST_CASE("variational derivative") {
    // f = B . TB
    DiffPoly f = DiffPoly::generator(B) * DiffPoly::generator(B, 1);
    DiffPoly expect = DiffPoly::generator(B, 1) + DiffPoly::generator(B, -1);
    CHECK(var_derivative(f, B) == expect);

    CHECK(var_derivative(DiffPoly::generator(C), C) == DiffPoly::one());

    // total differences die
    DiffPoly g = DiffPoly::generator(B) * DiffPoly::generator(B);
    DiffPoly dg = diff_shift(g, 1) - g;
    CHECK(var_derivative(dg, B).is_zero());

    // X(f) = <X, delta f> modulo total differences for random evolutionary X
    Prng rng(41);
    for (int i = 0; i < 10; ++i) {
        DiffPoly h = random_diff_poly(rng, {B, C}, 2, 3, 2);
        EvolDerivation x;
        x.set(B, random_diff_poly(rng, {B, C}, 1, 2, 1));
        x.set(C, random_diff_poly(rng, {B, C}, 1, 2, 1));
        DiffPoly lhs = x(h);
        DiffPoly rhs = x.value(B) * var_derivative(h, B) + x.value(C) * var_derivative(h, C);
        CHECK(coinvariant_reduce(lhs - rhs).is_zero());
    }
}

TEST_CASE("coinvariant reduction") {
    DiffPoly bc = DiffPoly::generator(B) * DiffPoly::generator(C);
    CHECK(coinvariant_reduce(diff_shift(bc, 1) - bc).is_zero());
    CHECK(coinvariant_reduce(diff_shift(DiffPoly::generator(B), 3) - DiffPoly::generator(B)).is_zero());

    DiffPoly m = DiffPoly::generator(B) * DiffPoly::generator(C, 2);
    DiffPoly two = m + diff_shift(m, -1);
    CHECK(coinvariant_reduce(two) == coinvariant_reduce(m * Rational(2)));
}

TEST_CASE("evolutionary derivations") {
    EvolDerivation x;
    DiffPoly rhs = DiffPoly::generator(C) - DiffPoly::generator(C, 1);  // (1-T)C
    x.set(B, rhs);
    CHECK(x(DiffPoly::generator(B)) == rhs);
    CHECK(x(DiffPoly::generator(B) * DiffPoly::generator(B)) ==
          DiffPoly::generator(B) * rhs * Rational(2));
    CHECK(x(DiffPoly::constant(Rational(7))).is_zero());
    // commutes with the shift
    Prng rng(43);
    for (int i = 0; i < 10; ++i) {
        DiffPoly f = random_diff_poly(rng, {B, C}, 2, 2, 2);
        CHECK(x(diff_shift(f, 1)) == diff_shift(x(f), 1));
    }
}
