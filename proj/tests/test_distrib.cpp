#include "htalg/checks.hpp"
#include "htalg/distrib.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace htalg;

TEST_CASE("exponential components over the semigroup basis") {
    // R on tau(1): slot 0 carries tau(1), slot 1 carries tau(0), rest vanish
    auto r = exp_apply_semigroup(ExpKind::R, KElement(CzpolElement::tau(1)), 5);
    CHECK(r.size() == 2);
    CHECK(r[0] == KElement(CzpolElement::tau(1)));
    CHECK(r[1] == KElement(CzpolElement::one()));

    // twisted exponential of the unit: only the identity slot
    auto rs = exp_apply_semigroup(ExpKind::RS, KElement::one(), 5);
    CHECK(rs.size() == 1);
    CHECK(rs[0] == KElement::one());

    // twisted coproduct of tau reads tau (x) 1 - 1 (x) tau
    auto tw = exp_apply_semigroup(ExpKind::RS, KElement(CzpolElement::tau(1)), 5);
    CHECK(tw.size() == 2);
    CHECK(tw[0] == KElement(CzpolElement::tau(1)));
    CHECK(tw[1] == KElement(CzpolElement::one()) * Rational(-1));

    CHECK_THROWS_AS(
        exp_component(ExpKind::R, ExpBasis::DeltaSemigroup, KElement::one(), {0, 0}, ModuleTag::FreeHtModule),
        UnsupportedExtension);
}

TEST_CASE("dirac kernels") {
    auto de = dirac_delta();
    auto rh = rho();
    auto la = lambda();
    CHECK(de(KElement(CzpolElement::tau(1)), tau_full(-2)) == Rational(1));
    CHECK(rh(KElement(CzpolElement::tau(1)), KElement(CzpolElement::tau(2))) == Rational(0));
    Prng rng(9);
    for (int i = 0; i < 20; ++i) {
        KElement f = random_k(rng), g = random_k(rng);
        CHECK(de(f, g) == trace(k_mul(f, g)));
        CHECK(de(f, g) == rh(f, g) - la(f, g));
        CHECK(rh(f, g) == rho_series(f, g));
        CHECK(la(f, g) == lambda_series(f, g));
    }
}

TEST_CASE("traces of special products") {
    // unit distribution: Tr_{t1}(delta) = 1
    auto unit = ScalarDist1::rational({{KElement::one(), Rational(1)}});
    auto traced = distr_trace_in(unit, SpecialKind::Delta, 1);
    for (long j = 0; j <= 4; ++j) CHECK(traced(BasisIndex::pol(j)) == unit(BasisIndex::pol(j)));
    for (long n = -3; n <= 3; ++n) CHECK(traced(BasisIndex::sing(n, 0)) == unit(BasisIndex::sing(n, 0)));

    // rational D with kernel 1/tau against delta reproduces D
    auto d = ScalarDist1::rational({{KElement::inv_tau_pow(), Rational(1)}});
    auto dd = distr_trace_in(d, SpecialKind::Delta, 1);
    for (long j = 0; j <= 5; ++j) CHECK(dd(BasisIndex::pol(j)) == d(BasisIndex::pol(j)));
    for (long n = -5; n <= 5; ++n)
        for (long k = 0; k <= 2; ++k) CHECK(dd(BasisIndex::sing(n, k)) == d(BasisIndex::sing(n, k)));

    // against rho traced in t1: the holomorphic part, zero for this kernel
    auto dh = distr_trace_in(d, SpecialKind::Rho, 1);
    for (long j = 0; j <= 4; ++j) CHECK(dh(BasisIndex::pol(j)) == Rational(0));
    for (long n = -3; n <= 3; ++n) CHECK(dh(BasisIndex::sing(n, 0)) == d(BasisIndex::sing(n, 0)));

    // unit against lambda traced in t1: minus the singular part, zero
    auto dl = distr_trace_in(unit, SpecialKind::Lambda, 1);
    for (long j = 0; j <= 4; ++j) CHECK(dl(BasisIndex::pol(j)) == Rational(0));

    ScalarDist1 no_kernel([](const BasisIndex&) { return Rational(0); });
    CHECK_THROWS_AS(distr_trace_in(no_kernel, SpecialKind::Delta, 1)(BasisIndex::sing(0, 0)),
                    UnsupportedProduct);
}

TEST_CASE("rational reconstruction") {
    // fixed point: components of 1/tau with annihilator tau
    std::vector<Rational> comp0 = {Rational(1), Rational(0), Rational(0)};
    auto k0 = rational_reconstruct_kernel(comp0, {{0, 1}});
    REQUIRE(k0.has_value());
    CHECK(*k0 == KElement::inv_tau_pow());

    // round trip through the expansion of 1/tau^2 with annihilator tau^2
    std::vector<Rational> comps;
    for (long j = 0; j <= 6; ++j)
        comps.push_back(trace(k_mul(KElement::inv_tau_pow(1), KElement(CzpolElement::tau(j)))));
    auto k1 = rational_reconstruct_kernel(comps, {{0, 2}});
    REQUIRE(k1.has_value());
    CHECK(*k1 == KElement::inv_tau_pow(1));

    // wrong pole: the recursion is inconsistent
    auto bad = rational_reconstruct_kernel({Rational(1), Rational(0), Rational(0)}, {{1, 1}});
    CHECK(!bad.has_value());
}

TEST_CASE("commutator components") {
    Prng rng(13);
    // D = c D_2[2] delta with a rational coefficient kernel
    DeltaExpansion<Rational> d;
    d.table[2] = Rational(1);
    for (long j = 0; j <= 4; ++j) {
        for (int i = 0; i < 5; ++i) {
            KElement probe = random_k(rng);
            Rational got = commutator_component(d, j, probe);
            Rational want = (j == 2) ? trace(probe) : Rational(0);
            CHECK(got == want);
        }
    }
    // D = delta: only the zeroth component, the unit distribution
    DeltaExpansion<Rational> dir;
    dir.table[0] = Rational(1);
    CHECK(commutator_component(dir, 0, KElement::inv_tau_pow()) == Rational(1));
    CHECK(commutator_component(dir, 1, KElement::inv_tau_pow()) == Rational(0));

    // P = c T^2: components follow the difference coordinates of T^2
    DeltaExpansion<Rational> p2;
    for (const auto& [m, c] : to_delta_basis(HtElement::shift(2))) p2.table[m] = c;
    for (long j = 0; j <= 3; ++j) {
        KElement probe = KElement::inv_tau_pow();
        Rational want = p2.table.count(j) ? p2.table[j] * trace(probe) : Rational(0);
        CHECK(commutator_component(p2, j, probe) == want);
    }
}

TEST_CASE("polynomial separation") {
    // degree one: u + v = x directly
    auto s1 = poly_separate(XPoly::x(), XPoly::x());
    CHECK(s1.target == XPoly::x());
    CHECK(s1.q == BiPoly::constant(Rational(1)));
    CHECK(s1.r == BiPoly::constant(Rational(1)));

    // F = u^2, H = v^2: verify output eliminates the antidiagonal variable
    XPoly u2 = XPoly::monomial(2, Rational(1));
    auto s2 = poly_separate(u2, u2);
    BiPoly total = BiPoly::from_first(u2) * s2.q + BiPoly::from_second(u2) * s2.r;
    // substitute u = (x+y)/2, v = (x-y)/2 and require no y dependence
    Rational half(1, 2);
    BiPoly x = BiPoly::var1(), y = BiPoly::var2();
    BiPoly u_xy = (x + y) * BiPoly::constant(half);
    BiPoly v_xy = (x - y) * BiPoly::constant(half);
    BiPoly total_xy = total.substitute(u_xy, v_xy);
    for (const auto& [key, c] : total_xy.terms()) CHECK(key.second == 0);
    CHECK(!s2.q.is_zero());
    CHECK(!s2.r.is_zero());
    CHECK(!s2.target.is_zero());

    // unit input still yields nonzero cofactors and a separated target
    auto s3 = poly_separate(XPoly(Rational(1)), XPoly({Rational(1), Rational(0), Rational(3)}));
    CHECK(!s3.q.is_zero());
    CHECK(!s3.r.is_zero());
    CHECK(!s3.target.is_zero());
    BiPoly t3 = BiPoly::from_first(XPoly(Rational(1))) * s3.q +
                BiPoly::from_second(XPoly({Rational(1), Rational(0), Rational(3)})) * s3.r;
    BiPoly t3_xy = t3.substitute(u_xy, v_xy);
    for (const auto& [key, c] : t3_xy.terms()) CHECK(key.second == 0);

    // random pairs stay separable with polynomial cofactors
    Prng rng(29);
    for (int i = 0; i < 10; ++i) {
        XPoly f, h;
        long df = rng.next_int(1, 3), dh = rng.next_int(1, 3);
        for (long j = 0; j <= df; ++j) f.set_coeff(j, Rational(rng.next_int(-3, 3)));
        f.set_coeff(df, rng.next_rational());
        for (long j = 0; j <= dh; ++j) h.set_coeff(j, Rational(rng.next_int(-3, 3)));
        h.set_coeff(dh, rng.next_rational());
        auto s = poly_separate(f, h);
        BiPoly tot = BiPoly::from_first(f) * s.q + BiPoly::from_second(h) * s.r;
        BiPoly tot_xy = tot.substitute(u_xy, v_xy);
        for (const auto& [key, c] : tot_xy.terms()) CHECK(key.second == 0);
    }
}

TEST_CASE("twisted coproduct coefficients reproduce the difference function") {
    for (long j = 0; j <= 4; ++j) {
        auto coords = twisted_tau_coefficients(j);
        for (long m = -3; m <= 3; ++m)
            for (long n = -3; n <= 3; ++n) {
                Rational acc(0);
                for (const auto& [ab, c] : coords)
                    acc += c * tau_eval(CzpolElement::tau(ab.first), m) *
                           tau_eval(CzpolElement::tau(ab.second), n);
                CHECK(acc == Rational(falling_factorial(BigInt(m - n), j)));
            }
    }
}
