#include "htalg/checks.hpp"
#include "htalg/seq_czpol.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace htalg;

namespace {
// independent recurrence oracle: values of tau(l) on a window from
// Delta tau(l) = l tau(l-1), tau(l)|_0 = 0, tau(0) = 1
Rational tau_by_recurrence(long l, long n) {
    if (l == 0) return Rational(1);
    // integrate the recurrence upward/downward from 0
    Rational acc(0);
    if (n >= 0) {
        for (long j = 0; j < n; ++j) acc += Rational(l) * tau_by_recurrence(l - 1, j);
        return acc;
    }
    for (long j = -1; j >= n; --j) acc -= Rational(l) * tau_by_recurrence(l - 1, j);
    return acc;
}
}  // namespace

TEST_CASE("falling factorial evaluation") {
    CHECK(tau_eval(CzpolElement::tau(2), 4) == tau_by_recurrence(2, 4));
    CHECK(tau_by_recurrence(2, 4) == Rational(12));
    for (long l = 1; l <= 4; ++l)
        for (long n = 0; n < l; ++n) CHECK(tau_eval(CzpolElement::tau(l), n) == Rational(0));
    for (long n = -5; n <= 5; ++n) CHECK(tau_eval(CzpolElement::tau(0), n) == Rational(1));
    // recurrence oracle across a window
    for (long l = 0; l <= 4; ++l)
        for (long n = -6; n <= 6; ++n) CHECK(tau_eval(CzpolElement::tau(l), n) == tau_by_recurrence(l, n));
}

TEST_CASE("sequence products") {
    // pointwise oracle n^2 = n(n-1) + n
    CzpolElement sq = czpol_mul(CzpolElement::tau(1), CzpolElement::tau(1));
    CzpolElement expect = CzpolElement::tau(2) + CzpolElement::tau(1);
    CHECK(sq == expect);
    for (long n = -6; n <= 6; ++n) CHECK(tau_eval(sq, n) == Rational(n) * Rational(n));

    // tau(1) . T^{-1} tau(1) = tau(2)
    CHECK(czpol_mul(CzpolElement::tau(1), czpol_shift(CzpolElement::tau(1), -1)) ==
          CzpolElement::tau(2));

    CzpolElement f;
    f.add(3, Rational(5, 2));
    f.add(0, Rational(-1));
    CHECK(czpol_mul(f, CzpolElement::one()) == f);
}

TEST_CASE("module action") {
    CHECK(czpol_delta(CzpolElement::tau(3)) == CzpolElement::tau(2) * Rational(3));
    CHECK(czpol_T(CzpolElement::tau(1)) == CzpolElement::tau(1) + CzpolElement::one());
    CHECK(czpol_dtau(CzpolElement::tau(1)) == CzpolElement::one());
    // T T^{-1} = 1
    Prng rng(3);
    for (int i = 0; i < 10; ++i) {
        CzpolElement f = random_czpol(rng, 5);
        CHECK(czpol_T(czpol_Tinv(f)) == f);
    }
}

TEST_CASE("sequence antipode") {
    CHECK(seq_antipode(CzpolElement::tau(1)) == -CzpolElement::tau(1));
    // pointwise oracle (-n)(-n-1) = n(n+1)
    CzpolElement s2 = seq_antipode(CzpolElement::tau(2));
    CHECK(s2 == CzpolElement::tau(2) + CzpolElement::tau(1) * Rational(2));
    for (long n = -5; n <= 5; ++n)
        CHECK(tau_eval(s2, n) == tau_eval(CzpolElement::tau(2), -n));
    CHECK(seq_antipode(CzpolElement::one()) == CzpolElement::one());
}

TEST_CASE("rising factorials") {
    CHECK(rising_to_falling(1) == CzpolElement::tau(1));
    CHECK(rising_to_falling(0) == CzpolElement::one());
    CzpolElement r2 = rising_to_falling(2);
    CHECK(r2 == CzpolElement::tau(2) + CzpolElement::tau(1) * Rational(2));
    for (long n = -5; n <= 5; ++n) CHECK(tau_eval(r2, n) == Rational(n) * Rational(n + 1));
}

TEST_CASE("pairing with the shift algebra") {
    // evaluation oracle (T^3 tau)(0) = tau(3) = 3
    CHECK(pairing(HtElement::shift(3), CzpolElement::tau(1)) == Rational(3));
    // divided difference: D[2] tau(2) = (Delta^2/2) tau(2) = tau(0), value 1
    CHECK(pairing(delta_basis_element(2), CzpolElement::tau(2)) == Rational(1));
    // <D[n], tau(m)> = delta_{nm} on the nonnegative side: tau(m) projects to
    // the dual difference element of index m, up to negative-index terms
    // invisible to D[n >= 0]
    for (long n = 0; n <= 4; ++n)
        for (long m = 0; m <= 4; ++m)
            CHECK(pairing(delta_basis_element(n), CzpolElement::tau(m)) ==
                  Rational(n == m ? 1 : 0));
    CzpolElement f;
    f.add(2, Rational(7));
    f.add(0, Rational(-4));
    CHECK(pairing(HtElement::one(), f) == tau_eval(f, 0));
}

TEST_CASE("monomial view round trip") {
    Prng rng(17);
    for (int i = 0; i < 20; ++i) {
        CzpolElement f = random_czpol(rng, 5);
        XPoly p = czpol_to_xpoly(f);
        CHECK(czpol_from_xpoly(p) == f);
        for (long n = -4; n <= 4; ++n) CHECK(p.eval(Rational(n)) == tau_eval(f, n));
    }
}

TEST_CASE("tau square factorization across signs") {
    for (long s = 0; s <= 5; ++s)
        for (long l = 0; l <= 5; ++l) {
            CHECK(tau_square(s + l) == czpol_mul(tau_square(s), czpol_shift(tau_square(l), -s)));
            CHECK(tau_square(-s - l) == czpol_mul(tau_square(-s), czpol_shift(tau_square(-l), s)));
        }
}
