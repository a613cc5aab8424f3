#include "htalg/checks.hpp"
#include "htalg/serialization.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace htalg;

TEST_CASE("json round trips") {
    Prng rng(71);
    for (int i = 0; i < 15; ++i) {
        HtElement a = random_ht(rng, 4);
        CHECK(ht_from_json(to_json(a)) == a);

        HatHtElement h = random_hat_ht(rng);
        CHECK(hat_ht_from_json(to_json(h)) == h);

        CzpolElement f = random_czpol(rng, 5);
        CHECK(czpol_from_json(to_json(f)) == f);

        KElement k = random_k(rng, 3, 3, 2, 3);
        CHECK(k_from_json(to_json(k)) == k);

        DiffPoly p = random_diff_poly(rng, {0, 1, 2}, 2, 2, 3);
        CHECK(diff_poly_from_json(to_json(p)) == p);

        VHtOperator op;
        for (long n = -2; n <= 2; ++n) op.add(n, random_diff_poly(rng, {0, 1}, 1, 2, 1));
        CHECK(vht_from_json(to_json(op)) == op);
    }
}

TEST_CASE("printers") {
    CzpolElement f = CzpolElement::tau(2) * Rational(3) - CzpolElement::one();
    CHECK(f.str() == "3*tau(2) + -1");
    VHtOperator l;
    l.add(1, DiffPoly::generator(0));
    l.add(0, DiffPoly::generator(1));
    l.add(-1, DiffPoly::generator(2));
    CHECK(l.str({"A", "B", "C"}) == "A*T + B + C*T^{-1}");
}

TEST_CASE("polynomial action on the singular quotient") {
    // fg/h minus its holomorphic part; restricted multiplier type
    Prng rng(73);
    for (int i = 0; i < 10; ++i) {
        CzpolElement f = random_czpol(rng, 3);
        KElement F = random_k(rng);
        KElement lhs = czpol_act_sing(f, F);
        CHECK(lhs.pol().is_zero());
        CHECK(lhs == sing_part(k_mul(KElement(f), sing_part(F))));
    }
    // tau(m + l) . (1/tau(l)) is a polynomial, so the action kills it
    for (long l = 1; l <= 3; ++l)
        for (long m = 0; m <= 3; ++m) {
            CHECK(czpol_act_sing(CzpolElement::tau(m + l), tau_full(-l)).is_zero());
            // tau(m) . (1/tau(l+m)) = T^{-m}(1/tau(l)): cancel the leading
            // falling factorial, shifting the remaining poles by m
            if (m >= 1)
                CHECK(czpol_act_sing(CzpolElement::tau(m), tau_full(-l - m)) ==
                      k_shift(tau_full(-l), -m));
        }
}
