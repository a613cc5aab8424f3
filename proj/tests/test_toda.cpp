#include "htalg/checks.hpp"
#include "htalg/toda.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace htalg;

namespace {
const GenId A = kGenA, B = kGenB, C = kGenC;
}

TEST_CASE("fundamental bracket table") {
    TwoVarBracket t = bracket_table();
    VHtOperator bc = t.entry_operator(B, C);
    // C (T^{-1} - 1)
    CHECK(bc.coeff(-1) == DiffPoly::generator(C));
    CHECK(bc.coeff(0) == -DiffPoly::generator(C));
    VHtOperator cb = t.entry_operator(C, B);
    // (1 - T) C = C - (TC) T
    CHECK(cb.coeff(0) == DiffPoly::generator(C));
    CHECK(cb.coeff(1) == -DiffPoly::generator(C, 1));
    CHECK(t.entry_operator(A, B).is_zero());
    CHECK(t.entry_operator(B, B).is_zero());
    CHECK(t.entry_operator(C, C).is_zero());
}

TEST_CASE("lax tensor commutator reproduces the brackets") {
    for (AMode mode : {AMode::Symbolic, AMode::One, AMode::Zero}) {
        CHECK(r_commutator_check(mode, 3).pass());
    }
    // explicit coefficients: the (0,-1) slot carries C(T_2^{-1} - 1)<delta>
    LaxTensorNF nf = lax_r_commutator(AMode::Symbolic, 2);
    DiffMonomial c_mono{{{{C, 0}, 1}}};
    CHECK(nf.at({c_mono, -1, 0, -1}) == Rational(1));
    CHECK(nf.at({c_mono, 0, 0, -1}) == Rational(-1));
    // the (-1,0) slot carries (1 - T_2)<C delta>
    DiffMonomial tc_mono{{{{C, 1}, 1}}};
    CHECK(nf.at({c_mono, 0, -1, 0}) == Rational(1));
    CHECK(nf.at({tc_mono, 1, -1, 0}) == Rational(-1));
    // nothing else within the window, in particular the whole diagonal series
    for (const auto& [key, coeff] : nf) {
        auto [m, cc, a, b] = key;
        bool expected = (a == 0 && b == -1) || (a == -1 && b == 0);
        CHECK(expected);
    }
}

TEST_CASE("variational operator of a density") {
    // delta_L of the quadratic Hamiltonian is L/2
    DiffPoly h2 = sp(vht_mul(lax_operator(AMode::Symbolic), lax_operator(AMode::Symbolic))) *
                  Rational(1, 4);
    VHtOperator dl = delta_L(h2);
    VHtOperator half = lax_operator(AMode::Symbolic) * Rational(1, 2);
    CHECK(dl == half);

    // f = B: a single unit slot at exponent 0
    CHECK(delta_L(DiffPoly::generator(B)) == VHtOperator::term(DiffPoly::one(), 0));

    // f = B . TB
    VHtOperator d3 = delta_L(DiffPoly::generator(B) * DiffPoly::generator(B, 1));
    CHECK(d3.coeff(0) == DiffPoly::generator(B, 1) + DiffPoly::generator(B, -1));
    CHECK(d3.coeff(1).is_zero());
}

TEST_CASE("hamiltonians") {
    CHECK(hamiltonian(1, AMode::Symbolic).representative() ==
          DiffPoly::generator(B) * Rational(1, 2));
    // with the unit superdiagonal: (B^2 + 2C)/4 after TC reduces to C
    DiffPoly expect = DiffPoly::generator(B) * DiffPoly::generator(B) * Rational(1, 4) +
                      DiffPoly::generator(C) * Rational(1, 2);
    CHECK(hamiltonian(2, AMode::One) == coinvariant_reduce(expect));
    CHECK(hamiltonian(2, AMode::Zero) ==
          coinvariant_reduce(DiffPoly::generator(B) * DiffPoly::generator(B) * Rational(1, 4)));
    CHECK_THROWS_AS(hamiltonian(0), std::invalid_argument);
}

TEST_CASE("hamiltonian flows") {
    // n = 2, unit superdiagonal: the infinite lattice equations
    HamFlow f2 = ham_flow(2, AMode::One);
    CHECK(f2.consistent);
    CHECK(f2.lax_form.at(B) == DiffPoly::generator(C) - DiffPoly::generator(C, 1));
    CHECK(f2.lax_form.at(C) ==
          DiffPoly::generator(C) * (DiffPoly::generator(B, -1) - DiffPoly::generator(B)));

    // general superdiagonal
    HamFlow fs = ham_flow(2, AMode::Symbolic);
    CHECK(fs.consistent);
    CHECK(fs.lax_form.count(A) == 0);  // dA = 0
    CHECK(fs.lax_form.at(B) == DiffPoly::generator(C) * DiffPoly::generator(A, -1) -
                                   DiffPoly::generator(A) * DiffPoly::generator(C, 1));
    CHECK(fs.lax_form.at(C) ==
          DiffPoly::generator(C) * (DiffPoly::generator(B, -1) - DiffPoly::generator(B)));

    // n = 1 degenerates to the zero flow, in both formulas
    HamFlow f1 = ham_flow(1, AMode::Symbolic);
    CHECK(f1.consistent);
    CHECK(f1.lax_form.empty());

    for (long n = 1; n <= 4; ++n)
        for (AMode mode : {AMode::Symbolic, AMode::One, AMode::Zero})
            CHECK(ham_flow(n, mode).consistent);
}

TEST_CASE("jacobi identity in the triple normal form") {
    CHECK(jacobi_check(3, AMode::Symbolic).pass());
    // specific triples
    TwoVarBracket t = bracket_table();
    for (auto [a, b, c] : {std::tuple<GenId, GenId, GenId>{B, B, C},
                           std::tuple<GenId, GenId, GenId>{A, B, C},
                           std::tuple<GenId, GenId, GenId>{B, C, C}}) {
        DiffPoly f = DiffPoly::generator(a), g = DiffPoly::generator(b), k = DiffPoly::generator(c);
        TripleNF lhs = double_bracket_1_23(t, f, g, k);
        for (const auto& [key, co] : double_bracket_12_3(t, f, g, k))
            triplenf_add(lhs, std::get<0>(key), std::get<1>(key), std::get<2>(key), -co);
        for (const auto& [key, co] : double_bracket_2_13(t, f, g, k))
            triplenf_add(lhs, std::get<0>(key), std::get<1>(key), std::get<2>(key), -co);
        CHECK(lhs.empty());
    }
}

TEST_CASE("numeric right-hand side conventions") {
    // decoupled when the off-diagonal variables vanish
    TodaStateNumeric s;
    s.n = 4;
    s.topology = Topology::Open;
    s.b = {0.3, -0.1, 0.7, 0.2};
    s.c = {0.0, 0.0, 0.0, 0.0};
    std::vector<double> db, dc;
    numeric_rhs(s, db, dc);
    for (double x : db) CHECK(x == 0.0);
    for (double x : dc) CHECK(x == 0.0);

    // two sites, open ends: dB_1 = -C_2, dB_2 = C_2, dC_2 = C_2 (B_1 - B_2)
    TodaStateNumeric s2;
    s2.n = 2;
    s2.topology = Topology::Open;
    s2.b = {0.0, 0.0};
    s2.c = {0.0, 1.0};
    numeric_rhs(s2, db, dc);
    CHECK(db[0] == -1.0);
    CHECK(db[1] == 1.0);
    CHECK(dc[1] == 0.0);

    // periodic: the diagonal velocities telescope to zero
    TodaStateNumeric sp = TodaStateNumeric::random(6, Topology::Periodic, 99);
    numeric_rhs(sp, db, dc);
    double sum = 0;
    for (double x : db) sum += x;
    CHECK(std::fabs(sum) < 1e-15);
}

TEST_CASE("lax matrix traces") {
    TodaStateNumeric s;
    s.n = 3;
    s.topology = Topology::Open;
    s.b = {1.0, -2.0, 0.5};
    s.c = {0.0, 0.0, 0.0};
    auto tr = conserved_traces(s, 2);
    CHECK(tr[0] == Catch::Approx(-0.5));
    CHECK(tr[1] == Catch::Approx(1.0 + 4.0 + 0.25));

    // 2x2 oracle: tr(L^2) = 2p^2 + 2c
    TodaStateNumeric s2;
    s2.n = 2;
    s2.topology = Topology::Open;
    double p = 0.37, c = 0.81;
    s2.b = {p, -p};
    s2.c = {0.0, c};
    auto tr2 = conserved_traces(s2, 2);
    CHECK(tr2[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(tr2[1] == Catch::Approx(2 * p * p + 2 * c));
}

TEST_CASE("integration conserves the traces") {
    TodaStateNumeric s = TodaStateNumeric::random(6, Topology::Periodic, 4242);
    auto t0 = conserved_traces(s, 4);
    TodaStateNumeric cur = s;
    for (int i = 0; i < 2000; ++i) rk4_step(cur, 1e-3);
    auto t1 = conserved_traces(cur, 4);
    for (int k = 0; k < 4; ++k)
        CHECK(std::fabs(t1[k] - t0[k]) / std::max(1.0, std::fabs(t0[k])) < 1e-9);
    // and the state actually moved
    CHECK(std::fabs(cur.b[0] - s.b[0]) > 1e-4);
}

TEST_CASE("divergence reporting") {
    TodaStateNumeric s;
    s.n = 2;
    s.topology = Topology::Periodic;
    s.b = {1e300, -1e300};
    s.c = {1e300, 1e300};
    CHECK_THROWS_AS(simulate(s, 10.0, 50), DivergenceError);
}

TEST_CASE("csv output is byte stable") {
    SimConfig cfg;
    cfg.n = 4;
    cfg.steps = 10;
    cfg.kmax = 2;
    cfg.seed = 7;
    std::string a = simulate_csv(cfg);
    std::string b = simulate_csv(cfg);
    CHECK(a == b);
    CHECK(a.find("t,B0,B1,B2,B3,C0,C1,C2,C3,trL1,trL2\n") == 0);
    CHECK(a.find("# max_rel_drift") != std::string::npos);
}
