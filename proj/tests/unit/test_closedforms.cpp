#include <doctest.h>

#include "g2local/closedforms.hpp"

using namespace g2local;

namespace {

RatFuncX zeta(long shift_halves) { return zeta_local_halves(shift_halves, 0, 1); }

GroupCoord gd(long long p, long n, long m, long vd) {
    if (vd >= 1000) return GroupCoord::toral(p, n, m);
    return GroupCoord::with_d(p, n, m, PadicScalar::uniformizer_pow(p, vd));
}

}  // namespace

TEST_CASE("F at the identity point") {
    long long p = 5;
    for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(t, p);
        GroupCoord g = GroupCoord::toral(p, 0, 0);
        // 1/zeta(s+5/2) at c = 1; with formal c the value is 1 - c q^{-5/2} X
        RatFuncX f = F_unnorm(E, g);
        CHECK(f == RatFuncX::one() - RatFuncX::monomial(1, -5, 1));
        CHECK(f.substitute_c(1) == RatFuncX::one() / zeta(5));
        CHECK(F_star(E, g) == RatFuncX::one() / zeta(5));
        CHECK(F_shellpath(E, g) == f);
    }
}

TEST_CASE("F vanishing branches") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    // |alpha| > 1 off support
    CHECK(F_unnorm(quad, gd(p, 0, 1, 1000)).is_zero());
    CHECK(F_star(quad, gd(p, 0, 1, 1000)).is_zero());
    // quad, |d| = q at n = m = 0: the zero row of the d-table
    CHECK(F_star(quad, gd(p, 0, 0, -1)).is_zero());
    CHECK(F_unnorm(quad, gd(p, 0, 0, -1)).is_zero());
    // field, m < 3n/2 off support
    CHECK(F_star(cubic, gd(p, 1, 1, 1000)).is_zero());
    CHECK_THROWS(F_unnorm(LocalCubic::standard(LocalCubicType::split, p),
                          GroupCoord::toral(p, 0, 0)));
}

TEST_CASE("F: shell-path, compact form, and piecewise tables agree on the support grid") {
    long long p = 5;
    for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(t, p);
        for (long n = 0; n <= 2; ++n)
            for (long m = 0; m <= 3 * n + 1; ++m)
                for (long vd : {1000L, -1L, -2L}) {
                    GroupCoord g = gd(p, n, m, vd);
                    RatFuncX a = F_unnorm(E, g);
                    RatFuncX b = F_shellpath(E, g);
                    RatFuncX c = F_star(E, g);
                    CHECK(a == b);
                    CHECK(a.substitute_c(1) == c);
                }
    }
}

TEST_CASE("F is right-O-invariant in d") {
    long long p = 5;
    LocalCubic E = LocalCubic::standard(LocalCubicType::quad, p);
    // d and d + d0 with d0 in O give the same values (norm-level guards)
    PadicScalar d1 = PadicScalar::uniformizer_pow(p, -1);
    PadicScalar d2 = d1 + PadicScalar::from_integer(p, 3);
    for (long n = 0; n <= 2; ++n)
        for (long m = n; m <= 3 * n; ++m) {
            GroupCoord g1 = GroupCoord::with_d(p, n, m, d1);
            GroupCoord g2 = GroupCoord::with_d(p, n, m, d2);
            CHECK(F_star(E, g1) == F_star(E, g2));
            CHECK(Ds_closed(E, g1) == Ds_closed(E, g2));
            if (support_conditions(E, g1))
                CHECK(gauss_closed(E, g1) == gauss_closed(E, g2));
            // a unit d is the same as d = 0
            GroupCoord gu = GroupCoord::with_d(p, n, m, PadicScalar::from_integer(p, 2));
            CHECK(F_star(E, gu) == F_star(E, GroupCoord::toral(p, n, m)));
        }
}

TEST_CASE("F_unnorm example at quad (1,2,d=0)") {
    long long p = 5;
    LocalCubic E = LocalCubic::standard(LocalCubicType::quad, p);
    // alpha = t1^3/t2 = pi, value chi_s(t2/pi) (zeta(s+3/2)/zeta(s+5/2)) (q^{-1} - chi_s(pi^2) q)
    RatFuncX f = F_unnorm(E, gd(p, 1, 2, 1000));
    RatFuncX chi1 = chi_s_pow(1), chi2 = chi_s_pow(2);
    RatFuncX expect = chi1 * lratio_32_52() *
                      (RatFuncX(Sym::q_pow(-1)) - chi2 * RatFuncX(Sym::q_pow(1)));
    CHECK(f == expect);
}

TEST_CASE("gauss_closed tables") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    HalfQ one = HalfQ(Rational(1));
    // quad (0,0): -1     (|t2/t1^2| <= 1 & |t1^3/t2| = 1)
    CHECK(gauss_closed(quad, gd(p, 0, 0, 1000)) == -one);
    // field (0,0): -q^2-1
    CHECK(gauss_closed(cubic, gd(p, 0, 0, 1000)) == HalfQ(Rational(0)) - HalfQ::q_pow(2) - one);
    // quad (1,2): q^3-1
    CHECK(gauss_closed(quad, gd(p, 1, 2, 1000)) == HalfQ::q_pow(3) - one);
    // quad (1,3): -1; field (1,3): -1; field (2,3): -1 (via |t2^2/t1^3| = 1)
    CHECK(gauss_closed(quad, gd(p, 1, 3, 1000)) == -one);
    CHECK(gauss_closed(cubic, gd(p, 1, 3, 1000)) == -one);
    CHECK(gauss_closed(cubic, gd(p, 2, 3, 1000)) == -one);
    // corrected vs verbatim differ exactly at quad m = n > 0
    CHECK(gauss_closed(quad, gd(p, 1, 1, 1000), GsTable::corrected) == HalfQ::q_pow(2) - one);
    CHECK(gauss_closed(quad, gd(p, 1, 1, 1000), GsTable::verbatim) == HalfQ::q_pow(3) - one);
    CHECK(gauss_closed(quad, gd(p, 1, 2, 1000), GsTable::verbatim) ==
          gauss_closed(quad, gd(p, 1, 2, 1000), GsTable::corrected));
    // d not in O on support: (2,3,-1) hits the -1 row
    CHECK(gauss_closed(quad, gd(p, 2, 3, -1)) == -one);
    // outside the lemma's support region: error, never a guess
    CHECK_THROWS(gauss_closed(quad, gd(p, 0, 1, 1000)));
}

TEST_CASE("Ps_data") {
    auto [P0, P1] = Ps_polynomials_in_z(Rational(5));
    // P1(z) = z^2/q
    CHECK(P1 == std::vector<Rational>{0, 0, Rational(1, 5)});
    // P0 constant term 1, display coefficients at q = 5
    CHECK(P0[0] == 1);
    CHECK(P0[1] == Rational(1, 5) + 1);
    CHECK(P0[2] == Rational(1, 5));
    CHECK(P0[3] == Rational(1, 25) + Rational(1, 5));
    CHECK(P0[4] == Rational(1, 25));
    // the assembled P0(q^{-s-1/2}) evaluated at the X-variable matches
    PsData d = Ps_data();
    CHECK(d.P0_at_z.degree() == 4);
    CHECK(d.P0_at_z.coef(0) == Sym::one());
    CHECK(d.P1_at_z.coef(2) == Sym::q_pow(-2));  // z^2/q = q^{-1} (q^{-1/2} X)^2
}

TEST_CASE("convolution anchors at g = 1") {
    long long p = 5;
    FEvaluator F = [](const LocalCubic& e, const GroupCoord& g) { return F_star(e, g); };
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    RatFuncX lhs = convolve_Ps(quad, GroupCoord::toral(p, 0, 0), F);
    CHECK(lhs == RatFuncX::one() / zeta(7));
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    RatFuncX lhs2 = convolve_Ps(cubic, GroupCoord::toral(p, 0, 0), F);
    CHECK(lhs2 == RatFuncX::one() / (zeta(3) * zeta(7)));
}

TEST_CASE("main identity on the full desk grid") {
    for (long long p : {5LL, 7LL}) {
        for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
            LocalCubic E = LocalCubic::standard(t, p);
            FEvaluator F = [](const LocalCubic& e, const GroupCoord& g) { return F_star(e, g); };
            for (long n = 0; n <= 2; ++n)
                for (long m = 0; m <= 3 * n + 1; ++m)
                    for (long vd : {1000L, -1L}) {
                        GroupCoord g = gd(p, n, m, vd);
                        CHECK(convolve_Ps(E, g, F) == Ds_closed(E, g));
                    }
        }
    }
}

TEST_CASE("Ds_closed tables") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    // quad (0,0): 1/zeta(s+7/2) = 1 - q^{-7/2} X
    CHECK(Ds_closed(quad, gd(p, 0, 0, 1000)) ==
          RatFuncX::one() - RatFuncX::monomial(0, -7, 1));
    // field (0,0): 1/(zeta(s+3/2) zeta(s+7/2))
    CHECK(Ds_closed(cubic, gd(p, 0, 0, 1000)) == RatFuncX::one() / (zeta(3) * zeta(7)));
    // quad (1,1): q^{2n-m} q^{-(s+7/2)n} / (zeta(s+3/2) zeta(s+7/2))
    RatFuncX expect = RatFuncX(Sym::q_pow(1)) * RatFuncX::monomial(0, -7, 1) /
                      (zeta(3) * zeta(7));
    CHECK(Ds_closed(quad, gd(p, 1, 1, 1000)) == expect);
    // quad m > 2n: zero; field m != 2n: zero; non-toral: zero
    CHECK(Ds_closed(quad, gd(p, 1, 3, 1000)).is_zero());
    CHECK(Ds_closed(cubic, gd(p, 1, 3, 1000)).is_zero());
    CHECK(Ds_closed(cubic, gd(p, 2, 3, 1000)).is_zero());
    CHECK(Ds_closed(quad, gd(p, 1, 2, -1)).is_zero());
    // zero-branch consistency: off support both sides vanish
    FEvaluator F = [](const LocalCubic& e, const GroupCoord& g) { return F_star(e, g); };
    for (long n = 0; n <= 2; ++n)
        for (long m = 0; m <= 7; ++m) {
            GroupCoord g = GroupCoord::toral(p, n, m);
            if (support_conditions(quad, g)) continue;
            CHECK(Ds_closed(quad, g).is_zero());
            CHECK(convolve_Ps(quad, g, F).is_zero());
        }
}

TEST_CASE("kappa closed forms") {
    CHECK(kappa_closed(0, 0, 0) == HalfQ(Rational(1)));
    // (1,1,1) -> 2q - 1
    CHECK(kappa_closed(1, 1, 1) == HalfQ::q_pow(1, 2) - HalfQ(Rational(1)));
    // (2,1,2) -> 2q^2 - q
    CHECK(kappa_closed(2, 1, 2) == HalfQ::q_pow(2, 2) - HalfQ::q_pow(1));
    CHECK_THROWS(kappa_closed(1, 1, 3));
    CHECK_THROWS(kappa_closed(-1, 0, 0));
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    CHECK(kappa_abc_closed(quad, {false, 1, 0}).is_zero());
    CHECK(kappa_abc_closed(cubic, {true, 1, 1}).is_zero());
    CHECK(kappa_abc_closed(quad, {true, 1, 1}).is_zero());
    CHECK_THROWS(kappa_abc_closed(quad, {false, 2, 0}));
    CHECK_THROWS(kappa_abc_closed(LocalCubic::standard(LocalCubicType::split, p), {false, 1, 0}));
}
