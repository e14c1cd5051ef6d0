#include <doctest.h>

#include "g2local/oracle.hpp"

using namespace g2local;

namespace {

GroupCoord gd(long long p, long n, long m, long vd) {
    if (vd >= 1000) return GroupCoord::toral(p, n, m);
    return GroupCoord::with_d(p, n, m, PadicScalar::uniformizer_pow(p, vd));
}

long vp_of(const Rational& x, long long p) {
    Int n = numerator(x), d = denominator(x);
    long v = 0;
    while (n != 0 && n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }
    return v;
}

// independent slow reference for one toral E_k instance: enumerate
// (r1,...,r4) on a rational grid, decide membership with the printed toral
// list, and handle only r5 analytically.
Rational ek_slow_reference(const LocalCubic& E, long n, long m, long k) {
    long long p = E.p;
    long a = k + n - m, b = k - n;
    if (a < 0 || b < 0) return 0;
    int B = 1;
    long A = std::max(a, b);
    long w = 1;
    for (long i = 0; i < A + B; ++i) w *= p;
    Rational cell = int_pow(Int(p), -4 * B);
    CycloValue total(p, 1);
    auto nle = [&](const Rational& x, long t) { return x == 0 || vp_of(x, p) >= -t; };
    for (long j1 = 0; j1 < w; ++j1)
        for (long j2 = 0; j2 < w; ++j2)
            for (long j3 = 0; j3 < w; ++j3)
                for (long j4 = 0; j4 < w; ++j4) {
                    Rational r1 = Rational(j1) / int_pow(Int(p), A);
                    Rational r2 = Rational(j2) / int_pow(Int(p), A);
                    Rational r3 = Rational(j3) / int_pow(Int(p), A);
                    Rational r4 = Rational(j4) / int_pow(Int(p), A);
                    if (!nle(r1, a) || !nle(r2, std::min(a, b)) || !nle(r3, std::min(a, b)) ||
                        !nle(r4, b))
                        continue;
                    if (!nle(r1 * r3 - r2 * r2, a) || !nle(r2 * r4 - r3 * r3, b)) continue;
                    // r5-balls: |r2 r3 + r5| <= q^a, |r1 r4 - 2 r2 r3 - r5| <= q^b
                    Rational ca = -r2 * r3, cc = r1 * r4 - 2 * r2 * r3;
                    if (!nle(cc - ca, std::max(a, b))) continue;
                    long rho5 = std::min(a, b);
                    Rational arg = r4 + Rational(E.D) * r2 - Rational(E.N) * r1;
                    PadicScalar x = PadicScalar::from_rational(p, arg, 10);
                    total += psi(x, 1).scaled(cell * int_pow(Int(p), rho5));
                }
    REQUIRE(total.is_rational());
    return total.rational_value();
}

}  // namespace

TEST_CASE("gauss_brute matches the displayed values") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    CHECK(*gauss_brute(quad, gd(p, 0, 0, 1000)) == -1);
    CHECK(*gauss_brute(cubic, gd(p, 0, 0, 1000)) == -26);   // -q^2-1
    CHECK(*gauss_brute(quad, gd(p, 1, 2, 1000)) == 124);    // q^3-1
    CHECK(*gauss_brute(quad, gd(p, 1, 1, 1000)) == 24);     // q^2-1 (corrected row)
    // off the support region the sum need not reduce to a rational
    CHECK(!gauss_brute(quad, gd(p, 0, 0, -1)).has_value());
}

TEST_CASE("gauss_brute equals gauss_closed (corrected) across the support grid") {
    for (long long p : {5LL, 7LL}) {
        for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
            LocalCubic E = LocalCubic::standard(t, p);
            for (long n = 0; n <= 3; ++n)
                for (long m = 0; m <= 3 * n; ++m)
                    for (long vd : {1000L, -1L}) {
                        GroupCoord g = gd(p, n, m, vd);
                        if (!support_conditions(E, g)) continue;
                        auto brute = gauss_brute(E, g);
                        REQUIRE(brute.has_value());
                        Rational closed = gauss_closed(E, g).eval_q(Rational(p));
                        CHECK(*brute == closed);
                    }
        }
    }
}

TEST_CASE("kappa_count") {
    CHECK(kappa_count(0, 0, 0, 5) == 1);
    CHECK(kappa_count(1, 1, 1, 5) == 9);    // 2q - 1
    CHECK(kappa_count(2, 1, 2, 5) == 45);   // 2q^2 - q
    CHECK_THROWS(kappa_count(1, 1, 3, 5));
    for (long n1 = 0; n1 <= 3; ++n1)
        for (long n2 = 0; n2 <= 3; ++n2)
            for (long n3 = 0; n3 <= std::min(n1 + n2, 3L); ++n3)
                CHECK(kappa_count(n1, n2, n3, 5) ==
                      kappa_closed(n1, n2, n3).eval_q(Rational(5)));
}

TEST_CASE("kappa_abc counting oracle vanishes for non-split E") {
    for (long long p : {5LL, 7LL}) {
        LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
        LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
        CHECK(kappa_abc_count(quad, 1) == 0);
        CHECK(kappa_abc_count(cubic, 1) == 0);
        CHECK(kappa_abc_count_shell(quad, 1, 1) == 0);
        CHECK(kappa_abc_count_shell(cubic, 1, 1) == 0);
        CHECK(kappa_abc_count_shell(cubic, 1, 2) == 0);
    }
    // sanity: for split E the same count is nonzero (P has roots mod p)
    LocalCubic split = LocalCubic::standard(LocalCubicType::split, 5);
    CHECK(kappa_abc_count_shell(split, 1, 1) != 0);
}

TEST_CASE("special integrals") {
    for (long long p : {5LL, 7LL}) {
        LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
        LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
        SpecialIntegrals si_q = special_integrals_brute(quad);
        CHECK(si_q.quad_or_field == Rational(1 - p));
        CHECK(si_q.third == -1);
        SpecialIntegrals si_c = special_integrals_brute(cubic);
        CHECK(si_c.quad_or_field == Rational(1 - p));
        CHECK(si_c.third == -1);
    }
}

TEST_CASE("Ek_brute: displayed per-case values at p = 5") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    // field m = 2n: E_n = 1, E_{n+1} = -q^2, E_{n+2} = 0
    CHECK(Ek_brute(cubic, gd(p, 0, 0, 1000), 0).value == 1);
    CHECK(Ek_brute(cubic, gd(p, 0, 0, 1000), 1).value == -25);
    CHECK(Ek_brute(cubic, gd(p, 0, 0, 1000), 2).value == 0);
    // quad m = 2n: E_n = 1, E_{n+1} = 0
    CHECK(Ek_brute(quad, gd(p, 0, 0, 1000), 0).value == 1);
    CHECK(Ek_brute(quad, gd(p, 0, 0, 1000), 1).value == 0);
    // quad m < 2n at (1,1): q^{2n-m}, -q^{2n-m+2}, 0
    CHECK(Ek_brute(quad, gd(p, 1, 1, 1000), 1).value == 5);
    CHECK(Ek_brute(quad, gd(p, 1, 1, 1000), 2).value == -125);
    CHECK(Ek_brute(quad, gd(p, 1, 1, 1000), 3).value == 0);
    // quad m > 2n at (1,3): all zero (k = 1 is infeasible)
    CHECK(Ek_brute(quad, gd(p, 1, 3, 1000), 1).value == 0);
    CHECK(Ek_brute(quad, gd(p, 1, 3, 1000), 2).value == 0);
    // field m < 2n at (2,3): zero
    CHECK(Ek_brute(cubic, gd(p, 2, 3, 1000), 2).value == 0);
}

TEST_CASE("Ek_brute agrees with an independent slow enumeration") {
    long long p = 5;
    for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(t, p);
        for (auto [n, m, k] : {std::tuple<long, long, long>{0, 0, 0},
                               {0, 0, 1},
                               {1, 2, 1},
                               {1, 2, 2}}) {
            Rational ref = ek_slow_reference(E, n, m, k);
            Rational fast = Ek_brute(E, gd(p, n, m, 1000), k).value;
            CAPTURE(etype_name(t));
            CAPTURE(n);
            CAPTURE(m);
            CAPTURE(k);
            CHECK(ref == fast);
        }
    }
}

TEST_CASE("Ek_brute: non-toral instances vanish") {
    long long p = 5;
    for (auto t : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(t, p);
        // |p| = 1 (l = 0) at (1,1) with |d| = q
        for (long k : {1L, 2L}) CHECK(Ek_brute(E, gd(p, 1, 1, -1), k).value == 0);
        // |p| = q^{-1} (l = -1) at (1,0) with |d| = q
        for (long k : {1L, 2L}) CHECK(Ek_brute(E, gd(p, 1, 0, -1), k).value == 0);
        // on-support non-toral point (2,3) with |d| = q
        CHECK(Ek_brute(E, gd(p, 2, 3, -1), 2).value == 0);
    }
}

TEST_CASE("Ds_truncated prefixes") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    TruncatedSeries q00 = Ds_truncated(quad, gd(p, 0, 0, 1000), 2);
    CHECK(q00.Dk == std::vector<Rational>{1, -1, 0});
    TruncatedSeries c00 = Ds_truncated(cubic, gd(p, 0, 0, 1000), 2);
    CHECK(c00.Dk == std::vector<Rational>{1, -26, 25});
    TruncatedSeries q01 = Ds_truncated(quad, gd(p, 0, 1, 1000), 1);
    CHECK(q01.Dk == std::vector<Rational>{0, 0});
}

TEST_CASE("parallel determinism") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    for (long k : {1L, 2L}) {
        Rational serial = Ek_brute(quad, gd(p, 1, 1, 1000), k, 200'000'000ULL, 1).value;
        Rational parallel = Ek_brute(quad, gd(p, 1, 1, 1000), k, 200'000'000ULL, 4).value;
        CHECK(serial == parallel);
    }
}

TEST_CASE("plan budget") {
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    EkResult r = Ek_brute(quad, gd(p, 2, 2, 1000), 4, 1000ULL);
    CHECK(r.skipped);
    // infeasible k short-circuits without touching the budget
    EkResult r2 = Ek_brute(quad, gd(p, 2, 6, 1000), 1, 1000ULL);
    CHECK(!r2.skipped);
    CHECK(r2.value == 0);
}
