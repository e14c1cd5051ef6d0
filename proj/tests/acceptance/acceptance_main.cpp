// Acceptance suite: one pass/fail line per criterion, exit nonzero on any
// failure.  Every tolerance here is exact equality in the respective exact
// arithmetic; there are no floating-point comparisons anywhere.

#include "g2local/checks.hpp"
#include "g2local/closedforms.hpp"
#include "g2local/oracle.hpp"
#include "g2local/satake.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace g2local;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int crit, const std::string& what, bool pass, const std::string& detail,
            double ms) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << crit << ": " << what;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "  (" << static_cast<long>(ms) << " ms)\n";
    if (!pass) ++g_failures;
}

GroupCoord gd(long long p, long n, long m, long vd) {
    if (vd >= 1000) return GroupCoord::toral(p, n, m);
    return GroupCoord::with_d(p, n, m, PadicScalar::uniformizer_pow(p, vd));
}

FEvaluator fstar_eval() {
    return [](const LocalCubic& e, const GroupCoord& g) { return F_star(e, g); };
}

// ---- criterion 1: main identity --------------------------------------------
void criterion1() {
    Timer t;
    int checked = 0, failed = 0;
    std::string first_fail;
    for (long long p : {5LL, 7LL})
        for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
            LocalCubic E = LocalCubic::standard(ty, p);
            for (auto [n, m] : support_grid(ty, 2))
                for (long vd : {1000L, -1L}) {
                    GroupCoord g = gd(p, n, m, vd);
                    RatFuncX lhs = convolve_Ps(E, g, fstar_eval());
                    RatFuncX rhs = Ds_closed(E, g);
                    ++checked;
                    if (!(lhs == rhs)) {
                        ++failed;
                        if (first_fail.empty()) {
                            std::ostringstream os;
                            os << etype_name(ty) << " p=" << p << " (" << n << "," << m
                               << ") vd=" << (vd >= 1000 ? 0 : vd);
                            first_fail = os.str();
                        }
                    }
                }
        }
    std::ostringstream d;
    d << checked << " grid points, p in {5,7}, both d-branches";
    if (failed) d << "; first failure at " << first_fail;
    report(1, "main identity D_s^{Psi_E} = F* conv P_s (exact rational functions)", failed == 0,
           d.str(), t.ms());
}

// ---- criterion 2: anchor values at g = 1 ------------------------------------
void criterion2() {
    Timer t;
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    RatFuncX z3 = zeta_local_halves(3, 0, 1), z7 = zeta_local_halves(7, 0, 1);
    bool ok1 = convolve_Ps(quad, GroupCoord::toral(p, 0, 0), fstar_eval()) == RatFuncX::one() / z7;
    bool ok2 = convolve_Ps(cubic, GroupCoord::toral(p, 0, 0), fstar_eval()) ==
               RatFuncX::one() / (z3 * z7);
    report(2, "anchors (F* conv P_s)(1) = 1/zeta(s+7/2) and 1/(zeta(s+3/2) zeta(s+7/2))",
           ok1 && ok2, "", t.ms());
}

// ---- criterion 3: brute-force E_k per displayed case -------------------------
void criterion3() {
    Timer t;
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    LocalCubic cubic = LocalCubic::standard(LocalCubicType::cubic, p);
    struct Inst {
        const LocalCubic* E;
        long n, m, vd, k;
        Rational expect;
        const char* tag;
    };
    const Rational q(5);
    std::vector<Inst> insts = {
        // N = 0, m < 2n: q^{2n-m}, -q^{2n-m+2}, 0
        {&quad, 1, 1, 1000, 1, q, "N=0 m<2n"},
        {&quad, 1, 1, 1000, 2, -q * q * q, "N=0 m<2n"},
        {&quad, 1, 1, 1000, 3, 0, "N=0 m<2n"},
        {&quad, 2, 3, 1000, 2, q, "N=0 m<2n"},
        {&quad, 2, 3, 1000, 3, -q * q * q, "N=0 m<2n"},
        {&quad, 2, 3, 1000, 4, 0, "N=0 m<2n"},
        // N = 0, m = 2n: 1, 0, 0
        {&quad, 0, 0, 1000, 0, 1, "N=0 m=2n"},
        {&quad, 0, 0, 1000, 1, 0, "N=0 m=2n"},
        {&quad, 0, 0, 1000, 2, 0, "N=0 m=2n"},
        {&quad, 1, 2, 1000, 1, 1, "N=0 m=2n"},
        {&quad, 1, 2, 1000, 2, 0, "N=0 m=2n"},
        {&quad, 1, 2, 1000, 3, 0, "N=0 m=2n"},
        // N = 0, m > 2n: all zero
        {&quad, 1, 3, 1000, 1, 0, "N=0 m>2n"},
        {&quad, 1, 3, 1000, 2, 0, "N=0 m>2n"},
        {&quad, 1, 3, 1000, 3, 0, "N=0 m>2n"},
        // N unit, m = 2n: 1, -q^2, 0
        {&cubic, 0, 0, 1000, 0, 1, "N unit m=2n"},
        {&cubic, 0, 0, 1000, 1, -q * q, "N unit m=2n"},
        {&cubic, 0, 0, 1000, 2, 0, "N unit m=2n"},
        {&cubic, 1, 2, 1000, 1, 1, "N unit m=2n"},
        {&cubic, 1, 2, 1000, 2, -q * q, "N unit m=2n"},
        {&cubic, 1, 2, 1000, 3, 0, "N unit m=2n"},
        // N unit, m < 2n: all zero
        {&cubic, 2, 3, 1000, 2, 0, "N unit m<2n"},
        {&cubic, 2, 3, 1000, 3, 0, "N unit m<2n"},
        // N unit, m > 2n: all zero
        {&cubic, 1, 3, 1000, 1, 0, "N unit m>2n"},
        {&cubic, 1, 3, 1000, 2, 0, "N unit m>2n"},
        // non-toral with |p| <= 1: all zero
        {&quad, 1, 1, -1, 1, 0, "non-toral l=0"},
        {&quad, 1, 1, -1, 2, 0, "non-toral l=0"},
        {&cubic, 1, 1, -1, 1, 0, "non-toral l=0"},
        {&cubic, 1, 1, -1, 2, 0, "non-toral l=0"},
        {&quad, 1, 0, -1, 1, 0, "non-toral l=-1"},
        {&cubic, 1, 0, -1, 2, 0, "non-toral l=-1"},
        {&quad, 2, 3, -1, 2, 0, "non-toral l=0 on-support"},
        {&cubic, 2, 3, -1, 2, 0, "non-toral l=0 on-support"},
    };
    int checked = 0, failed = 0, skipped = 0;
    std::string first_fail;
    for (const Inst& I : insts) {
        EkResult r = Ek_brute(*I.E, gd(p, I.n, I.m, I.vd), I.k);
        if (r.skipped) {
            ++skipped;
            continue;
        }
        ++checked;
        if (r.value != I.expect) {
            ++failed;
            if (first_fail.empty()) {
                std::ostringstream os;
                os << I.tag << " (" << I.n << "," << I.m << ") k=" << I.k << ": got "
                   << rat_str(r.value) << " want " << rat_str(I.expect);
                first_fail = os.str();
            }
        }
    }
    std::ostringstream d;
    d << checked << " instances checked, " << skipped << " over budget (reported, not run)";
    if (failed) d << "; " << first_fail;
    report(3, "brute-force E_k equals each displayed per-case value (B.1.1, B.1.2, B.2)",
           failed == 0, d.str(), t.ms());
}

// ---- criterion 4: truncated series prefix ------------------------------------
void criterion4() {
    Timer t;
    long long p = 5;
    int checked = 0, failed = 0, skipped = 0;
    for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(ty, p);
        for (auto [n, m] : support_grid(ty, 2)) {
            GroupCoord g = GroupCoord::toral(p, n, m);
            TruncatedSeries ts = Ds_truncated(E, g, 2);
            SeriesX closed = Ds_closed(E, g).expand(2);
            for (long k = 0; k <= 2; ++k) {
                if (ts.skipped[k]) {
                    ++skipped;
                    continue;
                }
                Sym got = closed.coef(k).substitute_c(1) * Sym::q_pow_half(7 * k);
                Rational gv = got.terms().empty()
                                  ? Rational(0)
                                  : got.terms().begin()->second.eval_q(Rational(p));
                ++checked;
                if (gv != ts.Dk[k]) ++failed;
            }
        }
    }
    std::ostringstream d;
    d << checked << " coefficients on the full grid, " << skipped << " skipped";
    report(4, "D_s series prefix (k <= 2) matches series_expand(Ds_closed, 2)", failed == 0,
           d.str(), t.ms());
}

// ---- criterion 5: Gaussian sums ----------------------------------------------
void criterion5() {
    Timer t;
    int checked = 0, failed = 0;
    bool cover_q3 = false, cover_m1 = false, cover_q2 = false, cover_mq2 = false;
    bool q_minus_1_reachable = false;
    int nonrational_offsupport = 0;
    for (long long p : {5LL, 7LL, 11LL}) {
        for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
            LocalCubic E = LocalCubic::standard(ty, p);
            for (long n = 0; n <= 3; ++n)
                for (long m = 0; m <= 3 * n; ++m)
                    for (long vd : {1000L, -1L, -2L}) {
                        GroupCoord g = gd(p, n, m, vd);
                        if (!support_conditions(E, g)) continue;
                        auto brute = gauss_brute(E, g);
                        Rational closed = gauss_closed(E, g).eval_q(Rational(p));
                        ++checked;
                        if (!brute || *brute != closed) ++failed;
                        Rational q(p);
                        if (closed == q * q * q - 1) cover_q3 = true;
                        if (closed == -1) cover_m1 = true;
                        if (closed == q * q - 1) cover_q2 = true;
                        if (closed == -q * q - 1) cover_mq2 = true;
                        if (closed == q - 1) q_minus_1_reachable = true;
                    }
        }
    }
    // the q-1 rows of the d-not-in-O tables lie outside the lemma's support
    // region; demonstrate that the sums there are not even rational
    long long p = 5;
    LocalCubic quad = LocalCubic::standard(LocalCubicType::quad, p);
    for (auto [n, m] : {std::pair<long, long>{1, 1}, {2, 2}}) {
        GroupCoord g = gd(p, n, m, -1);
        if (!support_conditions(quad, g) && !gauss_brute(quad, g).has_value())
            ++nonrational_offsupport;
    }
    bool coverage = cover_q3 && cover_m1 && cover_q2 && cover_mq2;
    std::ostringstream d;
    d << checked << " support instances at p in {5,7,11}; values {q^3-1, -1, q^2-1, -q^2-1} all "
         "realized; the q-1 row is support-empty (verified"
      << (q_minus_1_reachable ? " NOT" : "") << ") and " << nonrational_offsupport
      << " off-support probes gave non-rational sums";
    report(5, "gauss_brute = gauss_closed on the full branch tables",
           failed == 0 && coverage && !q_minus_1_reachable && nonrational_offsupport == 2,
           d.str(), t.ms());
}

// ---- criterion 6: measure lemmas ----------------------------------------------
void criterion6() {
    Timer t;
    long long p = 5;
    int failed = 0, checked = 0;
    for (long n1 = 0; n1 <= 3; ++n1)
        for (long n2 = 0; n2 <= 3; ++n2)
            for (long n3 = 0; n3 <= n1 + n2 && n3 <= 3; ++n3) {
                ++checked;
                if (kappa_count(n1, n2, n3, p) != kappa_closed(n1, n2, n3).eval_q(Rational(p)))
                    ++failed;
            }
    for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(ty, p);
        ++checked;
        if (kappa_abc_count(E, 1) != 0 || kappa_abc_count_shell(E, 1, 1) != 0) ++failed;
    }
    std::ostringstream d;
    d << checked << " instances (kappa grid n_i <= 3 and kappa_abc vanishing)";
    report(6, "kappa_count = kappa_closed and kappa_abc = 0 for non-split E", failed == 0,
           d.str(), t.ms());
}

// ---- criterion 7: special integrals --------------------------------------------
void criterion7() {
    Timer t;
    int failed = 0;
    for (long long p : {5LL, 7LL})
        for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
            LocalCubic E = LocalCubic::standard(ty, p);
            SpecialIntegrals si = special_integrals_brute(E);
            if (si.quad_or_field != Rational(1 - p)) ++failed;
            if (si.third != Rational(-1)) ++failed;
        }
    report(7, "special integrals (1-q, 1-q, -1) by residue summation at p in {5,7}", failed == 0,
           "", t.ms());
}

// ---- criterion 8: Poincare identity --------------------------------------------
void criterion8() {
    Timer t;
    bool ok = true;
    const std::pair<long, long> tori[] = {{1, 1}, {2, 1}, {3, 2}, {5, 3}, {2, 3}, {7, 2}};
    for (auto [a, b] : tori)
        ok = ok && check_generating_identity({Rational(a), Rational(b)}, 8);
    ok = ok && check_generating_identity({Rational(1, 2), Rational(3)}, 8);
    bool formal = check_generating_identity_formal(5);
    report(8, "Poincare identity: rational-torus grid to order 8, formal torus to order 5",
           ok && formal, "", t.ms());
}

// ---- criterion 9: normalization reconciliation ----------------------------------
void criterion9() {
    Timer t;
    long long p = 5;
    int checked = 0, failed = 0;
    for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(ty, p);
        for (long n = 0; n <= 2; ++n)
            for (long m = 0; m <= 3 * n + 1; ++m)
                for (long vd : {1000L, -1L, -2L}) {
                    GroupCoord g = gd(p, n, m, vd);
                    RatFuncX a = F_unnorm(E, g);
                    RatFuncX b = F_shellpath(E, g);
                    RatFuncX c = F_star(E, g);
                    ++checked;
                    if (!(a == b) || !(a.substitute_c(1) == c)) ++failed;
                }
    }
    std::ostringstream d;
    d << checked
      << " points; all verbatim rows pass under the pinned substitution 5s -> s+5/2 "
         "(no corrected variant needed for F)";
    report(9, "F_shellpath = F_unnorm = F_star after normalization reconciliation",
           failed == 0, d.str(), t.ms());
}

// ---- criterion 10: structural invariants ----------------------------------------
void criterion10() {
    Timer t;
    long long p = 5;
    std::mt19937 rng(2026);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<int> denpow(0, 2);
    std::uniform_int_distribution<long> small(-2, 2);
    auto pickq = [&]() {
        Rational r(num(rng));
        for (int i = 0; i < denpow(rng); ++i) r /= p;
        return QScalar::from_rational(p, r);
    };
    int cases = 0, failed = 0;
    // iota lands in SO7 w.r.t. the antidiagonal form
    for (int trial = 0; trial < 1000; ++trial) {
        UCoordQ u{pickq(), pickq(), pickq(), pickq(), pickq()};
        Mat7Q h = iota_unipotent(p, u) * iota_torus<QScalar>(p, small(rng), small(rng)) *
                  iota_xalpha(p, pickq());
        ++cases;
        if (!preserves_split_form(h) || det7(h) != 1) ++failed;
    }
    // in_Uk: matrix vs inequalities on exhaustive small grids
    std::vector<Rational> lattice;
    for (long a : {-5, -1, 0, 1, 3}) lattice.push_back(Rational(a, 5));
    std::uniform_int_distribution<size_t> pick(0, lattice.size() - 1);
    int agree_cases = 0;
    for (long n = 0; n <= 2; ++n)
        for (long m = n; m <= std::min(3 * n, n + 2); ++m)
            for (long k = n; k <= n + 2; ++k)
                for (int trial = 0; trial < 25; ++trial) {
                    UCoord u;
                    u.r1 = PadicScalar::from_rational(p, lattice[pick(rng)]);
                    u.r2 = PadicScalar::from_rational(p, lattice[pick(rng)]);
                    u.r3 = PadicScalar::from_rational(p, lattice[pick(rng)]);
                    u.r4 = PadicScalar::from_rational(p, lattice[pick(rng)]);
                    u.r5 = PadicScalar::from_rational(p, lattice[pick(rng)]);
                    Rational dv(small(rng));
                    if (trial % 3 == 0) dv /= p;
                    GroupCoord g =
                        GroupCoord::with_d(p, n, m, PadicScalar::from_rational(p, dv));
                    ++cases;
                    ++agree_cases;
                    if (in_Uk(u, g, k, UkMethod::matrix) !=
                        in_Uk(u, g, k, UkMethod::inequalities))
                        ++failed;
                }
    // Psi_E multiplicativity via matrix products
    for (auto ty : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(ty, p);
        for (int trial = 0; trial < 500; ++trial) {
            UCoordQ u{pickq(), pickq(), pickq(), pickq(), pickq()};
            UCoordQ v{pickq(), pickq(), pickq(), pickq(), pickq()};
            UCoordQ w = extract_u_coords(iota_unipotent(p, u) * iota_unipotent(p, v));
            ++cases;
            if (!(psi_E(E, w, 3) == psi_E(E, u, 3) * psi_E(E, v, 3))) ++failed;
        }
    }
    std::ostringstream d;
    d << cases << " random/property cases (" << agree_cases << " U_k method agreements)";
    report(10, "structural invariants: SO7 form, U_k method agreement, Psi_E multiplicativity",
           failed == 0, d.str(), t.ms());
}

}  // namespace

int main() {
    std::cout << "acceptance suite: local unramified identities (exact arithmetic)\n";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED\n"
                                  : std::to_string(g_failures) + " CRITERIA FAILED\n");
    return g_failures == 0 ? 0 : 1;
}
