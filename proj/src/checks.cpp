#include "g2local/checks.hpp"

#include "g2local/closedforms.hpp"
#include "g2local/oracle.hpp"
#include "g2local/satake.hpp"

#include <chrono>
#include <sstream>

namespace g2local {

namespace {

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

std::string inst_str(const LocalCubic& E, long n, long m, long vd) {
    std::ostringstream os;
    os << etype_name(E.etype) << " p=" << E.p << " n=" << n << " m=" << m;
    if (vd == 0) os << " d=0";
    else os << " |d|=q^" << -vd;
    return os.str();
}

LocalCubic config_cubic(const RunConfig& cfg) {
    if (cfg.D_override || cfg.N_override)
        return LocalCubic::make(cfg.D_override.value_or(0), cfg.N_override.value_or(0),
                                cfg.prime);
    return LocalCubic::standard(cfg.etype, cfg.prime);
}

}  // namespace

std::vector<std::pair<long, long>> support_grid(LocalCubicType t, long n_max, long m_max) {
    std::vector<std::pair<long, long>> out;
    for (long n = 0; n <= n_max; ++n)
        for (long m = 0; m <= (m_max >= 0 ? std::min(3 * n, m_max) : 3 * n); ++m) {
            if (m < n) continue;
            if (t == LocalCubicType::cubic && 2 * m < 3 * n) continue;
            out.emplace_back(n, m);
        }
    return out;
}

Report cmd_check_identity(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    if (cfg.etype == LocalCubicType::split) return rep;  // split tables live in prior work
    LocalCubic E = config_cubic(cfg);
    long long p = E.p;
    FEvaluator F = [](const LocalCubic& e, const GroupCoord& g) { return F_star(e, g); };
    for (auto [n, m] : support_grid(E.etype, cfg.n_max, cfg.m_max)) {
        for (long vd : {0L, -1L}) {
            double t0 = now_ms();
            GroupCoord g = vd == 0 ? GroupCoord::toral(p, n, m)
                                   : GroupCoord::with_d(p, n, m,
                                                        PadicScalar::uniformizer_pow(p, vd));
            RatFuncX lhs = convolve_Ps(E, g, F);
            RatFuncX rhs = Ds_closed(E, g);
            CheckRecord rec;
            rec.id = "main-identity";
            rec.instance = inst_str(E, n, m, vd);
            rec.lhs = lhs.str();
            rec.rhs = rhs.str();
            rec.equal = lhs == rhs;
            // the convolution consumes the oracle-adjudicated Gaussian-sum
            // table; instances where it differs from the printed rows carry
            // corrected-variant provenance
            if (support_conditions(E, g) &&
                !(gauss_closed(E, g, GsTable::verbatim) ==
                  gauss_closed(E, g, GsTable::corrected)))
                rec.provenance = Provenance::corrected_variant;
            rec.ms = now_ms() - t0;
            rep.checks.push_back(rec);
        }
        // truncated-series cross-check at d = 0 when the budget admits it
        if (cfg.k_max >= 0) {
            double t0 = now_ms();
            GroupCoord g = GroupCoord::toral(p, n, m);
            TruncatedSeries ts = Ds_truncated(E, g, cfg.k_max, cfg.budget, cfg.jobs);
            SeriesX closed = Ds_closed(E, g).expand(cfg.k_max);
            bool all_eq = true;
            std::ostringstream ls, rs;
            for (long k = 0; k <= cfg.k_max; ++k) {
                if (ts.skipped[k]) continue;
                // coefficient of X^k equals D_k q^{-7k/2}; clear the half-power
                // and evaluate the (integral) q-polynomial at q = p
                Sym got = closed.coef(k).substitute_c(1) * Sym::q_pow_half(7 * k);
                Rational want = ts.Dk[k];
                Rational gv = got.terms().empty() ? Rational(0)
                                                  : got.terms().begin()->second.eval_q(Rational(p));
                if (gv != want) all_eq = false;
                ls << (k ? "," : "") << rat_str(want);
                rs << (k ? "," : "") << rat_str(gv);
            }
            CheckRecord rec;
            rec.id = "series-prefix";
            {
                std::ostringstream os;
                os << inst_str(E, n, m, 0) << " [";
                for (long k = 0; k <= cfg.k_max; ++k)
                    os << (k ? " " : "") << "k" << k << ":B=" << ts.B[k]
                       << ",cells=" << ts.cells[k] << (ts.skipped[k] ? "(skipped)" : "");
                os << "]";
                rec.instance = os.str();
            }
            rec.lhs = ls.str();
            rec.rhs = rs.str();
            rec.equal = all_eq;
            rec.ms = now_ms() - t0;
            rep.checks.push_back(rec);
        }
    }
    return rep;
}

Report cmd_check_lemmas(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    long long p = cfg.prime;
    // kappa: counting vs closed form
    for (long n1 = 0; n1 <= 3; ++n1)
        for (long n2 = 0; n2 <= 3; ++n2)
            for (long n3 = 0; n3 <= std::min(n1 + n2, 3L); ++n3) {
                double t0 = now_ms();
                Rational count = kappa_count(n1, n2, n3, p);
                Rational closed = kappa_closed(n1, n2, n3).eval_q(Rational(p));
                CheckRecord rec;
                rec.id = "kappa";
                std::ostringstream os;
                os << "p=" << p << " (" << n1 << "," << n2 << "," << n3 << ")";
                rec.instance = os.str();
                rec.lhs = rat_str(count);
                rec.rhs = rat_str(closed);
                rec.equal = count == closed;
                rec.ms = now_ms() - t0;
                rep.checks.push_back(rec);
            }
    // shells: haar sum vs closed form
    for (long j = -2; j <= 2; ++j) {
        double t0 = now_ms();
        HaarPlan plan;
        plan.p = p;
        plan.nvars = 1;
        plan.A = std::max(j, 1L);
        plan.B = static_cast<int>(std::max(2L, 2 - j));
        CycloValue got = haar_cell_sum(
            plan,
            [&](const std::vector<Rational>& pt) {
                return psi(PadicScalar::from_rational(p, pt[0], 12), static_cast<int>(plan.A));
            },
            [&](const std::vector<Rational>& pt) {
                long v = pt[0] == 0 ? (1L << 30) : 0;
                if (pt[0] != 0) {
                    Rational x = pt[0];
                    Int num = numerator(x), den = denominator(x);
                    while (num % p == 0) { num /= p; ++v; }
                    while (den % p == 0) { den /= p; --v; }
                }
                return pt[0] != 0 && -v == j;  // shell |r| = q^j
            });
        Rational closed = shell_integral_closed(j).eval_q(Rational(p));
        CheckRecord rec;
        rec.id = "shell-integral";
        rec.instance = "p=" + std::to_string(p) + " j=" + std::to_string(j);
        rec.lhs = got.is_rational() ? rat_str(got.rational_value()) : "(non-rational)";
        rec.rhs = rat_str(closed);
        rec.equal = got.is_rational() && got.rational_value() == closed;
        rec.ms = now_ms() - t0;
        rep.checks.push_back(rec);
    }
    // Gaussian sums and special integrals per non-split etype
    for (LocalCubicType t : {LocalCubicType::quad, LocalCubicType::cubic}) {
        LocalCubic E = LocalCubic::standard(t, p);
        for (auto [n, m] : support_grid(t, 3, cfg.m_max)) {
            for (long vd : {0L, -1L}) {
                GroupCoord g = vd == 0 ? GroupCoord::toral(p, n, m)
                                       : GroupCoord::with_d(p, n, m,
                                                            PadicScalar::uniformizer_pow(p, vd));
                if (!support_conditions(E, g)) continue;
                double t0 = now_ms();
                auto brute = gauss_brute(E, g);
                HalfQ verbatim = gauss_closed(E, g, GsTable::verbatim);
                HalfQ corrected = gauss_closed(E, g, GsTable::corrected);
                const HalfQ& used = cfg.corrected ? corrected : verbatim;
                Rational cv = used.eval_q(Rational(p));
                CheckRecord rec;
                rec.id = "gauss-sum";
                rec.instance = inst_str(E, n, m, vd);
                rec.lhs = brute ? rat_str(*brute) : "(non-rational)";
                rec.rhs = rat_str(cv);
                rec.equal = brute && *brute == cv;
                // mark corrected-variant provenance only where the tables differ
                rec.provenance = (cfg.corrected && !(verbatim == corrected))
                                     ? Provenance::corrected_variant
                                     : Provenance::paper_formula;
                rec.ms = now_ms() - t0;
                rep.checks.push_back(rec);
            }
        }
        double t0 = now_ms();
        SpecialIntegrals si = special_integrals_brute(E);
        CheckRecord rec;
        rec.id = "special-integral";
        rec.instance = etype_name(t) + " p=" + std::to_string(p) + " (pi^-1 O^x)^2";
        rec.lhs = rat_str(si.quad_or_field);
        rec.rhs = rat_str(Rational(1 - p));
        rec.equal = si.quad_or_field == Rational(1 - p);
        rec.ms = now_ms() - t0;
        rep.checks.push_back(rec);
        CheckRecord rec2;
        rec2.id = "special-integral";
        rec2.instance = "p=" + std::to_string(p) + " |x|,|y|,|xy|<=q";
        rec2.lhs = rat_str(si.third);
        rec2.rhs = "-1";
        rec2.equal = si.third == Rational(-1);
        rec2.ms = now_ms() - t0;
        rep.checks.push_back(rec2);
        // kappa_abc vanishing
        for (bool shell : {false, true}) {
            double t1 = now_ms();
            Rational got = shell ? kappa_abc_count_shell(E, 1, 1) : kappa_abc_count(E, 1);
            CheckRecord r3;
            r3.id = "kappa-abc";
            r3.instance = etype_name(t) + (shell ? " shell(1,1)" : " plain(1)");
            r3.lhs = rat_str(got);
            r3.rhs = "0";
            r3.equal = got == 0;
            r3.ms = now_ms() - t1;
            rep.checks.push_back(r3);
        }
    }
    return rep;
}

Report cmd_check_lfactor(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    auto add = [&](const std::string& inst, bool ok, double ms) {
        CheckRecord rec;
        rec.id = "poincare-identity";
        rec.instance = inst;
        rec.lhs = ok ? "series == sym-traces" : "mismatch";
        rec.rhs = "series == sym-traces";
        rec.equal = ok;
        rec.ms = ms;
        rep.checks.push_back(rec);
    };
    const std::pair<long, long> tori[] = {{1, 1}, {2, 1}, {3, 2}, {5, 3}, {-2, 7}};
    for (auto [a, b] : tori) {
        double t0 = now_ms();
        SatakeTorus t{Rational(a), Rational(b)};
        bool ok = check_generating_identity(t, std::min(cfg.order, 8L));
        std::ostringstream os;
        os << "torus (" << a << "," << b << ") order " << std::min(cfg.order, 8L);
        add(os.str(), ok, now_ms() - t0);
    }
    double t0 = now_ms();
    bool ok = check_generating_identity_formal(std::min(cfg.order, 5L));
    add("formal torus order " + std::to_string(std::min(cfg.order, 5L)), ok, now_ms() - t0);
    return rep;
}

std::string cmd_table(const RunConfig& cfg) {
    cfg.validate();
    std::ostringstream os;
    os << "etype,n,m,d,quantity,branch,value\n";
    if (cfg.etype == LocalCubicType::split) return os.str();
    LocalCubic E = config_cubic(cfg);
    long long p = E.p;
    for (auto [n, m] : support_grid(E.etype, cfg.n_max, cfg.m_max)) {
        for (long vd : {0L, -1L}) {
            GroupCoord g = vd == 0 ? GroupCoord::toral(p, n, m)
                                   : GroupCoord::with_d(p, n, m,
                                                        PadicScalar::uniformizer_pow(p, vd));
            std::string dtag = vd == 0 ? "0" : "q";
            std::string branch = std::to_string(m - 2 * n);
            os << etype_name(E.etype) << ',' << n << ',' << m << ',' << dtag << ",Fstar,"
               << "m-2n=" << branch << ",\"" << F_star(E, g).str() << "\"\n";
            if (support_conditions(E, g)) {
                HalfQ gs = gauss_closed(E, g,
                                        cfg.corrected ? GsTable::corrected : GsTable::verbatim);
                os << etype_name(E.etype) << ',' << n << ',' << m << ',' << dtag << ",GS,"
                   << "m-2n=" << branch << ",\"" << gs.str() << "\"\n";
            }
            os << etype_name(E.etype) << ',' << n << ',' << m << ',' << dtag << ",Ds,"
               << "m-2n=" << branch << ",\"" << Ds_closed(E, g).str() << "\"\n";
        }
    }
    return os.str();
}

}  // namespace g2local
