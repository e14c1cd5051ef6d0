#include "g2local/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <sstream>
#include <thread>

namespace g2local {

namespace {

// Exact scalar mant * p^e on the enumeration lattice.  Mantissas stay far
// below 2^127 for every plan this file constructs.
struct PExact {
    __int128 mant = 0;
    int e = 0;
    long long p = 5;

    static PExact zero(long long p) { return {0, 0, p}; }
    static PExact make(long long p, __int128 mant, int e) { return {mant, e, p}; }
    bool is_zero() const { return mant == 0; }

    friend PExact operator*(const PExact& a, const PExact& b) {
        return {a.mant * b.mant, a.e + b.e, a.p};
    }
    friend PExact operator+(const PExact& a, const PExact& b) {
        if (a.mant == 0) return b;
        if (b.mant == 0) return a;
        int e = std::min(a.e, b.e);
        __int128 ma = a.mant, mb = b.mant;
        for (int i = 0; i < a.e - e; ++i) ma *= a.p;
        for (int i = 0; i < b.e - e; ++i) mb *= b.p;
        return {ma + mb, e, a.p};
    }
    friend PExact operator-(const PExact& a, const PExact& b) {
        return a + PExact{-b.mant, b.e, b.p};
    }
    friend PExact operator-(const PExact& a) { return {-a.mant, a.e, a.p}; }

    long valuation() const {
        if (mant == 0) throw std::domain_error("PExact: valuation of zero");
        __int128 m = mant;
        long v = e;
        while (m % p == 0) {
            m /= p;
            ++v;
        }
        return v;
    }
    // |x| <= q^t  i.e.  v >= -t
    bool norm_le(long t) const {
        if (mant == 0) return true;
        if (e >= -t) return true;
        __int128 m = mant;
        long v = e;
        while (v < -t && m % p == 0) {
            m /= p;
            ++v;
        }
        return v >= -t;
    }
};

struct Ball {  // |b * r4 - z| <= q^t
    PExact b;
    PExact z;
    long t;
    bool b_is_one;
};

long ipow_count(long long p, long e, unsigned long long cap) {
    unsigned long long r = 1;
    for (long i = 0; i < e; ++i) {
        r *= static_cast<unsigned long long>(p);
        if (r > cap) return -1;
    }
    return static_cast<long>(r);
}

}  // namespace

EkInstance make_ek_instance(const LocalCubic& E, const GroupCoord& g, long k) {
    EkInstance inst;
    inst.E = E;
    inst.n = g.n;
    inst.m = g.m;
    inst.k = k;
    if (g.d.is_exact_zero()) {
        inst.pc_zero = true;
    } else {
        inst.pc_zero = false;
        Rational r = g.d.to_rational();
        Int num = numerator(r), den = denominator(r);
        long v = 0;
        while (num % E.p == 0) { num /= E.p; ++v; }
        while (den % E.p == 0) { den /= E.p; --v; }
        if (den != 1 && den != -1)
            throw std::domain_error("make_ek_instance: d must be a p-power times a small unit");
        inst.pc_unit = num.convert_to<long>() * (den < 0 ? -1 : 1);
        inst.pc_val = v + 2 * g.n - g.m;
    }
    return inst;
}

EnumPlan make_plan(const EkInstance& inst, unsigned long long budget, int jobs) {
    EnumPlan plan;
    plan.budget = budget;
    plan.jobs = jobs;
    long n = inst.n, m = inst.m, k = inst.k;
    // k-feasibility: every max(...) clause in the printed list contains 1
    const long feas[] = {k + n,     k + m - n, k + 2 * n - m, k,
                         k + m - 2 * n, k + n - m, k - n};
    for (long f : feas)
        if (f < 0) {
            plan.feasible = false;
            return plan;
        }
    long l = inst.pc_zero ? std::numeric_limits<long>::min() / 4 : -inst.pc_val;
    if (!inst.pc_zero) {
        const long pc_caps[] = {k + m - n, k, k + m - 2 * n, k - n};
        for (long c : pc_caps)
            if (l > c) {
                plan.feasible = false;
                return plan;
            }
        if (2 * l > k + m - 2 * n) {
            plan.feasible = false;
            return plan;
        }
    }
    // boxes, with one round of ball-style refinement
    plan.A1 = std::min(k + 2 * n - m, k + n - m);
    long a2 = std::min(k + 2 * n - m, k + n - m);
    if (!inst.pc_zero) a2 = std::min(a2, std::max(k - n, l + plan.A1));
    else a2 = std::min(a2, k - n);
    plan.A2 = a2;
    long a3 = k + n - m;
    if (!inst.pc_zero) a3 = std::min(a3, std::max(std::min(k, k - n), l + plan.A2));
    else a3 = std::min(a3, k - n);
    plan.A3 = a3;
    // digit precision: cofactor-magnitude rule per constraint family.  Linear
    // tests (the hat cosets, pc-free boxes) are exact at cell centers and
    // impose nothing.  Soundness is re-verified by the built-in B/B+1 run.
    long A1 = plan.A1, A2 = plan.A2, A3 = plan.A3;
    long cu = 1;  // |c_u| = |u/p - D r2 + N r1|
    if (inst.E.D != 0) cu = std::max(cu, A2);
    if (inst.E.N != 0) cu = std::max(cu, A1);
    long B = 1;
    auto reg = [&](long mag, long t) { B = std::max(B, mag - t + 1); };
    reg(std::max({A1, A2, A3}), k + n - m);  // r2^2 - r1 r3
    long rho_a = k + n - m, rho_c = k - n;
    long t_ac = std::max(rho_a, rho_c);
    if (inst.pc_zero) {
        // B4: |r2 r4 - r3^2| as a coset test |r2 c_u - r3^2| <= q^{k-n}
        reg(cu, k - n);
        reg(A3, k - n);
        reg(A2, k - n);
        // P_ac: |r1 c_u - r2 r3| <= q^{t_ac}
        reg(cu, t_ac);
        reg(std::max(A2, A3), t_ac);
        reg(A1, t_ac);
    } else {
        long rho_b = k - n - l;
        long t_ab = std::max(rho_a, rho_b) + l;
        long t_bc = std::max(rho_b, rho_c) + l;
        // pc-weighted linear combos |r3 - pc r2|, |r2 - pc r1|
        reg(l + std::max(A1, A2), std::min(k, k - n));
        // B1: z = 2 pc r3 - pc^2 r2 (b = 1, but z carries pc-products)
        reg(l + std::max(A2, A3) + std::max(0L, l), k + m - 2 * n);
        // B2: z = pc r3
        reg(l + A3, k - n);
        // P_ac with the pc-decorated z
        reg(std::max({cu, A2, A3, l + std::max({A1, A2, A3})}), t_ac);
        // P_ab: |r2 c_u - r3^2| <= q^{t_ab}
        reg(std::max({cu, A2, A3}), t_ab);
        // P_bc: b = r2 - pc r1, z has pc and pc^2 terms
        reg(std::max({cu + std::max(0L, l + A1 - A2), A2, A3,
                      l + std::max({A1, A2, A3}), 2 * l + std::max({A1, A2, A3})}),
            t_bc);
    }
    plan.B = static_cast<int>(std::max(1L, B));
    // cell estimate
    unsigned long long cells = 1;
    for (long Ai : {plan.A1, plan.A2, plan.A3}) {
        long w = ipow_count(inst.E.p, Ai + plan.B, budget * 4 + 1);
        if (w < 0) {
            plan.cell_estimate = budget + 1;
            return plan;
        }
        cells *= static_cast<unsigned long long>(w);
        if (cells > budget * 4) {
            plan.cell_estimate = cells;
            return plan;
        }
    }
    plan.cell_estimate = cells;
    return plan;
}

namespace {

struct EkContext {
    long long p;
    long D, N;
    long n, m, k;
    bool pc_zero;
    PExact pc;
    long l;  // |pc| = q^l (only valid when !pc_zero)
    int B;
    long A1, A2, A3;
    long rho5_exp;  // r5-measure exponent
    long t_ac, t_ab, t_bc;
    long OFFMIN;
    static constexpr int kExpSlots = 96;
};

// one (r1, r2, r3) cell: fold the r4-ball list per hat-coset
void process_cell(const EkContext& C, const PExact& r1, const PExact& r2, const PExact& r3,
                  std::vector<std::array<long long, EkContext::kExpSlots>>& acc) {
    long long p = C.p;
    long k = C.k, n = C.n, m = C.m;
    const PExact two = PExact::make(p, 2, 0);
    // (r1,r2,r3)-only constraints
    if (!(r2 * r2 - r1 * r3).norm_le(k + n - m)) return;
    if (!C.pc_zero) {
        if (!(r3 - C.pc * r2).norm_le(std::min(k, k - n))) return;
        if (!(r2 - C.pc * r1).norm_le(std::min(k, k - n))) return;
    } else {
        if (!r3.norm_le(std::min(k, k - n))) return;   // pc = 0 degenerations
        if (!r2.norm_le(std::min(k, k - n))) return;
    }
    // r4-ball list
    std::vector<Ball> balls;
    balls.reserve(6);
    auto one = PExact::make(p, 1, 0);
    // line 5: |2 pc r3 - pc^2 r2 - r4| <= q^{k+m-2n}
    if (!C.pc_zero)
        balls.push_back({one, two * C.pc * r3 - C.pc * C.pc * r2, k + m - 2 * n, true});
    else
        balls.push_back({one, PExact::zero(p), k + m - 2 * n, true});
    // line 7: |pc r3 - r4| <= q^{k-n}
    balls.push_back({one, C.pc_zero ? PExact::zero(p) : C.pc * r3, k - n, true});
    // r5 pairing (a,c): |r1 r4 - (r2 r3 - pc r2^2 + pc r1 r3)| <= q^{t_ac}
    {
        PExact z = r2 * r3;
        if (!C.pc_zero) z = z - C.pc * r2 * r2 + C.pc * r1 * r3;
        balls.push_back({r1, z, C.t_ac, false});
    }
    if (!C.pc_zero) {
        // (a,b): |r2 r4 - r3^2| <= q^{t_ab}
        balls.push_back({r2, r3 * r3, C.t_ab, false});
        // (b,c): |(r2 - pc r1) r4 - (r3^2 - pc r2 r3 + pc^2 r2^2 - pc^2 r1 r3)| <= q^{t_bc}
        PExact z = r3 * r3 - C.pc * r2 * r3 + C.pc * C.pc * (r2 * r2 - r1 * r3);
        balls.push_back({r2 - C.pc * r1, z, C.t_bc, false});
    } else {
        // line 7 big constraint at pc = 0: |r2 r4 - r3^2| <= q^{k-n}
        balls.push_back({r2, r3 * r3, k - n, false});
    }

    PExact shift = PExact::make(p, C.D, 0) * r2 - PExact::make(p, C.N, 0) * r1;
    long reach = 1;
    if (!shift.is_zero()) reach = std::max(1L, -shift.valuation());

    // classify variable-coefficient balls once per cell
    struct Active {
        PExact b, z;
        long t, vb, rho;
    };
    std::vector<Active> act;
    act.reserve(balls.size());
    for (const Ball& bl : balls) {
        if (bl.b_is_one) {
            act.push_back({bl.b, bl.z, bl.t, 0, bl.t});
            continue;
        }
        bool tiny = bl.b.is_zero();
        long vb = 0;
        if (!tiny) {
            vb = bl.b.valuation();
            // |b| * reach <= q^{t-1}: the ball constrains nothing on the coset range
            if (-vb + reach <= bl.t - 1) tiny = true;
        }
        if (tiny) {
            if (!bl.z.norm_le(bl.t)) return;  // r4-free check fails: cell contributes 0
            continue;
        }
        act.push_back({bl.b, bl.z, bl.t, vb, bl.t + vb});
    }

    for (long u = 0; u < p; ++u) {
        // coset r4 in c_u + O, c_u = u/p - shift
        PExact cu = PExact::make(p, u, -1) - shift;
        long minrho = 0;
        bool ok = true;
        // small balls kept for pairwise tests
        std::array<int, 8> small_idx{};
        int nsmall = 0;
        for (size_t i = 0; i < act.size() && ok; ++i) {
            const Active& a = act[i];
            PExact diff = a.b * cu - a.z;
            if (a.rho >= 0) {
                ok = diff.norm_le(a.t);
            } else {
                ok = diff.norm_le(-a.vb);
                if (ok) {
                    minrho = std::min(minrho, a.rho);
                    small_idx[nsmall++] = static_cast<int>(i);
                }
            }
        }
        if (!ok) continue;
        for (int i = 0; i < nsmall && ok; ++i)
            for (int j = i + 1; j < nsmall && ok; ++j) {
                const Active& x = act[small_idx[i]];
                const Active& y = act[small_idx[j]];
                PExact d = x.z * y.b - y.z * x.b;
                ok = d.norm_le(std::max(x.rho, y.rho) - x.vb - y.vb);
            }
        if (!ok) continue;
        long slot = minrho + C.rho5_exp - C.OFFMIN;
        if (slot < 0 || slot >= EkContext::kExpSlots)
            throw std::logic_error("Ek_brute: exponent slot out of range");
        acc[static_cast<size_t>(u)][static_cast<size_t>(slot)] += 1;
    }
}

Rational run_plan(const EkInstance& inst, const EnumPlan& plan, int B,
                  unsigned long long* visited) {
    long long p = inst.E.p;
    EkContext C;
    C.p = p;
    C.D = static_cast<long>(inst.E.D);
    C.N = static_cast<long>(inst.E.N);
    C.n = inst.n;
    C.m = inst.m;
    C.k = inst.k;
    C.pc_zero = inst.pc_zero;
    C.B = B;
    C.A1 = plan.A1;
    C.A2 = plan.A2;
    C.A3 = plan.A3;
    long n = inst.n, m = inst.m, k = inst.k;
    long rho_a = k + n - m, rho_c = k - n;
    if (!inst.pc_zero) {
        C.l = -inst.pc_val;
        C.pc = PExact::make(p, inst.pc_unit, static_cast<int>(inst.pc_val));
        long rho_b = k - n - C.l;
        C.rho5_exp = std::min({rho_a, rho_b, rho_c});
        C.t_ac = std::max(rho_a, rho_c);
        C.t_ab = std::max(rho_a, rho_b) + C.l;
        C.t_bc = std::max(rho_b, rho_c) + C.l;
    } else {
        C.l = 0;
        C.pc = PExact::zero(p);
        C.rho5_exp = std::min(rho_a, rho_c);
        C.t_ac = std::max(rho_a, rho_c);
        C.t_ab = C.t_bc = 0;
    }
    // smallest possible rho: t + vb with vb >= -(Amax + B + |l|)
    long tmin_ball = std::min({k + m - 2 * n, k - n, C.t_ac,
                               inst.pc_zero ? k - n : std::min(C.t_ab, C.t_bc)});
    long Amax = std::max({plan.A1, plan.A2, plan.A3, 1L});
    C.OFFMIN = C.rho5_exp + std::min(0L, tmin_ball - (Amax + B + std::abs(C.l)) - 2);

    long w1 = ipow_count(p, plan.A1 + B, 1ULL << 62);
    long w2 = ipow_count(p, plan.A2 + B, 1ULL << 62);
    long w3 = ipow_count(p, plan.A3 + B, 1ULL << 62);
    if (w1 < 0 || w2 < 0 || w3 < 0) throw std::domain_error("Ek_brute: window overflow");
    *visited += static_cast<unsigned long long>(w1) * static_cast<unsigned long long>(w2) *
                static_cast<unsigned long long>(w3);

    int jobs = std::max(1, plan.jobs);
    std::vector<std::vector<std::array<long long, EkContext::kExpSlots>>> accs(
        jobs, std::vector<std::array<long long, EkContext::kExpSlots>>(
                  static_cast<size_t>(p), std::array<long long, EkContext::kExpSlots>{}));
    auto worker = [&](int tid) {
        auto& acc = accs[tid];
        for (long j1 = tid; j1 < w1; j1 += jobs) {
            PExact r1 = PExact::make(p, j1, static_cast<int>(-plan.A1));
            for (long j2 = 0; j2 < w2; ++j2) {
                PExact r2 = PExact::make(p, j2, static_cast<int>(-plan.A2));
                if (!C.pc_zero) {
                    if (!(r2 - C.pc * r1).norm_le(std::min(k, k - n))) continue;
                } else {
                    if (!r2.norm_le(std::min(k, k - n))) continue;
                }
                for (long j3 = 0; j3 < w3; ++j3) {
                    PExact r3 = PExact::make(p, j3, static_cast<int>(-plan.A3));
                    process_cell(C, r1, r2, r3, acc);
                }
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
        for (auto& t : threads) t.join();
    }
    // combine: value = sum_u sum_slot acc * q^{OFFMIN + slot} * q^{-3B} * zeta_p^u
    CycloValue total(p, 1);
    for (long u = 0; u < p; ++u) {
        Rational coef = 0;
        for (int s = 0; s < EkContext::kExpSlots; ++s) {
            long long cnt = 0;
            for (int t = 0; t < jobs; ++t) cnt += accs[t][static_cast<size_t>(u)][s];
            if (cnt == 0) continue;
            coef += Rational(cnt) * int_pow(Int(p), C.OFFMIN + s - 3 * B);
        }
        if (coef != 0) total += CycloValue::root_power(p, 1, u, coef);
    }
    if (!total.is_rational())
        throw std::domain_error("Ek_brute: character sum failed to reduce to a rational");
    return total.rational_value();
}

}  // namespace

EkResult Ek_brute(const EkInstance& inst, const EnumPlan& plan) {
    EkResult res;
    res.B_used = plan.B;
    if (!plan.feasible) {
        res.value = 0;
        return res;
    }
    if (plan.cell_estimate > plan.budget) {
        res.skipped = true;
        return res;
    }
    unsigned long long visited = 0;
    Rational v1 = run_plan(inst, plan, plan.B, &visited);
    // plan soundness: when cheap, the B+1 run must reproduce the value exactly
    // (the property also has dedicated tests on representative instances)
    unsigned long long v2cells = visited * static_cast<unsigned long long>(inst.E.p) *
                                 static_cast<unsigned long long>(inst.E.p) *
                                 static_cast<unsigned long long>(inst.E.p);
    if (v2cells <= 30'000'000ULL) {
        Rational v2 = run_plan(inst, plan, plan.B + 1, &visited);
        if (v1 != v2)
            throw std::domain_error("Ek_brute: plan precision unsound (B vs B+1 disagree)");
    }
    res.value = v1;
    res.cells = visited;
    return res;
}

TruncatedSeries Ds_truncated(const LocalCubic& E, const GroupCoord& g, long k_max,
                             unsigned long long budget, int jobs) {
    TruncatedSeries ts;
    ts.k_max = k_max;
    Rational prev = 0;
    for (long k = 0; k <= k_max; ++k) {
        EkResult r = Ek_brute(E, g, k, budget, jobs);
        ts.Ek.push_back(r.value);
        ts.skipped.push_back(r.skipped);
        ts.Dk.push_back(r.skipped ? Rational(0) : r.value - prev);
        ts.cells.push_back(r.cells);
        ts.B.push_back(r.B_used);
        if (!r.skipped) prev = r.value;
    }
    return ts;
}

std::string ek_plan_json(const EkInstance& inst, const EnumPlan& plan, const EkResult& res) {
    std::ostringstream os;
    os << "{\"etype\":\"" << etype_name(inst.E.etype) << "\",\"p\":" << inst.E.p
       << ",\"D\":" << inst.E.D << ",\"N\":" << inst.E.N << ",\"n\":" << inst.n
       << ",\"m\":" << inst.m << ",\"k\":" << inst.k << ",\"pc_zero\":"
       << (inst.pc_zero ? "true" : "false") << ",\"A\":[" << plan.A1 << "," << plan.A2 << ","
       << plan.A3 << "],\"B\":" << res.B_used << ",\"cells\":" << res.cells
       << ",\"skipped\":" << (res.skipped ? "true" : "false") << ",\"value\":\""
       << rat_str(res.value) << "\"}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Gaussian sums by exact conjugation in the 7-dimensional embedding.
// Matrix entries live in Z[1/2, 1/p]: value = mant * 2^{e2} * p^{ep}.

namespace {

struct P2Exact {
    __int128 mant = 0;
    int e2 = 0;
    int ep = 0;
    long long p = 5;

    static P2Exact zero(long long p) { return {0, 0, 0, p}; }
    static P2Exact from_integer(long long p, long long n) { return {n, 0, 0, p}; }
    static P2Exact from_rational(long long p, const Rational& r) {
        Int num = numerator(r), den = denominator(r);
        int e2 = 0, ep = 0;
        while (den % 2 == 0) { den /= 2; --e2; }
        while (den % p == 0) { den /= p; --ep; }
        if (den != 1 && den != -1)
            throw std::domain_error("P2Exact: denominator not supported");
        if (den == -1) num = -num;
        return {static_cast<__int128>(num.convert_to<long long>()), e2, ep, p};
    }
    static P2Exact uniformizer_pow(long long p, long e) {
        return {1, 0, static_cast<int>(e), p};
    }
    long long prime() const { return p; }
    bool is_exact_zero() const { return mant == 0; }
    void reduce() {
        if (mant == 0) { e2 = ep = 0; return; }
        while (mant % 2 == 0) { mant /= 2; ++e2; }
        while (mant % p == 0) { mant /= p; ++ep; }
    }
    friend P2Exact operator*(const P2Exact& a, const P2Exact& b) {
        P2Exact r{a.mant * b.mant, a.e2 + b.e2, a.ep + b.ep, a.p};
        r.reduce();
        return r;
    }
    friend P2Exact operator+(const P2Exact& a, const P2Exact& b) {
        if (a.mant == 0) return b;
        if (b.mant == 0) return a;
        int e2 = std::min(a.e2, b.e2), ep = std::min(a.ep, b.ep);
        __int128 ma = a.mant, mb = b.mant;
        for (int i = 0; i < a.e2 - e2; ++i) ma *= 2;
        for (int i = 0; i < a.ep - ep; ++i) ma *= a.p;
        for (int i = 0; i < b.e2 - e2; ++i) mb *= 2;
        for (int i = 0; i < b.ep - ep; ++i) mb *= b.p;
        P2Exact r{ma + mb, e2, ep, a.p};
        r.reduce();
        return r;
    }
    friend P2Exact operator-(const P2Exact& a, const P2Exact& b) {
        return a + P2Exact{-b.mant, b.e2, b.ep, b.p};
    }
    friend P2Exact operator-(const P2Exact& a) { return {-a.mant, a.e2, a.ep, a.p}; }
    long vp() const {
        if (mant == 0) return 1L << 30;
        return ep;  // mant kept coprime to p by reduce()
    }
    // residue u in [0, p^A) with value = u p^{-A} (mod O); requires vp >= -A
    long psi_exponent(int A) const {
        if (mant == 0) return 0;
        if (ep >= 0) return 0;
        if (-ep > A) throw std::domain_error("P2Exact: below psi level");
        long long pa = 1;
        for (int i = 0; i < A; ++i) pa *= p;
        long long m = static_cast<long long>(mant % pa);
        m = ((m % pa) + pa) % pa;
        // multiply by 2^{e2} mod p^A (inverse for negative powers)
        long long two = 2 % pa;
        long long e = e2;
        if (e < 0) {
            // inverse of 2 mod p^A
            long long inv = 1, base = two, k = pa / p * (p - 1) - 1;  // phi(p^A) - 1
            while (k) {
                if (k & 1) inv = static_cast<long long>(__int128(inv) * base % pa);
                base = static_cast<long long>(__int128(base) * base % pa);
                k >>= 1;
            }
            two = inv;
            e = -e;
        }
        for (long i = 0; i < e; ++i) m = static_cast<long long>(__int128(m) * two % pa);
        // shift to level A
        for (int i = 0; i < A + ep; ++i) m = static_cast<long long>(__int128(m) * p % pa);
        return m;
    }
};

using Mat7P2 = Mat7T<P2Exact>;

Mat7P2 mat_inv_unipotent(const Mat7P2& M) {
    long long p = M.a[0][0].prime();
    Mat7P2 N = M;
    for (int i = 0; i < 7; ++i) N.a[i][i] = P2Exact::zero(p);
    Mat7P2 R = Mat7P2::identity(p);
    Mat7P2 P = Mat7P2::identity(p);
    int sign = -1;
    for (int step = 0; step < 7; ++step) {
        P = P * N;
        bool all0 = true;
        for (int i = 0; i < 7 && all0; ++i)
            for (int j = 0; j < 7 && all0; ++j) all0 = P.a[i][j].is_exact_zero();
        if (all0) break;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                R.a[i][j] = sign > 0 ? R.a[i][j] + P.a[i][j] : R.a[i][j] - P.a[i][j];
        sign = -sign;
    }
    return R;
}

long vp_rat(const Rational& x, long long p) {
    if (x == 0) return 1L << 30;
    Int num = numerator(x), den = denominator(x);
    long v = 0;
    while (num % p == 0) { num /= p; ++v; }
    while (den % p == 0) { den /= p; --v; }
    return v;
}

}  // namespace

std::optional<Rational> gauss_brute(const LocalCubic& E, const GroupCoord& g) {
    long long p = E.p;
    Rational dval = g.d.is_exact_zero() ? Rational(0) : g.d.to_rational();
    P2Exact dd = P2Exact::from_rational(p, dval);
    Mat7P2 gm = iota_torus<P2Exact>(p, g.n, g.m) * iota_xalpha<P2Exact>(p, dd);
    Mat7P2 gi = iota_xalpha<P2Exact>(p, -dd) * iota_torus<P2Exact>(p, -g.n, -g.m);

    std::vector<std::pair<P2Exact, long>> args;  // (psi argument, weight)
    args.emplace_back(P2Exact::zero(p), p - 1);
    P2Exact D = P2Exact::from_integer(p, E.D), N = P2Exact::from_integer(p, E.N);
    auto conj_arg = [&](const Mat7P2& u) {
        Mat7P2 c = gm * u * gi;
        UCoordT<P2Exact> uc = extract_u_coords(c);
        return uc.r4 + D * uc.r2 - N * uc.r1;
    };
    auto mk = [&](long num) { return P2Exact::from_rational(p, Rational(num, p)); };
    for (long r = 1; r < p; ++r) {
        UCoordT<P2Exact> u = UCoordT<P2Exact>::zero(p);
        u.r1 = mk(r);
        u.r2 = u.r3 = u.r4 = u.r5 = P2Exact::zero(p);
        args.emplace_back(conj_arg(iota_unipotent(p, u)), p);
    }
    for (long r = 1; r < p; ++r)
        for (long y = 0; y < p; ++y) {
            UCoordT<P2Exact> u = UCoordT<P2Exact>::zero(p);
            u.r1 = mk(y * y * y * r);
            u.r2 = mk(y * y * r);
            u.r3 = mk(y * r);
            u.r4 = mk(r);
            args.emplace_back(conj_arg(mat_inv_unipotent(iota_unipotent(p, u))), p);
        }
    int level = 0;
    for (auto& [a, w] : args) level = std::max<long>(level, std::max(0L, -a.vp()));
    if (level > 12) return std::nullopt;  // wildly off support; sum cannot be rational anyway
    CycloValue total(p, level);
    for (auto& [a, w] : args)
        total += CycloValue::root_power(p, level, a.psi_exponent(level), Rational(w));
    if (!total.is_rational()) return std::nullopt;
    return total.rational_value();
}

// ---------------------------------------------------------------------------
// Measure lemmas.

Rational kappa_count(long n1, long n2, long n3, long long p) {
    if (n1 < 0 || n2 < 0 || n3 < 0 || n1 + n2 < n3)
        throw std::domain_error("kappa_count: requires n_i >= 0 and n1+n2 >= n3");
    // the y-ball is counted analytically per x-cell, so B only has to make
    // the zero cell's tail uniform: n3 - j >= n2 for every |x| <= q^{-B}
    int B = static_cast<int>(std::max(1L, n2 - n3));
    long w = ipow_count(p, n1 + B, 1ULL << 40);
    if (w < 0) throw std::domain_error("kappa_count: window overflow");
    Rational total = 0;
    Rational cell = int_pow(Int(p), -B);
    for (long j = 0; j < w; ++j) {
        // x = j p^{-n1}; y-ball: |y| <= min(q^{n2}, q^{n3}/|x|)
        long ybound;
        if (j == 0) {
            ybound = n2;  // zero cell: |x| <= q^{-B}, n3 + B >= n2 by choice of B
        } else {
            long jv = 0;
            long jj = j;
            while (jj % p == 0) { jj /= p; ++jv; }
            long vx = jv - n1;
            ybound = std::min(n2, n3 + vx);
        }
        total += cell * int_pow(Int(p), ybound);
    }
    return total;
}

Rational kappa_abc_count_shell(const LocalCubic& E, long n1, long n2) {
    long long p = E.p;
    long deg = E.N_is_unit() ? 3 : 2;
    long t = n1 - n2 * deg;  // |P(x/y)| <= q^t on the shell
    // On |x| = |y| = q^{n2} write x = eps y with eps a unit; P(x/y) = P(eps).
    // Enumerate eps over units mod p^{BB}, y over the shell; the measure
    // factorizes as meas{|y| = q^{n2}} * meas{eps unit: |P(eps)| <= q^t}.
    int BB = static_cast<int>(std::max(1L, -t + 1));
    long w = ipow_count(p, BB, 1ULL << 40);
    if (w < 0) throw std::domain_error("kappa_abc_count_shell: window overflow");
    Rational eps_meas = 0;
    Rational cell = int_pow(Int(p), -BB);
    for (long j = 0; j < w; ++j) {
        if (j % p == 0) continue;  // units only
        Rational z(j);
        Rational P = E.N_is_unit() ? Rational(E.N) + Rational(E.D) * z + z * z * z
                                   : Rational(E.D) + z * z;
        if (vp_rat(P, p) >= -t) eps_meas += cell;
    }
    Rational shell_y = int_pow(Int(p), n2) - int_pow(Int(p), n2 - 1);
    // meas{(x,y)} = meas{y-shell} * q^{n2} * eps-measure restricted... the map
    // (eps, y) -> (x, y) has |Jacobian| = |y| = q^{n2}
    return shell_y * int_pow(Int(p), n2) * eps_meas;
}

Rational kappa_abc_count(const LocalCubic& E, long n1) {
    Rational total = 0;
    for (long j = 1; j <= n1; ++j) total += kappa_abc_count_shell(E, n1, j);
    return total;
}

// ---------------------------------------------------------------------------
// Special integrals.

SpecialIntegrals special_integrals_brute(const LocalCubic& E) {
    long long p = E.p;
    SpecialIntegrals out;
    {
        // int over (pi^{-1} O^x)^2 of psi(N r2^2/r3 + D r2 + r3^2/r2)
        // (the N-term only for E a field).  With r_i = j_i/p the argument is
        // (D j2 + j3^2/j2 [+ N j2^2/j3]) / p, so only mod-p inverses enter.
        int B = 2;
        long w = ipow_count(p, 1 + B, 1ULL << 40);
        std::vector<long long> inv(static_cast<size_t>(p), 0);
        for (long a = 1; a < p; ++a)
            for (long b = 1; b < p; ++b)
                if (a * b % p == 1) inv[static_cast<size_t>(a)] = b;
        std::vector<long long> counts(static_cast<size_t>(p), 0);
        for (long j2 = 0; j2 < w; ++j2) {
            if (j2 % p == 0) continue;
            long long i2 = inv[static_cast<size_t>(j2 % p)];
            for (long j3 = 0; j3 < w; ++j3) {
                if (j3 % p == 0) continue;
                long long t = (E.D % p * (j2 % p) + j3 % p * (j3 % p) % p * i2) % p;
                if (E.N_is_unit())
                    t = (t + E.N % p * (j2 % p) % p * (j2 % p) % p *
                                 inv[static_cast<size_t>(j3 % p)]) % p;
                counts[static_cast<size_t>(((t % p) + p) % p)] += 1;
            }
        }
        CycloValue total(p, 1);
        Rational cell2 = int_pow(Int(p), -2 * B);
        for (long u = 0; u < p; ++u)
            if (counts[static_cast<size_t>(u)] != 0)
                total += CycloValue::root_power(p, 1, u,
                                                cell2 * Rational(counts[static_cast<size_t>(u)]));
        if (!total.is_rational())
            throw std::domain_error("special_integrals_brute: non-rational sum");
        out.quad_or_field = total.rational_value();
    }
    {
        // int_{|x|,|y|,|xy| <= q} psi(x+y) dx dy, level 1
        int B = 2;
        long w = ipow_count(p, 1 + B, 1ULL << 40);
        std::vector<long long> counts(static_cast<size_t>(p), 0);
        auto vpj = [&](long j) {
            long v = -1;  // j/p
            while (j != 0 && j % p == 0) { j /= p; ++v; }
            return j == 0 ? (1L << 20) : v;
        };
        for (long jx = 0; jx < w; ++jx) {
            long vx = vpj(jx);
            for (long jy = 0; jy < w; ++jy) {
                if (vx + vpj(jy) < -1) continue;  // |xy| <= q
                long long s = (jx + jy) % p;      // (x+y) p mod p
                counts[static_cast<size_t>(s)] += 1;
            }
        }
        CycloValue total(p, 1);
        Rational cell2 = int_pow(Int(p), -2 * B);
        for (long u = 0; u < p; ++u)
            if (counts[static_cast<size_t>(u)] != 0)
                total += CycloValue::root_power(p, 1, u,
                                                cell2 * Rational(counts[static_cast<size_t>(u)]));
        if (!total.is_rational())
            throw std::domain_error("special_integrals_brute: non-rational sum");
        out.third = total.rational_value();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generic Haar cell sum.

CycloValue haar_cell_sum(const HaarPlan& plan,
                         const std::function<CycloValue(const std::vector<Rational>&)>& integrand,
                         const std::function<bool(const std::vector<Rational>&)>& constraint) {
    long long p = plan.p;
    long w = ipow_count(p, plan.A + plan.B, plan.budget);
    if (w < 0) throw std::domain_error("haar_cell_sum: plan over budget");
    unsigned long long cells = 1;
    for (int i = 0; i < plan.nvars; ++i) {
        cells *= static_cast<unsigned long long>(w);
        if (cells > plan.budget) throw std::domain_error("haar_cell_sum: plan over budget");
    }
    std::vector<long> idx(plan.nvars, 0);
    std::vector<Rational> point(plan.nvars);
    Rational cell_meas = int_pow(Int(p), -plan.B * plan.nvars);
    std::optional<CycloValue> total;
    while (true) {
        for (int i = 0; i < plan.nvars; ++i) point[i] = Rational(idx[i]) * int_pow(Int(p), -plan.A);
        if (constraint(point)) {
            CycloValue v = integrand(point).scaled(cell_meas);
            if (!total) total = v;
            else *total += v;
        }
        int i = 0;
        while (i < plan.nvars && ++idx[i] == w) idx[i++] = 0;
        if (i == plan.nvars) break;
    }
    if (!total) return CycloValue::zero(p, 0);
    return *total;
}

}  // namespace g2local
