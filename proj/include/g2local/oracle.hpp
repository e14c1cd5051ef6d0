#pragma once

// Independent ground-truth computations by finite summation: Gaussian sums,
// lattice counts, the special psi-integrals, and the ball-counting
// coefficients E_k of D_s.  Everything here is exact integer/rational
// arithmetic over residue lattices; nothing is shared with the closed-form
// evaluators beyond the type definitions.

#include "g2local/closedforms.hpp"
#include "g2local/g2.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace g2local {

// Enumeration plan for one E_k instance.  Box exponents A_i bound
// |r_i| <= q^{A_i}; B is the digit precision of the residue grid
// (cells r = center + p^B O).  r5 is eliminated analytically and r4 is
// integrated in closed form per hat-coset; only (r1, r2, r3) are enumerated.
struct EnumPlan {
    long A1 = 0, A2 = 0, A3 = 0;
    int B = 2;
    unsigned long long cell_estimate = 0;
    unsigned long long budget = 200'000'000ULL;
    int jobs = 1;
    bool feasible = true;  // U_k(g) can be nonempty
};

struct EkInstance {
    LocalCubic E;
    long n = 0, m = 0, k = 0;
    // p-coordinate pc = d t1^2/t2 as (unit, valuation); pc = 0 for toral g
    bool pc_zero = true;
    long pc_unit = 1;
    long pc_val = 0;
};

EkInstance make_ek_instance(const LocalCubic& E, const GroupCoord& g, long k);

EnumPlan make_plan(const EkInstance& inst, unsigned long long budget = 200'000'000ULL,
                   int jobs = 1);

struct EkResult {
    Rational value;
    bool skipped = false;   // over budget
    unsigned long long cells = 0;
    int B_used = 0;
};

// E_k^{Psi_E}(g) = int_{U_k(g)} Psi_E(u) du by pruned lattice enumeration of
// (r1, r2, r3) with r4, r5 handled in closed form.  Runs the plan at B and
// B+1 and insists both agree (plan soundness); returns skipped if the budget
// does not admit the instance.
EkResult Ek_brute(const EkInstance& inst, const EnumPlan& plan);
inline EkResult Ek_brute(const LocalCubic& E, const GroupCoord& g, long k,
                         unsigned long long budget = 200'000'000ULL, int jobs = 1) {
    EkInstance inst = make_ek_instance(E, g, k);
    return Ek_brute(inst, make_plan(inst, budget, jobs));
}

struct TruncatedSeries {
    long k_max = 0;
    std::vector<Rational> Ek;          // E_k for k = 0..k_max
    std::vector<Rational> Dk;          // D_k = E_k - E_{k-1}
    std::vector<bool> skipped;         // per-k budget skip flag
    std::vector<unsigned long long> cells;
    std::vector<int> B;
};

// one-line JSON descriptor of a plan and its outcome, for reproducibility
std::string ek_plan_json(const EkInstance& inst, const EnumPlan& plan, const EkResult& res);

TruncatedSeries Ds_truncated(const LocalCubic& E, const GroupCoord& g, long k_max,
                             unsigned long long budget = 200'000'000ULL, int jobs = 1);

// GS(Psi_E, g) by direct summation of Eq.-(A.2)'s three blocks, with the
// conjugations g u g^{-1} computed exactly in the 7-dimensional embedding.
// Returns nullopt when the sum fails to reduce to a rational number (which
// happens off the lemma's support region).
std::optional<Rational> gauss_brute(const LocalCubic& E, const GroupCoord& g);

// meas{ |x| <= q^{n1}, |y| <= q^{n2}, |xy| <= q^{n3} } by cell enumeration in
// x with the aligned y-ball counted exactly per cell.
Rational kappa_count(long n1, long n2, long n3, long long p);

// Shell-variant counting oracle for kappa_{(a,b,c)}^{(n1)}(q^{n2}):
// meas{ |x| = |y| = q^{n2}, |P(x/y)| <= q^{n1 - n2 deg P} } with
// P = D + z^2 (N = 0) or N + D z + z^3 (N a unit).
Rational kappa_abc_count_shell(const LocalCubic& E, long n1, long n2);
// Plain variant, evaluated as the sum of the shells j = 1..n1 (the only
// region where the near-root condition can bite; see the decisions ledger).
Rational kappa_abc_count(const LocalCubic& E, long n1);

struct SpecialIntegrals {
    Rational quad_or_field;  // int_{(pi^{-1}O^x)^2} psi(...) dr2 dr3
    Rational third;          // int_{|x|,|y|,|xy|<=q} psi(x+y) dx dy
};

// The displayed special integrals: the (pi^{-1}O^x)^2 integral for the type
// of E (expected 1 - q) and the |xy| <= q integral (expected -1).
SpecialIntegrals special_integrals_brute(const LocalCubic& E);

// Generic Haar-measure cell sum over a product of boxes |r_i| <= q^{A},
// cells of width q^{-B}; measure normalized with meas(O) = 1 per coordinate.
// The integrand receives exact cell centers.  Used by tests and as a slow
// reference for small regions.
struct HaarPlan {
    long long p = 5;
    int nvars = 1;
    long A = 0;
    int B = 2;
    unsigned long long budget = 200'000'000ULL;
};
CycloValue haar_cell_sum(const HaarPlan& plan,
                         const std::function<CycloValue(const std::vector<Rational>&)>& integrand,
                         const std::function<bool(const std::vector<Rational>&)>& constraint);

}  // namespace g2local
