#pragma once

// Coordinates for the computable family in G2(F): the Heisenberg unipotent
// U parametrized by u(r1..r5), elements g = h_alpha(pi^n) h_beta(pi^m)
// x_alpha(d), the 7-dimensional orthogonal embedding iota, the height Gamma,
// U_k membership, and the support conditions for M_{Psi_E}-functions.
//
// The embedding is templated on the scalar: PadicScalar drives Gamma and U_k
// (valuations with precision tracking), QScalar (plain rationals) drives the
// exact structural identities (form preservation, det = 1, coordinate
// round-trips) where truncation would get in the way.

#include "g2local/cyclo.hpp"
#include "g2local/localfield.hpp"
#include "g2local/padic.hpp"

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace g2local {

// Exact rational scalar with the same construction interface as PadicScalar.
struct QScalar {
    Rational v;
    long long p = 0;

    static QScalar zero(long long p) { return {Rational(0), p}; }
    static QScalar from_integer(long long p, const Int& n) { return {Rational(n), p}; }
    static QScalar from_rational(long long p, const Rational& r) { return {r, p}; }
    static QScalar uniformizer_pow(long long p, long e) { return {int_pow(Int(p), e), p}; }
    long long prime() const { return p; }
    bool is_exact_zero() const { return v == 0; }
    friend QScalar operator+(const QScalar& a, const QScalar& b) { return {a.v + b.v, a.p | b.p}; }
    friend QScalar operator-(const QScalar& a, const QScalar& b) { return {a.v - b.v, a.p | b.p}; }
    friend QScalar operator-(const QScalar& a) { return {-a.v, a.p}; }
    friend QScalar operator*(const QScalar& a, const QScalar& b) { return {a.v * b.v, a.p | b.p}; }
    bool equals(const QScalar& o) const { return v == o.v; }
};

template <class S>
struct UCoordT {
    S r1, r2, r3, r4, r5;

    static UCoordT zero(long long p) {
        UCoordT u;
        u.r1 = u.r2 = u.r3 = u.r4 = u.r5 = S::zero(p);
        return u;
    }
};
using UCoord = UCoordT<PadicScalar>;
using UCoordQ = UCoordT<QScalar>;

// g = h_alpha(pi^n) h_beta(pi^m) x_alpha(d) = x_alpha(p) h_alpha h_beta with
// p = d t1^2/t2, so |p| = q^l, l = -(v(d) + 2n - m).
struct GroupCoord {
    long n = 0;
    long m = 0;
    PadicScalar d;

    static GroupCoord toral(long long p, long n, long m) {
        GroupCoord g;
        g.n = n;
        g.m = m;
        g.d = PadicScalar::zero(p);
        return g;
    }
    static GroupCoord with_d(long long /*p*/, long n, long m, const PadicScalar& d) {
        GroupCoord g;
        g.n = n;
        g.m = m;
        g.d = d;
        return g;
    }
    bool d_in_O() const { return d.norm_le(0); }
    // l with |p| = q^l; throws on exact-zero d
    long l_exponent() const { return -(d.valuation() + 2 * n - m); }
};

// Character of U attached to E: psi(r4 + D r2 - N r1) under CT (T = 0).
inline CycloValue psi_E(const LocalCubic& E, const UCoord& u, int ambient_level = -1) {
    PadicScalar arg = u.r4 + PadicScalar::from_integer(E.p, E.D) * u.r2 -
                      PadicScalar::from_integer(E.p, E.N) * u.r1;
    return psi(arg, ambient_level);
}
inline CycloValue psi_E(const LocalCubic& E, const UCoordQ& u, int ambient_level = -1) {
    Rational arg = u.r4.v + Rational(E.D) * u.r2.v - Rational(E.N) * u.r1.v;
    return psi(PadicScalar::from_rational(E.p, arg), ambient_level);
}

template <class S>
struct Mat7T {
    std::array<std::array<S, 7>, 7> a;

    static Mat7T identity(long long p) {
        Mat7T m;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                m.a[i][j] = i == j ? S::from_integer(p, 1) : S::zero(p);
        return m;
    }
    friend Mat7T operator*(const Mat7T& x, const Mat7T& y) {
        long long p = x.a[0][0].prime() ? x.a[0][0].prime() : y.a[0][0].prime();
        Mat7T r;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                S acc = S::zero(p);
                for (int k = 0; k < 7; ++k) acc = acc + x.a[i][k] * y.a[k][j];
                r.a[i][j] = acc;
            }
        return r;
    }
};
using Mat7 = Mat7T<PadicScalar>;
using Mat7Q = Mat7T<QScalar>;

// The printed embedding: iota(u(r) h_alpha(t1) h_beta(t2) x_alpha(d)) =
// [unipotent(r)] . diag(t1, t2/t1, t1^2/t2, 1, t2/t1^2, t1/t2, 1/t1) . [x_alpha(d)].
template <class S>
Mat7T<S> iota_unipotent(long long p, const UCoordT<S>& u) {
    const S half = S::from_rational(p, Rational(1, 2));
    const S two = S::from_integer(p, 2);
    const S &r1 = u.r1, &r2 = u.r2, &r3 = u.r3, &r4 = u.r4, &r5 = u.r5;
    Mat7T<S> m = Mat7T<S>::identity(p);
    m.a[0][2] = r2;
    m.a[0][3] = r3;
    m.a[0][4] = -(r4 * half);
    m.a[0][5] = (r2 * r3 + r5) * half;
    m.a[0][6] = (r2 * r4 - r3 * r3) * half;
    m.a[1][2] = r1;
    m.a[1][3] = r2;
    m.a[1][4] = -(r3 * half);
    m.a[1][5] = (r1 * r3 - r2 * r2) * half;
    m.a[1][6] = (r1 * r4 - two * r2 * r3 - r5) * half;
    m.a[2][5] = r3 * half;
    m.a[2][6] = r4 * half;
    m.a[3][5] = -r2;
    m.a[3][6] = -r3;
    m.a[4][5] = -r1;
    m.a[4][6] = -r2;
    return m;
}

template <class S>
Mat7T<S> iota_torus(long long p, long n, long m) {
    auto pw = [&](long v) { return S::uniformizer_pow(p, v); };
    Mat7T<S> t = Mat7T<S>::identity(p);
    t.a[0][0] = pw(n);           // t1
    t.a[1][1] = pw(m - n);       // t2/t1
    t.a[2][2] = pw(2 * n - m);   // t1^2/t2
    t.a[4][4] = pw(m - 2 * n);   // t2/t1^2
    t.a[5][5] = pw(n - m);       // t1/t2
    t.a[6][6] = pw(-n);          // 1/t1
    return t;
}

template <class S>
Mat7T<S> iota_xalpha(long long p, const S& d) {
    const S half = S::from_rational(p, Rational(1, 2));
    Mat7T<S> m = Mat7T<S>::identity(p);
    m.a[0][1] = d;
    m.a[2][3] = -d;
    m.a[2][4] = -((d * d) * half);
    m.a[3][4] = d;
    m.a[5][6] = -d;
    return m;
}

inline Mat7 iota(const UCoord& u, const GroupCoord& g) {
    long long p = g.d.prime() ? g.d.prime() : u.r1.prime();
    return iota_unipotent(p, u) * iota_torus<PadicScalar>(p, g.n, g.m) * iota_xalpha(p, g.d);
}

// Gamma(g) = max |iota(g)_{ij}| returned as the exponent t with Gamma = q^t.
// Entries whose digits cancelled to a small bound cannot raise the max; if
// one could, the precision error propagates.
inline long gamma_norm_exponent(const Mat7& m) {
    long best = std::numeric_limits<long>::min();
    bool any = false;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            const PadicScalar& x = m.a[i][j];
            if (x.is_exact_zero()) continue;
            if (x.is_known()) {
                best = std::max(best, -x.valuation());
                any = true;
            }
        }
    if (!any) throw std::domain_error("gamma_norm: no decidable entries");
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            const PadicScalar& x = m.a[i][j];
            if (!x.is_exact_zero() && !x.is_known() && -x.valuation_lower_bound() > best)
                throw precision_error("gamma_norm: undecided entry could dominate");
        }
    return best;
}

// Gamma(m) <= q^k, decidable even when some entries are only bounded.
inline bool gamma_norm_le(const Mat7& m, long k) {
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            if (!m.a[i][j].norm_le(k)) return false;
    return true;
}

enum class UkMethod { matrix, inequalities };

// The printed inequality list for u(r1..r5) in U_k(g), g = x_alpha(p) t with
// |t1| = q^{-n}, |t2| = q^{-m}.  Templated so the exact lattice scalar used
// by the oracle shares the transcription with PadicScalar.
template <class S>
bool uk_inequalities_impl(const S& pc, long n, long m, long k,
                          const S& r1, const S& r2, const S& r3, const S& r4, const S& r5,
                          const S& two) {
    auto le = [](const S& x, long t) { return x.norm_le(t); };
    if (!(k + n >= 0)) return false;
    if (!(0 <= k + m - n) || !le(pc, k + m - n)) return false;
    if (!(0 <= k + 2 * n - m) || !le(r1, k + 2 * n - m) || !le(r2, k + 2 * n - m)) return false;
    if (!(0 <= k) || !le(pc, k) || !le(r3 - pc * r2, k) || !le(r2 - pc * r1, k)) return false;
    if (!(0 <= k + m - 2 * n) || !le(pc, k + m - 2 * n) || !le(pc * pc, k + m - 2 * n) ||
        !le(two * pc * r3 - pc * pc * r2 - r4, k + m - 2 * n) ||
        !le(two * pc * r2 - r3 - pc * pc * r1, k + m - 2 * n))
        return false;
    if (!(0 <= k + n - m) || !le(r1, k + n - m) || !le(r2, k + n - m) || !le(r3, k + n - m) ||
        !le(r2 * r3 + r5, k + n - m) || !le(r2 * r2 - r1 * r3, k + n - m))
        return false;
    if (!(0 <= k - n) || !le(pc, k - n) || !le(pc * r1 - r2, k - n) || !le(pc * r2 - r3, k - n) ||
        !le(pc * r3 - r4, k - n) || !le(r2 * r4 - r3 * r3 - pc * r2 * r3 - pc * r5, k - n))
        return false;
    if (!le(r1 * r4 - two * r2 * r3 + pc * r2 * r2 - pc * r1 * r3 - r5, k - n)) return false;
    return true;
}

// Specialized list for toral g (d = 0) on the support region.
template <class S>
bool uk_toral_inequalities_impl(long n, long m, long k,
                                const S& r1, const S& r2, const S& r3, const S& r4, const S& r5,
                                const S& two) {
    if (k < n || k < m - n) return false;
    auto le = [](const S& x, long t) { return x.norm_le(t); };
    long a = k + n - m, b = k - n;
    if (!le(r1, a) || !le(r2, a) || !le(r3, a) || !le(r1 * r3 - r2 * r2, a) ||
        !le(r2 * r3 + r5, a))
        return false;
    if (!le(r2, b) || !le(r3, b) || !le(r4, b) || !le(r2 * r4 - r3 * r3, b) ||
        !le(r1 * r4 - two * r2 * r3 - r5, b))
        return false;
    return true;
}

inline bool in_Uk(const UCoord& u, const GroupCoord& g, long k, UkMethod method) {
    long long p = u.r1.prime();
    if (method == UkMethod::matrix) {
        Mat7 m = iota(u, g);
        return gamma_norm_le(m, k);
    }
    PadicScalar pc = g.d * PadicScalar::uniformizer_pow(p, 2 * g.n - g.m);
    PadicScalar two = PadicScalar::from_integer(p, 2);
    return uk_inequalities_impl(pc, g.n, g.m, k, u.r1, u.r2, u.r3, u.r4, u.r5, two);
}

// Lemma "Conditions on m": f in M_{Psi_E} vanishes at g unless
//   N t2^2/t1^3 + D d t2/t1 + d^3 t1^3/t2,
//   D t2/t1 + (3/2) d^2 t1^3/t2,
//   3 d t1^3/t2,
//   t1^3/t2                                   all lie in O.
inline bool support_conditions(const LocalCubic& E, const GroupCoord& g) {
    long long p = E.p;
    auto pw = [&](long v) { return PadicScalar::uniformizer_pow(p, v); };
    PadicScalar D = PadicScalar::from_integer(p, E.D);
    PadicScalar N = PadicScalar::from_integer(p, E.N);
    PadicScalar t2_t1 = pw(g.m - g.n);
    PadicScalar t22_t13 = pw(2 * g.m - 3 * g.n);
    PadicScalar t13_t2 = pw(3 * g.n - g.m);
    const PadicScalar& d = g.d;
    PadicScalar q1 = N * t22_t13 + D * d * t2_t1 + d * d * d * t13_t2;
    PadicScalar q2 = D * t2_t1 + PadicScalar::from_rational(p, Rational(3, 2)) * d * d * t13_t2;
    PadicScalar q3 = PadicScalar::from_integer(p, 3) * d * t13_t2;
    return q1.in_O() && q2.in_O() && q3.in_O() && t13_t2.in_O();
}

// Character-orientation data after the eta-conjugation (may have T != 0).
struct ReducedCharacter {
    Rational T, D, N;
};

// Appendix-B.2 reduction: for d != 0 and |p| > 1, conjugation by
// eta = w_alpha h_beta(bc) (quad) or w_alpha h_beta(abc) (field) yields
// parameters with |p'| = 1/|p|; for |p| <= 1 the input is returned unchanged.
inline std::pair<ReducedCharacter, GroupCoord> reduce_nontoral(const LocalCubic& E,
                                                               const GroupCoord& g) {
    if (g.d.is_exact_zero()) throw std::domain_error("reduce_nontoral: d = 0");
    ReducedCharacter same{Rational(0), Rational(E.D), Rational(E.N)};
    long l = g.l_exponent();
    if (l <= 0) return {same, g};
    long long p = E.p;
    // scale = bc (quad: = D) or abc (field: = N), a unit
    Rational scale = E.N_is_unit() ? Rational(E.N) : Rational(E.D);
    // g' = x_alpha(p') h_alpha(scale t2/(d t1)) h_beta(t2), p' = scale t2/(d t1^2);
    // in (n, m, d) coordinates: n' = m - v(d) - n, m' = m, d' = d / scale.
    GroupCoord out;
    out.n = g.m - g.d.valuation() - g.n;
    out.m = g.m;
    out.d = g.d * PadicScalar::from_rational(p, Rational(1) / scale);
    ReducedCharacter ch;
    if (E.N_is_unit()) {
        // (a,b,c) -> (1/a,1/b,1/c): T' = D/N, D' = T/N = 0, N' = 1/N
        ch.T = Rational(E.D) / Rational(E.N);
        ch.D = Rational(0);
        ch.N = Rational(1) / Rational(E.N);
    } else {
        // (0,b,c) -> (0,1/b,1/c): T' = 0, D' = 1/D, N' = 0
        ch.T = Rational(0);
        ch.D = Rational(1) / Rational(E.D);
        ch.N = Rational(0);
    }
    return {ch, out};
}

// Read the u-coordinates off a matrix of the unipotent shape; the round trip
// extract(iota_unipotent(u)) = u holds exactly.
template <class S>
UCoordT<S> extract_u_coords(const Mat7T<S>& m) {
    long long p = m.a[0][0].prime();
    S two = S::from_integer(p, 2);
    UCoordT<S> u;
    u.r2 = m.a[0][2];
    u.r3 = m.a[0][3];
    u.r1 = m.a[1][2];
    u.r4 = -(two * m.a[0][4]);
    u.r5 = two * m.a[0][5] - u.r2 * u.r3;
    return u;
}

// Form preservation: iota(h)^T J iota(h) = J with J the antidiagonal identity.
// Checked over exact rationals.
inline bool preserves_split_form(const Mat7Q& m) {
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            Rational acc = 0;
            for (int k = 0; k < 7; ++k) acc += m.a[k][i].v * m.a[6 - k][j].v;
            Rational expect = (i + j == 6) ? 1 : 0;
            if (acc != expect) return false;
        }
    return true;
}

inline Rational det7(const Mat7Q& m) {
    std::vector<std::vector<Rational>> b(7, std::vector<Rational>(7));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) b[i][j] = m.a[i][j].v;
    // Gaussian elimination over Q
    Rational det = 1;
    for (int c = 0; c < 7; ++c) {
        int piv = -1;
        for (int r = c; r < 7; ++r)
            if (b[r][c] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(b[piv], b[c]);
            det = -det;
        }
        det *= b[c][c];
        Rational inv = Rational(1) / b[c][c];
        for (int r = c + 1; r < 7; ++r) {
            if (b[r][c] == 0) continue;
            Rational f = b[r][c] * inv;
            for (int cc = c; cc < 7; ++cc) b[r][cc] -= f * b[c][cc];
        }
    }
    return det;
}

}  // namespace g2local
