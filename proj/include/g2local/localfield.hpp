#pragma once

// Desk-scale model of F = Q_p, p >= 5: the additive character psi of
// conductor O, closed-form shell integrals, and the local etale cubic
// algebra descriptor selecting the character Psi_E.

#include "g2local/cyclo.hpp"
#include "g2local/etype.hpp"
#include "g2local/halfq.hpp"
#include "g2local/padic.hpp"

#include <array>
#include <optional>
#include <stdexcept>

namespace g2local {

// psi(x) = zeta_{p^A}^{u} where x = u p^{-A} (mod O); psi(O) = 1.
// ambient_level, when given, must be >= the level needed by x.
inline CycloValue psi(const PadicScalar& x, int ambient_level = -1) {
    int need = 0;
    if (!x.is_exact_zero()) {
        // level needed = max(0, -v(x)); for "small" values v >= 0 is required
        try {
            long v = x.valuation();
            need = v < 0 ? static_cast<int>(-v) : 0;
        } catch (const precision_error&) {
            if (!x.norm_le(0)) throw;
            need = 0;
        }
    }
    int A = ambient_level < 0 ? need : ambient_level;
    if (A < need) throw std::domain_error("psi: ambient level too small");
    return CycloValue::root_power(x.prime(), A, x.psi_numerator(A));
}

// Closed form for int_{|r|=q^j} psi(r) dr: 0 for j>1, -1 for j=1,
// q^j(1-q^{-1}) for j<=0.
inline HalfQ shell_integral_closed(long j) {
    if (j > 1) return HalfQ();
    if (j == 1) return HalfQ(Rational(-1));
    return HalfQ::q_pow(j) - HalfQ::q_pow(j - 1);
}

// Factorization type of x^3 + D x - N over F_p; rejects ramified input
// (repeated roots).  p >= 5.
inline LocalCubicType classify_cubic(long long D, long long N, long long p) {
    if (p < 5) throw std::domain_error("classify_cubic: p must be >= 5");
    int roots = 0;
    for (long long x = 0; x < p; ++x) {
        long long fx = ((x * x % p * x % p + D % p * x % p - N % p) % p + p) % p;
        if (fx == 0) {
            // repeated root iff derivative vanishes too: 3x^2 + D = 0
            long long dfx = ((3 * x % p * x % p + D % p) % p + p) % p;
            if (dfx == 0) throw std::domain_error("classify_cubic: repeated root (ramified)");
            ++roots;
        }
    }
    if (roots == 3) return LocalCubicType::split;
    if (roots == 1) return LocalCubicType::quad;
    if (roots == 0) return LocalCubicType::cubic;
    throw std::domain_error("classify_cubic: impossible root count");
}

// Local etale cubic algebra descriptor under the CT normalization (T = 0).
// Place conditions: D and N each zero or a unit; N = 0 forces D != 0.
struct LocalCubic {
    LocalCubicType etype;
    long long D = 0;
    long long N = 0;
    long long p = 5;

    static LocalCubic make(long long D, long long N, long long p) {
        if (p < 5) throw std::domain_error("LocalCubic: p must be >= 5");
        auto unit_or_zero = [&](long long x) { return x == 0 || x % p != 0; };
        if (!unit_or_zero(D) || !unit_or_zero(N))
            throw std::domain_error("LocalCubic: D, N must be zero or units");
        if (N == 0 && D == 0) throw std::domain_error("LocalCubic: N = 0 forces D != 0");
        LocalCubic e;
        e.etype = classify_cubic(D, N, p);
        e.D = D;
        e.N = N;
        e.p = p;
        return e;
    }

    // Standard representatives used by the oracles: quad takes N = 0 and D a
    // unit with -D a non-residue; cubic searches for irreducible x^3 + Dx - N.
    static LocalCubic standard(LocalCubicType t, long long p) {
        if (t == LocalCubicType::split) {
            for (long long D = p - 1; D >= 1; --D)
                for (long long N = 0; N < p; ++N) {
                    if (D == 0 && N == 0) continue;
                    try {
                        LocalCubic e = make(D == p - 1 ? -1 : D, N, p);
                        if (e.etype == LocalCubicType::split) return e;
                    } catch (const std::domain_error&) {}
                }
            throw std::domain_error("LocalCubic: no split representative");
        }
        if (t == LocalCubicType::quad) {
            for (long long D = 1; D < p; ++D) {
                try {
                    LocalCubic e = make(D, 0, p);
                    if (e.etype == LocalCubicType::quad) return e;
                } catch (const std::domain_error&) {}
            }
            throw std::domain_error("LocalCubic: no quad representative");
        }
        for (long long D = 0; D < p; ++D)
            for (long long N = 1; N < p; ++N) {
                try {
                    LocalCubic e = make(D, N, p);
                    if (e.etype == LocalCubicType::cubic) return e;
                } catch (const std::domain_error&) {}
            }
        throw std::domain_error("LocalCubic: no cubic representative");
    }

    bool N_is_unit() const { return N != 0; }
};

}  // namespace g2local
