#pragma once

// Dual-side objects: Satake torus parameters, the 7 weights of the standard
// representation, the degree-7 local L-factor, Sym^k traces via Newton's
// identities, and the Poincare generating-series identity.

#include "g2local/ratfunc.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace g2local {

// Laurent polynomials in two formal torus variables t1, t2 over Q; used for
// the formal-torus version of the generating identity.
class Laurent2 {
public:
    Laurent2() = default;
    explicit Laurent2(const Rational& c) {
        if (c != 0) terms_[{0, 0}] = c;
    }
    static Laurent2 monomial(long e1, long e2, const Rational& c = 1) {
        Laurent2 r;
        if (c != 0) r.terms_[{e1, e2}] = c;
        return r;
    }
    bool is_zero() const { return terms_.empty(); }
    friend Laurent2 operator+(const Laurent2& a, const Laurent2& b) {
        Laurent2 r = a;
        for (auto& [e, c] : b.terms_) r.add(e.first, e.second, c);
        return r;
    }
    friend Laurent2 operator-(const Laurent2& a, const Laurent2& b) {
        Laurent2 r = a;
        for (auto& [e, c] : b.terms_) r.add(e.first, e.second, -c);
        return r;
    }
    friend Laurent2 operator*(const Laurent2& a, const Laurent2& b) {
        Laurent2 r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_)
                r.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return r;
    }
    friend bool operator==(const Laurent2& a, const Laurent2& b) { return a.terms_ == b.terms_; }
    Laurent2 scaled(const Rational& s) const {
        Laurent2 r;
        if (s == 0) return r;
        for (auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }

private:
    void add(long e1, long e2, const Rational& c) {
        auto key = std::make_pair(e1, e2);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            if (c != 0) terms_[key] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    std::map<std::pair<long, long>, Rational> terms_;
};

template <class S>
struct SatakeTorusT {
    S t1, t2;
};
using SatakeTorus = SatakeTorusT<Rational>;
using SatakeTorusFormal = SatakeTorusT<Laurent2>;

template <class S>
using Weights7T = std::array<S, 7>;
using Weights7 = Weights7T<Rational>;

namespace detail {
inline Rational sat_inv(const Rational& x) {
    if (x == 0) throw std::domain_error("satake_weights: torus value must be invertible");
    return Rational(1) / x;
}
inline Rational sat_one() { return Rational(1); }
inline Laurent2 sat_one_l() { return Laurent2(Rational(1)); }
}  // namespace detail

// The weights of st on the torus: [t1, t2/t1, t1^2/t2, 1, t2/t1^2, t1/t2, 1/t1]
// (the diagonal of the printed embedding).
inline Weights7 satake_weights(const SatakeTorus& t) {
    Rational t1 = t.t1, t2 = t.t2;
    return {t1,
            t2 / t1,
            t1 * t1 / t2,
            Rational(1),
            t2 / (t1 * t1),
            t1 / t2,
            Rational(1) / t1};
}
// formal weights as Laurent monomials
inline Weights7T<Laurent2> satake_weights_formal() {
    return {Laurent2::monomial(1, 0),  Laurent2::monomial(-1, 1), Laurent2::monomial(2, -1),
            Laurent2(Rational(1)),     Laurent2::monomial(-2, 1), Laurent2::monomial(1, -1),
            Laurent2::monomial(-1, 0)};
}

// L(w, twist) = 1 / prod_i (1 - w_i c^{twist} X).
inline RatFuncX lfactor(const Weights7& w, long twist_power) {
    PolyX den = PolyX::one();
    for (const Rational& wi : w) {
        PolyX f = PolyX::one() - PolyX::monomial(Sym::monomial(twist_power, 0, wi), 1);
        den = den * f;
    }
    return RatFuncX(PolyX::one(), den);
}
// denominator only, as a polynomial (for structural tests)
inline PolyX lfactor_denominator(const Weights7& w, long twist_power) {
    PolyX den = PolyX::one();
    for (const Rational& wi : w)
        den = den * (PolyX::one() - PolyX::monomial(Sym::monomial(twist_power, 0, wi), 1));
    return den;
}

// Complete homogeneous symmetric polynomial h_k of the weights via Newton's
// identities: k h_k = sum_{i=1..k} p_i h_{k-i}, p_i = sum_j w_j^i.
template <class S>
std::vector<S> sym_traces(const Weights7T<S>& w, long k_max, const S& one) {
    std::vector<S> pow(7, one);
    std::vector<S> p(k_max + 1, one);  // p[0] unused
    std::vector<S> h(k_max + 1, one);
    for (long i = 1; i <= k_max; ++i) {
        S acc = one - one;
        for (int j = 0; j < 7; ++j) {
            pow[j] = pow[j] * w[j];
            acc = acc + pow[j];
        }
        p[i] = acc;
    }
    for (long k = 1; k <= k_max; ++k) {
        S acc = one - one;
        for (long i = 1; i <= k; ++i) acc = acc + p[i] * h[k - i];
        h[k] = acc.scaled(Rational(1, k));
    }
    return h;
}

namespace detail {
struct QW {
    Rational v;
    friend QW operator+(const QW& a, const QW& b) { return {a.v + b.v}; }
    friend QW operator-(const QW& a, const QW& b) { return {a.v - b.v}; }
    friend QW operator*(const QW& a, const QW& b) { return {a.v * b.v}; }
    QW scaled(const Rational& s) const { return {v * s}; }
};
}  // namespace detail

inline Rational sym_trace(const Weights7& w, long k) {
    if (k < 0) throw std::domain_error("sym_trace: k must be >= 0");
    Weights7T<detail::QW> ww;
    for (int i = 0; i < 7; ++i) ww[i] = {w[i]};
    auto h = sym_traces(ww, k, detail::QW{Rational(1)});
    return h[k].v;
}

// Poincare identity: series_expand(L(w), K) has X^k coefficient
// Tr(Sym^k)(t) c^k for all k <= K.
inline bool check_generating_identity(const SatakeTorus& t, long order) {
    Weights7 w = satake_weights(t);
    SeriesX s = lfactor(w, 1).expand(order);
    for (long k = 0; k <= order; ++k) {
        Sym expect = Sym::monomial(k, 0, sym_trace(w, k));
        if (!(s.coef(k) == expect)) return false;
    }
    return true;
}

// Formal-torus version over Laurent2 (chi dropped: compare plain coefficients).
// Expands 1/prod(1 - w_i X) by power-series inversion and compares with h_k.
inline bool check_generating_identity_formal(long order) {
    auto w = satake_weights_formal();
    // denominator coefficients e_j with signs: prod (1 - w_i X)
    std::vector<Laurent2> den(1, Laurent2(Rational(1)));
    for (auto& wi : w) {
        std::vector<Laurent2> next(den.size() + 1);
        for (size_t j = 0; j < den.size(); ++j) {
            next[j] = next[j] + den[j];
            next[j + 1] = next[j + 1] - den[j] * wi;
        }
        den = std::move(next);
    }
    // invert the series: sum a_k X^k with a_0 = 1
    std::vector<Laurent2> a(order + 1);
    a[0] = Laurent2(Rational(1));
    for (long k = 1; k <= order; ++k) {
        Laurent2 acc;
        for (long j = 1; j <= k && j < static_cast<long>(den.size()); ++j)
            acc = acc + den[j] * a[k - j];
        a[k] = Laurent2() - acc;
    }
    auto h = sym_traces(w, order, Laurent2(Rational(1)));
    for (long k = 0; k <= order; ++k)
        if (!(a[k] == h[k])) return false;
    return true;
}

}  // namespace g2local
