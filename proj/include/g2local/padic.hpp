#pragma once

// Truncated p-adic scalars.  A value is either exact zero, a unit times a
// power of p with the unit known modulo p^prec, or "small": known only to lie
// in p^bound * Z_p after a cancellation exhausted the tracked digits.
// Comparisons that exceed available precision throw; they never guess.

#include "g2local/rational.hpp"

#include <limits>
#include <stdexcept>

namespace g2local {

class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PadicScalar {
public:
    static constexpr int kDefaultPrec = 24;

    PadicScalar() : p_(0), state_(State::zero) {}

    static PadicScalar zero(long long p) {
        PadicScalar x;
        x.p_ = p;
        x.state_ = State::zero;
        return x;
    }
    // value = u * p^v with u an integer not divisible by p
    static PadicScalar unit_times_pow(long long p, const Int& u, long v, int prec = kDefaultPrec) {
        if (u % p == 0) throw std::domain_error("PadicScalar: unit divisible by p");
        PadicScalar x;
        x.p_ = p;
        x.state_ = State::known;
        x.v_ = v;
        x.prec_ = prec;
        x.u_ = mod_pow(u, p, prec);
        return x;
    }
    static PadicScalar from_integer(long long p, const Int& n, int prec = kDefaultPrec) {
        if (n == 0) return zero(p);
        Int m = n;
        long v = 0;
        while (m % p == 0) { m /= p; ++v; }
        return unit_times_pow(p, m, v, prec);
    }
    static PadicScalar from_rational(long long p, const Rational& r, int prec = kDefaultPrec) {
        if (r == 0) return zero(p);
        Int n = numerator(r), d = denominator(r);
        long v = 0;
        while (n % p == 0) { n /= p; ++v; }
        while (d % p == 0) { d /= p; --v; }
        Int dinv = mod_inverse(mod_pow(d, p, prec), p, prec);
        return unit_times_pow(p, n * dinv, v, prec);
    }
    static PadicScalar uniformizer_pow(long long p, long v, int prec = kDefaultPrec) {
        return unit_times_pow(p, 1, v, prec);
    }

    long long prime() const { return p_; }
    bool is_exact_zero() const { return state_ == State::zero; }
    bool is_known() const { return state_ == State::known; }

    // valuation; throws if only a lower bound is known
    long valuation() const {
        if (state_ == State::zero)
            throw precision_error("PadicScalar: valuation of exact zero is +infinity");
        if (state_ == State::small)
            throw precision_error("PadicScalar: valuation exceeds tracked precision");
        return v_;
    }
    // |x| <= q^t  i.e.  v(x) >= -t ?
    bool norm_le(long t) const {
        switch (state_) {
            case State::zero: return true;
            case State::known: return v_ >= -t;
            case State::small:
                if (v_ >= -t) return true;
                throw precision_error("PadicScalar: norm comparison beyond precision");
        }
        return false;
    }
    bool norm_lt(long t) const { return norm_le(t - 1); }
    bool norm_eq(long t) const {
        switch (state_) {
            case State::zero: return false;
            case State::known: return v_ == -t;
            case State::small:
                if (v_ > -t) return false;
                throw precision_error("PadicScalar: norm comparison beyond precision");
        }
        return false;
    }
    bool in_O() const { return norm_le(0); }

    // u in [0, p^A) with x = u p^{-A} (mod O); requires v(x) >= -A.
    // This is the numerator fed to psi at level A.
    Int psi_numerator(int A) const {
        if (state_ == State::zero) return 0;
        if (state_ == State::small) {
            if (v_ >= 0) return 0;
            throw precision_error("PadicScalar: psi argument beyond precision");
        }
        if (v_ >= 0) return 0;
        long need = -v_;
        if (need > A) throw std::domain_error("PadicScalar: valuation below psi level");
        if (prec_ < need) throw precision_error("PadicScalar: insufficient digits for psi");
        Int r = u_ % pow_int(p_, need);
        return r * pow_int(p_, A - need);
    }

    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        a.check_same(b);
        if (a.state_ == State::zero || b.state_ == State::zero) return zero(a.p_);
        if (a.state_ == State::small || b.state_ == State::small) {
            PadicScalar r;
            r.p_ = a.p_;
            r.state_ = State::small;
            r.v_ = a.low_bound() + b.low_bound();
            return r;
        }
        int prec = std::min(a.prec_, b.prec_);
        PadicScalar r;
        r.p_ = a.p_;
        r.state_ = State::known;
        r.v_ = a.v_ + b.v_;
        r.prec_ = prec;
        r.u_ = (a.u_ * b.u_) % pow_int(a.p_, prec);
        return r;
    }
    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        a.check_same(b);
        if (a.state_ == State::zero) return b;
        if (b.state_ == State::zero) return a;
        long va = a.low_bound(), vb = b.low_bound();
        if (a.state_ == State::small || b.state_ == State::small) {
            if (a.state_ == State::known && a.v_ < vb) {
                // a dominates: digits of a above b's bound survive
                int usable = static_cast<int>(std::min<long>(a.prec_, vb - a.v_));
                return truncated_known(a, usable);
            }
            if (b.state_ == State::known && b.v_ < va) {
                int usable = static_cast<int>(std::min<long>(b.prec_, va - b.v_));
                return truncated_known(b, usable);
            }
            PadicScalar r;
            r.p_ = a.p_;
            r.state_ = State::small;
            r.v_ = std::min(va, vb);
            return r;
        }
        // both known
        long v = std::min(a.v_, b.v_);
        int prec = static_cast<int>(std::min<long>(a.prec_ + a.v_ - v, b.prec_ + b.v_ - v));
        Int pl = pow_int(a.p_, prec);
        Int s = (a.u_ * pow_int(a.p_, a.v_ - v) + b.u_ * pow_int(a.p_, b.v_ - v)) % pl;
        s = (s + pl) % pl;
        if (s == 0) {
            PadicScalar r;
            r.p_ = a.p_;
            r.state_ = State::small;
            r.v_ = v + prec;
            return r;
        }
        long shift = 0;
        while (s % a.p_ == 0) { s /= a.p_; ++shift; }
        PadicScalar r;
        r.p_ = a.p_;
        r.state_ = State::known;
        r.v_ = v + shift;
        r.prec_ = prec - static_cast<int>(shift);
        r.u_ = s;
        return r;
    }
    friend PadicScalar operator-(const PadicScalar& a) {
        if (a.state_ != State::known) return a;
        PadicScalar r = a;
        Int pl = pow_int(a.p_, a.prec_);
        r.u_ = (pl - a.u_ % pl) % pl;
        return r;
    }
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }
    PadicScalar inverse() const {
        if (state_ == State::zero) throw std::domain_error("PadicScalar: inverse of zero");
        if (state_ == State::small) throw precision_error("PadicScalar: inverse of small");
        PadicScalar r = *this;
        r.v_ = -v_;
        r.u_ = mod_inverse(u_, p_, prec_);
        return r;
    }
    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        return a * b.inverse();
    }

    // lower bound on the valuation (huge for exact zero)
    long valuation_lower_bound() const {
        if (state_ == State::zero) return std::numeric_limits<long>::max() / 4;
        return v_;
    }
    // true iff the two values agree on every jointly tracked digit; a known
    // nonzero difference returns false
    bool equals(const PadicScalar& o) const {
        PadicScalar d = *this - o;
        return d.state_ != State::known;
    }

    Rational to_rational() const {
        // exact only when the tracked digits are the full value; used in tests
        if (state_ == State::zero) return 0;
        if (state_ == State::small) throw precision_error("PadicScalar: small has no value");
        return Rational(u_) * int_pow(Int(p_), v_);
    }

private:
    enum class State { zero, known, small };

    long low_bound() const {
        if (state_ == State::zero) return std::numeric_limits<long>::max() / 4;
        return state_ == State::known ? v_ : v_;
    }
    void check_same(const PadicScalar& o) const {
        if (p_ != o.p_ && p_ != 0 && o.p_ != 0)
            throw std::domain_error("PadicScalar: mixed primes");
    }
    static PadicScalar truncated_known(const PadicScalar& a, int usable) {
        if (usable <= 0) {
            PadicScalar r;
            r.p_ = a.p_;
            r.state_ = State::small;
            r.v_ = a.v_;
            return r;
        }
        PadicScalar r = a;
        r.prec_ = usable;
        r.u_ = a.u_ % pow_int(a.p_, usable);
        return r;
    }
    static Int pow_int(long long p, long e) {
        Int r = 1;
        for (long i = 0; i < e; ++i) r *= p;
        return r;
    }
    static Int mod_pow(const Int& u, long long p, int prec) {
        Int pl = pow_int(p, prec);
        Int r = u % pl;
        return (r + pl) % pl;
    }
    static Int mod_inverse(const Int& u, long long p, int prec) {
        // Hensel-lift the inverse mod p
        Int pl = pow_int(p, prec);
        Int a = u % pl, x = 1;
        // inverse mod p by Fermat
        long long ap = static_cast<long long>(a % p);
        long long inv = 1, base = ap % p, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        x = inv;
        int k = 1;
        while (k < prec) {
            x = (x * (2 - a * x % pl)) % pl;
            x = (x + pl) % pl;
            k *= 2;
        }
        return x % pl;
    }

    long long p_;
    State state_;
    long v_ = 0;   // valuation (known) or lower bound (small)
    int prec_ = 0; // unit digits tracked
    Int u_;        // unit part mod p^prec_
};

}  // namespace g2local
