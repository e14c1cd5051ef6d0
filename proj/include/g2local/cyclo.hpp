#pragma once

// Exact elements of Q(zeta_{p^A}), represented on the power basis
// 1, zeta, ..., zeta^{phi(p^A)-1} after reduction modulo the p^A-th
// cyclotomic polynomial.  A value is rational iff only the constant
// coordinate is nonzero (the basis representation is unique).

#include "g2local/rational.hpp"

#include <stdexcept>
#include <vector>

namespace g2local {

class CycloValue {
public:
    CycloValue(long long p, int level) : p_(p), level_(level) {
        n_ = 1;
        for (int i = 0; i < level_; ++i) n_ *= p_;
        phi_ = level_ == 0 ? 1 : static_cast<long>(n_ - n_ / p_);
        coef_.assign(phi_, Rational(0));
    }
    static CycloValue zero(long long p, int level) { return CycloValue(p, level); }
    static CycloValue from_rational(long long p, int level, const Rational& r) {
        CycloValue v(p, level);
        v.coef_[0] = r;
        return v;
    }
    // zeta_{p^A}^e
    static CycloValue root_power(long long p, int level, const Int& e, const Rational& c = 1) {
        CycloValue v(p, level);
        v.add_root_power(e, c);
        return v;
    }

    long long prime() const { return p_; }
    int level() const { return level_; }

    void add_root_power(Int e, const Rational& c) {
        if (c == 0) return;
        e %= n_;
        if (e < 0) e += n_;
        long ee = static_cast<long>(e);
        if (level_ == 0 || ee < phi_) {
            coef_[level_ == 0 ? 0 : ee] += c;
            return;
        }
        // zeta^{(p-1)p^{A-1}+r} = -sum_{i=0}^{p-2} zeta^{r+i p^{A-1}}
        long pa1 = static_cast<long>(n_ / p_);
        long r = ee - static_cast<long>(phi_);
        for (long i = 0; i <= p_ - 2; ++i) coef_[r + i * pa1] -= c;
    }

    bool is_zero() const {
        for (auto& c : coef_) if (c != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < coef_.size(); ++i)
            if (coef_[i] != 0) return false;
        return true;
    }
    Rational rational_value() const {
        if (!is_rational()) throw std::domain_error("CycloValue: not rational");
        return coef_[0];
    }
    const std::vector<Rational>& coefs() const { return coef_; }

    CycloValue& operator+=(const CycloValue& o) {
        check(o);
        for (size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
        return *this;
    }
    friend CycloValue operator+(CycloValue a, const CycloValue& b) { return a += b; }
    friend CycloValue operator-(CycloValue a, const CycloValue& b) {
        a.check(b);
        for (size_t i = 0; i < a.coef_.size(); ++i) a.coef_[i] -= b.coef_[i];
        return a;
    }
    friend CycloValue operator*(const CycloValue& a, const CycloValue& b) {
        a.check(b);
        CycloValue r(a.p_, a.level_);
        for (long i = 0; i < a.phi_; ++i) {
            if (a.coef_[i] == 0) continue;
            for (long j = 0; j < b.phi_; ++j) {
                if (b.coef_[j] == 0) continue;
                r.add_root_power(Int(i) + Int(j), a.coef_[i] * b.coef_[j]);
            }
        }
        return r;
    }
    CycloValue scaled(const Rational& s) const {
        CycloValue r = *this;
        for (auto& c : r.coef_) c *= s;
        return r;
    }
    friend bool operator==(const CycloValue& a, const CycloValue& b) {
        a.check(b);
        return a.coef_ == b.coef_;
    }

    // Embed into a higher level (zeta_{p^A} = zeta_{p^B}^{p^{B-A}}).
    CycloValue lifted(int new_level) const {
        if (new_level == level_) return *this;
        if (new_level < level_) throw std::domain_error("CycloValue: cannot lower level");
        CycloValue r(p_, new_level);
        Int scale = 1;
        for (int i = 0; i < new_level - level_; ++i) scale *= p_;
        for (long i = 0; i < phi_; ++i)
            if (coef_[i] != 0) r.add_root_power(Int(i) * scale, coef_[i]);
        return r;
    }

private:
    void check(const CycloValue& o) const {
        if (p_ != o.p_ || level_ != o.level_)
            throw std::domain_error("CycloValue: mixed levels");
    }
    long long p_;
    int level_;
    Int n_;      // p^level
    long phi_;   // phi(p^level), or 1 at level 0
    std::vector<Rational> coef_;
};

}  // namespace g2local
