#pragma once

// Coefficient world of all closed forms: Laurent polynomials in a formal
// square root of q (exponents in (1/2)Z, stored doubled as integers) and a
// formal twist symbol c standing for chi(pi).  c satisfies no relations.

#include "g2local/rational.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace g2local {

// Laurent polynomial in q^{1/2} over Q.  Key = exponent of q^{1/2}
// (so key 2 means q, key -7 means q^{-7/2}).
class HalfQ {
public:
    HalfQ() = default;
    explicit HalfQ(const Rational& c) {
        if (c != 0) terms_[0] = c;
    }
    static HalfQ q_pow_half(long half_exp, const Rational& c = 1) {
        HalfQ h;
        if (c != 0) h.terms_[half_exp] = c;
        return h;
    }
    // q^e for integral e
    static HalfQ q_pow(long e, const Rational& c = 1) { return q_pow_half(2 * e, c); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
    }
    const std::map<long, Rational>& terms() const { return terms_; }

    HalfQ& operator+=(const HalfQ& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    HalfQ& operator-=(const HalfQ& o) {
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend HalfQ operator+(HalfQ a, const HalfQ& b) { return a += b; }
    friend HalfQ operator-(HalfQ a, const HalfQ& b) { return a -= b; }
    friend HalfQ operator-(const HalfQ& a) {
        HalfQ r;
        for (auto& [e, c] : a.terms_) r.terms_[e] = -c;
        return r;
    }
    friend HalfQ operator*(const HalfQ& a, const HalfQ& b) {
        HalfQ r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    friend bool operator==(const HalfQ& a, const HalfQ& b) { return a.terms_ == b.terms_; }

    // Exact division when the divisor is a single term.
    HalfQ div_monomial(long half_exp, const Rational& c) const {
        if (c == 0) throw std::domain_error("HalfQ: division by zero monomial");
        HalfQ r;
        for (auto& [e, k] : terms_) r.terms_[e - half_exp] = k / c;
        return r;
    }

    // Substitute q^{1/2} -> a concrete rational value (tests use sqrt(p), i.e.
    // the caller passes p and we require even exponents, or passes the root).
    Rational eval_sqrt_q(const Rational& sqrt_q) const {
        Rational acc = 0;
        for (auto& [e, c] : terms_) {
            Rational t = c;
            long ee = e;
            Rational b = sqrt_q;
            if (ee < 0) {
                b = Rational(denominator(sqrt_q), numerator(sqrt_q));
                ee = -ee;
            }
            for (long i = 0; i < ee; ++i) t *= b;
            acc += t;
        }
        return acc;
    }
    // Evaluate at q = qval; requires all exponents even.
    Rational eval_q(const Rational& qval) const {
        Rational acc = 0;
        for (auto& [e, c] : terms_) {
            if (e % 2 != 0) throw std::domain_error("HalfQ: odd half-exponent at integral q");
            Rational t = c;
            Rational b = e >= 0 ? qval : Rational(denominator(qval), numerator(qval));
            for (long i = 0; i < (e >= 0 ? e / 2 : -e / 2); ++i) t *= b;
            acc += t;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!first) os << (c >= 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            Rational a = c >= 0 ? c : -c;
            if (e == 0) os << rat_str(a);
            else {
                if (a != 1) os << rat_str(a) << "*";
                if (e % 2 == 0) os << "q^" << (e / 2);
                else os << "q^(" << e << "/2)";
            }
            first = false;
        }
        return os.str();
    }

private:
    void add_term(long e, const Rational& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0) terms_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    std::map<long, Rational> terms_;
};

// Formal power of the twist symbol c = chi(pi); no relations imposed.
struct TwistSymbol {
    long power = 0;
};

// HalfQ (x) TwistSymbol: Laurent polynomial in c with HalfQ coefficients.
class Sym {
public:
    Sym() = default;
    explicit Sym(const Rational& r) {
        HalfQ h(r);
        if (!h.is_zero()) terms_[0] = h;
    }
    explicit Sym(const HalfQ& h) {
        if (!h.is_zero()) terms_[0] = h;
    }
    static Sym monomial(long c_pow, long q_half_exp, const Rational& coef = 1) {
        Sym s;
        HalfQ h = HalfQ::q_pow_half(q_half_exp, coef);
        if (!h.is_zero()) s.terms_[c_pow] = h;
        return s;
    }
    static Sym c_pow(long k) { return monomial(k, 0); }
    static Sym q_pow_half(long h) { return monomial(0, h); }
    static Sym q_pow(long e) { return monomial(0, 2 * e); }
    static Sym one() { return Sym(Rational(1)); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second.is_one();
    }
    bool is_monomial() const {
        return terms_.size() == 1 && terms_.begin()->second.terms().size() == 1;
    }
    const std::map<long, HalfQ>& terms() const { return terms_; }

    Sym& operator+=(const Sym& o) {
        for (auto& [cp, h] : o.terms_) add_part(cp, h);
        return *this;
    }
    Sym& operator-=(const Sym& o) {
        for (auto& [cp, h] : o.terms_) add_part(cp, -h);
        return *this;
    }
    friend Sym operator+(Sym a, const Sym& b) { return a += b; }
    friend Sym operator-(Sym a, const Sym& b) { return a -= b; }
    friend Sym operator-(const Sym& a) {
        Sym r;
        for (auto& [cp, h] : a.terms_) r.terms_[cp] = -h;
        return r;
    }
    friend Sym operator*(const Sym& a, const Sym& b) {
        Sym r;
        for (auto& [ca, ha] : a.terms_)
            for (auto& [cb, hb] : b.terms_) r.add_part(ca + cb, ha * hb);
        return r;
    }
    friend bool operator==(const Sym& a, const Sym& b) { return a.terms_ == b.terms_; }

    // Exact division by a monomial (c^a q^{b/2} * coef).
    Sym div_monomial(long c_pow, long q_half, const Rational& coef) const {
        Sym r;
        for (auto& [cp, h] : terms_) r.terms_[cp - c_pow] = h.div_monomial(q_half, coef);
        return r;
    }
    // If *this is a single monomial, report it.
    std::optional<std::tuple<long, long, Rational>> as_monomial() const {
        if (!is_monomial()) return std::nullopt;
        long cp = terms_.begin()->first;
        auto& h = terms_.begin()->second;
        return std::tuple<long, long, Rational>{cp, h.terms().begin()->first,
                                                h.terms().begin()->second};
    }

    Sym substitute_c(const Rational& cval) const {
        Sym r;
        for (auto& [cp, h] : terms_) {
            Rational scale = 1;
            Rational b = cp >= 0 ? cval : Rational(denominator(cval), numerator(cval));
            for (long i = 0; i < (cp >= 0 ? cp : -cp); ++i) scale *= b;
            HalfQ hs = h * HalfQ(scale);
            r.add_part(0, hs);
        }
        return r;
    }
    // Specialize both symbols: c -> cval, q^{1/2} -> sqrt_q.
    Rational eval(const Rational& cval, const Rational& sqrt_q) const {
        Rational acc = 0;
        for (auto& [cp, h] : terms_) {
            Rational scale = 1;
            Rational b = cp >= 0 ? cval : Rational(denominator(cval), numerator(cval));
            for (long i = 0; i < (cp >= 0 ? cp : -cp); ++i) scale *= b;
            acc += scale * h.eval_sqrt_q(sqrt_q);
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [cp, h] : terms_) {
            if (!first) os << " + ";
            if (cp == 0) os << "(" << h.str() << ")";
            else os << "c^" << cp << "*(" << h.str() << ")";
            first = false;
        }
        return os.str();
    }

private:
    void add_part(long cp, const HalfQ& h) {
        auto it = terms_.find(cp);
        if (it == terms_.end()) {
            if (!h.is_zero()) terms_[cp] = h;
        } else {
            it->second += h;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    std::map<long, HalfQ> terms_;
};

}  // namespace g2local
