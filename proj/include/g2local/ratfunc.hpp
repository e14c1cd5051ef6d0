#pragma once

// Rational functions in X = q^{-s} with Sym coefficients, plus formal power
// series expansion and the local Euler-factor constructors.

#include "g2local/etype.hpp"
#include "g2local/halfq.hpp"

#include <stdexcept>
#include <vector>

namespace g2local {

// Dense polynomial in X over Sym.
class PolyX {
public:
    PolyX() = default;
    explicit PolyX(const Sym& c) {
        if (!c.is_zero()) coef_.push_back(c);
    }
    static PolyX monomial(const Sym& c, size_t deg) {
        PolyX p;
        if (c.is_zero()) return p;
        p.coef_.assign(deg + 1, Sym());
        p.coef_[deg] = c;
        return p;
    }
    static PolyX one() { return PolyX(Sym::one()); }

    bool is_zero() const { return coef_.empty(); }
    long degree() const { return static_cast<long>(coef_.size()) - 1; }
    const Sym& coef(size_t k) const {
        static const Sym zero;
        return k < coef_.size() ? coef_[k] : zero;
    }
    const std::vector<Sym>& coefs() const { return coef_; }
    void set_coef(size_t k, const Sym& c) {
        if (k >= coef_.size()) coef_.resize(k + 1);
        coef_[k] = c;
        trim();
    }

    friend PolyX operator+(const PolyX& a, const PolyX& b) {
        PolyX r;
        r.coef_.resize(std::max(a.coef_.size(), b.coef_.size()));
        for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] = a.coef(i) + b.coef(i);
        r.trim();
        return r;
    }
    friend PolyX operator-(const PolyX& a, const PolyX& b) {
        PolyX r;
        r.coef_.resize(std::max(a.coef_.size(), b.coef_.size()));
        for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] = a.coef(i) - b.coef(i);
        r.trim();
        return r;
    }
    friend PolyX operator*(const PolyX& a, const PolyX& b) {
        PolyX r;
        if (a.is_zero() || b.is_zero()) return r;
        r.coef_.assign(a.coef_.size() + b.coef_.size() - 1, Sym());
        for (size_t i = 0; i < a.coef_.size(); ++i) {
            if (a.coef_[i].is_zero()) continue;
            for (size_t j = 0; j < b.coef_.size(); ++j)
                r.coef_[i + j] += a.coef_[i] * b.coef_[j];
        }
        r.trim();
        return r;
    }
    friend bool operator==(const PolyX& a, const PolyX& b) { return a.coef_ == b.coef_; }

    PolyX scaled(const Sym& s) const {
        PolyX r;
        if (s.is_zero()) return r;
        r.coef_ = coef_;
        for (auto& c : r.coef_) c = c * s;
        r.trim();
        return r;
    }
    // Divide every coefficient by a monomial.
    PolyX div_monomial(long c_pow, long q_half, const Rational& coef) const {
        PolyX r = *this;
        for (auto& c : r.coef_) c = c.div_monomial(c_pow, q_half, coef);
        return r;
    }
    long low_degree() const {  // smallest k with nonzero coefficient; -1 if zero
        for (size_t i = 0; i < coef_.size(); ++i)
            if (!coef_[i].is_zero()) return static_cast<long>(i);
        return -1;
    }
    PolyX shift_down(long k) const {  // divide by X^k (requires divisibility)
        PolyX r;
        if (is_zero()) return r;
        r.coef_.assign(coef_.begin() + k, coef_.end());
        return r;
    }
    PolyX substitute_c(const Rational& cval) const {
        PolyX r = *this;
        for (auto& c : r.coef_) c = c.substitute_c(cval);
        r.trim();
        return r;
    }

private:
    void trim() {
        while (!coef_.empty() && coef_.back().is_zero()) coef_.pop_back();
    }
    std::vector<Sym> coef_;
};

namespace detail {

// Element of Frac(Sym), used only transiently inside gcd reduction.
struct SymFrac {
    Sym num, den;  // den nonzero
    SymFrac() : num(), den(Sym::one()) {}
    explicit SymFrac(const Sym& n) : num(n), den(Sym::one()) {}
    SymFrac(const Sym& n, const Sym& d) : num(n), den(d) { normalize(); }
    bool is_zero() const { return num.is_zero(); }
    void normalize() {
        if (num.is_zero()) { den = Sym::one(); return; }
        if (auto m = den.as_monomial()) {
            auto [cp, qh, co] = *m;
            num = num.div_monomial(cp, qh, co);
            den = Sym::one();
        }
    }
    friend SymFrac operator*(const SymFrac& a, const SymFrac& b) {
        return SymFrac(a.num * b.num, a.den * b.den);
    }
    friend SymFrac operator-(const SymFrac& a, const SymFrac& b) {
        return SymFrac(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    SymFrac inv() const {
        if (num.is_zero()) throw std::domain_error("SymFrac: inverse of zero");
        return SymFrac(den, num);
    }
};

using FracPoly = std::vector<SymFrac>;  // dense, coefficient of X^k at index k

inline void frac_trim(FracPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline FracPoly to_frac(const PolyX& p) {
    FracPoly r;
    for (long k = 0; k <= p.degree(); ++k) r.push_back(SymFrac(p.coef(k)));
    frac_trim(r);
    return r;
}

// Remainder of a by b over Frac(Sym).
inline FracPoly frac_rem(FracPoly a, const FracPoly& b) {
    SymFrac lead_inv = b.back().inv();
    while (a.size() >= b.size()) {
        SymFrac f = a.back() * lead_inv;
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] = a[off + i] - f * b[i];
        a.pop_back();  // leading term cancels by construction
        frac_trim(a);
        if (a.empty()) break;
    }
    return a;
}

// Monic gcd of two PolyX over Frac(Sym), returned with Sym coefficients by
// clearing denominators (unique up to a Sym unit; callers only divide by it).
inline PolyX polyx_gcd(const PolyX& a, const PolyX& b) {
    FracPoly x = to_frac(a), y = to_frac(b);
    while (!y.empty()) {
        FracPoly r = frac_rem(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    // clear denominators
    PolyX g;
    for (size_t k = 0; k < x.size(); ++k) {
        Sym num = x[k].num;
        for (size_t j = 0; j < x.size(); ++j)
            if (j != k) num = num * x[j].den;
        g.set_coef(k, num);
    }
    return g;
}

// Pseudo-division: returns (q, e) with a * lead(g)^e = q * g exactly; throws
// if the remainder is nonzero.  Keeps everything inside Sym[X].
inline std::pair<PolyX, int> polyx_pseudo_quotient(const PolyX& a, const PolyX& g) {
    if (g.is_zero()) throw std::domain_error("PolyX: division by zero");
    long dg = g.degree();
    Sym lead = g.coef(dg);
    PolyX q;
    PolyX r = a;
    int e = 0;
    while (!r.is_zero() && r.degree() >= dg) {
        long shift = r.degree() - dg;
        Sym top = r.coef(r.degree());
        q = q.scaled(lead) + PolyX::monomial(top, shift);
        r = r.scaled(lead) - PolyX::monomial(top, shift) * g;
        ++e;
        if (e > static_cast<int>(a.degree()) + 2)
            throw std::logic_error("PolyX: pseudo-division ran away");
    }
    if (!r.is_zero()) throw std::domain_error("PolyX: inexact division");
    return {q, e};
}

}  // namespace detail

class SeriesX;

// Exact rational function num/den in X over Sym.  Arithmetic leaves results
// unreduced (equality is exact by cross-multiplication regardless); reduced()
// produces the canonical form: num, den gcd-reduced, common X-power stripped,
// and den's lowest monomial normalized to 1 (lex-leading term as tie-break).
class RatFuncX {
public:
    RatFuncX() : num_(), den_(PolyX::one()) {}
    explicit RatFuncX(const Sym& c) : num_(PolyX(c)), den_(PolyX::one()) {}
    explicit RatFuncX(const Rational& r) : num_(PolyX(Sym(r))), den_(PolyX::one()) {}
    RatFuncX(const PolyX& num, const PolyX& den) : num_(num), den_(den) {
        if (den_.is_zero()) throw std::domain_error("RatFuncX: zero denominator");
        if (num_.is_zero()) den_ = PolyX::one();
    }
    RatFuncX reduced() const {
        RatFuncX r = *this;
        r.canonicalize();
        return r;
    }
    static RatFuncX zero() { return RatFuncX(); }
    static RatFuncX one() { return RatFuncX(Sym::one()); }
    // c^{c_pow} q^{q_half/2} X^{x_pow}  (x_pow may be negative)
    static RatFuncX monomial(long c_pow, long q_half, long x_pow, const Rational& coef = 1) {
        Sym s = Sym::monomial(c_pow, q_half, coef);
        if (x_pow >= 0) return RatFuncX(PolyX::monomial(s, x_pow), PolyX::one());
        return RatFuncX(PolyX(s), PolyX::monomial(Sym::one(), -x_pow));
    }

    const PolyX& num() const { return num_; }
    const PolyX& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFuncX operator+(const RatFuncX& a, const RatFuncX& b) {
        return RatFuncX(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFuncX operator-(const RatFuncX& a, const RatFuncX& b) {
        return RatFuncX(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFuncX operator*(const RatFuncX& a, const RatFuncX& b) {
        return RatFuncX(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFuncX operator/(const RatFuncX& a, const RatFuncX& b) {
        if (b.is_zero()) throw std::domain_error("RatFuncX: division by zero");
        return RatFuncX(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFuncX operator-() const {
        RatFuncX r = *this;
        r.num_ = PolyX() - r.num_;
        return r;
    }

    // Exact equality by cross-multiplication (independent of canonical form).
    friend bool operator==(const RatFuncX& a, const RatFuncX& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    RatFuncX substitute_c(const Rational& cval) const {
        return RatFuncX(num_.substitute_c(cval), den_.substitute_c(cval));
    }
    // Specialize c and q^{1/2} to concrete rationals.
    Rational eval(const Rational& cval, const Rational& sqrt_q, const Rational& Xval) const {
        auto eval_poly = [&](const PolyX& p) {
            Rational acc = 0, xp = 1;
            for (long k = 0; k <= p.degree(); ++k) {
                acc += p.coef(k).eval(cval, sqrt_q) * xp;
                xp *= Xval;
            }
            return acc;
        };
        Rational d = eval_poly(den_);
        if (d == 0) throw std::domain_error("RatFuncX: pole at evaluation point");
        return eval_poly(num_) / d;
    }

    SeriesX expand(long order) const;  // defined after SeriesX

    std::string str() const {
        if (num_.is_zero()) return "0";
        RatFuncX r = reduced();
        auto poly_str = [](const PolyX& p) {
            if (p.is_zero()) return std::string("0");
            std::ostringstream os;
            bool first = true;
            for (long k = 0; k <= p.degree(); ++k) {
                if (p.coef(k).is_zero()) continue;
                if (!first) os << " + ";
                os << "(" << p.coef(k).str() << ")";
                if (k > 0) os << "*X^" << k;
                first = false;
            }
            return os.str();
        };
        if (r.den_ == PolyX::one()) return poly_str(r.num_);
        return poly_str(r.num_) + " / " + poly_str(r.den_);
    }

private:
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = PolyX::one();
            return;
        }
        // strip common X-power
        long ln = num_.low_degree(), ld = den_.low_degree();
        long s = std::min(ln, ld);
        if (s > 0) {
            num_ = num_.shift_down(s);
            den_ = den_.shift_down(s);
        }
        // gcd-reduce via pseudo-division (stays in Sym[X]; the lead-power
        // scalings of num and den are rebalanced afterwards)
        PolyX g = detail::polyx_gcd(num_, den_);
        if (g.degree() > 0) {
            Sym lead = g.coef(g.degree());
            auto [qn, en] = detail::polyx_pseudo_quotient(num_, g);
            auto [qd, ed] = detail::polyx_pseudo_quotient(den_, g);
            // num lead^en = qn g, den lead^ed = qd g  =>  num/den = qn lead^ed / (qd lead^en)
            for (int i = 0; i < ed - en; ++i) qn = qn.scaled(lead);
            for (int i = 0; i < en - ed; ++i) qd = qd.scaled(lead);
            num_ = qn;
            den_ = qd;
        }
        strip_common_content();
        // leading-coefficient convention: make den's lowest monomial 1 when the
        // lowest coefficient is a monomial, else divide by its lex-leading term.
        long dl = den_.low_degree();
        Sym pivot = den_.coef(dl);
        std::optional<std::tuple<long, long, Rational>> mono = pivot.as_monomial();
        if (!mono) {
            // lex-leading monomial of pivot: highest c-power, then highest q-power
            auto& last_c = *pivot.terms().rbegin();
            auto& last_q = *last_c.second.terms().rbegin();
            mono = std::tuple<long, long, Rational>{last_c.first, last_q.first, last_q.second};
        }
        auto [cp, qh, co] = *mono;
        num_ = num_.div_monomial(cp, qh, co);
        den_ = den_.div_monomial(cp, qh, co);
    }
    // divide num and den by their joint monomial/rational content
    void strip_common_content() {
        bool first = true;
        long min_c = 0, min_q = 0;
        Int gnum = 0, glden = 1;
        auto visit = [&](const PolyX& p) {
            for (long k = 0; k <= p.degree(); ++k) {
                for (auto& [cp, h] : p.coef(k).terms())
                    for (auto& [qh, r] : h.terms()) {
                        if (first) {
                            min_c = cp;
                            min_q = qh;
                            first = false;
                        } else {
                            min_c = std::min(min_c, cp);
                            min_q = std::min(min_q, qh);
                        }
                        gnum = boost::multiprecision::gcd(gnum, numerator(r) < 0
                                                                    ? Int(-numerator(r))
                                                                    : numerator(r));
                        glden = boost::multiprecision::lcm(glden, denominator(r));
                    }
            }
        };
        visit(num_);
        visit(den_);
        if (first) return;
        if (gnum == 0) gnum = 1;
        Rational content(gnum, glden);
        num_ = num_.div_monomial(min_c, min_q, content);
        den_ = den_.div_monomial(min_c, min_q, content);
    }
    PolyX num_, den_;
};

// Truncated formal power series in X over Sym.
class SeriesX {
public:
    SeriesX(long order, std::vector<Sym> coefs) : order_(order), coef_(std::move(coefs)) {
        coef_.resize(order_ + 1);
    }
    long order() const { return order_; }
    const Sym& coef(size_t k) const {
        static const Sym zero;
        return k < coef_.size() ? coef_[k] : zero;
    }
    friend bool operator==(const SeriesX& a, const SeriesX& b) {
        return a.order_ == b.order_ && a.coef_ == b.coef_;
    }
    SeriesX truncated(long order) const {
        std::vector<Sym> c(coef_.begin(), coef_.begin() + std::min<size_t>(order + 1, coef_.size()));
        return SeriesX(order, std::move(c));
    }
    friend SeriesX mul_truncated(const SeriesX& a, const SeriesX& b, long order) {
        std::vector<Sym> c(order + 1);
        for (long i = 0; i <= order; ++i)
            for (long j = 0; i + j <= order && j <= b.order(); ++j)
                c[i + j] += a.coef(i) * b.coef(j);
        return SeriesX(order, std::move(c));
    }

private:
    long order_;
    std::vector<Sym> coef_;
};

inline SeriesX RatFuncX::expand(long order) const {
    // requires den constant term invertible (a monomial)
    if (den_.low_degree() != 0)
        throw std::domain_error("SeriesX: denominator constant term is zero");
    auto mono = den_.coef(0).as_monomial();
    if (!mono) throw std::domain_error("SeriesX: denominator constant term not invertible");
    auto [cp, qh, co] = *mono;
    PolyX n = num_.div_monomial(cp, qh, co);
    PolyX d = den_.div_monomial(cp, qh, co);  // constant term 1
    std::vector<Sym> out(order + 1);
    for (long k = 0; k <= order; ++k) {
        Sym acc = n.coef(k);
        for (long j = 1; j <= k && j <= d.degree(); ++j) acc -= d.coef(j) * out[k - j];
        out[k] = acc;
    }
    return SeriesX(order, std::move(out));
}

enum class RatOp { add, mul, div };

inline RatFuncX ratfunc_arith(const RatFuncX& a, const RatFuncX& b, RatOp op) {
    switch (op) {
        case RatOp::add: return (a + b).reduced();
        case RatOp::mul: return (a * b).reduced();
        case RatOp::div: return (a / b).reduced();
    }
    throw std::logic_error("unreachable");
}

// Local Euler factor 1/(1 - c^{f t} q^{-f shift} X^f) at an unramified place
// of residue degree f twisted by chi^t o Nm.  shift is a half-integer given
// in halves (shift_halves = 2*shift).
inline RatFuncX zeta_local_halves(long shift_halves, long twist_power, int residue_degree) {
    if (residue_degree < 1 || residue_degree > 3)
        throw std::domain_error("zeta_local: residue degree must be 1, 2 or 3");
    long f = residue_degree;
    PolyX den = PolyX::one() - PolyX::monomial(
        Sym::monomial(f * twist_power, -f * shift_halves), f);
    return RatFuncX(PolyX::one(), den);
}
inline RatFuncX zeta_local(long shift_int, long twist_power, int residue_degree) {
    return zeta_local_halves(2 * shift_int, twist_power, residue_degree);
}

// Local factor of the Eisenstein normalization j_E at an unramified place,
// assembled per etale type:
//   split: L(s+5/2,chi) L(s+3/2,chi)^2 L(2s+1,chi^2)
//   quad:  L(s+5/2,chi) L_K(s+3/2,chi o Nm) L(2s+1,chi^2)   (K inert quadratic)
//   cubic: L(s+5/2,chi) L_E(s+3/2,chi o Nm) L(2s+1,chi^2) / L(s+3/2,chi)
inline RatFuncX jE_local(LocalCubicType etype) {
    RatFuncX l52 = zeta_local_halves(5, 1, 1);
    RatFuncX l2s1 = zeta_local_halves(1, 1, 2);  // 1/(1 - c^2 q^{-1} X^2) = L(2s+1, chi^2)
    switch (etype) {
        case LocalCubicType::split:
            return l52 * zeta_local_halves(3, 1, 1) * zeta_local_halves(3, 1, 1) * l2s1;
        case LocalCubicType::quad:
            return l52 * zeta_local_halves(3, 1, 2) * l2s1;
        case LocalCubicType::cubic:
            return l52 * zeta_local_halves(3, 1, 3) * l2s1 / zeta_local_halves(3, 1, 1);
    }
    throw std::logic_error("unreachable");
}

}  // namespace g2local
