#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace g2local {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

// q^e for integer e, q a concrete integer (used when specializing symbols).
inline Rational int_pow(const Int& base, long e) {
    Int num = 1;
    for (long i = 0; i < (e >= 0 ? e : -e); ++i) num *= base;
    if (e >= 0) return Rational(num);
    return Rational(Int(1), num);
}

inline std::string rat_str(const Rational& r) { return r.str(); }

}  // namespace g2local
