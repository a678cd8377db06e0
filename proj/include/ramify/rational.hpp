#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <string>

#include "ramify/errors.hpp"

namespace ramify {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Sentinel for +infinity in valuation arithmetic (i_G(1), s_G(1), exact zero).
inline constexpr long long VAL_INF = std::numeric_limits<long long>::max() / 4;

inline bool is_inf(long long v) { return v >= VAL_INF / 2; }

inline long long add_val(long long a, long long b) {
    if (is_inf(a) || is_inf(b)) return VAL_INF;
    return a + b;
}

inline long long to_ll(const BigInt& x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
        throw Error("integer out of machine range: " + x.str());
    return static_cast<long long>(x);
}

inline Rat make_rat(long long num, long long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    return Rat(BigInt(num), BigInt(den));
}

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_int(const Rat& r) { return rat_den(r) == 1; }

inline BigInt rat_floor(const Rat& r) {
    BigInt q = rat_num(r) / rat_den(r);
    if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) q -= 1;
    return q;
}

inline BigInt rat_ceil(const Rat& r) {
    BigInt q = rat_num(r) / rat_den(r);
    if (rat_num(r) > 0 && q * rat_den(r) != rat_num(r)) q += 1;
    return q;
}

inline std::string rat_str(const Rat& r) {
    if (rat_is_int(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

inline long long ipow_ll(long long b, long long e) {
    long long r = 1;
    for (long long i = 0; i < e; ++i) {
        if (b != 0 && r > std::numeric_limits<long long>::max() / b)
            throw Error("integer power overflow");
        r *= b;
    }
    return r;
}

inline BigInt bip(long long b, long long e) {
    BigInt r = 1, base = b;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

} // namespace ramify
