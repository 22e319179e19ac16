#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>

namespace lab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Ceiling of a/b for b > 0.
inline long long ceil_div(long long a, long long b) {
    long long q = a / b;
    return q + ((a % b > 0) ? 1 : 0);
}

inline long long isqrt_ll(long long n) {
    if (n <= 0) return 0;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline BigInt isqrt_big(const BigInt& n) {
    if (n <= 0) return 0;
    return boost::multiprecision::sqrt(n);
}

// "p/q" form; integers render without the "/1".
inline std::string rat_str(const Rat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

} // namespace lab
