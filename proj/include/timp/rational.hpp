#pragma once

#include <numeric>
#include <string>

namespace timp {

// Exact rational, just enough for average degrees: 2|E| and |S| stay far
// below 64-bit range for any graph this artifact handles.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational make(long long n, long long d) {
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rational{n, d};
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    bool operator==(const Rational&) const = default;
};

// a/b <= c/d with positive denominators.
inline bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

} // namespace timp
