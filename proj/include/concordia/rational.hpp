#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace concordia {

// Exact fraction on 64-bit words with overflow-checked products.  Rank
// statistics live on denominators like n+1 and n(n^2-1), so magnitudes stay
// tiny; the checks are there to make silent wraparound impossible.
struct Rat {
    long long num = 0;
    long long den = 1;

    constexpr Rat() = default;
    Rat(long long n) : num(n), den(1) {}  // NOLINT: implicit by design
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static long long checked_mul(long long a, long long b) {
        __int128 p = static_cast<__int128>(a) * b;
        if (p > INT64_MAX || p < INT64_MIN) throw std::overflow_error("Rat: product overflow");
        return static_cast<long long>(p);
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(checked_mul(a.num, b.den) + checked_mul(b.num, a.den), checked_mul(a.den, b.den));
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(checked_mul(a.num, b.den) - checked_mul(b.num, a.den), checked_mul(a.den, b.den));
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::domain_error("Rat: division by zero");
        return Rat(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
    }
    Rat operator-() const { return Rat(-num, den); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
};

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat rat_abs(const Rat& a) { return a.num < 0 ? -a : a; }

// Exact conversion of a double that happens to be a dyadic rational with a
// small denominator (mixture weights like 0.5).  Anything else is refused,
// which routes the caller to floating point.
inline std::optional<Rat> rat_from_double(double x, int max_den_bits = 20) {
    if (!std::isfinite(x)) return std::nullopt;
    long long den = 1;
    for (int s = 0; s <= max_den_bits; ++s) {
        double scaled = x * static_cast<double>(den);
        if (std::floor(scaled) == scaled && std::fabs(scaled) < 9.0e15)
            return Rat(static_cast<long long>(scaled), den);
        den <<= 1;
    }
    return std::nullopt;
}

}  // namespace concordia
