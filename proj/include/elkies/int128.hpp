#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace elkies {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

inline constexpr u128 u128_max = ~u128{0};

inline u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

inline bool fits_u64(u128 v) { return (v >> 64) == 0; }

inline bool fits_i64(i128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.insert(s.begin(), char('0' + int(v % 10)));
        v /= 10;
    }
    return s;
}

inline std::string to_string(i128 v) {
    return v < 0 ? "-" + to_string(uabs(v)) : to_string(u128(v));
}

// Decimal parser; rejects empty input, stray characters and overflow.
inline std::optional<u128> parse_u128(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        const unsigned d = unsigned(c - '0');
        if (v > (u128_max - d) / 10) return std::nullopt;
        v = v * 10 + d;
    }
    return v;
}

inline std::optional<i128> parse_i128(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) return std::nullopt;
    auto mag = parse_u128(s);
    const u128 limit = u128(1) << 127;
    if (!mag || *mag > limit || (*mag == limit && !neg)) return std::nullopt;
    return neg ? i128(u128(0) - *mag) : i128(*mag);
}

inline int bit_width(u128 v) {
    const auto hi = std::uint64_t(v >> 64);
    return hi ? 64 + std::bit_width(hi) : std::bit_width(std::uint64_t(v));
}

inline int countr_zero(u128 v) {
    const auto lo = std::uint64_t(v);
    return lo ? std::countr_zero(lo) : 64 + std::countr_zero(std::uint64_t(v >> 64));
}

// floor(sqrt(n)), exact.
inline u128 isqrt(u128 n) {
    if (n < 2) return n;
    u128 x = u128(std::sqrt(static_cast<long double>(n)));
    // long double gives ~64 bits; fix up with exact comparisons.
    while (x > 0 && (x > (u128(1) << 64) - 1 || x * x > n)) --x;
    while (x + 1 <= (u128(1) << 64) - 1 && (x + 1) * (x + 1) <= n) ++x;
    return x;
}

// base^exp, saturating at u128_max on overflow.
inline u128 saturating_pow(u128 base, unsigned exp) {
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > u128_max / base) return u128_max;
        r *= base;
    }
    return r;
}

// floor(n^(1/k)) for k >= 1, exact.
inline u128 iroot(u128 n, unsigned k) {
    if (k == 1 || n < 2) return n;
    if (k == 2) return isqrt(n);
    if (k >= 128) return 1;
    u128 x = u128(std::pow(static_cast<long double>(n), 1.0L / k));
    while (x > 0 && saturating_pow(x, k) > n) --x;
    while (saturating_pow(x + 1, k) <= n) ++x;
    return x;
}

inline u128 addmod(u128 a, u128 b, u128 m) {
    return a >= m - b ? a - (m - b) : a + b;
}

inline u128 mulmod(u128 a, u128 b, u128 m) {
    if (fits_u64(m)) return (a % m) * (b % m) % m;
    a %= m;
    b %= m;
    if (fits_u64(a) && fits_u64(b)) {
        const u128 prod = a * b;
        if (a == 0 || prod / a == b) return prod % m;
    }
    u128 r = 0;
    while (b != 0) {
        if (b & 1) r = addmod(r, a, m);
        a = addmod(a, a, m);
        b >>= 1;
    }
    return r;
}

inline u128 powmod(u128 base, u128 exp, u128 m) {
    if (m == 1) return 0;
    u128 r = 1;
    base %= m;
    while (exp != 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return std::uint64_t(u128(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline u128 gcd(u128 a, u128 b) {
    while (b != 0) {
        const u128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline long double to_long_double(u128 v) { return static_cast<long double>(v); }

}  // namespace elkies
