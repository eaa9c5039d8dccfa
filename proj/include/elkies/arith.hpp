#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "elkies/errors.hpp"
#include "elkies/int128.hpp"

namespace elkies {

namespace detail {

inline constexpr std::array<std::uint32_t, 15> small_primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

inline bool miller_rabin_round(u128 n, u128 d, int s, u128 a) {
    a %= n;
    if (a == 0) return true;
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

inline bool miller_rabin_round64(std::uint64_t n, std::uint64_t d, int s, std::uint64_t a) {
    a %= n;
    if (a == 0) return true;
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod64(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

inline int jacobi64(std::uint64_t a, std::uint64_t n) {
    int t = 1;
    while (a != 0) {
        const int v = std::countr_zero(a);
        a >>= v;
        if ((v & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? t : 0;
}

// Jacobi symbol (a/n) for odd n > 0 and a < n.
inline int jacobi(u128 a, u128 n) {
    int t = 1;
    while (a != 0) {
        if (fits_u64(n)) return t * jacobi64(std::uint64_t(a), std::uint64_t(n));
        const int v = countr_zero(a);
        a >>= v;
        if ((v & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? t : 0;
}

inline u128 half_mod(u128 x, u128 n) {
    return (x & 1) ? (x >> 1) + (n >> 1) + 1 : x >> 1;
}

inline u128 submod(u128 a, u128 b, u128 n) { return a >= b ? a - b : n - (b - a); }

// Strong Lucas probable-prime test with Selfridge parameters (n odd, not a square).
inline bool strong_lucas(u128 n) {
    i128 dd = 5;
    for (;;) {
        const u128 dmod = dd > 0 ? u128(dd) % n : (n - uabs(dd) % n) % n;
        const int j = jacobi(dmod, n);
        if (j == -1) break;
        if (j == 0 && uabs(dd) != n) return false;
        dd = dd > 0 ? -(dd + 2) : -dd + 2;
    }
    const u128 dm = dd > 0 ? u128(dd) % n : (n - uabs(dd) % n) % n;
    const i128 qv = (1 - dd) / 4;
    const u128 qm = qv >= 0 ? u128(qv) % n : (n - uabs(qv) % n) % n;

    u128 d = n + 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u128 u = 1, v = 1, qk = qm;
    for (int bit = bit_width(d) - 2; bit >= 0; --bit) {
        u = mulmod(u, v, n);
        v = submod(mulmod(v, v, n), addmod(qk, qk, n), n);
        qk = mulmod(qk, qk, n);
        if ((d >> bit) & 1) {
            const u128 nu = half_mod(addmod(u, v, n), n);
            const u128 nv = half_mod(addmod(mulmod(dm, u, n), v, n), n);
            u = nu;
            v = nv;
            qk = mulmod(qk, qm, n);
        }
    }
    if (u == 0 || v == 0) return true;
    for (int r = 1; r < s; ++r) {
        v = submod(mulmod(v, v, n), addmod(qk, qk, n), n);
        qk = mulmod(qk, qk, n);
        if (v == 0) return true;
    }
    return false;
}

}  // namespace detail

// Deterministic primality. Below 2^64 the seven-base Miller-Rabin set is proven;
// below 3.3e24 the first thirteen prime bases are proven; above that the answer
// is BPSW (Miller-Rabin on those bases plus a strong Lucas test), which has no
// known counterexample and is fully reproducible.
inline bool is_prime(u128 n) {
    if (n < 2) return false;
    for (auto p : detail::small_primes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 53 * 53) return true;
    if (fits_u64(n)) {
        const auto m = std::uint64_t(n);
        std::uint64_t d = m - 1;
        const int s = std::countr_zero(d);
        d >>= s;
        for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
            if (!detail::miller_rabin_round64(m, d, s, a)) return false;
        }
        return true;
    }
    u128 d = n - 1;
    const int s = countr_zero(d);
    d >>= s;
    for (std::uint32_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
        if (!detail::miller_rabin_round(n, d, s, a)) return false;
    }
    // 3317044064679887385961981 bounds the thirteen-base set.
    const u128 proven = u128(3317044064ULL) * u128(1000000000000000ULL) + u128(679887385961981ULL);
    if (n < proven) return true;
    const u128 r = isqrt(n);
    if (r * r == n) return false;
    return detail::strong_lucas(n);
}

// Kronecker symbol (a|n) for all integers, with (a|-1) = sign(a) and (a|0) = [a = +-1].
inline int kronecker(i128 a, i128 n) {
    static constexpr int two_table[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int k = 1;
    u128 nn = uabs(n);
    if (n < 0 && a < 0) k = -k;
    const int v = countr_zero(nn);
    nn >>= v;
    if (v & 1) k *= two_table[int(a & 7)];
    if (nn == 1) return k;
    u128 aa;
    if (a >= 0) {
        aa = u128(a) % nn;
    } else {
        const u128 r = uabs(a) % nn;
        aa = r == 0 ? 0 : nn - r;
    }
    return k * detail::jacobi(aa, nn);
}

inline bool is_perfect_square(i128 n) {
    if (n < 0) return false;
    const u128 r = isqrt(u128(n));
    return r * r == u128(n);
}

struct PrimeFactor {
    u128 prime;
    unsigned exponent;
    bool operator==(const PrimeFactor&) const = default;
};

namespace detail {

inline std::uint64_t pollard_brent64(std::uint64_t n, std::uint64_t c) {
    auto f = [&](std::uint64_t x) { return (mulmod64(x, x, n) + c) % n; };
    std::uint64_t y = 2, g = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t m = 128;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += m) {
            ys = y;
            for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod64(q, x > y ? x - y : y - x, n);
            }
            g = std::uint64_t(gcd(q, n));
        }
        if (r > (1ull << 40)) return n;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = std::uint64_t(gcd(x > ys ? x - ys : ys - x, n));
        } while (g == 1);
    }
    return g;
}

// Brent's rho above 2^64 with an iteration budget; nullopt when the budget runs out.
inline std::optional<u128> pollard_brent128(u128 n, u128 c, std::uint64_t budget) {
    auto f = [&](u128 x) { return addmod(mulmod(x, x, n), c, n); };
    u128 y = 2, g = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t m = 64;
    std::uint64_t spent = 0;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += m) {
            ys = y;
            for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd(q, n);
            spent += m;
            if (spent > budget) return std::nullopt;
        }
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

inline void split_factor(u128 n, std::vector<u128>& out, std::uint64_t budget) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u128 d = n;
    for (std::uint64_t c = 1; d == n; ++c) {
        if (fits_u64(n)) {
            d = pollard_brent64(std::uint64_t(n), c);
        } else {
            auto g = pollard_brent128(n, c, budget);
            if (!g) throw resource_error("factorization budget exceeded for " + to_string(n));
            d = *g;
        }
        if (c > 64) throw resource_error("factorization failed for " + to_string(n));
    }
    split_factor(d, out, budget);
    split_factor(n / d, out, budget);
}

}  // namespace detail

inline constexpr std::uint64_t default_factor_budget = 1u << 22;

// Full factorization, primes ascending. Trial division to 2^12, then Brent's rho.
inline std::vector<PrimeFactor> factorize(u128 n, std::uint64_t budget = default_factor_budget) {
    std::vector<PrimeFactor> out;
    if (n < 2) return out;
    auto take = [&](u128 p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.push_back({p, e});
    };
    take(2);
    for (std::uint64_t p = 3; p < 4096 && u128(p) * p <= n; p += 2) {
        if (fits_u64(n)) {
            if (std::uint64_t(n) % p == 0) take(p);
        } else if (n % p == 0) {
            take(p);
        }
    }
    if (n == 1) return out;
    std::vector<u128> rest;
    detail::split_factor(n, rest, budget);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
        std::size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        out.push_back({rest[i], unsigned(j - i)});
        i = j;
    }
    return out;
}

struct OmegaRadical {
    unsigned omega;
    u128 radical;
};

inline OmegaRadical omega_and_radical(u128 n) {
    if (n == 0) throw invalid_input_error("omega_and_radical requires n >= 1");
    OmegaRadical r{0, 1};
    for (const auto& f : factorize(n)) {
        ++r.omega;
        r.radical *= f.prime;
    }
    return r;
}

struct PrimePower {
    u128 prime;
    unsigned exponent;
};

// n = p^k with p prime, k >= 1.
inline std::optional<PrimePower> prime_power(u128 n) {
    if (n < 2) return std::nullopt;
    if (is_prime(n)) return PrimePower{n, 1};
    const int bits = bit_width(n);
    for (int k = 2; k <= bits; ++k) {
        const u128 r = iroot(n, unsigned(k));
        if (r < 2) break;
        if (saturating_pow(r, unsigned(k)) == n && is_prime(r)) return PrimePower{r, unsigned(k)};
    }
    return std::nullopt;
}

inline double von_mangoldt(u128 n) {
    if (n == 0) throw invalid_input_error("von_mangoldt requires n >= 1");
    const auto pp = prime_power(n);
    return pp ? double(std::log(to_long_double(pp->prime))) : 0.0;
}

}  // namespace elkies
