#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "elkies/arith.hpp"
#include "elkies/errors.hpp"
#include "elkies/int128.hpp"

namespace elkies {

inline constexpr std::uint64_t naive_count_limit = 10'000'000;
inline constexpr std::uint64_t bsgs_count_limit = 1'000'000'000'000;

// Short Weierstrass curve y^2 = x^3 + ax + b over F_p, p > 3 prime, nonsingular.
struct CurvePrimeField {
    std::uint64_t p;
    std::uint64_t a;
    std::uint64_t b;
};

inline CurvePrimeField make_curve(std::uint64_t p, i128 a, i128 b) {
    if (p <= 3 || !is_prime(p)) throw invalid_input_error("curve characteristic must be a prime > 3, got " + std::to_string(p));
    auto reduce = [p](i128 v) {
        const i128 r = v % i128(p);
        return std::uint64_t(r < 0 ? r + i128(p) : r);
    };
    CurvePrimeField c{p, reduce(a), reduce(b)};
    const u128 a3 = mulmod(mulmod(c.a, c.a, p), c.a, p);
    const u128 b2 = mulmod(c.b, c.b, p);
    if (addmod(mulmod(4, a3, p), mulmod(27, b2, p), p) == 0) {
        throw invalid_input_error("singular curve: 4a^3 + 27b^2 = 0 mod " + std::to_string(p));
    }
    return c;
}

// #E(F_p) = 1 + sum_x (1 + (x^3+ax+b | p)).
inline std::uint64_t count_points_naive(const CurvePrimeField& c) {
    if (c.p > naive_count_limit) {
        throw invalid_input_error("naive point counting limited to p <= " + std::to_string(naive_count_limit));
    }
    const std::uint64_t p = c.p;
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t rhs = (mulmod64(mulmod64(x, x, p), x, p) + mulmod64(c.a, x, p) + c.b) % p;
        count += std::uint64_t(1 + kronecker(i128(rhs), i128(p)));
    }
    return count;
}

namespace detail {

struct AffinePoint {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    bool infinity = true;
    bool operator==(const AffinePoint&) const = default;
};

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    i128 t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        const i128 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (t < 0) t += p;
    return std::uint64_t(t);
}

class CurveGroup {
public:
    explicit CurveGroup(const CurvePrimeField& c) : c_(c) {}

    AffinePoint negate(const AffinePoint& P) const {
        if (P.infinity) return P;
        return {P.x, P.y == 0 ? 0 : c_.p - P.y, false};
    }

    AffinePoint add(const AffinePoint& P, const AffinePoint& Q) const {
        if (P.infinity) return Q;
        if (Q.infinity) return P;
        const std::uint64_t p = c_.p;
        std::uint64_t lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return {};
            const std::uint64_t num = (mulmod64(3, mulmod64(P.x, P.x, p), p) + c_.a) % p;
            lambda = mulmod64(num, inv_mod(mulmod64(2, P.y, p), p), p);
        } else {
            const std::uint64_t num = (Q.y + p - P.y) % p;
            const std::uint64_t den = (Q.x + p - P.x) % p;
            lambda = mulmod64(num, inv_mod(den, p), p);
        }
        const std::uint64_t x3 = (mulmod64(lambda, lambda, p) + 2 * p - P.x - Q.x) % p;
        const std::uint64_t y3 = (mulmod64(lambda, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }

    AffinePoint multiply(AffinePoint P, std::uint64_t k) const {
        AffinePoint R;
        while (k != 0) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

    // Random affine point; the generator is seeded by the caller.
    AffinePoint random_point(std::mt19937_64& rng) const {
        const std::uint64_t p = c_.p;
        for (;;) {
            const std::uint64_t x = rng() % p;
            const std::uint64_t f = (mulmod64(mulmod64(x, x, p), x, p) + mulmod64(c_.a, x, p) + c_.b) % p;
            if (f == 0) return {x, 0, false};
            if (kronecker(i128(f), i128(p)) != 1) continue;
            std::uint64_t y = sqrt_mod(f, p);
            if (rng() & 1) y = p - y;
            return {x, y, false};
        }
    }

    // Order of P: a multiple N of ord(P) in [lo, hi] is located by baby-step
    // giant-step, then reduced prime by prime.
    std::uint64_t point_order(const AffinePoint& P, std::uint64_t lo, std::uint64_t hi) const {
        if (P.infinity) return 1;
        const std::uint64_t width = hi - lo;
        const std::uint64_t m = std::uint64_t(std::ceil(std::sqrt(double(width + 1)))) + 1;
        std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> baby;
        baby.reserve(m * 2);
        AffinePoint R;
        for (std::uint64_t j = 1; j <= m; ++j) {
            R = add(R, P);
            if (R.infinity) return j;
            baby.try_emplace(R.x, R.y, j);
        }
        const AffinePoint step = multiply(P, m);
        AffinePoint G = multiply(P, lo);
        std::optional<std::uint64_t> multiple;
        for (std::uint64_t base = lo; base <= hi + m; base += m) {
            if (G.infinity) {
                multiple = base;
                break;
            }
            if (auto it = baby.find(G.x); it != baby.end()) {
                const auto [y, j] = it->second;
                if (y == G.y) {
                    if (base > j) {
                        multiple = base - j;
                        break;
                    }
                } else {
                    multiple = base + j;
                    break;
                }
            }
            G = add(G, step);
        }
        if (!multiple) throw verification_error("no multiple of the point order found in the Hasse interval");
        std::uint64_t order = *multiple;
        for (const auto& f : factorize(order)) {
            const auto l = std::uint64_t(f.prime);
            while (order % l == 0 && multiply(P, order / l).infinity) order /= l;
        }
        return order;
    }

    static std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
        // Tonelli-Shanks
        if (p % 4 == 3) return powmod64(a, (p + 1) / 4, p);
        std::uint64_t q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        std::uint64_t z = 2;
        while (kronecker(i128(z), i128(p)) != -1) ++z;
        std::uint64_t m = std::uint64_t(s), c = powmod64(z, q, p), t = powmod64(a, q, p),
                      r = powmod64(a, (q + 1) / 2, p);
        while (t != 1) {
            std::uint64_t i = 0, tt = t;
            while (tt != 1) {
                tt = mulmod64(tt, tt, p);
                ++i;
            }
            std::uint64_t b = c;
            for (std::uint64_t k = 0; k + 1 < m - i; ++k) b = mulmod64(b, b, p);
            m = i;
            c = mulmod64(b, b, p);
            t = mulmod64(t, c, p);
            r = mulmod64(r, b, p);
        }
        return r;
    }

private:
    CurvePrimeField c_;
};

inline std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    const u128 l = u128(a) / gcd(a, b) * b;
    return l > cap ? cap + 1 : std::uint64_t(l);
}

inline std::uint64_t count_multiples(std::uint64_t m, std::uint64_t lo, std::uint64_t hi) {
    return hi / m - (lo - 1) / m;
}

}  // namespace detail

// Group order by baby-step giant-step over the Hasse interval. Point orders from
// up to 16 random points are combined by lcm; if the order is still ambiguous the
// quadratic twist (order 2p+2-N) is consulted. Seeded from (p, a, b).
inline std::uint64_t count_points_bsgs(const CurvePrimeField& c) {
    if (c.p > bsgs_count_limit) {
        throw invalid_input_error("BSGS point counting limited to p <= " + std::to_string(bsgs_count_limit));
    }
    const std::uint64_t p = c.p;
    const auto bound = std::uint64_t(isqrt(u128(4) * p));
    const std::uint64_t lo = p + 1 - bound, hi = p + 1 + bound;
    std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ull ^ (c.a << 17) ^ (c.b * 0xC2B2AE3D27D4EB4Full));

    auto exponent_lcm = [&](const CurvePrimeField& curve, std::uint64_t target_count, std::uint64_t l) {
        const detail::CurveGroup group(curve);
        for (int i = 0; i < 16; ++i) {
            l = detail::lcm_capped(l, group.point_order(group.random_point(rng), lo, hi), hi);
            if (detail::count_multiples(l, lo, hi) <= target_count) break;
        }
        return l;
    };

    const std::uint64_t l = exponent_lcm(c, 1, 1);
    if (l > hi) throw verification_error("point orders inconsistent with the Hasse interval");
    if (detail::count_multiples(l, lo, hi) == 1) return (lo + l - 1) / l * l;

    std::uint64_t d = 2;
    while (kronecker(i128(d), i128(p)) != -1) ++d;
    const std::uint64_t d2 = mulmod64(d, d, p);
    const CurvePrimeField twist{p, mulmod64(c.a, d2, p), mulmod64(c.b, mulmod64(d2, d, p), p)};
    const std::uint64_t lt = exponent_lcm(twist, 1, 1);
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t n = (lo + l - 1) / l * l; n <= hi; n += l) {
        if ((2 * p + 2 - n) % lt == 0) candidates.push_back(n);
    }
    if (candidates.size() != 1) {
        throw resource_error("BSGS order ambiguous for p=" + std::to_string(p) + " a=" + std::to_string(c.a) +
                             " b=" + std::to_string(c.b) + " (" + std::to_string(candidates.size()) +
                             " candidates after twisting)");
    }
    return candidates.front();
}

enum class CountMethod { naive, bsgs, automatic };

inline std::uint64_t count_points(const CurvePrimeField& c, CountMethod method) {
    switch (method) {
        case CountMethod::naive: return count_points_naive(c);
        case CountMethod::bsgs: return count_points_bsgs(c);
        case CountMethod::automatic: return c.p <= 100'000 ? count_points_naive(c) : count_points_bsgs(c);
    }
    return 0;
}

// Abstract Frobenius data (q, t) with D = t^2 - 4q.
struct FrobeniusContext {
    u128 q = 0;
    u128 p = 0;
    unsigned k = 0;
    i128 t = 0;
    i128 D = 0;
    u128 m = 0;
    bool supersingular = false;

    bool ordinary_admissible() const { return !supersingular; }
};

inline constexpr u128 max_context_q = u128(1) << 124;

namespace detail {

inline FrobeniusContext build_context(u128 q, const PrimePower& pp, i128 t) {
    const u128 t_abs = uabs(t);
    if (t_abs > (u128(1) << 63) || t_abs * t_abs > 4 * q) {
        throw invalid_input_error("Hasse bound violated: t^2 > 4q for q=" + to_string(q) + ", t=" + to_string(t));
    }
    FrobeniusContext ctx;
    ctx.q = q;
    ctx.p = pp.prime;
    ctx.k = pp.exponent;
    ctx.t = t;
    ctx.D = i128(t_abs * t_abs) - i128(4 * q);
    if (ctx.D == 0) throw invalid_input_error("degenerate discriminant: t^2 - 4q = 0");
    if (is_perfect_square(ctx.D)) throw invalid_input_error("degenerate discriminant: t^2 - 4q is a perfect square");
    ctx.m = uabs(ctx.D);
    ctx.supersingular = t_abs % ctx.p == 0;
    return ctx;
}

inline PrimePower require_prime_power(u128 q) {
    if (q >= max_context_q) throw invalid_input_error("q must be below 2^124");
    const auto pp = prime_power(q);
    if (!pp) throw invalid_input_error("q = " + to_string(q) + " is not a prime power");
    return *pp;
}

}  // namespace detail

inline FrobeniusContext frobenius_context(u128 q, i128 t) {
    return detail::build_context(q, detail::require_prime_power(q), t);
}

inline FrobeniusContext trace_from_curve(const CurvePrimeField& c, CountMethod method = CountMethod::automatic) {
    const std::uint64_t n = count_points(c, method);
    return frobenius_context(c.p, i128(c.p) + 1 - i128(n));
}

inline constexpr std::uint64_t max_enumerated_traces = 100'000'000;

// All admissible traces for q in increasing t.
inline std::vector<FrobeniusContext> enumerate_traces(u128 q) {
    const PrimePower pp = detail::require_prime_power(q);
    const u128 bound = isqrt(4 * q);
    if (2 * bound + 1 > max_enumerated_traces) throw resource_error("too many traces to enumerate for q = " + to_string(q));
    std::vector<FrobeniusContext> out;
    out.reserve(std::size_t(2 * bound + 1));
    for (i128 t = -i128(bound); t <= i128(bound); ++t) {
        const i128 D = t * t - i128(4 * q);
        if (D == 0 || is_perfect_square(D)) continue;
        out.push_back(detail::build_context(q, pp, t));
    }
    return out;
}

}  // namespace elkies
