#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elkies/errors.hpp"
#include "elkies/int128.hpp"
#include "elkies/summation.hpp"

namespace elkies {

// Limits at or below this use one flat odd-only sieve; above it the sieve is segmented.
inline constexpr std::uint64_t flat_sieve_limit = 10'000'000;
inline constexpr std::uint64_t default_sieve_budget_bytes = std::uint64_t(3) << 30;

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint64_t> primes() const { return primes_; }
    std::size_t prime_pi() const { return primes_.size(); }

    // pi(x) for x <= limit.
    std::size_t prime_pi(std::uint64_t x) const {
        if (x > limit_) throw invalid_input_error("prime_pi argument exceeds table limit " + std::to_string(limit_));
        return std::size_t(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

    bool contains(std::uint64_t n) const { return std::binary_search(primes_.begin(), primes_.end(), n); }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
};

namespace detail {

inline std::vector<std::uint64_t> flat_sieve(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    out.push_back(2);
    // composite[i] describes 2i+1
    std::vector<char> composite(limit / 2 + 1, 0);
    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = p * p / 2; j < composite.size(); j += p) composite[j] = 1;
    }
    for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
        if (!composite[i]) out.push_back(2 * i + 1);
    }
    return out;
}

inline std::vector<std::uint64_t> segmented_sieve(std::uint64_t limit) {
    const std::uint64_t root = std::uint64_t(isqrt(limit));
    const auto base = flat_sieve(root);
    std::vector<std::uint64_t> out = base;
    constexpr std::uint64_t segment_odds = std::uint64_t(1) << 19;
    std::vector<char> composite(segment_odds);
    // next odd multiple offset for each odd base prime
    std::vector<std::uint64_t> next(base.size());
    std::uint64_t lo = root + 1;
    if (lo % 2 == 0) ++lo;
    for (std::size_t i = 1; i < base.size(); ++i) {
        const std::uint64_t p = base[i];
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        next[i] = start;
    }
    while (lo <= limit) {
        const std::uint64_t hi = std::min(limit, lo + 2 * (segment_odds - 1));  // odd unless it is the limit
        const std::uint64_t count = (hi - lo) / 2 + 1;
        std::fill(composite.begin(), composite.begin() + std::ptrdiff_t(count), 0);
        for (std::size_t i = 1; i < base.size(); ++i) {
            const std::uint64_t p = base[i];
            std::uint64_t m = next[i];
            for (; m <= hi; m += 2 * p) composite[(m - lo) / 2] = 1;
            next[i] = m;
        }
        for (std::uint64_t k = 0; k < count; ++k) {
            if (!composite[k]) out.push_back(lo + 2 * k);
        }
        lo = hi + 2;
        if (hi == limit || lo > limit) break;
    }
    return out;
}

}  // namespace detail

// Bytes the sieve needs for a given limit (Rosser-Schoenfeld bound on pi(X)).
inline std::uint64_t sieve_memory_estimate(std::uint64_t limit) {
    if (limit < 17) return 1024;
    const double x = double(limit);
    const double pi_upper = 1.25506 * x / std::log(x);
    const double work = limit <= flat_sieve_limit ? x / 2 : double(std::uint64_t(1) << 19) + std::sqrt(x);
    return std::uint64_t(pi_upper * sizeof(std::uint64_t) + work);
}

inline PrimeTable primes_up_to(std::uint64_t limit, std::uint64_t budget_bytes = default_sieve_budget_bytes) {
    if (sieve_memory_estimate(limit) > budget_bytes) {
        throw resource_error("sieve limit " + std::to_string(limit) + " exceeds memory budget of " +
                             std::to_string(budget_bytes) + " bytes");
    }
    auto primes = limit <= flat_sieve_limit ? detail::flat_sieve(limit) : detail::segmented_sieve(limit);
    return PrimeTable(limit, std::move(primes));
}

inline std::uint64_t floor_to_u64(double x) {
    if (!(x >= 0)) return 0;
    if (x >= 1.8e19) throw resource_error("argument too large for sieving");
    return std::uint64_t(std::floor(x));
}

// Calls f(p, n, k) for every prime power n = p^k <= bound, p taken from the table.
template <class F>
void for_each_prime_power(const PrimeTable& table, std::uint64_t bound, F&& f) {
    if (bound > table.limit()) throw invalid_input_error("prime-power bound exceeds table limit");
    for (std::uint64_t p : table.primes()) {
        if (p > bound) break;
        u128 n = p;
        for (unsigned k = 1; n <= bound; ++k, n *= p) f(p, std::uint64_t(n), k);
    }
}

struct PsiTheta {
    double psi;
    double theta;
    double psi_minus_theta;
};

inline PsiTheta chebyshev_psi_theta(double X, const PrimeTable& table) {
    const std::uint64_t n = floor_to_u64(X);
    CompensatedSum theta, higher;
    for_each_prime_power(table, n, [&](std::uint64_t p, std::uint64_t, unsigned k) {
        const double lp = std::log(double(p));
        if (k == 1) {
            theta += lp;
        } else {
            higher += lp;
        }
    });
    CompensatedSum psi;
    psi += theta.value();
    psi += higher.value();
    return {psi.value(), theta.value(), higher.value()};
}

inline PsiTheta chebyshev_psi_theta(double X) {
    return chebyshev_psi_theta(X, primes_up_to(floor_to_u64(X)));
}

// Two-term unconditional bound on psi(X) - theta(X).
inline double psi_theta_gap_bound(double X) {
    return (1 + 1.47e-7) * std::sqrt(X) + 1.78 * std::cbrt(X);
}

}  // namespace elkies
