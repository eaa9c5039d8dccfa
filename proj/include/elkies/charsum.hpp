#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "elkies/constants.hpp"
#include "elkies/curve.hpp"
#include "elkies/elkies_primes.hpp"
#include "elkies/errors.hpp"
#include "elkies/sieve.hpp"
#include "elkies/summation.hpp"

namespace elkies {

namespace detail {

inline std::uint64_t sum_bound(double X, const char* what) {
    if (!(X >= 2)) throw invalid_input_error(std::string(what) + " requires X >= 2");
    return floor_to_u64(X);
}

// (X - n) / X keeps the n = X weight exactly zero.
inline double weight(double X, std::uint64_t n) { return (X - double(n)) / X; }

}  // namespace detail

// sum_{n <= X} Lambda(n) (1 - n/X)
inline double weighted_psi_sum(double X, const PrimeTable& table) {
    const std::uint64_t n_max = detail::sum_bound(X, "weighted_psi_sum");
    CompensatedSum s;
    for_each_prime_power(table, n_max, [&](std::uint64_t p, std::uint64_t n, unsigned) {
        s += std::log(double(p)) * detail::weight(X, n);
    });
    return s.value();
}

inline double weighted_psi_sum(double X) {
    return weighted_psi_sum(X, primes_up_to(detail::sum_bound(X, "weighted_psi_sum")));
}

// sum_{n <= X} Lambda(n) chi(n) (1 - n/X), with chi = (D|.) or its primitive (D0|.).
// Both are completely multiplicative, so chi(p^k) = chi(p)^k.
inline double weighted_chi_sum(const CharacterSpec& spec, double X, bool use_primitive, const PrimeTable& table) {
    const std::uint64_t n_max = detail::sum_bound(X, "weighted_chi_sum");
    const i128 d = use_primitive ? spec.D0 : spec.D;
    CompensatedSum s;
    std::uint64_t last_p = 0;
    int chi_p = 0;
    for_each_prime_power(table, n_max, [&](std::uint64_t p, std::uint64_t n, unsigned k) {
        if (p != last_p) {
            last_p = p;
            chi_p = kronecker(d, i128(p));
        }
        if (chi_p == 0) return;
        const int chi_n = (chi_p < 0 && (k & 1)) ? -1 : 1;
        s += chi_n * std::log(double(p)) * detail::weight(X, n);
    });
    return s.value();
}

inline double weighted_chi_sum(const CharacterSpec& spec, double X, bool use_primitive) {
    return weighted_chi_sum(spec, X, use_primitive, primes_up_to(detail::sum_bound(X, "weighted_chi_sum")));
}

inline double weighted_chi_sum(const FrobeniusContext& ctx, double X, bool use_primitive, const PrimeTable& table) {
    return weighted_chi_sum(character_spec(ctx), X, use_primitive, table);
}

inline double weighted_chi_sum(const FrobeniusContext& ctx, double X, bool use_primitive) {
    return weighted_chi_sum(character_spec(ctx), X, use_primitive);
}

// Weighted psi at many X from one sieve: sum Lambda(n) - (1/X) sum n Lambda(n)
// over prefix sums of the sorted prime powers.
class WeightedPsiCurve {
public:
    explicit WeightedPsiCurve(const PrimeTable& table) : limit_(table.limit()) {
        std::vector<std::pair<std::uint64_t, double>> terms;
        terms.reserve(table.prime_pi() + 64);
        for_each_prime_power(table, table.limit(), [&](std::uint64_t p, std::uint64_t n, unsigned) {
            terms.emplace_back(n, std::log(double(p)));
        });
        std::sort(terms.begin(), terms.end());
        n_.reserve(terms.size());
        lambda_.reserve(terms.size());
        n_lambda_.reserve(terms.size());
        CompensatedSum a, b;
        for (const auto& [n, lp] : terms) {
            a += lp;
            b += double(n) * lp;
            n_.push_back(n);
            lambda_.push_back(a.value());
            n_lambda_.push_back(b.value());
        }
    }

    double operator()(double X) const {
        const std::uint64_t n_max = detail::sum_bound(X, "weighted_psi_sum");
        if (n_max > limit_) throw invalid_input_error("X beyond the curve's prime table");
        const auto it = std::upper_bound(n_.begin(), n_.end(), n_max);
        if (it == n_.begin()) return 0;
        const std::size_t i = std::size_t(it - n_.begin()) - 1;
        return lambda_[i] - n_lambda_[i] / X;
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> n_;
    std::vector<double> lambda_;
    std::vector<double> n_lambda_;
};

inline constexpr double proof_delta = 0.5;
inline constexpr double robin_omega_constant = 1.3841;

struct SumDecomposition {
    double X = 0;
    double S = 0;
    double S1 = 0;
    double S2 = 0;
    double S3 = 0;
    double psi_minus_theta = 0;
    double bound_S2 = 0;  // log m
    double bound_S3 = 0;  // 2(1 + delta) sqrt(X)
    double relative_residual = 0;

    bool identity_ok = false;
    bool s2_nonnegative = false;
    bool s3_within_gap = false;    // |S3| <= 2(psi - theta)
    bool gap_within_bound = false; // 2(psi - theta) <= bound_S3
    // No l <= X with chi_E(l) = 1. The characteristic counts here even though it
    // is never an Elkies prime: chi_E(p) = 1 for ordinary curves.
    bool split_free = false;
    double ramified_log_sum = 0;   // sum of log p over p | m, p <= X
    bool s2_within_bound = true;   // checked only when split_free

    bool passed() const {
        return identity_ok && s2_nonnegative && s3_within_gap && gap_within_bound && s2_within_bound;
    }
};

inline constexpr double decomposition_tolerance = 1e-9;

inline SumDecomposition decompose(const FrobeniusContext& ctx, double X, const PrimeTable& table) {
    if (!(X >= 10)) throw invalid_input_error("decompose requires X >= 10");
    const std::uint64_t n_max = floor_to_u64(X);
    require_table(table, n_max);
    SumDecomposition r;
    r.X = X;
    CompensatedSum S, S1, S2, S3, ramified;
    std::uint64_t last_p = 0;
    int chi_p = 0;
    bool any_split = false;
    for_each_prime_power(table, n_max, [&](std::uint64_t p, std::uint64_t n, unsigned k) {
        if (p != last_p) {
            last_p = p;
            chi_p = kronecker(ctx.D, i128(p));
            if (chi_p == 1) any_split = true;
            if (chi_p == 0) ramified += std::log(double(p));
        }
        const double term = std::log(double(p)) * detail::weight(X, n);
        const int chi_n = chi_p == 0 ? 0 : ((chi_p < 0 && (k & 1)) ? -1 : 1);
        S += chi_n * term;
        S1 += -term;
        if (k == 1) {
            S2 += (chi_n + 1) * term;
        } else {
            S3 += (chi_n + 1) * term;
        }
    });
    r.S = S.value();
    r.S1 = S1.value();
    r.S2 = S2.value();
    r.S3 = S3.value();
    r.psi_minus_theta = chebyshev_psi_theta(X, table).psi_minus_theta;
    r.bound_S2 = std::log(double(ctx.m));
    r.bound_S3 = 2 * (1 + proof_delta) * std::sqrt(X);
    // Relative to max(|S|, 1) so a sum that happens to land near zero is not
    // judged against a vanishing denominator.
    r.relative_residual = std::fabs(r.S - (r.S1 + r.S2 + r.S3)) / std::max(std::fabs(r.S), 1.0);
    r.identity_ok = r.relative_residual <= decomposition_tolerance;
    r.s2_nonnegative = r.S2 >= 0;
    r.s3_within_gap = std::fabs(r.S3) <= 2 * r.psi_minus_theta;
    r.gap_within_bound = 2 * r.psi_minus_theta <= r.bound_S3;
    r.split_free = !any_split;
    r.ramified_log_sum = ramified.value();
    if (r.split_free) r.s2_within_bound = r.S2 <= r.ramified_log_sum + 1e-12 && r.ramified_log_sum <= r.bound_S2 + 1e-12;
    return r;
}

inline SumDecomposition decompose(const FrobeniusContext& ctx, double X) {
    if (!(X >= 10)) throw invalid_input_error("decompose requires X >= 10");
    return decompose(ctx, X, primes_up_to(floor_to_u64(X)));
}

struct ImprimitivityGap {
    double gap = 0;
    double bound_omega_logX = 0;  // omega(m) log X
    double bound_paper = 0;       // 1.3841 log m log X / log log m
    unsigned omega_m = 0;
};

inline ImprimitivityGap imprimitivity_gap(const CharacterSpec& spec, double X, const PrimeTable& table) {
    if (!(X >= 3)) throw invalid_input_error("imprimitivity_gap requires X >= 3");
    if (spec.m < 3) throw invalid_input_error("imprimitivity_gap requires m >= 3");
    ImprimitivityGap g;
    g.gap = std::fabs(weighted_chi_sum(spec, X, false, table) - weighted_chi_sum(spec, X, true, table));
    g.omega_m = omega_and_radical(spec.m).omega;
    const double lx = std::log(X);
    const double lm = double(std::log(to_long_double(spec.m)));
    g.bound_omega_logX = g.omega_m * lx;
    g.bound_paper = robin_omega_constant * lm * lx / std::log(lm);
    const double slack = 1e-9 * std::max(1.0, lx);
    if (g.gap > g.bound_omega_logX + slack || g.gap > g.bound_paper + slack) {
        throw verification_error("imprimitivity gap " + std::to_string(g.gap) + " exceeds its bound for D=" +
                                 to_string(spec.D) + " X=" + std::to_string(X));
    }
    return g;
}

inline ImprimitivityGap imprimitivity_gap(const CharacterSpec& spec, double X) {
    if (!(X >= 3)) throw invalid_input_error("imprimitivity_gap requires X >= 3");
    return imprimitivity_gap(spec, X, primes_up_to(floor_to_u64(X)));
}

inline ImprimitivityGap imprimitivity_gap(const FrobeniusContext& ctx, double X) {
    return imprimitivity_gap(character_spec(ctx), X);
}

// C2(X0, m0) sqrt(X) log m' with the table cell for the largest X0 <= X and
// m0 <= m', the parity taken from the primitive character. Negative when X < 10.
inline double primitive_sum_bound(const CharacterSpec& spec, double X) {
    const Parity parity = spec.odd() ? Parity::odd : Parity::even;
    const double conductor = double(to_long_double(spec.conductor));
    const double c = table_c2(X, conductor, parity);
    if (c < 0) return -1;
    return c * std::sqrt(X) * std::log(conductor);
}

struct Theorem1Audit {
    u128 q = 0;
    bool prime_power = false;
    bool below_range = false;  // q < 10^9: the theorem makes no claim
    double log4q = 0;
    double X = 0;
    double sqrtX = 0;
    double C1_used = 0;
    double C2_used = 0;
    double delta = proof_delta;
    double D_const = robin_omega_constant;
    double term_main = 0;   // 2 C2 log 4q
    double term_const = 0;  // 2 (C1 + 2(1 + delta))
    double term3 = 0;       // 2 log 4q / sqrt(X)
    double term4 = 0;       // 2 D log 4q log X / (sqrt(X) log log 4q)
    double rhs_exact = 0;
    double rhs_paper = 0;   // 1.902 log 4q + 6.094
    double lhs = 0;         // sqrt(X)
    double crossover_L = 0;
    double crossover_q = 0;
    bool chain_holds = false;
};

inline constexpr double theorem1_range = 1e9;
inline constexpr double chain_coefficient = 1.902;
inline constexpr double chain_constant = 6.094;

// Where 1.902 L + 6.094 meets sqrt(X) = 2L + 4.
inline std::pair<double, double> theorem1_crossover() {
    const double L = (chain_constant - 4) / (2 - chain_coefficient);
    return {L, std::exp(L) / 4};
}

inline Theorem1Audit theorem1_audit(u128 q, double C1 = 0.047, double C2 = 0.855) {
    if (q < 2) throw invalid_input_error("theorem1_audit requires q >= 2");
    Theorem1Audit a;
    a.q = q;
    a.prime_power = prime_power(q).has_value();
    const long double lq = to_long_double(q);
    a.below_range = lq < theorem1_range;
    const long double L = std::log(4 * lq);
    a.log4q = double(L);
    const long double sx = 2 * L + 4;
    a.X = double(sx * sx);
    a.sqrtX = double(sx);
    a.C1_used = C1;
    a.C2_used = C2;
    a.term_main = double(2 * C2 * L);
    a.term_const = 2 * (C1 + 2 * (1 + a.delta));
    a.term3 = double(2 * L / sx);
    a.term4 = double(2 * a.D_const * L * std::log(sx * sx) / (sx * std::log(L)));
    a.rhs_exact = a.term_main + a.term_const + a.term3 + a.term4;
    a.rhs_paper = double(chain_coefficient * L + chain_constant);
    a.lhs = a.sqrtX;
    std::tie(a.crossover_L, a.crossover_q) = theorem1_crossover();
    a.chain_holds = a.rhs_exact <= a.rhs_paper && a.rhs_paper < a.lhs;
    if (!a.below_range && !a.chain_holds) {
        throw verification_error("Theorem 1 inequality chain fails at q=" + to_string(q));
    }
    return a;
}

}  // namespace elkies
