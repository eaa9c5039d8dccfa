#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <string>
#include <vector>

#include "elkies/constants.hpp"
#include "elkies/elkies_primes.hpp"
#include "elkies/errors.hpp"
#include "elkies/sieve.hpp"
#include "elkies/summation.hpp"
#include "elkies/zeta_zeros.hpp"

namespace elkies {

struct ZeroData {
    std::vector<double> ordinates;  // gamma_j > 0, strictly increasing; conjugates implied
    std::string source;

    double gamma_max() const { return ordinates.empty() ? 0.0 : ordinates.back(); }
};

class zero_data_error : public invalid_input_error {
public:
    zero_data_error(std::size_t line, const std::string& what)
        : invalid_input_error("zero data line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// One decimal ordinate per line; blank lines and '#' comments are skipped.
inline ZeroData load_zeros(std::istream& in, std::string source) {
    ZeroData z;
    z.source = std::move(source);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        double g = 0;
        const auto [ptr, ec] = std::from_chars(b, e, g);
        if (ec != std::errc() || ptr != e) throw zero_data_error(lineno, "not a decimal number: '" + std::string(b, e) + "'");
        if (!(g > 0) || !std::isfinite(g)) throw zero_data_error(lineno, "ordinate must be a positive real");
        if (!z.ordinates.empty() && !(g > z.ordinates.back())) {
            throw zero_data_error(lineno, "ordinates must be strictly increasing");
        }
        z.ordinates.push_back(g);
    }
    return z;
}

inline ZeroData load_zeros_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input_error("cannot open zero file: " + path);
    return load_zeros(in, path);
}

inline ZeroData embedded_zeros(std::size_t count = embedded_zeta_zeros.size()) {
    if (count > embedded_zeta_zeros.size()) throw invalid_input_error("only 100 embedded zeros available");
    ZeroData z;
    z.ordinates.assign(embedded_zeta_zeros.begin(), embedded_zeta_zeros.begin() + std::ptrdiff_t(count));
    z.source = std::string(embedded_zeros_source);
    return z;
}

struct ExplicitFormulaConstants {
    static constexpr double glaisher_log = 0.248754477033784262;  // log A
    static constexpr double zeta_log_deriv_at_0 = 1.83787706640934548;  // log 2 pi
    // zeta'(-1) / zeta(-1) = (1/12 - log A) / (-1/12) = 12 log A - 1
    static constexpr double zeta_log_deriv_at_minus1 = 12 * glaisher_log - 1;
};

// 2 Re(X^rho / (rho (rho + 1))) summed over the stored ordinates, rho = 1/2 + i gamma,
// largest gamma first so the small terms are absorbed before the big ones.
inline double zero_sum(double X, const ZeroData& zeros) {
    if (!(X >= 1)) throw invalid_input_error("zero_sum requires X >= 1");
    const double lx = std::log(X);
    const double sx = std::sqrt(X);
    CompensatedSum s;
    for (auto it = zeros.ordinates.rbegin(); it != zeros.ordinates.rend(); ++it) {
        const double g = *it;
        const std::complex<double> rho(0.5, g);
        const std::complex<double> xr = sx * std::polar(1.0, g * lx);
        s += 2 * (xr / (rho * (rho + 1.0))).real();
    }
    return s.value();
}

namespace detail {

inline void require_above_one(double X, const char* what) {
    if (!(X > 1)) throw invalid_input_error(std::string(what) + " requires X > 1");
}

// 1/2 log(1 - 1/X^2) and 1/2 log(1 + 2/(X - 1)), both via log1p.
inline double half_log_minus(double X) { return 0.5 * std::log1p(-1 / (X * X)); }
inline double half_log_plus(double X) { return 0.5 * std::log1p(2 / (X - 1)); }

}  // namespace detail

inline double rhs_zeta(double X, const ZeroData& zeros) {
    detail::require_above_one(X, "rhs_zeta");
    using C = ExplicitFormulaConstants;
    return X / 2 - zero_sum(X, zeros) + C::zeta_log_deriv_at_minus1 / X - C::zeta_log_deriv_at_0 -
           detail::half_log_minus(X) - detail::half_log_plus(X) / X;
}

// l_log_deriv is L'/L at 0 for odd characters and at -1 for even ones.
inline double rhs_chi(double X, const ZeroData& zeros, Parity parity, double b_chi, double l_log_deriv) {
    detail::require_above_one(X, "rhs_chi");
    const double zs = zero_sum(X, zeros);
    const double lx = std::log(X);
    if (parity == Parity::odd) {
        return -zs - l_log_deriv + b_chi / X + lx / X + detail::half_log_plus(X) + detail::half_log_minus(X) / X;
    }
    return -zs + l_log_deriv / X - b_chi - lx - detail::half_log_minus(X) - detail::half_log_plus(X) / X;
}

namespace detail {

// Bernoulli numbers B_2 .. B_20.
inline constexpr double bernoulli_even[] = {1.0 / 6,     -1.0 / 30,    1.0 / 42,        -1.0 / 30,     5.0 / 66,
                                            -691.0 / 2730, 7.0 / 6,    -3617.0 / 510,   43867.0 / 798, -174611.0 / 330};

// Hurwitz zeta(s, a) and d/ds zeta(s, a) by Euler-Maclaurin with N direct terms.
inline std::pair<double, double> hurwitz_zeta_and_derivative(double s, double a) {
    constexpr int N = 24;
    CompensatedSum z, dz;
    for (int n = N - 1; n >= 0; --n) {
        const double y = n + a;
        const double ys = std::pow(y, -s);
        z += ys;
        dz += -std::log(y) * ys;
    }
    const double y = N + a;
    const double ly = std::log(y);
    const double y1s = std::pow(y, 1 - s);
    z += y1s / (s - 1);
    dz += -ly * y1s / (s - 1) - y1s / ((s - 1) * (s - 1));
    const double ys = std::pow(y, -s);
    z += 0.5 * ys;
    dz += -0.5 * ly * ys;
    double factorial = 1;
    for (int j = 1; j <= 10; ++j) {
        factorial *= double(2 * j - 1) * double(2 * j);
        double P = 1, dP_over_P = 0;
        for (int i = 0; i <= 2 * j - 2; ++i) {
            P *= s + i;
            dP_over_P += 1 / (s + i);
        }
        const double yp = std::pow(y, -s - 2 * j + 1);
        const double c = bernoulli_even[j - 1] / factorial;
        z += c * P * yp;
        dz += c * yp * (P * dP_over_P - P * ly);
    }
    return {z.value(), dz.value()};
}

}  // namespace detail

// Conductors at or below this use the Hurwitz route for L'/L(2, chi).
inline constexpr std::uint64_t hurwitz_conductor_limit = 100'000;
inline constexpr std::uint64_t dirichlet_series_terms = 10'000'000;

struct LogDerivAt2 {
    double value = 0;
    std::string method;         // "hurwitz" or "series"
    std::uint64_t terms = 0;    // residues mod k, or the series cutoff N
    double truncation = 0;      // bound on the neglected series tail; 0 for hurwitz
};

// L'(2, chi)/L(2, chi) for the primitive character (D0|.) carried by a CharacterSpec.
inline LogDerivAt2 l_log_deriv_at_2(const CharacterSpec& spec) {
    LogDerivAt2 r;
    const u128 k = spec.conductor;
    if (k <= hurwitz_conductor_limit) {
        const double kd = double(std::uint64_t(k));
        CompensatedSum L, dL;
        for (std::uint64_t a = 1; a < std::uint64_t(k); ++a) {
            const int c = kronecker(spec.D0, i128(a));
            if (c == 0) continue;
            const auto [z, dz] = detail::hurwitz_zeta_and_derivative(2.0, double(a) / kd);
            L += c * z;
            dL += c * dz;
        }
        // L(s) = k^{-s} sum chi(a) zeta(s, a/k), so L'/L = -log k + sum chi dz / sum chi z.
        r.value = -std::log(kd) + dL.value() / L.value();
        r.method = "hurwitz";
        r.terms = std::uint64_t(k);
        return r;
    }
    const auto table = primes_up_to(dirichlet_series_terms);
    CompensatedSum s;
    std::uint64_t last_p = 0;
    int chi_p = 0;
    for_each_prime_power(table, dirichlet_series_terms, [&](std::uint64_t p, std::uint64_t n, unsigned kk) {
        if (p != last_p) {
            last_p = p;
            chi_p = kronecker(spec.D0, i128(p));
        }
        if (chi_p == 0) return;
        const int chi_n = (chi_p < 0 && (kk & 1)) ? -1 : 1;
        const double nd = double(n);
        s += -chi_n * std::log(double(p)) / (nd * nd);
    });
    r.value = s.value();
    r.method = "series";
    r.terms = dirichlet_series_terms;
    // sum_{n > N} Lambda(n)/n^2 <= 2 * 1.03883 / N from psi(x) <= 1.03883 x
    r.truncation = 2.07766 / double(dirichlet_series_terms);
    return r;
}

struct BChi {
    double value = 0;
    double l_log_deriv_2 = 0;
    double zero_term = 0;  // the folded zero sums
    Parity parity = Parity::odd;
    LogDerivAt2 series;
    std::size_t zeros_used = 0;
    double gamma_max = 0;  // the zero sums are partial up to this height
};

// odd:  L'/L(2) + sum 1/(rho(rho+1)) - sum 2/(rho(2-rho)) + log 2 - 1
// even: L'/L(2) - sum 2/(rho(2-rho))
inline BChi compute_b_chi(const CharacterSpec& spec, const ZeroData& zeros, Parity parity) {
    BChi b;
    b.parity = parity;
    b.series = l_log_deriv_at_2(spec);
    b.l_log_deriv_2 = b.series.value;
    b.zeros_used = zeros.ordinates.size();
    b.gamma_max = zeros.gamma_max();
    CompensatedSum zs;
    for (auto it = zeros.ordinates.rbegin(); it != zeros.ordinates.rend(); ++it) {
        const std::complex<double> rho(0.5, *it);
        double term = -2 * (2.0 / (rho * (2.0 - rho))).real();
        if (parity == Parity::odd) term += 2 * (1.0 / (rho * (rho + 1.0))).real();
        zs += term;
    }
    b.zero_term = zs.value();
    b.value = b.l_log_deriv_2 + b.zero_term;
    if (parity == Parity::odd) b.value += std::numbers::ln2 - 1;
    return b;
}

struct LogSeriesCheck {
    double X = 0;
    std::uint64_t K = 0;
    double lhs1 = 0, rhs1 = 0, bound1 = 0;
    double lhs2 = 0, rhs2 = 0, bound2 = 0;

    bool passed() const {
        return std::fabs(lhs1 - rhs1) <= bound1 + 4e-16 * std::fabs(lhs1) &&
               std::fabs(lhs2 - rhs2) <= bound2 + 4e-16 * std::fabs(lhs2);
    }
};

inline LogSeriesCheck log_series_check(double X, std::uint64_t K) {
    detail::require_above_one(X, "log_series_check");
    if (K < 1) throw invalid_input_error("log_series_check requires K >= 1");
    LogSeriesCheck c;
    c.X = X;
    c.K = K;
    c.lhs1 = detail::half_log_minus(X);
    c.lhs2 = detail::half_log_plus(X);
    const double inv2 = 1 / (X * X);
    CompensatedSum r1, r2;
    double pw = 1 / X;  // X^{-(2k-1)}
    // the terms shrink geometrically, so summing forward only loses the last ulp
    for (std::uint64_t k = 1; k <= K; ++k) {
        r2 += pw / double(2 * k - 1);
        r1 += -pw / X / double(2 * k);
        pw *= inv2;
        if (pw == 0) break;
    }
    c.rhs1 = r1.value();
    c.rhs2 = r2.value();
    const double geometric = 1 / (1 - inv2);
    c.bound1 = std::pow(X, -2.0 * double(K + 1)) / double(2 * K + 2) * geometric;
    c.bound2 = std::pow(X, -2.0 * double(K) - 1) / double(2 * K + 1) * geometric;
    return c;
}

// Upper bound on sum_{gamma > T} 1/gamma^2 from the zero-counting function,
// N(t) = (t/2pi) log(t/2pi e) + 7/8 + R(t), |R(t)| <= 0.137 log t + 0.443 log log t + 1.588.
inline double inverse_square_zero_tail(double T) {
    if (!(T >= 14)) throw invalid_input_error("zero tail bound requires gamma_max >= 14");
    const double lt = std::log(T);
    const double R = 0.137 * lt + 0.443 * std::log(lt) + 1.588;
    const double main = (std::log(T / (2 * std::numbers::pi)) + 1) / (2 * std::numbers::pi * T);
    // boundary terms 2R(T)/T^2 and 2 int R/t^3 with R(t) <= 2.2 log t beyond T
    return main + 2 * R / (T * T) + 1.1 * (2 * lt + 1) / (T * T);
}

// Certificate for |weighted_psi_sum(X) - rhs_zeta(X, zeros)| when the zeros are the
// first ordinates up to gamma_max.
inline double zero_tail_bound(double X, double gamma_max) {
    return std::sqrt(X) * 2 * inverse_square_zero_tail(gamma_max) + 1e-6;
}

}  // namespace elkies
