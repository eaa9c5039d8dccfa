#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "elkies/arith.hpp"
#include "elkies/curve.hpp"
#include "elkies/errors.hpp"
#include "elkies/int128.hpp"
#include "elkies/parallel.hpp"
#include "elkies/sieve.hpp"

namespace elkies {

// The Kronecker character chi_E(n) = (D|n) modulo m = |D| and the primitive
// character (D0|n) of conductor |D0| inducing it, where D = D0 f^2.
struct CharacterSpec {
    i128 D = 0;
    u128 m = 0;
    i128 D0 = 0;
    u128 f = 0;
    u128 conductor = 0;

    int chi(i128 n) const { return kronecker(D, n); }
    int chi_primitive(i128 n) const { return kronecker(D0, n); }
    bool odd() const { return D0 < 0; }
};

inline CharacterSpec character_spec_from_discriminant(i128 D) {
    const i128 r4 = ((D % 4) + 4) % 4;
    if (D == 0 || (r4 != 0 && r4 != 1)) throw invalid_input_error("not a discriminant: " + to_string(D));
    if (is_perfect_square(D)) throw invalid_input_error("square discriminant has no quadratic character: " + to_string(D));
    u128 squarefree = 1, square_root = 1;
    for (const auto& pf : factorize(uabs(D))) {
        if (pf.exponent & 1) squarefree *= pf.prime;
        for (unsigned i = 0; i < pf.exponent / 2; ++i) square_root *= pf.prime;
    }
    const i128 d = D < 0 ? -i128(squarefree) : i128(squarefree);
    CharacterSpec spec;
    spec.D = D;
    spec.m = uabs(D);
    if (((d % 4) + 4) % 4 == 1) {
        spec.D0 = d;
        spec.f = square_root;
    } else {
        spec.D0 = 4 * d;
        spec.f = square_root / 2;
    }
    spec.conductor = uabs(spec.D0);
    return spec;
}

inline CharacterSpec character_spec(const FrobeniusContext& ctx) { return character_spec_from_discriminant(ctx.D); }

enum class PrimeClass { elkies, atkin_inert, atkin_ramified, excluded_char };

inline const char* to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::elkies: return "Elkies";
        case PrimeClass::atkin_inert: return "AtkinInert";
        case PrimeClass::atkin_ramified: return "AtkinRamified";
        case PrimeClass::excluded_char: return "ExcludedChar";
    }
    return "?";
}

namespace detail {

inline PrimeClass classify_symbol(const FrobeniusContext& ctx, u128 ell, int symbol) {
    if (ell == ctx.p) return PrimeClass::excluded_char;
    if (symbol == 1) return PrimeClass::elkies;
    return symbol == -1 ? PrimeClass::atkin_inert : PrimeClass::atkin_ramified;
}

inline const PrimeTable& small_prime_table() {
    static const PrimeTable table = primes_up_to(1u << 20);
    return table;
}

// Visits primes 2, 3, 5, ... up to `cutoff` until `visit` returns true.
template <class F>
std::optional<std::uint64_t> first_prime_where(std::uint64_t cutoff, F&& visit) {
    const auto& table = small_prime_table();
    for (std::uint64_t ell : table.primes()) {
        if (ell > cutoff) return std::nullopt;
        if (visit(ell)) return ell;
    }
    for (std::uint64_t ell = table.limit() + 1; ell <= cutoff; ++ell) {
        if (is_prime(ell) && visit(ell)) return ell;
    }
    return std::nullopt;
}

}  // namespace detail

inline PrimeClass classify_prime(const FrobeniusContext& ctx, u128 ell) {
    if (!is_prime(ell)) throw invalid_input_error("classify_prime: " + to_string(ell) + " is not prime");
    return detail::classify_symbol(ctx, ell, kronecker(ctx.D, i128(ell)));
}

// Raised when no Elkies prime exists up to the cutoff.
class elkies_not_found_error : public verification_error {
public:
    explicit elkies_not_found_error(std::uint64_t cutoff)
        : verification_error("no Elkies prime <= " + std::to_string(cutoff)), cutoff_(cutoff) {}
    std::uint64_t cutoff() const { return cutoff_; }

private:
    std::uint64_t cutoff_;
};

inline std::optional<std::uint64_t> find_least_elkies_prime(const FrobeniusContext& ctx, std::uint64_t cutoff) {
    return detail::first_prime_where(cutoff, [&](std::uint64_t ell) {
        return ell != ctx.p && kronecker(ctx.D, i128(ell)) == 1;
    });
}

inline std::uint64_t least_elkies_prime(const FrobeniusContext& ctx, std::uint64_t cutoff) {
    if (cutoff < 2) throw invalid_input_error("least_elkies_prime: cutoff must be >= 2");
    if (auto ell = find_least_elkies_prime(ctx, cutoff)) return *ell;
    throw elkies_not_found_error(cutoff);
}

// (2 log 4q + 4)^2
inline double least_elkies_bound(u128 q) {
    const double l = double(std::log(4.0L * to_long_double(q)));
    return (2 * l + 4) * (2 * l + 4);
}

inline std::uint64_t least_elkies_cutoff(u128 q) { return std::uint64_t(std::ceil(least_elkies_bound(q))); }

struct ElkiesCounts {
    std::uint64_t elkies = 0;
    std::uint64_t atkin_inert = 0;
    std::uint64_t atkin_ramified = 0;
    std::uint64_t excluded = 0;

    std::uint64_t total() const { return elkies + atkin_inert + atkin_ramified + excluded; }
};

inline void require_table(const PrimeTable& table, std::uint64_t X) {
    if (X > table.limit()) throw invalid_input_error("prime table limit " + std::to_string(table.limit()) + " below X");
}

inline ElkiesCounts count_elkies(const FrobeniusContext& ctx, std::uint64_t X, const PrimeTable& table) {
    if (X < 2) throw invalid_input_error("count_elkies requires X >= 2");
    require_table(table, X);
    ElkiesCounts c;
    for (std::uint64_t ell : table.primes()) {
        if (ell > X) break;
        switch (detail::classify_symbol(ctx, ell, kronecker(ctx.D, i128(ell)))) {
            case PrimeClass::elkies: ++c.elkies; break;
            case PrimeClass::atkin_inert: ++c.atkin_inert; break;
            case PrimeClass::atkin_ramified: ++c.atkin_ramified; break;
            case PrimeClass::excluded_char: ++c.excluded; break;
        }
    }
    return c;
}

inline ElkiesCounts count_elkies(const FrobeniusContext& ctx, std::uint64_t X) {
    return count_elkies(ctx, X, primes_up_to(X));
}

// a_E(X) doubled: 0 when p > X, 1 when p | t, 2 otherwise.
inline int twice_a_E(const FrobeniusContext& ctx, std::uint64_t X) {
    if (ctx.p > X) return 0;
    return ctx.supersingular ? 1 : 2;
}

inline double a_E(const FrobeniusContext& ctx, std::uint64_t X) {
    if (X < 2) throw invalid_input_error("a_E requires X >= 2");
    return twice_a_E(ctx, X) / 2.0;
}

struct IdentityCheck {
    std::uint64_t X = 0;
    std::uint64_t lhs = 0;
    double rhs_exact = 0;
    double rhs_paper = 0;
    std::uint64_t ramified_count = 0;
    std::uint64_t prime_pi = 0;
    std::int64_t sum_chi = 0;
    double a_E = 0;
    unsigned omega_m = 0;
    double paper_residual = 0;  // lhs - rhs_paper
};

// N_E(X) = pi(X)/2 + (1/2) sum chi_E(l) - a_E(X) - (1/2) #{l <= X : l | D, l != p}.
// Checked in half-integers so the comparison is exact.
inline IdentityCheck counting_identity_check(const FrobeniusContext& ctx, std::uint64_t X, const PrimeTable& table) {
    if (X < 2) throw invalid_input_error("counting_identity_check requires X >= 2");
    require_table(table, X);
    IdentityCheck r;
    r.X = X;
    for (std::uint64_t ell : table.primes()) {
        if (ell > X) break;
        ++r.prime_pi;
        const int s = kronecker(ctx.D, i128(ell));
        r.sum_chi += s;
        const PrimeClass c = detail::classify_symbol(ctx, ell, s);
        if (c == PrimeClass::elkies) ++r.lhs;
        if (c == PrimeClass::atkin_ramified) ++r.ramified_count;
    }
    const int twice_a = twice_a_E(ctx, X);
    r.a_E = twice_a / 2.0;
    const std::int64_t twice_paper = std::int64_t(r.prime_pi) + r.sum_chi - twice_a;
    const std::int64_t twice_exact = twice_paper - std::int64_t(r.ramified_count);
    r.rhs_paper = twice_paper / 2.0;
    r.rhs_exact = twice_exact / 2.0;
    r.paper_residual = double(r.lhs) - r.rhs_paper;
    r.omega_m = omega_and_radical(ctx.m).omega;
    if (2 * std::int64_t(r.lhs) != twice_exact) {
        throw verification_error("counting identity violated at q=" + to_string(ctx.q) + " t=" + to_string(ctx.t) +
                                 " X=" + std::to_string(X));
    }
    if (std::fabs(r.paper_residual) > 0.5 * r.omega_m) {
        throw verification_error("uncorrected-form residual exceeds omega(m)/2 at q=" + to_string(ctx.q) +
                                 " t=" + to_string(ctx.t) + " X=" + std::to_string(X));
    }
    return r;
}

inline IdentityCheck counting_identity_check(const FrobeniusContext& ctx, std::uint64_t X) {
    return counting_identity_check(ctx, X, primes_up_to(X));
}

struct DeviationReport {
    std::uint64_t X = 0;
    std::uint64_t elkies = 0;
    std::uint64_t prime_pi = 0;
    double delta = 0;  // |N_E(X) - pi(X)/2|
    double bound = 0;  // sqrt(X) (log qX)^2 / log X
    double ratio = 0;
};

inline DeviationReport make_deviation(const FrobeniusContext& ctx, std::uint64_t X, std::uint64_t elkies,
                                      std::uint64_t pi) {
    DeviationReport r;
    r.X = X;
    r.elkies = elkies;
    r.prime_pi = pi;
    r.delta = std::fabs(double(elkies) - double(pi) / 2);
    const double lx = std::log(double(X));
    const double lqx = double(std::log(to_long_double(ctx.q) * (long double)X));
    r.bound = std::sqrt(double(X)) * lqx * lqx / lx;
    r.ratio = r.delta / r.bound;
    return r;
}

// One pass over the primes, reporting at each X of an ascending grid.
inline std::vector<DeviationReport> deviation_sweep(const FrobeniusContext& ctx, std::span<const std::uint64_t> grid,
                                                    const PrimeTable& table) {
    std::vector<DeviationReport> out;
    if (grid.empty()) return out;
    if (!std::is_sorted(grid.begin(), grid.end())) throw invalid_input_error("deviation grid must be ascending");
    if (grid.front() < 3) throw invalid_input_error("deviation report requires X >= 3");
    require_table(table, grid.back());
    std::uint64_t elkies = 0, pi = 0;
    std::size_t gi = 0;
    const auto primes = table.primes();
    std::size_t pi_idx = 0;
    for (; gi < grid.size(); ++gi) {
        while (pi_idx < primes.size() && primes[pi_idx] <= grid[gi]) {
            const std::uint64_t ell = primes[pi_idx++];
            ++pi;
            if (ell != ctx.p && kronecker(ctx.D, i128(ell)) == 1) ++elkies;
        }
        out.push_back(make_deviation(ctx, grid[gi], elkies, pi));
    }
    return out;
}

inline DeviationReport deviation_report(const FrobeniusContext& ctx, std::uint64_t X, const PrimeTable& table) {
    const std::uint64_t grid[1] = {X};
    return deviation_sweep(ctx, grid, table).front();
}

inline DeviationReport deviation_report(const FrobeniusContext& ctx, std::uint64_t X) {
    return deviation_report(ctx, X, primes_up_to(std::max<std::uint64_t>(X, 3)));
}

struct DiscAuditEntry {
    i128 D = 0;
    std::uint64_t least = 0;
    std::uint64_t second = 0;
};

struct DiscAuditReport {
    std::uint64_t limit = 0;
    std::uint64_t cutoff = 0;
    std::vector<DiscAuditEntry> entries;  // D descending from -3
    DiscAuditEntry worst_least;
    DiscAuditEntry worst_second;
    std::vector<DiscAuditEntry> violations;  // least >= cutoff

    bool passed() const { return violations.empty(); }
};

// The two smallest split primes ((D|l) = 1) of every discriminant -limit < D <= -3.
inline DiscAuditReport small_disc_audit_report(std::uint64_t limit = 2048, std::uint64_t cutoff = 40) {
    if (limit < 4) throw invalid_input_error("small_disc_audit requires limit >= 4");
    DiscAuditReport rep;
    rep.limit = limit;
    rep.cutoff = cutoff;
    for (i128 D = -3; D > -i128(limit); --D) {
        const i128 r4 = ((D % 4) + 4) % 4;
        if (r4 != 0 && r4 != 1) continue;
        DiscAuditEntry e;
        e.D = D;
        int found = 0;
        detail::first_prime_where(~std::uint64_t(0), [&](std::uint64_t ell) {
            if (kronecker(D, i128(ell)) != 1) return false;
            (found++ == 0 ? e.least : e.second) = ell;
            return found == 2;
        });
        rep.entries.push_back(e);
        if (e.least > rep.worst_least.least) rep.worst_least = e;
        if (e.second > rep.worst_second.second) rep.worst_second = e;
        if (e.least >= cutoff) rep.violations.push_back(e);
    }
    return rep;
}

class disc_audit_failure : public verification_error {
public:
    explicit disc_audit_failure(DiscAuditReport report)
        : verification_error(describe(report)), report_(std::move(report)) {}
    const DiscAuditReport& report() const { return report_; }

private:
    static std::string describe(const DiscAuditReport& r) {
        std::string s = "least split prime >= " + std::to_string(r.cutoff) + " for D in {";
        for (std::size_t i = 0; i < r.violations.size(); ++i) {
            s += (i ? ", " : "") + to_string(r.violations[i].D);
        }
        return s + "}";
    }
    DiscAuditReport report_;
};

inline DiscAuditReport small_disc_audit(std::uint64_t limit = 2048, std::uint64_t cutoff = 40) {
    auto rep = small_disc_audit_report(limit, cutoff);
    if (!rep.passed()) throw disc_audit_failure(std::move(rep));
    return rep;
}

struct ScanConfig {
    u128 q_lo = 0;
    u128 q_hi = 0;
    std::uint64_t sample = 10;
    std::optional<std::uint64_t> t_sample;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct ScanRow {
    u128 q = 0;
    u128 p = 0;
    unsigned k = 0;
    std::uint64_t traces = 0;
    std::uint64_t cutoff = 0;
    double bound = 0;
    std::uint64_t max_least = 0;
    i128 argmax_t = 0;
    double mean_least = 0;
    std::vector<i128> counterexamples;  // traces with no Elkies prime <= cutoff
};

struct ScanReport {
    ScanConfig config;
    std::vector<ScanRow> rows;
    std::uint64_t max_least = 0;
    std::uint64_t counterexamples = 0;

    bool passed() const { return counterexamples == 0; }
};

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) { return n ? rng() % n : 0; }

inline u128 uniform_below(std::mt19937_64& rng, u128 n) {
    if (fits_u64(n)) return uniform_below(rng, std::uint64_t(n));
    const u128 r = (u128(rng()) << 64) | rng();
    return r % n;
}

inline std::vector<u128> sample_prime_powers(const ScanConfig& cfg) {
    std::vector<u128> out;
    if (cfg.q_hi < cfg.q_lo || cfg.sample == 0) return out;
    std::mt19937_64 rng(cfg.seed);
    const u128 width = cfg.q_hi - cfg.q_lo + 1;
    if (width <= (u128(1) << 22)) {
        std::vector<u128> all;
        for (u128 q = cfg.q_lo; q <= cfg.q_hi; ++q) {
            if (prime_power(q)) all.push_back(q);
        }
        if (all.size() > cfg.sample) {
            for (std::size_t i = 0; i < cfg.sample; ++i) {
                const std::size_t j = i + std::size_t(uniform_below(rng, std::uint64_t(all.size() - i)));
                std::swap(all[i], all[j]);
            }
            all.resize(cfg.sample);
        }
        out = std::move(all);
    } else {
        const std::uint64_t attempts = 20000 * cfg.sample + 1000;
        for (std::uint64_t i = 0; i < attempts && out.size() < cfg.sample; ++i) {
            const u128 q = cfg.q_lo + uniform_below(rng, width);
            if (prime_power(q) && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<FrobeniusContext> sample_traces(u128 q, std::uint64_t t_sample, std::uint64_t seed) {
    const u128 bound = isqrt(4 * q);
    if (u128(t_sample) >= 2 * bound + 1) return enumerate_traces(q);
    std::mt19937_64 rng(seed ^ std::uint64_t(q) ^ std::uint64_t(q >> 64));
    std::vector<i128> ts;
    const std::uint64_t attempts = 100 * t_sample + 100;
    for (std::uint64_t i = 0; i < attempts && ts.size() < t_sample; ++i) {
        const i128 t = i128(uniform_below(rng, 2 * bound + 1)) - i128(bound);
        const i128 D = t * t - i128(4 * q);
        if (D == 0 || is_perfect_square(D)) continue;
        if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    std::vector<FrobeniusContext> out;
    for (i128 t : ts) out.push_back(frobenius_context(q, t));
    return out;
}

}  // namespace detail

// Least Elkies prime against (2 log 4q + 4)^2 over sampled prime powers q and
// all (or a sample of) admissible traces.
inline ScanReport least_elkies_scan(const ScanConfig& cfg) {
    if (cfg.q_lo < 5) throw invalid_input_error("scan requires q_lo >= 5");
    ScanReport rep;
    rep.config = cfg;
    const auto qs = detail::sample_prime_powers(cfg);
    rep.rows = parallel_map(qs.size(), cfg.jobs, [&](std::size_t i) {
        const u128 q = qs[i];
        const auto ctxs = cfg.t_sample ? detail::sample_traces(q, *cfg.t_sample, cfg.seed) : enumerate_traces(q);
        ScanRow row;
        row.q = q;
        const auto pp = *prime_power(q);
        row.p = pp.prime;
        row.k = pp.exponent;
        row.bound = least_elkies_bound(q);
        row.cutoff = least_elkies_cutoff(q);
        row.traces = ctxs.size();
        double sum = 0;
        for (const auto& ctx : ctxs) {
            const auto ell = find_least_elkies_prime(ctx, row.cutoff);
            if (!ell) {
                row.counterexamples.push_back(ctx.t);
                continue;
            }
            sum += double(*ell);
            if (*ell > row.max_least) {
                row.max_least = *ell;
                row.argmax_t = ctx.t;
            }
        }
        const std::size_t found = ctxs.size() - row.counterexamples.size();
        row.mean_least = found ? sum / double(found) : 0;
        return row;
    });
    for (const auto& row : rep.rows) {
        rep.max_least = std::max(rep.max_least, row.max_least);
        rep.counterexamples += row.counterexamples.size();
    }
    return rep;
}

class counterexample_error : public verification_error {
public:
    explicit counterexample_error(ScanReport report)
        : verification_error(std::to_string(report.counterexamples) +
                             " context(s) with no Elkies prime below (2 log 4q + 4)^2"),
          report_(std::move(report)) {}
    const ScanReport& report() const { return report_; }

private:
    ScanReport report_;
};

inline ScanReport verify_least_elkies_bound(const ScanConfig& cfg) {
    auto rep = least_elkies_scan(cfg);
    if (!rep.passed()) throw counterexample_error(std::move(rep));
    return rep;
}

}  // namespace elkies
