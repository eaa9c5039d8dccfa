// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "../brute_force.hpp"
#include "cli.hpp"
#include "elkies/elkies.hpp"

using namespace elkies;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Timer {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Appends to the detail and clears pass when `ok` is false.
void check(Outcome& o, bool ok, const std::string& what) {
    if (!ok) o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += (ok ? "" : "FAILED ") + what;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome table_reproduction() {
    Outcome o;
    Timer timer;
    const auto rep = render_tables();
    const double secs = timer.seconds();
    std::size_t c2_diffs = 0, c1_diffs = 0;
    for (const auto& d : rep.diffs) (d.kind == TableKind::c1 ? c1_diffs : c2_diffs)++;
    check(o, c2_diffs == 0, fmt("C2 odd/even cells differing: %zu of 198", c2_diffs));
    const auto& odd = rep.tables[1].cells;
    const auto& even = rep.tables[2].cells;
    check(o, odd[0][0] == "3.475" && odd[8][10] == "0.855" && even[0][0] == "3.850",
          "C2(10,3,odd)=" + odd[0][0] + " C2(2048,2048,odd)=" + odd[8][10] + " C2(10,3,even)=" + even[0][0]);
    const auto& c1 = rep.tables[0].cells[0];
    check(o, c1[0] == "0.629" && c1[1] == "0.507", "C1 reproduces " + c1[0] + " and " + c1[1]);
    check(o, c1_diffs == 7, fmt("C1 known mismatches flagged: %zu", c1_diffs));
    std::ostringstream out, err;
    const int code = cli::run({"tables", "--which", "1"}, out, err);
    check(o, code == 0, fmt("tables --which 1 exit %d", code));
    check(o, secs < 1.0, fmt("%.3f s", secs));
    return o;
}

Outcome theorem1_audit_check() {
    Outcome o;
    Timer timer;
    const auto a = theorem1_audit(1000000000);
    const double secs = timer.seconds();
    check(o, std::fabs(a.rhs_exact - 47.996) <= 1e-3, fmt("rhs_exact=%.6f", a.rhs_exact));
    check(o, std::fabs(a.rhs_paper - 48.147) <= 1e-3 && std::fabs(a.rhs_paper - (1.902 * a.log4q + 6.094)) < 1e-12,
          fmt("rhs_paper=%.6f", a.rhs_paper));
    check(o, std::fabs(a.lhs - 48.219) <= 1e-3 && std::fabs(a.lhs - a.sqrtX) < 1e-12, fmt("lhs=%.6f", a.lhs));
    check(o, std::fabs(a.log4q - 22.1096) <= 1e-3, fmt("log4q=%.6f", a.log4q));
    check(o, a.rhs_exact <= a.rhs_paper && a.rhs_paper < a.lhs, "rhs_exact <= rhs_paper < lhs");
    check(o, std::fabs(a.crossover_L - 21.37) < 5e-3 && std::fabs(a.crossover_q / 1e8 - 4.8) < 0.05,
          fmt("crossover L=%.4f q=%.4g", a.crossover_L, a.crossover_q));
    check(o, a.crossover_q < 1e9, "crossover below q = 1e9");
    check(o, secs < 0.1, fmt("%.4f s", secs));
    return o;
}

Outcome small_discriminants() {
    Outcome o;
    Timer timer;
    const auto rep = small_disc_audit_report(2048, 40);
    const double secs = timer.seconds();
    std::string bad;
    for (const auto& v : rep.violations) bad += " " + to_string(v.D) + "->" + std::to_string(v.least);
    check(o, rep.violations.empty(),
          fmt("%zu discriminants, %zu with least split prime >= 40", rep.entries.size(), rep.violations.size()) +
              (bad.empty() ? "" : " (" + bad.substr(1) + ")"));
    o.detail += fmt("; worst least %llu at D=%s", (unsigned long long)rep.worst_least.least,
                    to_string(rep.worst_least.D).c_str());
    check(o, secs < 1.0, fmt("%.3f s", secs));
    return o;
}

int brute_kronecker(std::int64_t D, std::uint64_t ell) {
    if (ell != 2) return brute::legendre(D, ell);
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
}

Outcome counting_identity() {
    Outcome o;
    Timer timer;
    constexpr std::uint64_t x_max = 100000;
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 2; n < x_max; ++n) {
        if (brute::is_prime(n)) primes.push_back(n);
    }
    const auto table = primes_up_to(x_max);
    std::mt19937_64 rng(4);
    int cases = 0, mismatches = 0, residual_bad = 0;
    std::string first;
    while (cases < 1000) {
        const std::uint64_t q = 5 + rng() % (1000000 - 5);
        if (!brute::is_prime(q)) continue;
        const auto b = std::int64_t(isqrt(4 * u128(q)));
        const std::int64_t t = std::int64_t(rng() % std::uint64_t(2 * b + 1)) - b;
        const std::int64_t D = t * t - 4 * std::int64_t(q);
        if (D == 0) continue;
        const std::uint64_t X = 2 + rng() % (x_max - 2);
        const auto ctx = frobenius_context(q, t);

        std::int64_t elkies = 0, pi = 0, sum_chi = 0, ramified = 0;
        for (std::uint64_t ell : primes) {
            if (ell > X) break;
            const int c = brute_kronecker(D, ell);
            ++pi;
            sum_chi += c;
            if (ell == q) continue;
            if (c == 1) ++elkies;
            if (c == 0) ++ramified;
        }
        const std::int64_t twice_a = q > X ? 0 : (t % std::int64_t(q) == 0 ? 1 : 2);
        const bool exact = 2 * elkies == pi + sum_chi - twice_a - ramified;
        const auto id = counting_identity_check(ctx, X, table);
        const bool agrees = std::int64_t(id.lhs) == elkies && std::int64_t(id.prime_pi) == pi &&
                            id.sum_chi == sum_chi && std::int64_t(id.ramified_count) == ramified &&
                            2 * id.rhs_exact == double(2 * elkies);
        if (!exact || !agrees) {
            if (mismatches++ == 0) first = fmt(" first at q=%llu t=%lld X=%llu", (unsigned long long)q, (long long)t,
                                               (unsigned long long)X);
        }
        if (std::fabs(id.paper_residual) > 0.5 * id.omega_m) ++residual_bad;
        ++cases;
    }
    const double secs = timer.seconds();
    check(o, mismatches == 0, fmt("%d cases, %d identity mismatches", cases, mismatches) + first);
    check(o, residual_bad == 0, fmt("uncorrected-form residual above omega(m)/2 in %d cases", residual_bad));
    check(o, secs < 60, fmt("%.2f s", secs));
    return o;
}

Outcome deviation() {
    Outcome o;
    Timer timer;
    constexpr std::uint64_t x_max = 1000000;
    const auto table = primes_up_to(x_max);
    std::vector<std::uint64_t> grid;
    for (double e = 0.5; e <= 6.0001; e += 0.05) grid.push_back(std::uint64_t(std::llround(std::pow(10.0, e))));
    grid.front() = 3;
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.back() = x_max;

    std::mt19937_64 rng(5);
    std::vector<FrobeniusContext> ctxs;
    while (ctxs.size() < 20) {
        const std::uint64_t p = 1000000000 + rng() % 100001;
        if (!is_prime(p)) continue;
        try {
            ctxs.push_back(trace_from_curve(make_curve(p, i128(rng() % p), i128(rng() % p))));
        } catch (const invalid_input_error&) {
        }
    }
    double worst = 0;
    std::string where;
    for (const auto& ctx : ctxs) {
        for (const auto& r : deviation_sweep(ctx, grid, table)) {
            if (r.ratio > worst) {
                worst = r.ratio;
                where = fmt("q=%s t=%s X=%llu", to_string(ctx.q).c_str(), to_string(ctx.t).c_str(),
                            (unsigned long long)r.X);
            }
        }
    }
    const double secs = timer.seconds();
    check(o, worst < 1.0, fmt("20 contexts x %zu X values, max ratio %.4f (", grid.size(), worst) + where + ")");
    check(o, secs < 600, fmt("%.2f s", secs));
    return o;
}

Outcome bound_scan() {
    Outcome o;
    Timer timer;
    ScanConfig cfg;
    cfg.q_lo = 1000000000;
    cfg.q_hi = 1000010000;
    cfg.sample = 10;
    cfg.seed = 6;
    cfg.jobs = jobs();
    const auto rep = least_elkies_scan(cfg);
    const double secs = timer.seconds();
    std::uint64_t traces = 0;
    bool all_prime = true;
    for (const auto& row : rep.rows) {
        traces += row.traces;
        all_prime = all_prime && row.k == 1;
    }
    check(o, rep.rows.size() == 10 && all_prime, fmt("%zu primes sampled", rep.rows.size()));
    check(o, rep.passed(),
          fmt("%llu traces, max least Elkies prime %llu against bound %.1f, %llu counterexamples",
              (unsigned long long)traces, (unsigned long long)rep.max_least, least_elkies_bound(cfg.q_lo),
              (unsigned long long)rep.counterexamples));
    check(o, secs < 300, fmt("%.2f s", secs));
    return o;
}

Outcome explicit_formula() {
    Outcome o;
    Timer timer;
    const double grid[] = {50, 100, 1000};
    double sup[3] = {0, 0, 0};
    const std::size_t counts[] = {0, 10, 100};
    bool within = true;
    for (int i = 0; i < 3; ++i) {
        const auto zeros = counts[i] ? embedded_zeros(counts[i]) : ZeroData{};
        for (double X : grid) {
            const double err = std::fabs(weighted_psi_sum(X) - rhs_zeta(X, zeros));
            sup[i] = std::max(sup[i], err);
            if (counts[i] == 100) within = within && err <= 0.05 * std::sqrt(X);
        }
    }
    check(o, within, "error <= 0.05 sqrt(X) with 100 zeros");
    check(o, sup[0] > sup[1] && sup[1] > sup[2], fmt("sup error %.5f > %.5f > %.5f for T = 0, 10, 100", sup[0], sup[1], sup[2]));
    // The closed terms are checked against an independent mpmath evaluation;
    // 48.18203 differs from it by about 1.1e-4.
    const double closed = rhs_zeta(100, ZeroData{});
    check(o, std::fabs(closed - 48.18192347000134) <= 1e-4,
          fmt("rhs_zeta(100, no zeros)=%.8f (mpmath 48.18192347, listed 48.18203, diff %.2e)", closed,
              closed - 48.18203));
    const double secs = timer.seconds();
    check(o, secs < 1.0, fmt("%.3f s", secs));
    return o;
}

Outcome decomposition() {
    Outcome o;
    Timer timer;
    const auto table = primes_up_to(100000);
    std::mt19937_64 rng(8);
    int cases = 0, identity_bad = 0, s3_bad = 0, gap_bad = 0;
    double worst_residual = 0;
    while (cases < 500) {
        const std::uint64_t q = 5 + rng() % 1000000000;
        if (!prime_power(q)) continue;
        const auto b = std::int64_t(isqrt(4 * u128(q)));
        const std::int64_t t = std::int64_t(rng() % std::uint64_t(2 * b + 1)) - b;
        FrobeniusContext ctx;
        try {
            ctx = frobenius_context(q, t);
        } catch (const invalid_input_error&) {
            continue;
        }
        const double X = 10 + double(rng() % 99991);
        const auto d = decompose(ctx, X, table);
        worst_residual = std::max(worst_residual, d.relative_residual);
        identity_bad += !(d.relative_residual <= 1e-9);
        s3_bad += !(std::fabs(d.S3) <= 2 * d.psi_minus_theta);
        gap_bad += !(2 * d.psi_minus_theta <= 3 * std::sqrt(X));
        ++cases;
    }
    check(o, identity_bad == 0, fmt("%d contexts, max relative residual %.2e", cases, worst_residual));
    check(o, s3_bad == 0 && gap_bad == 0, fmt("|S3| <= 2(psi-theta) <= 3 sqrt(X) violated %d/%d times", s3_bad, gap_bad));
    // mpmath evaluation of the worked example. The listed hand values
    // (-3.37637, 3.14751, 1.05149, 0.82263) are off by up to 5.3e-5 in S1 and S.
    const auto w = decompose(frobenius_context(5, -3), 10);
    const bool example = std::fabs(w.S1 + 3.37641732076) <= 1e-5 && std::fabs(w.S2 - 3.14749511657) <= 1e-5 &&
                         std::fabs(w.S3 - 1.05149907441) <= 1e-5 && std::fabs(w.S - 0.822576870211) <= 1e-5;
    check(o, example,
          fmt("ctx(5,-3) X=10: S1=%.7f S2=%.7f S3=%.7f S=%.7f (listed differ by %.1e %.1e %.1e %.1e)", w.S1, w.S2,
              w.S3, w.S, w.S1 + 3.37637, w.S2 - 3.14751, w.S3 - 1.05149, w.S - 0.82263));
    const double secs = timer.seconds();
    check(o, secs < 30, fmt("%.2f s", secs));
    return o;
}

Outcome point_counting() {
    Outcome o;
    std::mt19937_64 rng(2024);
    int done = 0, mismatches = 0;
    while (done < 200) {
        const std::uint64_t p = 1000 + rng() % 99001;
        if (!is_prime(p)) continue;
        CurvePrimeField c;
        try {
            c = make_curve(p, i128(rng() % p), i128(rng() % p));
        } catch (const invalid_input_error&) {
            continue;
        }
        mismatches += count_points_bsgs(c) != count_points_naive(c);
        ++done;
    }
    check(o, mismatches == 0, fmt("naive vs BSGS on %d curves, %d mismatches", done, mismatches));
    double slowest = 0;
    bool hasse = true;
    for (std::uint64_t p : {999999937ull, 1000000007ull, 1000000009ull, 1000000021ull, 1000000033ull}) {
        const auto c = make_curve(p, i128(rng() % p), i128(rng() % p));
        Timer timer;
        const std::uint64_t n = count_points_bsgs(c);
        slowest = std::max(slowest, timer.seconds());
        const auto bound = std::uint64_t(isqrt(u128(4) * p));
        hasse = hasse && n + bound >= p + 1 && n <= p + 1 + bound;
    }
    check(o, hasse && slowest < 1.0, fmt("BSGS near 1e9: slowest %.3f s per curve", slowest));
    const auto n5 = count_points(make_curve(5, 1, 1), CountMethod::automatic);
    check(o, n5 == 9 && brute::count_points(5, 1, 1) == 9, fmt("p=5 a=1 b=1: #E=%llu", (unsigned long long)n5));
    return o;
}

Outcome grh_conditional() {
    Outcome o;
    constexpr std::uint64_t limit = 10'000'000;
    const auto table = primes_up_to(limit);
    const WeightedPsiCurve curve(table);
    double worst = 0, worst_x = 0;
    std::uint64_t failures = 0;
    for (std::uint64_t n = 10; n <= limit; ++n) {
        const double X = double(n);
        const double ratio = std::fabs(curve(X) - X / 2) / std::sqrt(X);
        if (ratio > worst) {
            worst = ratio;
            worst_x = X;
        }
        failures += ratio > 0.629;
    }
    check(o, failures == 0,
          fmt("|psi_w(X) - X/2|/sqrt(X) on every integer X in [10, 1e7]: max %.4f at X=%.0f, %llu above 0.629", worst,
              worst_x, (unsigned long long)failures));

    std::mt19937_64 rng(20240601);
    const auto small = primes_up_to(100000);
    int done = 0, over = 0;
    double frac = 0;
    std::string finding;
    while (done < 200) {
        const std::uint64_t q = 5 + rng() % 1000000000;
        if (!prime_power(q)) continue;
        const auto b = std::int64_t(isqrt(4 * u128(q)));
        const std::int64_t t = std::int64_t(rng() % std::uint64_t(2 * b + 1)) - b;
        FrobeniusContext ctx;
        try {
            ctx = frobenius_context(q, t);
        } catch (const invalid_input_error&) {
            continue;
        }
        const double X = 10 + double(rng() % 99991);
        const auto spec = character_spec(ctx);
        const double bound = primitive_sum_bound(spec, X);
        const double s = weighted_chi_sum(spec, X, true, small);
        frac = std::max(frac, std::fabs(s) / bound);
        if (!(std::fabs(s) <= bound) && over++ == 0) {
            finding = fmt(" first: q=%llu t=%lld X=%.0f sum=%.4f bound=%.4f", (unsigned long long)q, (long long)t, X, s,
                          bound);
        }
        ++done;
    }
    check(o, over == 0, fmt("primitive sums on %d contexts: max |sum|/bound %.4f, %d above", done, frac, over) + finding);
    return o;
}

const std::function<Outcome()> criteria[] = {
    table_reproduction, theorem1_audit_check, small_discriminants, counting_identity, deviation,
    bound_scan,         explicit_formula,     decomposition,       point_counting,    grh_conditional,
};

bool run_one(int n) {
    Outcome o;
    try {
        o = criteria[n - 1]();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    constexpr int count = int(std::size(criteria));
    if (argc == 3 && std::string(argv[1]) == "--criterion") {
        const int n = std::atoi(argv[2]);
        if (n < 1 || n > count) {
            std::cerr << "criterion must be 1.." << count << '\n';
            return 2;
        }
        return run_one(n) ? 0 : 1;
    }
    if (argc != 1) {
        std::cerr << "usage: acceptance [--criterion N]\n";
        return 2;
    }
    int failed = 0;
    for (int n = 1; n <= count; ++n) failed += !run_one(n);
    return failed ? 1 : 0;
}
