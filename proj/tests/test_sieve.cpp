#include <gtest/gtest.h>

#include <cmath>

#include "brute_force.hpp"
#include "elkies/sieve.hpp"

using namespace elkies;

TEST(Sieve, FlatSieveMatchesTrialDivision) {
    const auto table = primes_up_to(50000);
    std::size_t idx = 0;
    for (std::uint64_t n = 0; n <= 50000; ++n) {
        if (!brute::is_prime(n)) continue;
        ASSERT_LT(idx, table.prime_pi());
        ASSERT_EQ(table.primes()[idx++], n);
    }
    EXPECT_EQ(idx, table.prime_pi());
}

TEST(Sieve, KnownPrimeCounts) {
    EXPECT_EQ(primes_up_to(0).prime_pi(), 0u);
    EXPECT_EQ(primes_up_to(1).prime_pi(), 0u);
    EXPECT_EQ(primes_up_to(2).prime_pi(), 1u);
    EXPECT_EQ(primes_up_to(10).prime_pi(), 4u);
    EXPECT_EQ(primes_up_to(1000000).prime_pi(), 78498u);
    EXPECT_EQ(primes_up_to(10000000).prime_pi(), 664579u);
}

TEST(Sieve, SegmentedAgreesWithFlatAcrossTheSwitch) {
    const auto seg = detail::segmented_sieve(3000017);
    const auto flat = detail::flat_sieve(3000017);
    EXPECT_EQ(seg, flat);
    const auto big = primes_up_to(25000000);  // segmented path
    EXPECT_EQ(big.prime_pi(), 1565927u);
    EXPECT_EQ(big.prime_pi(10000000), 664579u);
    EXPECT_EQ(big.primes().back(), 24999983u);
}

TEST(Sieve, PrimePiQueriesAndBounds) {
    const auto t = primes_up_to(100);
    EXPECT_EQ(t.prime_pi(100), 25u);
    EXPECT_EQ(t.prime_pi(97), 25u);
    EXPECT_EQ(t.prime_pi(96), 24u);
    EXPECT_TRUE(t.contains(89));
    EXPECT_FALSE(t.contains(91));
    EXPECT_THROW(t.prime_pi(101), invalid_input_error);
}

TEST(Sieve, MemoryBudgetIsEnforced) {
    EXPECT_THROW(primes_up_to(1000000, 1024), resource_error);
    EXPECT_THROW(primes_up_to(std::uint64_t(1) << 62), resource_error);
}

TEST(Chebyshev, SmallValues) {
    const auto pt = chebyshev_psi_theta(10);
    EXPECT_NEAR(pt.psi, 7.83201418050547, 1e-12);
    EXPECT_NEAR(pt.theta, 5.34710753071747, 1e-12);
    EXPECT_NEAR(pt.psi_minus_theta, std::log(2.0) * 2 + std::log(3.0), 1e-12);
    EXPECT_NEAR(chebyshev_psi_theta(100).psi_minus_theta, 10.3169208302872, 1e-10);
}

TEST(Chebyshev, GapStaysUnderTheUnconditionalBound) {
    const auto table = primes_up_to(1000000);
    for (double X = 2; X <= 1e6; X *= 1.37) {
        const auto pt = chebyshev_psi_theta(X, table);
        ASSERT_LE(pt.psi_minus_theta, psi_theta_gap_bound(X)) << X;
        ASSERT_GE(pt.psi_minus_theta, 0);
    }
}

TEST(Chebyshev, PsiMatchesBruteForceVonMangoldt) {
    const auto table = primes_up_to(3000);
    double acc = 0;
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        acc += brute::von_mangoldt(n);
        if (n % 97 == 0) {
            ASSERT_NEAR(chebyshev_psi_theta(double(n), table).psi, acc, 1e-9) << n;
        }
    }
}

TEST(CompensatedSum, RecoversCancelledLowBits) {
    CompensatedSum s;
    s += 1e16;
    for (int i = 0; i < 1000; ++i) s += 1.0;
    s += -1e16;
    EXPECT_DOUBLE_EQ(s.value(), 1000.0);
}
