#include <gtest/gtest.h>

#include <random>

#include "multlab/multfunc.hpp"

using namespace multlab;

namespace {

const Sieve& sieve()
{
    static const Sieve s(200'000);
    return s;
}

// Exact random function: f(p^k) = e(a/b) or 0, with a small random b.
MultFunc random_exact(std::mt19937_64& rng, bool complete)
{
    const u64 seed = rng();
    return MultFunc("rand", complete, [seed](u64 p, unsigned k) {
        std::mt19937_64 r(seed ^ (p * 1000003u + k));
        const i64 b = 1 + static_cast<i64>(r() % 12);
        if (r() % 17 == 0)
            return UnitValue::zero();
        return UnitValue::root(static_cast<i64>(r() % static_cast<u64>(b)), b);
    });
}

} // namespace

TEST(Evaluate, Examples)
{
    EXPECT_EQ(evaluate(funcs::liouville(), sieve(), 12), UnitValue::root(1, 2));
    EXPECT_EQ(evaluate(funcs::constant_root(1, 3), sieve(), 4), UnitValue::root(2, 3));
    const auto alt = funcs::alternating();
    EXPECT_EQ(evaluate(alt, sieve(), 6), UnitValue::root(1, 2));
    EXPECT_EQ(evaluate(alt, sieve(), 9), UnitValue::one());
    for (u64 n = 1; n <= 1000; ++n)
        ASSERT_EQ(evaluate(alt, sieve(), n), n % 2 ? UnitValue::one() : UnitValue::root(1, 2)) << n;
    EXPECT_THROW(evaluate(alt, sieve(), 200'001), RangeError);
}

TEST(Evaluate, TwistIsApprox)
{
    const auto f = twist(funcs::one(), 0.5);
    const auto v = evaluate(f, sieve(), 10);
    EXPECT_TRUE(v.is_approx());
    EXPECT_NEAR(std::arg(v.to_complex()), 0.5 * std::log(10.0), 1e-12);
}

TEST(Combine, Examples)
{
    const auto l2 = combine(funcs::liouville(), funcs::one(), CombineMode::power(2));
    for (u64 n = 1; n <= 500; ++n)
        ASSERT_EQ(evaluate(l2, sieve(), n), UnitValue::one());
    const auto r = combine(funcs::one(), funcs::one(), CombineMode::truncate_rough(3));
    EXPECT_TRUE(evaluate(r, sieve(), 10).is_zero());
    EXPECT_EQ(evaluate(r, sieve(), 35), UnitValue::one());
    const auto f = funcs::constant_angle(0.137);
    const auto ff = product(f, conjugate(f));
    for (u64 n = 1; n <= 500; ++n)
        ASSERT_NEAR(std::abs(evaluate(ff, sieve(), n).to_complex() - 1.0), 0.0, 1e-12);
    EXPECT_THROW(power(f, 0), ConfigError);
    EXPECT_THROW(truncate_rough(f, 1), ConfigError);
}

TEST(FromAdditive, Examples)
{
    const auto one = from_additive([](u64) { return Rational{0, 1}; });
    const auto lam = from_additive([](u64) { return Rational{1, 2}; });
    for (u64 n = 1; n <= 500; ++n) {
        ASSERT_EQ(evaluate(one, sieve(), n), UnitValue::one());
        ASSERT_EQ(evaluate(lam, sieve(), n), evaluate(funcs::liouville(), sieve(), n));
    }
    // e(1/q_j) on A_j: Omega_{A_j}(n) mod q_j is read off the value.
    const auto w = from_additive([](u64 p) { return p % 4 == 1 ? Rational{1, 2} : p % 4 == 3 ? Rational{1, 3} : Rational{0, 1}; });
    const auto v = evaluate(w, sieve(), 5 * 5 * 3 * 7);
    EXPECT_EQ(v, UnitValue::root(2, 3)); // 2/2 + 2/3
    const auto bad = from_additive([](u64) { return AdditiveValue{0.1}; });
    EXPECT_THROW(evaluate(bad, sieve(), 6), UnsupportedError);
}

TEST(Multiplicativity, Exhaustive)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        const auto f = random_exact(rng, false);
        const auto g = random_exact(rng, true);
        for (u64 m = 1; m <= 300; ++m)
            for (u64 n = 1; n <= 300; ++n) {
                const auto gm = evaluate(g, sieve(), m * n);
                ASSERT_EQ(gm, evaluate(g, sieve(), m) * evaluate(g, sieve(), n));
                if (std::gcd(m, n) == 1) {
                    ASSERT_EQ(evaluate(f, sieve(), m * n), evaluate(f, sieve(), m) * evaluate(f, sieve(), n));
                }
            }
    }
}

TEST(Multiplicativity, CompleteFlagIsEnforced)
{
    // Rule disagrees with complete multiplicativity at k = 2; the flag wins.
    const MultFunc f("bad", true, [](u64, unsigned k) { return k == 1 ? UnitValue::root(1, 3) : UnitValue::one(); });
    EXPECT_EQ(f.prime_power(5, 2), UnitValue::root(2, 3));
}

TEST(Exactness, RandomCompositions)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<u64> pick(1, 5000);
    for (int it = 0; it < 1000; ++it) {
        MultFunc f = random_exact(rng, it % 2);
        const int steps = 1 + static_cast<int>(rng() % 4);
        for (int s = 0; s < steps; ++s) {
            switch (rng() % 3) {
            case 0:
                f = product(f, random_exact(rng, true));
                break;
            case 1:
                f = conjugate(f);
                break;
            default:
                f = power(f, 1 + static_cast<unsigned>(rng() % 4));
            }
        }
        const auto v = evaluate(f, sieve(), pick(rng));
        ASSERT_TRUE(v.is_exact());
    }
}

TEST(Projection, Examples)
{
    const auto g = nearest_root_projection(funcs::constant_angle(0.13), 4, 0.0);
    EXPECT_EQ(g.prime_power(7, 1), UnitValue::root(1, 4));
    const auto h = nearest_root_projection(funcs::constant_root(1, 8), 4, 0.0);
    EXPECT_EQ(h.prime_power(7, 1), UnitValue::one());
    const auto k = nearest_root_projection(funcs::constant_root(7, 8), 4, 0.0);
    EXPECT_EQ(k.prime_power(7, 1), UnitValue::one()); // tie between 3/4 and 1 wraps to 0
    const auto fixed = nearest_root_projection(funcs::constant_root(2, 6), 3, 0.0);
    EXPECT_EQ(fixed.prime_power(11, 1), UnitValue::root(1, 3));
    const auto z = nearest_root_projection(truncate_rough(funcs::one(), 3), 4, 0.0);
    EXPECT_THROW(z.prime_power(2, 1), DomainError);
}

TEST(Projection, AngularBound)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    Sieve s(10'000);
    for (int it = 0; it < 20; ++it) {
        const double seedv = U(rng);
        const MultFunc f("rand", true, [seedv](u64 p, unsigned) { return UnitValue::from_angle(seedv * static_cast<double>(p * p % 977) / 977.0 + 0.01 * static_cast<double>(p)); });
        const u64 K = 1 + rng() % 12;
        const double t = (it % 3) ? U(rng) * 4 - 2 : 0.0;
        const auto g = nearest_root_projection(f, K, t);
        for (u32 p : s.primes()) {
            const cplx w = f.prime_power(p, 1).to_complex() * std::polar(1.0, -t * std::log(double(p))) *
                           std::conj(g.prime_power(p, 1).to_complex());
            ASSERT_LE(std::abs(std::arg(w)), std::numbers::pi / static_cast<double>(K) + 1e-12);
        }
    }
}

TEST(Tabulate, MatchesEvaluate)
{
    const u64 X = 100'000;
    std::mt19937_64 rng(9);
    std::vector<MultFunc> fs{funcs::liouville(), funcs::alternating(), random_exact(rng, false),
                             funcs::constant_angle(0.3), twist(funcs::liouville(), 1.5),
                             truncate_rough(funcs::constant_root(1, 3), 5)};
    for (const auto& f : fs) {
        const auto tab = tabulate(f, sieve(), X);
        EXPECT_EQ(tab.exact(), f.t() == 0.0 && f.name() != funcs::constant_angle(0.3).name());
        for (u64 n = 1; n <= X; ++n) {
            const auto v = evaluate(f, sieve(), n);
            ASSERT_NEAR(std::abs(tab[n] - v.to_complex()), 0.0, 1e-9) << f.name() << " " << n;
            if (tab.exact()) {
                ASSERT_EQ(tab.value(n), v);
            }
        }
    }
    EXPECT_THROW(tabulate(funcs::one(), sieve(), 300'000), RangeError);
}
