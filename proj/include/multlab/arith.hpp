#pragma once

// Integer substrate: smallest-prime-factor sieve, factorizations and the
// classical arithmetic functions derived from them.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "multlab/error.hpp"

namespace multlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;

inline constexpr u64 kDefaultSieveCap = u64{1} << 31;

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline i64 mod_floor(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline i64 mod_inverse(i64 a, i64 m)
{
    i64 g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
    while (a1) {
        i64 q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1)
        throw DomainError("mod_inverse: argument not invertible");
    return mod_floor(x, m);
}

inline u64 ipow(u64 base, unsigned exp)
{
    u64 r = 1;
    while (exp--)
        r *= base;
    return r;
}

// Primes up to n by plain trial division; used for tiny bounds only.
inline std::vector<u64> small_primes_upto(u64 n)
{
    std::vector<u64> out;
    for (u64 c = 2; c <= n; ++c) {
        bool prime = true;
        for (u64 p : out) {
            if (p * p > c)
                break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            out.push_back(c);
    }
    return out;
}

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors; // primes strictly increasing

    unsigned valuation(u64 p) const
    {
        for (const auto& pp : factors)
            if (pp.prime == p)
                return pp.exponent;
        return 0;
    }
};

// Factor by trial division. Independent of any sieve.
inline Factorization factorize_trial(u64 n)
{
    if (n == 0)
        throw DomainError("factorize_trial: n must be positive");
    Factorization f;
    f.value = n;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.push_back({p, e});
        }
    }
    if (n > 1)
        f.factors.push_back({n, 1});
    return f;
}

class Sieve {
public:
    explicit Sieve(u64 limit, u64 cap = kDefaultSieveCap)
        : limit_(limit)
    {
        if (limit < 2)
            throw ConfigError("Sieve: limit must be at least 2");
        if (limit > cap)
            throw ConfigError("Sieve: limit " + std::to_string(limit) + " exceeds cap " +
                              std::to_string(cap));
        spf_.assign(limit + 1, 0);
        // Linear sieve: each composite is written once, by its least prime.
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<u32>(i);
                primes_.push_back(static_cast<u32>(i));
            }
            const u64 si = spf_[i];
            for (u32 p : primes_) {
                if (p > si || i * p > limit)
                    break;
                spf_[i * p] = p;
            }
        }
    }

    u64 limit() const { return limit_; }

    u32 spf(u64 n) const
    {
        check(n);
        return spf_[n];
    }

    bool is_prime(u64 n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

    const std::vector<u32>& primes() const { return primes_; }

    // Primes p <= x, in increasing order.
    std::vector<u32> primes_upto(u64 x) const
    {
        auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
        return {primes_.begin(), end};
    }

    Factorization factorize(u64 n) const
    {
        if (n < 1 || n > limit_)
            throw RangeError("factorize: " + std::to_string(n) + " outside [1, " +
                             std::to_string(limit_) + "]");
        Factorization f;
        f.value = n;
        while (n > 1) {
            const u32 p = spf_[n];
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.push_back({p, e});
        }
        return f;
    }

    // True when n has a prime factor <= bound. Beyond the table this falls
    // back to trial division by the (few) primes up to bound.
    bool has_prime_factor_at_most(u64 n, u64 bound) const
    {
        if (n <= 1)
            return false;
        if (n <= limit_)
            return spf_[n] <= bound;
        for (u32 p : primes_) {
            if (p > bound)
                break;
            if (n % p == 0)
                return true;
        }
        if (bound > limit_)
            throw RangeError("has_prime_factor_at_most: bound exceeds sieve limit");
        return false;
    }

private:
    void check(u64 n) const
    {
        if (n < 2 || n > limit_)
            throw RangeError("spf: " + std::to_string(n) + " outside [2, " + std::to_string(limit_) +
                             "]");
    }

    u64 limit_;
    std::vector<u32> spf_;
    std::vector<u32> primes_;
};

inline Factorization factorize(const Sieve& sieve, u64 n) { return sieve.factorize(n); }

struct ArithmeticValues {
    unsigned omega = 0;    // distinct primes
    unsigned bigomega = 0; // with multiplicity
    int mu = 1;
    u64 rad = 1;
    u64 phi = 1;
    u64 tau = 1;
    std::vector<PrimePower> factors;

    unsigned valuation(u64 p) const
    {
        for (const auto& pp : factors)
            if (pp.prime == p)
                return pp.exponent;
        return 0;
    }
};

inline ArithmeticValues arith_fns(const Factorization& f)
{
    ArithmeticValues v;
    v.factors = f.factors;
    for (const auto& [p, e] : f.factors) {
        ++v.omega;
        v.bigomega += e;
        v.mu = (e >= 2) ? 0 : -v.mu;
        v.rad *= p;
        v.phi *= (p - 1) * ipow(p, e - 1);
        v.tau *= e + 1;
    }
    return v;
}

// A set of primes, either an explicit finite list or a membership rule.
class PrimeSet {
public:
    PrimeSet() : PrimeSet(std::vector<u64>{}) {}

    static PrimeSet from_list(std::vector<u64> primes)
    {
        return PrimeSet(std::move(primes));
    }

    static PrimeSet from_predicate(std::function<bool(u64)> pred, std::string description)
    {
        PrimeSet s;
        s.list_.reset();
        s.pred_ = std::move(pred);
        s.description_ = std::move(description);
        return s;
    }

    // Primes p with p = residue (mod modulus) and lo < p <= hi.
    static PrimeSet congruence(u64 residue, u64 modulus, u64 lo = 0, u64 hi = ~u64{0})
    {
        if (modulus == 0)
            throw ConfigError("PrimeSet::congruence: modulus must be positive");
        residue %= modulus;
        return from_predicate(
            [=](u64 p) { return p % modulus == residue && p > lo && p <= hi; },
            "p = " + std::to_string(residue) + " mod " + std::to_string(modulus) +
                (lo ? ", p > " + std::to_string(lo) : std::string{}) +
                (hi != ~u64{0} ? ", p <= " + std::to_string(hi) : std::string{}));
    }

    static PrimeSet all()
    {
        return from_predicate([](u64) { return true; }, "all primes");
    }

    bool contains(u64 p) const
    {
        if (list_)
            return std::binary_search(list_->begin(), list_->end(), p);
        return pred_(p);
    }

    bool is_finite_list() const { return static_cast<bool>(list_); }
    const std::vector<u64>& list() const { return *list_; }
    const std::string& description() const { return description_; }

    // Members among the given primes (or the explicit list, clipped to bound).
    std::vector<u64> members_upto(u64 bound, const std::vector<u32>& universe) const
    {
        std::vector<u64> out;
        if (list_) {
            for (u64 p : *list_)
                if (p <= bound)
                    out.push_back(p);
            return out;
        }
        for (u32 p : universe) {
            if (p > bound)
                break;
            if (pred_(p))
                out.push_back(p);
        }
        return out;
    }

private:
    explicit PrimeSet(std::vector<u64> primes)
    {
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        description_ = "explicit list of " + std::to_string(primes.size()) + " primes";
        list_ = std::make_shared<const std::vector<u64>>(std::move(primes));
    }

    std::shared_ptr<const std::vector<u64>> list_;
    std::function<bool(u64)> pred_;
    std::string description_;
};

struct RestrictedValues {
    unsigned omega_s = 0; // prime factors in S, with multiplicity
    u64 tau_s = 1;        // divisors supported on S
    u64 pi_s = 1;         // largest divisor lying in <S>
};

inline RestrictedValues restricted_fns(const Factorization& f, const PrimeSet& s)
{
    RestrictedValues r;
    for (const auto& [p, e] : f.factors) {
        if (!s.contains(p))
            continue;
        r.omega_s += e;
        r.tau_s *= e + 1;
        r.pi_s *= ipow(p, e);
    }
    return r;
}

inline std::vector<u64> divisors(const Factorization& f)
{
    std::vector<u64> d{1};
    for (const auto& [p, e] : f.factors) {
        const std::size_t n = d.size();
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i)
                d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace multlab
