#pragma once

// Logarithmic densities of doubly-rough integers in progressions, of the
// structured set {n : g(n) = g(An+1)} inside them, thin-set divisor sums,
// and a longest-progression search.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "multlab/multfunc.hpp"

namespace multlab {

struct DensityReport {
    std::string constraint;
    u64 x = 0;
    u64 members = 0;
    double log_sum = 0.0;        // sum of 1/n over members
    double empirical = 0.0;      // log_sum / log x
    double predicted = 0.0;      // stated main-term coefficient of log x
    double local_density = 0.0;  // exact density from residues mod primes <= N (0 when not available)
    double slack = 0.0;          // 4^{pi(N)} / log x
    double ratio = 0.0;          // empirical / predicted
    double local_ratio = 0.0;    // empirical / local_density
    std::vector<u64> sample;     // first members
};

namespace detail {

inline u64 checked_pow(u64 b, unsigned e)
{
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        r *= b;
        if (r >> 62)
            throw ConfigError("density: (2q)^T too large");
    }
    return static_cast<u64>(r);
}

inline void finish(DensityReport& r, u64 N, std::size_t sample_size)
{
    const double lx = std::log(static_cast<double>(r.x));
    r.empirical = r.log_sum / lx;
    r.slack = std::pow(4.0, static_cast<double>(small_primes_upto(N).size())) / lx;
    r.ratio = r.predicted > 0 ? r.empirical / r.predicted : 0.0;
    r.local_ratio = r.local_density > 0 ? r.empirical / r.local_density : 0.0;
    if (r.sample.size() > sample_size)
        r.sample.resize(sample_size);
}

} // namespace detail

inline constexpr std::size_t kDensitySample = 20;

// sum_{n <= x, n = a (q), P^-(n((2q)^T n + 1)) > N} 1/n against
// (3/4) q^{-1} prod_{3 <= p <= N, p !| q} (1 - 2/p).
inline DensityReport rough_ap_density(u64 q, u64 a, unsigned T, u64 N, u64 x)
{
    if (q < 1 || x < 2)
        throw ConfigError("rough_ap_density: need q >= 1 and x >= 2");
    if (N < 2)
        throw ConfigError("rough_ap_density: N must be at least 2");
    const auto primes = small_primes_upto(N);
    if (primes.size() > 12)
        throw ConfigError("rough_ap_density: pi(N) above 12");
    a %= q;
    const u64 A = detail::checked_pow(2 * q, T);
    if (static_cast<unsigned __int128>(A) * x + 1 >= (static_cast<unsigned __int128>(1) << 63))
        throw ConfigError("rough_ap_density: (2q)^T x overflows");
    {
        const u64 b = static_cast<u64>((static_cast<unsigned __int128>(A) * a + 1) % q);
        if (std::gcd(a, q) != 1 || std::gcd(b, q) != 1)
            throw DomainError("rough_ap_density: need gcd(a((2q)^T a + 1), q) = 1");
    }
    DensityReport r;
    r.x = x;
    r.constraint = "n <= x, n = " + std::to_string(a) + " mod " + std::to_string(q) + ", P^-(n(" +
                   std::to_string(A) + "n+1)) > " + std::to_string(N);
    r.predicted = 0.75 / static_cast<double>(q);
    r.local_density = 1.0 / static_cast<double>(q);
    for (u64 p : primes) {
        if (p >= 3 && q % p != 0)
            r.predicted *= 1.0 - 2.0 / static_cast<double>(p);
        if (q % p == 0)
            continue; // fixed by the progression and the hypothesis
        u64 good = 0;
        for (u64 n = 0; n < p; ++n)
            if (n % p != 0 && (A % p * n + 1) % p != 0)
                ++good;
        r.local_density *= static_cast<double>(good) / static_cast<double>(p);
    }
    CompensatedSum s;
    for (u64 n = a == 0 ? q : a; n <= x; n += q) {
        const u64 m = A * n + 1;
        bool ok = true;
        for (u64 p : primes)
            if (n % p == 0 || m % p == 0) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        ++r.members;
        s.add(1.0 / static_cast<double>(n));
        if (r.sample.size() < kDensitySample)
            r.sample.push_back(n);
    }
    r.log_sum = s.value();
    detail::finish(r, N, kDensitySample);
    return r;
}

namespace detail {

// Angles of g(A n + B) over denominator l for n = 1..x, by sieving the
// progression with primes up to sqrt(A x + B). Requires g(p)^l = 1.
class AffineAngles {
public:
    AffineAngles(const MultFunc& g, u64 l, const Sieve& sieve) : g_(g), l_(l), sieve_(sieve) {}

    std::vector<std::uint32_t> compute(u64 A, u64 B, u64 x) const
    {
        const u64 top = A * x + B;
        const auto root = static_cast<u64>(std::sqrt(static_cast<double>(top))) + 1;
        if (root > sieve_.limit())
            throw RangeError("affine angles: sqrt(Ax + B) exceeds sieve limit");
        const auto primes = sieve_.primes_upto(root);
        std::vector<std::uint32_t> ang(x + 1, 0);
        const u64 block = u64{1} << 16;
        std::vector<u64> rest(block);
        for (u64 lo = 1; lo <= x; lo += block) {
            const u64 hi = std::min(x, lo + block - 1);
            for (u64 n = lo; n <= hi; ++n)
                rest[n - lo] = A * n + B;
            for (u64 p : primes) {
                // n with p | A n + B.
                u64 start, step = p;
                if (A % p == 0) {
                    if (B % p != 0)
                        continue;
                    start = lo;
                    step = 1;
                } else {
                    const auto inv = static_cast<u64>(mod_inverse(static_cast<i64>(A % p), static_cast<i64>(p)));
                    const u64 r = static_cast<u64>((static_cast<unsigned __int128>(p - B % p) % p * inv) % p);
                    start = lo + (r + p - lo % p) % p;
                }
                const u64 ap = angle_of(p);
                for (u64 n = start; n <= hi; n += step) {
                    u64& v = rest[n - lo];
                    while (v % p == 0) {
                        v /= p;
                        ang[n] = static_cast<std::uint32_t>((ang[n] + ap) % l_);
                    }
                }
            }
            for (u64 n = lo; n <= hi; ++n)
                if (rest[n - lo] > 1)
                    ang[n] = static_cast<std::uint32_t>((ang[n] + angle_of(rest[n - lo])) % l_);
        }
        return ang;
    }

private:
    u64 angle_of(u64 p) const
    {
        const UnitValue v = g_.prime_power(p, 1);
        if (!v.is_root() || l_ % v.as_root().den != 0)
            throw DomainError("structured density: g(" + std::to_string(p) + ") is not an l-th root of unity");
        return v.as_root().num * (l_ / v.as_root().den);
    }

    const MultFunc& g_;
    u64 l_;
    const Sieve& sieve_;
};

} // namespace detail

// Members of {n : P^-(n(An+1)) > N, g(n) = g(An+1)}, A = (2q)^T, with
// predicted density (3/(4l)) prod_{3 <= p <= N} (1 - 2/p), l = mk the order.
inline DensityReport structured_set_density(const MultFunc& g, u64 l, u64 q, unsigned T, u64 N, u64 x,
                                            const Sieve& sieve, std::vector<u64>* members = nullptr)
{
    if (l < 1)
        throw DomainError("structured_set_density: order must be positive");
    if (g.t() != 0.0 || !g.completely_multiplicative())
        throw DomainError("structured_set_density: g must be completely multiplicative of finite order");
    if (q < 1 || x < 2 || N < 2)
        throw ConfigError("structured_set_density: need q >= 1, x >= 2, N >= 2");
    const auto primes = small_primes_upto(N);
    if (primes.size() > 12)
        throw ConfigError("structured_set_density: pi(N) above 12");
    const u64 A = detail::checked_pow(2 * q, T);
    const detail::AffineAngles angles(g, l, sieve);
    const auto gn = angles.compute(1, 0, x);
    const auto gm = angles.compute(A, 1, x);

    DensityReport r;
    r.x = x;
    r.constraint = "P^-(n(" + std::to_string(A) + "n+1)) > " + std::to_string(N) + ", g(n) = g(" +
                   std::to_string(A) + "n+1), order " + std::to_string(l);
    r.predicted = 0.75 / static_cast<double>(l);
    for (u64 p : primes)
        if (p >= 3)
            r.predicted *= 1.0 - 2.0 / static_cast<double>(p);
    CompensatedSum s;
    for (u64 n = 1; n <= x; ++n) {
        if (gn[n] != gm[n])
            continue;
        const u64 m = A * n + 1;
        bool ok = true;
        for (u64 p : primes)
            if (n % p == 0 || m % p == 0) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        ++r.members;
        s.add(1.0 / static_cast<double>(n));
        if (r.sample.size() < kDensitySample)
            r.sample.push_back(n);
        if (members)
            members->push_back(n);
    }
    r.log_sum = s.value();
    detail::finish(r, N, kDensitySample);
    return r;
}

struct ThinSums {
    std::vector<u64> checkpoints;
    std::vector<double> sum_tau;            // sum tau(n)/n over n in <S>, n <= c
    std::vector<double> sum_tau_log_ratio;  // sum tau(n) log n / n, divided by log c
    u64 elements = 0;                       // |<S> cap [1, x]|
};

// Divisor sums over the monoid generated by a finite set of primes.
inline ThinSums thin_set_sums(std::vector<u64> S, std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("thin_set_sums: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    const u64 x = checkpoints.back();
    struct Elem {
        u64 n;
        u64 tau;
    };
    std::vector<Elem> elems;
    // Depth-first over exponent vectors.
    auto rec = [&](auto&& self, std::size_t i, u64 n, u64 tau) -> void {
        if (i == S.size()) {
            elems.push_back({n, tau});
            return;
        }
        u64 m = n;
        for (u64 e = 0;; ++e) {
            self(self, i + 1, m, tau * (e + 1));
            if (m > x / S[i])
                break;
            m *= S[i];
        }
    };
    rec(rec, 0, 1, 1);
    std::sort(elems.begin(), elems.end(), [](const Elem& a, const Elem& b) { return a.n < b.n; });
    ThinSums out;
    out.checkpoints = checkpoints;
    out.elements = elems.size();
    CompensatedSum s1, s2;
    std::size_t i = 0;
    for (u64 c : checkpoints) {
        for (; i < elems.size() && elems[i].n <= c; ++i) {
            const double n = static_cast<double>(elems[i].n);
            const double t = static_cast<double>(elems[i].tau);
            s1.add(t / n);
            s2.add(t * std::log(n) / n);
        }
        out.sum_tau.push_back(s1.value());
        out.sum_tau_log_ratio.push_back(c > 1 ? s2.value() / std::log(static_cast<double>(c)) : 0.0);
    }
    return out;
}

struct Progression {
    u64 start = 0;
    u64 step = 0;
    u64 length = 0;
    friend bool operator==(const Progression&, const Progression&) = default;
};

inline constexpr std::size_t kMaxProgressionInput = 100'000;

// Longest progression inside a strictly increasing set; ties go to the
// smallest step, then the smallest start. A single element has step 0.
inline Progression longest_ap(const std::vector<u64>& members)
{
    if (members.size() > kMaxProgressionInput)
        throw SizeError("longest_ap: more than 10^5 members");
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i] <= members[i - 1])
            throw ConfigError("longest_ap: members must be strictly increasing");
    if (members.empty())
        return {};
    Progression best{members[0], 0, 1};
    if (members.size() == 1)
        return best;
    const u64 lo = members.front(), hi = members.back();
    std::vector<bool> in(hi - lo + 1, false);
    for (u64 m : members)
        in[m - lo] = true;
    auto better = [](const Progression& a, const Progression& b) {
        if (a.length != b.length)
            return a.length > b.length;
        if (a.step != b.step)
            return a.step < b.step;
        return a.start < b.start;
    };
    const std::size_t n = members.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const u64 a = members[i], d = members[j] - a;
            // Longest possible from here: (hi - a)/d + 1. Steps only grow with j.
            const u64 cap = (hi - a) / d + 1;
            if (cap < best.length || (cap == best.length && d > best.step))
                break;
            if (a >= lo + d && in[a - d - lo])
                continue; // not the first term
            u64 len = 2, next = members[j] + d;
            while (next <= hi && in[next - lo]) {
                ++len;
                next += d;
            }
            const Progression c{a, d, len};
            if (better(c, best))
                best = c;
        }
    }
    return best;
}

} // namespace multlab
