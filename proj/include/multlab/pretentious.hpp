#pragma once

// Pretentious distance D(f, g; x) and scans for the nearest chi(n) n^{it}.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "multlab/characters.hpp"
#include "multlab/multfunc.hpp"

namespace multlab {

struct DistanceResult {
    u64 x = 0;
    double value = 0.0;    // D(f, g; x)
    double squared = 0.0;  // D^2
    u64 summand_count = 0; // primes p <= x
};

// D(f,g;x)^2 = sum_{p <= x} (1 - Re f(p) conj g(p)) / p, twists included.
inline DistanceResult distance(const MultFunc& f, const MultFunc& g, const Sieve& sieve, u64 x)
{
    if (x > sieve.limit())
        throw RangeError("distance: x exceeds sieve limit");
    CompensatedSum s;
    DistanceResult r;
    r.x = x;
    for (u32 p : sieve.primes()) {
        if (p > x)
            break;
        const cplx a = f.twisted_prime_power(p, 1).to_complex();
        const cplx b = g.twisted_prime_power(p, 1).to_complex();
        s.add((1.0 - (a * std::conj(b)).real()) / static_cast<double>(p));
        ++r.summand_count;
    }
    r.squared = std::max(0.0, s.value());
    r.value = std::sqrt(r.squared);
    return r;
}

// D^2 at each checkpoint in one pass (checkpoints increasing).
inline std::vector<DistanceResult> distance_profile(const MultFunc& f, const MultFunc& g, const Sieve& sieve,
                                                    const std::vector<u64>& checkpoints)
{
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw ConfigError("distance_profile: checkpoints must be increasing");
    if (!checkpoints.empty() && checkpoints.back() > sieve.limit())
        throw RangeError("distance_profile: checkpoint exceeds sieve limit");
    std::vector<DistanceResult> out;
    CompensatedSum s;
    u64 count = 0;
    std::size_t next = 0;
    auto emit = [&](u64 x) {
        const double sq = std::max(0.0, s.value());
        out.push_back({x, std::sqrt(sq), sq, count});
    };
    for (u32 p : sieve.primes()) {
        while (next < checkpoints.size() && checkpoints[next] < p)
            emit(checkpoints[next++]);
        if (next == checkpoints.size())
            break;
        const cplx a = f.twisted_prime_power(p, 1).to_complex();
        const cplx b = g.twisted_prime_power(p, 1).to_complex();
        s.add((1.0 - (a * std::conj(b)).real()) / static_cast<double>(p));
        ++count;
    }
    while (next < checkpoints.size())
        emit(checkpoints[next++]);
    return out;
}

struct PretenderEntry {
    u64 q = 1;
    u64 index = 0;
    double t = 0.0;
    double distance = 0.0;
    double squared = 0.0;
};

struct PretenderScan {
    u64 x = 0;
    u64 Q = 1;
    double T = 0.0;
    double step = 0.0;
    u64 grid_points = 0;
    std::vector<PretenderEntry> table; // ranked, best first

    const PretenderEntry& best() const { return table.front(); }
};

inline double default_t_step(u64 x) { return 1.0 / std::log(static_cast<double>(x)); }

// Symmetric grid j * step, |j| <= T / step; always contains 0, and halving
// the step keeps every old point bit for bit.
inline std::vector<double> t_grid(double T, double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw ConfigError("t grid: step must be positive");
    if (!(T >= 0.0) || !std::isfinite(T))
        throw ConfigError("t grid: empty range");
    const auto J = static_cast<i64>(std::floor(T / step + 1e-9));
    std::vector<double> g;
    for (i64 j = -J; j <= J; ++j)
        g.push_back(static_cast<double>(j) * step);
    return g;
}

// D(f, chi n^{it}; x) for every character of modulus <= Q and t on the grid.
inline PretenderScan pretender_scan(const MultFunc& f, const Sieve& sieve, u64 x, u64 Q, double T, double step)
{
    if (Q < 1)
        throw ConfigError("pretender_scan: Q must be at least 1");
    if (x < 2 || x > sieve.limit())
        throw RangeError("pretender_scan: x outside [2, sieve limit]");
    const auto grid = t_grid(T, step);

    const auto primes = sieve.primes_upto(x);
    std::vector<cplx> fp(primes.size());
    std::vector<double> logp(primes.size());
    CompensatedSum recip;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        fp[i] = f.twisted_prime_power(primes[i], 1).to_complex() / static_cast<double>(primes[i]);
        logp[i] = std::log(static_cast<double>(primes[i]));
        recip.add(1.0 / static_cast<double>(primes[i]));
    }
    const double total = recip.value();

    std::vector<std::vector<DirichletCharacter>> chars(Q + 1);
    for (u64 q = 1; q <= Q; ++q)
        chars[q] = enumerate_characters(q);

    PretenderScan scan{x, Q, T, step, grid.size(), {}};
    std::vector<cplx> z(primes.size());
    for (double t : grid) {
        for (std::size_t i = 0; i < primes.size(); ++i)
            z[i] = t == 0.0 ? fp[i] : fp[i] * std::polar(1.0, -t * logp[i]);
        for (u64 q = 1; q <= Q; ++q) {
            // Residue-class sums A_r = sum_{p = r mod q} f(p) p^{-it} / p.
            std::vector<CompensatedComplexSum> A(q);
            for (std::size_t i = 0; i < primes.size(); ++i)
                A[primes[i] % q].add(z[i]);
            for (const auto& chi : chars[q]) {
                CompensatedSum corr;
                for (u64 r = 0; r < q; ++r) {
                    const auto a = chi.angle(static_cast<i64>(r));
                    if (a >= 0)
                        corr.add((A[r].value() * std::conj(chi.value(static_cast<i64>(r)))).real());
                }
                const double sq = std::max(0.0, total - corr.value());
                scan.table.push_back({q, chi.index(), t, std::sqrt(sq), sq});
            }
        }
    }
    std::stable_sort(scan.table.begin(), scan.table.end(), [](const auto& a, const auto& b) {
        if (a.squared != b.squared)
            return a.squared < b.squared;
        if (a.q != b.q)
            return a.q < b.q;
        if (a.index != b.index)
            return a.index < b.index;
        return std::abs(a.t) < std::abs(b.t) || (std::abs(a.t) == std::abs(b.t) && a.t < b.t);
    });
    return scan;
}

inline PretenderScan pretender_scan(const MultFunc& f, const Sieve& sieve, u64 x, u64 Q, double T)
{
    return pretender_scan(f, sieve, x, Q, T, default_t_step(x));
}

} // namespace multlab
