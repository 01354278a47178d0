#pragma once

// Experiment runners: gap and limit-point scans, the Omega congruence
// witnesses, partial sums of perturbed characters, and correlation ratios
// against a character. Each run yields a deterministic JSON report.

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multlab/characters.hpp"
#include "multlab/closedform.hpp"
#include "multlab/correlations.hpp"
#include "multlab/cyclotomic.hpp"
#include "multlab/io.hpp"
#include "multlab/multfunc.hpp"
#include "multlab/pretentious.hpp"

#ifndef MULTLAB_SOURCE_HASH
#define MULTLAB_SOURCE_HASH "unknown"
#endif

namespace multlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

inline u64 fnv1a(const std::string& s)
{
    u64 h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(u64 v)
{
    std::ostringstream o;
    o << std::hex;
    o.width(16);
    o.fill('0');
    o << v;
    return o.str();
}

enum class Verdict { Consistent, Inconsistent, Inconclusive };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Consistent:
        return "consistent";
    case Verdict::Inconsistent:
        return "inconsistent";
    default:
        return "inconclusive";
    }
}

struct Check {
    std::string name;
    Verdict verdict = Verdict::Inconclusive;
    std::string rule; // the comparison that produced the verdict
    double value = 0.0;
    double tolerance = 0.0;
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

struct ExperimentReport {
    std::string experiment;
    json config;
    json results = json::object();
    std::vector<Check> checks;
    std::vector<Series> series;

    Verdict overall() const
    {
        bool all = !checks.empty();
        for (const auto& c : checks) {
            if (c.verdict == Verdict::Inconsistent)
                return Verdict::Inconsistent;
            all = all && c.verdict == Verdict::Consistent;
        }
        return all ? Verdict::Consistent : Verdict::Inconclusive;
    }

    json to_json() const
    {
        json checks_j = json::array();
        for (const auto& c : checks)
            checks_j.push_back({{"name", c.name},
                                {"verdict", to_string(c.verdict)},
                                {"rule", c.rule},
                                {"value", c.value},
                                {"tolerance", c.tolerance}});
        return {{"schema", kReportSchema},
                {"library", {{"version", kVersion}, {"source_hash", MULTLAB_SOURCE_HASH}}},
                {"experiment", experiment},
                {"config", config},
                {"config_hash", hex64(fnv1a(config.dump()))},
                {"results", results},
                {"checks", checks_j},
                {"verdict", to_string(overall())}};
    }

    std::string dump() const { return to_json().dump(2) + "\n"; }

    // (series, checkpoint, value) rows.
    std::string csv() const
    {
        std::ostringstream o;
        o.precision(17);
        o << "series,checkpoint,value\n";
        for (const auto& s : series)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << s.name << ',' << s.x[i] << ',' << s.y[i] << '\n';
        return o.str();
    }
};

namespace detail {

inline Check check_leq(std::string name, double value, double bound, Verdict otherwise = Verdict::Inconsistent)
{
    return {std::move(name), value <= bound ? Verdict::Consistent : otherwise, "value <= tolerance", value, bound};
}

inline Check check_geq(std::string name, double value, double bound, Verdict otherwise = Verdict::Inconsistent)
{
    return {std::move(name), value >= bound ? Verdict::Consistent : otherwise, "value >= tolerance", value, bound};
}

template <class T>
std::vector<double> as_doubles(const std::vector<T>& v)
{
    return {v.begin(), v.end()};
}

} // namespace detail

// ---- gaps and limit points ------------------------------------------------

struct GapReport {
    std::string f;
    u64 x = 0;
    std::vector<u64> checkpoints;
    std::vector<double> running_min; // min_{n <= c} |f(n+1) - f(n)|
    std::vector<u64> argmin;         // first n attaining it
    u64 first_equal = 0;             // first n with f(n) = f(n+1), 0 if none

    // limit-point mode
    u64 bins = 0;
    std::vector<u64> histogram; // arg(f(n) conj f(n+1)) / 2pi over [0, 1)
    u64 samples = 0;
    double coverage = 0.0;
    std::vector<cplx> targets;
    std::vector<double> target_gap; // min_n |f(n) - z f(n+1)|
    std::vector<u64> target_argmin;
    bool exact = false;
    u64 denominator = 0; // common angle denominator of the products, exact tables

    // orbit f((2q)^l) (2q)^{-ilt}, l = 1..L
    u64 orbit_q = 0;
    double orbit_t = 0.0;
    std::vector<cplx> orbit;
    double orbit_min_distance_to_one = 0.0;
};

namespace detail {

// |e(k/L) - 1|. Rational chord lengths (Niven: k/L in {0, 1/6, 1/2, 5/6})
// come out exact.
inline double chord(std::int64_t k, std::int64_t L)
{
    k = ((k % L) + L) % L;
    if (k == 0)
        return 0.0;
    if (2 * k == L)
        return 2.0;
    if (6 * k == L || 6 * k == 5 * L)
        return 1.0;
    return 2.0 * std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
}

inline double gap_at(const ValueTable& t, const PairProduct& prod, u64 n)
{
    if (prod.exact()) {
        const bool z0 = t.is_zero(n), z1 = t.is_zero(n + 1);
        if (z0 || z1)
            return z0 && z1 ? 0.0 : 1.0;
        return chord(prod.angle(n, n + 1), prod.denominator());
    }
    return std::abs(t[n + 1] - t[n]);
}

} // namespace detail

// Running minimum of consecutive gaps at each checkpoint.
inline GapReport gap_scan(const MultFunc& f, const Sieve& sieve, std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("gap scan: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const u64 x = checkpoints.back();
    if (x + 1 > sieve.limit())
        throw RangeError("gap scan: x + 1 exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + 1);
    const detail::PairProduct prod(t, t, true);
    GapReport r;
    r.f = f.name();
    r.x = x;
    r.checkpoints = checkpoints;
    double best = std::numeric_limits<double>::infinity();
    u64 arg = 0;
    std::size_t next = 0;
    for (u64 n = 1; n <= x; ++n) {
        const double g = detail::gap_at(t, prod, n);
        if (g < best) {
            best = g;
            arg = n;
        }
        if (g == 0.0 && r.first_equal == 0)
            r.first_equal = n;
        while (next < checkpoints.size() && checkpoints[next] == n) {
            r.running_min.push_back(best);
            r.argmin.push_back(arg);
            ++next;
        }
    }
    return r;
}

// Histogram of arg(f(n) conj f(n+1)) and min_n |f(n) - z f(n+1)| per target.
inline void limit_point_scan(GapReport& r, const MultFunc& f, const Sieve& sieve, u64 x, u64 bins,
                             const std::vector<cplx>& targets)
{
    if (bins < 1)
        throw ConfigError("limit-point scan: bins must be positive");
    if (x + 1 > sieve.limit())
        throw RangeError("limit-point scan: x + 1 exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + 1);
    const detail::PairProduct prod(t, t, true);
    r.bins = bins;
    r.histogram.assign(bins, 0);
    r.samples = 0;
    r.targets = targets;
    r.target_gap.assign(targets.size(), std::numeric_limits<double>::infinity());
    r.target_argmin.assign(targets.size(), 0);
    r.exact = prod.exact();
    r.denominator = prod.exact() ? static_cast<u64>(prod.denominator()) : 0;
    for (u64 n = 1; n <= x; ++n) {
        if (t.is_zero(n) || t.is_zero(n + 1))
            continue;
        u64 bin;
        if (prod.exact()) {
            const auto a = static_cast<unsigned __int128>(prod.angle(n, n + 1));
            bin = static_cast<u64>(a * bins / static_cast<u64>(prod.denominator()));
        } else {
            double th = std::arg(prod(n, n + 1)) / (2 * std::numbers::pi);
            if (th < 0)
                th += 1.0;
            bin = std::min<u64>(bins - 1, static_cast<u64>(th * static_cast<double>(bins)));
        }
        ++r.histogram[bin];
        ++r.samples;
        const cplx a = t[n], b = t[n + 1];
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double g = std::abs(a - targets[i] * b);
            if (g < r.target_gap[i]) {
                r.target_gap[i] = g;
                r.target_argmin[i] = n;
            }
        }
    }
    const auto hit = std::count_if(r.histogram.begin(), r.histogram.end(), [](u64 c) { return c > 0; });
    r.coverage = static_cast<double>(hit) / static_cast<double>(bins);
}

// f((2q)^l) (2q)^{-ilt}, l = 1..L.
inline std::vector<cplx> power_orbit(const MultFunc& f, u64 q, double t, u64 L)
{
    std::vector<cplx> out;
    const auto fac = factorize_trial(2 * q);
    const double logm = std::log(static_cast<double>(2 * q));
    for (u64 l = 1; l <= L; ++l) {
        cplx v = 1.0;
        for (const auto& [p, e] : fac.factors)
            v *= f.prime_power(p, static_cast<unsigned>(e * l)).to_complex();
        // f itself may carry a twist n^{i t_f}.
        const double phase = (f.t() - t) * static_cast<double>(l) * logm;
        out.push_back(v * cplx{std::cos(phase), std::sin(phase)});
    }
    return out;
}

// ---- configs ---------------------------------------------------------------

struct GapConfig {
    json f = "liouville";
    std::string mode = "folk"; // folk | epsthm | scan
    u64 x = 1'000'000;
    std::string checkpoints = "geometric:6";
    double threshold = 1e-9;               // folk: min gap must reach this
    std::optional<double> min_at_least;    // scan: running min stays >= this
    std::optional<u64> expect_first_equal; // scan: first n with f(n) = f(n+1)
    // epsthm
    u64 Q = 10;
    double T = 2.0;
    std::optional<u64> orbit_q;
    std::optional<double> orbit_t;
    u64 L = 30;

    static GapConfig from_json(const json& j)
    {
        GapConfig c;
        if (j.contains("f"))
            c.f = j.at("f");
        c.mode = io::get_or<std::string>(j, "mode", c.mode);
        c.x = io::get_count_or(j, "x", c.x);
        c.checkpoints = io::get_or<std::string>(j, "checkpoints", c.checkpoints);
        c.threshold = io::get_or<double>(j, "threshold", c.threshold);
        if (j.contains("min_at_least"))
            c.min_at_least = io::get<double>(j, "min_at_least");
        if (j.contains("expect_first_equal"))
            c.expect_first_equal = io::get_count(j, "expect_first_equal");
        c.Q = io::get_count_or(j, "Q", c.Q);
        c.T = io::get_or<double>(j, "T", c.T);
        if (j.contains("orbit_q"))
            c.orbit_q = io::get_count(j, "orbit_q");
        if (j.contains("orbit_t"))
            c.orbit_t = io::get<double>(j, "orbit_t");
        c.L = io::get_count_or(j, "L", c.L);
        if (c.mode != "folk" && c.mode != "epsthm" && c.mode != "scan")
            throw ConfigError("gap: mode must be folk, epsthm or scan");
        if (c.x < 2)
            throw ConfigError("gap: x must be at least 2");
        return c;
    }
};

struct KsConfig {
    json f;
    u64 x = 1'000'000;
    u64 bins = 100;
    std::vector<cplx> targets{cplx{1.0, 0.0}};
    std::optional<u64> finite_order;      // every product is a k-th root of unity
    std::optional<double> coverage_at_least;

    static KsConfig from_json(const json& j)
    {
        KsConfig c;
        c.f = j.at("f");
        c.x = io::get_count_or(j, "x", c.x);
        c.bins = io::get_count_or(j, "bins", c.bins);
        if (j.contains("targets")) {
            c.targets.clear();
            for (const auto& z : j.at("targets"))
                c.targets.push_back(io::value_from_json(z).to_complex());
        }
        if (j.contains("finite_order"))
            c.finite_order = io::get_count(j, "finite_order");
        if (j.contains("coverage_at_least"))
            c.coverage_at_least = io::get<double>(j, "coverage_at_least");
        if (c.bins < 1)
            throw ConfigError("ks: bins must be positive");
        return c;
    }
};

inline json gap_json(const GapReport& r)
{
    json j = {{"f", r.f}, {"x", r.x}, {"checkpoints", r.checkpoints}, {"running_min", r.running_min},
              {"argmin", r.argmin}, {"first_equal", r.first_equal}};
    if (r.bins) {
        json tg = json::array();
        for (std::size_t i = 0; i < r.targets.size(); ++i)
            tg.push_back({{"z", cplx_json(r.targets[i])}, {"min_gap", r.target_gap[i]}, {"argmin", r.target_argmin[i]}});
        j["bins"] = r.bins;
        j["histogram"] = r.histogram;
        j["samples"] = r.samples;
        j["coverage"] = r.coverage;
        j["targets"] = tg;
        j["exact"] = r.exact;
        j["denominator"] = r.denominator;
    }
    if (!r.orbit.empty()) {
        json o = json::array();
        for (auto z : r.orbit)
            o.push_back(cplx_json(z));
        j["orbit"] = {{"q", r.orbit_q}, {"t", r.orbit_t}, {"values", o}, {"min_distance_to_one", r.orbit_min_distance_to_one}};
    }
    return j;
}

inline ExperimentReport run_gap_experiment(const GapConfig& c, const Sieve& sieve, GapReport* out = nullptr)
{
    const auto f = io::load_function(c.f);
    if (c.mode != "scan" && !f.completely_multiplicative())
        throw ConfigError("gap: " + c.mode + " mode needs a completely multiplicative f");
    ExperimentReport rep;
    rep.experiment = "gap";
    auto r = gap_scan(f, sieve, parse_checkpoints(c.checkpoints, c.x));
    if (c.mode == "folk") {
        rep.checks.push_back(detail::check_leq("min gap decays", r.running_min.back(), c.threshold, Verdict::Inconclusive));
    } else if (c.mode == "epsthm") {
        const auto scan = pretender_scan(f, sieve, c.x, c.Q, c.T);
        const auto& best = scan.best();
        r.orbit_q = c.orbit_q.value_or(best.q);
        r.orbit_t = c.orbit_t.value_or(best.t);
        r.orbit = power_orbit(f, r.orbit_q, r.orbit_t, c.L);
        r.orbit_min_distance_to_one = std::numeric_limits<double>::infinity();
        for (auto z : r.orbit)
            r.orbit_min_distance_to_one = std::min(r.orbit_min_distance_to_one, std::abs(z - 1.0));
        rep.results["pretender"] = {{"q", best.q}, {"index", best.index}, {"t", best.t}, {"distance", best.distance}};
        rep.checks.push_back(detail::check_leq("min gap decays", r.running_min.back(), c.threshold, Verdict::Inconclusive));
    }
    if (c.min_at_least) {
        double lo = std::numeric_limits<double>::infinity();
        for (double v : r.running_min)
            lo = std::min(lo, v);
        rep.checks.push_back(detail::check_geq("running min bounded below", lo, *c.min_at_least));
    }
    if (c.expect_first_equal)
        rep.checks.push_back({"first equal pair", r.first_equal == *c.expect_first_equal ? Verdict::Consistent : Verdict::Inconsistent,
                              "value == tolerance", static_cast<double>(r.first_equal), static_cast<double>(*c.expect_first_equal)});
    if (c.mode == "scan" && rep.checks.empty())
        rep.checks.push_back({"scan only", Verdict::Inconclusive, "no assertion configured", r.running_min.back(), 0.0});
    rep.results["gap"] = gap_json(r);
    rep.series.push_back({"running_min", detail::as_doubles(r.checkpoints), r.running_min});
    if (out)
        *out = std::move(r);
    return rep;
}

inline ExperimentReport run_ks_experiment(const KsConfig& c, const Sieve& sieve, GapReport* out = nullptr)
{
    const auto f = io::load_function(c.f);
    if (!f.completely_multiplicative())
        throw ConfigError("ks: f must be completely multiplicative");
    ExperimentReport rep;
    rep.experiment = "ks";
    auto r = gap_scan(f, sieve, {c.x});
    limit_point_scan(r, f, sieve, c.x, c.bins, c.targets);
    if (r.samples != c.x)
        throw ConfigError("ks: f must be unimodular (found zeros below x + 1)");
    if (c.finite_order) {
        const u64 k = *c.finite_order;
        // Bins that can hold a k-th root of unity.
        u64 stray = 0;
        for (u64 b = 0; b < c.bins; ++b) {
            if (!r.histogram[b])
                continue;
            bool ok = false;
            for (u64 j = 0; j < k && !ok; ++j)
                ok = static_cast<u64>(static_cast<unsigned __int128>(j) * c.bins / k) == b;
            if (!ok)
                stray += r.histogram[b];
        }
        rep.checks.push_back({"mass on k-th roots only", stray == 0 ? Verdict::Consistent : Verdict::Inconsistent,
                              "samples outside k-th root bins == 0", static_cast<double>(stray), 0.0});
        for (std::size_t i = 0; i < c.targets.size(); ++i) {
            double lb = std::numeric_limits<double>::infinity();
            for (u64 j = 0; j < k; ++j)
                lb = std::min(lb, std::abs(root_to_complex(static_cast<i64>(j), static_cast<i64>(k)) - c.targets[i]));
            rep.checks.push_back(detail::check_geq("gap to target " + std::to_string(i) + " stays off mu_k",
                                                   r.target_gap[i], lb - 1e-12));
        }
    }
    if (c.coverage_at_least)
        rep.checks.push_back(detail::check_geq("histogram coverage", r.coverage, *c.coverage_at_least, Verdict::Inconclusive));
    if (rep.checks.empty())
        rep.checks.push_back({"scan only", Verdict::Inconclusive, "no assertion configured", r.coverage, 0.0});
    rep.results["gap"] = gap_json(r);
    Series h{"histogram", {}, {}};
    for (u64 b = 0; b < c.bins; ++b) {
        h.x.push_back(static_cast<double>(b));
        h.y.push_back(static_cast<double>(r.histogram[b]));
    }
    rep.series.push_back(std::move(h));
    if (out)
        *out = std::move(r);
    return rep;
}

// ---- Omega congruences ----------------------------------------------------

struct ArithConfig {
    std::vector<json> sets;   // p_class specs or "all"
    std::vector<u64> moduli;  // 0 = exact equality
    u64 x = 1'000'000;
    u64 keep = 100;           // witnesses listed in the report
    std::string checkpoints = "geometric:6";

    static ArithConfig from_json(const json& j)
    {
        ArithConfig c;
        for (const auto& s : j.at("sets"))
            c.sets.push_back(s);
        for (const auto& q : j.at("moduli"))
            c.moduli.push_back(q.get<u64>());
        c.x = io::get_count_or(j, "x", c.x);
        c.keep = io::get_count_or(j, "keep", c.keep);
        c.checkpoints = io::get_or<std::string>(j, "checkpoints", c.checkpoints);
        if (c.sets.empty() || c.sets.size() != c.moduli.size())
            throw ConfigError("arith: need one modulus per prime set");
        return c;
    }
};

struct ArithResult {
    std::vector<u64> witnesses;
    std::vector<u64> checkpoints;
    std::vector<u64> counts;
};

inline std::function<bool(u64)> prime_predicate(const json& s)
{
    if (s.is_string() && s.get<std::string>() == "all")
        return [](u64) { return true; };
    return io::prime_class_from_json(s);
}

// n <= x with Omega_{A_j}(n+1) = Omega_{A_j}(n) mod q_j for every j.
inline ArithResult arith_witnesses(const std::vector<std::function<bool(u64)>>& sets, const std::vector<u64>& moduli,
                                   const Sieve& sieve, u64 x, std::vector<u64> checkpoints = {})
{
    if (sets.size() != moduli.size() || sets.empty())
        throw ConfigError("arith: need one modulus per prime set");
    if (x + 1 > sieve.limit())
        throw RangeError("arith: x + 1 exceeds sieve limit");
    for (std::size_t i = 0; i < moduli.size(); ++i)
        for (std::size_t j = i + 1; j < moduli.size(); ++j)
            if (std::gcd(moduli[i], moduli[j]) != 1)
                throw ConfigError("arith: moduli must be pairwise coprime");
    // Set label per prime, checked for disjointness over the whole table.
    const auto& primes = sieve.primes();
    std::vector<int> label(primes.size(), -1);
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j)
            if (sets[j](primes[i])) {
                if (label[i] >= 0)
                    throw DomainError("arith: prime sets overlap at p = " + std::to_string(primes[i]));
                label[i] = static_cast<int>(j);
            }
    auto index_of = [&](u64 p) {
        return static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), static_cast<u32>(p)) - primes.begin());
    };
    const std::size_t k = sets.size();
    // Omega_{A_j}(n) for all j, built from n / spf(n).
    std::vector<std::uint8_t> om((x + 2) * k, 0);
    for (u64 n = 2; n <= x + 1; ++n) {
        const u64 p = sieve.spf(n);
        const int l = label[index_of(p)];
        for (std::size_t j = 0; j < k; ++j)
            om[n * k + j] = om[(n / p) * k + j];
        if (l >= 0)
            ++om[n * k + static_cast<std::size_t>(l)];
    }
    if (checkpoints.empty())
        checkpoints.push_back(x);
    std::sort(checkpoints.begin(), checkpoints.end());
    ArithResult r;
    r.checkpoints = checkpoints;
    std::size_t next = 0;
    u64 count = 0;
    for (u64 n = 1; n <= x; ++n) {
        bool ok = true;
        for (std::size_t j = 0; j < k && ok; ++j) {
            const int a = om[n * k + j], b = om[(n + 1) * k + j];
            ok = moduli[j] == 0 ? a == b : (a - b) % static_cast<int>(moduli[j]) == 0;
        }
        if (ok) {
            r.witnesses.push_back(n);
            ++count;
        }
        while (next < checkpoints.size() && checkpoints[next] == n) {
            r.counts.push_back(count);
            ++next;
        }
    }
    return r;
}

inline ExperimentReport run_arith_corollary(const ArithConfig& c, const Sieve& sieve, ArithResult* out = nullptr)
{
    std::vector<std::function<bool(u64)>> sets;
    for (const auto& s : c.sets)
        sets.push_back(prime_predicate(s));
    auto r = arith_witnesses(sets, c.moduli, sieve, c.x, parse_checkpoints(c.checkpoints, c.x));
    ExperimentReport rep;
    rep.experiment = "arith";
    const std::vector<u64> head(r.witnesses.begin(), r.witnesses.begin() + static_cast<std::ptrdiff_t>(std::min<u64>(c.keep, r.witnesses.size())));
    rep.results = {{"count", r.witnesses.size()}, {"first_witnesses", head}, {"checkpoints", r.checkpoints}, {"counts", r.counts}};
    rep.checks.push_back(detail::check_geq("witnesses exist", static_cast<double>(r.witnesses.size()), 1.0, Verdict::Inconclusive));
    rep.series.push_back({"witness_count", detail::as_doubles(r.checkpoints), detail::as_doubles(r.counts)});
    if (out)
        *out = std::move(r);
    return rep;
}

// ---- partial sums of perturbed characters ---------------------------------

struct PartialSums {
    std::vector<u64> checkpoints;
    std::vector<double> sup; // max_{y <= c} |sum_{n <= y} f(n)|
    std::vector<u64> argsup;
};

inline PartialSums partial_sum_sup(const MultFunc& f, const Sieve& sieve, std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("partial sums: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const u64 x = checkpoints.back();
    const auto t = tabulate(f, sieve, x);
    PartialSums r;
    r.checkpoints = checkpoints;
    std::size_t next = 0;
    double best = 0.0;
    u64 arg = 0;
    auto record = [&](u64 n, double m) {
        if (m > best) {
            best = m;
            arg = n;
        }
        while (next < checkpoints.size() && checkpoints[next] == n) {
            r.sup.push_back(best);
            r.argsup.push_back(arg);
            ++next;
        }
    };
    const u64 L = t.exact() ? t.denominator() : 0;
    const std::size_t deg = L ? detail::cyclotomic_poly(L).size() - 1 : 0;
    if (L && deg <= 64) {
        // The running sum is kept in Z[zeta_L] on the power basis, so its
        // coefficients stay small and bounded sums come out exact.
        std::vector<std::vector<i64>> basis(L);
        for (u64 a = 0; a < L; ++a) {
            CyclotomicInteger z(L);
            z.add_root(a);
            basis[a] = z.canonical();
        }
        const auto& roots = t.roots();
        std::vector<i64> c(deg, 0);
        for (u64 n = 1; n <= x; ++n) {
            const auto a = t.angle(n);
            if (a >= 0) {
                const auto& b = basis[static_cast<std::size_t>(a)];
                for (std::size_t i = 0; i < deg; ++i)
                    c[i] += b[i];
            }
            cplx s = 0.0;
            for (std::size_t i = 0; i < deg; ++i)
                if (c[i])
                    s += static_cast<double>(c[i]) * roots[i];
            record(n, std::abs(s));
        }
        return r;
    }
    CompensatedComplexSum s;
    for (u64 n = 1; n <= x; ++n) {
        s.add(t[n]);
        record(n, std::abs(s.value()));
    }
    return r;
}

struct ChudakovConfig {
    std::optional<json> setup; // perturbed character
    std::optional<json> f;     // or any function
    u64 x = 10'000'000;
    std::string checkpoints = "geometric:7";
    u64 dmax = 12;
    u64 correlation_x = 0;     // 0 = skip the formula comparison
    double correlation_tol = 0.02;
    u64 qps_dmax = 10'000;
    u64 poscoeffs_M = 200;
    std::vector<std::pair<u64, u64>> poscoeffs_H{{1, 2}, {1, 3}, {2, 5}, {7, 10}};
    std::optional<std::array<double, 3>> growth; // {from, to, factor}

    static ChudakovConfig from_json(const json& j)
    {
        ChudakovConfig c;
        if (j.contains("setup"))
            c.setup = j.at("setup");
        if (j.contains("f"))
            c.f = j.at("f");
        if (!c.setup == !c.f)
            throw ConfigError("chudakov: give exactly one of 'setup' and 'f'");
        c.x = io::get_count_or(j, "x", c.x);
        c.checkpoints = io::get_or<std::string>(j, "checkpoints", c.checkpoints);
        c.dmax = io::get_count_or(j, "dmax", c.dmax);
        c.correlation_x = io::get_count_or(j, "correlation_x", c.correlation_x);
        c.correlation_tol = io::get_or<double>(j, "correlation_tol", c.correlation_tol);
        c.qps_dmax = io::get_count_or(j, "qps_dmax", c.qps_dmax);
        c.poscoeffs_M = io::get_count_or(j, "poscoeffs_M", c.poscoeffs_M);
        if (j.contains("poscoeffs_H")) {
            c.poscoeffs_H.clear();
            for (const auto& h : j.at("poscoeffs_H"))
                c.poscoeffs_H.push_back({h.at(0).get<u64>(), h.at(1).get<u64>()});
        }
        if (j.contains("growth")) {
            const auto& g = j.at("growth");
            c.growth = std::array<double, 3>{io::get<double>(g, "from"), io::get<double>(g, "to"), io::get<double>(g, "factor")};
        }
        return c;
    }

    u64 sieve_limit() const { return std::max(x, correlation_x + dmax); }
};

inline ExperimentReport run_chudakov_experiment(const ChudakovConfig& c, const Sieve& sieve)
{
    ExperimentReport rep;
    rep.experiment = "chudakov";
    std::optional<ChudakovSetup> s;
    if (c.setup)
        s = io::load_setup(*c.setup);
    const MultFunc f = s ? s->f() : io::load_function(*c.f);

    auto cps = parse_checkpoints(c.checkpoints, c.x);
    if (c.growth)
        for (double v : {(*c.growth)[0], (*c.growth)[1]}) {
            if (v < 1 || v > static_cast<double>(c.x))
                throw ConfigError("chudakov: growth points must lie in [1, x]");
            cps.push_back(static_cast<u64>(v));
        }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    const auto ps = partial_sum_sup(f, sieve, cps);
    auto sup_at = [&](u64 y) {
        return ps.sup[static_cast<std::size_t>(std::lower_bound(cps.begin(), cps.end(), y) - cps.begin())];
    };
    rep.results["partial_sums"] = {{"f", f.name()}, {"checkpoints", ps.checkpoints}, {"sup", ps.sup}, {"argsup", ps.argsup}};
    rep.series.push_back({"sup_partial_sum", detail::as_doubles(ps.checkpoints), ps.sup});

    const bool plain_character = s && s->perturbations().empty() && s->at_modulus().empty();
    if (plain_character) {
        if (s->chi().principal())
            rep.checks.push_back({"partial sums bounded by q", Verdict::Inconclusive, "principal character: no bound",
                                  ps.sup.back(), static_cast<double>(s->q())});
        else
            rep.checks.push_back(detail::check_leq("partial sums bounded by q", ps.sup.back(), static_cast<double>(s->q()) + 1e-9));
    }
    if (c.growth) {
        const auto [from, to, factor] = *c.growth;
        const double a = sup_at(static_cast<u64>(from)), b = sup_at(static_cast<u64>(to));
        rep.results["growth"] = {{"from", from}, {"to", to}, {"sup_from", a}, {"sup_to", b}, {"ratio", a > 0 ? b / a : 0.0}};
        rep.checks.push_back(detail::check_geq("sup grows by factor", a > 0 ? b / a : 0.0, factor, Verdict::Inconclusive));
    }

    if (s) {
        rep.results["setup"] = io::setup_to_json(*s);
        if (c.correlation_x) {
            std::vector<u64> shifts;
            for (u64 d = 0; d <= c.dmax; ++d)
                shifts.push_back(d);
            const auto brute = natural_correlations(f, shifts, sieve, c.correlation_x);
            json rows = json::array();
            double worst = 0.0;
            for (u64 d = 0; d <= c.dmax; ++d) {
                const auto cf = correlation_formula(*s, d);
                const double err = std::abs(brute[d] - cf.value);
                worst = std::max(worst, err);
                rows.push_back({{"d", d}, {"brute", cplx_json(brute[d])}, {"formula", cplx_json(cf.value)},
                                {"tail_bound", cf.tail_bound}, {"error", err}});
            }
            rep.results["correlations"] = {{"x", c.correlation_x}, {"rows", rows}, {"max_error", worst}};
            rep.checks.push_back(detail::check_leq("correlation formula", worst, c.correlation_tol));
        }
        const auto q = qps_checks(*s, c.qps_dmax);
        rep.results["qps"] = {{"normalized", q.normalized},
                              {"zero_off_coprime", q.zero_off_coprime},
                              {"nonneg_odd", q.nonneg_odd},
                              {"coprime_sum", q.coprime_sum},
                              {"coprime_sum_limit", q.coprime_sum_limit},
                              {"coprime_sum_positive", q.coprime_sum_positive},
                              {"two_applicable", q.two_applicable},
                              {"Gt2", q.Gt2},
                              {"two_holds", q.two_holds},
                              {"d_max", q.d_max}};
        if (!q.normalized) {
            rep.checks.push_back({"qps properties", Verdict::Inconclusive, "G(1) = 0: normalization undefined", 0.0, 0.0});
        } else {
            rep.checks.push_back({"qps properties", q.all_hold() ? Verdict::Consistent : Verdict::Inconsistent,
                                  "all properties hold", q.all_hold() ? 1.0 : 0.0, 1.0});
            json pos = json::array();
            bool nonneg = true;
            double lowest = std::numeric_limits<double>::infinity();
            const int tau = default_tau(*s), kappa = default_kappa(s->q());
            for (const auto& [num, den] : c.poscoeffs_H) {
                const auto pr = poscoeffs_truncation(*s, {num, den}, c.poscoeffs_M, tau, kappa);
                nonneg = nonneg && pr.all_nonnegative;
                lowest = std::min(lowest, pr.min_term);
                pos.push_back({{"H", {num, den}}, {"value", pr.value}, {"terms", pr.terms}, {"min_term", pr.min_term},
                               {"all_nonnegative", pr.all_nonnegative}});
            }
            rep.results["poscoeffs"] = {{"M", c.poscoeffs_M}, {"tau", tau}, {"kappa", kappa}, {"sums", pos}};
            rep.checks.push_back(detail::check_geq("poscoeffs terms nonnegative", lowest, -1e-12));
        }
    }
    if (rep.checks.empty())
        rep.checks.push_back({"scan only", Verdict::Inconclusive, "no assertion configured", ps.sup.back(), 0.0});
    return rep;
}

// ---- correlation ratios against a character --------------------------------

struct CohnConfig {
    json f;
    json chi;
    u64 H = 0;
    u64 x = 10'000'000;
    double tolerance = 0.05;
    double floor = 1e-3; // |chi correlation| / x below this leaves the ratio undefined
    std::string expect;  // "match", "differ" or empty

    static CohnConfig from_json(const json& j)
    {
        CohnConfig c;
        c.f = j.at("f");
        c.chi = j.at("chi");
        c.H = io::get_count(j, "H");
        c.x = io::get_count_or(j, "x", c.x);
        c.tolerance = io::get_or<double>(j, "tolerance", c.tolerance);
        c.floor = io::get_or<double>(j, "floor", c.floor);
        c.expect = io::get_or<std::string>(j, "expect", "");
        if (!c.expect.empty() && c.expect != "match" && c.expect != "differ")
            throw ConfigError("cohn: expect must be match or differ");
        return c;
    }
};

struct CohnRow {
    u64 h = 0;
    cplx f_corr, chi_corr; // normalized by x
    bool defined = false;
    cplx ratio;
    double deviation = 0.0; // |ratio - 1|
};

inline std::vector<CohnRow> cohn_rows(const MultFunc& f, const DirichletCharacter& chi, u64 H, u64 x, double floor,
                                      const Sieve& sieve)
{
    if (chi.modulus() % 2 == 0)
        throw ConfigError("cohn: q must be odd");
    if (!chi.primitive())
        throw ConfigError("cohn: chi must be primitive");
    if (H < chi.modulus())
        throw ConfigError("cohn: H must be at least q");
    std::vector<u64> shifts;
    for (u64 h = 1; h <= H; ++h)
        shifts.push_back(h);
    const auto a = natural_correlations(f, shifts, sieve, x);
    const auto b = natural_correlations(character_function(chi), shifts, sieve, x);
    std::vector<CohnRow> rows;
    for (u64 h = 1; h <= H; ++h) {
        CohnRow r;
        r.h = h;
        r.f_corr = a[h - 1];
        r.chi_corr = b[h - 1];
        r.defined = std::abs(r.chi_corr) >= floor;
        if (r.defined) {
            r.ratio = r.f_corr == r.chi_corr ? cplx{1.0, 0.0} : r.f_corr / r.chi_corr;
            r.deviation = std::abs(r.ratio - 1.0);
        }
        rows.push_back(r);
    }
    return rows;
}

inline ExperimentReport run_cohn_experiment(const CohnConfig& c, const Sieve& sieve, std::vector<CohnRow>* out = nullptr)
{
    const auto f = io::load_function(c.f);
    const auto chi = io::character_from_json(c.chi);
    auto rows = cohn_rows(f, chi, c.H, c.x, c.floor, sieve);
    ExperimentReport rep;
    rep.experiment = "cohn";
    json table = json::array();
    double worst = 0.0;
    Series s{"ratio_deviation", {}, {}};
    for (const auto& r : rows) {
        json row = {{"h", r.h}, {"f", cplx_json(r.f_corr)}, {"chi", cplx_json(r.chi_corr)}, {"defined", r.defined}};
        if (r.defined) {
            row["ratio"] = cplx_json(r.ratio);
            row["deviation"] = r.deviation;
            row["within_tolerance"] = r.deviation <= c.tolerance;
            worst = std::max(worst, r.deviation);
            s.x.push_back(static_cast<double>(r.h));
            s.y.push_back(r.deviation);
        }
        table.push_back(row);
    }
    rep.results = {{"f", f.name()}, {"chi", chi.label()}, {"x", c.x}, {"H", c.H}, {"rows", table}, {"max_deviation", worst}};
    rep.series.push_back(std::move(s));
    if (c.expect == "match")
        rep.checks.push_back(detail::check_leq("ratios near 1", worst, c.tolerance));
    else if (c.expect == "differ")
        rep.checks.push_back({"some ratio off 1", worst > c.tolerance ? Verdict::Consistent : Verdict::Inconsistent,
                              "value > tolerance", worst, c.tolerance});
    else
        rep.checks.push_back({"ratio table", Verdict::Inconclusive, "no expectation configured", worst, c.tolerance});
    if (out)
        *out = std::move(rows);
    return rep;
}

// ---- dispatch ----------------------------------------------------------------

inline const std::vector<std::string>& experiment_ids()
{
    static const std::vector<std::string> ids{"gap", "ks", "arith", "chudakov", "cohn"};
    return ids;
}

namespace detail {

inline ExperimentReport dispatch(const std::string& id, const json& cfg)
{
    ExperimentReport rep;
    if (id == "gap") {
        const auto c = GapConfig::from_json(cfg);
        const Sieve sieve(c.x + 1);
        rep = run_gap_experiment(c, sieve);
    } else if (id == "ks") {
        const auto c = KsConfig::from_json(cfg);
        const Sieve sieve(c.x + 1);
        rep = run_ks_experiment(c, sieve);
    } else if (id == "arith") {
        const auto c = ArithConfig::from_json(cfg);
        const Sieve sieve(c.x + 1);
        rep = run_arith_corollary(c, sieve);
    } else if (id == "chudakov") {
        const auto c = ChudakovConfig::from_json(cfg);
        const Sieve sieve(std::max<u64>(2, c.sieve_limit()));
        rep = run_chudakov_experiment(c, sieve);
    } else if (id == "cohn") {
        const auto c = CohnConfig::from_json(cfg);
        const Sieve sieve(c.x + c.H);
        rep = run_cohn_experiment(c, sieve);
    } else {
        throw ConfigError("unknown experiment '" + id + "'");
    }
    return rep;
}

} // namespace detail

// Parses the config, sizes a sieve and runs. Malformed configs surface as
// ConfigError.
inline ExperimentReport run_experiment(const std::string& id, const json& cfg)
{
    ExperimentReport rep;
    try {
        rep = detail::dispatch(id, cfg);
    } catch (const json::exception& e) {
        throw ConfigError(id + ": " + e.what());
    }
    rep.config = cfg;
    return rep;
}

} // namespace multlab
