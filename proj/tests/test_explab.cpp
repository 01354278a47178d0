#include <gtest/gtest.h>

#include <random>

#include "multlab/explab.hpp"

using namespace multlab;

namespace {

const Sieve& sieve()
{
    static const Sieve s(10'000'100);
    return s;
}

json J(const char* s) { return json::parse(s); }

unsigned omega_in(u64 n, const std::function<bool(u64)>& in)
{
    unsigned c = 0;
    for (const auto& [p, e] : factorize_trial(n).factors)
        if (in(p))
            c += e;
    return c;
}

} // namespace

// ---- io ---------------------------------------------------------------------

TEST(Io, Values)
{
    EXPECT_EQ(io::value_from_json(J(R"({"type":"root","a":2,"b":6})")), UnitValue::root(1, 3));
    EXPECT_TRUE(io::value_from_json(J(R"({"type":"zero"})")).is_zero());
    EXPECT_TRUE(io::value_from_json(J(R"({"type":"approx","re":0.6,"im":0.8})")).is_approx());
    EXPECT_EQ(io::value_from_json(J("-1")), UnitValue::root(1, 2));
    EXPECT_THROW(io::value_from_json(J(R"({"type":"approx","re":1,"im":1})")), ConfigError);
    EXPECT_THROW(io::value_from_json(J(R"({"type":"root","a":1,"b":0})")), ConfigError);
    EXPECT_THROW(io::value_from_json(J(R"({"type":"pole"})")), ConfigError);
    for (const auto& v : {UnitValue::zero(), UnitValue::root(5, 12), UnitValue::approx(0.6, -0.8)})
        EXPECT_EQ(io::value_from_json(io::value_to_json(v)), v);
}

TEST(Io, RulesAndClasses)
{
    // Completely multiplicative: -1 on p = 3 mod 4, e(1/3) on {5, 13}, 0 at 2.
    const auto f = io::function_from_json(J(R"({
        "name": "g", "completely_multiplicative": true,
        "rules": [{"p": 2, "k": "all", "value": {"type": "zero"}},
                  {"p_class": "p = 3 mod 4", "value": -1},
                  {"p_class": {"in": [5, 13]}, "k": 1, "value": {"type": "root", "a": 1, "b": 3}}]})"));
    EXPECT_EQ(f.name(), "g");
    EXPECT_TRUE(f.prime_power(2, 1).is_zero());
    EXPECT_EQ(f.prime_power(7, 1), UnitValue::root(1, 2));
    EXPECT_EQ(f.prime_power(7, 2), UnitValue::one());
    EXPECT_EQ(f.prime_power(13, 2), UnitValue::root(2, 3));
    EXPECT_EQ(f.prime_power(17, 1), UnitValue::one());

    const auto g = io::function_from_json(J(R"({
        "completely_multiplicative": false, "default": {"type": "zero"},
        "rules": [{"p_class": {"mod": 4, "residue": 1}, "k": 1, "value": -1},
                  {"p_class": "p in {3, 7}", "k": "all", "value": 1}]})"));
    EXPECT_EQ(g.prime_power(5, 1), UnitValue::root(1, 2));
    EXPECT_TRUE(g.prime_power(5, 2).is_zero());
    EXPECT_EQ(g.prime_power(7, 3), UnitValue::one());
    EXPECT_TRUE(g.prime_power(11, 1).is_zero());

    EXPECT_THROW(io::function_from_json(J(R"({"rules": [{"p": 3, "k": 2, "value": 1}]})")), ConfigError);
    EXPECT_THROW(io::function_from_json(J(R"({"rules": [{"k": 1, "value": 1}]})")), ConfigError);
    EXPECT_THROW(io::function_from_json(J(R"({"rules": [{"p_class": "p > 7", "value": 1}]})")), ConfigError);
    EXPECT_THROW(io::function_from_json(J(R"("zeta")")), ConfigError);
}

TEST(Io, BasesAndOverrides)
{
    const auto lam = io::function_from_json(J(R"("liouville")"));
    const auto mu = io::function_from_json(J(R"({"builtin": "mobius"})"));
    for (u64 n = 1; n <= 2000; ++n) {
        const auto fac = factorize_trial(n);
        const auto av = arith_fns(fac);
        EXPECT_EQ(lam.at(fac), av.bigomega % 2 ? UnitValue::root(1, 2) : UnitValue::one());
        EXPECT_EQ(mu.at(fac).to_complex().real(), static_cast<double>(av.mu));
    }
    // Flip chi(2) to its conjugate on top of a character base.
    const auto chi = character(9, 1);
    const auto f = io::function_from_json(J(R"({"base": {"character": {"q": 9, "index": 1}},
        "rules": [{"p": 2, "value": {"type": "root", "a": 5, "b": 6}}]})"));
    EXPECT_EQ(f.prime_power(2, 1), chi(2).conj());
    EXPECT_EQ(f.prime_power(7, 1), chi(7));
    EXPECT_TRUE(f.prime_power(3, 1).is_zero());
    EXPECT_TRUE(f.completely_multiplicative());

    const auto tw = io::function_from_json(J(R"({"base": "liouville", "t": 0.5})"));
    EXPECT_EQ(tw.t(), 0.5);
    EXPECT_EQ(tw.prime_power(3, 1), UnitValue::root(1, 2));

    const auto s = io::function_from_json(J(R"({"setup": {"character": {"q": 9, "index": 1},
        "perturbations": {"7": {"type": "root", "a": 1, "b": 3}}}})"));
    EXPECT_EQ(s.prime_power(7, 1), chi(7) * UnitValue::root(1, 3));
}

TEST(Io, Characters)
{
    const auto chi = io::character_from_json(J(R"({"q": 5, "index": 2})"));
    EXPECT_EQ(chi.order(), 2u);
    const auto t = io::character_from_json(J(R"({"q": 5, "values": [0, 1, -1, -1, 1]})"));
    EXPECT_EQ(t.angles(), chi.angles());
    EXPECT_THROW(io::character_from_json(J(R"({"q": 5, "index": 4})")), ConfigError);
    EXPECT_THROW(io::character_from_json(J(R"({"q": 5, "values": [0, 1, 1, -1, 1]})")), std::exception);
    EXPECT_THROW(io::character_from_json(J(R"({"q": 5, "values": [0, 1]})")), ConfigError);
}

TEST(Io, SetupRoundTrip)
{
    const auto s = io::setup_from_json(J(R"({"character": {"q": 9, "index": 1},
        "perturbations": [{"p": 7, "value": {"type": "root", "a": 1, "b": 3}}]})"));
    EXPECT_EQ(s.perturbations().at(7), UnitValue::root(1, 3));
    const auto back = io::setup_from_json(io::setup_to_json(s));
    EXPECT_EQ(back.name(), s.name());
    EXPECT_EQ(back.perturbations(), s.perturbations());
    EXPECT_THROW(io::setup_from_json(J(R"({"character": {"q": 9, "index": 1}, "perturbations": {"3": -1}})")),
                 ConfigError);
    EXPECT_THROW(io::setup_from_json(J(R"({"character": {"q": 9, "index": 1}, "perturbations": {"x": -1}})")),
                 ConfigError);
}

// ---- gaps --------------------------------------------------------------------

TEST(Gap, LiouvilleFirstWitness)
{
    const auto r = gap_scan(funcs::liouville(), sieve(), {10, 1000});
    u64 first = 0;
    for (u64 n = 1; !first; ++n)
        if (arith_fns(factorize_trial(n)).bigomega % 2 == arith_fns(factorize_trial(n + 1)).bigomega % 2)
            first = n;
    EXPECT_EQ(r.first_equal, first);
    EXPECT_EQ(r.first_equal, 2u);
    EXPECT_EQ(r.argmin.back(), 2u);
    EXPECT_EQ(r.running_min.back(), 0.0);
}

TEST(Gap, AlternatingStaysAtTwo)
{
    const auto r = gap_scan(funcs::alternating(), sieve(), parse_checkpoints("geometric:12", 1'000'000));
    for (double v : r.running_min)
        EXPECT_EQ(v, 2.0);
    EXPECT_EQ(r.first_equal, 0u);
}

TEST(Gap, NonicCharacterBoundedBelow)
{
    const auto chi = character(9, 1);
    const auto r = gap_scan(character_function(chi), sieve(), parse_checkpoints("geometric:12", 1'000'000));
    for (double v : r.running_min)
        EXPECT_GE(v, 1.0);
    EXPECT_EQ(r.running_min.back(), 1.0);
    // direct oracle over one period
    for (i64 n = 1; n <= 18; ++n)
        EXPECT_GE(std::abs(chi.value(n + 1) - chi.value(n)), 1.0 - 1e-12);
}

TEST(Gap, RunningMinimumMatchesDirectScan)
{
    for (u64 seed : {2u, 5u, 11u}) {
        const auto f = funcs::random_unimodular(seed);
        const auto cps = parse_checkpoints("geometric:5", 20'000);
        const auto r = gap_scan(f, sieve(), cps);
        double best = 1e9;
        u64 arg = 0;
        std::size_t i = 0;
        for (u64 n = 1; n <= 20'000; ++n) {
            const double g = std::abs(evaluate(f, sieve(), n + 1).to_complex() - evaluate(f, sieve(), n).to_complex());
            if (g < best) {
                best = g;
                arg = n;
            }
            if (n == cps[i]) {
                EXPECT_NEAR(r.running_min[i], best, 1e-12);
                EXPECT_EQ(r.argmin[i], arg);
                ++i;
            }
        }
        EXPECT_TRUE(std::is_sorted(r.running_min.rbegin(), r.running_min.rend()));
    }
}

TEST(Gap, ChordIsExactAtRationalLengths)
{
    EXPECT_EQ(detail::chord(1, 6), 1.0);
    EXPECT_EQ(detail::chord(5, 6), 1.0);
    EXPECT_EQ(detail::chord(3, 6), 2.0);
    EXPECT_EQ(detail::chord(12, 12), 0.0);
    for (i64 L = 2; L <= 40; ++L)
        for (i64 k = 0; k < L; ++k)
            EXPECT_NEAR(detail::chord(k, L), std::abs(root_to_complex(k, L) - 1.0), 1e-14);
}

TEST(Gap, ModesAndVerdicts)
{
    const auto lam = run_experiment("gap", J(R"({"f": "liouville", "mode": "folk", "x": 1e4})"));
    EXPECT_EQ(lam.overall(), Verdict::Consistent);
    EXPECT_THROW(run_experiment("gap", J(R"({"f": "alternating", "mode": "folk", "x": 1e4})")), ConfigError);
    const auto alt = run_experiment("gap", J(R"({"f": "alternating", "mode": "scan", "x": 1e4, "min_at_least": 2})"));
    EXPECT_EQ(alt.overall(), Verdict::Consistent);
    const auto bad = run_experiment("gap", J(R"({"f": "liouville", "mode": "scan", "x": 1e4, "min_at_least": 1})"));
    EXPECT_EQ(bad.overall(), Verdict::Inconsistent);
    // chi mod 9 never gets within 1, so the decay check is inconclusive, not a refutation
    const auto chi = run_experiment("gap", J(R"({"f": {"character": {"q": 9, "index": 1}}, "mode": "folk", "x": 1e4})"));
    EXPECT_EQ(chi.overall(), Verdict::Inconclusive);
    EXPECT_THROW(run_experiment("gap", J(R"({"f": "liouville", "mode": "sideways"})")), ConfigError);
}

TEST(Gap, EpsthmOrbit)
{
    // f = chi_5 twisted by n^{i/2}: the scan should find (q = 5, t = 1/2), where
    // the orbit f(10^l) 10^{-il/2} is identically 0 (f(5) = 0).
    const auto rep = run_experiment("gap", J(R"({"f": {"base": {"character": {"q": 5, "index": 1}}, "t": 0.5},
        "mode": "epsthm", "x": 1e5, "Q": 5, "T": 1, "L": 5})"));
    const auto& p = rep.results["pretender"];
    EXPECT_EQ(p["q"].get<u64>(), 5u);
    EXPECT_NEAR(p["t"].get<double>(), 0.5, 0.1);
    const auto o = power_orbit(funcs::liouville(), 1, 0.0, 4);
    for (u64 l = 1; l <= 4; ++l)
        EXPECT_NEAR(o[l - 1].real(), l % 2 ? -1.0 : 1.0, 1e-15);
    const auto tw = power_orbit(twist(funcs::one(), 0.3), 3, 0.3, 3);
    for (auto z : tw)
        EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-12);
}

// ---- limit points ---------------------------------------------------------------

TEST(Ks, FiniteOrderMass)
{
    GapReport r;
    const auto rep = run_ks_experiment(KsConfig::from_json(J(R"({"f": {"builtin": "constant_root", "a": 1, "b": 3},
        "x": 1e5, "bins": 100, "targets": [{"type": "root", "a": 1, "b": 6}], "finite_order": 3})")),
                                       sieve(), &r);
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
    u64 nonempty = 0, total = 0;
    for (u64 c : r.histogram) {
        nonempty += c > 0;
        total += c;
    }
    EXPECT_EQ(nonempty, 3u);
    EXPECT_EQ(total, r.samples);
    EXPECT_EQ(r.samples, 100'000u);
    EXPECT_GT(r.histogram[0] * r.histogram[33] * r.histogram[66], 0u);
    // nearest cube root to e(1/6) is at distance 1
    EXPECT_NEAR(r.target_gap[0], 1.0, 1e-12);
}

TEST(Ks, IrrationalAngleCoverage)
{
    GapReport r;
    run_ks_experiment(KsConfig::from_json(J(R"({"f": {"builtin": "constant_angle", "alpha": 0.41421356237309503},
        "x": 1e6, "bins": 100})")),
                      sieve(), &r);
    // f(n) conj f(n+1) = e(alpha (Omega(n) - Omega(n+1))): one bin per
    // reachable difference, so coverage grows only with log x.
    EXPECT_DOUBLE_EQ(r.coverage, 0.38);
    u64 total = 0;
    for (u64 c : r.histogram)
        total += c;
    EXPECT_EQ(total, r.samples);
}

TEST(Ks, UnitTargetIsTheGapScan)
{
    GapReport r;
    run_ks_experiment(KsConfig::from_json(J(R"({"f": "liouville", "x": 1e5})")), sieve(), &r);
    EXPECT_EQ(r.target_gap[0], r.running_min.back());
    EXPECT_EQ(r.target_argmin[0], 2u);
    EXPECT_THROW(run_experiment("ks", J(R"({"f": {"character": {"q": 5, "index": 1}}, "x": 1e3})")), ConfigError);
}

// ---- Omega congruences ------------------------------------------------------------

TEST(Arith, ParityWitnesses)
{
    const auto all = [](u64) { return true; };
    const auto r = arith_witnesses({all}, {2}, sieve(), 5000);
    EXPECT_EQ(r.witnesses.front(), 2u);
    std::vector<u64> brute;
    for (u64 n = 1; n <= 5000; ++n)
        if (omega_in(n, all) % 2 == omega_in(n + 1, all) % 2)
            brute.push_back(n);
    EXPECT_EQ(r.witnesses, brute);
}

TEST(Arith, TwoClassesOracle)
{
    const auto a = [](u64 p) { return p % 4 == 1; };
    const auto b = [](u64 p) { return p % 4 == 3; };
    const auto r = arith_witnesses({a, b}, {2, 3}, sieve(), 20'000);
    std::vector<u64> brute;
    for (u64 n = 1; n <= 20'000; ++n) {
        const int da = static_cast<int>(omega_in(n, a)) - static_cast<int>(omega_in(n + 1, a));
        const int db = static_cast<int>(omega_in(n, b)) - static_cast<int>(omega_in(n + 1, b));
        if (da % 2 == 0 && db % 3 == 0)
            brute.push_back(n);
    }
    EXPECT_EQ(r.witnesses, brute);
}

TEST(Arith, RecordedCounts)
{
    const auto em = run_experiment("arith", J(R"({"sets": ["all"], "moduli": [0], "x": 1e6})"));
    EXPECT_EQ(em.results["count"].get<u64>(), 135212u);
    EXPECT_EQ(em.overall(), Verdict::Consistent);
    const auto two = run_experiment("arith", J(R"({"sets": ["p = 1 mod 4", "p = 3 mod 4"], "moduli": [2, 3], "x": 1e6})"));
    EXPECT_EQ(two.results["count"].get<u64>(), 166986u);
    EXPECT_TRUE(std::is_sorted(two.results["counts"].begin(), two.results["counts"].end()));
}

TEST(Arith, Errors)
{
    EXPECT_THROW(run_experiment("arith", J(R"({"sets": ["all", "p = 1 mod 4"], "moduli": [2, 3], "x": 100})")), DomainError);
    EXPECT_THROW(run_experiment("arith", J(R"({"sets": ["p = 1 mod 4", "p = 3 mod 4"], "moduli": [2, 4], "x": 100})")),
                 ConfigError);
    EXPECT_THROW(run_experiment("arith", J(R"({"sets": ["all"], "moduli": [2, 3], "x": 100})")), ConfigError);
}

// ---- partial sums --------------------------------------------------------------------

TEST(Chudakov, CharacterSumsBounded)
{
    const auto cps = parse_checkpoints("geometric:6", 1'000'000);
    for (u64 q : {3u, 4u, 9u, 13u, 20u, 49u}) {
        for (const auto& chi : enumerate_characters(q)) {
            if (chi.principal())
                continue;
            const auto r = partial_sum_sup(character_function(chi), sieve(), cps);
            EXPECT_LE(r.sup.back(), static_cast<double>(q)) << chi.label();
        }
    }
    const auto rep = run_experiment("chudakov", J(R"({"setup": {"character": {"q": 9, "index": 1}}, "x": 1e6})"));
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
    EXPECT_EQ(rep.results["partial_sums"]["sup"].back().get<double>(), 2.0);
}

TEST(Chudakov, SupMatchesDirectSum)
{
    const auto f = funcs::random_unimodular(4);
    const auto lam = funcs::liouville();
    for (const auto& g : {f, lam}) {
        const auto r = partial_sum_sup(g, sieve(), {100, 5000});
        cplx s = 0.0;
        double best = 0.0;
        for (u64 n = 1; n <= 5000; ++n) {
            s += evaluate(g, sieve(), n).to_complex();
            best = std::max(best, std::abs(s));
            if (n == 100) {
                EXPECT_NEAR(r.sup[0], best, 1e-10);
            }
        }
        EXPECT_NEAR(r.sup[1], best, 1e-10);
    }
}

TEST(Chudakov, RecordedGrowth)
{
    // chi mod 9 with f(2) = conj chi(2)
    const auto flip = run_experiment("chudakov", J(R"({"setup": {"character": {"q": 9, "index": 1},
        "perturbations": {"2": {"type": "root", "a": 2, "b": 3}}}, "x": 1e6, "qps_dmax": 2000})"));
    EXPECT_NEAR(flip.results["partial_sums"]["sup"].back().get<double>(), 11.357816691600547, 1e-9);
    const auto lam = run_experiment("chudakov", J(R"({"f": "liouville", "x": 1e6})"));
    EXPECT_EQ(lam.results["partial_sums"]["sup"].back().get<double>(), 1253.0);
    EXPECT_EQ(lam.overall(), Verdict::Inconclusive);
}

TEST(Chudakov, FixtureChecks)
{
    const auto rep = run_experiment("chudakov", J(R"({"setup": {"character": {"q": 9, "index": 1},
        "perturbations": {"7": {"type": "root", "a": 1, "b": 3}}}, "x": 1e5, "correlation_x": 1e6, "dmax": 6})"));
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
    EXPECT_LT(rep.results["correlations"]["max_error"].get<double>(), 0.02);
    EXPECT_TRUE(rep.results["qps"]["nonneg_odd"].get<bool>());
    // degenerate fixture: G(1) = 0 leaves the normalized checks inconclusive
    const auto deg = run_experiment("chudakov", J(R"({"setup": {"character": {"q": 5, "index": 1},
        "perturbations": {"3": -1}}, "x": 1e5, "correlation_x": 1e5, "dmax": 4})"));
    EXPECT_FALSE(deg.results["qps"]["normalized"].get<bool>());
    EXPECT_NE(deg.overall(), Verdict::Inconsistent);
    EXPECT_THROW(run_experiment("chudakov", J(R"({"x": 1e5})")), ConfigError);
}

// ---- correlation ratios ---------------------------------------------------------------

TEST(Cohn, CharacterAgainstItself)
{
    std::vector<CohnRow> rows;
    const auto rep = run_cohn_experiment(CohnConfig::from_json(J(R"({"f": {"character": {"q": 7, "index": 1}},
        "chi": {"q": 7, "index": 1}, "H": 9, "x": 1e5, "expect": "match"})")),
                                         sieve(), &rows);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.defined);
        EXPECT_EQ(r.ratio, cplx(1.0, 0.0));
    }
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
}

TEST(Cohn, SameConductorMatches)
{
    // quadratic vs quartic character mod 5; both correlations are -1/5 off 5 | h
    std::vector<CohnRow> rows;
    const auto rep = run_cohn_experiment(CohnConfig::from_json(J(R"({"f": {"character": {"q": 5, "index": 2}},
        "chi": {"q": 5, "index": 1}, "H": 5, "x": 1e7, "expect": "match"})")),
                                         sieve(), &rows);
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
    EXPECT_NEAR(rows[0].chi_corr.real(), -0.2, 1e-6);
    EXPECT_NEAR(rows[4].chi_corr.real(), 0.8, 1e-6);
}

TEST(Cohn, LiouvilleDiffers)
{
    std::vector<CohnRow> rows;
    const auto rep = run_cohn_experiment(CohnConfig::from_json(J(R"({"f": "liouville",
        "chi": {"q": 5, "index": 1}, "H": 5, "x": 1e6, "expect": "differ"})")),
                                         sieve(), &rows);
    EXPECT_EQ(rep.overall(), Verdict::Consistent);
    EXPECT_LT(std::abs(rows[0].f_corr), 0.01);
    EXPECT_GT(rows[0].deviation, 0.9);
}

TEST(Cohn, Preconditions)
{
    EXPECT_THROW(run_experiment("cohn", J(R"({"f": "liouville", "chi": {"q": 4, "index": 1}, "H": 5, "x": 100})")),
                 ConfigError);
    EXPECT_THROW(run_experiment("cohn", J(R"({"f": "liouville", "chi": {"q": 5, "index": 1}, "H": 4, "x": 100})")),
                 ConfigError);
    // chi mod 9 induced from mod 3 is not primitive
    EXPECT_THROW(run_experiment("cohn", J(R"({"f": "liouville", "chi": {"q": 9, "index": 3}, "H": 9, "x": 100})")),
                 ConfigError);
}

// ---- reports ------------------------------------------------------------------------

TEST(Report, DeterministicBytes)
{
    const auto cfg = J(R"({"f": {"builtin": "random_unimodular", "seed": 3}, "x": 2e4, "bins": 16,
        "targets": [{"type": "approx", "re": 0, "im": 1}]})");
    const auto a = run_experiment("ks", cfg).dump();
    const auto b = run_experiment("ks", cfg).dump();
    EXPECT_EQ(a, b);
    const auto j = json::parse(a);
    EXPECT_EQ(j["schema"].get<int>(), kReportSchema);
    EXPECT_EQ(j["config"], cfg);
    EXPECT_EQ(j["config_hash"].get<std::string>(), hex64(fnv1a(cfg.dump())));
    EXPECT_EQ(j["library"]["version"].get<std::string>(), kVersion);
}

TEST(Report, Csv)
{
    const auto rep = run_experiment("gap", J(R"({"f": "alternating", "mode": "scan", "x": 1000, "checkpoints": "10,100"})"));
    EXPECT_EQ(rep.csv(), "series,checkpoint,value\nrunning_min,10,2\nrunning_min,100,2\nrunning_min,1000,2\n");
}

TEST(Report, OverallVerdict)
{
    ExperimentReport r;
    EXPECT_EQ(r.overall(), Verdict::Inconclusive);
    r.checks.push_back({"a", Verdict::Consistent, "", 0, 0});
    EXPECT_EQ(r.overall(), Verdict::Consistent);
    r.checks.push_back({"b", Verdict::Inconclusive, "", 0, 0});
    EXPECT_EQ(r.overall(), Verdict::Inconclusive);
    r.checks.push_back({"c", Verdict::Inconsistent, "", 0, 0});
    EXPECT_EQ(r.overall(), Verdict::Inconsistent);
    EXPECT_THROW(run_experiment("nope", json::object()), ConfigError);
    EXPECT_THROW(run_experiment("gap", J(R"({"f": "liouville", "x": "many"})")), ConfigError);
}

TEST(Fnv, KnownVectors)
{
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}
