#pragma once

// Binary correlations, short-interval second moments, weighted discrepancy
// with its Erdos-Turan bound, and the large-log correlation scan.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "multlab/cyclotomic.hpp"
#include "multlab/multfunc.hpp"

namespace multlab {

enum class Weighting { Natural, Logarithmic };

inline std::string to_string(Weighting w) { return w == Weighting::Natural ? "natural" : "logarithmic"; }

// "geometric:K" -> round(x^{j/K}), j = 1..K; "linear:K" -> round(j x / K);
// otherwise a comma list. Always sorted, deduplicated and ending at x.
inline std::vector<u64> parse_checkpoints(const std::string& spec, u64 x)
{
    std::vector<u64> out;
    auto kind = [&](const std::string& prefix) { return spec.rfind(prefix, 0) == 0; };
    auto count = [&](std::size_t skip) {
        long long K = 0;
        try {
            K = std::stoll(spec.substr(skip));
        } catch (const std::exception&) {
            throw ConfigError("checkpoints: bad count in '" + spec + "'");
        }
        if (K < 1)
            throw ConfigError("checkpoints: count must be positive");
        return static_cast<u64>(K);
    };
    if (spec.empty()) {
        out.push_back(x);
    } else if (kind("geometric:")) {
        const u64 K = count(10);
        for (u64 j = 1; j <= K; ++j)
            out.push_back(static_cast<u64>(std::llround(std::pow(static_cast<double>(x), static_cast<double>(j) / static_cast<double>(K)))));
    } else if (kind("linear:")) {
        const u64 K = count(7);
        for (u64 j = 1; j <= K; ++j)
            out.push_back(static_cast<u64>((static_cast<unsigned __int128>(x) * j + K / 2) / K));
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double v = 0;
            try {
                v = std::stod(tok);
            } catch (const std::exception&) {
                throw ConfigError("checkpoints: bad value '" + tok + "'");
            }
            if (!(v >= 1))
                throw ConfigError("checkpoints: values must be >= 1");
            out.push_back(static_cast<u64>(std::llround(v)));
        }
    }
    for (auto& c : out)
        c = std::clamp<u64>(c, 1, x);
    out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct LinearForms {
    i64 a1 = 1, b1 = 0, a2 = 1, b2 = 1;
};

struct CorrelationReport {
    Weighting kind = Weighting::Natural;
    LinearForms forms;
    std::string f1, f2;
    bool conjugate_second = false;
    std::vector<u64> checkpoints;
    std::vector<cplx> sums;             // raw sums at each checkpoint
    std::vector<double> normalization;  // x or log x

    std::vector<cplx> normalized() const
    {
        std::vector<cplx> v;
        for (std::size_t i = 0; i < sums.size(); ++i)
            v.push_back(sums[i] / normalization[i]);
        return v;
    }
};

namespace detail {

// Products f1(m1) f2(m2) (or f1(m1) conj f2(m2)) read from two tables;
// exact when both tables are, via angle addition over a common denominator.
class PairProduct {
public:
    PairProduct(const ValueTable& t1, const ValueTable& t2, bool conj2) : t1_(t1), t2_(t2), conj2_(conj2)
    {
        if (t1.exact() && t2.exact()) {
            const u64 L = std::lcm(t1.denominator(), t2.denominator());
            if (L <= kRootDenominatorCap) {
                exact_ = true;
                L_ = static_cast<std::int64_t>(L);
                s1_ = static_cast<std::int64_t>(L / t1.denominator());
                s2_ = static_cast<std::int64_t>(L / t2.denominator());
                roots_ = root_table(L);
            }
        }
    }

    bool exact() const { return exact_; }

    // Angle of the product over L, or -1 when it vanishes. Exact mode only.
    std::int64_t angle(u64 m1, u64 m2) const
    {
        const std::int64_t a = t1_.angle(m1), b = t2_.angle(m2);
        if (a < 0 || b < 0)
            return -1;
        const std::int64_t s = a * s1_ + (conj2_ ? -b * s2_ : b * s2_);
        return ((s % L_) + L_) % L_;
    }

    std::int64_t denominator() const { return L_; }
    const std::vector<cplx>& roots() const { return *roots_; }

    cplx operator()(u64 m1, u64 m2) const
    {
        if (exact_) {
            const auto a = angle(m1, m2);
            return a < 0 ? cplx{} : (*roots_)[static_cast<std::size_t>(a)];
        }
        const cplx y = t2_[m2];
        return t1_[m1] * (conj2_ ? std::conj(y) : y);
    }

private:
    const ValueTable& t1_;
    const ValueTable& t2_;
    bool conj2_;
    bool exact_ = false;
    std::int64_t L_ = 1, s1_ = 1, s2_ = 1;
    std::shared_ptr<const std::vector<cplx>> roots_;
};

inline void check_forms(const LinearForms& L, u64 x, const Sieve& sieve)
{
    if (L.a1 < 1 || L.a2 < 1 || L.a1 + L.b1 < 1 || L.a2 + L.b2 < 1)
        throw ConfigError("correlation: forms must satisfy a >= 1 and a + b >= 1");
    const auto top = static_cast<unsigned __int128>(std::max(L.a1, L.a2)) * x + static_cast<u64>(std::max<i64>({L.b1, L.b2, 0}));
    if (top > sieve.limit())
        throw RangeError("correlation: max(a) x + max(b) exceeds sieve limit");
}

template <class Term>
CorrelationReport run_correlation(Weighting kind, const std::vector<u64>& checkpoints, Term term)
{
    CorrelationReport r;
    r.kind = kind;
    r.checkpoints = checkpoints;
    CompensatedComplexSum s;
    std::size_t next = 0;
    const u64 x = checkpoints.back();
    for (u64 n = 1; n <= x; ++n) {
        const cplx z = term(n);
        s.add(kind == Weighting::Logarithmic ? z / static_cast<double>(n) : z);
        while (next < checkpoints.size() && checkpoints[next] == n) {
            r.sums.push_back(s.value());
            r.normalization.push_back(kind == Weighting::Logarithmic ? std::log(static_cast<double>(n))
                                                                     : static_cast<double>(n));
            ++next;
        }
    }
    return r;
}

} // namespace detail

// sum_{n <= x} f1(a1 n + b1) f2(a2 n + b2) / n at each checkpoint.
inline CorrelationReport log_correlation(const MultFunc& f1, const MultFunc& f2, const LinearForms& forms,
                                         const Sieve& sieve, std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("log_correlation: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const u64 x = checkpoints.back();
    detail::check_forms(forms, x, sieve);
    const u64 lim1 = static_cast<u64>(forms.a1) * x + static_cast<u64>(std::max<i64>(forms.b1, 0));
    const u64 lim2 = static_cast<u64>(forms.a2) * x + static_cast<u64>(std::max<i64>(forms.b2, 0));
    const auto t1 = tabulate(f1, sieve, lim1);
    const auto t2 = tabulate(f2, sieve, lim2);
    const detail::PairProduct prod(t1, t2, false);
    auto r = detail::run_correlation(Weighting::Logarithmic, checkpoints, [&](u64 n) {
        return prod(static_cast<u64>(forms.a1 * static_cast<i64>(n) + forms.b1),
                    static_cast<u64>(forms.a2 * static_cast<i64>(n) + forms.b2));
    });
    r.forms = forms;
    r.f1 = f1.name();
    r.f2 = f2.name();
    return r;
}

// sum_{n <= x} w(n) f1(a1 n + b1) f2(a2 n + b2), f2 optionally conjugated,
// in either weighting.
inline CorrelationReport form_correlation(const MultFunc& f1, const MultFunc& f2, const LinearForms& forms,
                                          Weighting kind, bool conjugate_second, const Sieve& sieve,
                                          std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("correlation: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const u64 x = checkpoints.back();
    detail::check_forms(forms, x, sieve);
    const u64 lim1 = static_cast<u64>(forms.a1) * x + static_cast<u64>(std::max<i64>(forms.b1, 0));
    const u64 lim2 = static_cast<u64>(forms.a2) * x + static_cast<u64>(std::max<i64>(forms.b2, 0));
    const auto t1 = tabulate(f1, sieve, lim1);
    const auto t2 = tabulate(f2, sieve, lim2);
    const detail::PairProduct prod(t1, t2, conjugate_second);
    auto r = detail::run_correlation(kind, checkpoints, [&](u64 n) {
        return prod(static_cast<u64>(forms.a1 * static_cast<i64>(n) + forms.b1),
                    static_cast<u64>(forms.a2 * static_cast<i64>(n) + forms.b2));
    });
    r.forms = forms;
    r.f1 = f1.name();
    r.f2 = f2.name();
    r.conjugate_second = conjugate_second;
    return r;
}

// x^{-1} sum_{n <= x} f(n) conj f(n + d) at each checkpoint.
inline CorrelationReport natural_correlation(const MultFunc& f, u64 d, const Sieve& sieve, std::vector<u64> checkpoints)
{
    if (checkpoints.empty())
        throw ConfigError("natural_correlation: no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const u64 x = checkpoints.back();
    if (x + d > sieve.limit())
        throw RangeError("natural_correlation: x + d exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + d);
    const detail::PairProduct prod(t, t, true);
    auto r = detail::run_correlation(Weighting::Natural, checkpoints, [&](u64 n) { return prod(n, n + d); });
    r.forms = {1, 0, 1, static_cast<i64>(d)};
    r.f1 = r.f2 = f.name();
    r.conjugate_second = true;
    return r;
}

// x^{-1} sum_{n <= x} f(n) conj f(n + d) for several shifts, sharing one table.
inline std::vector<cplx> natural_correlations(const MultFunc& f, const std::vector<u64>& shifts, const Sieve& sieve, u64 x)
{
    const u64 dmax = shifts.empty() ? 0 : *std::max_element(shifts.begin(), shifts.end());
    if (x + dmax > sieve.limit())
        throw RangeError("natural_correlations: x + d exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + dmax);
    const detail::PairProduct prod(t, t, true);
    std::vector<cplx> out;
    for (u64 d : shifts) {
        CompensatedComplexSum s;
        for (u64 n = 1; n <= x; ++n)
            s.add(prod(n, n + d));
        out.push_back(s.value() / static_cast<double>(x));
    }
    return out;
}

// ---- short intervals -------------------------------------------------------

namespace detail {

// |sum_{m < n <= m+H} f(n)|^2 for m = 1..x. For exact tables with a small
// denominator the window is kept as root multiplicities, so windows that
// vanish in Z[zeta] give exactly 0.
inline std::vector<double> window_norms(const ValueTable& t, u64 H, u64 x)
{
    std::vector<double> out(x + 1, 0.0);
    constexpr u64 kExactWindowDen = 360;
    if (t.exact() && t.denominator() <= kExactWindowDen) {
        const u64 L = t.denominator();
        std::vector<i64> c(L, 0);
        auto bump = [&](u64 n, i64 by) {
            if (!t.is_zero(n))
                c[static_cast<std::size_t>(t.angle(n))] += by;
        };
        for (u64 n = 2; n <= 1 + H; ++n)
            bump(n, 1);
        std::map<std::vector<i64>, double> cache;
        for (u64 m = 1; m <= x; ++m) {
            if (m > 1) {
                bump(m, -1);
                bump(m + H, 1);
            }
            auto it = cache.find(c);
            if (it == cache.end()) {
                CyclotomicInteger z(L);
                cplx s{};
                for (u64 k = 0; k < L; ++k) {
                    z.add_root(k, c[k]);
                    s += static_cast<double>(c[k]) * t.roots()[k];
                }
                it = cache.emplace(c, z.is_zero() ? 0.0 : std::norm(s)).first;
            }
            out[m] = it->second;
        }
        return out;
    }
    for (u64 m = 1; m <= x; ++m) {
        cplx s{};
        for (u64 n = m + 1; n <= m + H; ++n)
            s += t[n];
        out[m] = std::norm(s);
    }
    return out;
}

} // namespace detail

struct MomentIdentity {
    Weighting weighting = Weighting::Natural;
    u64 H = 0;
    u64 x = 0;
    double moment = 0.0;           // sum_{m <= x} w(m) |sum_{m < n <= m+H} f(n)|^2
    double correlation_side = 0.0; // sum_{|h| <= H} (H - |h|) sum_{n <= x, n+h >= 1} w(n) f(n) conj f(n+h)
    double residual = 0.0;         // |moment - correlation_side|
};

inline MomentIdentity moment_identity(const MultFunc& f, u64 H, u64 x, Weighting weighting, const Sieve& sieve)
{
    if (H < 1)
        throw ConfigError("moment_identity: H must be positive");
    if (x + H > sieve.limit())
        throw RangeError("moment_identity: x + H exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + H);
    auto w = [&](u64 n) { return weighting == Weighting::Logarithmic ? 1.0 / static_cast<double>(n) : 1.0; };

    MomentIdentity r{weighting, H, x, 0, 0, 0};
    const auto norms = detail::window_norms(t, H, x);
    CompensatedSum lhs;
    for (u64 m = 1; m <= x; ++m)
        lhs.add(w(m) * norms[m]);
    r.moment = lhs.value();

    const detail::PairProduct prod(t, t, true);
    CompensatedSum rhs;
    const i64 Hi = static_cast<i64>(H);
    for (i64 h = -Hi; h <= Hi; ++h) {
        CompensatedSum corr;
        for (u64 n = static_cast<u64>(std::max<i64>(1, 1 - h)); n <= x; ++n)
            corr.add(w(n) * prod(n, static_cast<u64>(static_cast<i64>(n) + h)).real());
        rhs.add(static_cast<double>(Hi - std::abs(h)) * corr.value());
    }
    r.correlation_side = rhs.value();
    r.residual = std::abs(r.moment - r.correlation_side);
    return r;
}

// Natural weighting is normalized by x; the logarithmic moment is the raw
// 1/m-weighted sum.
inline double short_interval_moment(const MultFunc& f, u64 H, u64 x, Weighting weighting, const Sieve& sieve)
{
    if (H < 1)
        throw ConfigError("short_interval_moment: H must be positive");
    if (x + H > sieve.limit())
        throw RangeError("short_interval_moment: x + H exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + H);
    const auto norms = detail::window_norms(t, H, x);
    CompensatedSum s;
    for (u64 m = 1; m <= x; ++m)
        s.add(weighting == Weighting::Logarithmic ? norms[m] / static_cast<double>(m) : norms[m]);
    return weighting == Weighting::Logarithmic ? s.value() : s.value() / static_cast<double>(x);
}

// max over H of residual / H^3 for f = 1; the frozen slack constant.
inline double calibrate_moment_constant(Weighting weighting, const std::vector<u64>& Hs, u64 x, const Sieve& sieve)
{
    double C = 0.0;
    for (u64 H : Hs) {
        const auto r = moment_identity(funcs::one(), H, x, weighting, sieve);
        C = std::max(C, r.residual / std::pow(static_cast<double>(H), 3));
    }
    return C;
}

// ---- discrepancy -----------------------------------------------------------

struct DiscrepancyReport {
    u64 N = 0;
    double total_weight = 0.0;
    double weighted_discrepancy = 0.0;
    std::vector<u64> m_list;
    std::vector<double> et_bound;
    std::vector<double> exponential_sums; // index h-1: |W^{-1} sum w e(h theta)|, h <= max m

    bool bound_holds(double slack = 1e-12) const
    {
        for (double b : et_bound)
            if (weighted_discrepancy > b + slack)
                return false;
        return true;
    }
};

// Exact sup over intervals [a, b) of |mass - length|, by a sweep over the
// sorted data points.
inline double exact_weighted_discrepancy(const std::vector<double>& theta, const std::vector<double>& w)
{
    std::vector<std::size_t> idx(theta.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return theta[a] < theta[b]; });
    CompensatedSum total;
    for (double v : w)
        total.add(v);
    const double W = total.value();
    // g(s) = mass[0, s) - s; sup g is approached just right of a point,
    // inf g is attained at a point; g(0) = g(1) = 0.
    double hi = 0.0, lo = 0.0;
    CompensatedSum below;
    for (std::size_t i = 0; i < idx.size();) {
        const double s = theta[idx[i]];
        const double before = below.value() / W;
        std::size_t j = i;
        while (j < idx.size() && theta[idx[j]] == s)
            below.add(w[idx[j++]]);
        const double after = below.value() / W;
        lo = std::min(lo, before - s);
        hi = std::max(hi, after - s);
        i = j;
    }
    return std::min(1.0, hi - lo);
}

inline DiscrepancyReport weighted_discrepancy(const std::vector<double>& theta, const std::vector<double>& w,
                                              std::vector<u64> m_list)
{
    if (theta.empty())
        throw DomainError("weighted_discrepancy: empty input");
    if (theta.size() != w.size())
        throw DomainError("weighted_discrepancy: length mismatch");
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!(w[i] > 0.0))
            throw DomainError("weighted_discrepancy: weights must be positive");
        if (!(theta[i] >= 0.0 && theta[i] < 1.0))
            throw DomainError("weighted_discrepancy: theta must lie in [0, 1)");
    }
    std::sort(m_list.begin(), m_list.end());
    DiscrepancyReport r;
    r.N = theta.size();
    r.m_list = m_list;
    r.weighted_discrepancy = exact_weighted_discrepancy(theta, w);
    CompensatedSum total;
    for (double v : w)
        total.add(v);
    r.total_weight = total.value();

    const u64 M = m_list.empty() ? 0 : m_list.back();
    std::vector<CompensatedComplexSum> S(M);
    for (std::size_t n = 0; n < theta.size(); ++n) {
        const cplx z = std::polar(1.0, 2 * std::numbers::pi * theta[n]);
        cplx cur = 1.0;
        for (u64 h = 0; h < M; ++h) {
            cur *= z;
            S[h].add(w[n] * cur);
        }
    }
    for (u64 h = 0; h < M; ++h)
        r.exponential_sums.push_back(std::abs(S[h].value()) / r.total_weight);
    for (u64 m : m_list) {
        CompensatedSum b;
        const double inv = 1.0 / static_cast<double>(m + 1);
        for (u64 h = 1; h <= m; ++h)
            b.add((1.0 / static_cast<double>(h) - inv) * r.exponential_sums[h - 1]);
        r.et_bound.push_back(6.0 * inv + 4.0 / std::numbers::pi * b.value());
    }
    return r;
}

// theta_n = arg(f(n) conj f(n+1)) / 2pi in [0, 1) with weight 1/n, over
// n <= N where both values are nonzero.
struct GapSequence {
    std::vector<u64> n;
    std::vector<double> theta;
    std::vector<double> weight;
};

inline GapSequence gap_sequence(const MultFunc& f, const Sieve& sieve, u64 N)
{
    if (N + 1 > sieve.limit())
        throw RangeError("gap_sequence: N + 1 exceeds sieve limit");
    const auto t = tabulate(f, sieve, N + 1);
    const detail::PairProduct prod(t, t, true);
    GapSequence g;
    for (u64 n = 1; n <= N; ++n) {
        if (t.is_zero(n) || t.is_zero(n + 1))
            continue;
        double th;
        if (prod.exact()) {
            th = static_cast<double>(prod.angle(n, n + 1)) / static_cast<double>(prod.denominator());
        } else {
            th = std::arg(prod(n, n + 1)) / (2 * std::numbers::pi);
            if (th < 0)
                th += 1.0;
            if (th >= 1.0)
                th = 0.0;
        }
        g.n.push_back(n);
        g.theta.push_back(th);
        g.weight.push_back(1.0 / static_cast<double>(n));
    }
    return g;
}

// ---- large-log scan -------------------------------------------------------

struct LargeLogReport {
    double eps = 0.0;
    u64 N = 0;
    double delta = 0.0;
    u64 x = 0;
    u64 best_k = 0;
    double best_value = 0.0;
    double threshold = 0.0; // delta log x
    bool exceeds = false;
    std::vector<double> values; // |sum_{n <= x} (f(n) conj f(n+1))^k / n|, k = 1..N
};

inline u64 largelog_N(double eps)
{
    if (!(eps > 0.0 && eps <= 2.0))
        throw ConfigError("largelog: eps must lie in (0, 2]");
    return static_cast<u64>(std::ceil(12 * std::numbers::pi * (std::floor(2.0 / eps) + 1)));
}

inline double largelog_delta(double eps) { return eps / (18 * std::log(static_cast<double>(largelog_N(eps)))); }

inline LargeLogReport largelog_scan(const MultFunc& f, double eps, u64 x, const Sieve& sieve)
{
    LargeLogReport r;
    r.eps = eps;
    r.N = largelog_N(eps);
    r.delta = largelog_delta(eps);
    r.x = x;
    r.threshold = r.delta * std::log(static_cast<double>(x));
    if (x + 1 > sieve.limit())
        throw RangeError("largelog_scan: x + 1 exceeds sieve limit");
    const auto t = tabulate(f, sieve, x + 1);
    const detail::PairProduct prod(t, t, true);
    std::vector<CompensatedComplexSum> S(r.N);
    if (prod.exact()) {
        const auto L = prod.denominator();
        const auto& roots = prod.roots();
        for (u64 n = 1; n <= x; ++n) {
            const auto a = prod.angle(n, n + 1);
            if (a < 0)
                continue;
            const double inv = 1.0 / static_cast<double>(n);
            std::int64_t cur = 0;
            for (u64 k = 0; k < r.N; ++k) {
                cur += a;
                if (cur >= L)
                    cur -= L;
                S[k].add(roots[static_cast<std::size_t>(cur)] * inv);
            }
        }
    } else {
        for (u64 n = 1; n <= x; ++n) {
            const cplx z = prod(n, n + 1);
            if (z == cplx{})
                continue;
            const double inv = 1.0 / static_cast<double>(n);
            cplx cur = 1.0;
            for (u64 k = 0; k < r.N; ++k) {
                cur *= z;
                S[k].add(cur * inv);
            }
        }
    }
    for (u64 k = 0; k < r.N; ++k) {
        const double v = std::abs(S[k].value());
        r.values.push_back(v);
        if (v > r.best_value) {
            r.best_value = v;
            r.best_k = k + 1;
        }
    }
    r.exceeds = r.best_value >= r.threshold;
    return r;
}

} // namespace multlab
