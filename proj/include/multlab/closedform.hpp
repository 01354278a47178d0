#pragma once

// Local factors G(e), G~(e), the correlation formula G_f(d) for perturbed
// characters, fractional-part identities and the positivity sums.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "multlab/characters.hpp"
#include "multlab/multfunc.hpp"

namespace multlab {

// f = chi * F on (n, q) = 1 with F(p) = 1 except at finitely many primes
// p not dividing q; f(p) for p | q is given separately (default 0).
// f is completely multiplicative.
class ChudakovSetup {
public:
    ChudakovSetup(DirichletCharacter chi, std::map<u64, UnitValue> perturbations,
                  std::map<u64, UnitValue> at_modulus = {}, std::string name = "")
        : chi_(std::move(chi)), F_(std::move(perturbations)), fq_(std::move(at_modulus)), name_(std::move(name))
    {
        const u64 q = chi_.modulus();
        auto check_value = [](const UnitValue& v, const std::string& what) {
            if (!v.is_zero() && !v.is_root())
                throw ConfigError("ChudakovSetup: " + what + " must be 0 or an exact root of unity");
        };
        for (const auto& [p, v] : F_) {
            if (p < 2 || factorize_trial(p).factors.size() != 1 || factorize_trial(p).factors[0].exponent != 1)
                throw ConfigError("ChudakovSetup: perturbation key " + std::to_string(p) + " is not prime");
            if (q % p == 0)
                throw ConfigError("ChudakovSetup: F(p) is fixed to 1 for p | q (p = " + std::to_string(p) + ")");
            check_value(v, "F(" + std::to_string(p) + ")");
        }
        for (const auto& [p, v] : fq_) {
            if (q % p != 0 || factorize_trial(p).factors.size() != 1 || factorize_trial(p).factors[0].exponent != 1)
                throw ConfigError("ChudakovSetup: f(p) override needs a prime p | q, got " + std::to_string(p));
            check_value(v, "f(" + std::to_string(p) + ")");
        }
        for (const auto& [p, e] : factorize_trial(q).factors)
            q_primes_.push_back(p);
        local_ = local_components(chi_);
        if (name_.empty())
            name_ = chi_.label() + describe();
    }

    const DirichletCharacter& chi() const { return chi_; }
    u64 q() const { return chi_.modulus(); }
    const std::string& name() const { return name_; }
    const std::map<u64, UnitValue>& perturbations() const { return F_; }
    const std::map<u64, UnitValue>& at_modulus() const { return fq_; }
    const std::vector<u64>& modulus_primes() const { return q_primes_; }
    const std::vector<LocalComponent>& local() const { return local_; }

    UnitValue F(u64 p) const
    {
        auto it = F_.find(p);
        return it == F_.end() ? UnitValue::one() : it->second;
    }

    // f at a prime.
    UnitValue f_prime(u64 p) const
    {
        if (q() % p == 0) {
            auto it = fq_.find(p);
            return it == fq_.end() ? UnitValue::zero() : it->second;
        }
        return chi_(static_cast<i64>(p)) * F(p);
    }

    MultFunc f() const
    {
        auto self = std::make_shared<const ChudakovSetup>(*this);
        return MultFunc(name_, true, [self](u64 p, unsigned) { return self->f_prime(p); });
    }

    // Primes where f vanishes, and their product P.
    std::vector<u64> zero_primes() const
    {
        std::vector<u64> s;
        for (u64 p : q_primes_)
            if (f_prime(p).is_zero())
                s.push_back(p);
        for (const auto& [p, v] : F_)
            if (v.is_zero())
                s.push_back(p);
        std::sort(s.begin(), s.end());
        return s;
    }

    u64 P() const
    {
        u64 P = 1;
        for (u64 p : zero_primes())
            P *= p;
        return P;
    }

private:
    std::string describe() const
    {
        std::string s;
        for (const auto& [p, v] : F_)
            s += ",F(" + std::to_string(p) + ")=" + v.to_string();
        for (const auto& [p, v] : fq_)
            s += ",f(" + std::to_string(p) + ")=" + v.to_string();
        return s.empty() ? s : "[" + s.substr(1) + "]";
    }

    DirichletCharacter chi_;
    std::map<u64, UnitValue> F_;
    std::map<u64, UnitValue> fq_;
    std::string name_;
    std::vector<u64> q_primes_;
    std::vector<LocalComponent> local_;
};

// ---- local factors ---------------------------------------------------------

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    unsigned terms = 0;
};

// The factor |h_k|^2 + 2 Re sum_{i > k} h_i conj(h_k) / p^{i-k} with
// h_0 = 1, h_i = F^{i-1}(F - 1), summed directly until the tail is below tol.
inline SeriesValue local_series(cplx F, u64 p, unsigned k, double tol = 1e-16)
{
    auto h = [&](unsigned i) { return i == 0 ? cplx{1.0, 0.0} : std::pow(F, static_cast<int>(i - 1)) * (F - 1.0); };
    const cplx hk = h(k);
    const double pd = static_cast<double>(p);
    CompensatedSum s;
    s.add(std::norm(hk));
    SeriesValue out;
    double scale = 1.0;
    // |h_i| <= 2 |F|^{i-1} <= 2, so the tail after j terms is at most 4 |h_k| p^{-j} / (p - 1).
    for (unsigned j = 1; j < 4000; ++j) {
        scale /= pd;
        s.add(2.0 * (h(k + j) * std::conj(hk)).real() * scale);
        out.terms = j;
        out.tail_bound = 4.0 * std::abs(hk) * scale / (pd - 1.0);
        if (out.tail_bound < tol || hk == cplx{})
            break;
    }
    out.value = s.value();
    return out;
}

// Closed form of the same factor.
inline double local_closed(cplx F, u64 p, unsigned k)
{
    const double pd = static_cast<double>(p);
    if (k == 0)
        return ((pd - 2.0 + F) / (pd - F)).real();
    const double a2 = std::norm(F - 1.0);
    if (a2 == 0.0)
        return 0.0;
    const double m = std::pow(std::norm(F), static_cast<double>(k - 1));
    return a2 * m * ((pd + F) / (pd - F)).real();
}

// G~ local factor at p^k. Unimodular F at odd p uses
// |F-1|^2 (p^2-1) / ((p-1)^2 - 2(1 - Re F)); F = 0 gives (1-2/p)^{-1} 0^{k-1};
// p = 2 always goes through the series.
inline double local_factor(const UnitValue& Fv, u64 p, unsigned k)
{
    if (k == 0)
        return 1.0;
    if (Fv.modulus() > 1.0 + kModulusSlack)
        throw DomainError("local_factor: |F(p)| > 1");
    const cplx F = Fv.to_complex();
    const double pd = static_cast<double>(p);
    if (p == 2) {
        const double g0 = local_series(F, p, 0).value;
        if (std::abs(g0) < 1e-12)
            throw SingularityError("local_factor: G_2(0) = 0 (Re F(2) = 1/2)");
        return local_series(F, p, k).value / g0;
    }
    if (Fv.is_zero())
        return k == 1 ? 1.0 / (1.0 - 2.0 / pd) : 0.0;
    if (std::abs(Fv.modulus() - 1.0) <= kModulusSlack) {
        const double den = (pd - 1.0) * (pd - 1.0) - 2.0 * (1.0 - F.real());
        if (den <= 1e-12)
            throw SingularityError("local_factor: (p-1)^2 - 2(1 - Re F(p)) vanishes at p = " + std::to_string(p));
        return std::norm(F - 1.0) * (pd * pd - 1.0) / den;
    }
    const double g0 = local_closed(F, p, 0);
    if (std::abs(g0) < 1e-12)
        throw SingularityError("local_factor: vanishing normalization at p = " + std::to_string(p));
    return local_closed(F, p, k) / g0;
}

namespace detail {

inline unsigned valuation(u64 n, u64 p)
{
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Does n have a prime factor outside the given set?
inline bool has_other_prime(u64 n, const std::vector<u64>& primes)
{
    for (u64 p : primes)
        while (n % p == 0)
            n /= p;
    return n != 1;
}

inline std::vector<u64> perturbed_primes(const ChudakovSetup& s)
{
    std::vector<u64> out;
    for (const auto& [p, v] : s.perturbations())
        if (!(v.is_root() && v.as_root().num == 0))
            out.push_back(p);
    return out;
}

} // namespace detail

// Un-normalized G(e) from the closed local forms; G(e) = 0 as soon as e has a
// prime factor where F = 1.
inline double g_value(const ChudakovSetup& s, u64 e)
{
    const auto pp = detail::perturbed_primes(s);
    if (e == 0)
        throw DomainError("g_value: e must be positive");
    if (detail::has_other_prime(e, pp))
        return 0.0;
    double g = 1.0;
    for (u64 p : pp)
        g *= local_closed(s.F(p).to_complex(), p, detail::valuation(e, p));
    return g;
}

struct GTable {
    u64 e_max = 0;
    double G1 = 0.0;
    std::vector<double> G;        // index e, closed form
    std::vector<double> G_series; // index e, defining series
    std::vector<double> Gt;       // G / G(1)
    double max_gap = 0.0;         // max |G - G_series| (relative to max(1, |G|))
    double tail_bound = 0.0;
    double Gt_at(u64 e) const { return Gt.at(e); }
};

inline GTable g_table(const ChudakovSetup& s, u64 e_max)
{
    if (e_max < 1)
        throw ConfigError("g_table: e_max must be at least 1");
    if (e_max > 10'000'000)
        throw SizeError("g_table: e_max above 10^7");
    const auto pp = detail::perturbed_primes(s);
    GTable t;
    t.e_max = e_max;
    t.G.assign(e_max + 1, 0.0);
    t.G_series.assign(e_max + 1, 0.0);
    t.Gt.assign(e_max + 1, 0.0);

    t.G1 = g_value(s, 1);
    if (std::abs(t.G1) < 1e-12)
        throw DegenerateError("g_table: G(1) = 0 for " + s.name());

    for (u64 e = 1; e <= e_max; ++e) {
        if (detail::has_other_prime(e, pp))
            continue; // zero both ways: a factor |F(p) - 1|^2 = 0
        double gt = 1.0, gs = 1.0;
        for (u64 p : pp) {
            const unsigned k = detail::valuation(e, p);
            gt *= local_factor(s.F(p), p, k);
            const auto sv = local_series(s.F(p).to_complex(), p, k);
            gs *= sv.value;
            t.tail_bound = std::max(t.tail_bound, sv.tail_bound);
        }
        t.Gt[e] = gt;
        t.G[e] = t.G1 * gt;
        t.G_series[e] = gs;
        t.max_gap = std::max(t.max_gap, std::abs(t.G[e] - gs) / std::max(1.0, std::abs(gs)));
    }
    return t;
}

// ---- Lemma-style checks on a setup -------------------------------------------

struct QpsReport {
    bool normalized = true;        // G(1) != 0, so G~ exists
    bool zero_off_coprime = true;  // G(d) = 0 whenever gcd(d, q) > 1
    bool nonneg_odd = true;        // G~(d) >= 0 for gcd(d, 2q) = 1
    double coprime_sum = 0.0;      // sum_{d <= d_max, (d,q)=1} G(d)/d
    double coprime_sum_limit = 0.0;
    bool coprime_sum_positive = false;
    bool two_applicable = false;   // G~(2) < 0
    double Gt2 = 0.0;
    bool two_holds = true;         // |G~(2)| > 1 when applicable
    u64 d_max = 0;
    bool all_hold() const { return zero_off_coprime && nonneg_odd && coprime_sum_positive && two_holds; }
};

// sum over all e of G(e)/e restricted to p-powers: sum_k G_p(k) / p^k.
inline double local_divisor_mass(cplx F, u64 p)
{
    const double pd = static_cast<double>(p);
    const double a2 = std::norm(F - 1.0);
    return local_closed(F, p, 0) + a2 * ((pd + F) / (pd - F)).real() / (pd - std::norm(F));
}

inline QpsReport qps_checks(const ChudakovSetup& s, u64 d_max = 10'000)
{
    QpsReport r;
    r.d_max = d_max;
    const u64 q = s.q();
    const auto pp = detail::perturbed_primes(s);
    const double G1 = g_value(s, 1);
    r.normalized = std::abs(G1) >= 1e-12;
    CompensatedSum sum;
    for (u64 d = 1; d <= d_max; ++d) {
        const double G = g_value(s, d);
        if (std::gcd(d, q) > 1) {
            if (G != 0.0)
                r.zero_off_coprime = false;
            continue;
        }
        sum.add(G / static_cast<double>(d));
        if (r.normalized && d % 2 == 1) {
            double gt = 1.0;
            if (detail::has_other_prime(d, pp))
                gt = 0.0;
            else
                for (u64 p : pp)
                    gt *= local_factor(s.F(p), p, detail::valuation(d, p));
            if (gt < -1e-12)
                r.nonneg_odd = false;
        }
    }
    r.coprime_sum = sum.value();
    r.coprime_sum_positive = r.coprime_sum > 0.0;
    r.coprime_sum_limit = 1.0;
    for (u64 p : pp)
        r.coprime_sum_limit *= local_divisor_mass(s.F(p).to_complex(), p);
    if (r.normalized && q % 2 == 1) {
        r.Gt2 = local_factor(s.F(2), 2, 1);
        r.two_applicable = r.Gt2 < 0.0;
        r.two_holds = !r.two_applicable || std::abs(r.Gt2) > 1.0;
    }
    return r;
}

// ---- correlation formula -----------------------------------------------------

struct CorrelationFormula {
    u64 d = 0;
    cplx value;
    double tail_bound = 0.0; // the e-sums are finite here, so this stays 0
};

// G_f(d) = q^{-1} sum_{R | d, rad R | q} |f(R)|^2 / R * S_chi(d/R) * sum_{e | d/R} G(e)/e;
// d = 0 takes the full sums over R and e.
inline CorrelationFormula correlation_formula(const ChudakovSetup& s, u64 d)
{
    const double q = static_cast<double>(s.q());
    const auto pp = detail::perturbed_primes(s);
    CorrelationFormula out;
    out.d = d;
    if (d == 0) {
        double v = static_cast<double>(arith_fns(factorize_trial(s.q())).phi) / q;
        for (u64 p : s.modulus_primes())
            v /= 1.0 - s.f_prime(p).modulus() * s.f_prime(p).modulus() / static_cast<double>(p);
        for (u64 p : pp)
            v *= local_divisor_mass(s.F(p).to_complex(), p);
        out.value = v;
        return out;
    }
    // Divisors R of d supported on primes of q.
    std::vector<u64> Rs{1};
    for (u64 p : s.modulus_primes()) {
        const unsigned v = detail::valuation(d, p);
        const std::size_t n = Rs.size();
        for (std::size_t i = 0; i < n; ++i) {
            u64 r = Rs[i];
            for (unsigned j = 1; j <= v; ++j) {
                r *= p;
                Rs.push_back(r);
            }
        }
    }
    CompensatedSum sum;
    for (u64 R : Rs) {
        double fR = 1.0;
        for (u64 p : s.modulus_primes())
            fR *= std::pow(s.f_prime(p).modulus(), 2.0 * detail::valuation(R, p));
        if (fR == 0.0)
            continue;
        const u64 m = d / R;
        const i64 S = character_sum_closed(s.local(), static_cast<i64>(m));
        if (S == 0)
            continue;
        double esum = 1.0;
        for (u64 p : pp) {
            const unsigned v = detail::valuation(m, p);
            const cplx F = s.F(p).to_complex();
            double part = 0.0, pk = 1.0;
            for (unsigned k = 0; k <= v; ++k, pk *= static_cast<double>(p))
                part += local_closed(F, p, k) / pk;
            esum *= part;
        }
        sum.add(fR / static_cast<double>(R) * static_cast<double>(S) * esum);
    }
    out.value = sum.value() / q;
    return out;
}

// ---- fractional parts ----------------------------------------------------------

inline double dist_to_int(double t)
{
    const double f = frac(t);
    return std::min(f, 1.0 - f);
}

struct FracIdentity {
    double t = 0.0;
    double delta = 0.0;    // {t} - {t}^2
    double delta2 = 0.0;   // at 2t
    double norm = 0.0;     // ||t||
    double check = 0.0;    // |4 delta - delta2 - 2 norm|
};

inline FracIdentity frac_identities(double t)
{
    auto D = [](double u) {
        const double f = frac(u);
        return f - f * f;
    };
    FracIdentity r{t, D(t), D(2.0 * t), dist_to_int(t), 0.0};
    r.check = std::abs(4.0 * r.delta - r.delta2 - 2.0 * r.norm);
    return r;
}

namespace detail {

// Squarefree divisors g of rad(q) / 2^kappa with mu(g).
inline std::vector<std::pair<u64, int>> mobius_divisors(u64 q, int kappa)
{
    if (q == 0)
        throw ConfigError("mobius_frac_sum: q must be positive");
    if (kappa != 0 && kappa != 1)
        throw ConfigError("mobius_frac_sum: kappa must be 0 or 1");
    if ((kappa == 1) != (q % 2 == 0))
        throw ConfigError("mobius_frac_sum: kappa must be 1 exactly when q is even");
    std::vector<std::pair<u64, int>> out{{1, 1}};
    for (const auto& [p, e] : factorize_trial(q).factors) {
        if (p == 2)
            continue;
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({out[i].first * p, -out[i].second});
    }
    return out;
}

} // namespace detail

// sum_{g | rad(q)/2^kappa} mu(g) g^{-2} ||g t||
inline double mobius_frac_sum(u64 q, int kappa, double t)
{
    CompensatedSum s;
    for (const auto& [g, mu] : detail::mobius_divisors(q, kappa))
        s.add(mu * dist_to_int(static_cast<double>(g) * t) / (static_cast<double>(g) * static_cast<double>(g)));
    return s.value();
}

// Same sum at the rational t = num/den, with ||g t|| taken exactly.
inline double mobius_frac_sum(u64 q, int kappa, u64 num, u64 den)
{
    if (den == 0)
        throw DomainError("mobius_frac_sum: zero denominator");
    CompensatedSum s;
    for (const auto& [g, mu] : detail::mobius_divisors(q, kappa)) {
        const auto r = static_cast<u64>((static_cast<unsigned __int128>(num) * g) % den);
        const u64 near = std::min(r, den - r);
        s.add(mu * (static_cast<double>(near) / static_cast<double>(den)) /
              (static_cast<double>(g) * static_cast<double>(g)));
    }
    return s.value();
}

struct FourierValue {
    double value = 0.0;
    double truncation_bound = 0.0;
    u64 K = 0;
};

// (1/4) A (1 - (4/pi^2) A^{-1} sum_{0 < |k| <= K, (k, 2q) = 1} e(kt)/k^2),
// A = prod_{p | rad(q)/2^kappa} (1 - p^{-2}).
inline FourierValue mobius_frac_fourier(u64 q, int kappa, double t, u64 K = 200'000)
{
    const auto divs = detail::mobius_divisors(q, kappa);
    u64 r = 1;
    double A = 1.0;
    for (const auto& [g, mu] : divs)
        if (mu == -1 && g > 1 && factorize_trial(g).factors.size() == 1) {
            r *= g;
            A *= 1.0 - 1.0 / (static_cast<double>(g) * static_cast<double>(g));
        }
    // coprime[k mod r] for odd k.
    std::vector<char> coprime(r);
    for (u64 k = 0; k < r; ++k)
        coprime[k] = std::gcd(k, r) == 1;
    const double theta = 2.0 * std::numbers::pi * frac(t);
    const double c2 = std::cos(2.0 * theta);
    CompensatedSum s;
    double prev = std::cos(-theta), cur = std::cos(theta); // k = -1, 1
    for (u64 k = 1; k <= K; k += 2) {
        if ((k - 1) % 2048 == 0) {
            cur = std::cos(theta * static_cast<double>(k));
            prev = std::cos(theta * (static_cast<double>(k) - 2.0));
        }
        if (coprime[k % r])
            s.add(2.0 * cur / (static_cast<double>(k) * static_cast<double>(k)));
        const double next = 2.0 * c2 * cur - prev;
        prev = cur;
        cur = next;
    }
    FourierValue out;
    out.K = K;
    out.value = A / 4.0 - s.value() / (std::numbers::pi * std::numbers::pi);
    // 2 sum_{k > K, k odd} k^{-2} <= 1/K
    out.truncation_bound = 1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(K));
    return out;
}

// ---- positivity sum --------------------------------------------------------------

struct RationalH {
    u64 num = 1;
    u64 den = 1;
};

struct PoscoeffsReport {
    double value = 0.0;
    u64 terms = 0;           // (d, R) pairs with nonzero weight
    double min_term = 0.0;
    bool all_nonnegative = true;
    std::vector<u64> support; // d <= M' with G~(d) != 0
};

inline int default_kappa(u64 q) { return q % 2 == 0 ? 1 : 0; }

inline int default_tau(const ChudakovSetup& s)
{
    if (s.q() % 2 == 0)
        return 0;
    if (std::abs(g_value(s, 1)) < 1e-12)
        throw DegenerateError("default_tau: G(1) = 0");
    return local_factor(s.F(2), 2, 1) < 0.0 ? 1 : 0;
}

// sum_{d <= M', (d, 2^tau q) = 1} G~(d) sum_{R <= M', rad R | q} |f(R)|^2
//   sum_{g | rad(q)/2^kappa} mu(g) g^{-2} ||H g / (d R)||
inline PoscoeffsReport poscoeffs_truncation(const ChudakovSetup& s, RationalH H, u64 Mp, int tau, int kappa)
{
    const u64 q = s.q();
    if (kappa != default_kappa(q))
        throw ConfigError("poscoeffs: kappa must be 1 exactly when q is even");
    if (tau != default_tau(s))
        throw ConfigError("poscoeffs: tau must be 1 exactly when G~(2) < 0");
    if (H.den == 0)
        throw DomainError("poscoeffs: H has zero denominator");
    const auto pp = detail::perturbed_primes(s);
    const u64 guard = tau ? 2 * q : q;

    std::vector<std::pair<u64, double>> Rs;
    for (u64 R = 1; R <= Mp; ++R) {
        if (detail::has_other_prime(R, s.modulus_primes()))
            continue;
        double fR = 1.0;
        for (u64 p : s.modulus_primes())
            fR *= std::pow(s.f_prime(p).modulus(), 2.0 * detail::valuation(R, p));
        if (fR != 0.0)
            Rs.push_back({R, fR});
    }
    PoscoeffsReport out;
    CompensatedSum total;
    bool first = true;
    for (u64 d = 1; d <= Mp; ++d) {
        if (std::gcd(d, guard) != 1 || detail::has_other_prime(d, pp))
            continue;
        double gt = 1.0;
        for (u64 p : pp)
            gt *= local_factor(s.F(p), p, detail::valuation(d, p));
        if (gt == 0.0)
            continue;
        out.support.push_back(d);
        for (const auto& [R, fR] : Rs) {
            const unsigned __int128 den = static_cast<unsigned __int128>(H.den) * d * R;
            if (den >> 64)
                throw SizeError("poscoeffs: H denominator times dR overflows");
            const double inner = mobius_frac_sum(q, kappa, H.num, static_cast<u64>(den));
            const double term = gt * fR * inner;
            total.add(term);
            ++out.terms;
            if (first || term < out.min_term)
                out.min_term = term;
            first = false;
            if (term < -1e-12)
                out.all_nonnegative = false;
        }
    }
    out.value = total.value();
    return out;
}

// ---- local means M_p(f1, f2; L1, L2) ---------------------------------------------

struct AffineForm {
    i64 d = 1; // L(n) = d n + a
    i64 a = 0;
};

struct LocalMean {
    cplx value;
    double truncated_mass = 0.0; // density of n whose valuations were not resolved
    u64 nodes = 0;
};

// lim x^{-1} sum_{nu1, nu2} f1(p^nu1) conj f2(p^nu2) #{n <= x : p^nu1 || L1(n), p^nu2 || L2(n)}.
// The joint densities are counted on residues mod p^l, refining only the
// classes where a valuation is still undetermined.
inline LocalMean local_mean(const MultFunc& f1, const MultFunc& f2, AffineForm L1, AffineForm L2, u64 p,
                            double tol = 1e-15)
{
    if (L1.d == 0 || L2.d == 0)
        throw DomainError("local_mean: leading coefficients must be nonzero");
    if (p < 2)
        throw DomainError("local_mean: p must be prime");
    using u128 = unsigned __int128;
    auto residue = [](i64 c, u64 m) { return static_cast<u64>(mod_floor(c, static_cast<i64>(m))); };
    // L(n) mod m for n known mod m.
    auto eval = [&](const AffineForm& L, u64 n, u64 m) {
        return static_cast<u64>((static_cast<u128>(residue(L.d, m)) * n + residue(L.a, m)) % m);
    };
    auto vp = [&](u64 v) {
        unsigned k = 0;
        while (v % p == 0) {
            v /= p;
            ++k;
        }
        return k;
    };
    std::map<std::pair<unsigned, unsigned>, double> mass;
    LocalMean out;
    struct Node {
        u64 n;
        int v1, v2; // -1 while undetermined
    };
    std::vector<Node> level{{0, -1, -1}};
    u64 m = 1;
    unsigned l = 0;
    double measure = 1.0;
    const u64 cap = u64{1} << 62;
    while (!level.empty()) {
        if (measure < tol || m > cap / p) {
            out.truncated_mass = measure * static_cast<double>(level.size());
            break;
        }
        const u64 m2 = m * p;
        measure /= static_cast<double>(p);
        ++l;
        std::vector<Node> next;
        for (const auto& node : level) {
            for (u64 c = 0; c < p; ++c) {
                Node ch{node.n + c * m, node.v1, node.v2};
                ++out.nodes;
                if (ch.v1 < 0) {
                    const u64 r = eval(L1, ch.n, m2);
                    if (r != 0)
                        ch.v1 = static_cast<int>(vp(r));
                }
                if (ch.v2 < 0) {
                    const u64 r = eval(L2, ch.n, m2);
                    if (r != 0)
                        ch.v2 = static_cast<int>(vp(r));
                }
                if (ch.v1 >= 0 && ch.v2 >= 0)
                    mass[{static_cast<unsigned>(ch.v1), static_cast<unsigned>(ch.v2)}] += measure;
                else
                    next.push_back(ch);
            }
        }
        level = std::move(next);
        m = m2;
    }
    CompensatedComplexSum s;
    for (const auto& [v, w] : mass)
        s.add(w * (f1.prime_power(p, v.first).to_complex() * std::conj(f2.prime_power(p, v.second).to_complex())));
    out.value = s.value();
    return out;
}

inline LocalMean local_mean(const MultFunc& f, AffineForm L1, AffineForm L2, u64 p, double tol = 1e-15)
{
    return local_mean(f, f, L1, L2, p, tol);
}

} // namespace multlab
