#pragma once

// 1-bounded multiplicative functions given by their values on prime powers,
// with an optional archimedean twist n^{it}.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multlab/arith.hpp"
#include "multlab/unit_value.hpp"

namespace multlab {

class MultFunc {
public:
    using Rule = std::function<UnitValue(u64 p, unsigned k)>;

    MultFunc(std::string name, bool completely_multiplicative, Rule rule, double t = 0.0)
        : impl_(std::make_shared<const Impl>(
              Impl{std::move(name), completely_multiplicative, std::move(rule), t}))
    {
    }

    const std::string& name() const { return impl_->name; }
    bool completely_multiplicative() const { return impl_->complete; }
    double t() const { return impl_->t; }

    // f(p^k) without the archimedean twist. Complete multiplicativity is
    // enforced here rather than trusted to the rule.
    UnitValue prime_power(u64 p, unsigned k) const
    {
        if (k == 0)
            return UnitValue::one();
        if (impl_->complete)
            return impl_->rule(p, 1).pow(k);
        return impl_->rule(p, k);
    }

    // f(p^k) including the twist factor (p^k)^{it}.
    UnitValue twisted_prime_power(u64 p, unsigned k) const
    {
        UnitValue v = prime_power(p, k);
        if (impl_->t == 0.0 || v.is_zero())
            return v;
        return v * archimedean(std::pow(static_cast<double>(p), k));
    }

    UnitValue at(const Factorization& f) const
    {
        UnitValue v = UnitValue::one();
        for (const auto& [p, e] : f.factors) {
            v = v * prime_power(p, e);
            if (v.is_zero())
                return v;
        }
        if (impl_->t != 0.0)
            v = v * archimedean(static_cast<double>(f.value));
        return v;
    }

    // n^{it} as a floating unit value.
    UnitValue archimedean(double n) const
    {
        const double phase = impl_->t * std::log(n);
        return UnitValue::approx(std::cos(phase), std::sin(phase));
    }

private:
    struct Impl {
        std::string name;
        bool complete;
        Rule rule;
        double t;
    };
    std::shared_ptr<const Impl> impl_;
};

inline UnitValue evaluate(const MultFunc& f, const Sieve& sieve, u64 n)
{
    return f.at(sieve.factorize(n));
}

namespace funcs {

inline MultFunc one()
{
    return MultFunc("1", true, [](u64, unsigned) { return UnitValue::one(); });
}

inline MultFunc liouville()
{
    return MultFunc("liouville", true, [](u64, unsigned) { return UnitValue::root(1, 2); });
}

// (-1)^{n-1}: f(2^k) = -1, f(p^k) = 1 for odd p. Multiplicative, not completely.
inline MultFunc alternating()
{
    return MultFunc("alternating", false, [](u64 p, unsigned) {
        return p == 2 ? UnitValue::root(1, 2) : UnitValue::one();
    });
}

// Completely multiplicative with f(p) = e(a/b) at every prime.
inline MultFunc constant_root(i64 a, i64 b)
{
    return MultFunc("e(" + std::to_string(a) + "/" + std::to_string(b) + ")^Omega", true,
                    [v = UnitValue::root(a, b)](u64, unsigned) { return v; });
}

// Completely multiplicative with f(p) = e(alpha) for real alpha.
inline MultFunc constant_angle(double alpha)
{
    return MultFunc("e(" + std::to_string(alpha) + ")^Omega", true,
                    [v = UnitValue::from_angle(alpha)](u64, unsigned) { return v; });
}

// Completely multiplicative, f(p) = e(u_p) with u_p uniform from a per-prime
// stream, so values do not depend on evaluation order.
inline MultFunc random_unimodular(u64 seed)
{
    return MultFunc("u" + std::to_string(seed), true, [seed](u64 p, unsigned) {
        std::mt19937_64 r(seed ^ (p * 0x9E3779B97F4A7C15ull));
        return UnitValue::from_angle(std::uniform_real_distribution<double>(0, 1)(r));
    });
}

} // namespace funcs

// ---- combinators ---------------------------------------------------------

inline MultFunc product(const MultFunc& f, const MultFunc& g)
{
    return MultFunc("(" + f.name() + ")*(" + g.name() + ")",
                    f.completely_multiplicative() && g.completely_multiplicative(),
                    [f, g](u64 p, unsigned k) { return f.prime_power(p, k) * g.prime_power(p, k); },
                    f.t() + g.t());
}

inline MultFunc conjugate(const MultFunc& f)
{
    return MultFunc("conj(" + f.name() + ")", f.completely_multiplicative(),
                    [f](u64 p, unsigned k) { return f.prime_power(p, k).conj(); }, -f.t());
}

inline MultFunc power(const MultFunc& f, unsigned k)
{
    if (k < 1)
        throw ConfigError("power: exponent must be at least 1");
    return MultFunc("(" + f.name() + ")^" + std::to_string(k), f.completely_multiplicative(),
                    [f, k](u64 p, unsigned j) { return f.prime_power(p, j).pow(k); },
                    f.t() * static_cast<double>(k));
}

inline MultFunc twist(const MultFunc& f, double t)
{
    return MultFunc(f.name() + "*n^{i" + std::to_string(t) + "}", f.completely_multiplicative(),
                    [f](u64 p, unsigned k) { return f.prime_power(p, k); }, f.t() + t);
}

// f * 1_{P^-(n) > N}.
inline MultFunc truncate_rough(const MultFunc& f, u64 N)
{
    if (N < 2)
        throw ConfigError("truncate_rough: N must be at least 2");
    return MultFunc(f.name() + "*1[P^->" + std::to_string(N) + "]", f.completely_multiplicative(),
                    [f, N](u64 p, unsigned k) {
                        return p <= N ? UnitValue::zero() : f.prime_power(p, k);
                    },
                    f.t());
}

struct CombineMode {
    enum class Kind { Product, Conjugate, Power, Twist, TruncateRough };
    Kind kind;
    unsigned k = 1;
    double t = 0.0;
    u64 N = 2;

    static CombineMode product() { return {Kind::Product}; }
    static CombineMode conjugate() { return {Kind::Conjugate}; }
    static CombineMode power(unsigned k) { return {Kind::Power, k}; }
    static CombineMode twist(double t) { return {Kind::Twist, 1, t}; }
    static CombineMode truncate_rough(u64 N) { return {Kind::TruncateRough, 1, 0.0, N}; }
};

// g is only read in product mode; unary modes act on f.
inline MultFunc combine(const MultFunc& f, const MultFunc& g, const CombineMode& mode)
{
    switch (mode.kind) {
    case CombineMode::Kind::Product:
        return product(f, g);
    case CombineMode::Kind::Conjugate:
        return conjugate(f);
    case CombineMode::Kind::Power:
        return power(f, mode.k);
    case CombineMode::Kind::Twist:
        return twist(f, mode.t);
    case CombineMode::Kind::TruncateRough:
        return truncate_rough(f, mode.N);
    }
    throw ConfigError("combine: unknown mode");
}

// ---- additive functions --------------------------------------------------

struct Rational {
    i64 num = 0;
    i64 den = 1;
};

using AdditiveValue = std::variant<Rational, double>;

// f = e(u) for a completely additive u given on primes. Only rational
// values are supported; irrational input should use an Approx rule.
inline MultFunc from_additive(std::function<AdditiveValue(u64)> u, std::string name = "e(u)")
{
    return MultFunc(std::move(name), true, [u = std::move(u)](u64 p, unsigned) {
        const AdditiveValue v = u(p);
        if (const auto* r = std::get_if<Rational>(&v))
            return UnitValue::root(r->num, r->den);
        throw UnsupportedError("from_additive: irrational value at p = " + std::to_string(p));
    });
}

// ---- projection onto roots of unity --------------------------------------

namespace detail {

// Index j in [0, K) of the K-th root nearest to e(theta); ties go to the
// smaller index. Exact for rational theta = a/b.
inline u64 nearest_root_index(u64 a, u64 b, u64 K)
{
    // theta * K = a K / b; nearest integer with ties resolved downward in
    // index, wrapping K -> 0 (index 0 is the smallest).
    const unsigned __int128 num = static_cast<unsigned __int128>(a) * K;
    const u64 fl = static_cast<u64>(num / b);
    const unsigned __int128 rem2 = 2 * (num - static_cast<unsigned __int128>(fl) * b);
    u64 j;
    if (rem2 < b)
        j = fl;
    else if (rem2 > b)
        j = fl + 1;
    else
        j = (fl + 1 == K) ? 0 : fl; // tie between fl and fl + 1
    return j % K;
}

inline u64 nearest_root_index(double theta, u64 K)
{
    theta = frac(theta);
    const double s = theta * static_cast<double>(K);
    const double fl = std::floor(s);
    const double r = s - fl;
    u64 j;
    if (r < 0.5)
        j = static_cast<u64>(fl);
    else if (r > 0.5)
        j = static_cast<u64>(fl) + 1;
    else
        j = (static_cast<u64>(fl) + 1 == K) ? 0 : static_cast<u64>(fl);
    return j % K;
}

} // namespace detail

// Completely multiplicative g with g(p) the K-th root of unity closest to
// f(p) p^{-it}. Throws DomainError at primes where f vanishes.
inline MultFunc nearest_root_projection(const MultFunc& f, u64 K, double t)
{
    if (K < 1)
        throw ConfigError("nearest_root_projection: K must be positive");
    return MultFunc(
        "proj_" + std::to_string(K) + "(" + f.name() + ")", true, [f, K, t](u64 p, unsigned) {
            UnitValue v = f.twisted_prime_power(p, 1);
            if (v.is_zero())
                throw DomainError("nearest_root_projection: f(" + std::to_string(p) + ") = 0");
            u64 j;
            if (v.is_root() && t == 0.0) {
                j = detail::nearest_root_index(v.as_root().num, v.as_root().den, K);
            } else {
                cplx z = v.to_complex();
                if (t != 0.0)
                    z *= std::polar(1.0, -t * std::log(static_cast<double>(p)));
                j = detail::nearest_root_index(std::arg(z) / (2 * std::numbers::pi), K);
            }
            return UnitValue::root(static_cast<i64>(j), static_cast<i64>(K));
        });
}

// ---- bulk tabulation -----------------------------------------------------

// Values f(1..limit). Exact functions are stored as angle numerators over a
// common denominator (-1 marks zero); anything else as complex doubles.
class ValueTable {
public:
    u64 limit() const { return limit_; }
    bool exact() const { return exact_; }
    u64 denominator() const { return den_; }

    // Angle numerator over denominator(), or -1 for zero. Exact tables only.
    std::int32_t angle(u64 n) const { return angle_[n]; }

    bool is_zero(u64 n) const
    {
        return exact_ ? angle_[n] < 0 : (approx_[n] == cplx{0.0, 0.0});
    }

    cplx operator[](u64 n) const
    {
        if (exact_) {
            const std::int32_t a = angle_[n];
            return a < 0 ? cplx{0.0, 0.0} : (*roots_)[static_cast<std::size_t>(a)];
        }
        return approx_[n];
    }

    UnitValue value(u64 n) const
    {
        if (exact_)
            return angle_[n] < 0 ? UnitValue::zero() : UnitValue::root(angle_[n], static_cast<i64>(den_));
        return UnitValue::approx(approx_[n]);
    }

    // e(k / denominator()) lookup; exact tables only.
    const std::vector<cplx>& roots() const { return *roots_; }

private:
    friend ValueTable tabulate(const MultFunc& f, const Sieve& sieve, u64 limit);
    u64 limit_ = 0;
    bool exact_ = false;
    u64 den_ = 1;
    std::vector<std::int32_t> angle_;
    std::vector<cplx> approx_;
    std::shared_ptr<const std::vector<cplx>> roots_;
};

inline std::shared_ptr<const std::vector<cplx>> root_table(u64 den)
{
    auto t = std::make_shared<std::vector<cplx>>(den);
    // Reduced fractions, so entries match UnitValue::root(k, den) bit for bit.
    for (u64 k = 0; k < den; ++k) {
        const u64 g = std::gcd(k, den);
        (*t)[k] = root_to_complex(static_cast<i64>(k / g), static_cast<i64>(den / g));
    }
    return t;
}

inline ValueTable tabulate(const MultFunc& f, const Sieve& sieve, u64 limit)
{
    if (limit > sieve.limit())
        throw RangeError("tabulate: limit " + std::to_string(limit) + " exceeds sieve limit " +
                         std::to_string(sieve.limit()));
    ValueTable tab;
    tab.limit_ = limit;

    // Common denominator over all prime powers, or decide on floats.
    bool exact = f.t() == 0.0;
    u64 den = 1;
    if (exact) {
        for (u32 p : sieve.primes()) {
            if (p > limit || !exact)
                break;
            u64 pk = p;
            for (unsigned k = 1;; ++k) {
                const UnitValue v = f.prime_power(p, k);
                if (v.is_approx()) {
                    exact = false;
                    break;
                }
                if (v.is_root()) {
                    den = std::lcm(den, v.as_root().den);
                    if (den > kRootDenominatorCap) {
                        exact = false;
                        break;
                    }
                }
                if (pk > limit / p)
                    break;
                pk *= p;
            }
        }
    }

    auto split = [&](u64 n, u64& ppow, unsigned& k) {
        const u64 p = sieve.spf(n);
        ppow = 1;
        k = 0;
        u64 m = n;
        while (m % p == 0) {
            m /= p;
            ppow *= p;
            ++k;
        }
        return m;
    };

    if (exact) {
        tab.exact_ = true;
        tab.den_ = den;
        tab.roots_ = root_table(den);
        tab.angle_.assign(limit + 1, -1);
        if (limit >= 1)
            tab.angle_[1] = 0;
        for (u64 n = 2; n <= limit; ++n) {
            u64 ppow;
            unsigned k;
            const u64 rest = split(n, ppow, k);
            if (rest == 1) {
                const UnitValue v = f.prime_power(sieve.spf(n), k);
                tab.angle_[n] = v.is_zero() ? -1
                                            : static_cast<std::int32_t>(v.as_root().num *
                                                                        (den / v.as_root().den));
            } else {
                const std::int32_t a = tab.angle_[ppow], b = tab.angle_[rest];
                tab.angle_[n] = (a < 0 || b < 0) ? -1 : static_cast<std::int32_t>((a + b) % den);
            }
        }
        return tab;
    }

    tab.approx_.assign(limit + 1, cplx{0.0, 0.0});
    if (limit >= 1)
        tab.approx_[1] = 1.0;
    for (u64 n = 2; n <= limit; ++n) {
        u64 ppow;
        unsigned k;
        const u64 rest = split(n, ppow, k);
        if (rest == 1)
            tab.approx_[n] = f.twisted_prime_power(sieve.spf(n), k).to_complex();
        else
            tab.approx_[n] = tab.approx_[ppow] * tab.approx_[rest];
    }
    return tab;
}

} // namespace multlab
