#pragma once

// Values in the closed unit disc: exact zero, exact roots of unity e(a/b),
// or a floating complex number.

#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>
#include <variant>

#include "multlab/arith.hpp"
#include "multlab/error.hpp"

namespace multlab {

using cplx = std::complex<double>;

inline constexpr u64 kRootDenominatorCap = 1'000'000;
inline constexpr double kModulusSlack = 1e-12;

// e(a/b) = exp(2 pi i a / b) with reflections so that conjugate and
// quarter-turn angles come out exactly symmetric.
inline cplx root_to_complex(i64 a, i64 b)
{
    a = mod_floor(a, b);
    if (a == 0)
        return {1.0, 0.0};
    if (4 * a == b)
        return {0.0, 1.0};
    if (2 * a == b)
        return {-1.0, 0.0};
    if (4 * a == 3 * b)
        return {0.0, -1.0};
    // Fold into [0, 1/2] then [0, 1/4].
    bool lower = 2 * a > b;
    i64 an = lower ? b - a : a;
    bool second = 4 * an > b;
    i64 af = second ? b - 2 * an : 2 * an; // angle = pi * af / b... scaled below
    // For the folded angle phi = 2 pi an / b in (0, pi/2], or pi - phi.
    double phi = std::numbers::pi * static_cast<double>(af) / static_cast<double>(b);
    double c = std::cos(phi), s = std::sin(phi);
    if (second)
        c = -c;
    return {c, lower ? -s : s};
}

inline double frac(double t) { return t - std::floor(t); }

class UnitValue {
public:
    struct Zero {
        friend bool operator==(const Zero&, const Zero&) = default;
    };
    struct Root {
        u64 num = 0; // 0 <= num < den, gcd(num, den) = 1
        u64 den = 1;
        friend bool operator==(const Root&, const Root&) = default;
    };
    struct Approx {
        double re = 1.0;
        double im = 0.0;
        friend bool operator==(const Approx&, const Approx&) = default;
    };

    UnitValue() : v_(Root{}) {}

    static UnitValue zero() { return UnitValue(Zero{}); }
    static UnitValue one() { return UnitValue(Root{}); }

    // e(a/b); falls back to Approx when the reduced denominator exceeds the cap.
    static UnitValue root(i64 a, i64 b)
    {
        if (b <= 0)
            throw DomainError("UnitValue::root: denominator must be positive");
        a = mod_floor(a, b);
        const i64 g = std::gcd(a, b);
        a /= g;
        b /= g;
        if (static_cast<u64>(b) > kRootDenominatorCap) {
            warn_denominator(static_cast<u64>(b));
            const cplx z = root_to_complex(a, b);
            return UnitValue(Approx{z.real(), z.imag()});
        }
        return UnitValue(Root{static_cast<u64>(a), static_cast<u64>(b)});
    }

    static UnitValue approx(double re, double im)
    {
        if (!std::isfinite(re) || !std::isfinite(im) || std::hypot(re, im) > 1.0 + kModulusSlack)
            throw DomainError("UnitValue::approx: modulus exceeds 1");
        return UnitValue(Approx{re, im});
    }

    static UnitValue approx(cplx z) { return approx(z.real(), z.imag()); }

    // Unit complex number exp(2 pi i theta).
    static UnitValue from_angle(double theta)
    {
        const double t = 2.0 * std::numbers::pi * frac(theta);
        return UnitValue(Approx{std::cos(t), std::sin(t)});
    }

    bool is_zero() const { return std::holds_alternative<Zero>(v_); }
    bool is_root() const { return std::holds_alternative<Root>(v_); }
    bool is_approx() const { return std::holds_alternative<Approx>(v_); }
    bool is_exact() const { return !is_approx(); }

    const Root& as_root() const { return std::get<Root>(v_); }

    cplx to_complex() const
    {
        if (is_zero())
            return {0.0, 0.0};
        if (is_root()) {
            const auto& r = as_root();
            return root_to_complex(static_cast<i64>(r.num), static_cast<i64>(r.den));
        }
        const auto& a = std::get<Approx>(v_);
        return {a.re, a.im};
    }

    double modulus() const
    {
        if (is_zero())
            return 0.0;
        if (is_root())
            return 1.0;
        return std::abs(to_complex());
    }

    UnitValue conj() const
    {
        if (is_zero())
            return *this;
        if (is_root()) {
            const auto& r = as_root();
            return root(-static_cast<i64>(r.num), static_cast<i64>(r.den));
        }
        const auto& a = std::get<Approx>(v_);
        return UnitValue(Approx{a.re, -a.im});
    }

    UnitValue pow(u64 k) const
    {
        if (k == 0)
            return one();
        if (is_zero())
            return *this;
        if (is_root()) {
            const auto& r = as_root();
            return root(static_cast<i64>(mulmod(r.num, k, r.den)), static_cast<i64>(r.den));
        }
        return approx_clamped(std::pow(to_complex(), static_cast<double>(k)));
    }

    friend UnitValue operator*(const UnitValue& x, const UnitValue& y)
    {
        if (x.is_zero() || y.is_zero())
            return zero();
        if (x.is_root() && y.is_root()) {
            const auto& a = x.as_root();
            const auto& b = y.as_root();
            const u64 l = std::lcm(a.den, b.den);
            if (l > kRootDenominatorCap) {
                warn_denominator(l);
                return approx_clamped(x.to_complex() * y.to_complex());
            }
            return root(static_cast<i64>((a.num * (l / a.den) + b.num * (l / b.den)) % l),
                        static_cast<i64>(l));
        }
        return approx_clamped(x.to_complex() * y.to_complex());
    }

    // Exact equality for exact variants; Approx values compare by tolerance.
    bool equals(const UnitValue& o, double tol = 1e-12) const
    {
        if (is_exact() && o.is_exact())
            return v_ == o.v_;
        return std::abs(to_complex() - o.to_complex()) <= tol;
    }

    friend bool operator==(const UnitValue& a, const UnitValue& b) { return a.equals(b); }

    std::string to_string() const
    {
        if (is_zero())
            return "0";
        if (is_root()) {
            const auto& r = as_root();
            return "e(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
        }
        const cplx z = to_complex();
        return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
    }

private:
    using Storage = std::variant<Zero, Root, Approx>;
    explicit UnitValue(Storage v) : v_(v) {}

    // Products of unit-modulus floats may overshoot 1 by an ulp.
    static UnitValue approx_clamped(cplx z)
    {
        const double m = std::abs(z);
        if (m > 1.0)
            z /= m;
        return UnitValue(Approx{z.real(), z.imag()});
    }

    static void warn_denominator(u64 den)
    {
        static bool warned = false;
        if (!warned) {
            warned = true;
            std::clog << "multlab: root denominator " << den
                      << " exceeds cap; falling back to floating values\n";
        }
    }

    Storage v_;
};

// Compensated (Neumaier) accumulation; result independent of term count to O(eps).
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx z)
    {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

} // namespace multlab
