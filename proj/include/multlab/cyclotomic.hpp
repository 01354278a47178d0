#pragma once

// Exact arithmetic in Z[zeta_E]: integer combinations of E-th roots of unity,
// brought to canonical form by reduction modulo the cyclotomic polynomial.

#include <map>
#include <mutex>
#include <vector>

#include "multlab/unit_value.hpp"

namespace multlab {

namespace detail {

using Poly = std::vector<i64>; // coefficient of x^i at index i

inline void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

// Exact quotient of a by monic b.
inline Poly divide_exact(Poly a, const Poly& b)
{
    trim(a);
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size())
        return {};
    Poly q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        const i64 c = a[i];
        if (c == 0)
            continue;
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j)
            a[i - db + j] -= c * b[j];
    }
    return q;
}

inline const Poly& cyclotomic_poly(u64 n)
{
    static std::mutex mu;
    static std::map<u64, Poly> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end())
        return it->second;
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (u64 d = 1; d < n; ++d) {
        if (n % d)
            continue;
        auto it = cache.find(d);
        if (it == cache.end()) {
            Poly pd(d + 1, 0);
            pd[0] = -1;
            pd[d] = 1;
            for (u64 e = 1; e < d; ++e)
                if (d % e == 0)
                    pd = divide_exact(pd, cache.at(e));
            trim(pd);
            it = cache.emplace(d, pd).first;
        }
        p = divide_exact(p, it->second);
    }
    trim(p);
    return cache.emplace(n, p).first->second;
}

} // namespace detail

class CyclotomicInteger {
public:
    explicit CyclotomicInteger(u64 order) : order_(order), coeff_(order, 0)
    {
        if (order == 0)
            throw DomainError("CyclotomicInteger: order must be positive");
    }

    u64 order() const { return order_; }

    // Add c * e(k / order).
    void add_root(u64 k, i64 c = 1) { coeff_[k % order_] += c; }

    cplx to_complex() const
    {
        CompensatedComplexSum s;
        for (u64 k = 0; k < order_; ++k)
            if (coeff_[k])
                s.add(static_cast<double>(coeff_[k]) *
                      root_to_complex(static_cast<i64>(k), static_cast<i64>(order_)));
        return s.value();
    }

    // Canonical coefficients: remainder modulo Phi_order.
    std::vector<i64> canonical() const
    {
        const auto& phi = detail::cyclotomic_poly(order_);
        detail::Poly r = coeff_;
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = r.size(); i-- > deg;) {
            const i64 c = r[i];
            if (c == 0)
                continue;
            for (std::size_t j = 0; j <= deg; ++j)
                r[i - deg + j] -= c * phi[j];
        }
        r.resize(deg);
        return r;
    }

    bool equals_integer(i64 n) const
    {
        auto c = canonical();
        if (c.empty())
            return n == 0;
        if (c[0] != n)
            return false;
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0)
                return false;
        return true;
    }

    bool is_zero() const { return equals_integer(0); }

private:
    u64 order_;
    std::vector<i64> coeff_;
};

} // namespace multlab
