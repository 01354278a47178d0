#pragma once

// Dirichlet characters with exact values, built from a generator
// decomposition of (Z/qZ)^*.

#include <numeric>
#include <string>
#include <vector>

#include "multlab/arith.hpp"
#include "multlab/cyclotomic.hpp"
#include "multlab/multfunc.hpp"
#include "multlab/unit_value.hpp"

namespace multlab {

inline constexpr u64 kMaxCharacterModulus = 1'000'000;

class DirichletGroup;

class DirichletCharacter {
public:
    u64 modulus() const { return q_; }
    // Values are e(angle / denominator()); denominator() is the group exponent.
    u64 denominator() const { return den_; }
    u64 order() const { return order_; }
    u64 conductor() const { return conductor_; }
    bool primitive() const { return conductor_ == q_; }
    bool principal() const { return order_ == 1; }
    // Position in the enumeration of DirichletGroup(modulus()).
    u64 index() const { return index_; }

    std::int32_t angle(i64 n) const { return angles_[static_cast<std::size_t>(mod_floor(n, static_cast<i64>(q_)))]; }

    UnitValue operator()(i64 n) const
    {
        const auto a = angle(n);
        return a < 0 ? UnitValue::zero() : UnitValue::root(a, static_cast<i64>(den_));
    }

    cplx value(i64 n) const
    {
        const auto a = angle(n);
        return a < 0 ? cplx{} : root_to_complex(a, static_cast<i64>(den_));
    }

    const std::vector<std::int32_t>& angles() const { return angles_; }

    std::string label() const
    {
        return "chi_" + std::to_string(q_) + "[" + std::to_string(index_) + "]";
    }

    // Build from an explicit value table on residues 0..q-1; validates that
    // the table is a character.
    static DirichletCharacter from_values(u64 q, const std::vector<UnitValue>& values);

private:
    friend class DirichletGroup;
    void finish();

    u64 q_ = 1;
    u64 den_ = 1;
    u64 order_ = 1;
    u64 conductor_ = 1;
    u64 index_ = 0;
    std::vector<std::int32_t> angles_;
};

class DirichletGroup {
public:
    struct Component {
        u64 prime;
        unsigned k;
        u64 pk;
        u64 generator; // residue mod pk
        u64 order;
        std::vector<std::int64_t> log; // residue mod pk -> discrete log, -1 if not coprime
    };

    explicit DirichletGroup(u64 q) : q_(q)
    {
        if (q < 1 || q > kMaxCharacterModulus)
            throw ConfigError("DirichletGroup: modulus " + std::to_string(q) + " outside [1, " +
                              std::to_string(kMaxCharacterModulus) + "]");
        const auto fac = factorize_trial(q);
        for (const auto& [p, k] : fac.factors)
            add_prime_power(p, k);
        size_ = 1;
        exponent_ = 1;
        for (const auto& c : comps_) {
            size_ *= c.order;
            exponent_ = std::lcm(exponent_, c.order);
        }
    }

    u64 modulus() const { return q_; }
    u64 size() const { return size_; }
    u64 exponent() const { return exponent_; }
    const std::vector<Component>& components() const { return comps_; }

    // Exponent vector of the index-th character, lexicographic order.
    std::vector<u64> exponents(u64 index) const
    {
        std::vector<u64> e(comps_.size());
        for (std::size_t i = comps_.size(); i-- > 0;) {
            e[i] = index % comps_[i].order;
            index /= comps_[i].order;
        }
        return e;
    }

    u64 index_of(const std::vector<u64>& exps) const
    {
        u64 idx = 0;
        for (std::size_t i = 0; i < comps_.size(); ++i)
            idx = idx * comps_[i].order + exps[i];
        return idx;
    }

    DirichletCharacter character(u64 index) const
    {
        if (index >= size_)
            throw RangeError("DirichletGroup::character: index " + std::to_string(index) +
                             " >= " + std::to_string(size_));
        const auto exps = exponents(index);
        DirichletCharacter chi;
        chi.q_ = q_;
        chi.den_ = exponent_;
        chi.index_ = index;
        chi.angles_.assign(q_, -1);
        for (u64 n = 0; n < q_; ++n) {
            if (std::gcd(n, q_) != 1)
                continue;
            u64 a = 0;
            for (std::size_t i = 0; i < comps_.size(); ++i) {
                const auto& c = comps_[i];
                const auto lg = static_cast<u64>(c.log[n % c.pk]);
                a = (a + mulmod(exps[i] * (exponent_ / c.order) % exponent_, lg, exponent_)) %
                    exponent_;
            }
            chi.angles_[n] = static_cast<std::int32_t>(a);
        }
        if (q_ == 1)
            chi.angles_[0] = 0;
        chi.finish();
        return chi;
    }

    // Exponent vector of a character given by its values (must be a character mod q).
    std::vector<u64> exponents_of(const DirichletCharacter& chi) const
    {
        std::vector<u64> e;
        for (const auto& c : comps_) {
            // Lift the component generator to a residue mod q that is 1 elsewhere.
            const u64 g = lift(c.generator, c.pk);
            const auto a = static_cast<u64>(chi.angle(static_cast<i64>(g)));
            // chi(g) = e(a / den) = e(c_i / order)
            e.push_back(a * c.order / chi.denominator() % c.order);
        }
        return e;
    }

    // x = r (mod pk), x = 1 (mod q / pk).
    u64 lift(u64 r, u64 pk) const
    {
        const u64 m = q_ / pk;
        if (m == 1)
            return r % q_;
        const auto t = mod_floor(static_cast<i64>(mulmod(static_cast<u64>(mod_floor(1 - static_cast<i64>(r), static_cast<i64>(m))),
                                                         static_cast<u64>(mod_inverse(static_cast<i64>(pk % m), static_cast<i64>(m))), m)),
                                 static_cast<i64>(m));
        return (r + pk * static_cast<u64>(t)) % q_;
    }

private:
    static u64 multiplicative_order(u64 g, u64 m, u64 group_order)
    {
        u64 ord = group_order;
        for (const auto& [p, e] : factorize_trial(group_order).factors) {
            (void)e;
            while (ord % p == 0 && powmod(g, ord / p, m) == 1)
                ord /= p;
        }
        return ord;
    }

    void add_cyclic(u64 p, unsigned k, u64 pk, u64 g, u64 order)
    {
        Component c{p, k, pk, g, order, std::vector<std::int64_t>(pk, -1)};
        u64 x = 1;
        for (u64 j = 0; j < order; ++j) {
            c.log[x] = static_cast<std::int64_t>(j);
            x = mulmod(x, g, pk);
        }
        comps_.push_back(std::move(c));
    }

    void add_prime_power(u64 p, unsigned k)
    {
        const u64 pk = ipow(p, k);
        if (p != 2) {
            const u64 phi = pk / p * (p - 1);
            u64 g = 2;
            while (multiplicative_order(g, pk, phi) != phi || std::gcd(g, p) != 1)
                ++g;
            add_cyclic(p, k, pk, g, phi);
            return;
        }
        if (k == 1)
            return; // (Z/2Z)^* is trivial
        if (k == 2) {
            add_cyclic(2, 2, 4, 3, 2);
            return;
        }
        // (Z/2^k)^* = <-1> x <5>.
        const u64 ord5 = pk / 4;
        Component sign{2, k, pk, pk - 1, 2, std::vector<std::int64_t>(pk, -1)};
        Component five{2, k, pk, 5, ord5, std::vector<std::int64_t>(pk, -1)};
        u64 x = 1;
        for (u64 j = 0; j < ord5; ++j) {
            sign.log[x] = 0;
            five.log[x] = static_cast<std::int64_t>(j);
            sign.log[pk - x] = 1;
            five.log[pk - x] = static_cast<std::int64_t>(j);
            x = mulmod(x, 5, pk);
        }
        comps_.push_back(std::move(sign));
        comps_.push_back(std::move(five));
    }

    u64 q_;
    u64 size_ = 1;
    u64 exponent_ = 1;
    std::vector<Component> comps_;
};

namespace detail {

// True when chi(n) = 1 for every n = 1 (mod d) coprime to q.
inline bool trivial_on_kernel(const DirichletCharacter& chi, u64 d)
{
    const u64 q = chi.modulus();
    for (u64 n = 1 % d; n < q; n += d)
        if (std::gcd(n, q) == 1 && chi.angle(static_cast<i64>(n)) != 0)
            return false;
    return true;
}

} // namespace detail

inline void DirichletCharacter::finish()
{
    u64 g = den_;
    for (auto a : angles_)
        if (a > 0)
            g = std::gcd(g, static_cast<u64>(a));
    order_ = den_ / g;
    // Smallest d | q from which chi is induced.
    conductor_ = q_;
    for (u64 d = 1; d <= q_; ++d) {
        if (q_ % d == 0 && detail::trivial_on_kernel(*this, d)) {
            conductor_ = d;
            break;
        }
    }
}

inline DirichletCharacter DirichletCharacter::from_values(u64 q, const std::vector<UnitValue>& values)
{
    if (values.size() != q)
        throw ConfigError("from_values: expected " + std::to_string(q) + " values");
    DirichletGroup G(q);
    const u64 E = G.exponent();
    DirichletCharacter chi;
    chi.q_ = q;
    chi.den_ = E;
    chi.angles_.assign(q, -1);
    for (u64 n = 0; n < q; ++n) {
        const auto& v = values[n];
        const bool unit = std::gcd(n, q) == 1;
        if (!unit) {
            if (!v.is_zero())
                throw ConfigError("from_values: nonzero value at non-unit residue " + std::to_string(n));
            continue;
        }
        if (!v.is_root())
            throw ConfigError("from_values: value at " + std::to_string(n) +
                              " is not an exact root of unity");
        const auto& r = v.as_root();
        if (E % r.den != 0)
            throw ConfigError("from_values: value order does not divide the group exponent");
        chi.angles_[n] = static_cast<std::int32_t>(r.num * (E / r.den));
    }
    if (q == 1)
        chi.angles_[0] = 0;
    if (chi.angle(1) != 0)
        throw ConfigError("from_values: chi(1) != 1");
    for (const auto& c : G.components()) {
        const u64 g = G.lift(c.generator, c.pk);
        const auto ag = chi.angle(static_cast<i64>(g));
        for (u64 a = 0; a < q; ++a) {
            const auto aa = chi.angle(static_cast<i64>(a));
            if (aa < 0)
                continue;
            const auto prod = chi.angle(static_cast<i64>(mulmod(a, g, q)));
            if (prod != static_cast<std::int32_t>((static_cast<u64>(aa) + static_cast<u64>(ag)) % E))
                throw ConfigError("from_values: table is not multiplicative");
        }
    }
    chi.index_ = G.index_of(G.exponents_of(chi));
    chi.finish();
    return chi;
}

inline std::vector<DirichletCharacter> enumerate_characters(u64 q)
{
    DirichletGroup G(q);
    std::vector<DirichletCharacter> out;
    out.reserve(G.size());
    for (u64 i = 0; i < G.size(); ++i)
        out.push_back(G.character(i));
    return out;
}

inline DirichletCharacter character(u64 q, u64 index) { return DirichletGroup(q).character(index); }

// The character mod q_new induced by the primitive character underlying chi.
inline DirichletCharacter induce(const DirichletCharacter& chi, u64 q_new)
{
    const u64 c = chi.conductor();
    if (q_new == 0 || q_new % c != 0)
        throw DomainError("induce: conductor " + std::to_string(c) + " does not divide " +
                          std::to_string(q_new));
    const u64 q = chi.modulus();
    std::vector<UnitValue> vals(q_new, UnitValue::zero());
    for (u64 n = 0; n < q_new; ++n) {
        if (std::gcd(n, q_new) != 1)
            continue;
        // Any m = n (mod c) coprime to q carries the primitive character's value.
        u64 m = n % c;
        while (std::gcd(m, q) != 1)
            m += c;
        vals[n] = chi(static_cast<i64>(m));
    }
    if (q_new == 1)
        vals[0] = UnitValue::one();
    return DirichletCharacter::from_values(q_new, vals);
}

inline MultFunc character_function(const DirichletCharacter& chi)
{
    auto shared = std::make_shared<const DirichletCharacter>(chi);
    return MultFunc(chi.label(), true, [shared](u64 p, unsigned) { return (*shared)(static_cast<i64>(p)); });
}

// ---- complete character sums S_chi(h) = sum_{a mod q} chi(a) conj(chi(a+h)) ----

struct CharacterSum {
    CyclotomicInteger exact;
    cplx value;
};

inline CharacterSum character_sum_bruteforce(const DirichletCharacter& chi, i64 h)
{
    const u64 q = chi.modulus();
    const u64 E = chi.denominator();
    CyclotomicInteger s(E);
    for (u64 a = 0; a < q; ++a) {
        const auto x = chi.angle(static_cast<i64>(a));
        const auto y = chi.angle(static_cast<i64>(a) + h);
        if (x < 0 || y < 0)
            continue;
        s.add_root((static_cast<u64>(x) + E - static_cast<u64>(y)) % E);
    }
    return {s, s.to_complex()};
}

// Exponent j of the conductor p^j of the p-component of chi (p^k || q).
inline unsigned local_conductor_exponent(const DirichletCharacter& chi, const DirichletGroup& G, u64 p,
                                         unsigned k)
{
    const u64 pk = ipow(p, k);
    u64 pj = 1;
    for (unsigned j = 0; j <= k; ++j, pj *= p) {
        bool trivial = true;
        for (u64 n = 1 % pj; n < pk && trivial; n += pj) {
            if (n % p == 0)
                continue;
            if (chi.angle(static_cast<i64>(G.lift(n, pk))) != 0)
                trivial = false;
        }
        if (trivial)
            return j;
    }
    return k;
}

struct LocalComponent {
    u64 prime;
    unsigned k;    // p^k || q
    unsigned cond; // local conductor p^cond
};

inline std::vector<LocalComponent> local_components(const DirichletCharacter& chi)
{
    DirichletGroup G(chi.modulus());
    std::vector<LocalComponent> out;
    for (const auto& [p, k] : factorize_trial(chi.modulus()).factors)
        out.push_back({p, k, local_conductor_exponent(chi, G, p, k)});
    return out;
}

// Closed form: product over p^k || q of the local sums. For a local
// component with conductor p^j the sum is p^{k-j} times the primitive case
// value at level j (0, -p^{j-1} or phi(p^j) by the size of v_p(h));
// a principal local component counts a with p not dividing a(a+h).
inline i64 character_sum_closed(const std::vector<LocalComponent>& local, i64 h)
{
    i64 total = 1;
    for (const auto& [p_, k, j] : local) {
        const i64 p = static_cast<i64>(p_);
        const i64 pk = static_cast<i64>(ipow(p_, k));
        const i64 hp = mod_floor(h, pk);
        unsigned l = k; // v_p(h) capped at k
        if (hp != 0) {
            l = 0;
            for (i64 t = hp; t % p == 0; t /= p)
                ++l;
        }
        i64 local_sum;
        if (j == 0) {
            local_sum = pk / p * (l >= 1 ? p - 1 : p - 2);
        } else {
            const i64 pj = static_cast<i64>(ipow(p_, j));
            i64 prim;
            if (l + 2 <= j)
                prim = 0;
            else if (l + 1 == j)
                prim = -pj / p;
            else
                prim = pj / p * (p - 1);
            local_sum = (pk / pj) * prim;
        }
        total *= local_sum;
    }
    return total;
}

inline i64 character_sum_closed(const DirichletCharacter& chi, i64 h)
{
    return character_sum_closed(local_components(chi), h);
}

inline CharacterSum character_sum(const DirichletCharacter& chi, i64 h)
{
    return character_sum_bruteforce(chi, h);
}

} // namespace multlab
