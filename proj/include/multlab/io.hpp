#pragma once

// JSON loaders for function specs, characters and perturbed-character setups.
//
// Function spec:
//   {"name": ..., "completely_multiplicative": bool, "t": real,
//    "base": <builtin name> | {"builtin": ...} | {"character": ...} | {"setup": ...},
//    "rules": [{"p": 2 | "p_class": ..., "k": 1 | "all", "value": <value>}],
//    "default": <value>}
// Rules are tried in order; the first match wins, then the base, then the
// default (1). A p_class is {"mod": q, "residue": a}, {"in": [primes]}, or
// the strings "p = a mod q" / "p in {3, 7}".
// Value: {"type": "root", "a", "b"} | {"type": "zero"} | {"type": "approx", "re", "im"}.

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multlab/characters.hpp"
#include "multlab/closedform.hpp"
#include "multlab/multfunc.hpp"

namespace multlab {

using json = nlohmann::json;

namespace io {

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

template <class T>
T get(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.is_object() || !j.contains(key))
        return fallback;
    return get<T>(j, key);
}

// Integers may be written as 1e6 in configs.
inline u64 get_count(const json& j, const char* key)
{
    const double v = get<double>(j, key);
    if (!(v >= 0) || v > 1e18 || v != std::floor(v))
        throw ConfigError(std::string("field '") + key + "' must be a nonnegative integer");
    return static_cast<u64>(v);
}

inline u64 get_count_or(const json& j, const char* key, u64 fallback)
{
    return j.is_object() && j.contains(key) ? get_count(j, key) : fallback;
}

inline UnitValue value_from_json(const json& j)
{
    if (j.is_number_integer() && (j.get<long long>() == 1 || j.get<long long>() == -1))
        return j.get<long long>() == 1 ? UnitValue::one() : UnitValue::root(1, 2);
    if (j.is_number_integer() && j.get<long long>() == 0)
        return UnitValue::zero();
    const auto type = get<std::string>(j, "type");
    try {
        if (type == "zero")
            return UnitValue::zero();
        if (type == "root")
            return UnitValue::root(get<i64>(j, "a"), get<i64>(j, "b"));
        if (type == "approx")
            return UnitValue::approx(get<double>(j, "re"), get_or<double>(j, "im", 0.0));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown value type '" + type + "'");
}

inline json value_to_json(const UnitValue& v)
{
    if (v.is_zero())
        return {{"type", "zero"}};
    if (v.is_root())
        return {{"type", "root"}, {"a", v.as_root().num}, {"b", v.as_root().den}};
    const cplx z = v.to_complex();
    return {{"type", "approx"}, {"re", z.real()}, {"im", z.imag()}};
}

// {"q": 9, "index": 1} or {"q": 5, "values": [v_0, ..., v_{q-1}]}.
inline DirichletCharacter character_from_json(const json& j)
{
    const u64 q = get_count(j, "q");
    try {
        if (j.contains("values")) {
            std::vector<UnitValue> vals;
            for (const auto& v : j.at("values"))
                vals.push_back(value_from_json(v));
            if (vals.size() != q)
                throw ConfigError("character: value table must have q entries");
            return DirichletCharacter::from_values(q, vals);
        }
        const DirichletGroup G(q);
        const u64 idx = get_count(j, "index");
        if (idx >= G.size())
            throw ConfigError("character: index " + std::to_string(idx) + " out of range for q = " +
                              std::to_string(q));
        return G.character(idx);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("character: ") + e.what());
    }
}

inline json character_to_json(const DirichletCharacter& chi)
{
    return {{"q", chi.modulus()}, {"index", chi.index()}};
}

namespace detail {

inline std::map<u64, UnitValue> prime_value_map(const json& j, const char* what)
{
    std::map<u64, UnitValue> m;
    if (j.is_null())
        return m;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            u64 p = 0;
            try {
                p = std::stoull(k);
            } catch (const std::exception&) {
                throw ConfigError(std::string(what) + ": key '" + k + "' is not an integer");
            }
            m[p] = value_from_json(v);
        }
        return m;
    }
    if (j.is_array()) {
        for (const auto& e : j)
            m[get_count(e, "p")] = value_from_json(e.at("value"));
        return m;
    }
    throw ConfigError(std::string(what) + ": expected an object or a list");
}

} // namespace detail

// {"name"?, "character": {...}, "perturbations": {"7": value} | [{"p", "value"}],
//  "at_modulus": {...}}
inline ChudakovSetup setup_from_json(const json& j)
{
    const auto chi = character_from_json(j.at("character"));
    auto F = detail::prime_value_map(j.value("perturbations", json()), "perturbations");
    auto fq = detail::prime_value_map(j.value("at_modulus", json()), "at_modulus");
    return ChudakovSetup(chi, std::move(F), std::move(fq), get_or<std::string>(j, "name", ""));
}

inline json setup_to_json(const ChudakovSetup& s)
{
    json F = json::object(), fq = json::object();
    for (const auto& [p, v] : s.perturbations())
        F[std::to_string(p)] = value_to_json(v);
    for (const auto& [p, v] : s.at_modulus())
        fq[std::to_string(p)] = value_to_json(v);
    return {{"name", s.name()}, {"character", character_to_json(s.chi())}, {"perturbations", F}, {"at_modulus", fq}};
}

// Prime class predicate.
inline std::function<bool(u64)> prime_class_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        std::smatch m;
        static const std::regex cong(R"(\s*p\s*(?:=|≡|==)\s*(\d+)\s*(?:mod|\(mod)\s*(\d+)\)?\s*)");
        static const std::regex in(R"(\s*p\s*(?:in|∈)\s*\{([0-9,\s]*)\}\s*)");
        if (std::regex_match(s, m, cong)) {
            const u64 a = std::stoull(m[1]), q = std::stoull(m[2]);
            if (q == 0)
                throw ConfigError("p_class: modulus must be positive");
            return [a = a % q, q](u64 p) { return p % q == a; };
        }
        if (std::regex_match(s, m, in)) {
            std::vector<u64> list;
            std::stringstream ss(m[1]);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (tok.find_first_not_of(" \t") != std::string::npos)
                    list.push_back(std::stoull(tok));
            std::sort(list.begin(), list.end());
            return [list](u64 p) { return std::binary_search(list.begin(), list.end(), p); };
        }
        throw ConfigError("p_class: cannot parse '" + s + "'");
    }
    if (j.contains("in")) {
        auto list = j.at("in").get<std::vector<u64>>();
        std::sort(list.begin(), list.end());
        return [list](u64 p) { return std::binary_search(list.begin(), list.end(), p); };
    }
    const u64 q = get_count(j, "mod"), a = get_count(j, "residue");
    if (q == 0)
        throw ConfigError("p_class: modulus must be positive");
    return [a = a % q, q](u64 p) { return p % q == a; };
}

inline MultFunc function_from_json(const json& j);

namespace detail {

inline MultFunc builtin(const json& j)
{
    const std::string name = j.is_string() ? j.get<std::string>() : get<std::string>(j, "builtin");
    if (name == "one")
        return funcs::one();
    if (name == "liouville")
        return funcs::liouville();
    if (name == "alternating")
        return funcs::alternating();
    if (name == "mobius")
        return MultFunc("mobius", false,
                        [](u64, unsigned k) { return k == 1 ? UnitValue::root(1, 2) : UnitValue::zero(); });
    if (name == "constant_root")
        return funcs::constant_root(get<i64>(j, "a"), get<i64>(j, "b"));
    if (name == "constant_angle")
        return funcs::constant_angle(get<double>(j, "alpha"));
    if (name == "random_unimodular")
        return funcs::random_unimodular(get_count(j, "seed"));
    throw ConfigError("unknown builtin function '" + name + "'");
}

inline MultFunc base_from_json(const json& j)
{
    if (j.is_string() || j.contains("builtin"))
        return builtin(j);
    if (j.contains("character"))
        return character_function(character_from_json(j.at("character")));
    if (j.contains("setup"))
        return setup_from_json(j.at("setup")).f();
    if (j.contains("rules") || j.contains("base"))
        return function_from_json(j);
    throw ConfigError("base: expected a builtin, character, setup or function spec");
}

} // namespace detail

inline MultFunc function_from_json(const json& j)
{
    if (j.is_string())
        return detail::builtin(j);
    if (!j.is_object())
        throw ConfigError("function spec must be an object or a builtin name");

    std::optional<MultFunc> base;
    if (j.contains("base"))
        base = detail::base_from_json(j.at("base"));
    else if (j.contains("builtin") || j.contains("character") || j.contains("setup"))
        base = detail::base_from_json(j);

    struct Rule {
        std::function<bool(u64)> match;
        std::optional<unsigned> k; // nullopt = all k
        UnitValue value;
    };
    std::vector<Rule> rules;
    if (j.contains("rules")) {
        for (const auto& r : j.at("rules")) {
            Rule rule;
            if (r.contains("p")) {
                const u64 p = get_count(r, "p");
                rule.match = [p](u64 x) { return x == p; };
            } else if (r.contains("p_class")) {
                rule.match = prime_class_from_json(r.at("p_class"));
            } else {
                throw ConfigError("rule needs 'p' or 'p_class'");
            }
            if (r.contains("k") && !(r.at("k").is_string() && r.at("k").get<std::string>() == "all")) {
                const u64 k = get_count(r, "k");
                if (k < 1)
                    throw ConfigError("rule: k must be at least 1");
                rule.k = static_cast<unsigned>(k);
            }
            rule.value = value_from_json(r.at("value"));
            rules.push_back(std::move(rule));
        }
    }
    const bool complete = get_or<bool>(j, "completely_multiplicative", base ? base->completely_multiplicative() : true);
    if (complete)
        for (const auto& r : rules)
            if (r.k && *r.k != 1)
                throw ConfigError("rule: completely multiplicative functions take rules on k = 1 only");
    const UnitValue fallback = j.contains("default") ? value_from_json(j.at("default")) : UnitValue::one();
    const double t = get_or<double>(j, "t", base ? base->t() : 0.0);
    std::string name = get_or<std::string>(j, "name", base ? base->name() : std::string("f"));
    if (rules.empty() && base && complete == base->completely_multiplicative() && t == base->t())
        return MultFunc(name, complete, [b = *base](u64 p, unsigned k) { return b.prime_power(p, k); }, t);

    return MultFunc(std::move(name), complete,
                    [rules = std::move(rules), base, fallback](u64 p, unsigned k) {
                        for (const auto& r : rules)
                            if ((!r.k || *r.k == k) && r.match(p))
                                return r.value;
                        return base ? base->prime_power(p, k) : fallback;
                    },
                    t);
}

// Shorthand used in configs: either an inline spec or {"file": path}.
inline MultFunc load_function(const json& j)
{
    if (j.is_object() && j.contains("file") && j.size() == 1)
        return function_from_json(read_json_file(j.at("file").get<std::string>()));
    return function_from_json(j);
}

inline ChudakovSetup load_setup(const json& j)
{
    if (j.is_object() && j.contains("file") && j.size() == 1)
        return setup_from_json(read_json_file(j.at("file").get<std::string>()));
    return setup_from_json(j);
}

} // namespace io
} // namespace multlab
