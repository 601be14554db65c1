#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>

namespace arena {

using Name = std::string;
using Loc = std::uint32_t;

// A reachability qualifier: variables, arena locations and an optional ◇.
struct Qualifier {
    std::set<Name> vars;
    std::set<Loc> locs;
    bool fresh = false;

    static Qualifier none() { return {}; }
    static Qualifier diamond() { return {{}, {}, true}; }
    static Qualifier of(std::initializer_list<Name> xs, bool fresh = false);
    static Qualifier at(Loc l) { return {{}, {l}, false}; }

    bool has(const Name& x) const { return vars.count(x) != 0; }
    bool has(Loc l) const { return locs.count(l) != 0; }
    bool is_empty() const { return vars.empty() && locs.empty() && !fresh; }
    bool is_closed() const { return vars.empty(); }

    Qualifier operator|(const Qualifier& o) const;
    Qualifier operator&(const Qualifier& o) const;
    Qualifier minus(const Qualifier& o) const;
    Qualifier without(const Name& x) const;
    Qualifier without_fresh() const;
    Qualifier with_fresh() const;

    // Element-wise subset, including the ◇ flag.
    bool subset_of(const Qualifier& o) const;
    bool disjoint_locs(const std::set<Loc>& ls) const;

    std::string str() const;

    friend bool operator==(const Qualifier&, const Qualifier&) = default;
    friend bool operator<(const Qualifier& a, const Qualifier& b) {
        if (a.vars != b.vars) return a.vars < b.vars;
        if (a.locs != b.locs) return a.locs < b.locs;
        return a.fresh < b.fresh;
    }
};

// Observation filter φ: like a qualifier but never carries ◇.
struct Observation {
    std::set<Name> vars;
    std::set<Loc> locs;

    static Observation of(const Qualifier& q) { return {q.vars, q.locs}; }
    Qualifier as_qualifier() const { return {vars, locs, false}; }

    bool has(const Name& x) const { return vars.count(x) != 0; }
    bool has(Loc l) const { return locs.count(l) != 0; }
    // q ⊆ ◇φ
    bool covers(const Qualifier& q) const;

    Observation plus(const Name& x) const;
    Observation plus(Loc l) const;
    Observation minus_locs(const std::set<Loc>& ls) const;

    friend bool operator==(const Observation&, const Observation&) = default;
};

Qualifier substitute_var(const Qualifier& q, const Name& x, const Qualifier& p);
// q[p/◇] = q ∪ p when ◇ ∈ q.
Qualifier substitute_fresh(const Qualifier& q, const Qualifier& p);

std::string loc_name(Loc l);
std::string to_string(const Qualifier& q);
std::string to_string(const Observation& phi);

// Parses `{x, y, ℓ3, *}`; throws std::invalid_argument on malformed text.
Qualifier parse_qualifier(std::string_view text);

}  // namespace arena
