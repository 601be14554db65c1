#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>

#include "arena/qualifier.hpp"
#include "arena/types.hpp"

namespace arena {

struct Span {
    int line = 0;
    int col = 0;
};

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Const {
    BaseKind kind;
    std::int64_t value = 0;
};
struct Var {
    Name x;
};
// λf(x: dom): cod with capture set `cap`. A null dom/cod type marks an
// annotation that lowering still has to elaborate.
struct Abs {
    Name f, x;
    QType dom, cod;
    Qualifier cap;
    TermP body;
};
struct App {
    TermP fn, arg;
};
struct RefNew {
    TermP init;
};
struct RefAt {
    TermP init, proxy;
};
struct Deref {
    TermP ref;
};
struct Assign {
    TermP ref, rhs;
};
struct TAbs {
    Name f, X, x;
    QType bound, cod;
    Qualifier cap;
    TermP body;
};
struct TApp {
    TermP fn;
    QType arg;
};
struct WithR {
    Name x;
    TermP init, body;
};
struct WithC {
    Loc l;
    TermP body;
};
struct LocT {
    Loc l;
    std::uint32_t off;
};

enum class PrimOp { Add, Sub, Mul };
struct Prim {
    PrimOp op;
    TermP lhs, rhs;
};
struct IfZero {
    TermP cond, then_, else_;
};

struct Term {
    std::variant<Const, Var, Abs, App, RefNew, RefAt, Deref, Assign, TAbs, TApp, WithR, WithC, LocT,
                 Prim, IfZero>
        node;
    Span span;
};

template <class N>
const N* as(const TermP& t) {
    return t ? std::get_if<N>(&t->node) : nullptr;
}

template <class N>
TermP mk(N node, Span span = {}) {
    return std::make_shared<const Term>(Term{std::move(node), span});
}

TermP int_lit(std::int64_t v, Span s = {});
TermP bool_lit(bool v, Span s = {});
TermP unit_lit(Span s = {});
TermP var(Name x, Span s = {});

bool is_value(const TermP& t);

// Qualifier a value is synthesized at: {} for constants, {ℓ} for ℓ·o,
// the capture set for closures.
Qualifier value_qualifier(const TermP& v);

// LC(t)
std::set<Loc> local_locations(const TermP& t);
// WT(t)
bool well_stepped(const TermP& t);

std::set<Name> free_term_vars(const TermP& t);
bool contains_runtime_forms(const TermP& t);

struct TermSubst {
    std::map<Name, TermP> vals;
    TypeSubst types;
};

// t[v/x, ...] for closed replacements; qualifiers naming a substituted
// variable are rewritten with the value's qualifier.
TermP subst_term(const TermP& t, const TermSubst& s);
TermSubst value_subst(const Name& x, const TermP& v);

bool alpha_equal(const TermP& a, const TermP& b);

// Canonical core-syntax rendering.
std::string print_term(const TermP& t);

}  // namespace arena
