#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "arena/qualifier.hpp"

namespace arena {

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct QType {
    TypeP ty;
    Qualifier q;
};

enum class BaseKind { Int, Unit, Bool };

struct TBase {
    BaseKind kind;
};
struct TTop {};
struct TVar {
    Name name;
};
struct TRef {
    QType inner;
};
// f(x: dom) -> cod; dom is scoped outside f and x, cod sees both.
struct TFun {
    Name self, param;
    QType dom, cod;
};
// ∀f(X^x <: bound). cod
struct TAll {
    Name self, tvar, qvar;
    QType bound, cod;
};

struct Type {
    std::variant<TBase, TTop, TVar, TRef, TFun, TAll> node;
};

TypeP int_type();
TypeP unit_type();
TypeP bool_type();
TypeP top_type();
TypeP tvar_type(Name x);
TypeP ref_type(QType inner);
TypeP fun_type(Name f, Name x, QType dom, QType cod);
TypeP all_type(Name f, Name tv, Name qv, QType bound, QType cod);

inline QType qt(TypeP t, Qualifier q = {}) { return {std::move(t), std::move(q)}; }

template <class N>
const N* as(const TypeP& t) {
    return t ? std::get_if<N>(&t->node) : nullptr;
}

// Structural equality modulo renaming of bound names.
bool alpha_equal(const TypeP& a, const TypeP& b);
bool alpha_equal(const QType& a, const QType& b);

// Free qualifier variables (term-level names appearing in qualifiers).
std::set<Name> free_vars(const TypeP& t);
std::set<Name> free_vars(const QType& q);
// Free type variables.
std::set<Name> free_tvars(const TypeP& t);
std::set<Name> free_tvars(const QType& q);
// Every location mentioned anywhere in the type.
std::set<Loc> mentioned_locs(const QType& q);

struct TypeSubst {
    std::map<Name, Qualifier> quals;
    std::map<Name, TypeP> tvars;
    bool empty() const { return quals.empty() && tvars.empty(); }
};

// Capture-avoiding simultaneous substitution.
TypeP subst(const TypeP& t, const TypeSubst& s);
QType subst(const QType& q, const TypeSubst& s);
Qualifier subst(const Qualifier& q, const TypeSubst& s);

Name fresh_name(const Name& base);

std::string to_string(const TypeP& t);
std::string to_string(const QType& q);

// Γ ::= ∅ | Γ, x : Q | Γ, X^x <: Q
struct Binding {
    enum class Kind { Term, Type } kind;
    Name name;   // term variable, or type variable X
    Name qvar;   // qualifier variable x of a type binding
    QType type;  // declared type, or the bound of a type binding
};

class TypingEnv {
public:
    TypingEnv() = default;

    TypingEnv with_term(Name x, QType t) const;
    TypingEnv with_type(Name tv, Name qv, QType bound) const;

    // Declared qualifier of a qualifier variable (term binding or qvar of a type binding).
    const Qualifier* declared(const Name& x) const;
    const Binding* term_binding(const Name& x) const;
    const Binding* type_binding(const Name& tv) const;
    // True if the name is a term binder (q-self applies only to those).
    bool is_term(const Name& x) const { return term_binding(x) != nullptr; }
    bool binds(const Name& n) const;
    // Qualifier variables in scope (dom(Γ)).
    std::set<Name> dom() const;

    std::size_t size() const { return entries_.size(); }
    const std::vector<Binding>& entries() const { return entries_; }

    // Name guaranteed not bound here; only used transiently by subtyping.
    Name scratch(const char* tag) const;

private:
    std::vector<Binding> entries_;
    std::map<Name, std::size_t> index_;
};

}  // namespace arena
