#include "arena/types.hpp"

#include <atomic>
#include <sstream>
#include <stdexcept>

namespace arena {

namespace {

TypeP make(auto node) { return std::make_shared<const Type>(Type{std::move(node)}); }

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

TypeP int_type() {
    static const TypeP t = make(TBase{BaseKind::Int});
    return t;
}
TypeP unit_type() {
    static const TypeP t = make(TBase{BaseKind::Unit});
    return t;
}
TypeP bool_type() {
    static const TypeP t = make(TBase{BaseKind::Bool});
    return t;
}
TypeP top_type() {
    static const TypeP t = make(TTop{});
    return t;
}
TypeP tvar_type(Name x) { return make(TVar{std::move(x)}); }
TypeP ref_type(QType inner) { return make(TRef{std::move(inner)}); }
TypeP fun_type(Name f, Name x, QType dom, QType cod) {
    return make(TFun{std::move(f), std::move(x), std::move(dom), std::move(cod)});
}
TypeP all_type(Name f, Name tv, Name qv, QType bound, QType cod) {
    return make(TAll{std::move(f), std::move(tv), std::move(qv), std::move(bound), std::move(cod)});
}

// ---------------------------------------------------------------------------
// alpha equality

namespace {

struct Renaming {
    std::map<Name, Name> q;  // right-hand names -> left-hand names
    std::map<Name, Name> t;
};

Qualifier rename_q(const Qualifier& q, const std::map<Name, Name>& m) {
    Qualifier r;
    r.locs = q.locs;
    r.fresh = q.fresh;
    for (const auto& v : q.vars) {
        auto it = m.find(v);
        r.vars.insert(it == m.end() ? v : it->second);
    }
    return r;
}

bool aeq(const TypeP& a, const TypeP& b, const Renaming& r);

bool aeq(const QType& a, const QType& b, const Renaming& r) {
    return a.q == rename_q(b.q, r.q) && aeq(a.ty, b.ty, r);
}

bool aeq(const TypeP& a, const TypeP& b, const Renaming& r) {
    if (!a || !b) return a == b;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const TBase& x) { return x.kind == std::get<TBase>(b->node).kind; },
            [&](const TTop&) { return true; },
            [&](const TVar& x) {
                const auto& y = std::get<TVar>(b->node).name;
                auto it = r.t.find(y);
                return x.name == (it == r.t.end() ? y : it->second);
            },
            [&](const TRef& x) { return aeq(x.inner, std::get<TRef>(b->node).inner, r); },
            [&](const TFun& x) {
                const auto& y = std::get<TFun>(b->node);
                if (!aeq(x.dom, y.dom, r)) return false;
                Renaming r2 = r;
                r2.q[y.self] = x.self;
                r2.q[y.param] = x.param;
                return aeq(x.cod, y.cod, r2);
            },
            [&](const TAll& x) {
                const auto& y = std::get<TAll>(b->node);
                if (!aeq(x.bound, y.bound, r)) return false;
                Renaming r2 = r;
                r2.q[y.self] = x.self;
                r2.q[y.qvar] = x.qvar;
                r2.t[y.tvar] = x.tvar;
                return aeq(x.cod, y.cod, r2);
            },
        },
        a->node);
}

}  // namespace

bool alpha_equal(const TypeP& a, const TypeP& b) { return aeq(a, b, Renaming{}); }
bool alpha_equal(const QType& a, const QType& b) { return aeq(a, b, Renaming{}); }

// ---------------------------------------------------------------------------
// free names

namespace {

void collect(const TypeP& t, std::set<Name>& qv, std::set<Name>& tv, std::set<Loc>& ls);

void collect(const QType& q, std::set<Name>& qv, std::set<Name>& tv, std::set<Loc>& ls) {
    qv.insert(q.q.vars.begin(), q.q.vars.end());
    ls.insert(q.q.locs.begin(), q.q.locs.end());
    collect(q.ty, qv, tv, ls);
}

void collect(const TypeP& t, std::set<Name>& qv, std::set<Name>& tv, std::set<Loc>& ls) {
    if (!t) return;
    std::visit(overloaded{
                   [](const TBase&) {},
                   [](const TTop&) {},
                   [&](const TVar& x) { tv.insert(x.name); },
                   [&](const TRef& x) { collect(x.inner, qv, tv, ls); },
                   [&](const TFun& x) {
                       collect(x.dom, qv, tv, ls);
                       std::set<Name> inner_q, inner_t;
                       collect(x.cod, inner_q, inner_t, ls);
                       inner_q.erase(x.self);
                       inner_q.erase(x.param);
                       qv.insert(inner_q.begin(), inner_q.end());
                       tv.insert(inner_t.begin(), inner_t.end());
                   },
                   [&](const TAll& x) {
                       collect(x.bound, qv, tv, ls);
                       std::set<Name> inner_q, inner_t;
                       collect(x.cod, inner_q, inner_t, ls);
                       inner_q.erase(x.self);
                       inner_q.erase(x.qvar);
                       inner_t.erase(x.tvar);
                       qv.insert(inner_q.begin(), inner_q.end());
                       tv.insert(inner_t.begin(), inner_t.end());
                   },
               },
               t->node);
}

}  // namespace

std::set<Name> free_vars(const TypeP& t) {
    std::set<Name> qv, tv;
    std::set<Loc> ls;
    collect(t, qv, tv, ls);
    return qv;
}
std::set<Name> free_vars(const QType& q) {
    std::set<Name> qv, tv;
    std::set<Loc> ls;
    collect(q, qv, tv, ls);
    return qv;
}
std::set<Name> free_tvars(const TypeP& t) {
    std::set<Name> qv, tv;
    std::set<Loc> ls;
    collect(t, qv, tv, ls);
    return tv;
}
std::set<Name> free_tvars(const QType& q) {
    std::set<Name> qv, tv;
    std::set<Loc> ls;
    collect(q, qv, tv, ls);
    return tv;
}
std::set<Loc> mentioned_locs(const QType& q) {
    std::set<Name> qv, tv;
    std::set<Loc> ls;
    collect(q, qv, tv, ls);
    return ls;
}

// ---------------------------------------------------------------------------
// substitution

Name fresh_name(const Name& base) {
    static std::atomic<unsigned long> counter{0};
    Name stem = base;
    if (auto pos = stem.rfind("__"); pos != Name::npos && pos > 0) stem = stem.substr(0, pos);
    return stem + "__" + std::to_string(++counter);
}

Qualifier subst(const Qualifier& q, const TypeSubst& s) {
    if (s.quals.empty()) return q;
    Qualifier r;
    r.locs = q.locs;
    r.fresh = q.fresh;
    for (const auto& v : q.vars) {
        auto it = s.quals.find(v);
        if (it == s.quals.end()) {
            r.vars.insert(v);
        } else {
            r = r | it->second;
        }
    }
    return r;
}

namespace {

// Names a binder must avoid so that the replacements stay free.
void replacement_names(const TypeSubst& s, std::set<Name>& qv, std::set<Name>& tv) {
    for (const auto& [k, q] : s.quals) qv.insert(q.vars.begin(), q.vars.end());
    for (const auto& [k, t] : s.tvars) {
        auto a = free_vars(t);
        auto b = free_tvars(t);
        qv.insert(a.begin(), a.end());
        tv.insert(b.begin(), b.end());
    }
}

// Drops `b` from the substitution domain; renames it if it would capture.
Name enter_qbinder(const Name& b, TypeSubst& s, const std::set<Name>& avoid) {
    s.quals.erase(b);
    if (!avoid.count(b)) return b;
    Name nb = fresh_name(b);
    s.quals[b] = Qualifier::of({nb});
    return nb;
}

Name enter_tbinder(const Name& b, TypeSubst& s, const std::set<Name>& avoid) {
    s.tvars.erase(b);
    if (!avoid.count(b)) return b;
    Name nb = fresh_name(b);
    s.tvars[b] = tvar_type(nb);
    return nb;
}

}  // namespace

TypeP subst(const TypeP& t, const TypeSubst& s) {
    if (!t || s.empty()) return t;
    return std::visit(
        overloaded{
            [&](const TBase&) { return t; },
            [&](const TTop&) { return t; },
            [&](const TVar& x) -> TypeP {
                auto it = s.tvars.find(x.name);
                return it == s.tvars.end() ? t : it->second;
            },
            [&](const TRef& x) { return ref_type(subst(x.inner, s)); },
            [&](const TFun& x) {
                QType dom = subst(x.dom, s);
                std::set<Name> aq, at;
                TypeSubst inner = s;
                inner.quals.erase(x.self);
                inner.quals.erase(x.param);
                replacement_names(inner, aq, at);
                Name f = enter_qbinder(x.self, inner, aq);
                Name p = enter_qbinder(x.param, inner, aq);
                return fun_type(f, p, dom, subst(x.cod, inner));
            },
            [&](const TAll& x) {
                QType bound = subst(x.bound, s);
                std::set<Name> aq, at;
                TypeSubst inner = s;
                inner.quals.erase(x.self);
                inner.quals.erase(x.qvar);
                inner.tvars.erase(x.tvar);
                replacement_names(inner, aq, at);
                Name f = enter_qbinder(x.self, inner, aq);
                Name qv = enter_qbinder(x.qvar, inner, aq);
                Name tv = enter_tbinder(x.tvar, inner, at);
                return all_type(f, tv, qv, bound, subst(x.cod, inner));
            },
        },
        t->node);
}

QType subst(const QType& q, const TypeSubst& s) { return {subst(q.ty, s), subst(q.q, s)}; }

// ---------------------------------------------------------------------------
// printing

std::string to_string(const TypeP& t) {
    if (!t) return "?";
    return std::visit(overloaded{
                          [](const TBase& x) -> std::string {
                              switch (x.kind) {
                                  case BaseKind::Int: return "Int";
                                  case BaseKind::Unit: return "Unit";
                                  case BaseKind::Bool: return "Bool";
                              }
                              return "?";
                          },
                          [](const TTop&) -> std::string { return "Top"; },
                          [](const TVar& x) { return x.name; },
                          [](const TRef& x) { return "Ref[" + to_string(x.inner) + "]"; },
                          [](const TFun& x) {
                              return "(" + x.self + "(" + x.param + ": " + to_string(x.dom) +
                                     ") => " + to_string(x.cod) + ")";
                          },
                          [](const TAll& x) {
                              return "(forall " + x.self + "[" + x.tvar + "^" + x.qvar + " <: " +
                                     to_string(x.bound) + "] => " + to_string(x.cod) + ")";
                          },
                      },
                      t->node);
}

std::string to_string(const QType& q) { return to_string(q.ty) + "^" + to_string(q.q); }

// ---------------------------------------------------------------------------
// environments

namespace {

void require_scoped(const TypingEnv& env, const QType& t, const Name& who) {
    for (const auto& v : free_vars(t))
        if (!env.declared(v))
            throw std::logic_error("environment extension for " + who + " mentions unbound " + v);
    for (const auto& v : free_tvars(t))
        if (!env.type_binding(v))
            throw std::logic_error("environment extension for " + who + " mentions unbound type " + v);
}

}  // namespace

TypingEnv TypingEnv::with_term(Name x, QType t) const {
    if (binds(x)) throw std::logic_error("duplicate binder " + x);
    require_scoped(*this, t, x);
    TypingEnv e = *this;
    e.index_[x] = e.entries_.size();
    e.entries_.push_back(Binding{Binding::Kind::Term, std::move(x), {}, std::move(t)});
    return e;
}

TypingEnv TypingEnv::with_type(Name tv, Name qv, QType bound) const {
    if (binds(tv) || binds(qv) || tv == qv) throw std::logic_error("duplicate binder " + tv + "/" + qv);
    require_scoped(*this, bound, tv);
    TypingEnv e = *this;
    e.index_[tv] = e.entries_.size();
    e.index_[qv] = e.entries_.size();
    e.entries_.push_back(Binding{Binding::Kind::Type, std::move(tv), std::move(qv), std::move(bound)});
    return e;
}

const Qualifier* TypingEnv::declared(const Name& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return nullptr;
    const Binding& b = entries_[it->second];
    if (b.kind == Binding::Kind::Term) return &b.type.q;
    return b.qvar == x ? &b.type.q : nullptr;
}

const Binding* TypingEnv::term_binding(const Name& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return nullptr;
    const Binding& b = entries_[it->second];
    return b.kind == Binding::Kind::Term ? &b : nullptr;
}

const Binding* TypingEnv::type_binding(const Name& tv) const {
    auto it = index_.find(tv);
    if (it == index_.end()) return nullptr;
    const Binding& b = entries_[it->second];
    return (b.kind == Binding::Kind::Type && b.name == tv) ? &b : nullptr;
}

bool TypingEnv::binds(const Name& n) const { return index_.count(n) != 0; }

std::set<Name> TypingEnv::dom() const {
    std::set<Name> d;
    for (const auto& b : entries_) d.insert(b.kind == Binding::Kind::Term ? b.name : b.qvar);
    return d;
}

Name TypingEnv::scratch(const char* tag) const {
    return std::string("%") + tag + std::to_string(entries_.size());
}

}  // namespace arena
