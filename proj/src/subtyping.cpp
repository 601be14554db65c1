#include "arena/subtyping.hpp"

#include "arena/reach.hpp"

namespace arena {

TypeP expose(const TypingEnv& env, TypeP t) {
    for (std::size_t guard = 0; guard <= env.size(); ++guard) {
        const auto* v = as<TVar>(t);
        if (!v) return t;
        const Binding* b = env.type_binding(v->name);
        if (!b) return t;
        t = b->type.ty;
    }
    return t;
}

namespace {

TypeSubst renaming(const Name& from, const Name& to) {
    TypeSubst s;
    s.quals[from] = Qualifier::of({to});
    return s;
}

bool fun_sub(const TypingEnv& env, const TFun& a, const TFun& b) {
    // s-fun: P <: O, then Q <: R under f : ◇(f(x:O) -> Q), x : P
    if (!qtype_sub(env, b.dom, a.dom)) return false;
    Name f = env.scratch("f");
    TypingEnv e1 = env.with_term(f, qt(fun_type(a.self, a.param, a.dom, a.cod), Qualifier::diamond()));
    Name x = e1.scratch("x");
    TypingEnv e2 = e1.with_term(x, b.dom);
    TypeSubst sa = renaming(a.self, f);
    sa.quals[a.param] = Qualifier::of({x});
    TypeSubst sb = renaming(b.self, f);
    sb.quals[b.param] = Qualifier::of({x});
    return qtype_sub(e2, subst(a.cod, sa), subst(b.cod, sb));
}

bool all_sub(const TypingEnv& env, const TAll& a, const TAll& b) {
    if (!qtype_sub(env, b.bound, a.bound)) return false;
    Name f = env.scratch("f");
    TypingEnv e1 =
        env.with_term(f, qt(all_type(a.self, a.tvar, a.qvar, a.bound, a.cod), Qualifier::diamond()));
    Name tv = e1.scratch("T");
    Name qv = e1.scratch("x");
    TypingEnv e2 = e1.with_type(tv, qv, b.bound);
    auto rename = [&](const TAll& t) {
        TypeSubst s = renaming(t.self, f);
        s.quals[t.qvar] = Qualifier::of({qv});
        s.tvars[t.tvar] = tvar_type(tv);
        return subst(t.cod, s);
    };
    return qtype_sub(e2, rename(a), rename(b));
}

}  // namespace

bool type_sub(const TypingEnv& env, const TypeP& s, const TypeP& t) {
    if (as<TTop>(t)) return true;
    if (const auto* sv = as<TVar>(s)) {
        if (const auto* tv = as<TVar>(t); tv && tv->name == sv->name) return true;
        const Binding* b = env.type_binding(sv->name);
        return b && type_sub(env, b->type.ty, t);
    }
    if (const auto* sb = as<TBase>(s)) {
        const auto* tb = as<TBase>(t);
        return tb && tb->kind == sb->kind;
    }
    if (as<TTop>(s)) return false;
    if (const auto* sr = as<TRef>(s)) {
        const auto* tr = as<TRef>(t);
        return tr && sr->inner.q == tr->inner.q && type_sub(env, sr->inner.ty, tr->inner.ty) &&
               type_sub(env, tr->inner.ty, sr->inner.ty);
    }
    if (const auto* sf = as<TFun>(s)) {
        const auto* tf = as<TFun>(t);
        return tf && fun_sub(env, *sf, *tf);
    }
    if (const auto* sa = as<TAll>(s)) {
        const auto* ta = as<TAll>(t);
        return ta && all_sub(env, *sa, *ta);
    }
    return false;
}

bool qtype_sub(const TypingEnv& env, const QType& p, const QType& q) {
    return type_sub(env, p.ty, q.ty) && qual_sub(env, p.q, q.q);
}

}  // namespace arena
