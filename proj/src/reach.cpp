#include "arena/reach.hpp"

#include <stdexcept>

namespace arena {

Qualifier saturate(const TypingEnv& env, const Qualifier& q) {
    Qualifier cur = q;
    for (std::size_t i = 0; i <= env.size(); ++i) {
        Qualifier next = cur;
        for (const auto& x : cur.vars) {
            const Qualifier* d = env.declared(x);
            if (!d) throw std::logic_error("saturate: unbound variable " + x);
            next = next | *d;
        }
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

Qualifier overlap(const TypingEnv& env, const Qualifier& p, const Qualifier& q) {
    return (saturate(env, p) & saturate(env, q)).with_fresh();
}

namespace {

bool all_bound(const TypingEnv& env, const Qualifier& q) {
    for (const auto& x : q.vars)
        if (!env.declared(x)) return false;
    return true;
}

// Right saturation: every term binder f in the set contributes its non-fresh
// declared qualifier (q-self followed by q-trans).
Qualifier self_saturate(const TypingEnv& env, const Qualifier& q) {
    Qualifier cur = q;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& f : Qualifier(cur).vars) {
            const Binding* b = env.term_binding(f);
            if (!b || b->type.q.fresh) continue;
            Qualifier next = cur | b->type.q;
            if (!(next == cur)) {
                cur = std::move(next);
                grew = true;
            }
        }
    }
    return cur;
}

bool covered(const TypingEnv& env, const Name& e, const Qualifier& qsat, const Qualifier& q) {
    if (qsat.has(e)) return true;
    const Qualifier* d = env.declared(e);
    if (!d || d->fresh) return false;
    return qual_sub(env, *d, q);
}

}  // namespace

bool qual_sub(const TypingEnv& env, const Qualifier& p, const Qualifier& q) {
    if (p.fresh && !q.fresh) return false;
    if (!all_bound(env, p) || !all_bound(env, q)) return false;
    Qualifier qsat = self_saturate(env, q);
    for (Loc l : p.locs)
        if (!qsat.has(l)) return false;
    for (const auto& e : p.vars)
        if (!covered(env, e, qsat, q)) return false;
    return true;
}

}  // namespace arena
