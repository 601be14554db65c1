#include <map>
#include <set>

#include "arena/reach.hpp"
#include "arena/surface.hpp"
#include "arena/typecheck.hpp"

namespace arena {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

struct Hoist {
    Name x;
    TermP init;
    Span span;
};

class Lowerer {
public:
    TermP program(const STermP& s) { return region(s); }

private:
    Name bind(const Name& n) {
        Name r = n;
        while (taken_.count(r)) r = n + "__" + std::to_string(++counter_);
        taken_.insert(r);
        return r;
    }
    Name rename_var(const Name& n) const {
        auto it = vars_.find(n);
        return it == vars_.end() ? n : it->second;
    }
    QType rename(const QType& q) const {
        TypeSubst s;
        for (const auto& [from, to] : vars_)
            if (from != to) s.quals[from] = Qualifier::of({to});
        for (const auto& [from, to] : tvars_)
            if (from != to) s.tvars[from] = tvar_type(to);
        if (s.quals.empty() && s.tvars.empty()) return q;
        return subst(q, s);
    }
    Qualifier rename(const Qualifier& q) const {
        Qualifier out = q;
        out.vars.clear();
        for (const auto& v : q.vars) out.vars.insert(rename_var(v));
        return out;
    }

    static TermP wrap(std::vector<Hoist>& hs, TermP t) {
        for (auto it = hs.rbegin(); it != hs.rend(); ++it) t = mk(WithR{it->x, it->init, t}, it->span);
        hs.clear();
        return t;
    }

    // A position whose continuation is the identity: scoped allocations
    // inside it close before the value leaves.
    TermP region(const STermP& s) {
        if (as<surf::NewRefScoped>(s))
            throw LoweringError(s->span, "scoped allocation has no enclosing block to live in");
        std::vector<Hoist> hs;
        TermP t = expr(s, hs);
        return wrap(hs, t);
    }

    TermP block(const surf::Block& b, std::size_t i) {
        if (i == b.stmts.size()) return region(b.result);
        const auto& [stmt, sp] = b.stmts[i];
        auto saved_vars = vars_;
        TermP out = std::visit(
            overloaded{
                [&](const surf::ValBind& v) { return binding(v.x, v.ty, v.rhs, b, i, sp); },
                [&](const surf::FunDef& d) { return binding(d.f, std::nullopt, d.fn, b, i, sp); },
                [&](const surf::ExprStmt& e) { return binding("_", std::nullopt, e.e, b, i, sp); },
            },
            stmt);
        vars_ = saved_vars;
        return out;
    }

    TermP binding(const Name& x, const std::optional<QType>& ty, const STermP& rhs, const surf::Block& b,
                  std::size_t i, Span sp) {
        std::vector<Hoist> hs;
        Name x2 = bind(x);
        if (const auto* sc = as<surf::NewRefScoped>(rhs); sc && !ty) {
            TermP init = expr(sc->init, hs);
            vars_[x] = x2;
            TermP rest = block(b, i + 1);
            return wrap(hs, mk(WithR{x2, init, rest}, rhs->span));
        }
        TermP rhs2 = expr(rhs, hs);
        std::optional<QType> dom;
        if (ty) dom = rename(*ty);
        Name f = bind("_v");
        vars_[x] = x2;
        TermP rest = block(b, i + 1);
        Abs a{f, x2, dom ? *dom : QType{}, QType{}, Qualifier{}, rest};
        return wrap(hs, mk(App{mk(std::move(a), sp), rhs2}, sp));
    }

    TermP lambda(const surf::Lambda& l, Span sp) {
        auto saved_vars = vars_;
        QType dom = rename(l.dom);
        Qualifier cap = rename(l.cap);
        Name f = bind(l.self.value_or("_f"));
        if (l.self) vars_[*l.self] = f;
        Name x = bind(l.x);
        vars_[l.x] = x;
        QType cod = rename(l.cod);
        TermP body = region(l.body);
        vars_ = saved_vars;
        return mk(Abs{f, x, dom, cod, cap, body}, sp);
    }

    TermP type_lambda(const surf::TypeLambda& l, Span sp) {
        auto saved_vars = vars_;
        auto saved_tvars = tvars_;
        QType bound = rename(l.bound);
        Qualifier cap = rename(l.cap);
        Name f = bind(l.self.value_or("_f"));
        if (l.self) vars_[*l.self] = f;
        Name X = bind(l.X);
        tvars_[l.X] = X;
        Name x = bind(l.x);
        vars_[l.x] = x;
        QType cod = rename(l.cod);
        TermP body = region(l.body);
        vars_ = saved_vars;
        tvars_ = saved_tvars;
        return mk(TAbs{f, X, x, bound, cod, cap, body}, sp);
    }

    TermP expr(const STermP& s, std::vector<Hoist>& hs) {
        const Span sp = s->span;
        return std::visit(
            overloaded{
                [&](const surf::Lit& l) -> TermP { return mk(Const{l.kind, l.value}, sp); },
                [&](const surf::VarRef& v) -> TermP { return var(rename_var(v.x), sp); },
                [&](const surf::Lambda& l) -> TermP { return lambda(l, sp); },
                [&](const surf::TypeLambda& l) -> TermP { return type_lambda(l, sp); },
                [&](const surf::Apply& a) -> TermP {
                    TermP fn = expr(a.fn, hs);
                    TermP arg = expr(a.arg, hs);
                    return mk(App{fn, arg}, sp);
                },
                [&](const surf::TypeApply& a) -> TermP {
                    TermP fn = expr(a.fn, hs);
                    return mk(TApp{fn, rename(a.arg)}, sp);
                },
                [&](const surf::NewRef& r) -> TermP { return mk(RefNew{expr(r.init, hs)}, sp); },
                [&](const surf::NewRefAt& r) -> TermP {
                    TermP init = expr(r.init, hs);
                    TermP proxy = expr(r.proxy, hs);
                    return mk(RefAt{init, proxy}, sp);
                },
                [&](const surf::NewRefScoped& r) -> TermP {
                    TermP init = expr(r.init, hs);
                    Name x = bind("sc");
                    hs.push_back({x, init, sp});
                    return var(x, sp);
                },
                [&](const surf::DerefS& d) -> TermP { return mk(Deref{expr(d.ref, hs)}, sp); },
                [&](const surf::AssignS& a) -> TermP {
                    TermP ref = expr(a.ref, hs);
                    TermP rhs = expr(a.rhs, hs);
                    return mk(Assign{ref, rhs}, sp);
                },
                [&](const surf::Annot& a) -> TermP {
                    TermP e = expr(a.e, hs);
                    QType target = rename(a.ty);
                    Name f = bind("_a");
                    Name x = bind("_x");
                    QType cod = target.q.fresh ? qt(target.ty, Qualifier::of({x})) : target;
                    Qualifier cap = target.q.without_fresh();
                    cap.locs.clear();
                    Abs id{f, x, target, cod, cap, var(x, sp)};
                    return mk(App{mk(std::move(id), sp), e}, sp);
                },
                [&](const surf::Block& b) -> TermP { return block(b, 0); },
                [&](const surf::WithS& w) -> TermP {
                    TermP init = expr(w.init, hs);
                    auto saved = vars_;
                    Name x = bind(w.x);
                    vars_[w.x] = x;
                    TermP body = region(w.body);
                    vars_ = saved;
                    return mk(WithR{x, init, body}, sp);
                },
                [&](const surf::CloseS& c) -> TermP { return mk(WithC{c.l, region(c.body)}, sp); },
                [&](const surf::LocS& l) -> TermP { return mk(LocT{l.l, l.off}, sp); },
                [&](const surf::PrimS& p) -> TermP {
                    TermP lhs = expr(p.lhs, hs);
                    TermP rhs = expr(p.rhs, hs);
                    return mk(Prim{p.op, lhs, rhs}, sp);
                },
                [&](const surf::IfZeroS& z) -> TermP {
                    TermP c = expr(z.cond, hs);
                    return mk(IfZero{c, region(z.then_), region(z.else_)}, sp);
                },
            },
            s->node);
    }

    std::map<Name, Name> vars_, tvars_;
    std::set<Name> taken_;
    int counter_ = 0;
};

bool is_hole(const Abs& a) { return !a.cod.ty; }

class Elaborator {
public:
    TermP run(const TypingEnv& env, const Observation& phi, const TermP& t) {
        const Span sp = t->span;
        return std::visit(
            overloaded{
                [&](const Const&) { return t; },
                [&](const Var&) { return t; },
                [&](const LocT&) { return t; },
                [&](const Abs& a) -> TermP {
                    Abs out = a;
                    TypingEnv inner =
                        env.with_term(a.f, qt(fun_type(a.f, a.x, a.dom, a.cod), a.cap)).with_term(a.x, a.dom);
                    out.body = run(inner, Observation::of(a.cap).plus(a.f).plus(a.x), a.body);
                    return mk(std::move(out), sp);
                },
                [&](const TAbs& a) -> TermP {
                    TAbs out = a;
                    TypingEnv inner = env.with_term(a.f, qt(all_type(a.f, a.X, a.x, a.bound, a.cod), a.cap))
                                          .with_type(a.X, a.x, a.bound);
                    out.body = run(inner, Observation::of(a.cap).plus(a.f).plus(a.x), a.body);
                    return mk(std::move(out), sp);
                },
                [&](const App& a) -> TermP {
                    TermP arg = run(env, phi, a.arg);
                    const Abs* lam = as<Abs>(a.fn);
                    if (!lam || !is_hole(*lam)) return mk(App{run(env, phi, a.fn), arg}, sp);
                    return mk(App{binding(env, phi, *lam, arg, a.fn->span), arg}, sp);
                },
                [&](const TApp& a) -> TermP { return mk(TApp{run(env, phi, a.fn), a.arg}, sp); },
                [&](const RefNew& r) -> TermP { return mk(RefNew{run(env, phi, r.init)}, sp); },
                [&](const RefAt& r) -> TermP {
                    return mk(RefAt{run(env, phi, r.init), run(env, phi, r.proxy)}, sp);
                },
                [&](const Deref& d) -> TermP { return mk(Deref{run(env, phi, d.ref)}, sp); },
                [&](const Assign& a) -> TermP {
                    return mk(Assign{run(env, phi, a.ref), run(env, phi, a.rhs)}, sp);
                },
                [&](const WithR& w) -> TermP {
                    TermP init = run(env, phi, w.init);
                    QType p = synthesize(env, sigma_, phi, init);
                    TypingEnv inner = env.with_term(w.x, qt(ref_type(p), Qualifier::diamond()));
                    return mk(WithR{w.x, init, run(inner, phi.plus(w.x), w.body)}, sp);
                },
                [&](const WithC& w) -> TermP { return mk(WithC{w.l, run(env, phi, w.body)}, sp); },
                [&](const Prim& p) -> TermP {
                    return mk(Prim{p.op, run(env, phi, p.lhs), run(env, phi, p.rhs)}, sp);
                },
                [&](const IfZero& z) -> TermP {
                    return mk(IfZero{run(env, phi, z.cond), run(env, phi, z.then_), run(env, phi, z.else_)}, sp);
                },
            },
            t->node);
    }

private:
    TermP binding(const TypingEnv& env, const Observation& phi, const Abs& lam, const TermP& rhs, Span sp) {
        Abs out = lam;
        if (!lam.dom.ty) {
            QType p = synthesize(env, sigma_, phi, rhs);
            if (p.q.fresh) p.q = saturate(env, p.q.without_fresh()).with_fresh();
            out.dom = p;
        }
        out.cap = phi.as_qualifier();
        TypingEnv inner = env.with_term(out.f, qt(top_type(), out.cap)).with_term(out.x, out.dom);
        Observation obs = Observation::of(out.cap).plus(out.f).plus(out.x);
        out.body = run(inner, obs, lam.body);
        out.cod = synthesize(inner, sigma_, obs, out.body);
        return mk(std::move(out), sp);
    }

    StoreTyping sigma_;
};

bool holes(const TermP& t) {
    return std::visit(overloaded{
                          [](const Abs& a) { return is_hole(a) || holes(a.body); },
                          [](const TAbs& a) { return holes(a.body); },
                          [](const App& a) { return holes(a.fn) || holes(a.arg); },
                          [](const TApp& a) { return holes(a.fn); },
                          [](const RefNew& r) { return holes(r.init); },
                          [](const RefAt& r) { return holes(r.init) || holes(r.proxy); },
                          [](const Deref& d) { return holes(d.ref); },
                          [](const Assign& a) { return holes(a.ref) || holes(a.rhs); },
                          [](const WithR& w) { return holes(w.init) || holes(w.body); },
                          [](const WithC& w) { return holes(w.body); },
                          [](const Prim& p) { return holes(p.lhs) || holes(p.rhs); },
                          [](const IfZero& z) { return holes(z.cond) || holes(z.then_) || holes(z.else_); },
                          [](const auto&) { return false; },
                      },
                      t->node);
}

}  // namespace

TermP lower(const STermP& s) { return Lowerer{}.program(s); }

TermP elaborate(const TermP& t) {
    if (!holes(t)) return t;
    return Elaborator{}.run(TypingEnv{}, Observation{}, t);
}

bool has_holes(const TermP& t) { return holes(t); }

TermP compile(std::string_view text, const ParseOptions& opts) { return elaborate(lower(parse(text, opts))); }

}  // namespace arena
