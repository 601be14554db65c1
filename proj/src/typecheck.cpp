#include "arena/typecheck.hpp"

#include <algorithm>
#include <sstream>

#include "arena/reach.hpp"
#include "arena/subtyping.hpp"

namespace arena {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::FreshnessViolation: return "FreshnessViolation";
        case ErrorKind::ObservationViolation: return "ObservationViolation";
        case ErrorKind::EscapeViolation: return "EscapeViolation";
        case ErrorKind::OverlapViolation: return "OverlapViolation";
        case ErrorKind::LocalLocationViolation: return "LocalLocationViolation";
        case ErrorKind::DependencyViolation: return "DependencyViolation";
        case ErrorKind::BoundViolation: return "BoundViolation";
        case ErrorKind::SubsumptionFailure: return "SubsumptionFailure";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::UnboundName: return "UnboundName";
    }
    return "?";
}

std::optional<ErrorKind> error_kind_from(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(ErrorKind::UnboundName); ++i) {
        auto k = static_cast<ErrorKind>(i);
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

std::string to_string(CellId c) { return loc_name(c.l) + "·" + std::to_string(c.off); }

void StoreTyping::add(CellId c, QType t) {
    if (index_.count(c)) throw std::logic_error("store typing already has " + to_string(c));
    index_[c] = entries_.size();
    entries_.emplace_back(c, std::move(t));
}

const QType* StoreTyping::find(CellId c) const {
    auto it = index_.find(c);
    return it == index_.end() ? nullptr : &entries_[it->second].second;
}

std::set<Loc> StoreTyping::locations() const {
    std::set<Loc> out;
    for (const auto& [c, t] : entries_) out.insert(c.l);
    return out;
}

std::string TypeReport::verdict_line() const {
    if (accepted && result) return "ACCEPT " + to_string(*result);
    return std::string("REJECT ") + (diagnostics.empty() ? "Unknown" : to_string(diagnostics.front().kind));
}

std::vector<std::string> TypeReport::diagnostic_lines() const {
    std::vector<std::string> out;
    for (const auto& d : diagnostics) {
        std::ostringstream os;
        os << d.span.line << ':' << d.span.col << ' ' << d.rule << ' ' << to_string(d.kind) << ": "
           << d.message;
        out.push_back(os.str());
    }
    return out;
}

namespace {

[[noreturn]] void fail(ErrorKind k, const char* rule, Span sp, const std::string& msg) {
    throw TypeError(k, rule, sp, msg);
}

std::string locs_str(const std::set<Loc>& ls) {
    Qualifier q;
    q.locs = ls;
    return to_string(q);
}

void require_separate(const std::set<Loc>& lc, const Qualifier& q, const char* rule, Span sp,
                      const char* what) {
    for (Loc l : lc)
        if (q.has(l))
            fail(ErrorKind::LocalLocationViolation, rule, sp,
                 std::string("local locations ") + locs_str(lc) + " of " + what + " meet " + to_string(q));
}

Qualifier plain(const Qualifier& q) { return q.without_fresh(); }

class Checker {
public:
    Checker(const StoreTyping& sigma, RedexProbe* probe) : sigma_(sigma), probe_(probe) {}

    QType synth(const TypingEnv& env, const Observation& phi, const TermP& t) {
        QType r = synth_node(env, phi, t, nullptr, "t-sub");
        if (!phi.covers(r.q)) throw std::logic_error("observability broken at " + print_term(t));
        return r;
    }

    // Synthesis whose carrier is pushed towards `want`; the qualifier stays minimal.
    QType synth_expect(const TypingEnv& env, const Observation& phi, const TermP& t, const TypeP& want,
                       const char* rule) {
        QType r = synth_node(env, phi, t, want, rule);
        if (!phi.covers(r.q)) throw std::logic_error("observability broken at " + print_term(t));
        if (want && r.ty != want && !type_sub(env, r.ty, want))
            fail(ErrorKind::SubsumptionFailure, rule, t->span,
                 to_string(r.ty) + " is not a subtype of " + to_string(want));
        if (want) r.ty = want;
        return r;
    }

    void check(const TypingEnv& env, const Observation& phi, const TermP& t, const QType& expected,
               const char* rule) {
        QType got = synth_expect(env, phi, t, expected.ty, rule);
        if (!qual_sub(env, got.q, expected.q))
            fail(ErrorKind::SubsumptionFailure, rule, t->span,
                 "qualifier " + to_string(got.q) + " is not a subqualifier of " + to_string(expected.q));
        if (!phi.covers(expected.q))
            fail(ErrorKind::ObservationViolation, rule, t->span,
                 "target " + to_string(expected.q) + " exceeds observation " + to_string(phi));
        require_separate(local_locations(t), expected.q, rule, t->span, "subsumed term");
    }

private:
    struct Descend {
        Descend(std::vector<int>& p, int i) : p(p) { p.push_back(i); }
        ~Descend() { p.pop_back(); }
        std::vector<int>& p;
    };

    bool at_probe() const { return probe_ && path_ == probe_->path; }
    void record(const QType& inner) {
        if (at_probe()) probe_->inner = inner;
    }

    QType sub(int i, const TypingEnv& env, const Observation& phi, const TermP& t) {
        Descend d(path_, i);
        return synth(env, phi, t);
    }
    QType sub_expect(int i, const TypingEnv& env, const Observation& phi, const TermP& t, const TypeP& want,
                     const char* rule) {
        Descend d(path_, i);
        return synth_expect(env, phi, t, want, rule);
    }
    void sub_check(int i, const TypingEnv& env, const Observation& phi, const TermP& t, const QType& want,
                   const char* rule) {
        Descend d(path_, i);
        check(env, phi, t, want, rule);
    }

    void require_scoped(const TypingEnv& env, const QType& q, const std::set<Name>& extra, const char* rule,
                        Span sp) {
        if (!q.ty) throw std::logic_error("unelaborated annotation reached the checker");
        for (const auto& v : free_vars(q))
            if (!env.declared(v) && !extra.count(v))
                fail(ErrorKind::UnboundName, rule, sp, "annotation mentions unbound variable " + v);
        for (const auto& v : free_tvars(q))
            if (!env.type_binding(v) && !extra.count(v))
                fail(ErrorKind::UnboundName, rule, sp, "annotation mentions unbound type variable " + v);
        for (Loc l : mentioned_locs(q))
            if (!sigma_.find(CellId{l, 0}))
                fail(ErrorKind::UnboundName, rule, sp, "annotation mentions unknown location " + loc_name(l));
    }

    // Renames binders that clash with the environment.
    static Name pick(const TypingEnv& env, const Name& n, std::set<Name>& taken) {
        Name r = n;
        while (env.binds(r) || taken.count(r)) r = fresh_name(n);
        taken.insert(r);
        return r;
    }

    Abs freshen(const TypingEnv& env, const Abs& a) {
        std::set<Name> taken;
        Name f = pick(env, a.f, taken);
        Name x = pick(env, a.x, taken);
        if (f == a.f && x == a.x) return a;
        TermSubst s;
        for (auto [from, to] : {std::pair{a.f, f}, std::pair{a.x, x}}) {
            if (from == to) continue;
            s.vals[from] = var(to);
            s.types.quals[from] = Qualifier::of({to});
        }
        return Abs{f, x, a.dom, subst(a.cod, s.types), a.cap, subst_term(a.body, s)};
    }

    TAbs freshen(const TypingEnv& env, const TAbs& a) {
        std::set<Name> taken;
        Name f = pick(env, a.f, taken);
        Name X = pick(env, a.X, taken);
        Name x = pick(env, a.x, taken);
        if (f == a.f && X == a.X && x == a.x) return a;
        TermSubst s;
        for (auto [from, to] : {std::pair{a.f, f}, std::pair{a.x, x}}) {
            if (from == to) continue;
            s.vals[from] = var(to);
            s.types.quals[from] = Qualifier::of({to});
        }
        if (X != a.X) s.types.tvars[a.X] = tvar_type(X);
        return TAbs{f, X, x, a.bound, subst(a.cod, s.types), a.cap, subst_term(a.body, s)};
    }

    WithR freshen(const TypingEnv& env, const WithR& w) {
        std::set<Name> taken;
        Name x = pick(env, w.x, taken);
        if (x == w.x) return w;
        TermSubst s;
        s.vals[w.x] = var(x);
        s.types.quals[w.x] = Qualifier::of({x});
        return WithR{x, w.init, subst_term(w.body, s)};
    }

    QType expect_int(int i, const TypingEnv& env, const Observation& phi, const TermP& t, const char* rule) {
        QType r = sub(i, env, phi, t);
        const auto* b = as<TBase>(expose(env, r.ty));
        if (!b || b->kind != BaseKind::Int)
            fail(ErrorKind::ShapeMismatch, rule, t->span, "expected Int, got " + to_string(r));
        return r;
    }

    QType synth_node(const TypingEnv& env, const Observation& phi, const TermP& t, const TypeP& want,
                     const char* rule);

    const StoreTyping& sigma_;
    RedexProbe* probe_;
    std::vector<int> path_;
};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

QType Checker::synth_node(const TypingEnv& env, const Observation& phi, const TermP& t, const TypeP& want,
                          const char* rule) {
    const Span sp = t->span;
    const TRef* want_ref = as<TRef>(want);
    return std::visit(
        overloaded{
            [&](const Const& c) -> QType {
                switch (c.kind) {
                    case BaseKind::Int: return qt(int_type());
                    case BaseKind::Bool: return qt(bool_type());
                    case BaseKind::Unit: return qt(unit_type());
                }
                return qt(unit_type());
            },
            [&](const Var& v) -> QType {
                const Binding* b = env.term_binding(v.x);
                if (!b) fail(ErrorKind::UnboundName, "t-var", sp, "unbound variable " + v.x);
                if (!phi.has(v.x))
                    fail(ErrorKind::ObservationViolation, "t-var", sp,
                         v.x + " is not in observation " + to_string(phi));
                return qt(b->type.ty, Qualifier::of({v.x}));
            },
            [&](const LocT& l) -> QType {
                const QType* cell = sigma_.find(CellId{l.l, l.off});
                if (!cell)
                    fail(ErrorKind::UnboundName, "t-loc", sp,
                         "no store typing for " + to_string(CellId{l.l, l.off}));
                if (!phi.has(l.l))
                    fail(ErrorKind::ObservationViolation, "t-loc", sp,
                         loc_name(l.l) + " is not in observation " + to_string(phi));
                if (cell->q.fresh) fail(ErrorKind::FreshnessViolation, "t-loc", sp, "fresh cell qualifier");
                return qt(ref_type(*cell), Qualifier::at(l.l));
            },
            [&](const RefNew& r) -> QType {
                QType inner;
                if (want_ref) {
                    sub_check(0, env, phi, r.init, want_ref->inner, "t-ref");
                    inner = want_ref->inner;
                } else {
                    inner = sub(0, env, phi, r.init);
                }
                if (inner.q.fresh)
                    fail(ErrorKind::FreshnessViolation, "t-ref", sp,
                         "referent " + to_string(inner) + " is fresh");
                record(inner);
                return qt(ref_type(inner), Qualifier::diamond());
            },
            [&](const RefAt& r) -> QType {
                QType proxy = sub(1, env, phi, r.proxy);
                if (!as<TRef>(expose(env, proxy.ty)))
                    fail(ErrorKind::ShapeMismatch, "t-refat", sp, "proxy is not a reference: " + to_string(proxy));
                if (proxy.q.fresh)
                    fail(ErrorKind::FreshnessViolation, "t-refat", sp,
                         "proxy qualifier " + to_string(proxy.q) + " is fresh");
                Observation phi1 = phi.minus_locs(local_locations(r.proxy));
                QType inner;
                if (want_ref) {
                    sub_check(0, env, phi1, r.init, want_ref->inner, "t-refat");
                    inner = want_ref->inner;
                } else {
                    inner = sub(0, env, phi1, r.init);
                }
                if (inner.q.fresh)
                    fail(ErrorKind::FreshnessViolation, "t-refat", sp,
                         "referent " + to_string(inner) + " is fresh");
                require_separate(local_locations(r.init), proxy.q, "t-refat", sp, "referent");
                record(inner);
                return qt(ref_type(inner), proxy.q);
            },
            [&](const Deref& d) -> QType {
                QType ref = sub(0, env, phi, d.ref);
                const auto* rt = as<TRef>(expose(env, ref.ty));
                if (!rt) fail(ErrorKind::ShapeMismatch, "t-deref", sp, "not a reference: " + to_string(ref));
                const Qualifier& p = rt->inner.q;
                if (p.fresh) fail(ErrorKind::FreshnessViolation, "t-deref", sp, "fresh referent qualifier");
                if (!phi.covers(p))
                    fail(ErrorKind::ObservationViolation, "t-deref", sp,
                         "referent qualifier " + to_string(p) + " exceeds observation " + to_string(phi));
                require_separate(local_locations(d.ref), p, "t-deref", sp, "dereferenced term");
                return rt->inner;
            },
            [&](const Assign& a) -> QType {
                QType ref = sub(0, env, phi, a.ref);
                const auto* rt = as<TRef>(expose(env, ref.ty));
                if (!rt) fail(ErrorKind::ShapeMismatch, "t-assgn", sp, "not a reference: " + to_string(ref));
                if (rt->inner.q.fresh) fail(ErrorKind::FreshnessViolation, "t-assgn", sp, "fresh referent qualifier");
                Observation phi2 = phi.minus_locs(local_locations(a.ref));
                sub_check(1, env, phi2, a.rhs, rt->inner, "t-assgn");
                require_separate(local_locations(a.rhs), ref.q, "t-assgn", sp, "assigned term");
                return qt(unit_type());
            },
            [&](const Abs& a0) -> QType {
                Abs a = freshen(env, a0);
                require_scoped(env, a.dom, {}, "t-abs", sp);
                require_scoped(env, a.cod, {a.f, a.x}, "t-abs", sp);
                for (const auto& v : a.cap.vars)
                    if (!env.declared(v)) fail(ErrorKind::UnboundName, "t-abs", sp, "capture mentions unbound " + v);
                if (a.cap.fresh) fail(ErrorKind::FreshnessViolation, "t-abs", sp, "capture set carries *");
                if (!phi.covers(a.cap))
                    fail(ErrorKind::ObservationViolation, "t-abs", sp,
                         "capture " + to_string(a.cap) + " exceeds observation " + to_string(phi));
                require_separate(local_locations(a.body), a.cap, "t-abs", sp, "body");
                QType F = qt(fun_type(a.f, a.x, a.dom, a.cod), a.cap);
                TypingEnv inner = env.with_term(a.f, F).with_term(a.x, a.dom);
                Observation obs = Observation::of(a.cap).plus(a.f).plus(a.x);
                sub_check(0, inner, obs, a.body, a.cod, "t-abs");
                return F;
            },
            [&](const TAbs& a0) -> QType {
                TAbs a = freshen(env, a0);
                require_scoped(env, a.bound, {}, "t-tabs", sp);
                require_scoped(env, a.cod, {a.f, a.x, a.X}, "t-tabs", sp);
                for (const auto& v : a.cap.vars)
                    if (!env.declared(v)) fail(ErrorKind::UnboundName, "t-tabs", sp, "capture mentions unbound " + v);
                if (a.cap.fresh) fail(ErrorKind::FreshnessViolation, "t-tabs", sp, "capture set carries *");
                if (!phi.covers(a.cap))
                    fail(ErrorKind::ObservationViolation, "t-tabs", sp,
                         "capture " + to_string(a.cap) + " exceeds observation " + to_string(phi));
                require_separate(local_locations(a.body), a.cap, "t-tabs", sp, "body");
                QType F = qt(all_type(a.f, a.X, a.x, a.bound, a.cod), a.cap);
                TypingEnv inner = env.with_term(a.f, F).with_type(a.X, a.x, a.bound);
                Observation obs = Observation::of(a.cap).plus(a.f).plus(a.x);
                sub_check(0, inner, obs, a.body, a.cod, "t-tabs");
                return F;
            },
            [&](const App& a) -> QType {
                QType fn = sub(0, env, phi, a.fn);
                TypeP exposed = expose(env, fn.ty);
                const auto* ft = as<TFun>(exposed);
                if (!ft) fail(ErrorKind::ShapeMismatch, "t-app", sp, "not a function: " + to_string(fn));
                Observation phi2 = phi.minus_locs(local_locations(a.fn));
                QType arg = sub_expect(1, env, phi2, a.arg, ft->dom.ty, "t-app");
                return apply_rule(env, phi, qt(exposed, fn.q), arg, local_locations(a.fn),
                                  local_locations(a.arg), sp);
            },
            [&](const TApp& a) -> QType {
                QType fn = sub(0, env, phi, a.fn);
                TypeP exposed = expose(env, fn.ty);
                if (!as<TAll>(exposed))
                    fail(ErrorKind::ShapeMismatch, "t-tapp", sp, "not a type abstraction: " + to_string(fn));
                require_scoped(env, a.arg, {}, "t-tapp", sp);
                return tapply_rule(env, phi, qt(exposed, fn.q), a.arg, local_locations(a.fn), sp);
            },
            [&](const WithR& w0) -> QType {
                WithR w = freshen(env, w0);
                QType init = sub(0, env, phi, w.init);
                if (init.q.fresh)
                    fail(ErrorKind::FreshnessViolation, "t-refin", sp,
                         "scoped referent " + to_string(init) + " is fresh");
                record(init);
                TypingEnv inner = env.with_term(w.x, qt(ref_type(init), Qualifier::diamond()));
                Observation obs = phi.minus_locs(local_locations(w.init)).plus(w.x);
                QType body = want ? sub_expect(1, inner, obs, w.body, want, rule) : sub(1, inner, obs, w.body);
                if (free_vars(body).count(w.x))
                    fail(ErrorKind::EscapeViolation, "t-refin", sp,
                         "scoped reference " + w.x + " escapes in " + to_string(body));
                return body;
            },
            [&](const WithC& w) -> QType {
                QType body = want ? sub_expect(0, env, phi, w.body, want, rule) : sub(0, env, phi, w.body);
                if (body.q.has(w.l))
                    fail(ErrorKind::LocalLocationViolation, "t-locin", sp,
                         loc_name(w.l) + " escapes its scope in " + to_string(body));
                return body;
            },
            [&](const Prim& p) -> QType {
                expect_int(0, env, phi, p.lhs, "t-prim");
                expect_int(1, env, phi.minus_locs(local_locations(p.lhs)), p.rhs, "t-prim");
                return qt(int_type());
            },
            [&](const IfZero& z) -> QType {
                expect_int(0, env, phi, z.cond, "t-ifz");
                Observation phi2 = phi.minus_locs(local_locations(z.cond));
                QType a = want ? sub_expect(1, env, phi2, z.then_, want, rule) : sub(1, env, phi2, z.then_);
                QType b = want ? sub_expect(2, env, phi2, z.else_, want, rule) : sub(2, env, phi2, z.else_);
                TypeP joined;
                if (type_sub(env, a.ty, b.ty)) {
                    joined = b.ty;
                } else if (type_sub(env, b.ty, a.ty)) {
                    joined = a.ty;
                } else {
                    fail(ErrorKind::ShapeMismatch, "t-ifz", sp,
                         "branches disagree: " + to_string(a) + " vs " + to_string(b));
                }
                Qualifier q = a.q | b.q;
                require_separate(local_locations(z.cond), q, "t-ifz", sp, "condition");
                return qt(joined, q);
            },
        },
        t->node);
}

}  // namespace

QType apply_rule(const TypingEnv& env, const Observation& phi, const QType& fun_type_q, const QType& arg,
                 const std::set<Loc>& lc_fn, const std::set<Loc>& lc_arg, Span sp) {
    const auto* ft = as<TFun>(fun_type_q.ty);
    if (!ft) fail(ErrorKind::ShapeMismatch, "t-app", sp, "not a function: " + to_string(fun_type_q));
    const Qualifier& q = fun_type_q.q;
    const Qualifier& w = ft->dom.q;
    const Qualifier& p = arg.q;
    const QType& cod = ft->cod;
    const bool growing = w.fresh;
    const char* rule = growing ? "t-app*" : "t-app";

    if (free_vars(cod.ty).count(ft->self))
        fail(ErrorKind::DependencyViolation, rule, sp, "codomain type depends on self " + ft->self);
    if (!phi.covers(plain(cod.q).without(ft->self).without(ft->param)))
        fail(ErrorKind::ObservationViolation, rule, sp,
             "codomain qualifier " + to_string(cod.q) + " exceeds observation " + to_string(phi));

    Qualifier fn_sep = cod.q;
    if (!growing) {
        if (p.fresh)
            fail(ErrorKind::FreshnessViolation, rule, sp,
                 "fresh argument " + to_string(p) + " for non-fresh domain " + to_string(w));
        if (!qual_sub(env, p, w))
            fail(ErrorKind::SubsumptionFailure, rule, sp,
                 "argument qualifier " + to_string(p) + " is not within domain " + to_string(w));
    } else if (p.fresh || !qual_sub(env, p, w)) {
        Qualifier ov = overlap(env, p, q);
        if (!qual_sub(env, ov, w))
            fail(ErrorKind::OverlapViolation, rule, sp,
                 "overlap " + to_string(ov) + " of argument " + to_string(p) + " and function " +
                     to_string(q) + " exceeds " + to_string(w));
        if (p.fresh && free_vars(cod.ty).count(ft->param))
            fail(ErrorKind::DependencyViolation, rule, sp,
                 "codomain type depends on " + ft->param + " but the argument is fresh");
        fn_sep = fn_sep | ov;
    }
    require_separate(lc_arg, q | cod.q, rule, sp, "argument");
    require_separate(lc_fn, fn_sep, rule, sp, "function");

    TypeSubst s;
    s.quals[ft->param] = p;
    s.quals[ft->self] = q;
    return subst(cod, s);
}

QType tapply_rule(const TypingEnv& env, const Observation& phi, const QType& univ, const QType& arg,
                  const std::set<Loc>& lc_fn, Span sp) {
    const auto* at = as<TAll>(univ.ty);
    if (!at) fail(ErrorKind::ShapeMismatch, "t-tapp", sp, "not a type abstraction: " + to_string(univ));
    const Qualifier& q = univ.q;
    const Qualifier& w = at->bound.q;
    const Qualifier& s = arg.q;
    const QType& cod = at->cod;
    const bool growing = w.fresh;
    const char* rule = growing ? "t-tapp*" : "t-tapp";

    if (!phi.covers(plain(s)))
        fail(ErrorKind::ObservationViolation, rule, sp,
             "instance qualifier " + to_string(s) + " exceeds observation " + to_string(phi));
    if (!type_sub(env, arg.ty, at->bound.ty))
        fail(ErrorKind::BoundViolation, rule, sp,
             to_string(arg.ty) + " is not a subtype of bound " + to_string(at->bound.ty));
    if (free_vars(cod.ty).count(at->self))
        fail(ErrorKind::DependencyViolation, rule, sp, "codomain type depends on self " + at->self);
    if (!phi.covers(plain(cod.q).without(at->self).without(at->qvar)))
        fail(ErrorKind::ObservationViolation, rule, sp,
             "codomain qualifier " + to_string(cod.q) + " exceeds observation " + to_string(phi));

    Qualifier sep = cod.q | plain(s);
    if (!growing) {
        if (s.fresh) fail(ErrorKind::FreshnessViolation, rule, sp, "fresh instance for non-fresh bound");
        if (!qual_sub(env, s, w))
            fail(ErrorKind::BoundViolation, rule, sp,
                 "instance qualifier " + to_string(s) + " is not within bound " + to_string(w));
    } else if (s.fresh || !qual_sub(env, s, w)) {
        Qualifier ov = overlap(env, s, q);
        if (!qual_sub(env, ov, w))
            fail(ErrorKind::OverlapViolation, rule, sp,
                 "overlap " + to_string(ov) + " exceeds bound " + to_string(w));
        if (s.fresh && free_vars(cod.ty).count(at->qvar))
            fail(ErrorKind::DependencyViolation, rule, sp,
                 "codomain type depends on " + at->qvar + " but the instance is fresh");
        sep = sep | ov;
    }
    require_separate(lc_fn, sep, rule, sp, "type abstraction");

    TypeSubst sub;
    sub.quals[at->qvar] = s;
    sub.quals[at->self] = q;
    sub.tvars[at->tvar] = arg.ty;
    return subst(cod, sub);
}

QType synthesize(const TypingEnv& env, const StoreTyping& sigma, const Observation& phi, const TermP& t,
                 RedexProbe* probe) {
    Checker c(sigma, probe);
    return c.synth(env, phi, t);
}

TypeReport check(const TypingEnv& env, const StoreTyping& sigma, const Observation& phi, const TermP& t,
                 const QType& expected, RedexProbe* probe) {
    TypeReport rep;
    try {
        Checker c(sigma, probe);
        c.check(env, phi, t, expected, "t-sub");
        rep.accepted = true;
        rep.result = expected;
    } catch (const TypeError& e) {
        rep.diagnostics.push_back({e.span, e.rule, e.kind, e.what()});
    }
    return rep;
}

TypeReport check_program(const TermP& t) {
    TypeReport rep;
    if (contains_runtime_forms(t)) {
        rep.diagnostics.push_back({t->span, "static", ErrorKind::LocalLocationViolation,
                                   "static programs may not contain store indices or scope eliminations"});
        return rep;
    }
    try {
        StoreTyping empty;
        rep.result = synthesize(TypingEnv{}, empty, Observation{}, t);
        rep.accepted = true;
    } catch (const TypeError& e) {
        rep.diagnostics.push_back({e.span, e.rule, e.kind, e.what()});
    }
    return rep;
}

}  // namespace arena
