#include "arena/term.hpp"

#include <sstream>
#include <stdexcept>

namespace arena {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

TermP int_lit(std::int64_t v, Span s) { return mk(Const{BaseKind::Int, v}, s); }
TermP bool_lit(bool v, Span s) { return mk(Const{BaseKind::Bool, v ? 1 : 0}, s); }
TermP unit_lit(Span s) { return mk(Const{BaseKind::Unit, 0}, s); }
TermP var(Name x, Span s) { return mk(Var{std::move(x)}, s); }

bool is_value(const TermP& t) {
    return as<Const>(t) || as<Abs>(t) || as<TAbs>(t) || as<LocT>(t);
}

Qualifier value_qualifier(const TermP& v) {
    if (const auto* a = as<Abs>(v)) return a->cap;
    if (const auto* a = as<TAbs>(v)) return a->cap;
    if (const auto* l = as<LocT>(v)) return Qualifier::at(l->l);
    return {};
}

// ---------------------------------------------------------------------------
// LC and WT

namespace {

void lc(const TermP& t, std::set<Loc>& out) {
    if (!t) return;
    std::visit(overloaded{
                   [](const Const&) {},
                   [](const Var&) {},
                   [](const LocT&) {},
                   [&](const Abs& a) { lc(a.body, out); },
                   [&](const TAbs& a) { lc(a.body, out); },
                   [&](const App& a) {
                       lc(a.fn, out);
                       lc(a.arg, out);
                   },
                   [&](const RefNew& a) { lc(a.init, out); },
                   [&](const RefAt& a) {
                       lc(a.init, out);
                       lc(a.proxy, out);
                   },
                   [&](const Deref& a) { lc(a.ref, out); },
                   [&](const Assign& a) {
                       lc(a.ref, out);
                       lc(a.rhs, out);
                   },
                   [&](const TApp& a) { lc(a.fn, out); },
                   [&](const WithR& a) {
                       lc(a.init, out);
                       lc(a.body, out);
                   },
                   [&](const WithC& a) {
                       out.insert(a.l);
                       lc(a.body, out);
                   },
                   [&](const Prim& a) {
                       lc(a.lhs, out);
                       lc(a.rhs, out);
                   },
                   [&](const IfZero& a) {
                       lc(a.cond, out);
                       lc(a.then_, out);
                       lc(a.else_, out);
                   },
               },
               t->node);
}

bool no_lc(const TermP& t) { return local_locations(t).empty(); }

}  // namespace

std::set<Loc> local_locations(const TermP& t) {
    std::set<Loc> out;
    lc(t, out);
    return out;
}

bool well_stepped(const TermP& t) {
    if (!t) return false;
    return std::visit(
        overloaded{
            [](const Const&) { return true; },
            [](const Var&) { return true; },
            [](const LocT&) { return true; },
            [&](const Abs& a) { return no_lc(a.body); },
            [&](const TAbs& a) { return no_lc(a.body); },
            [&](const App& a) {
                return well_stepped(a.fn) && well_stepped(a.arg) && (is_value(a.fn) || no_lc(a.arg));
            },
            [&](const RefNew& a) { return well_stepped(a.init); },
            [&](const RefAt& a) {
                return well_stepped(a.init) && well_stepped(a.proxy) &&
                       (no_lc(a.init) || is_value(a.proxy));
            },
            [&](const Deref& a) { return well_stepped(a.ref); },
            [&](const Assign& a) {
                return well_stepped(a.ref) && well_stepped(a.rhs) && (is_value(a.ref) || no_lc(a.rhs));
            },
            [&](const TApp& a) { return well_stepped(a.fn); },
            [&](const WithR& a) { return well_stepped(a.init) && well_stepped(a.body) && no_lc(a.body); },
            [&](const WithC& a) { return well_stepped(a.body); },
            [&](const Prim& a) {
                return well_stepped(a.lhs) && well_stepped(a.rhs) && (is_value(a.lhs) || no_lc(a.rhs));
            },
            [&](const IfZero& a) {
                return well_stepped(a.cond) && no_lc(a.then_) && no_lc(a.else_) &&
                       well_stepped(a.then_) && well_stepped(a.else_);
            },
        },
        t->node);
}

// ---------------------------------------------------------------------------
// free variables

namespace {

void fv(const TermP& t, std::set<Name> bound, std::set<Name>& out) {
    if (!t) return;
    std::visit(overloaded{
                   [](const Const&) {},
                   [](const LocT&) {},
                   [&](const Var& v) {
                       if (!bound.count(v.x)) out.insert(v.x);
                   },
                   [&](const Abs& a) {
                       bound.insert(a.f);
                       bound.insert(a.x);
                       fv(a.body, bound, out);
                   },
                   [&](const TAbs& a) {
                       bound.insert(a.f);
                       bound.insert(a.x);
                       fv(a.body, bound, out);
                   },
                   [&](const App& a) {
                       fv(a.fn, bound, out);
                       fv(a.arg, bound, out);
                   },
                   [&](const RefNew& a) { fv(a.init, bound, out); },
                   [&](const RefAt& a) {
                       fv(a.init, bound, out);
                       fv(a.proxy, bound, out);
                   },
                   [&](const Deref& a) { fv(a.ref, bound, out); },
                   [&](const Assign& a) {
                       fv(a.ref, bound, out);
                       fv(a.rhs, bound, out);
                   },
                   [&](const TApp& a) { fv(a.fn, bound, out); },
                   [&](const WithR& a) {
                       fv(a.init, bound, out);
                       bound.insert(a.x);
                       fv(a.body, bound, out);
                   },
                   [&](const WithC& a) { fv(a.body, bound, out); },
                   [&](const Prim& a) {
                       fv(a.lhs, bound, out);
                       fv(a.rhs, bound, out);
                   },
                   [&](const IfZero& a) {
                       fv(a.cond, bound, out);
                       fv(a.then_, bound, out);
                       fv(a.else_, bound, out);
                   },
               },
               t->node);
}

bool runtime_forms(const TermP& t) {
    if (!t) return false;
    return std::visit(overloaded{
                          [](const Const&) { return false; },
                          [](const Var&) { return false; },
                          [](const LocT&) { return true; },
                          [](const WithC&) { return true; },
                          [](const Abs& a) { return runtime_forms(a.body); },
                          [](const TAbs& a) { return runtime_forms(a.body); },
                          [](const App& a) { return runtime_forms(a.fn) || runtime_forms(a.arg); },
                          [](const RefNew& a) { return runtime_forms(a.init); },
                          [](const RefAt& a) { return runtime_forms(a.init) || runtime_forms(a.proxy); },
                          [](const Deref& a) { return runtime_forms(a.ref); },
                          [](const Assign& a) { return runtime_forms(a.ref) || runtime_forms(a.rhs); },
                          [](const TApp& a) { return runtime_forms(a.fn); },
                          [](const WithR& a) { return runtime_forms(a.init) || runtime_forms(a.body); },
                          [](const Prim& a) { return runtime_forms(a.lhs) || runtime_forms(a.rhs); },
                          [](const IfZero& a) {
                              return runtime_forms(a.cond) || runtime_forms(a.then_) ||
                                     runtime_forms(a.else_);
                          },
                      },
                      t->node);
}

}  // namespace

std::set<Name> free_term_vars(const TermP& t) {
    std::set<Name> out;
    fv(t, {}, out);
    return out;
}

bool contains_runtime_forms(const TermP& t) { return runtime_forms(t); }

// ---------------------------------------------------------------------------
// substitution

namespace {

TermSubst shadow(const TermSubst& s, std::initializer_list<const Name*> qnames, const Name* tname = nullptr) {
    TermSubst r = s;
    for (const Name* n : qnames) {
        r.vals.erase(*n);
        r.types.quals.erase(*n);
    }
    if (tname) r.types.tvars.erase(*tname);
    return r;
}

}  // namespace

TermP subst_term(const TermP& t, const TermSubst& s) {
    if (!t || (s.vals.empty() && s.types.empty())) return t;
    const Span sp = t->span;
    return std::visit(
        overloaded{
            [&](const Const&) { return t; },
            [&](const LocT&) { return t; },
            [&](const Var& v) -> TermP {
                auto it = s.vals.find(v.x);
                return it == s.vals.end() ? t : it->second;
            },
            [&](const Abs& a) {
                TermSubst inner = shadow(s, {&a.f, &a.x});
                QType dom = a.dom.ty ? subst(a.dom, s.types) : a.dom;
                QType cod = a.cod.ty ? subst(a.cod, inner.types) : a.cod;
                return mk(Abs{a.f, a.x, dom, cod, subst(a.cap, s.types), subst_term(a.body, inner)}, sp);
            },
            [&](const TAbs& a) {
                TermSubst inner = shadow(s, {&a.f, &a.x}, &a.X);
                return mk(TAbs{a.f, a.X, a.x, subst(a.bound, s.types), subst(a.cod, inner.types),
                               subst(a.cap, s.types), subst_term(a.body, inner)},
                          sp);
            },
            [&](const App& a) { return mk(App{subst_term(a.fn, s), subst_term(a.arg, s)}, sp); },
            [&](const RefNew& a) { return mk(RefNew{subst_term(a.init, s)}, sp); },
            [&](const RefAt& a) { return mk(RefAt{subst_term(a.init, s), subst_term(a.proxy, s)}, sp); },
            [&](const Deref& a) { return mk(Deref{subst_term(a.ref, s)}, sp); },
            [&](const Assign& a) { return mk(Assign{subst_term(a.ref, s), subst_term(a.rhs, s)}, sp); },
            [&](const TApp& a) { return mk(TApp{subst_term(a.fn, s), subst(a.arg, s.types)}, sp); },
            [&](const WithR& a) {
                return mk(WithR{a.x, subst_term(a.init, s), subst_term(a.body, shadow(s, {&a.x}))}, sp);
            },
            [&](const WithC& a) { return mk(WithC{a.l, subst_term(a.body, s)}, sp); },
            [&](const Prim& a) { return mk(Prim{a.op, subst_term(a.lhs, s), subst_term(a.rhs, s)}, sp); },
            [&](const IfZero& a) {
                return mk(IfZero{subst_term(a.cond, s), subst_term(a.then_, s), subst_term(a.else_, s)}, sp);
            },
        },
        t->node);
}

TermSubst value_subst(const Name& x, const TermP& v) {
    TermSubst s;
    s.vals[x] = v;
    s.types.quals[x] = value_qualifier(v);
    return s;
}

// ---------------------------------------------------------------------------
// alpha equivalence

namespace {

struct Ren {
    std::map<Name, Name> m;  // right -> left
    Name get(const Name& n) const {
        auto it = m.find(n);
        return it == m.end() ? n : it->second;
    }
};

TypeSubst as_type_renaming(const Ren& r) {
    TypeSubst s;
    for (const auto& [from, to] : r.m) {
        s.quals[from] = Qualifier::of({to});
        s.tvars[from] = tvar_type(to);
    }
    return s;
}

bool qeq(const QType& a, const QType& b, const Ren& r) {
    if (!a.ty || !b.ty) return !a.ty && !b.ty && a.q == subst(b.q, as_type_renaming(r));
    return alpha_equal(a, subst(b, as_type_renaming(r)));
}

bool teq(const TermP& a, const TermP& b, const Ren& r) {
    if (!a || !b) return a == b;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const Const& x) {
                const auto& y = std::get<Const>(b->node);
                return x.kind == y.kind && x.value == y.value;
            },
            [&](const Var& x) { return x.x == r.get(std::get<Var>(b->node).x); },
            [&](const LocT& x) {
                const auto& y = std::get<LocT>(b->node);
                return x.l == y.l && x.off == y.off;
            },
            [&](const Abs& x) {
                const auto& y = std::get<Abs>(b->node);
                if (!qeq(x.dom, y.dom, r)) return false;
                if (!(x.cap == subst(y.cap, as_type_renaming(r)))) return false;
                Ren r2 = r;
                r2.m[y.f] = x.f;
                r2.m[y.x] = x.x;
                return qeq(x.cod, y.cod, r2) && teq(x.body, y.body, r2);
            },
            [&](const TAbs& x) {
                const auto& y = std::get<TAbs>(b->node);
                if (!qeq(x.bound, y.bound, r)) return false;
                if (!(x.cap == subst(y.cap, as_type_renaming(r)))) return false;
                Ren r2 = r;
                r2.m[y.f] = x.f;
                r2.m[y.x] = x.x;
                r2.m[y.X] = x.X;
                return qeq(x.cod, y.cod, r2) && teq(x.body, y.body, r2);
            },
            [&](const App& x) {
                const auto& y = std::get<App>(b->node);
                return teq(x.fn, y.fn, r) && teq(x.arg, y.arg, r);
            },
            [&](const RefNew& x) { return teq(x.init, std::get<RefNew>(b->node).init, r); },
            [&](const RefAt& x) {
                const auto& y = std::get<RefAt>(b->node);
                return teq(x.init, y.init, r) && teq(x.proxy, y.proxy, r);
            },
            [&](const Deref& x) { return teq(x.ref, std::get<Deref>(b->node).ref, r); },
            [&](const Assign& x) {
                const auto& y = std::get<Assign>(b->node);
                return teq(x.ref, y.ref, r) && teq(x.rhs, y.rhs, r);
            },
            [&](const TApp& x) {
                const auto& y = std::get<TApp>(b->node);
                return teq(x.fn, y.fn, r) && qeq(x.arg, y.arg, r);
            },
            [&](const WithR& x) {
                const auto& y = std::get<WithR>(b->node);
                if (!teq(x.init, y.init, r)) return false;
                Ren r2 = r;
                r2.m[y.x] = x.x;
                return teq(x.body, y.body, r2);
            },
            [&](const WithC& x) {
                const auto& y = std::get<WithC>(b->node);
                return x.l == y.l && teq(x.body, y.body, r);
            },
            [&](const Prim& x) {
                const auto& y = std::get<Prim>(b->node);
                return x.op == y.op && teq(x.lhs, y.lhs, r) && teq(x.rhs, y.rhs, r);
            },
            [&](const IfZero& x) {
                const auto& y = std::get<IfZero>(b->node);
                return teq(x.cond, y.cond, r) && teq(x.then_, y.then_, r) && teq(x.else_, y.else_, r);
            },
        },
        a->node);
}

}  // namespace

bool alpha_equal(const TermP& a, const TermP& b) { return teq(a, b, Ren{}); }

// ---------------------------------------------------------------------------
// printing

namespace {

bool atomic(const TermP& t) {
    return as<Const>(t) || as<Var>(t) || as<LocT>(t) || as<App>(t) || as<TApp>(t) ||
           as<WithC>(t) || as<RefNew>(t);
}

void print(std::ostream& os, const TermP& t);

void print_atom(std::ostream& os, const TermP& t) {
    bool neg = false;
    if (const auto* c = as<Const>(t)) neg = c->kind == BaseKind::Int && c->value < 0;
    if (atomic(t) && !neg) {
        print(os, t);
    } else {
        os << '(';
        print(os, t);
        os << ')';
    }
}

void print(std::ostream& os, const TermP& t) {
    if (!t) {
        os << "<null>";
        return;
    }
    std::visit(overloaded{
                   [&](const Const& c) {
                       switch (c.kind) {
                           case BaseKind::Int: os << c.value; break;
                           case BaseKind::Bool: os << (c.value ? "true" : "false"); break;
                           case BaseKind::Unit: os << "()"; break;
                       }
                   },
                   [&](const Var& v) { os << v.x; },
                   [&](const LocT& l) { os << loc_name(l.l) << "·" << l.off; },
                   [&](const Abs& a) {
                       os << "fun" << to_string(a.cap) << ' ' << a.f << '(' << a.x << ": "
                          << to_string(a.dom) << "): " << to_string(a.cod) << " => ";
                       print(os, a.body);
                   },
                   [&](const TAbs& a) {
                       os << "tfun" << to_string(a.cap) << ' ' << a.f << '[' << a.X << '^' << a.x
                          << " <: " << to_string(a.bound) << "]: " << to_string(a.cod) << " => ";
                       print(os, a.body);
                   },
                   [&](const App& a) {
                       print_atom(os, a.fn);
                       os << '(';
                       print(os, a.arg);
                       os << ')';
                   },
                   [&](const TApp& a) {
                       print_atom(os, a.fn);
                       os << '[' << to_string(a.arg) << ']';
                   },
                   [&](const RefNew& a) {
                       os << "new Ref(";
                       print(os, a.init);
                       os << ')';
                   },
                   [&](const RefAt& a) {
                       os << "new Ref(";
                       print(os, a.init);
                       os << ") at ";
                       print_atom(os, a.proxy);
                   },
                   [&](const Deref& a) {
                       os << '!';
                       print_atom(os, a.ref);
                   },
                   [&](const Assign& a) {
                       print_atom(os, a.ref);
                       os << " := ";
                       print_atom(os, a.rhs);
                   },
                   [&](const WithR& a) {
                       os << "with " << a.x << " = Ref(";
                       print(os, a.init);
                       os << ") in ";
                       print(os, a.body);
                   },
                   [&](const WithC& a) {
                       os << "with<" << loc_name(a.l) << ">{ ";
                       print(os, a.body);
                       os << " }";
                   },
                   [&](const Prim& a) {
                       print_atom(os, a.lhs);
                       os << (a.op == PrimOp::Add ? " + " : a.op == PrimOp::Sub ? " - " : " * ");
                       print_atom(os, a.rhs);
                   },
                   [&](const IfZero& a) {
                       os << "ifz ";
                       print_atom(os, a.cond);
                       os << " then ";
                       print_atom(os, a.then_);
                       os << " else ";
                       print_atom(os, a.else_);
                   },
               },
               t->node);
}

}  // namespace

std::string print_term(const TermP& t) {
    std::ostringstream os;
    print(os, t);
    return os.str();
}

}  // namespace arena
