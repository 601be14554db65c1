#include "arena/dynamics.hpp"

#include <sstream>

namespace arena {

const char* to_string(Event e) {
    switch (e) {
        case Event::Beta: return "beta";
        case Event::BetaT: return "betaT";
        case Event::Ref: return "ref";
        case Event::RefAt: return "refat";
        case Event::Deref: return "deref";
        case Event::Assign: return "assign";
        case Event::With: return "with";
        case Event::Close: return "close";
        case Event::Prim: return "prim";
        case Event::IfZero: return "ifz";
    }
    return "?";
}

const char* to_string(StuckReason r) {
    switch (r) {
        case StuckReason::UseAfterFree: return "UseAfterFree";
        case StuckReason::UnboundCell: return "UnboundCell";
        case StuckReason::NotAFunction: return "NotAFunction";
        case StuckReason::NotARef: return "NotARef";
        case StuckReason::FreeVariable: return "FreeVariable";
        case StuckReason::NotAnInt: return "NotAnInt";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// store

CellId Store::alloc_fresh(TermP v) {
    CellId c{next_loc_++, 0};
    next_off_[c.l] = 1;
    cells_[c] = std::move(v);
    return c;
}

CellId Store::alloc_at(Loc l, TermP v) {
    CellId c{l, next_off_[l]++};
    cells_[c] = std::move(v);
    return c;
}

Store::Status Store::status(CellId c) const {
    auto it = cells_.find(c);
    if (it == cells_.end()) return Status::Absent;
    return it->second ? Status::Live : Status::Killed;
}

TermP Store::read(CellId c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? nullptr : it->second;
}

void Store::write(CellId c, TermP v) { cells_.at(c) = std::move(v); }

void Store::kill(Loc l) {
    for (auto it = cells_.lower_bound(CellId{l, 0}); it != cells_.end() && it->first.l == l; ++it)
        it->second = nullptr;
}

void Store::set_cell(CellId c, TermP v) {
    cells_[c] = std::move(v);
    if (next_loc_ <= c.l) next_loc_ = c.l + 1;
    if (next_off_[c.l] <= c.off) next_off_[c.l] = c.off + 1;
}

std::size_t Store::live_count() const {
    std::size_t n = 0;
    for (const auto& [c, v] : cells_) n += v != nullptr;
    return n;
}

std::set<Loc> Store::locations() const {
    std::set<Loc> out;
    for (const auto& [c, v] : cells_) out.insert(c.l);
    return out;
}

std::set<Loc> Store::live_locations() const {
    std::set<Loc> out;
    for (const auto& [c, v] : cells_)
        if (v) out.insert(c.l);
    return out;
}

std::set<Loc> Store::killed_locations() const {
    std::set<Loc> out;
    for (const auto& [c, v] : cells_)
        if (!v) out.insert(c.l);
    return out;
}

std::vector<CellId> Store::column(Loc l) const {
    std::vector<CellId> out;
    for (auto it = cells_.lower_bound(CellId{l, 0}); it != cells_.end() && it->first.l == l; ++it)
        out.push_back(it->first);
    return out;
}

bool Store::columns_uniform() const {
    std::map<Loc, std::pair<bool, bool>> seen;  // live?, killed?
    for (const auto& [c, v] : cells_) {
        auto& s = seen[c.l];
        (v ? s.first : s.second) = true;
    }
    for (const auto& [l, s] : seen)
        if (s.first && s.second) return false;
    return true;
}

// ---------------------------------------------------------------------------
// reduction

namespace {

struct Stuck {
    StuckReason reason;
    std::string detail;
};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

class Stepper {
public:
    Stepper(Store& s, const StepOptions& o, StepResult& r) : store_(s), opts_(o), res_(r) {}

    // Returns the reduct, or null when t is a value.
    TermP go(const TermP& t) {
        if (is_value(t)) return nullptr;
        const Span sp = t->span;
        return std::visit(
            overloaded{
                [&](const Var& v) -> TermP { throw Stuck{StuckReason::FreeVariable, "free variable " + v.x}; },
                [&](const App& a) -> TermP {
                    if (auto fn = sub(0, a.fn)) return mk(App{fn, a.arg}, sp);
                    if (auto arg = sub(1, a.arg)) return mk(App{a.fn, arg}, sp);
                    const auto* lam = as<Abs>(a.fn);
                    if (!lam) throw Stuck{StuckReason::NotAFunction, print_term(a.fn) + " is not a function"};
                    redex(t, Event::Beta);
                    TermSubst s;
                    s.vals[lam->x] = a.arg;
                    s.types.quals[lam->x] = value_qualifier(a.arg);
                    s.vals[lam->f] = a.fn;
                    s.types.quals[lam->f] = value_qualifier(a.fn);
                    return subst_term(lam->body, s);
                },
                [&](const TApp& a) -> TermP {
                    if (auto fn = sub(0, a.fn)) return mk(TApp{fn, a.arg}, sp);
                    const auto* lam = as<TAbs>(a.fn);
                    if (!lam)
                        throw Stuck{StuckReason::NotAFunction, print_term(a.fn) + " is not a type abstraction"};
                    redex(t, Event::BetaT);
                    TermSubst s;
                    s.vals[lam->f] = a.fn;
                    s.types.quals[lam->f] = value_qualifier(a.fn);
                    s.types.quals[lam->x] = a.arg.q;
                    s.types.tvars[lam->X] = a.arg.ty;
                    return subst_term(lam->body, s);
                },
                [&](const RefNew& r) -> TermP {
                    if (auto init = sub(0, r.init)) return mk(RefNew{init}, sp);
                    redex(t, Event::Ref);
                    CellId c = store_.alloc_fresh(r.init);
                    res_.allocated = c;
                    return mk(LocT{c.l, c.off}, sp);
                },
                [&](const RefAt& r) -> TermP {
                    if (auto proxy = sub(1, r.proxy)) return mk(RefAt{r.init, proxy}, sp);
                    if (auto init = sub(0, r.init)) return mk(RefAt{init, r.proxy}, sp);
                    CellId p = cell(r.proxy);
                    redex(t, Event::RefAt);
                    CellId c = store_.alloc_at(p.l, r.init);
                    res_.allocated = c;
                    return mk(LocT{c.l, c.off}, sp);
                },
                [&](const Deref& d) -> TermP {
                    if (auto ref = sub(0, d.ref)) return mk(Deref{ref}, sp);
                    CellId c = cell(d.ref);
                    redex(t, Event::Deref);
                    return store_.read(c);
                },
                [&](const Assign& a) -> TermP {
                    if (auto ref = sub(0, a.ref)) return mk(Assign{ref, a.rhs}, sp);
                    if (auto rhs = sub(1, a.rhs)) return mk(Assign{a.ref, rhs}, sp);
                    CellId c = cell(a.ref);
                    redex(t, Event::Assign);
                    store_.write(c, a.rhs);
                    return unit_lit(sp);
                },
                [&](const WithR& w) -> TermP {
                    if (auto init = sub(0, w.init)) return mk(WithR{w.x, init, w.body}, sp);
                    redex(t, Event::With);
                    CellId c = store_.alloc_fresh(w.init);
                    res_.allocated = c;
                    TermP body = subst_term(w.body, value_subst(w.x, mk(LocT{c.l, c.off}, sp)));
                    return mk(WithC{c.l, body}, sp);
                },
                [&](const WithC& w) -> TermP {
                    if (auto body = sub(0, w.body)) return mk(WithC{w.l, body}, sp);
                    redex(t, Event::Close);
                    if (!opts_.skip_bulk_kill) store_.kill(w.l);
                    res_.killed = w.l;
                    return w.body;
                },
                [&](const Prim& p) -> TermP {
                    if (auto lhs = sub(0, p.lhs)) return mk(Prim{p.op, lhs, p.rhs}, sp);
                    if (auto rhs = sub(1, p.rhs)) return mk(Prim{p.op, p.lhs, rhs}, sp);
                    std::int64_t a = int_of(p.lhs), b = int_of(p.rhs);
                    redex(t, Event::Prim);
                    std::int64_t v = p.op == PrimOp::Add ? a + b : p.op == PrimOp::Sub ? a - b : a * b;
                    return int_lit(v, sp);
                },
                [&](const IfZero& z) -> TermP {
                    if (auto c = sub(0, z.cond)) return mk(IfZero{c, z.then_, z.else_}, sp);
                    std::int64_t v = int_of(z.cond);
                    redex(t, Event::IfZero);
                    return v == 0 ? z.then_ : z.else_;
                },
                [&](const auto&) -> TermP { return nullptr; },
            },
            t->node);
    }

    std::vector<int> path;

private:
    TermP sub(int i, const TermP& t) {
        path.push_back(i);
        TermP r = go(t);
        if (!r) path.pop_back();
        return r;
    }

    void redex(const TermP& t, Event e) {
        res_.event = e;
        res_.redex = print_term(t);
        res_.redex_path = path;
    }

    CellId cell(const TermP& v) {
        const auto* l = as<LocT>(v);
        if (!l) throw Stuck{StuckReason::NotARef, print_term(v) + " is not a store index"};
        CellId c{l->l, l->off};
        switch (store_.status(c)) {
            case Store::Status::Killed: throw Stuck{StuckReason::UseAfterFree, to_string(c) + " was deallocated"};
            case Store::Status::Absent: throw Stuck{StuckReason::UnboundCell, to_string(c) + " is not allocated"};
            case Store::Status::Live: break;
        }
        return c;
    }

    static std::int64_t int_of(const TermP& v) {
        const auto* c = as<Const>(v);
        if (!c || c->kind != BaseKind::Int) throw Stuck{StuckReason::NotAnInt, print_term(v) + " is not an integer"};
        return c->value;
    }

    Store& store_;
    const StepOptions& opts_;
    StepResult& res_;
};

}  // namespace

StepResult step(const TermP& t, Store& store, const StepOptions& opts) {
    StepResult r;
    Stepper s(store, opts, r);
    try {
        TermP next = s.go(t);
        if (!next) {
            r.kind = StepResult::Kind::Value;
            r.term = t;
            return r;
        }
        r.kind = StepResult::Kind::Stepped;
        r.term = next;
    } catch (const Stuck& e) {
        r.kind = StepResult::Kind::Stuck;
        r.term = t;
        r.reason = e.reason;
        r.detail = e.detail;
        r.redex_path = s.path;
    }
    return r;
}

std::string store_delta(const StepResult& r, const Store& after) {
    std::ostringstream os;
    os << "Δ";
    bool any = false;
    if (r.allocated) {
        os << '+' << to_string(*r.allocated);
        any = true;
    }
    if (r.killed) {
        for (CellId c : after.column(*r.killed)) {
            if (after.status(c) != Store::Status::Killed) continue;
            os << (any ? " " : "") << '-' << to_string(c);
            any = true;
        }
    }
    if (!any) os << "∅";
    return os.str();
}

EvalResult eval(const TermP& t, const EvalOptions& opts) {
    EvalResult out;
    out.term = t;
    while (true) {
        if (out.steps >= opts.fuel) {
            out.outcome = is_value(out.term) ? EvalResult::Outcome::Value : EvalResult::Outcome::FuelExhausted;
            return out;
        }
        StepResult r = step(out.term, out.store, opts.step);
        if (r.kind == StepResult::Kind::Value) {
            out.outcome = EvalResult::Outcome::Value;
            return out;
        }
        if (r.kind == StepResult::Kind::Stuck) {
            out.outcome = EvalResult::Outcome::Stuck;
            out.reason = r.reason;
            out.detail = r.detail;
            return out;
        }
        ++out.steps;
        if (r.killed) {
            ++out.closes;
            for (CellId c : out.store.column(*r.killed))
                if (out.store.status(c) != Store::Status::Killed) {
                    ++out.partial_closes;
                    break;
                }
        }
        if (opts.trace) out.trace.push_back({r.event, r.redex, store_delta(r, out.store)});
        out.term = r.term;
    }
}

std::vector<std::string> EvalResult::trace_lines() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::ostringstream os;
        os << "STEP " << (i + 1) << " RULE " << to_string(trace[i].event) << " REDEX " << trace[i].redex
           << " STORE " << trace[i].delta;
        out.push_back(os.str());
    }
    return out;
}

std::string EvalResult::store_line() const {
    return "STORE " + std::to_string(store.live_count()) + "/" + std::to_string(store.total_count());
}

}  // namespace arena
