#include "arena/meta.hpp"

#include <sstream>

namespace arena {

const char* to_string(EnvRule r) {
    switch (r) {
        case EnvRule::Base: return "eu-base";
        case EnvRule::Fresh: return "eu-fresh";
        case EnvRule::Kill: return "eu-kill";
    }
    return "?";
}

MachineEnv env_update(const MachineEnv& me, const TermP& before, const StepResult& r,
                      const std::optional<QType>& cell_type, EnvRule* rule) {
    if (r.kind != StepResult::Kind::Stepped) throw HarnessError("no step to classify");
    MachineEnv out = me;
    EnvRule used = EnvRule::Base;
    switch (r.event) {
        case Event::Ref:
        case Event::With:
        case Event::RefAt: {
            if (!r.allocated || !cell_type)
                throw HarnessError(std::string("allocation by ") + to_string(r.event) + " has no referent type");
            for (Loc l : cell_type->q.locs)
                if (me.kappa.count(l))
                    throw HarnessError("referent qualifier " + to_string(cell_type->q) + " meets killed " +
                                       loc_name(l));
            out.sigma.add(*r.allocated, *cell_type);
            if (r.event != Event::RefAt) {
                out.phi = out.phi.plus(r.allocated->l);
                used = EnvRule::Fresh;
            }
            break;
        }
        case Event::Close: {
            Loc l = *r.killed;
            if (!local_locations(before).count(l))
                throw HarnessError(loc_name(l) + " closed but not local to the pre-step term");
            out.phi = out.phi.minus_locs({l});
            out.kappa.insert(l);
            used = EnvRule::Kill;
            break;
        }
        default: break;
    }
    if (rule) *rule = used;
    return out;
}

namespace {

bool fail_with(std::string* why, const std::string& msg) {
    if (why) *why = msg;
    return false;
}

}  // namespace

bool store_wf(const StoreTyping& sigma, std::string* why) {
    std::set<Loc> prefix;
    for (const auto& [c, t] : sigma.entries()) {
        if (c.off > 0 && !prefix.count(c.l))
            return fail_with(why, to_string(c) + " recorded before " + loc_name(c.l) + "·0");
        if (t.q.fresh || !t.q.vars.empty())
            return fail_with(why, to_string(c) + " has non-location qualifier " + to_string(t.q));
        if (!free_vars(t).empty() || !free_tvars(t).empty())
            return fail_with(why, to_string(c) + " has open type " + to_string(t));
        for (Loc l : mentioned_locs(t))
            if (!prefix.count(l)) return fail_with(why, to_string(c) + " mentions unknown " + loc_name(l));
        prefix.insert(c.l);
    }
    return true;
}

bool store_typed(const MachineEnv& me, const Store& store, std::string* why) {
    std::set<Loc> live = store.live_locations();
    std::set<Loc> dom = me.sigma.locations();
    for (Loc l : me.phi.locs) {
        if (!live.count(l)) return fail_with(why, "observed " + loc_name(l) + " is not live");
        if (me.kappa.count(l)) return fail_with(why, "observed " + loc_name(l) + " was killed");
    }
    for (Loc l : live)
        if (!dom.count(l)) return fail_with(why, "live " + loc_name(l) + " has no store typing");
    for (Loc l : me.kappa)
        for (CellId c : store.column(l))
            if (store.status(c) != Store::Status::Killed)
                return fail_with(why, "killed column " + loc_name(l) + " still holds " + to_string(c));
    for (const auto& [c, t] : me.sigma.entries()) {
        if (!me.phi.has(c.l)) continue;
        TermP v = store.read(c);
        if (!v) return fail_with(why, "observed " + to_string(c) + " is dead");
        if (!well_stepped(v)) return fail_with(why, "stored value at " + to_string(c) + " is not well-stepped");
        if (!me.phi.covers(t.q)) continue;
        TypeReport rep = check(TypingEnv{}, me.sigma, me.phi, v, t);
        if (!rep.accepted)
            return fail_with(why, to_string(c) + " holds " + print_term(v) + " which is not a " + to_string(t) +
                                      ": " + rep.diagnostics.front().message);
    }
    return true;
}

// ---------------------------------------------------------------------------
// harnesses

namespace {

bool is_alloc(Event e) { return e == Event::Ref || e == Event::RefAt || e == Event::With; }

std::optional<QType> retype(const MachineEnv& me, const Observation& phi, const TermP& t, const QType& base,
                            const std::vector<Qualifier>& witnesses, std::string* why) {
    for (const auto& p : witnesses) {
        QType cand{base.ty, substitute_fresh(base.q, p)};
        TypeReport rep = check(TypingEnv{}, me.sigma, phi, t, cand);
        if (rep.accepted) return cand;
        if (why && why->empty()) *why = rep.diagnostics.front().rule + ": " + rep.diagnostics.front().message;
    }
    return std::nullopt;
}

}  // namespace

HarnessReport check_preservation(const TermP& program, const HarnessOptions& opts) {
    HarnessReport rep;
    TypeReport initial = check_program(program);
    if (!initial.accepted) {
        rep.ok = false;
        rep.failure = "program rejected: " + initial.verdict_line();
        return rep;
    }
    MachineEnv me;
    Store store;
    TermP t = program;
    QType T = *initial.result;
    std::size_t withs = 0, kills = 0;

    for (std::size_t n = 1;; ++n) {
        if (is_value(t)) {
            rep.reached_value = true;
            break;
        }
        if (n > opts.fuel) {
            rep.ok = false;
            rep.failure = "fuel exhausted";
            break;
        }
        StepResult r = step(t, store, opts.step);
        if (r.kind == StepResult::Kind::Stuck) {
            rep.ok = false;
            rep.stuck = true;
            rep.stuck_reason = r.reason;
            rep.uaf += r.reason == StuckReason::UseAfterFree;
            rep.failure = std::string("stuck: ") + to_string(r.reason) + " " + r.detail;
            break;
        }
        StepRecord rec;
        rec.n = n;
        rec.event = r.event;

        std::optional<QType> cell;
        if (is_alloc(r.event)) {
            RedexProbe probe{r.redex_path, std::nullopt};
            check(TypingEnv{}, me.sigma, me.phi, t, T, &probe);
            cell = probe.inner;
        }
        MachineEnv next;
        try {
            next = env_update(me, t, r, cell, &rec.eu);
        } catch (const HarnessError& e) {
            rec.wf = false;
            rec.preservation = false;
            rec.note = e.what();
            rep.steps.push_back(rec);
            rep.ok = false;
            rep.failure = e.what();
            break;
        }
        withs += r.event == Event::With;
        kills += rec.eu == EnvRule::Kill;
        if (is_alloc(r.event)) ++rep.alloc;
        if (r.killed) {
            ++rep.killed;
            for (CellId c : store.column(*r.killed))
                if (store.status(c) != Store::Status::Killed) {
                    ++rep.partial_closes;
                    break;
                }
        }

        std::string why;
        rec.wf = store_wf(next.sigma, &why) && store_typed(next, store, &why);
        if (rec.wf && !well_stepped(r.term)) {
            rec.wf = false;
            why = "reduct is not well-stepped";
        }

        std::vector<Qualifier> witnesses{Qualifier{}};
        if (rec.eu == EnvRule::Fresh) witnesses.push_back(Qualifier::at(r.allocated->l));
        std::string pwhy;
        auto retyped = retype(next, next.phi, r.term, T, witnesses, &pwhy);
        if (!retyped) {
            Observation wide = next.phi;
            for (Loc l : store.live_locations())
                if (!next.kappa.count(l)) wide = wide.plus(l);
            retyped = retype(next, wide, r.term, T, witnesses, nullptr);
            rec.wrong_witness = retyped.has_value();
            rec.preservation = false;
        }
        if (!rec.preservation) {
            rec.note = (rec.wrong_witness ? "wrong witness; " : "") + pwhy;
        } else if (!rec.wf) {
            rec.note = why;
        }
        if (!rec.preservation || !rec.wf) {
            rep.ok = false;
            if (rep.failure.empty())
                rep.failure = "step " + std::to_string(n) + " (" + to_string(r.event) + "): " + rec.note;
        }
        rep.steps.push_back(rec);
        me = next;
        t = r.term;
        if (retyped) T = *retyped;
    }

    if (rep.reached_value && rep.ok) {
        std::set<Loc> covered = me.phi.locs;
        covered.insert(me.kappa.begin(), me.kappa.end());
        if (covered != me.sigma.locations() || me.phi.locs.size() + me.kappa.size() != covered.size()) {
            rep.ok = false;
            rep.failure = "observation and killed set do not partition the allocated locations";
        } else if (withs != kills) {
            rep.ok = false;
            rep.failure = "scope introductions and kills differ";
        }
    }
    rep.final_env = me;
    rep.final_store = store;
    rep.final_term = t;
    return rep;
}

HarnessReport check_progress(const TermP& program, const HarnessOptions& opts) {
    HarnessReport rep;
    Store store;
    TermP t = program;
    for (std::size_t n = 1;; ++n) {
        if (is_value(t)) {
            rep.reached_value = true;
            break;
        }
        if (n > opts.fuel) {
            rep.ok = false;
            rep.failure = "fuel exhausted";
            break;
        }
        StepResult r = step(t, store, opts.step);
        if (r.kind == StepResult::Kind::Stuck) {
            rep.ok = false;
            rep.stuck = true;
            rep.stuck_reason = r.reason;
            rep.uaf += r.reason == StuckReason::UseAfterFree;
            rep.failure = std::string("stuck: ") + to_string(r.reason) + " " + r.detail;
            break;
        }
        StepRecord rec;
        rec.n = n;
        rec.event = r.event;
        if (is_alloc(r.event)) ++rep.alloc;
        if (r.killed) {
            ++rep.killed;
            rec.eu = EnvRule::Kill;
        } else if (r.event == Event::Ref || r.event == Event::With) {
            rec.eu = EnvRule::Fresh;
        }
        rep.steps.push_back(rec);
        t = r.term;
    }
    rep.final_store = store;
    rep.final_term = t;
    return rep;
}

std::vector<std::string> HarnessReport::lines() const {
    std::vector<std::string> out;
    for (const auto& s : steps) {
        std::ostringstream os;
        os << s.n << ' ' << to_string(s.event) << ' ' << to_string(s.eu)
           << " preservation=" << (s.preservation ? "ok" : "FAIL") << " wf=" << (s.wf ? "ok" : "FAIL");
        if (!s.note.empty()) os << "  # " << s.note;
        out.push_back(os.str());
    }
    return out;
}

std::string HarnessReport::summary(const std::string& program) const {
    std::ostringstream os;
    os << "META " << program << ' ' << (ok ? "OK" : "FAIL") << " steps=" << steps.size() << " alloc=" << alloc
       << " killed=" << killed;
    return os.str();
}

}  // namespace arena
