#include <map>

#include "arena/meta.hpp"
#include "arena/subtyping.hpp"

namespace arena {

namespace {

struct Typed {
    TermP t;
    QType ty;
};

Observation full_observation(const TypingEnv& env) {
    Observation o;
    for (const auto& b : env.entries())
        if (b.kind == Binding::Kind::Term) o = o.plus(b.name);
    return o;
}

std::string env_key(const TypingEnv& env) {
    std::string k;
    for (const auto& b : env.entries()) k += b.name + ":" + to_string(b.type) + ";";
    return k;
}

class Enumerator {
public:
    // Terms of depth exactly d whose proper subterms all type.
    std::vector<TermP> candidates(std::size_t d, const TypingEnv& env) {
        std::vector<TermP> out;
        if (d == 0) return out;
        if (d == 1) {
            out.push_back(int_lit(0));
            out.push_back(bool_lit(true));
            out.push_back(unit_lit());
            for (const auto& b : env.entries())
                if (b.kind == Binding::Kind::Term) out.push_back(var(b.name));
            return out;
        }
        const std::size_t k = d - 1;
        for (const auto& c : typed(k, env)) {
            out.push_back(mk(RefNew{c.t}));
            if (as<TRef>(expose(env, c.ty.ty))) out.push_back(mk(Deref{c.t}));
        }
        // binary forms: one child at depth k, the other at most k
        for (std::size_t da = 1; da <= k; ++da)
            for (std::size_t db = 1; db <= k; ++db) {
                if (da != k && db != k) continue;
                for (const auto& a : typed(da, env))
                    for (const auto& b : typed(db, env)) binary(env, a, b, out);
            }
        const std::string x = "x" + std::to_string(env.size());
        for (std::size_t da = 1; da <= k; ++da)
            for (const auto& init : typed(da, env)) {
                if (init.ty.q.fresh) continue;
                TypingEnv inner = env.with_term(x, qt(ref_type(init.ty), Qualifier::diamond()));
                for (std::size_t db = 1; db <= k; ++db) {
                    if (da != k && db != k) continue;
                    for (const auto& body : typed(db, inner)) out.push_back(mk(WithR{x, init.t, body.t}));
                }
            }
        const std::string f = "f" + std::to_string(env.size());
        const std::string u = "u" + std::to_string(env.size());
        TypingEnv lam_env = env.with_term(u, qt(unit_type()));
        Qualifier cap = full_observation(env).as_qualifier();
        for (const auto& body : typed(k, lam_env))
            out.push_back(mk(Abs{f, u, qt(unit_type()), body.ty, cap, body.t}));
        return out;
    }

    const std::vector<Typed>& typed(std::size_t d, const TypingEnv& env) {
        auto& slot = memo_[env_key(env)];
        if (slot.size() <= d) slot.resize(d + 1);
        if (!slot[d]) {
            std::vector<Typed> ok;
            Observation phi = full_observation(env);
            StoreTyping sigma;
            for (const auto& t : candidates(d, env)) {
                try {
                    ok.push_back({t, synthesize(env, sigma, phi, t)});
                } catch (const TypeError&) {
                }
            }
            slot[d] = std::make_shared<std::vector<Typed>>(std::move(ok));
        }
        return *slot[d];
    }

private:
    static void binary(const TypingEnv& env, const Typed& a, const Typed& b, std::vector<TermP>& out) {
        if (as<TRef>(expose(env, b.ty.ty))) out.push_back(mk(RefAt{a.t, b.t}));
        if (const auto* r = as<TRef>(expose(env, a.ty.ty)); r && type_sub(env, b.ty.ty, r->inner.ty))
            out.push_back(mk(Assign{a.t, b.t}));
        if (const auto* fn = as<TFun>(expose(env, a.ty.ty)); fn && type_sub(env, b.ty.ty, fn->dom.ty))
            out.push_back(mk(App{a.t, b.t}));
    }

    std::map<std::string, std::vector<std::shared_ptr<std::vector<Typed>>>> memo_;
};

}  // namespace

std::vector<EnumeratedTerm> enumerate_small_terms(std::size_t depth, const TypingEnv& env) {
    Enumerator e;
    std::vector<EnumeratedTerm> out;
    for (std::size_t d = 1; d <= depth; ++d)
        for (const auto& t : e.candidates(d, env)) out.push_back({t, d});
    return out;
}

namespace {

void run_one(const EnumeratedTerm& et, const HarnessOptions& opts, BatchResult& acc) {
    ++acc.terms;
    if (!check_program(et.term).accepted) return;
    ++acc.accepted;
    HarnessReport prog = check_progress(et.term, opts);
    HarnessReport pres = check_preservation(et.term, opts);
    acc.steps += prog.steps.size();
    acc.uaf += prog.uaf + pres.uaf;
    acc.partial_closes += prog.partial_closes + pres.partial_closes;
    bool bad = false;
    if (!prog.ok) {
        ++acc.progress_failures;
        bad = true;
    }
    if (!pres.ok) {
        ++acc.preservation_failures;
        bad = true;
    }
    if (bad && acc.examples.size() < 10)
        acc.examples.push_back(print_term(et.term) + "  # " + (prog.ok ? pres.failure : prog.failure));
}

void merge(BatchResult& into, BatchResult&& from) {
    into.terms += from.terms;
    into.accepted += from.accepted;
    into.progress_failures += from.progress_failures;
    into.preservation_failures += from.preservation_failures;
    into.uaf += from.uaf;
    into.partial_closes += from.partial_closes;
    into.steps += from.steps;
    for (auto& e : from.examples)
        if (into.examples.size() < 10) into.examples.push_back(std::move(e));
}

}  // namespace

BatchResult run_harness_serial(const std::vector<EnumeratedTerm>& terms, const HarnessOptions& opts) {
    BatchResult acc;
    for (const auto& t : terms) run_one(t, opts, acc);
    return acc;
}

BatchResult run_harness_parallel(const std::vector<EnumeratedTerm>& terms, const HarnessOptions& opts) {
    BatchResult total;
    const long n = static_cast<long>(terms.size());
#pragma omp parallel
    {
        BatchResult local;
#pragma omp for schedule(dynamic, 64) nowait
        for (long i = 0; i < n; ++i) run_one(terms[static_cast<std::size_t>(i)], opts, local);
#pragma omp critical
        merge(total, std::move(local));
    }
    return total;
}

}  // namespace arena
