#include <doctest.h>

#include "support.hpp"

using namespace arena;
using namespace arena::test;

namespace {

std::vector<std::string> positive_corpus() {
    std::vector<std::string> out;
    for (const auto& p : cli::corpus_files(corpus_dir()))
        if (p.stem().string().rfind("neg_", 0) != 0) out.push_back(p.stem().string());
    return out;
}

bool related(const TypingEnv& env, const QualRelation& rel, const Qualifier& a, const Qualifier& b) {
    QualUniverse u = universe_of(env);
    std::size_t ia = 0, ib = 0;
    for (std::uint32_t m = 0; m < u.subsets(); ++m) {
        if (u.decode(m) == a) ia = m;
        if (u.decode(m) == b) ib = m;
    }
    return (rel[ia] >> ib) & 1;
}

}  // namespace

TEST_SUITE("meta") {

TEST_CASE("env_update classifies steps") {
    MachineEnv me;
    Store s;
    TermP t = mk(RefNew{int_lit(1)});
    StepResult r = step(t, s);
    EnvRule rule;
    MachineEnv next = env_update(me, t, r, T("Int"), &rule);
    CHECK(rule == EnvRule::Fresh);
    CHECK(next.phi.has(Loc{0}));
    CHECK(next.kappa.empty());
    CHECK(next.sigma.size() == 1);

    TermP beta = mk(App{mk(Abs{"f", "x", T("Int"), T("Int"), {}, var("x")}), int_lit(2)});
    StepResult rb = step(beta, s);
    MachineEnv same = env_update(next, beta, rb, std::nullopt, &rule);
    CHECK(rule == EnvRule::Base);
    CHECK(same.phi == next.phi);
    CHECK(same.sigma.size() == next.sigma.size());

    TermP at = mk(RefAt{int_lit(3), mk(LocT{0, 0})});
    StepResult ra = step(at, s);
    MachineEnv grown = env_update(next, at, ra, T("Int"), &rule);
    CHECK(rule == EnvRule::Base);
    CHECK(grown.sigma.size() == 2);
    CHECK(grown.sigma.locations() == next.sigma.locations());

    TermP close = mk(WithC{0, unit_lit()});
    StepResult rc = step(close, s);
    MachineEnv killed = env_update(grown, close, rc, std::nullopt, &rule);
    CHECK(rule == EnvRule::Kill);
    CHECK_FALSE(killed.phi.has(Loc{0}));
    CHECK(killed.kappa == std::set<Loc>{0});
}

TEST_CASE("env_update rejects unclassifiable steps") {
    MachineEnv me;
    Store s;
    TermP t = mk(RefNew{int_lit(1)});
    StepResult r = step(t, s);
    CHECK_THROWS_AS(env_update(me, t, r, std::nullopt), HarnessError);
    me.kappa.insert(0);
    CHECK_THROWS_AS(env_update(me, t, r, T("Int^{ℓ0}")), HarnessError);
}

TEST_CASE("store well-formedness") {
    CHECK(store_wf(StoreTyping{}));
    StoreTyping dangling;
    dangling.add({0, 0}, T("Ref[Int]^{ℓ3}"));
    CHECK_FALSE(store_wf(dangling));
    StoreTyping gap;
    gap.add({1, 1}, T("Int"));
    CHECK_FALSE(store_wf(gap));
    StoreTyping open;
    open.add({0, 0}, T("Ref[Int]^{x}"));
    CHECK_FALSE(store_wf(open));
    StoreTyping good;
    good.add({0, 0}, T("Int"));
    good.add({0, 1}, T("Ref[Int]^{ℓ0}"));
    CHECK(store_wf(good));
}

TEST_CASE("store typedness") {
    CHECK(store_typed(MachineEnv{}, Store{}));
    HarnessReport rep = check_preservation(corpus_program("scoped_unit"));
    REQUIRE(rep.ok);
    CHECK(rep.final_env.kappa == std::set<Loc>{0});
    CHECK(store_typed(rep.final_env, rep.final_store));
    for (CellId c : rep.final_store.column(0)) CHECK(rep.final_store.status(c) == Store::Status::Killed);

    Store corrupt = rep.final_store;
    corrupt.set_cell({0, 0}, unit_lit());
    std::string why;
    CHECK_FALSE(store_typed(rep.final_env, corrupt, &why));
    CHECK(why.find("killed column") != std::string::npos);

    MachineEnv me;
    me.sigma.add({0, 0}, T("Int"));
    me.phi = me.phi.plus(Loc{0});
    Store s;
    s.alloc_fresh(bool_lit(true));
    CHECK_FALSE(store_typed(me, s));
    Store ok;
    ok.alloc_fresh(int_lit(1));
    CHECK(store_typed(me, ok));
}

TEST_CASE("harnesses on the positive corpus") {
    for (const auto& name : positive_corpus()) {
        CAPTURE(name);
        TermP t = corpus_program(name);
        HarnessReport prog = check_progress(t);
        HarnessReport pres = check_preservation(t);
        CHECK(prog.ok);
        CHECK_MESSAGE(pres.ok, pres.failure);
        CHECK(pres.uaf == 0);
        CHECK(pres.partial_closes == 0);
        std::size_t kills = 0;
        for (const auto& s : pres.steps) kills += s.eu == EnvRule::Kill;
        CHECK(kills == pres.killed);
        // κ is exactly the set of killed columns
        CHECK(pres.final_env.kappa == pres.final_store.killed_locations());
    }
}

TEST_CASE("report serialization") {
    HarnessReport rep = check_preservation(corpus_program("scoped_unit"));
    auto lines = rep.lines();
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "1 with eu-fresh preservation=ok wf=ok");
    CHECK(lines[2] == "3 close eu-kill preservation=ok wf=ok");
    CHECK(rep.summary("scoped_unit") == "META scoped_unit OK steps=3 alloc=1 killed=1");
}

TEST_CASE("value programs take no steps") {
    HarnessReport pres = check_preservation(int_lit(3));
    CHECK(pres.ok);
    CHECK(pres.steps.empty());
    CHECK(check_progress(unit_lit()).ok);
}

TEST_CASE("progress notices stuck terms") {
    HarnessReport rep = check_progress(mk(Deref{int_lit(1)}));
    CHECK_FALSE(rep.ok);
    CHECK(rep.stuck);
    CHECK(rep.stuck_reason == StuckReason::NotARef);
}

TEST_CASE("mutant evaluator is caught right after the close") {
    HarnessOptions o;
    o.step.skip_bulk_kill = true;
    HarnessReport rep = check_preservation(corpus_program("scoped_block"), o);
    CHECK_FALSE(rep.ok);
    std::size_t close_at = 0;
    for (const auto& s : rep.steps)
        if (s.event == Event::Close) close_at = s.n;
    REQUIRE(close_at > 0);
    REQUIRE(rep.steps.size() >= close_at);
    const StepRecord& bad = rep.steps[close_at - 1];
    CHECK_FALSE(bad.wf);
    CHECK(bad.note.find("killed column") != std::string::npos);
    for (std::size_t i = 0; i + 1 < close_at; ++i) CHECK(rep.steps[i].wf);
}

TEST_CASE("oracle basics") {
    TypingEnv one = TypingEnv{}.with_term("b0", qt(int_type(), Qualifier::diamond()));
    QualRelation rel = declarative_qsub_oracle(one);
    QualUniverse u = universe_of(one);
    for (std::uint32_t a = 0; a < u.subsets(); ++a)
        for (std::uint32_t b = 0; b < u.subsets(); ++b) CHECK(((rel[a] >> b) & 1) == ((a & ~b) == 0));

    TypingEnv alias = alias_env();
    QualRelation ar = declarative_qsub_oracle(alias);
    CHECK(related(alias, ar, Q("{s}"), Q("{r}")));
    CHECK(related(alias, ar, Q("{r}"), Q("{s}")));
    CHECK_FALSE(related(alias, ar, Q("{s}"), Q("{}")));
    for (std::uint32_t m = 0; m < universe_of(alias).subsets(); ++m) CHECK(((ar[m] >> m) & 1));
    CHECK_THROWS_AS(declarative_qsub_oracle(alias, 2), std::invalid_argument);
}

TEST_CASE("oracle agrees with qual_sub on small contexts") {
    OracleSweep s = sweep_oracle_serial(enumerate_contexts(3));
    CHECK(s.disagreements == 0);
    CHECK(s.pairs > 10000);
    OracleSweep p = sweep_oracle_parallel(enumerate_contexts(3));
    CHECK(p.pairs == s.pairs);
    CHECK(p.contexts == s.contexts);
}

TEST_CASE("enumeration") {
    auto d1 = enumerate_small_terms(1);
    std::set<std::string> printed;
    for (const auto& t : d1) printed.insert(print_term(t.term));
    CHECK(printed == std::set<std::string>{"0", "true", "()"});

    auto d3 = enumerate_small_terms(3);
    TermP scoped = mk(WithR{"x", unit_lit(), mk(Deref{var("x")})});
    TermP escape = mk(WithR{"x", unit_lit(), var("x")});
    bool saw_scoped = false, saw_escape = false;
    for (const auto& et : d3) {
        if (alpha_equal(et.term, scoped)) {
            saw_scoped = true;
            CHECK(et.depth == 3);
            CHECK(check_program(et.term).accepted);
            CHECK(check_progress(et.term).ok);
            CHECK(check_preservation(et.term).ok);
        }
        if (alpha_equal(et.term, escape)) {
            saw_escape = true;
            CHECK_FALSE(check_program(et.term).accepted);
        }
    }
    CHECK(saw_scoped);
    CHECK(saw_escape);
}

TEST_CASE("batch harness, serial and parallel agree") {
    auto terms = enumerate_small_terms(3);
    BatchResult s = run_harness_serial(terms);
    BatchResult p = run_harness_parallel(terms);
    CHECK(s.terms == terms.size());
    CHECK(s.accepted > 0);
    CHECK(s.progress_failures == 0);
    CHECK(s.preservation_failures == 0);
    CHECK(s.uaf == 0);
    CHECK(s.partial_closes == 0);
    CHECK(p.accepted == s.accepted);
    CHECK(p.steps == s.steps);
    CHECK(p.preservation_failures == 0);
}

}
