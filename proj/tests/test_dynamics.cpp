#include <doctest.h>

#include "support.hpp"

using namespace arena;
using namespace arena::test;

namespace {

TermP loc(Loc l, std::uint32_t o) { return mk(LocT{l, o}); }

std::vector<TermP> accepted_terms(std::size_t depth) {
    std::vector<TermP> out;
    for (const auto& et : enumerate_small_terms(depth))
        if (check_program(et.term).accepted) out.push_back(et.term);
    return out;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("ref allocates a fresh column") {
    Store s;
    StepResult r = step(mk(RefNew{int_lit(7)}), s);
    REQUIRE(r.kind == StepResult::Kind::Stepped);
    CHECK(r.event == Event::Ref);
    CHECK(print_term(r.term) == "ℓ0·0");
    CHECK(print_term(s.read({0, 0})) == "7");
    CHECK(store_delta(r, s) == "Δ+ℓ0·0");
}

TEST_CASE("refat extends the proxy's column") {
    Store s;
    s.alloc_fresh(int_lit(7));
    StepResult r = step(mk(RefAt{int_lit(8), loc(0, 0)}), s);
    REQUIRE(r.kind == StepResult::Kind::Stepped);
    CHECK(r.event == Event::RefAt);
    CHECK(print_term(r.term) == "ℓ0·1");
    CHECK(s.column(0).size() == 2);
}

TEST_CASE("refat steps the proxy first") {
    Store s;
    StepResult r = step(mk(RefAt{mk(RefNew{int_lit(1)}), mk(RefNew{int_lit(2)})}), s);
    REQUIRE(r.kind == StepResult::Kind::Stepped);
    CHECK(print_term(s.read({0, 0})) == "2");
}

TEST_CASE("close kills the whole column") {
    Store s;
    s.alloc_fresh(int_lit(7));
    s.alloc_at(0, int_lit(8));
    StepResult r = step(mk(WithC{0, unit_lit()}), s);
    REQUIRE(r.kind == StepResult::Kind::Stepped);
    CHECK(r.event == Event::Close);
    CHECK(print_term(r.term) == "()");
    CHECK(s.status({0, 0}) == Store::Status::Killed);
    CHECK(s.status({0, 1}) == Store::Status::Killed);
    CHECK(store_delta(r, s) == "Δ-ℓ0·0 -ℓ0·1");
}

TEST_CASE("skip-bulk-kill mutant leaves the column live") {
    Store s;
    s.alloc_fresh(int_lit(7));
    StepOptions mutant;
    mutant.skip_bulk_kill = true;
    StepResult r = step(mk(WithC{0, unit_lit()}), s, mutant);
    REQUIRE(r.kind == StepResult::Kind::Stepped);
    CHECK(s.status({0, 0}) == Store::Status::Live);
}

TEST_CASE("deref and assign") {
    Store s;
    s.alloc_fresh(int_lit(7));
    CHECK(print_term(step(mk(Deref{loc(0, 0)}), s).term) == "7");
    StepResult w = step(mk(Assign{loc(0, 0), int_lit(9)}), s);
    CHECK(print_term(w.term) == "()");
    CHECK(print_term(s.read({0, 0})) == "9");
}

TEST_CASE("stuck states") {
    Store s;
    s.alloc_fresh(int_lit(7));
    s.kill(0);
    for (const TermP& t : {mk(Deref{loc(0, 0)}), mk(Assign{loc(0, 0), int_lit(1)}), mk(RefAt{int_lit(1), loc(0, 0)})}) {
        Store c = s;
        StepResult r = step(t, c);
        CHECK(r.kind == StepResult::Kind::Stuck);
        CHECK(r.reason == StuckReason::UseAfterFree);
    }
    Store e;
    CHECK(step(mk(Deref{loc(4, 0)}), e).reason == StuckReason::UnboundCell);
    CHECK(step(mk(Deref{int_lit(1)}), e).reason == StuckReason::NotARef);
    CHECK(step(mk(App{int_lit(1), int_lit(2)}), e).reason == StuckReason::NotAFunction);
    CHECK(step(var("x"), e).reason == StuckReason::FreeVariable);
}

TEST_CASE("values do not step") {
    Store s;
    CHECK(step(int_lit(3), s).kind == StepResult::Kind::Value);
    EvalResult r = eval(int_lit(3));
    CHECK(r.outcome == EvalResult::Outcome::Value);
    CHECK(r.steps == 0);
    CHECK(r.store.total_count() == 0);
    CHECK(r.trace.empty());
}

TEST_CASE("fuel") {
    std::string src = slurp(corpus_dir() / "knot.arn");
    src = src.substr(0, src.rfind("()")) + "(!c1)(5)";
    TermP loop = compile(src);
    EvalOptions o;
    o.fuel = 3;
    EvalResult r = eval(loop, o);
    CHECK(r.outcome == EvalResult::Outcome::FuelExhausted);
    CHECK(r.steps == 3);
}

TEST_CASE("introductory program leaves a live pair and a dead triple") {
    EvalResult r = eval(corpus_program("intro"));
    REQUIRE(r.outcome == EvalResult::Outcome::Value);
    CHECK(cli::arena_summary(r.store) == "ARENAS ℓ0[2] ℓ1[3 killed]");
    CHECK(r.closes == 1);
    CHECK(r.partial_closes == 0);
}

TEST_CASE("factorial") {
    EvalResult r = eval(corpus_program("fix"));
    REQUIRE(r.outcome == EvalResult::Outcome::Value);
    CHECK(print_term(r.term) == "120");
    std::int64_t f = 1;
    for (int i = 2; i <= 5; ++i) f *= i;
    CHECK(print_term(r.term) == std::to_string(f));
}

TEST_CASE("trace format") {
    EvalOptions o;
    o.trace = true;
    EvalResult r = eval(compile("{ val a = new Ref() scoped; !a }"), o);
    auto lines = r.trace_lines();
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("STEP 1 RULE with REDEX ", 0) == 0);
    CHECK(lines[0].find("STORE Δ+ℓ0·0") != std::string::npos);
    CHECK(lines[1].rfind("STEP 2 RULE deref", 0) == 0);
    CHECK(lines[1].find("STORE Δ∅") != std::string::npos);
    CHECK(lines[2].rfind("STEP 3 RULE close", 0) == 0);
    CHECK(r.store_line() == "STORE 0/1");
}

TEST_CASE("local locations") {
    CHECK(local_locations(mk(WithC{3, mk(Deref{loc(3, 0)})})) == std::set<Loc>{3});
    CHECK(local_locations(loc(1, 0)).empty());
    CHECK(local_locations(mk(App{mk(WithC{1, unit_lit()}), mk(WithC{2, unit_lit()})})) == std::set<Loc>{1, 2});
}

TEST_CASE("well-stepped terms") {
    CHECK(well_stepped(corpus_program("intro")));
    TermP lam = mk(Abs{"f", "x", T("Unit"), T("Unit"), {}, mk(WithC{0, unit_lit()})});
    CHECK_FALSE(well_stepped(lam));
    TermP id = mk(Abs{"f", "x", T("Unit"), T("Unit"), {}, var("x")});
    CHECK(well_stepped(mk(App{id, mk(WithC{0, unit_lit()})})));
    CHECK_FALSE(well_stepped(mk(App{mk(App{id, unit_lit()}), mk(WithC{0, unit_lit()})})));
    CHECK_FALSE(well_stepped(mk(WithR{"x", unit_lit(), mk(WithC{0, unit_lit()})})));
    CHECK(well_stepped(mk(RefAt{mk(WithC{0, unit_lit()}), loc(1, 0)})));
    CHECK_FALSE(well_stepped(mk(RefAt{mk(WithC{0, unit_lit()}), mk(Deref{var("y")})})));
}

TEST_CASE("determinism, monotone store and bulk kill on enumerated terms") {
    for (const auto& t0 : accepted_terms(3)) {
        Store s;
        TermP t = t0;
        for (int n = 0; n < 200 && !is_value(t); ++n) {
            Store copy = s;
            auto before = s.cells();
            StepResult r = step(t, s);
            StepResult again = step(t, copy);
            REQUIRE(r.kind == StepResult::Kind::Stepped);
            REQUIRE(alpha_equal(r.term, again.term));
            REQUIRE(s.cells().size() == copy.cells().size());
            REQUIRE(s.cells().size() >= before.size());
            for (const auto& [c, v] : before) {
                REQUIRE(s.status(c) != Store::Status::Absent);
                if (!v) REQUIRE(s.status(c) == Store::Status::Killed);
                else if (s.status(c) == Store::Status::Killed) REQUIRE(r.event == Event::Close);
            }
            REQUIRE(s.columns_uniform());
            REQUIRE(well_stepped(r.term));
            t = r.term;
        }
        REQUIRE(is_value(t));
    }
}

}
