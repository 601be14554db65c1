#include <doctest.h>

#include "support.hpp"

using namespace arena;
using namespace arena::test;

namespace {

Observation obs(std::string_view q) { return Observation::of(Q(q)); }

ErrorKind synth_error(const TypingEnv& env, const Observation& phi, const TermP& t, const StoreTyping& sigma = {}) {
    try {
        synthesize(env, sigma, phi, t);
    } catch (const TypeError& e) {
        return e.kind;
    }
    FAIL("expected a type error for " << print_term(t));
    return ErrorKind::UnboundName;
}

// [u, v, f: (Ref[Int]^{◇u} => Int)^{u,v}]
TypingEnv overlap_env() {
    return uv_env().with_term("f", qt(fun_type("f", "x", qt(ref_int(), Q("{u, *}")), qt(int_type())), Q("{u, v}")));
}

TermP app(TermP f, TermP a) { return mk(App{std::move(f), std::move(a)}); }

}  // namespace

TEST_SUITE("typecheck") {

TEST_CASE("constants and allocation") {
    TypingEnv env;
    CHECK(to_string(synthesize(env, {}, {}, int_lit(3))) == "Int^{}");
    CHECK(to_string(synthesize(env, {}, {}, bool_lit(true))) == "Bool^{}");
    CHECK(to_string(synthesize(env, {}, {}, unit_lit())) == "Unit^{}");
    CHECK(to_string(synthesize(env, {}, {}, mk(RefNew{int_lit(7)}))) == "Ref[Int^{}]^{*}");
}

TEST_CASE("coallocation inherits the proxy qualifier") {
    TypingEnv env = TypingEnv{}.with_term("a0", qt(ref_int(), Qualifier::diamond()));
    QType t = synthesize(env, {}, obs("{a0}"), mk(RefAt{int_lit(8), var("a0")}));
    CHECK(to_string(t) == "Ref[Int^{}]^{a0}");
    CHECK(synth_error(env, obs("{}"), mk(RefAt{int_lit(8), var("a0")})) == ErrorKind::ObservationViolation);
}

TEST_CASE("variables need observation") {
    TypingEnv env = alias_env();
    CHECK(to_string(synthesize(env, {}, obs("{s}"), var("s"))) == "Ref[Int^{}]^{s}");
    CHECK(synth_error(env, obs("{r}"), var("s")) == ErrorKind::ObservationViolation);
    CHECK(synth_error(env, obs("{r}"), var("zz")) == ErrorKind::UnboundName);
}

TEST_CASE("alias upcast in checking position") {
    TypeReport rep = check(alias_env(), {}, obs("{r, s}"), var("s"), T("Ref[Int]^{r}"));
    CHECK(rep.accepted);
    TypeReport down = check(alias_env(), {}, obs("{r, s}"), var("s"), T("Ref[Int]^{}"));
    REQUIRE_FALSE(down.accepted);
    CHECK(down.diagnostics.front().kind == ErrorKind::SubsumptionFailure);
}

TEST_CASE("fresh results do not check against non-fresh qualifiers") {
    TypeReport rep = check(alias_env(), {}, obs("{r}"), mk(RefNew{int_lit(1)}), T("Ref[Int]^{r}"));
    CHECK_FALSE(rep.accepted);
    CHECK(rep.verdict_line() == "REJECT SubsumptionFailure");
    CHECK(check(alias_env(), {}, obs("{r}"), mk(RefNew{int_lit(1)}), T("Ref[Int]^{r, *}")).accepted);
}

TEST_CASE("controlled sharing") {
    TypingEnv env = overlap_env();
    Observation phi = obs("{u, v, f}");
    CHECK(to_string(synthesize(env, {}, phi, app(var("f"), var("u")))) == "Int^{}");
    CHECK(synth_error(env, phi, app(var("f"), var("v"))) == ErrorKind::OverlapViolation);
    // a fresh argument shares nothing
    CHECK(to_string(synthesize(env, {}, phi, app(var("f"), mk(RefNew{int_lit(0)})))) == "Int^{}");
}

TEST_CASE("apply_rule substitutes the argument qualifier") {
    TypingEnv env = uv_env();
    Observation phi = obs("{u, v}");
    QType id = qt(fun_type("g", "x", qt(int_type()), qt(int_type())), Q("{}"));
    CHECK(to_string(apply_rule(env, phi, id, T("Int"))) == "Int^{}");
    QType pass = qt(fun_type("g", "x", T("Ref[Int]^{u, v}"), T("Ref[Int]^{x}")), Q("{}"));
    CHECK(to_string(apply_rule(env, phi, pass, T("Ref[Int]^{u, v}"))) == "Ref[Int^{}]^{u, v}");
    CHECK_THROWS_AS(apply_rule(env, phi, pass, T("Ref[Int]^{*}")), TypeError);
    // growing rule: fresh argument, codomain mentions the parameter
    QType loose = qt(fun_type("g", "x", T("Ref[Int]^{*}"), T("Ref[Int]^{x}")), Q("{}"));
    CHECK(to_string(apply_rule(env, phi, loose, T("Ref[Int]^{*}"))) == "Ref[Int^{}]^{*}");
    QType grow = qt(fun_type("g", "x", T("Ref[Int]^{*}"), T("Ref[Ref[Int]^{x}]")), Q("{}"));
    try {
        apply_rule(env, phi, grow, T("Ref[Int]^{*}"));
        FAIL("expected DependencyViolation");
    } catch (const TypeError& e) {
        CHECK(e.kind == ErrorKind::DependencyViolation);
    }
}

TEST_CASE("tapply_rule") {
    TypingEnv env;
    QType poly = T("(forall [X^x <: Top] => (y: X^{x}) => X^{x})");
    CHECK(to_string(tapply_rule(env, {}, poly, T("Int"))) == "(_f(y: Int^{}) => Int^{})^{}");
    CHECK_NOTHROW(tapply_rule(env, {}, poly, T("Top")));
    QType bounded = T("(forall [X^x <: Int] => Int)");
    try {
        tapply_rule(env, {}, bounded, T("Bool"));
        FAIL("expected BoundViolation");
    } catch (const TypeError& e) {
        CHECK(e.kind == ErrorKind::BoundViolation);
    }
    CHECK_NOTHROW(tapply_rule(env, {}, T("(forall [X^x <: Top^{*}] => X^{x})"), T("Int^{*}")));
    QType grow = T("(forall [X^x <: Top^{*}] => Ref[X^{x}])");
    try {
        tapply_rule(env, {}, grow, T("Int^{*}"));
        FAIL("expected DependencyViolation");
    } catch (const TypeError& e) {
        CHECK(e.kind == ErrorKind::DependencyViolation);
    }
}

TEST_CASE("corpus programs") {
    CHECK(check_program(corpus_program("coalloc")).accepted);
    CHECK(check_program(corpus_program("cycle")).accepted);
    TypeReport fix = check_program(corpus_program("fix"));
    REQUIRE(fix.accepted);
    CHECK(to_string(*fix.result) == "Int^{}");
    for (const char* neg : {"neg_escape", "neg_overlap", "neg_telescope"})
        CHECK_THROWS_AS(corpus_program(neg), TypeError);
}

TEST_CASE("fix instantiates to an Int function producer") {
    TypingEnv env = TypingEnv{}.with_term("a", qt(ref_type(T("Unit")), Qualifier::diamond()));
    QType fix = T("(forall [T^t <: Top] => ((f: (k(g: (T => T)^{a}) => (T => T)^{g})) => (T => T)^{a})^{a})^{a}");
    env = env.with_term("fix", fix);
    QType at_int = tapply_rule(env, Observation::of(Q("{a, fix}")), fix, T("Int"));
    CHECK(alpha_equal(at_int, T("((f: (k(g: (Int => Int)^{a}) => (Int => Int)^{g})) => (Int => Int)^{a})^{a}")));
    // the listing's body type-checks at the declared type
    const char* src =
        "val a = new Ref();\n"
        "def{a} fix[T^t <: Top]: ((f: (k(g: (T => T)^{a}) => (T => T)^{g})) => (T => T)^{a})^{a} =\n"
        "  fun{a}(f: (k(g: (T => T)^{a}) => (T => T)^{g})): (T => T)^{a} => {\n"
        "    val c = new Ref((fun(x: T): T => x : (T => T)^{a})) at a;\n"
        "    c := f(fun{c, a}(n: T): T => (!c)(n));\n"
        "    !c\n"
        "  };\n"
        "()";
    CHECK(check_program(compile(src)).accepted);
}

TEST_CASE("scope results may not mention the scoped reference") {
    TermP esc = mk(WithR{"x", unit_lit(), var("x")});
    TypeReport rep = check_program(esc);
    CHECK_FALSE(rep.accepted);
    CHECK(rep.diagnostics.front().kind == ErrorKind::EscapeViolation);
    CHECK(rep.diagnostics.front().rule == "t-refin");
    TermP ok = mk(WithR{"x", unit_lit(), mk(Deref{var("x")})});
    CHECK(check_program(ok).accepted);
}

TEST_CASE("runtime forms") {
    StoreTyping sigma;
    sigma.add({0, 0}, T("Int"));
    TermP cell = mk(LocT{0, 0});
    CHECK(to_string(synthesize({}, sigma, obs("{ℓ0}"), cell)) == "Ref[Int^{}]^{ℓ0}");
    CHECK(synth_error({}, obs("{}"), cell, sigma) == ErrorKind::ObservationViolation);
    // a scope may not hand out its own arena
    TermP leak = mk(WithC{0, cell});
    CHECK_THROWS_AS(synthesize({}, sigma, obs("{ℓ0}"), leak), TypeError);
    TermP fine = mk(WithC{0, mk(Deref{cell})});
    CHECK(to_string(synthesize({}, sigma, obs("{ℓ0}"), fine)) == "Int^{}");
    // static programs carry no runtime forms
    CHECK_FALSE(check_program(mk(Deref{cell})).accepted);
    CHECK_FALSE(check_program(fine).accepted);
}

TEST_CASE("diagnostic lines") {
    TypeReport rep = check_program(mk(WithR{"x", unit_lit(), var("x", Span{3, 7})}, Span{3, 1}));
    REQUIRE_FALSE(rep.accepted);
    auto lines = rep.diagnostic_lines();
    REQUIRE(lines.size() >= 1);
    CHECK(lines.front().rfind("3:", 0) == 0);
    CHECK(lines.front().find("t-refin EscapeViolation") != std::string::npos);
    CHECK(rep.verdict_line() == "REJECT EscapeViolation");
}

TEST_CASE("listing annotations bound the synthesized qualifiers") {
    TypingEnv env = TypingEnv{}.with_term("a0", qt(ref_int(), Qualifier::diamond()));
    Observation phi = obs("{a0}");
    QType a1 = synthesize(env, {}, phi, mk(RefAt{int_lit(8), var("a0")}));
    CHECK(a1.q.subset_of(Q("{a0}")));
    env = env.with_term("a1", a1);
    QType a2 = synthesize(env, {}, obs("{a0, a1}"), mk(RefAt{int_lit(9), var("a1")}));
    CHECK(a2.q.subset_of(Q("{a1}")));
    QType s = synthesize(alias_env(), {}, obs("{r, s}"), var("s"));
    CHECK(s.q.subset_of(Q("{s}")));
}

TEST_CASE("enumerated terms: observability and reflexive checking") {
    auto terms = enumerate_small_terms(3);
    std::size_t accepted = 0;
    for (const auto& et : terms) {
        QType ty;
        try {
            ty = synthesize({}, {}, {}, et.term);
        } catch (const TypeError&) {
            continue;
        }
        ++accepted;
        REQUIRE(Observation{}.covers(ty.q));
        REQUIRE_MESSAGE(check({}, {}, {}, et.term, ty).accepted, print_term(et.term));
    }
    CHECK(accepted > 100);
}

}
