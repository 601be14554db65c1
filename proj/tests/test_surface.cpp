#include <doctest.h>

#include "support.hpp"

using namespace arena;
using namespace arena::test;

namespace {

TermP lower_text(std::string_view s, ParseOptions o = {}) { return lower(parse(s, o)); }

std::size_t count_withr(const TermP& t) {
    if (!t) return 0;
    return std::visit(
        [](const auto& n) -> std::size_t {
            using N = std::decay_t<decltype(n)>;
            std::size_t c = std::is_same_v<N, WithR>;
            if constexpr (requires { n.fn; }) c += count_withr(n.fn);
            if constexpr (requires { n.arg; }) {
                if constexpr (std::is_same_v<decltype(n.arg), TermP>) c += count_withr(n.arg);
            }
            if constexpr (requires { n.init; }) c += count_withr(n.init);
            if constexpr (requires { n.proxy; }) c += count_withr(n.proxy);
            if constexpr (requires { n.ref; }) c += count_withr(n.ref);
            if constexpr (requires { n.rhs; }) c += count_withr(n.rhs);
            if constexpr (requires { n.lhs; }) c += count_withr(n.lhs);
            if constexpr (requires { n.body; }) c += count_withr(n.body);
            if constexpr (requires { n.cond; }) c += count_withr(n.cond) + count_withr(n.then_) + count_withr(n.else_);
            return c;
        },
        t->node);
}

std::size_t count_word(const std::string& text, const std::string& w) {
    std::size_t n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find("//"));
        for (auto p = line.find(w); p != std::string::npos; p = line.find(w, p + 1)) ++n;
    }
    return n;
}

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("parse a val binding") {
    STermP s = parse("val fr = new Ref(42); fr");
    const auto* b = as<surf::Block>(s);
    REQUIRE(b);
    REQUIRE(b->stmts.size() == 1);
    const auto* v = std::get_if<surf::ValBind>(&b->stmts[0].first);
    REQUIRE(v);
    CHECK(v->x == "fr");
    CHECK(as<surf::NewRef>(v->rhs));
    CHECK(as<surf::VarRef>(b->result));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
        parse("new Ref(7) at");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.found == "end of input");
        CHECK(e.span.line == 1);
    }
    CHECK_THROWS_AS(parse("val x = 1"), ParseError);
    CHECK_THROWS_AS(parse("1 + 2"), ParseError);
    ParseOptions ext;
    ext.ext_int = true;
    CHECK_NOTHROW(parse("1 + 2 * 3", ext));
    CHECK_THROWS_AS(parse("with x = Ref(1) in x"), ParseError);
    CHECK_THROWS_AS(parse("ℓ0·0"), ParseError);
}

TEST_CASE("scoped argument lowers to a scope around the call") {
    TermP got = lower_text("f(new Ref(7) scoped)");
    TermP want = mk(WithR{"x", int_lit(7), mk(App{var("f"), var("x")})});
    CHECK(alpha_equal(got, want));
    ParseOptions core;
    core.core = true;
    CHECK(alpha_equal(got, lower_text("with x = Ref(7) in f(x)", core)));
}

TEST_CASE("simple lowerings") {
    CHECK(alpha_equal(lower_text("x"), var("x")));
    TermP got = lower_text("{ val a = new Ref(()) scoped; !a }");
    CHECK(alpha_equal(got, mk(WithR{"a", unit_lit(), mk(Deref{var("a")})})));
    CHECK(alpha_equal(lower_text("new Ref() scoped; 1"), lower_text("new Ref(()) scoped; 1")));
}

TEST_CASE("scoped allocation with no continuation") {
    CHECK_THROWS_AS(lower_text("new Ref(1) scoped"), LoweringError);
    CHECK_THROWS_AS(lower_text("{ val a = 1; new Ref(a) scoped }"), LoweringError);
}

TEST_CASE("shadowing keeps free variables") {
    TermP t = lower_text("{ val x = g; val x = x; f(x) }");
    CHECK(free_term_vars(t) == std::set<Name>{"f", "g"});
    TermP u = lower_text("fun h(x: Int): Int => fun h(x: Int): Int => y");
    CHECK(free_term_vars(u) == std::set<Name>{"y"});
}

TEST_CASE("printer forms") {
    CHECK(print_term(mk(WithC{7, unit_lit()})) == "with<ℓ7>{ () }");
    CHECK(print_term(mk(LocT{3, 2})) == "ℓ3·2");
    ParseOptions dyn;
    dyn.dynamic = true;
    TermP back = lower_text(print_term(mk(WithC{7, mk(Deref{mk(LocT{7, 0})})})), dyn);
    CHECK(alpha_equal(back, mk(WithC{7, mk(Deref{mk(LocT{7, 0})})})));
}

TEST_CASE("corpus round trip through the core printer") {
    for (const auto& p : cli::corpus_files(corpus_dir())) {
        CAPTURE(p.filename().string());
        std::string src = slurp(p);
        ParseOptions opts = corpus_options(p);
        TermP lowered = lower(parse(src, opts));
        CHECK_FALSE(contains_runtime_forms(lowered));
        CHECK(count_withr(lowered) == count_word(src, "scoped"));
        if (p.stem().string().rfind("neg_", 0) == 0) continue;
        TermP core = compile(src, opts);
        ParseOptions copts = opts;
        copts.core = true;
        TermP back = lower(parse(print_term(core), copts));
        CHECK(alpha_equal(back, core));
    }
}

TEST_CASE("scope body is the remainder of its block") {
    TermP t = lower_text("{ val fr = new Ref(1); val ar = new Ref(2) scoped; val a1 = new Ref(3) at ar; () }");
    // fr's binder wraps the scope; the scope wraps a1 and the result
    const auto* outer = as<App>(t);
    REQUIRE(outer);
    const auto* lam = as<Abs>(outer->fn);
    REQUIRE(lam);
    const auto* scope = as<WithR>(lam->body);
    REQUIRE(scope);
    CHECK(scope->x == "ar");
    CHECK(free_term_vars(scope->body) == std::set<Name>{"ar"});
    CHECK(print_term(scope->body).find("at ar") != std::string::npos);
}

TEST_CASE("elaboration fills every hole") {
    std::size_t with_vals = 0;
    for (const auto& p : cli::corpus_files(corpus_dir())) {
        if (p.stem().string().rfind("neg_", 0) == 0) continue;
        std::string src = slurp(p);
        TermP lowered = lower(parse(src, corpus_options(p)));
        bool untyped_val = false;
        for (auto at = src.find("val "); at != std::string::npos; at = src.find("val ", at + 1)) {
            auto eq = src.find('=', at), colon = src.find(':', at), end = src.find(';', at);
            bool scoped = src.substr(at, end - at).find("scoped") != std::string::npos;
            untyped_val |= !scoped && (colon == std::string::npos || colon > eq);
        }
        CHECK(has_holes(lowered) == untyped_val);
        with_vals += untyped_val;
        CHECK_FALSE(has_holes(elaborate(lowered)));
    }
    CHECK(with_vals > 5);
}

}
