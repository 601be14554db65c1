#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arena/term.hpp"
#include "arena/types.hpp"

namespace arena {

struct STerm;
using STermP = std::shared_ptr<const STerm>;

namespace surf {

struct Lit {
    BaseKind kind;
    std::int64_t value = 0;
};
struct VarRef {
    Name x;
};
struct Lambda {
    std::optional<Name> self;
    Name x;
    QType dom, cod;
    Qualifier cap;
    STermP body;
};
struct TypeLambda {
    std::optional<Name> self;
    Name X, x;
    QType bound, cod;
    Qualifier cap;
    STermP body;
};
struct Apply {
    STermP fn, arg;
};
struct TypeApply {
    STermP fn;
    QType arg;
};
struct NewRef {
    STermP init;
};
struct NewRefAt {
    STermP init, proxy;
};
struct NewRefScoped {
    STermP init;
};
struct DerefS {
    STermP ref;
};
struct AssignS {
    STermP ref, rhs;
};
struct Annot {
    STermP e;
    QType ty;
};

struct ValBind {
    Name x;
    std::optional<QType> ty;
    STermP rhs;
};
// `def f(...)` keeps its lambda; the lambda's self name is f.
struct FunDef {
    Name f;
    STermP fn;
};
struct ExprStmt {
    STermP e;
};
using Stmt = std::variant<ValBind, FunDef, ExprStmt>;

struct Block {
    std::vector<std::pair<Stmt, Span>> stmts;
    STermP result;
};

// core-only forms
struct WithS {
    Name x;
    STermP init, body;
};
struct CloseS {
    Loc l;
    STermP body;
};
struct LocS {
    Loc l;
    std::uint32_t off;
};
struct PrimS {
    PrimOp op;
    STermP lhs, rhs;
};
struct IfZeroS {
    STermP cond, then_, else_;
};

}  // namespace surf

struct STerm {
    std::variant<surf::Lit, surf::VarRef, surf::Lambda, surf::TypeLambda, surf::Apply, surf::TypeApply,
                 surf::NewRef, surf::NewRefAt, surf::NewRefScoped, surf::DerefS, surf::AssignS, surf::Annot,
                 surf::Block, surf::WithS, surf::CloseS, surf::LocS, surf::PrimS, surf::IfZeroS>
        node;
    Span span;
};

template <class N>
const N* as(const STermP& t) {
    return t ? std::get_if<N>(&t->node) : nullptr;
}

struct ParseOptions {
    // core syntax: `with x = Ref(t) in t`, no val/def/scoped/blocks/annotations
    bool core = false;
    // runtime forms `with<ℓN>{ t }` and `ℓN·M` (implies core)
    bool dynamic = false;
    // `+ - *` and `ifz c then a else b`
    bool ext_int = false;
};

class ParseError : public std::runtime_error {
public:
    ParseError(Span span, std::vector<std::string> expected, const std::string& found);
    Span span;
    std::vector<std::string> expected;
    std::string found;
};

class LoweringError : public std::runtime_error {
public:
    LoweringError(Span span, const std::string& msg) : std::runtime_error(msg), span(span) {}
    Span span;
};

STermP parse(std::string_view text, const ParseOptions& opts = {});
QType parse_qtype(std::string_view text);

// Structural translation. `val` bindings become applications of lambdas
// whose annotations are left open for `elaborate`.
TermP lower(const STermP& s);

// Fills the open annotations left by `lower` using synthesized types.
// Throws TypeError when a right-hand side does not type.
TermP elaborate(const TermP& t);

bool has_holes(const TermP& t);

// parse + lower + elaborate
TermP compile(std::string_view text, const ParseOptions& opts = {});

}  // namespace arena
