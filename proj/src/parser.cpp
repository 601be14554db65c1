#include <cctype>
#include <set>
#include <sstream>

#include "arena/surface.hpp"

namespace arena {

ParseError::ParseError(Span span, std::vector<std::string> expected, const std::string& found)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "expected ";
          if (expected.size() > 1) os << "one of ";
          for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
          os << " but found " << found;
          return os.str();
      }()),
      span(span),
      expected(std::move(expected)),
      found(found) {}

namespace {

enum class Tok { Ident, Int, Loc, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    Span span;
    std::int64_t value = 0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Int: return "integer " + t.text;
        default: return "'" + t.text + "'";
    }
}

const std::set<std::string> kKeywords = {"val",  "def",  "fun", "tfun", "new",   "Ref",   "at",
                                         "scoped", "true", "false", "with", "in", "ifz", "then",
                                         "else", "forall", "Int", "Unit", "Bool", "Top"};

class Lexer {
public:
    explicit Lexer(std::string_view src) : s_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip();
            Span sp{line_, col_};
            if (i_ >= s_.size()) {
                out.push_back({Tok::End, "", sp});
                return out;
            }
            unsigned char c = s_[i_];
            if (std::isalpha(c) || c == '_') {
                std::size_t b = i_;
                while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                    adv(1);
                out.push_back({Tok::Ident, std::string(s_.substr(b, i_ - b)), sp});
            } else if (std::isdigit(c)) {
                std::size_t b = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) adv(1);
                std::string txt(s_.substr(b, i_ - b));
                Token t{Tok::Int, txt, sp};
                try {
                    t.value = std::stoll(txt);
                } catch (const std::out_of_range&) {
                    throw ParseError(sp, {"integer literal in range"}, txt);
                }
                out.push_back(t);
            } else if (starts("ℓ")) {
                adv(std::string_view("ℓ").size());
                std::size_t b = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) adv(1);
                if (b == i_) throw ParseError(sp, {"location number"}, "'ℓ'");
                std::string txt(s_.substr(b, i_ - b));
                out.push_back({Tok::Loc, "ℓ" + txt, sp, std::stoll(txt)});
            } else if (starts("·")) {
                adv(std::string_view("·").size());
                out.push_back({Tok::Punct, "·", sp});
            } else if (starts("◇")) {
                adv(std::string_view("◇").size());
                out.push_back({Tok::Punct, "*", sp});
            } else {
                static const char* multi[] = {":=", "=>", "<:"};
                bool done = false;
                for (const char* m : multi)
                    if (starts(m)) {
                        adv(2);
                        out.push_back({Tok::Punct, m, sp});
                        done = true;
                        break;
                    }
                if (done) continue;
                static const std::string single = "(){}[],;:^!+-*=<>";
                if (single.find(static_cast<char>(c)) == std::string::npos)
                    throw ParseError(sp, {"token"}, "character '" + std::string(1, static_cast<char>(c)) + "'");
                adv(1);
                out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), sp});
            }
        }
    }

private:
    bool starts(std::string_view p) const { return s_.substr(i_, p.size()) == p; }
    void adv(std::size_t n) {
        for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
            if (s_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
                ++col_;
            }
        }
    }
    void skip() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) adv(1);
            if (starts("//")) {
                while (i_ < s_.size() && s_[i_] != '\n') adv(1);
                continue;
            }
            return;
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, ParseOptions opts) : toks_(std::move(toks)), opts_(opts) {
        if (opts_.dynamic) opts_.core = true;
    }

    STermP program() {
        STermP t;
        if (opts_.core) {
            t = expr();
        } else {
            Span sp = peek().span;
            t = make(block_body(Tok::End, ""), sp);
        }
        if (peek().kind != Tok::End) fail({"end of input"});
        return t;
    }

    QType qtype_only() {
        QType q = qtype();
        if (peek().kind != Tok::End) fail({"end of input"});
        return q;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is(const char* p, std::size_t k = 0) const {
        const Token& t = peek(k);
        return t.kind == Tok::Punct && t.text == p;
    }
    bool is_kw(const char* k, std::size_t off = 0) const {
        const Token& t = peek(off);
        return t.kind == Tok::Ident && t.text == k;
    }
    bool is_ident(std::size_t k = 0) const {
        const Token& t = peek(k);
        return t.kind == Tok::Ident && !kKeywords.count(t.text);
    }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(peek().span, std::move(expected), describe(peek()));
    }
    void expect(const char* p) {
        if (!is(p)) fail({std::string("'") + p + "'"});
        next();
    }
    void expect_kw(const char* k) {
        if (!is_kw(k)) fail({std::string("'") + k + "'"});
        next();
    }
    Name ident() {
        if (!is_ident()) fail({"identifier"});
        return next().text;
    }

    template <class N>
    static STermP make(N n, Span sp) {
        return std::make_shared<const STerm>(STerm{std::move(n), sp});
    }

    // ---- qualifiers and types

    Qualifier qualifier() {
        expect("{");
        Qualifier q;
        if (is("}")) {
            next();
            return q;
        }
        for (;;) {
            if (is("*")) {
                next();
                q.fresh = true;
            } else if (peek().kind == Tok::Loc) {
                q.locs.insert(static_cast<Loc>(next().value));
            } else if (is_ident()) {
                q.vars.insert(next().text);
            } else {
                fail({"variable", "location", "'*'"});
            }
            if (is(",")) {
                next();
                continue;
            }
            expect("}");
            return q;
        }
    }

    QType qtype() {
        TypeP t = type();
        Qualifier q;
        if (is("^")) {
            next();
            q = qualifier();
        }
        return qt(t, q);
    }

    TypeP type() {
        if (is_kw("Int")) return next(), int_type();
        if (is_kw("Unit")) return next(), unit_type();
        if (is_kw("Bool")) return next(), bool_type();
        if (is_kw("Top")) return next(), top_type();
        if (is_kw("Ref")) {
            next();
            expect("[");
            QType inner = qtype();
            expect("]");
            return ref_type(inner);
        }
        if (is_ident()) return tvar_type(next().text);
        if (is("(")) {
            next();
            if (is_kw("forall")) {
                next();
                Name self = is_ident() ? next().text : Name("_f");
                expect("[");
                Name X = ident();
                expect("^");
                Name x = ident();
                expect("<:");
                QType bound = qtype();
                expect("]");
                expect("=>");
                QType cod = qtype();
                expect(")");
                return all_type(self, X, x, bound, cod);
            }
            if (is_ident() && is("(", 1)) {
                Name self = next().text;
                next();
                Name x = ident();
                expect(":");
                QType dom = qtype();
                expect(")");
                expect("=>");
                QType cod = qtype();
                expect(")");
                return fun_type(self, x, dom, cod);
            }
            if (is_ident() && is(":", 1)) {
                Name x = next().text;
                next();
                QType dom = qtype();
                expect(")");
                expect("=>");
                QType cod = qtype();
                return fun_type("_f", x, dom, cod);
            }
            QType inner = qtype();
            if (is("=>")) {
                next();
                QType cod = qtype();
                expect(")");
                return fun_type("_f", "_x", inner, cod);
            }
            if (!inner.q.vars.empty() || !inner.q.locs.empty() || inner.q.fresh) fail({"'=>'"});
            expect(")");
            return inner.ty;
        }
        fail({"type"});
    }

    // ---- terms

    surf::Block block_body(Tok end_kind, const char* end_punct) {
        auto at_end = [&] { return end_kind == Tok::End ? peek().kind == Tok::End : is(end_punct); };
        surf::Block b;
        for (;;) {
            if (at_end()) fail({"expression"});
            Span sp = peek().span;
            if (is_kw("val") || is_kw("def")) {
                b.stmts.emplace_back(is_kw("val") ? surf::Stmt(val_stmt()) : surf::Stmt(def_stmt()), sp);
                expect(";");
                continue;
            }
            STermP e = expr();
            if (is(";")) {
                next();
                if (at_end()) {
                    b.result = e;
                    return b;
                }
                b.stmts.emplace_back(surf::ExprStmt{e}, sp);
                continue;
            }
            if (at_end()) {
                b.result = e;
                return b;
            }
            fail({"';'", end_kind == Tok::End ? "end of input" : std::string("'") + end_punct + "'"});
        }
    }

    surf::ValBind val_stmt() {
        expect_kw("val");
        surf::ValBind v;
        v.x = ident();
        if (is(":")) {
            next();
            v.ty = qtype();
        }
        expect("=");
        v.rhs = expr();
        return v;
    }

    surf::FunDef def_stmt() {
        Span sp = peek().span;
        expect_kw("def");
        Qualifier cap = is("{") ? qualifier() : Qualifier{};
        Name f = ident();
        if (is("[")) {
            next();
            surf::TypeLambda l;
            l.self = f;
            l.cap = cap;
            l.X = ident();
            expect("^");
            l.x = ident();
            expect("<:");
            l.bound = qtype();
            expect("]");
            expect(":");
            l.cod = qtype();
            expect("=");
            l.body = expr();
            return {f, make(std::move(l), sp)};
        }
        surf::Lambda l;
        l.self = f;
        l.cap = cap;
        expect("(");
        l.x = ident();
        expect(":");
        l.dom = qtype();
        expect(")");
        expect(":");
        l.cod = qtype();
        expect("=");
        l.body = expr();
        return {f, make(std::move(l), sp)};
    }

    STermP expr() {
        Span sp = peek().span;
        if (is_kw("fun")) return lambda();
        if (is_kw("tfun")) return type_lambda();
        if (is_kw("ifz")) {
            if (!opts_.ext_int) fail({"expression"});
            next();
            STermP c = expr();
            expect_kw("then");
            STermP a = expr();
            expect_kw("else");
            STermP b = expr();
            return make(surf::IfZeroS{c, a, b}, sp);
        }
        if (is_kw("with") && is_ident(1)) {
            if (!opts_.core) fail({"expression"});
            next();
            Name x = ident();
            expect("=");
            expect_kw("Ref");
            expect("(");
            STermP init = expr();
            expect(")");
            expect_kw("in");
            STermP body = expr();
            return make(surf::WithS{x, init, body}, sp);
        }
        STermP lhs = sum();
        if (is(":=")) {
            next();
            STermP rhs = expr();
            return make(surf::AssignS{lhs, rhs}, sp);
        }
        return lhs;
    }

    STermP lambda() {
        Span sp = peek().span;
        expect_kw("fun");
        surf::Lambda l;
        if (is("{")) l.cap = qualifier();
        if (is_ident()) l.self = next().text;
        expect("(");
        l.x = ident();
        expect(":");
        l.dom = qtype();
        expect(")");
        expect(":");
        l.cod = qtype();
        expect("=>");
        l.body = expr();
        return make(std::move(l), sp);
    }

    STermP type_lambda() {
        Span sp = peek().span;
        expect_kw("tfun");
        surf::TypeLambda l;
        if (is("{")) l.cap = qualifier();
        if (is_ident()) l.self = next().text;
        expect("[");
        l.X = ident();
        expect("^");
        l.x = ident();
        expect("<:");
        l.bound = qtype();
        expect("]");
        expect(":");
        l.cod = qtype();
        expect("=>");
        l.body = expr();
        return make(std::move(l), sp);
    }

    STermP sum() {
        if (!opts_.ext_int) return unary();
        STermP lhs = product();
        while (is("+") || is("-")) {
            Span sp = peek().span;
            PrimOp op = next().text == "+" ? PrimOp::Add : PrimOp::Sub;
            lhs = make(surf::PrimS{op, lhs, product()}, sp);
        }
        return lhs;
    }

    STermP product() {
        STermP lhs = unary();
        while (is("*")) {
            Span sp = peek().span;
            next();
            lhs = make(surf::PrimS{PrimOp::Mul, lhs, unary()}, sp);
        }
        return lhs;
    }

    STermP unary() {
        Span sp = peek().span;
        if (is("!")) {
            next();
            return make(surf::DerefS{unary()}, sp);
        }
        if (is("-") && peek(1).kind == Tok::Int) {
            next();
            return make(surf::Lit{BaseKind::Int, -next().value}, sp);
        }
        return postfix();
    }

    STermP postfix() {
        STermP t = primary();
        for (;;) {
            Span sp = peek().span;
            if (is("(")) {
                next();
                STermP arg = expr();
                expect(")");
                t = make(surf::Apply{t, arg}, sp);
            } else if (is("[")) {
                next();
                QType arg = qtype();
                expect("]");
                t = make(surf::TypeApply{t, arg}, sp);
            } else {
                return t;
            }
        }
    }

    STermP primary() {
        Span sp = peek().span;
        const Token& t = peek();
        if (t.kind == Tok::Int) return make(surf::Lit{BaseKind::Int, next().value}, sp);
        if (is_kw("true") || is_kw("false")) return make(surf::Lit{BaseKind::Bool, next().text == "true"}, sp);
        if (t.kind == Tok::Loc) {
            if (!opts_.dynamic) fail({"expression"});
            Loc l = static_cast<Loc>(next().value);
            expect("·");
            if (peek().kind != Tok::Int) fail({"offset"});
            return make(surf::LocS{l, static_cast<std::uint32_t>(next().value)}, sp);
        }
        if (is_kw("with") && is("<", 1)) {
            if (!opts_.dynamic) fail({"expression"});
            next();
            next();
            if (peek().kind != Tok::Loc) fail({"location"});
            Loc l = static_cast<Loc>(next().value);
            expect(">");
            expect("{");
            STermP body = expr();
            expect("}");
            return make(surf::CloseS{l, body}, sp);
        }
        if (is_kw("new")) {
            next();
            expect_kw("Ref");
            expect("(");
            STermP init = is(")") ? make(surf::Lit{BaseKind::Unit, 0}, peek().span) : expr();
            expect(")");
            if (is_kw("at")) {
                next();
                return make(surf::NewRefAt{init, postfix()}, sp);
            }
            if (is_kw("scoped")) {
                if (opts_.core) fail({"expression"});
                next();
                return make(surf::NewRefScoped{init}, sp);
            }
            return make(surf::NewRef{init}, sp);
        }
        if (is_kw("fun")) return lambda();
        if (is_kw("tfun")) return type_lambda();
        if (is("(")) {
            next();
            if (is(")")) {
                next();
                return make(surf::Lit{BaseKind::Unit, 0}, sp);
            }
            STermP e = expr();
            if (is(":") && !opts_.core) {
                next();
                QType ty = qtype();
                expect(")");
                return make(surf::Annot{e, ty}, sp);
            }
            expect(")");
            return e;
        }
        if (is("{") && !opts_.core) {
            next();
            surf::Block b = block_body(Tok::Punct, "}");
            expect("}");
            return make(std::move(b), sp);
        }
        if (is_ident()) return make(surf::VarRef{next().text}, sp);
        fail({"expression"});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ParseOptions opts_;
};

}  // namespace

STermP parse(std::string_view text, const ParseOptions& opts) {
    Parser p(Lexer(text).run(), opts);
    return p.program();
}

QType parse_qtype(std::string_view text) {
    ParseOptions o;
    o.dynamic = true;
    Parser p(Lexer(text).run(), o);
    return p.qtype_only();
}

}  // namespace arena
