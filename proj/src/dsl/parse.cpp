#include <cctype>
#include <charconv>
#include <limits>

#include "relalg/dsl.hpp"

namespace relalg::dsl {

std::string describe(const Diagnostic& d) {
    const char* kind = d.kind == Diagnostic::Kind::Lexical ? "lexical" : d.kind == Diagnostic::Kind::Syntax ? "syntax" : "resolution";
    return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " + kind + " error: " + d.message;
}

namespace {

enum class Tok { Ident, Int, QRel, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Loc loc;
};

struct Failure {
    Diagnostic diag;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run(std::vector<Diagnostic>& diags) {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Loc loc{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", loc});
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                               src_[pos_] == '\''))
                    advance();
                out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), loc});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back({Tok::Int, digits(), loc});
            } else if (c == '=' && peek(1) == ':') {
                advance();
                advance();
                if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    diags.push_back({Diagnostic::Kind::Lexical, loc, "expected a quantity after '=:'"});
                    continue;
                }
                std::string text = "=:" + digits();
                if (pos_ < src_.size() && src_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                    advance();
                    text += "/" + digits();
                }
                out.push_back({Tok::QRel, text, loc});
            } else if (c == '-' && peek(1) == '>') {
                advance();
                advance();
                out.push_back({Tok::Punct, "->", loc});
            } else if (c == '|' && peek(1) == '-') {
                advance();
                advance();
                out.push_back({Tok::Punct, "|-", loc});
            } else if (std::string_view("{}(),;:=/").find(c) != std::string_view::npos) {
                advance();
                out.push_back({Tok::Punct, std::string(1, c), loc});
            } else {
                std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + hex(c);
                diags.push_back({Diagnostic::Kind::Lexical, loc, "unexpected character '" + shown + "'"});
                advance();
            }
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            ++col_;  // count code points, not UTF-8 continuation bytes
        }
        ++pos_;
    }

    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        return std::string(src_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#' || (c == '/' && peek(1) == '/')) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    static std::string hex(char c) {
        const char* digits = "0123456789abcdef";
        auto u = static_cast<unsigned char>(c);
        return {digits[u >> 4], digits[u & 15]};
    }
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : toks_(std::move(toks)), diags_(diags) {}

    Document run() {
        Document doc;
        while (peek().kind != Tok::End) {
            std::size_t start = pos_;
            try {
                doc.decls.push_back(decl());
            } catch (const Failure& f) {
                diags_.push_back(f.diag);
                pos_ = start;
                recover();
            }
        }
        return doc;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Loc& loc, const std::string& msg) const {
        throw Failure{{Diagnostic::Kind::Syntax, loc, msg}};
    }
    [[noreturn]] void expected(const std::string& what) const {
        const auto& t = peek();
        fail(t.loc, "expected " + what + ", found " + (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
    }

    bool is(const char* punct, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == punct; }
    bool is_kw(const char* kw, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == kw; }
    bool accept(const char* punct) {
        if (!is(punct)) return false;
        next();
        return true;
    }
    void expect(const char* punct) {
        if (!accept(punct)) expected(std::string("'") + punct + "'");
    }
    void expect_kw(const char* kw) {
        if (!is_kw(kw)) expected(std::string("'") + kw + "'");
        next();
    }
    std::string ident(const char* what = "a name") {
        if (peek().kind != Tok::Ident) expected(what);
        return next().text;
    }
    int integer(const char* what = "an integer") {
        if (peek().kind != Tok::Int) expected(what);
        const auto& t = next();
        int v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t.loc, "integer out of range: " + t.text);
        return v;
    }
    Rational rational() {
        Loc loc = peek().loc;
        std::int64_t n = integer("a number"), d = 1;
        if (accept("/")) d = integer("a denominator");
        if (d == 0) fail(loc, "zero denominator");
        return Rational(n, d);
    }
    std::string relname() {
        if (peek().kind == Tok::QRel) {
            const auto& t = next();
            try {
                return quantity_symbol_name(Rational::parse(std::string_view(t.text).substr(2)));
            } catch (const Error& e) {
                fail(t.loc, e.what());
            }
        }
        return ident("a relation symbol");
    }

    // Skip a whole declaration: up to the first ';' outside braces or the
    // brace that closes its body.
    void recover() {
        int depth = 0;
        if (peek().kind != Tok::End) next();
        while (peek().kind != Tok::End) {
            const auto& t = next();
            if (t.kind != Tok::Punct) continue;
            if (t.text == "{") ++depth;
            if (t.text == "}" && --depth <= 0) return;
            if (t.text == ";" && depth == 0) return;
        }
    }

    template <class F>
    void list(const char* close, F&& item) {
        if (is(close)) return;
        do item();
        while (accept(","));
    }

    Decl decl() {
        if (peek().kind != Tok::Ident) expected("a declaration");
        const auto& kw = peek().text;
        if (kw == "lattice") return lattice();
        if (kw == "signature") return signature();
        if (kw == "operations") return operations();
        if (kw == "axioms") return axioms();
        if (kw == "structure") return structure();
        if (kw == "algebra") return algebra();
        if (kw == "map") return map();
        if (kw == "equation") return equation();
        if (kw == "check") return check();
        expected("a declaration");
    }

    LatticeDecl lattice() {
        LatticeDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect("=");
        expect("{");
        list("}", [&] { d.values.push_back(rational()); });
        expect("}");
        expect(";");
        return d;
    }

    SymbolDecl symbol(bool relational) {
        SymbolDecl s;
        s.loc = peek().loc;
        s.name = ident("a symbol name");
        expect("/");
        Loc arity_loc = peek().loc;
        s.arity = integer("an arity");
        if (relational && s.arity < 1) diags_.push_back({Diagnostic::Kind::Syntax, arity_loc, "relational arity must be ≥ 1"});
        expect(";");
        return s;
    }

    SignatureDecl signature() {
        SignatureDecl d;
        d.loc = next().loc;
        d.name = ident();
        if (accept("=")) {
            if (is_kw("gmet")) {
                next();
                d.kind = SignatureDecl::Kind::Gmet;
                expect("(");
                d.lattice = ident("a lattice name");
                expect(")");
                expect(";");
            } else if (is_kw("poset")) {
                next();
                d.kind = SignatureDecl::Kind::Poset;
                expect(";");
            } else if (is_kw("partial")) {
                next();
                d.kind = SignatureDecl::Kind::Partial;
                expect("{");
                while (!is("}")) d.symbols.push_back(symbol(false));
                expect("}");
            } else {
                expected("'gmet', 'poset' or 'partial'");
            }
            return d;
        }
        expect("{");
        while (!is("}")) {
            expect_kw("rel");
            d.symbols.push_back(symbol(true));
        }
        expect("}");
        return d;
    }

    LiftingAst lifting() {
        LiftingAst l;
        Loc loc = peek().loc;
        l.kind = ident("a lifting");
        if (l.kind == "discrete" || l.kind == "product") return l;
        expect("(");
        if (l.kind == "subset") {
            list(")", [&] { l.coordinates.push_back(integer("a coordinate")); });
        } else if (l.kind == "lex") {
            l.symbol = relname();
        } else if (l.kind == "lipschitz" || l.kind == "lk") {
            l.parameter = rational();
        } else {
            fail(loc, "unknown lifting '" + l.kind + "'");
        }
        expect(")");
        return l;
    }

    OperationsDecl operations() {
        OperationsDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect("{");
        while (!is("}")) {
            expect_kw("op");
            OpDecl op;
            op.loc = peek().loc;
            op.name = ident("an operation name");
            expect("/");
            op.arity = integer("an arity");
            expect(":");
            op.lifting = lifting();
            expect(";");
            d.ops.push_back(std::move(op));
        }
        expect("}");
        return d;
    }

    AtomAst atom() {
        AtomAst a;
        a.loc = peek().loc;
        a.rel = relname();
        expect("(");
        list(")", [&] { a.args.push_back(ident("a variable")); });
        expect(")");
        return a;
    }

    // [label ':'] atom, ... |- (atom | x = y) ';'
    ClauseAst clause() {
        ClauseAst c;
        c.loc = peek().loc;
        if (peek().kind == Tok::Ident && is(":", 1)) {
            c.label = next().text;
            next();
        }
        if (!is("|-")) list("|-", [&] { c.premises.push_back(atom()); });
        expect("|-");
        if (peek().kind == Tok::Ident && is("=", 1)) {
            EqualityAst e;
            e.loc = peek().loc;
            e.lhs = next().text;
            next();
            e.rhs = ident("a variable");
            c.conclusion = e;
        } else {
            c.conclusion = atom();
        }
        expect(";");
        return c;
    }

    AxiomsDecl axioms() {
        AxiomsDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect_kw("over");
        d.signature = ident("a signature name");
        if (accept("=")) {
            Loc loc = peek().loc;
            auto kind = ident("a preset");
            if (kind == "gmet") {
                d.kind = AxiomsDecl::Kind::Gmet;
                expect("(");
                list(")", [&] { d.flags.push_back(ident("a metric axiom")); });
                expect(")");
            } else if (kind == "poset") {
                d.kind = AxiomsDecl::Kind::Poset;
            } else if (kind == "lvalued") {
                d.kind = AxiomsDecl::Kind::Lvalued;
            } else if (kind == "partial") {
                d.kind = AxiomsDecl::Kind::Partial;
            } else {
                fail(loc, "unknown preset '" + kind + "'");
            }
            expect(";");
            return d;
        }
        expect("{");
        while (!is("}")) d.clauses.push_back(clause());
        expect("}");
        return d;
    }

    std::vector<std::string> tuple() {
        std::vector<std::string> t;
        expect("(");
        list(")", [&] { t.push_back(ident("an element")); });
        expect(")");
        return t;
    }

    StructureDecl structure() {
        StructureDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect_kw("over");
        d.signature = ident("a signature name");
        expect("{");
        expect_kw("elements");
        list(";", [&] { d.elements.push_back(ident("an element")); });
        expect(";");
        while (!is("}")) {
            if (is_kw("metric") && is("{", 1)) {
                Loc loc = next().loc;
                if (d.metric) fail(loc, "duplicate metric block");
                d.metric.emplace();
                expect("{");
                while (!is("}")) {
                    DistanceEntry e;
                    e.loc = peek().loc;
                    e.a = ident("an element");
                    e.b = ident("an element");
                    expect(":");
                    e.d = rational();
                    expect(";");
                    d.metric->push_back(std::move(e));
                }
                expect("}");
                continue;
            }
            RelationBlock b;
            b.loc = peek().loc;
            b.rel = relname();
            expect("{");
            list("}", [&] { b.tuples.push_back(tuple()); });
            expect("}");
            d.relations.push_back(std::move(b));
        }
        expect("}");
        return d;
    }

    AlgebraDecl algebra() {
        AlgebraDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect("=");
        d.carrier = ident("a structure name");
        expect_kw("with");
        d.operations = ident("an operations name");
        expect("{");
        while (!is("}")) {
            TableEntry e;
            e.loc = peek().loc;
            e.op = ident("an operation name");
            e.args = tuple();
            expect("=");
            e.value = ident("an element");
            expect(";");
            d.entries.push_back(std::move(e));
        }
        expect("}");
        return d;
    }

    MapDecl map() {
        MapDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect(":");
        d.from = ident("a structure or algebra name");
        expect("->");
        d.to = ident("a structure or algebra name");
        expect("{");
        while (!is("}")) {
            auto a = ident("an element");
            expect("->");
            auto b = ident("an element");
            expect(";");
            d.pairs.emplace_back(std::move(a), std::move(b));
        }
        expect("}");
        return d;
    }

    TermAst term(int depth = 0) {
        if (depth > 256) fail(peek().loc, "term nested too deeply");
        TermAst t;
        t.loc = peek().loc;
        t.head = ident("a term");
        if (accept("(")) {
            t.application = true;
            list(")", [&] { t.args.push_back(term(depth + 1)); });
            expect(")");
        }
        return t;
    }

    EquationDecl equation() {
        EquationDecl d;
        d.loc = next().loc;
        d.name = ident();
        expect_kw("over");
        d.signature = ident("a signature name");
        expect_kw("with");
        d.operations = ident("an operations name");
        if (is_kw("cluster")) {
            next();
            if (is_kw("inf")) {
                next();
            } else {
                Loc loc = peek().loc;
                int c = integer("a cluster bound");
                if (c < 1) fail(loc, "cluster bound must be >= 1");
                d.cluster = static_cast<std::size_t>(c);
            }
        }
        expect("{");
        if (!is("|-")) list("|-", [&] { d.premises.push_back(atom()); });
        expect("|-");
        if (peek().kind == Tok::QRel) {
            RelationOnTermsAst r;
            r.rel = relname();
            expect("(");
            list(")", [&] { r.terms.push_back(term()); });
            expect(")");
            d.conclusion = std::move(r);
        } else {
            auto lhs = term();
            if (accept("=")) {
                d.conclusion = TermEqualityAst{std::move(lhs), term()};
            } else if (lhs.application) {
                d.conclusion = RelationOnTermsAst{lhs.head, std::move(lhs.args)};
            } else {
                expected("'=' or a relational conclusion");
            }
        }
        expect(";");
        expect("}");
        return d;
    }

    CheckDecl check() {
        CheckDecl d;
        d.loc = next().loc;
        d.subject = ident();
        if (is_kw("in")) {
            d.kind = CheckDecl::Kind::Member;
        } else if (is_kw("satisfies")) {
            d.kind = CheckDecl::Kind::Satisfies;
        } else {
            expected("'in' or 'satisfies'");
        }
        next();
        d.target = ident();
        expect(";");
        return d;
    }
};

}  // namespace

ParseResult parse(std::string_view text) {
    ParseResult r;
    auto toks = Lexer(text).run(r.diagnostics);
    r.document = Parser(std::move(toks), r.diagnostics).run();
    return r;
}

}  // namespace relalg::dsl
