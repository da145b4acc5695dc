#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "oracle.hpp"
#include "relalg/dsl.hpp"

using namespace relalg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<fs::path> fixtures() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(RELALG_FIXTURES))
        if (e.path().extension() == ".ral") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("empty input") {
    auto r = dsl::parse("");
    CHECK(r.ok());
    CHECK(r.document.decls.empty());
    CHECK(dsl::parse("  # only a comment\n// and another\n").document.decls.empty());
    CHECK(dsl::serialize(r.document).empty());
}

TEST_CASE("intro laws parse and resolve") {
    auto r = dsl::parse(slurp(fs::path(RELALG_FIXTURES) / "intro.ral"));
    REQUIRE(r.ok());
    auto res = dsl::resolve(r.document);
    REQUIRE(res.ok());
    const auto& m = res.model;
    const auto& intro = m.equations.at("intro").equation;
    CHECK(intro.variables == std::vector<std::string>{"x", "y"});
    CHECK(intro.c == std::optional<std::size_t>{3});
    const auto& sig = m.algebras.at("Join").algebra.carrier().signature();
    CHECK(dsl::show_equation(intro, sig, m.operations.at("Bin").base()) == "=:1/2(x, y) |- =:1/4(m(x, y), m(y, x))");
    CHECK(m.structures.at("Near").elements == std::vector<std::string>{"a", "b"});
    CHECK(m.structure("Near")->structure.holds(sig.index("=:1/2"), Tuple{0, 1}));
    CHECK_FALSE(m.structure("Near")->structure.holds(sig.index("=:1/4"), Tuple{0, 1}));
    CHECK(m.checks.size() == 6);
    CHECK(oracle::satisfies_equation(m.algebras.at("Join").algebra, intro).satisfied);
    CHECK_FALSE(oracle::satisfies_equation(m.algebras.at("FirstNear").algebra, intro).satisfied);
}

TEST_CASE("fixture corpus round-trips") {
    std::size_t count = 0;
    for (const auto& p : fixtures()) {
        INFO(p.filename().string());
        auto first = dsl::parse(slurp(p));
        if (p.filename() == "bad_arity.ral") continue;
        REQUIRE(first.ok());
        auto text = dsl::serialize(first.document);
        auto second = dsl::parse(text);
        REQUIRE(second.ok());
        CHECK(second.document == first.document);
        CHECK(dsl::serialize(second.document) == text);
        ++count;
    }
    CHECK(count >= 12);
}

TEST_CASE("diagnostics are located") {
    auto r = dsl::parse("signature S {\n  rel leq/0;\n}\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message == "relational arity must be ≥ 1");
    CHECK(r.diagnostics[0].loc.line == 2);
    CHECK(r.diagnostics[0].loc.column == 11);
    CHECK(dsl::describe(r.diagnostics[0]) == "2:11: syntax error: relational arity must be ≥ 1");

    auto lex = dsl::parse("lattice L = {0, 1};\nsignature S = gmet(L) $;\n");
    REQUIRE_FALSE(lex.ok());
    CHECK(lex.diagnostics[0].kind == dsl::Diagnostic::Kind::Lexical);
    CHECK(lex.diagnostics[0].loc.line == 2);
    CHECK(lex.diagnostics[0].loc.column == 23);

    auto syn = dsl::parse("signature P = poset\nstructure X over P { elements a; }\n");
    REQUIRE_FALSE(syn.ok());
    CHECK(syn.diagnostics[0].kind == dsl::Diagnostic::Kind::Syntax);
    CHECK(syn.diagnostics[0].message == "expected ';', found 'structure'");
    CHECK(syn.diagnostics[0].loc.line == 2);

    // unknown names parse fine and fail in resolution
    auto names = dsl::parse("signature P = poset;\nstructure X over P { elements a; foo { (a, a) } }\ncheck X in Nope;\n");
    REQUIRE(names.ok());
    auto res = dsl::resolve(names.document);
    REQUIRE(res.diagnostics.size() == 2);
    CHECK(res.diagnostics[0].kind == dsl::Diagnostic::Kind::Resolution);
    CHECK(res.diagnostics[0].message == "unknown relation 'foo'");
    CHECK(res.diagnostics[0].loc.line == 2);
    CHECK(res.diagnostics[1].loc.line == 3);
}

TEST_CASE("resolution errors") {
    auto run = [](const std::string& text) {
        auto p = dsl::parse(text);
        REQUIRE(p.ok());
        auto r = dsl::resolve(p.document);
        REQUIRE(r.diagnostics.size() == 1);
        return r.diagnostics[0].message;
    };
    const std::string pre = "signature P = poset;\noperations O { op m/2 : product; }\n"
                            "structure X over P { elements a, b; leq { (a, a), (b, b) } }\n";
    CHECK(run(pre + "algebra A = X with O { m(a, a) = a; }\n") == "missing entry m(a, b)");
    CHECK(run(pre + "algebra A = X with O { m(a) = a; }\n") == "'m' takes 2 arguments");
    CHECK(run(pre + "map f : X -> X { a -> b; }\n") == "element 'b' is not mapped");
    CHECK(run(pre + "structure X over P { elements c; }\n") == "duplicate structure or algebra 'X'");
    CHECK(run(pre + "equation e over P with O { |- m(x) = x; }\n") == "'m' takes 2 arguments");
    CHECK(run("operations O { op m/2 : lk(2); }\n").find("lk parameter") != std::string::npos);
    CHECK(run("signature P = poset;\naxioms A over P = gmet(Refl);\n") == "signature 'P' is not a gmet signature");
}

TEST_CASE("parser totality under mutation") {
    auto g = corpus::rng(91);
    std::vector<std::string> texts;
    for (const auto& p : fixtures()) texts.push_back(slurp(p));
    const std::string alphabet = "{}(),;:=/-|#ab01 \n=:leq";
    std::size_t rejected = 0;
    for (int i = 0; i < 3000; ++i) {
        std::string t = texts[static_cast<std::size_t>(i) % texts.size()];
        int edits = 1 + static_cast<int>(g() % 4);
        for (int k = 0; k < edits && !t.empty(); ++k) {
            std::size_t at = g() % t.size();
            switch (g() % 3) {
                case 0: t.erase(at, 1 + g() % 3); break;
                case 1: t.insert(at, 1, alphabet[g() % alphabet.size()]); break;
                default: t[at] = static_cast<char>(g() % 256);
            }
        }
        dsl::ParseResult r;
        CHECK_NOTHROW(r = dsl::parse(t));
        if (!r.ok()) {
            ++rejected;
            for (const auto& d : r.diagnostics) CHECK(d.loc.line >= 1);
            continue;
        }
        CHECK_NOTHROW(dsl::resolve(r.document));
        CHECK(dsl::parse(dsl::serialize(r.document)).document == r.document);
    }
    CHECK(rejected > 0);
}

TEST_CASE("translated equations read back") {
    auto p = dsl::parse(slurp(fs::path(RELALG_FIXTURES) / "translate.ral"));
    auto res = dsl::resolve(p.document);
    REQUIRE(res.ok());
    const auto& m = res.model;
    const auto& join = m.algebras.at("Join");
    const auto& x = m.structures.at("X");
    auto slice = build_free_slice(x.structure, join.algebra.signature(), 1);
    auto e = extend_on_slice(m.maps.at("h").table, join.algebra, slice);
    auto tr = translate_abstract_equation({x.structure, join.algebra.signature(), 1, e, join.algebra, 3});
    std::string doc = "lattice Q4 = {0, 1/4, 1/2, 3/4, 1};\nsignature M = gmet(Q4);\noperations Bin { op m/2 : product; }\n";
    for (std::size_t i = 0; i < tr.equations.size(); ++i)
        doc += "equation t" + std::to_string(i) + " over M with Bin cluster 3 { " +
               dsl::show_equation(tr.equations[i], x.structure.signature(), join.algebra.signature().base()) + "; }\n";
    auto back = dsl::resolve(dsl::parse(doc).document);
    REQUIRE(back.ok());
    for (std::size_t i = 0; i < tr.equations.size(); ++i) {
        auto eq = back.model.equations.at("t" + std::to_string(i)).equation;
        eq.name = tr.equations[i].name;
        CHECK(eq.premises == tr.equations[i].premises);
        CHECK(eq.conclusion == tr.equations[i].conclusion);
    }
}
