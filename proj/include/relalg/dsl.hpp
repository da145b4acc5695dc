#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relalg/equations.hpp"
#include "relalg/quotients.hpp"

// The .ral specification language: syntax tree, parser, serializer and the
// resolver that turns a document into library objects.
namespace relalg::dsl {

struct Loc {
    int line = 1;
    int column = 1;
    // Locations never take part in AST comparison, so that a reparse of the
    // serialized text compares equal.
    friend bool operator==(const Loc&, const Loc&) { return true; }
};

struct Diagnostic {
    enum class Kind { Lexical, Syntax, Resolution };
    Kind kind = Kind::Syntax;
    Loc loc;
    std::string message;
};
std::string describe(const Diagnostic& d);

// --- syntax tree -----------------------------------------------------------

struct LatticeDecl {
    std::string name;
    std::vector<Rational> values;
    Loc loc;
    friend bool operator==(const LatticeDecl&, const LatticeDecl&) = default;
};

struct SymbolDecl {
    std::string name;
    int arity = 0;
    Loc loc;
    friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

struct SignatureDecl {
    enum class Kind { Explicit, Gmet, Poset, Partial };
    std::string name;
    Kind kind = Kind::Explicit;
    std::string lattice;              // Gmet
    std::vector<SymbolDecl> symbols;  // relation symbols, or the operations of a Partial signature
    Loc loc;
    friend bool operator==(const SignatureDecl&, const SignatureDecl&) = default;
};

struct LiftingAst {
    std::string kind;  // discrete product subset lex lipschitz lk
    std::vector<int> coordinates;
    std::string symbol;
    Rational parameter{0};
    friend bool operator==(const LiftingAst&, const LiftingAst&) = default;
};

struct OpDecl {
    std::string name;
    int arity = 0;
    LiftingAst lifting;
    Loc loc;
    friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

struct OperationsDecl {
    std::string name;
    std::vector<OpDecl> ops;
    Loc loc;
    friend bool operator==(const OperationsDecl&, const OperationsDecl&) = default;
};

struct AtomAst {
    std::string rel;
    std::vector<std::string> args;
    Loc loc;
    friend bool operator==(const AtomAst&, const AtomAst&) = default;
};

struct EqualityAst {
    std::string lhs, rhs;
    Loc loc;
    friend bool operator==(const EqualityAst&, const EqualityAst&) = default;
};

struct ClauseAst {
    std::string label;
    std::vector<AtomAst> premises;
    std::variant<AtomAst, EqualityAst> conclusion;
    Loc loc;
    friend bool operator==(const ClauseAst&, const ClauseAst&) = default;
};

struct AxiomsDecl {
    enum class Kind { Explicit, Gmet, Poset, Lvalued, Partial };
    std::string name;
    std::string signature;
    Kind kind = Kind::Explicit;
    std::vector<std::string> flags;  // Gmet: Refl Pos Sym Tri Max
    std::vector<ClauseAst> clauses;
    Loc loc;
    friend bool operator==(const AxiomsDecl&, const AxiomsDecl&) = default;
};

struct RelationBlock {
    std::string rel;
    std::vector<std::vector<std::string>> tuples;
    Loc loc;
    friend bool operator==(const RelationBlock&, const RelationBlock&) = default;
};

struct DistanceEntry {
    std::string a, b;
    Rational d;
    Loc loc;
    friend bool operator==(const DistanceEntry&, const DistanceEntry&) = default;
};

struct StructureDecl {
    std::string name;
    std::string signature;
    std::vector<std::string> elements;
    std::vector<RelationBlock> relations;
    // `metric { a b : 1/2; }`: symmetric distances, 0 on the diagonal and 1
    // where unlisted
    std::optional<std::vector<DistanceEntry>> metric;
    Loc loc;
    friend bool operator==(const StructureDecl&, const StructureDecl&) = default;
};

struct TableEntry {
    std::string op;
    std::vector<std::string> args;
    std::string value;
    Loc loc;
    friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct AlgebraDecl {
    std::string name;
    std::string carrier;
    std::string operations;
    std::vector<TableEntry> entries;
    Loc loc;
    friend bool operator==(const AlgebraDecl&, const AlgebraDecl&) = default;
};

struct MapDecl {
    std::string name;
    std::string from, to;
    std::vector<std::pair<std::string, std::string>> pairs;
    Loc loc;
    friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

struct TermAst {
    std::string head;
    bool application = false;  // `k()` is an application, `k` a variable
    std::vector<TermAst> args;
    Loc loc;
    friend bool operator==(const TermAst&, const TermAst&) = default;
};

struct RelationOnTermsAst {
    std::string rel;
    std::vector<TermAst> terms;
    friend bool operator==(const RelationOnTermsAst&, const RelationOnTermsAst&) = default;
};

struct TermEqualityAst {
    TermAst lhs, rhs;
    friend bool operator==(const TermEqualityAst&, const TermEqualityAst&) = default;
};

struct EquationDecl {
    std::string name;
    std::string signature;
    std::string operations;
    std::optional<std::size_t> cluster;  // absent: unbounded
    std::vector<AtomAst> premises;
    std::variant<RelationOnTermsAst, TermEqualityAst> conclusion;
    Loc loc;
    friend bool operator==(const EquationDecl&, const EquationDecl&) = default;
};

struct CheckDecl {
    enum class Kind { Member, Satisfies };
    Kind kind = Kind::Member;
    std::string subject;
    std::string target;  // axioms or equation
    Loc loc;
    friend bool operator==(const CheckDecl&, const CheckDecl&) = default;
};

using Decl = std::variant<LatticeDecl, SignatureDecl, OperationsDecl, AxiomsDecl, StructureDecl, AlgebraDecl, MapDecl,
                          EquationDecl, CheckDecl>;

struct Document {
    std::vector<Decl> decls;
    friend bool operator==(const Document&, const Document&) = default;
};

struct ParseResult {
    Document document;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

/// Never throws; every problem becomes a located diagnostic and the
/// declarations that parsed cleanly are kept.
ParseResult parse(std::string_view text);

std::string serialize(const Document& doc);

// --- resolved model --------------------------------------------------------

struct NamedStructure {
    Structure structure;
    std::vector<std::string> elements;
    std::string signature;
};

struct NamedAlgebra {
    Algebra algebra;
    std::vector<std::string> elements;
    std::string carrier;
    std::string signature;
    std::string operations;
};

struct NamedMap {
    std::string from, to;
    Table table;
};

struct NamedEquation {
    ClusteredEquation equation;
    std::string signature;
    std::string operations;
};

struct Model {
    std::map<std::string, QuantityLattice> lattices;
    std::map<std::string, SigPtr> signatures;
    std::map<std::string, AlgebraicSignature> partial_operations;
    std::map<std::string, LiftedSignature> operations;
    std::map<std::string, AxiomSet> axioms;
    std::map<std::string, NamedStructure> structures;
    std::map<std::string, NamedAlgebra> algebras;
    std::map<std::string, NamedMap> maps;
    std::map<std::string, NamedEquation> equations;
    std::vector<CheckDecl> checks;
    // declaration order, for deterministic reports
    std::vector<std::string> structure_order, algebra_order, equation_order;

    const NamedStructure* structure(const std::string& name) const;
    const NamedAlgebra* algebra(const std::string& name) const;
    /// Element names of a structure or algebra.
    const std::vector<std::string>* elements(const std::string& name) const;
    /// The relational structure behind a structure or algebra name.
    const Structure* carrier(const std::string& name) const;
};

struct ResolveResult {
    Model model;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

ResolveResult resolve(const Document& doc);

/// Equation in surface syntax, e.g. `=:1/2(x, y) |- =:1/4(m(x, y), m(y, x))`.
std::string show_equation(const ClusteredEquation& eq, const RelationalSignature& rel, const AlgebraicSignature& ops);

}  // namespace relalg::dsl
