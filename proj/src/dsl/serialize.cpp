#include <functional>
#include <sstream>

#include "relalg/dsl.hpp"

namespace relalg::dsl {
namespace {

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& show, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += show(xs[i]);
    }
    return out;
}

std::string same(const std::string& s) { return s; }

std::string show_tuple(const std::vector<std::string>& t) { return "(" + join(t, same) + ")"; }

std::string show_atom(const AtomAst& a) { return a.rel + show_tuple(a.args); }

std::string show_term(const TermAst& t) {
    if (!t.application) return t.head;
    return t.head + "(" + join(t.args, show_term) + ")";
}

std::string show_lifting(const LiftingAst& l) {
    if (l.kind == "subset") return "subset(" + join(l.coordinates, [](int c) { return std::to_string(c); }) + ")";
    if (l.kind == "lex") return "lex(" + l.symbol + ")";
    if (l.kind == "lipschitz" || l.kind == "lk") return l.kind + "(" + l.parameter.str() + ")";
    return l.kind;
}

struct Writer {
    std::ostringstream out;

    void operator()(const LatticeDecl& d) {
        out << "lattice " << d.name << " = {" << join(d.values, [](const Rational& q) { return q.str(); }) << "};\n";
    }

    void operator()(const SignatureDecl& d) {
        out << "signature " << d.name;
        switch (d.kind) {
            case SignatureDecl::Kind::Gmet: out << " = gmet(" << d.lattice << ");\n"; return;
            case SignatureDecl::Kind::Poset: out << " = poset;\n"; return;
            case SignatureDecl::Kind::Partial:
                out << " = partial {";
                for (const auto& s : d.symbols) out << " " << s.name << "/" << s.arity << ";";
                out << " }\n";
                return;
            case SignatureDecl::Kind::Explicit:
                out << " {\n";
                for (const auto& s : d.symbols) out << "  rel " << s.name << "/" << s.arity << ";\n";
                out << "}\n";
        }
    }

    void operator()(const OperationsDecl& d) {
        out << "operations " << d.name << " {\n";
        for (const auto& op : d.ops) out << "  op " << op.name << "/" << op.arity << " : " << show_lifting(op.lifting) << ";\n";
        out << "}\n";
    }

    void operator()(const AxiomsDecl& d) {
        out << "axioms " << d.name << " over " << d.signature;
        switch (d.kind) {
            case AxiomsDecl::Kind::Gmet: out << " = gmet(" << join(d.flags, same) << ");\n"; return;
            case AxiomsDecl::Kind::Poset: out << " = poset;\n"; return;
            case AxiomsDecl::Kind::Lvalued: out << " = lvalued;\n"; return;
            case AxiomsDecl::Kind::Partial: out << " = partial;\n"; return;
            case AxiomsDecl::Kind::Explicit: break;
        }
        out << " {\n";
        for (const auto& c : d.clauses) {
            out << "  ";
            if (!c.label.empty()) out << c.label << ": ";
            if (!c.premises.empty()) out << join(c.premises, show_atom) << " ";
            out << "|- ";
            if (const auto* a = std::get_if<AtomAst>(&c.conclusion))
                out << show_atom(*a);
            else
                out << std::get<EqualityAst>(c.conclusion).lhs << " = " << std::get<EqualityAst>(c.conclusion).rhs;
            out << ";\n";
        }
        out << "}\n";
    }

    void operator()(const StructureDecl& d) {
        out << "structure " << d.name << " over " << d.signature << " {\n";
        out << "  elements " << join(d.elements, same) << ";\n";
        for (const auto& b : d.relations) out << "  " << b.rel << " { " << join(b.tuples, show_tuple) << " }\n";
        if (d.metric) {
            out << "  metric {";
            for (const auto& e : *d.metric) out << " " << e.a << " " << e.b << " : " << e.d.str() << ";";
            out << " }\n";
        }
        out << "}\n";
    }

    void operator()(const AlgebraDecl& d) {
        out << "algebra " << d.name << " = " << d.carrier << " with " << d.operations << " {\n";
        for (const auto& e : d.entries) out << "  " << e.op << show_tuple(e.args) << " = " << e.value << ";\n";
        out << "}\n";
    }

    void operator()(const MapDecl& d) {
        out << "map " << d.name << " : " << d.from << " -> " << d.to << " {";
        for (const auto& [a, b] : d.pairs) out << " " << a << " -> " << b << ";";
        out << " }\n";
    }

    void operator()(const EquationDecl& d) {
        out << "equation " << d.name << " over " << d.signature << " with " << d.operations;
        if (d.cluster) out << " cluster " << *d.cluster;
        out << " {\n  ";
        if (!d.premises.empty()) out << join(d.premises, show_atom) << " ";
        out << "|- ";
        if (const auto* r = std::get_if<RelationOnTermsAst>(&d.conclusion))
            out << r->rel << "(" << join(r->terms, show_term) << ")";
        else
            out << show_term(std::get<TermEqualityAst>(d.conclusion).lhs) << " = "
                << show_term(std::get<TermEqualityAst>(d.conclusion).rhs);
        out << ";\n}\n";
    }

    void operator()(const CheckDecl& d) {
        out << "check " << d.subject << (d.kind == CheckDecl::Kind::Member ? " in " : " satisfies ") << d.target << ";\n";
    }
};

}  // namespace

std::string serialize(const Document& doc) {
    Writer w;
    for (std::size_t i = 0; i < doc.decls.size(); ++i) {
        // blank line between multi-line declarations
        if (i && !std::holds_alternative<CheckDecl>(doc.decls[i])) w.out << "\n";
        std::visit(w, doc.decls[i]);
    }
    return w.out.str();
}

std::string show_equation(const ClusteredEquation& eq, const RelationalSignature& rel, const AlgebraicSignature& ops) {
    auto var = [&](int v) { return eq.variables[static_cast<std::size_t>(v)]; };
    std::string out = join(eq.premises, [&](const Atom& p) { return rel[p.rel].name + "(" + join(p.vars, var) + ")"; });
    if (!out.empty()) out += " ";
    // constants keep their parentheses so the text parses back
    std::function<std::string(const Term&)> term = [&](const Term& t) {
        if (t.is_var()) return var(t.var);
        return ops[t.op].name + "(" + join(t.args, term) + ")";
    };
    out += "|- ";
    if (const auto* r = std::get_if<RelationOnTerms>(&eq.conclusion))
        out += rel[r->rel].name + "(" + join(r->terms, term) + ")";
    else
        out += term(std::get<TermEquality>(eq.conclusion).lhs) + " = " + term(std::get<TermEquality>(eq.conclusion).rhs);
    return out;
}

}  // namespace relalg::dsl
