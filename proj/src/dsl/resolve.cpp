#include <set>

#include "relalg/dsl.hpp"
#include "relalg/liftings.hpp"

namespace relalg::dsl {

const NamedStructure* Model::structure(const std::string& name) const {
    auto it = structures.find(name);
    return it == structures.end() ? nullptr : &it->second;
}

const NamedAlgebra* Model::algebra(const std::string& name) const {
    auto it = algebras.find(name);
    return it == algebras.end() ? nullptr : &it->second;
}

const std::vector<std::string>* Model::elements(const std::string& name) const {
    if (const auto* s = structure(name)) return &s->elements;
    if (const auto* a = algebra(name)) return &a->elements;
    return nullptr;
}

const Structure* Model::carrier(const std::string& name) const {
    if (const auto* s = structure(name)) return &s->structure;
    if (const auto* a = algebra(name)) return &a->algebra.carrier();
    return nullptr;
}

namespace {

struct Failure {
    Loc loc;
    std::string message;
};

[[noreturn]] void fail(const Loc& loc, std::string msg) { throw Failure{loc, std::move(msg)}; }

template <class M>
const typename M::mapped_type& lookup(const M& map, const std::string& name, const char* kind, const Loc& loc) {
    auto it = map.find(name);
    if (it == map.end()) fail(loc, std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
}

class Resolver {
public:
    ResolveResult run(const Document& doc) {
        for (const auto& d : doc.decls) {
            Loc loc = std::visit([](const auto& x) { return x.loc; }, d);
            try {
                std::visit(*this, d);
            } catch (const Failure& f) {
                out_.diagnostics.push_back({Diagnostic::Kind::Resolution, f.loc, f.message});
            } catch (const Error& e) {
                out_.diagnostics.push_back({Diagnostic::Kind::Resolution, loc, e.what()});
            }
        }
        return std::move(out_);
    }

    void operator()(const LatticeDecl& d) {
        fresh(m().lattices, d.name, "lattice", d.loc);
        m().lattices.emplace(d.name, QuantityLattice(d.values));
    }

    void operator()(const SignatureDecl& d) {
        fresh(m().signatures, d.name, "signature", d.loc);
        SigPtr sig;
        switch (d.kind) {
            case SignatureDecl::Kind::Gmet:
                sig = std::make_shared<const RelationalSignature>(
                    make_gmet_signature(lookup(m().lattices, d.lattice, "lattice", d.loc)));
                break;
            case SignatureDecl::Kind::Poset: sig = std::make_shared<const RelationalSignature>(make_poset_signature()); break;
            case SignatureDecl::Kind::Partial: {
                std::vector<OperationSymbol> ops;
                for (const auto& s : d.symbols) ops.push_back({s.name, s.arity});
                AlgebraicSignature p(std::move(ops));
                sig = std::make_shared<const RelationalSignature>(make_partial_algebra_signature(p));
                m().partial_operations.emplace(d.name, std::move(p));
                break;
            }
            case SignatureDecl::Kind::Explicit: {
                std::vector<RelationSymbol> syms;
                for (const auto& s : d.symbols) {
                    if (s.arity < 1) fail(s.loc, "relational arity must be ≥ 1");
                    syms.push_back({s.name, s.arity});
                }
                sig = std::make_shared<const RelationalSignature>(std::move(syms));
            }
        }
        m().signatures.emplace(d.name, std::move(sig));
    }

    void operator()(const OperationsDecl& d) {
        fresh(m().operations, d.name, "operations", d.loc);
        std::vector<OperationSymbol> ops;
        std::vector<LiftingSpec> specs;
        std::set<std::string> seen;
        for (const auto& op : d.ops) {
            if (!seen.insert(op.name).second) fail(op.loc, "duplicate operation '" + op.name + "'");
            if (op.arity < 0) fail(op.loc, "operation arity must be >= 0");
            ops.push_back({op.name, op.arity});
            specs.push_back(lifting(op.lifting));
        }
        m().operations.emplace(d.name, LiftedSignature(AlgebraicSignature(std::move(ops)), std::move(specs)));
    }

    void operator()(const AxiomsDecl& d) {
        fresh(m().axioms, d.name, "axioms", d.loc);
        const auto& sig = lookup(m().signatures, d.signature, "signature", d.loc);
        AxiomSet ax;
        switch (d.kind) {
            case AxiomsDecl::Kind::Gmet: {
                if (!sig->is_quantitative()) fail(d.loc, "signature '" + d.signature + "' is not a gmet signature");
                MetricFlags f;
                for (const auto& flag : d.flags) {
                    if (flag == "Refl") f.refl = true;
                    else if (flag == "Pos") f.pos = true;
                    else if (flag == "Sym") f.sym = true;
                    else if (flag == "Tri") f.tri = true;
                    else if (flag == "Max") f.max = true;
                    else fail(d.loc, "unknown metric axiom '" + flag + "'");
                }
                ax = gmet_preset(sig, f);
                break;
            }
            case AxiomsDecl::Kind::Poset: ax = poset_preset(sig); break;
            case AxiomsDecl::Kind::Lvalued:
                if (!sig->is_quantitative()) fail(d.loc, "signature '" + d.signature + "' is not a gmet signature");
                ax = lvalued_preset(sig);
                break;
            case AxiomsDecl::Kind::Partial:
                ax = partial_algebra_preset(sig, lookup(m().partial_operations, d.signature, "partial signature", d.loc));
                break;
            case AxiomsDecl::Kind::Explicit:
                ax.signature = sig;
                for (const auto& c : d.clauses) ax.clauses.push_back(clause(c, *sig));
        }
        ax.name = d.name;
        m().axioms.emplace(d.name, std::move(ax));
    }

    void operator()(const StructureDecl& d) {
        fresh_element_holder(d.name, d.loc);
        const auto& sig = lookup(m().signatures, d.signature, "signature", d.loc);
        auto index = element_index(d.elements, d.loc);
        Structure s(sig, d.elements.size());
        if (d.metric) {
            if (!sig->is_quantitative()) fail(d.loc, "metric block needs a gmet signature");
            DistanceMatrix dm(d.elements.size(), std::vector<Rational>(d.elements.size(), Rational(1)));
            for (std::size_t i = 0; i < dm.size(); ++i) dm[i][i] = Rational(0);
            for (const auto& e : *d.metric) {
                auto a = element(index, e.a, e.loc), b = element(index, e.b, e.loc);
                dm[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = e.d;
                dm[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = e.d;
            }
            try {
                s = metric_to_structure(sig, dm);
            } catch (const Error& e) {
                fail(d.loc, e.what());
            }
        }
        for (const auto& b : d.relations) {
            auto rel = relation(*sig, b.rel, b.loc);
            for (const auto& t : b.tuples) {
                if (static_cast<int>(t.size()) != (*sig)[rel].arity)
                    fail(b.loc, "'" + b.rel + "' expects " + std::to_string((*sig)[rel].arity) + " elements per tuple");
                Tuple tuple;
                for (const auto& x : t) tuple.push_back(element(index, x, b.loc));
                s.insert(rel, tuple);
            }
        }
        m().structures.emplace(d.name, NamedStructure{std::move(s), d.elements, d.signature});
        m().structure_order.push_back(d.name);
    }

    void operator()(const AlgebraDecl& d) {
        fresh_element_holder(d.name, d.loc);
        const auto& carrier = lookup(m().structures, d.carrier, "structure", d.loc);
        const auto& lsig = lookup(m().operations, d.operations, "operations", d.loc);
        const auto& s = carrier.structure;
        for (std::size_t op = 0; op < lsig.size(); ++op) {
            try {
                check_applicable(lsig.lifting_of(op), s.signature(), lsig[op].arity);
            } catch (const Error& e) {
                fail(d.loc, "operation '" + lsig[op].name + "': " + e.what());
            }
        }
        auto index = element_index(carrier.elements, d.loc);
        std::vector<Table> tables(lsig.size());
        std::vector<std::vector<bool>> given(lsig.size());
        for (std::size_t op = 0; op < lsig.size(); ++op) {
            std::size_t len = 1;
            for (int k = 0; k < lsig[op].arity; ++k) len *= s.size();
            tables[op].assign(len, 0);
            given[op].assign(len, false);
        }
        for (const auto& e : d.entries) {
            auto op = lsig.base().find(e.op);
            if (!op) fail(e.loc, "unknown operation '" + e.op + "'");
            if (static_cast<int>(e.args.size()) != lsig[*op].arity)
                fail(e.loc, "'" + e.op + "' takes " + std::to_string(lsig[*op].arity) + " arguments");
            std::size_t code = 0;
            for (const auto& x : e.args) code = code * s.size() + static_cast<std::size_t>(element(index, x, e.loc));
            if (given[*op][code]) fail(e.loc, "duplicate entry for '" + e.op + "'");
            given[*op][code] = true;
            tables[*op][code] = element(index, e.value, e.loc);
        }
        for (std::size_t op = 0; op < lsig.size(); ++op)
            for (std::size_t code = 0; code < given[op].size(); ++code)
                if (!given[op][code]) {
                    std::string args;
                    std::size_t rest = code;
                    std::vector<std::string> names(static_cast<std::size_t>(lsig[op].arity));
                    for (std::size_t k = names.size(); k-- > 0;) {
                        names[k] = carrier.elements[rest % s.size()];
                        rest /= s.size();
                    }
                    for (std::size_t k = 0; k < names.size(); ++k) args += (k ? ", " : "") + names[k];
                    fail(d.loc, "missing entry " + lsig[op].name + "(" + args + ")");
                }
        m().algebras.emplace(d.name, NamedAlgebra{Algebra(s, lsig, std::move(tables)), carrier.elements, d.carrier,
                                                  carrier.signature, d.operations});
        m().algebra_order.push_back(d.name);
    }

    void operator()(const MapDecl& d) {
        fresh(m().maps, d.name, "map", d.loc);
        const auto* from = m().elements(d.from);
        const auto* to = m().elements(d.to);
        if (!from) fail(d.loc, "unknown structure or algebra '" + d.from + "'");
        if (!to) fail(d.loc, "unknown structure or algebra '" + d.to + "'");
        auto fi = element_index(*from, d.loc), ti = element_index(*to, d.loc);
        Table t(from->size(), 0);
        std::vector<bool> given(from->size(), false);
        for (const auto& [a, b] : d.pairs) {
            auto x = static_cast<std::size_t>(element(fi, a, d.loc));
            if (given[x]) fail(d.loc, "element '" + a + "' is mapped twice");
            given[x] = true;
            t[x] = element(ti, b, d.loc);
        }
        for (std::size_t x = 0; x < given.size(); ++x)
            if (!given[x]) fail(d.loc, "element '" + (*from)[x] + "' is not mapped");
        m().maps.emplace(d.name, NamedMap{d.from, d.to, std::move(t)});
    }

    void operator()(const EquationDecl& d) {
        fresh(m().equations, d.name, "equation", d.loc);
        const auto& sig = lookup(m().signatures, d.signature, "signature", d.loc);
        const auto& lsig = lookup(m().operations, d.operations, "operations", d.loc);
        ClusteredEquation eq;
        eq.name = d.name;
        eq.c = d.cluster;
        std::map<std::string, int> vars;
        for (const auto& p : d.premises) eq.premises.push_back(atom(p, *sig, vars, eq.variables));
        if (const auto* r = std::get_if<RelationOnTermsAst>(&d.conclusion)) {
            RelationOnTerms rt{relation(*sig, r->rel, d.loc), {}};
            if (static_cast<int>(r->terms.size()) != (*sig)[rt.rel].arity)
                fail(d.loc, "'" + r->rel + "' expects " + std::to_string((*sig)[rt.rel].arity) + " arguments");
            for (const auto& t : r->terms) rt.terms.push_back(term(t, lsig.base(), vars, eq.variables));
            eq.conclusion = std::move(rt);
        } else {
            const auto& te = std::get<TermEqualityAst>(d.conclusion);
            auto lhs = term(te.lhs, lsig.base(), vars, eq.variables);
            eq.conclusion = TermEquality{std::move(lhs), term(te.rhs, lsig.base(), vars, eq.variables)};
        }
        eq.validate(*sig, lsig.base());
        m().equations.emplace(d.name, NamedEquation{std::move(eq), d.signature, d.operations});
        m().equation_order.push_back(d.name);
    }

    void operator()(const CheckDecl& d) {
        if (d.kind == CheckDecl::Kind::Member) {
            if (!m().carrier(d.subject)) fail(d.loc, "unknown structure or algebra '" + d.subject + "'");
            const auto& ax = lookup(m().axioms, d.target, "axioms", d.loc);
            if (*ax.signature != m().carrier(d.subject)->signature())
                fail(d.loc, "'" + d.subject + "' and '" + d.target + "' use different signatures");
        } else {
            const auto& a = lookup(m().algebras, d.subject, "algebra", d.loc);
            const auto& eq = lookup(m().equations, d.target, "equation", d.loc);
            if (a.operations != eq.operations || a.signature != eq.signature)
                fail(d.loc, "'" + d.subject + "' and '" + d.target + "' use different signatures");
        }
        m().checks.push_back(d);
    }

private:
    ResolveResult out_;
    Model& m() { return out_.model; }

    template <class M>
    void fresh(const M& map, const std::string& name, const char* kind, const Loc& loc) {
        if (map.count(name)) fail(loc, std::string("duplicate ") + kind + " '" + name + "'");
    }

    // structures and algebras share one namespace, since maps refer to both
    void fresh_element_holder(const std::string& name, const Loc& loc) {
        if (m().structures.count(name) || m().algebras.count(name))
            fail(loc, "duplicate structure or algebra '" + name + "'");
    }

    static std::map<std::string, Element> element_index(const std::vector<std::string>& names, const Loc& loc) {
        std::map<std::string, Element> index;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!index.emplace(names[i], static_cast<Element>(i)).second) fail(loc, "duplicate element '" + names[i] + "'");
        return index;
    }

    static Element element(const std::map<std::string, Element>& index, const std::string& name, const Loc& loc) {
        auto it = index.find(name);
        if (it == index.end()) fail(loc, "unknown element '" + name + "'");
        return it->second;
    }

    static std::size_t relation(const RelationalSignature& sig, const std::string& name, const Loc& loc) {
        auto r = sig.find(name);
        if (!r) fail(loc, "unknown relation '" + name + "'");
        return *r;
    }

    static Atom atom(const AtomAst& a, const RelationalSignature& sig, std::map<std::string, int>& vars,
                     std::vector<std::string>& names) {
        Atom out{relation(sig, a.rel, a.loc), {}};
        if (static_cast<int>(a.args.size()) != sig[out.rel].arity)
            fail(a.loc, "'" + a.rel + "' expects " + std::to_string(sig[out.rel].arity) + " arguments");
        for (const auto& v : a.args) out.vars.push_back(variable(v, vars, names));
        return out;
    }

    static int variable(const std::string& v, std::map<std::string, int>& vars, std::vector<std::string>& names) {
        auto [it, added] = vars.emplace(v, static_cast<int>(names.size()));
        if (added) names.push_back(v);
        return it->second;
    }

    static Term term(const TermAst& t, const AlgebraicSignature& ops, std::map<std::string, int>& vars,
                     std::vector<std::string>& names) {
        if (!t.application) return Term::variable(variable(t.head, vars, names));
        auto op = ops.find(t.head);
        if (!op) fail(t.loc, "unknown operation '" + t.head + "'");
        if (static_cast<int>(t.args.size()) != ops[*op].arity)
            fail(t.loc, "'" + t.head + "' takes " + std::to_string(ops[*op].arity) + " arguments");
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(term(a, ops, vars, names));
        return Term::apply(*op, std::move(args));
    }

    static HornClause clause(const ClauseAst& c, const RelationalSignature& sig) {
        HornClause h;
        h.label = c.label;
        std::map<std::string, int> vars;
        for (const auto& p : c.premises) h.premises.push_back(atom(p, sig, vars, h.variables));
        if (const auto* a = std::get_if<AtomAst>(&c.conclusion)) {
            h.conclusion = atom(*a, sig, vars, h.variables);
        } else {
            const auto& e = std::get<EqualityAst>(c.conclusion);
            int l = variable(e.lhs, vars, h.variables);
            h.conclusion = VarEquality{l, variable(e.rhs, vars, h.variables)};
        }
        return h;
    }

    static LiftingSpec lifting(const LiftingAst& l) {
        if (l.kind == "discrete") return lifting::Discrete{};
        if (l.kind == "product") return lifting::Product{};
        if (l.kind == "subset") return lifting::Subset{l.coordinates};
        if (l.kind == "lex") return lifting::Lexicographic{l.symbol};
        if (l.kind == "lipschitz") return lifting::Lipschitz{l.parameter};
        return lifting::LK{l.parameter};
    }
};

}  // namespace

ResolveResult resolve(const Document& doc) { return Resolver().run(doc); }

}  // namespace relalg::dsl
