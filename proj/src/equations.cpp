#include "relalg/equations.hpp"

#include <algorithm>
#include <numeric>

namespace relalg {

std::string describe(ClusterBound c) { return c ? std::to_string(*c) : "inf"; }

void ClusteredEquation::validate(const RelationalSignature& rel, const AlgebraicSignature& ops) const {
    for (const auto& p : premises) {
        if (p.rel >= rel.size() || p.vars.size() != static_cast<std::size_t>(rel[p.rel].arity))
            throw Error("equation '" + name + "': premise arity mismatch");
        for (int v : p.vars)
            if (v < 0 || static_cast<std::size_t>(v) >= variables.size())
                throw Error("equation '" + name + "': premise variable out of range");
    }
    if (const auto* r = std::get_if<RelationOnTerms>(&conclusion)) {
        if (r->rel >= rel.size() || r->terms.size() != static_cast<std::size_t>(rel[r->rel].arity))
            throw Error("equation '" + name + "': conclusion arity mismatch");
        for (const auto& t : r->terms) t.validate(ops, variables.size());
    } else {
        const auto& e = std::get<TermEquality>(conclusion);
        e.lhs.validate(ops, variables.size());
        e.rhs.validate(ops, variables.size());
    }
    if (c && *c == 0) throw Error("equation '" + name + "': c must be positive");
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

std::vector<std::vector<int>> components_of(std::size_t n, const std::vector<std::vector<int>>& edges) {
    UnionFind uf(n);
    for (const auto& e : edges)
        for (std::size_t i = 1; i < e.size(); ++i) uf.unite(e[0], e[i]);
    std::vector<std::vector<int>> by_root(n);
    for (std::size_t v = 0; v < n; ++v) by_root[static_cast<std::size_t>(uf.find(static_cast<int>(v)))].push_back(static_cast<int>(v));
    std::vector<std::vector<int>> out;
    for (auto& c : by_root)
        if (!c.empty()) out.push_back(std::move(c));
    return out;
}

bool below(std::size_t size, ClusterBound c) { return !c || size < *c; }

}  // namespace

std::vector<std::vector<int>> gaifman_components(const ClusteredEquation& eq) {
    std::vector<std::vector<int>> edges;
    for (const auto& p : eq.premises) edges.push_back(p.vars);
    return components_of(eq.variables.size(), edges);
}

bool is_clustered(const ClusteredEquation& eq, ClusterBound c) {
    for (const auto& comp : gaifman_components(eq))
        if (!below(comp.size(), c)) return false;
    return true;
}

EquationCheck satisfies_equation(const Algebra& a, const ClusteredEquation& eq) {
    EquationCheck r;
    // Assignments failing a premise satisfy the equation vacuously, so only
    // premise models need to be visited.
    for_each_premise_model(a.carrier(), eq.variables.size(), eq.premises, [&](const std::vector<Element>& h) {
        bool holds;
        if (const auto* rel = std::get_if<RelationOnTerms>(&eq.conclusion)) {
            Tuple t;
            for (const auto& term : rel->terms) t.push_back(extend(h, a, term));
            holds = a.carrier().holds(rel->rel, t);
        } else {
            const auto& e = std::get<TermEquality>(eq.conclusion);
            holds = extend(h, a, e.lhs) == extend(h, a, e.rhs);
        }
        if (!holds) {
            r.satisfied = false;
            r.witness = h;
        }
        return holds;
    });
    return r;
}

bool satisfies_all(const Algebra& a, const std::vector<ClusteredEquation>& eqs) {
    return std::all_of(eqs.begin(), eqs.end(), [&](const auto& eq) { return satisfies_equation(a, eq).satisfied; });
}

ClosureReport check_closure_soundness(const std::vector<ClusteredEquation>& eqs, const std::vector<Algebra>& pool,
                                      const AxiomSet& ax, QuotientScope scope, EnumerationBounds bounds) {
    ClosureReport r;
    ClusterBound c;
    for (const auto& eq : eqs)
        if (eq.c && (!c || *eq.c < *c)) c = eq.c;
    auto first_failure = [&](const Algebra& a) -> std::optional<std::string> {
        for (const auto& eq : eqs)
            if (!satisfies_equation(a, eq).satisfied) return eq.name;
        return std::nullopt;
    };
    std::vector<std::size_t> models;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (!first_failure(pool[i])) models.push_back(i);
    r.models = models.size();
    auto report = [&](std::string kind, std::size_t member, std::size_t other, std::string eq) {
        r.ok = false;
        r.violations.push_back({std::move(kind), member, other, std::move(eq)});
    };
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = i; j < models.size(); ++j) {
            const auto& a = pool[models[i]];
            auto prod = algebra_product(a.carrier().signature_ptr(), a.signature(), {a, pool[models[j]]});
            ++r.products_checked;
            if (auto f = first_failure(prod.product)) report("product", models[i], models[j], *f);
        }
    for (std::size_t m : models) {
        auto subs = enumerate_subalgebras(pool[m]);
        for (std::size_t s = 0; s < subs.size(); ++s) {
            ++r.subalgebras_checked;
            if (auto f = first_failure(subs[s].algebra)) report("subalgebra", m, s, *f);
        }
        auto qs = enumerate_quotients(pool[m], ax, bounds);
        for (std::size_t q = 0; q < qs.size(); ++q) {
            bool in_scope = scope == QuotientScope::All ||
                            is_c_reflexive(pool[m].carrier(), qs[q].codomain.carrier(), qs[q].e, c).reflexive;
            auto f = first_failure(qs[q].codomain);
            if (!in_scope) {
                if (f) ++r.out_of_scope_failures;
                continue;
            }
            ++r.quotients_checked;
            if (f) report("quotient", m, q, *f);
        }
    }
    return r;
}

void validate_instance(const AbstractEquationInstance& inst, const FreeAlgebraSlice& slice) {
    if (inst.e.size() != slice.size()) throw Error("abstract equation: e must be defined on every slice term");
    if (!(inst.target.signature() == inst.signature)) throw Error("abstract equation: target signature differs");
    if (!is_surjective(inst.e, inst.target.size())) throw Error("abstract equation: e must be surjective");
    if (!preserves_relations(slice.structure(), inst.target.carrier(), inst.e))
        throw Error("abstract equation: e does not preserve relations");
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const auto& n = slice.node(i);
        if (n.var >= 0) continue;
        Tuple args;
        for (Element a : n.args) args.push_back(inst.e[static_cast<std::size_t>(a)]);
        if (inst.target.apply(n.op, args) != inst.e[i]) throw Error("abstract equation: e does not commute with the operations");
    }
    std::vector<std::vector<int>> edges;
    for (std::size_t sym = 0; sym < inst.x.signature().size(); ++sym)
        for (const auto& t : inst.x.tuples(sym)) edges.push_back(t);
    for (const auto& comp : components_of(inst.x.size(), edges))
        if (!below(comp.size(), inst.c)) throw Error("abstract equation: x has a component of size " + std::to_string(comp.size()));
}

Translation translate_abstract_equation(const AbstractEquationInstance& inst) {
    auto slice = build_free_slice(inst.x, inst.signature, inst.depth);
    validate_instance(inst, slice);
    Translation out;
    std::vector<std::string> vars;
    for (std::size_t v = 0; v < inst.x.size(); ++v) vars.push_back("x" + std::to_string(v));
    for (std::size_t sym = 0; sym < inst.x.signature().size(); ++sym)
        for (const auto& t : inst.x.tuples(sym)) out.phi.push_back({sym, t});
    auto make = [&](std::string name, std::variant<RelationOnTerms, TermEquality> concl) {
        out.equations.push_back({std::move(name), vars, out.phi, std::move(concl), inst.c});
    };
    const auto& rsig = inst.x.signature();
    for (std::size_t sym = 0; sym < rsig.size(); ++sym) {
        for_each_map(static_cast<std::size_t>(rsig[sym].arity), slice.size(), [&](const Table& terms) {
            Tuple image;
            for (Element t : terms) image.push_back(inst.e[static_cast<std::size_t>(t)]);
            if (!inst.target.carrier().holds(sym, image)) return;
            RelationOnTerms r{sym, {}};
            for (Element t : terms) r.terms.push_back(slice.term(static_cast<std::size_t>(t)));
            make("rel" + std::to_string(out.equations.size()), std::move(r));
        });
    }
    for (std::size_t s = 0; s < slice.size(); ++s)
        for (std::size_t t = s + 1; t < slice.size(); ++t)
            if (inst.e[s] == inst.e[t]) make("eq" + std::to_string(out.equations.size()), TermEquality{slice.term(s), slice.term(t)});
    out.scope_note = "equivalent to the abstract equation on terms of depth <= " + std::to_string(inst.depth);
    return out;
}

bool satisfies_abstract(const Algebra& a, const AbstractEquationInstance& inst) {
    auto slice = build_free_slice(inst.x, inst.signature, inst.depth);
    bool ok = true;
    for_each_map(inst.x.size(), a.size(), [&](const Table& h) {
        if (!ok || !preserves_relations(inst.x, a.carrier(), h)) return;
        auto hs = extend_on_slice(h, a, slice);
        ok = factor_through(slice.structure(), inst.target.carrier(), a.carrier(), inst.e, hs).g.has_value();
    });
    return ok;
}

}  // namespace relalg
