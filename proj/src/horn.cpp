#include "relalg/horn.hpp"

#include <algorithm>

namespace relalg {

void HornClause::validate(const RelationalSignature& sig) const {
    const int n = static_cast<int>(variables.size());
    auto check_atom = [&](const Atom& a) {
        if (a.rel >= sig.size()) throw Error("clause '" + label + "' uses an unknown relation symbol");
        if (static_cast<int>(a.vars.size()) != sig[a.rel].arity)
            throw Error("clause '" + label + "': arity mismatch for '" + sig[a.rel].name + "'");
        for (int v : a.vars)
            if (v < 0 || v >= n) throw Error("clause '" + label + "': undeclared variable");
    };
    for (const auto& p : premises) check_atom(p);
    if (const auto* a = std::get_if<Atom>(&conclusion)) check_atom(*a);
    else {
        const auto& eq = std::get<VarEquality>(conclusion);
        if (eq.lhs < 0 || eq.lhs >= n || eq.rhs < 0 || eq.rhs >= n)
            throw Error("clause '" + label + "': undeclared variable");
    }
}

AxiomSet AxiomSet::type1_fragment() const {
    AxiomSet out{name + "'", signature, {}};
    for (const auto& c : clauses)
        if (c.is_type1()) out.clauses.push_back(c);
    return out;
}

std::vector<const HornClause*> AxiomSet::type2_clauses() const {
    std::vector<const HornClause*> out;
    for (const auto& c : clauses)
        if (!c.is_type1()) out.push_back(&c);
    return out;
}

namespace {

bool conclusion_holds(const Structure& a, const HornClause& clause, const std::vector<Element>& h) {
    if (const auto* atom = std::get_if<Atom>(&clause.conclusion)) {
        Tuple t(atom->vars.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = h[static_cast<std::size_t>(atom->vars[k])];
        return a.holds(atom->rel, t);
    }
    const auto& eq = std::get<VarEquality>(clause.conclusion);
    return h[static_cast<std::size_t>(eq.lhs)] == h[static_cast<std::size_t>(eq.rhs)];
}

}  // namespace

ClauseCheck satisfies_clause(const Structure& a, const HornClause& clause) {
    if (clause.variables.empty() && clause.premises.empty()) {
        // A single (empty) assignment.
        std::vector<Element> h;
        if (!conclusion_holds(a, clause, h)) return {false, h};
        return {};
    }
    ClauseCheck result;
    for_each_premise_model(a, clause.variables.size(), clause.premises, [&](const std::vector<Element>& h) {
        if (conclusion_holds(a, clause, h)) return true;
        result = {false, h};
        return false;
    });
    return result;
}

MembershipReport in_C(const Structure& a, const AxiomSet& ax) {
    if (!same_signature(a.signature_ptr(), ax.signature))
        throw Error("axiom set '" + ax.name + "' is over a different signature");
    MembershipReport report;
    for (std::size_t i = 0; i < ax.clauses.size(); ++i) {
        auto r = satisfies_clause(a, ax.clauses[i]);
        if (!r.satisfied) {
            report.member = false;
            report.failures.push_back({i, ax.clauses[i].label, *r.witness});
        }
    }
    return report;
}

bool is_member(const Structure& a, const AxiomSet& ax) {
    for (const auto& c : ax.clauses)
        if (!satisfies_clause(a, c).satisfied) return false;
    return true;
}

bool close_under_type1(Structure& a, const AxiomSet& ax) {
    bool changed_any = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : ax.clauses) {
            const auto* concl = std::get_if<Atom>(&c.conclusion);
            if (!concl) continue;
            std::vector<Tuple> additions;
            Tuple t(concl->vars.size());
            auto visit = [&](const std::vector<Element>& h) {
                for (std::size_t k = 0; k < t.size(); ++k) t[k] = h[static_cast<std::size_t>(concl->vars[k])];
                if (!a.holds(concl->rel, t)) additions.push_back(t);
                return true;
            };
            if (c.variables.empty() && c.premises.empty()) visit({});
            else for_each_premise_model(a, c.variables.size(), c.premises, visit);
            for (const auto& add : additions) {
                if (!a.holds(concl->rel, add)) {
                    a.insert(concl->rel, add);
                    changed = true;
                }
            }
        }
        changed_any = changed_any || changed;
    }
    return changed_any;
}

namespace {

HornClause clause(std::vector<std::string> vars, std::vector<Atom> premises, std::variant<Atom, VarEquality> concl,
                  std::string label) {
    return HornClause{std::move(vars), std::move(premises), std::move(concl), std::move(label)};
}

const QuantityLattice& lattice_of(const SigPtr& sig) {
    if (!sig || !sig->quantities()) throw Error("preset needs a quantitative signature");
    return *sig->quantities();
}

// (Up) and the finite-chain (Arch) instances. Over a finite chain the
// infimum of {q' > q} is the successor of q, so (Arch) at q concludes the
// successor; at the top element the premise family is empty.
void append_up_arch(std::vector<HornClause>& out, const QuantityLattice& q) {
    const std::vector<std::string> xy{"x", "y"};
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j)
            out.push_back(clause(xy, {Atom{i, {0, 1}}}, Atom{j, {0, 1}},
                                 "Up(" + q.value(i).str() + "<" + q.value(j).str() + ")"));
    for (std::size_t i = 0; i < q.size(); ++i) {
        std::vector<Atom> premises;
        for (std::size_t j = i + 1; j < q.size(); ++j) premises.push_back(Atom{j, {0, 1}});
        const bool top = i == q.top();
        std::size_t concl = top ? i : i + 1;
        out.push_back(clause(xy, std::move(premises), Atom{concl, {0, 1}},
                             top ? "Top" : "Arch(" + q.value(i).str() + ")"));
    }
}

}  // namespace

AxiomSet gmet_preset(const SigPtr& sig, MetricFlags flags) {
    const auto& q = lattice_of(sig);
    AxiomSet ax{"gmet", sig, {}};
    auto& out = ax.clauses;
    const std::vector<std::string> x{"x"}, xy{"x", "y"}, xyz{"x", "y", "z"};
    if (flags.refl) out.push_back(clause(x, {}, Atom{0, {0, 0}}, "Refl'"));
    if (flags.pos) out.push_back(clause(xy, {Atom{0, {0, 1}}}, VarEquality{0, 1}, "Pos'"));
    if (flags.sym)
        for (std::size_t i = 0; i < q.size(); ++i)
            out.push_back(clause(xy, {Atom{i, {0, 1}}}, Atom{i, {1, 0}}, "Sym'(" + q.value(i).str() + ")"));
    if (flags.tri)
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j) {
                if (Rational(1) < q.value(i) + q.value(j)) continue;
                out.push_back(clause(xyz, {Atom{i, {0, 1}}, Atom{j, {1, 2}}}, Atom{q.add(i, j), {0, 2}},
                                     "Tri'(" + q.value(i).str() + "," + q.value(j).str() + ")"));
            }
    if (flags.max)
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j)
                out.push_back(clause(xyz, {Atom{i, {0, 1}}, Atom{j, {1, 2}}}, Atom{q.max(i, j), {0, 2}},
                                     "Max'(" + q.value(i).str() + "," + q.value(j).str() + ")"));
    append_up_arch(out, q);
    for (const auto& c : out) c.validate(*sig);
    return ax;
}

AxiomSet poset_preset(const SigPtr& sig) {
    const auto leq = sig->index("leq");
    AxiomSet ax{"poset", sig, {}};
    ax.clauses.push_back(clause({"x"}, {}, Atom{leq, {0, 0}}, "refl"));
    ax.clauses.push_back(clause({"x", "y", "z"}, {Atom{leq, {0, 1}}, Atom{leq, {1, 2}}}, Atom{leq, {0, 2}}, "trans"));
    ax.clauses.push_back(clause({"x", "y"}, {Atom{leq, {0, 1}}, Atom{leq, {1, 0}}}, VarEquality{0, 1}, "antisym"));
    for (const auto& c : ax.clauses) c.validate(*sig);
    return ax;
}

AxiomSet lvalued_preset(const SigPtr& sig) {
    AxiomSet ax{"lvalued", sig, {}};
    append_up_arch(ax.clauses, lattice_of(sig));
    return ax;
}

AxiomSet partial_algebra_preset(const SigPtr& sig, const AlgebraicSignature& p) {
    AxiomSet ax{"partial", sig, {}};
    for (const auto& f : p.symbols()) {
        const auto rel = sig->index("alpha_" + f.name);
        std::vector<std::string> vars;
        std::vector<int> args;
        for (int i = 0; i < f.arity; ++i) {
            vars.push_back("x" + std::to_string(i + 1));
            args.push_back(i);
        }
        vars.push_back("y");
        vars.push_back("z");
        auto with = [&](int last) {
            auto a = args;
            a.push_back(last);
            return Atom{rel, a};
        };
        ax.clauses.push_back(clause(vars, {with(f.arity), with(f.arity + 1)}, VarEquality{f.arity, f.arity + 1},
                                    "functional(" + f.name + ")"));
    }
    for (const auto& c : ax.clauses) c.validate(*sig);
    return ax;
}

Structure metric_to_structure(const SigPtr& sig, const DistanceMatrix& d) {
    const auto& q = lattice_of(sig);
    Structure s(sig, d.size());
    for (std::size_t a = 0; a < d.size(); ++a) {
        if (d[a].size() != d.size()) throw Error("distance matrix must be square");
        for (std::size_t b = 0; b < d.size(); ++b) {
            auto idx = q.index_of(d[a][b]);
            if (!idx) throw Error("distance " + d[a][b].str() + " is not a lattice element");
            for (std::size_t i = *idx; i < q.size(); ++i)
                s.insert(i, std::vector<Element>{static_cast<Element>(a), static_cast<Element>(b)});
        }
    }
    return s;
}

DistanceMatrix structure_to_metric(const Structure& a) {
    const auto& q = lattice_of(a.signature_ptr());
    DistanceMatrix d(a.size(), std::vector<Rational>(a.size(), Rational(1)));
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y)
            for (std::size_t i = 0; i < q.size(); ++i)
                if (a.holds(i, std::vector<Element>{static_cast<Element>(x), static_cast<Element>(y)})) {
                    d[x][y] = q.value(i);
                    break;
                }
    return d;
}

}  // namespace relalg
