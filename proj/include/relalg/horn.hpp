#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relalg/structures.hpp"

namespace relalg {

/// R(x_1,...,x_n) with variables given by their index in the clause.
struct Atom {
    std::size_t rel = 0;
    std::vector<int> vars;
    friend bool operator==(const Atom&, const Atom&) = default;
};

/// x_i = x_j
struct VarEquality {
    int lhs = 0;
    int rhs = 0;
    friend bool operator==(const VarEquality&, const VarEquality&) = default;
};

/// premises |- conclusion over a finite variable list. Type-1 clauses
/// conclude an atom, type-2 clauses an equality of variables.
struct HornClause {
    std::vector<std::string> variables;
    std::vector<Atom> premises;
    std::variant<Atom, VarEquality> conclusion;
    std::string label;

    bool is_type1() const { return std::holds_alternative<Atom>(conclusion); }
    /// Throws Error when a variable index or arity is off.
    void validate(const RelationalSignature& sig) const;
    friend bool operator==(const HornClause&, const HornClause&) = default;
};

struct AxiomSet {
    std::string name;
    SigPtr signature;
    std::vector<HornClause> clauses;

    /// The clauses concluding an atom; their models form C'.
    AxiomSet type1_fragment() const;
    std::vector<const HornClause*> type2_clauses() const;
};

struct ClauseCheck {
    bool satisfied = true;
    /// First violating assignment (variables in clause order, elements
    /// ascending, first variable most significant).
    std::optional<std::vector<Element>> witness;
};

ClauseCheck satisfies_clause(const Structure& a, const HornClause& clause);

struct MembershipReport {
    struct Failure {
        std::size_t clause;
        std::string label;
        std::vector<Element> witness;
    };
    bool member = true;
    std::vector<Failure> failures;
};

/// Membership in the subcategory axiomatized by `ax`.
MembershipReport in_C(const Structure& a, const AxiomSet& ax);
bool is_member(const Structure& a, const AxiomSet& ax);

/// Least superset of the relations of `a` closed under the type-1 clauses
/// of `ax`; returns true when something was added.
bool close_under_type1(Structure& a, const AxiomSet& ax);

/// Enumerates the assignments satisfying every premise in `premises`, with
/// pruning by partial assignments. `f` returns false to stop early.
template <class F>
void for_each_premise_model(const Structure& a, std::size_t var_count, const std::vector<Atom>& premises,
                            F&& f);

enum class MetricAxiom { Refl, Pos, Sym, Tri, Max };

struct MetricFlags {
    bool refl = false, pos = false, sym = false, tri = false, max = false;
    static MetricFlags metric() { return {true, true, true, true, false}; }
    static MetricFlags pseudometric() { return {true, false, true, true, false}; }
    static MetricFlags ultrametric() { return {true, true, true, false, true}; }
    friend bool operator==(const MetricFlags&, const MetricFlags&) = default;
};

/// (Refl')(Pos')(Sym')(Tri')(Max') as selected, always with (Up) and the
/// finite-chain (Arch) instances; the instance at the top element is the
/// premise-free clause |- x =:1 y, labelled "Top".
AxiomSet gmet_preset(const SigPtr& gmet_sig, MetricFlags flags);
AxiomSet poset_preset(const SigPtr& poset_sig);
AxiomSet lvalued_preset(const SigPtr& gmet_sig);
AxiomSet partial_algebra_preset(const SigPtr& partial_sig, const AlgebraicSignature& p);

using DistanceMatrix = std::vector<std::vector<Rational>>;

/// a =:q b iff d(a,b) <= q. Throws Error on entries outside the lattice.
Structure metric_to_structure(const SigPtr& gmet_sig, const DistanceMatrix& d);
/// d(a,b) = least q with a =:q b; the empty infimum is 1.
DistanceMatrix structure_to_metric(const Structure& a);

// ---------------------------------------------------------------------------

namespace detail {
template <class F>
bool premise_search(const Structure& a, std::size_t var, std::size_t var_count,
                    const std::vector<std::vector<const Atom*>>& ready, std::vector<Element>& h, F& f) {
    if (var == var_count) return f(static_cast<const std::vector<Element>&>(h));
    Tuple t;
    for (std::size_t e = 0; e < a.size(); ++e) {
        h[var] = static_cast<Element>(e);
        bool ok = true;
        for (const Atom* atom : ready[var]) {
            t.resize(atom->vars.size());
            for (std::size_t k = 0; k < t.size(); ++k) t[k] = h[static_cast<std::size_t>(atom->vars[k])];
            if (!a.holds(atom->rel, t)) {
                ok = false;
                break;
            }
        }
        if (ok && !premise_search(a, var + 1, var_count, ready, h, f)) return false;
    }
    return true;
}
}  // namespace detail

template <class F>
void for_each_premise_model(const Structure& a, std::size_t var_count, const std::vector<Atom>& premises,
                            F&& f) {
    // Each premise is checked as soon as its last variable is bound.
    std::vector<std::vector<const Atom*>> ready(var_count);
    std::vector<const Atom*> ground;
    for (const auto& p : premises) {
        int last = -1;
        for (int v : p.vars) last = std::max(last, v);
        if (last < 0) ground.push_back(&p);
        else ready[static_cast<std::size_t>(last)].push_back(&p);
    }
    for (const Atom* g : ground)
        if (!a.holds(g->rel, std::vector<Element>{})) return;
    std::vector<Element> h(var_count, 0);
    detail::premise_search(a, 0, var_count, ready, h, f);
}

}  // namespace relalg
