#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relalg/free_terms.hpp"
#include "relalg/quotients.hpp"

namespace relalg {

/// Cluster bound c; absent means unbounded.
using ClusterBound = std::optional<std::size_t>;
std::string describe(ClusterBound c);

struct RelationOnTerms {
    std::size_t rel = 0;
    std::vector<Term> terms;
    friend bool operator==(const RelationOnTerms&, const RelationOnTerms&) = default;
};

struct TermEquality {
    Term lhs;
    Term rhs;
    friend bool operator==(const TermEquality&, const TermEquality&) = default;
};

/// premises on variables |- R(t_1,...,t_n) or t_1 = t_2.
struct ClusteredEquation {
    std::string name;
    std::vector<std::string> variables;
    std::vector<Atom> premises;
    std::variant<RelationOnTerms, TermEquality> conclusion;
    ClusterBound c;

    bool unconditional() const { return premises.empty(); }
    /// Throws Error on arity mismatches or unknown variables.
    void validate(const RelationalSignature& rel, const AlgebraicSignature& ops) const;
    friend bool operator==(const ClusteredEquation&, const ClusteredEquation&) = default;
};

/// Connected components of the Gaifman graph of the premises, each sorted,
/// ordered by least variable.
std::vector<std::vector<int>> gaifman_components(const ClusteredEquation& eq);
/// Every component has fewer than c variables.
bool is_clustered(const ClusteredEquation& eq, ClusterBound c);

struct EquationCheck {
    bool satisfied = true;
    /// First violating assignment of the variables.
    std::optional<std::vector<Element>> witness;
};
/// Quantifies over every map from the variables into the carrier.
EquationCheck satisfies_equation(const Algebra& a, const ClusteredEquation& eq);
bool satisfies_all(const Algebra& a, const std::vector<ClusteredEquation>& eqs);

enum class QuotientScope { Reflexive, All };

struct ClosureReport {
    struct Violation {
        std::string kind;  ///< "product", "subalgebra" or "quotient"
        std::size_t member;
        std::size_t other;  ///< second factor, or index of the subalgebra/quotient
        std::string equation;
    };
    bool ok = true;
    std::size_t models = 0;
    std::size_t products_checked = 0;
    std::size_t subalgebras_checked = 0;
    std::size_t quotients_checked = 0;
    /// Quotients of models outside the scope that fail some equation; these
    /// show the restriction to c-reflexive quotients is needed.
    std::size_t out_of_scope_failures = 0;
    std::vector<Violation> violations;
};

/// Checks that the models in `pool` are closed under binary products,
/// subalgebras and C-quotients (c-reflexive ones, with c the least bound of
/// the equations, or all). Pool members are assumed valid and in C.
ClosureReport check_closure_soundness(const std::vector<ClusteredEquation>& eqs, const std::vector<Algebra>& pool,
                                      const AxiomSet& ax, QuotientScope scope,
                                      EnumerationBounds bounds = {});

/// e from the depth-d slice over x onto a finite algebra E.
struct AbstractEquationInstance {
    Structure x;
    LiftedSignature signature;
    int depth = 0;
    Table e;
    Algebra target;
    ClusterBound c;
};

/// Throws Error unless e is surjective, preserves relations and commutes
/// with the operations inside the slice, and x's components are below c.
void validate_instance(const AbstractEquationInstance& inst, const FreeAlgebraSlice& slice);

struct Translation {
    std::vector<Atom> phi;
    std::vector<ClusteredEquation> equations;
    /// Equivalence with the abstract equation is only certified over the
    /// materialized slice.
    std::string scope_note;
};
/// One equation per related tuple of E pulled back to slice terms, and one
/// per pair of slice terms identified by e, all under the premises Phi read
/// off the relations of x. Variable names are x0, x1, ...
Translation translate_abstract_equation(const AbstractEquationInstance& inst);

/// Every preserving h: x -> A has h# factoring through e on the slice.
bool satisfies_abstract(const Algebra& a, const AbstractEquationInstance& inst);

}  // namespace relalg
