#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relalg/horn.hpp"
#include "relalg/liftings.hpp"

namespace relalg {

/// A structure with one operation table per symbol. Table entry for the
/// argument tuple (a_0,...,a_{n-1}) sits at product_index(args), i.e. a_0 is
/// most significant.
class Algebra {
public:
    Algebra() = default;
    /// Throws Error when a table has the wrong length or an entry is out of
    /// range. Whether the operations respect the liftings is a separate
    /// check (validate_algebra).
    Algebra(Structure carrier, LiftedSignature sig, std::vector<Table> ops);

    const Structure& carrier() const { return carrier_; }
    Structure& carrier() { return carrier_; }
    const LiftedSignature& signature() const { return sig_; }
    std::size_t size() const { return carrier_.size(); }
    const Table& table(std::size_t op) const { return ops_[op]; }
    const std::vector<Table>& tables() const { return ops_; }
    Element apply(std::size_t op, std::span<const Element> args) const;
    std::size_t arg_index(std::span<const Element> args) const;

    friend bool operator==(const Algebra&, const Algebra&) = default;

private:
    Structure carrier_;
    LiftedSignature sig_;
    std::vector<Table> ops_;
};

struct AlgebraReport {
    struct OpViolation {
        std::size_t op;
        std::size_t symbol;       ///< relation symbol of the lifted tuple
        std::vector<Tuple> args;  ///< the related argument tuples
        Tuple image;              ///< their images, not related in the carrier
    };
    bool valid = true;
    std::vector<OpViolation> violations;
    std::optional<MembershipReport> membership;
};

/// Every operation must preserve relations from its lifted power; with `ax`
/// the carrier must also lie in C.
AlgebraReport validate_algebra(const Algebra& a, const AxiomSet* ax = nullptr, std::size_t limit = 16);
bool is_valid(const Algebra& a, const AxiomSet* ax = nullptr);

struct MorphismCheck {
    enum class Failure { None, Relation, Operation };
    bool ok = true;
    Failure failure = Failure::None;
    std::size_t index = 0;  ///< relation symbol or operation symbol
    Tuple tuple;            ///< related tuple or argument tuple
};

/// Relation preservation plus h(sigma(a)) = sigma(h(a)). Throws Error when
/// the lifted signatures differ or the table is not total.
MorphismCheck check_algebra_morphism(const Algebra& dom, const Algebra& cod, std::span<const Element> table);

struct AlgebraProduct {
    Algebra product;
    std::vector<Table> projections;
};
/// Coordinatewise operations on structures::product. With no factors the
/// result is the one-point algebra, so the signatures must be given.
AlgebraProduct algebra_product(const SigPtr& sig, const LiftedSignature& lsig, const std::vector<Algebra>& factors);

struct Subalgebra {
    std::vector<Element> subset;  ///< ascending; also the inclusion table
    Algebra algebra;
};
/// Least operation-closed superset of `seed`, with the induced relations.
Subalgebra subalgebra_generated(const Algebra& a, std::span<const Element> seed);
/// Induced subalgebra on an operation-closed subset; throws Error otherwise.
Subalgebra induced_subalgebra(const Algebra& a, std::span<const Element> closed);
/// All operation-closed subsets, each once, ordered as enumerate_substructures.
std::vector<Subalgebra> enumerate_subalgebras(const Algebra& a);

struct AlgebraFactorization {
    Table surjection;
    Algebra image;
    Table embedding;
};
/// Throws Error when h is not an algebra morphism.
AlgebraFactorization image_factorize_algebra(const Algebra& dom, const Algebra& cod, std::span<const Element> h);

struct FactorResult {
    enum class Violated { None, Kernel, Relation };
    std::optional<Table> g;
    Violated violated = Violated::None;
    /// Kernel: a pair identified by e but not by h. Relation: a tuple of the
    /// domain whose e-image is related while its h-image is not.
    Tuple witness;
    std::size_t symbol = 0;
};
std::string describe(FactorResult::Violated v);

/// g with h = g . e for e: A ->> B and h: A -> C, when it exists as a
/// relation-preserving map. Throws Error unless e is surjective and the
/// tables share the domain.
FactorResult factor_through(const Structure& a, const Structure& b, const Structure& c, std::span<const Element> e,
                            std::span<const Element> h);
inline FactorResult factor_through(const Algebra& a, const Algebra& b, const Algebra& c, std::span<const Element> e,
                                   std::span<const Element> h) {
    return factor_through(a.carrier(), b.carrier(), c.carrier(), e, h);
}

}  // namespace relalg
