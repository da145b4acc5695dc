#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relalg/structures.hpp"

namespace relalg {

/// Throws Error when `spec` cannot be applied at arity n over `sig`.
void check_applicable(const LiftingSpec& spec, const RelationalSignature& sig, int n);

/// The structure L(A) on the carrier A^n (index encoding of `product`).
///
/// Lipschitz and LK relations are saturated: a pair is related at q when
/// some choice of lattice distances witnessing the componentwise relations
/// gives a value <= q. Over structures closed under (Up) this agrees with the
/// pointwise definitions and stays inside the finite lattice.
Structure apply_lifting(const LiftingSpec& spec, const Structure& a, int n);

/// The map table f^n : A^n -> B^n.
Table lift_map(std::span<const Element> table, std::size_t cod_size, int n);

/// Any endofunctor-like construction on structures, used for fixtures.
using LiftingFunction = std::function<Structure(const Structure&, int)>;
LiftingFunction as_function(const LiftingSpec& spec);

struct LiftingCheckReport {
    struct Violation {
        std::size_t sample;
        MorphismClass lifted;
    };
    bool ok = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;  ///< samples not in the required class
    std::vector<Violation> violations;
    std::vector<std::string> notes;
};

/// For every embedding m in `samples`, L(m) must again be an embedding.
LiftingCheckReport check_preserves_embeddings(const LiftingFunction& lifting, const std::vector<StructureMap>& samples,
                                              int n);
LiftingCheckReport check_preserves_embeddings(const LiftingSpec& spec, const std::vector<StructureMap>& samples,
                                              int n);
/// For every surjection m that preserves and reflects, so must L(m).
LiftingCheckReport check_preserves_e_refl(const LiftingFunction& lifting, const std::vector<StructureMap>& samples,
                                          int n);
LiftingCheckReport check_preserves_e_refl(const LiftingSpec& spec, const std::vector<StructureMap>& samples, int n);

}  // namespace relalg
