#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relalg/algebras.hpp"

namespace relalg {

/// Var(index into X) or op(args).
struct Term {
    int var = -1;
    std::size_t op = 0;
    std::vector<Term> args;

    static Term variable(int v) { return Term{v, 0, {}}; }
    static Term apply(std::size_t op, std::vector<Term> args) { return Term{-1, op, std::move(args)}; }
    bool is_var() const { return var >= 0; }
    /// Variables have depth 0; op(args) has 1 + the deepest argument.
    int depth() const;
    /// Throws Error when an application has the wrong number of arguments.
    void validate(const AlgebraicSignature& sig, std::size_t var_count) const;
    friend bool operator==(const Term&, const Term&) = default;
};

/// `join(x, meet(y, z))`
std::string show_term(const Term& t, const std::vector<std::string>& vars, const AlgebraicSignature& sig);

/// All terms of depth <= d over X as one structure. Terms are ordered by
/// depth, then head (variables first), then argument indices, so the slice
/// at depth d-1 is a prefix of the slice at depth d.
class FreeAlgebraSlice {
public:
    struct Node {
        int var = -1;
        std::size_t op = 0;
        std::vector<Element> args;
        int depth = 0;
    };

    const Structure& structure() const { return structure_; }
    const Structure& base() const { return base_; }
    const LiftedSignature& signature() const { return sig_; }
    int depth() const { return depth_; }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    /// Number of terms of depth <= k, for k <= depth().
    std::size_t count_up_to(int k) const { return depth_end_.at(static_cast<std::size_t>(k)); }

    Term term(std::size_t i) const;
    std::optional<Element> index_of(const Term& t) const;
    std::optional<Element> find(std::size_t op, const Tuple& args) const;

    friend FreeAlgebraSlice build_free_slice(const Structure& x, const LiftedSignature& lsig, int d);

private:
    Structure base_;
    LiftedSignature sig_;
    int depth_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::size_t> depth_end_;
    std::map<std::pair<std::size_t, Tuple>, Element> apps_;
    Structure structure_;
};

/// Stage d of the free-algebra chain: variables carry the relations of X;
/// applications with a common head are related when their argument tuples
/// are related in the lifting of stage d-1. Throws Error for d < 0.
FreeAlgebraSlice build_free_slice(const Structure& x, const LiftedSignature& lsig, int d);

/// t_0 = |X|, t_{k+1} = |X| + sum over symbols of t_k^arity.
std::uint64_t term_count(std::size_t x_size, const AlgebraicSignature& sig, int d);

/// X -> slice, sending each element to its variable.
StructureMap canonical_injection(const FreeAlgebraSlice& slice);

/// h#(t) for h: X -> A. Throws Error on arity or range mismatch.
Element extend(std::span<const Element> h, const Algebra& a, const Term& t);
/// h# on every term of the slice.
Table extend_on_slice(std::span<const Element> h, const Algebra& a, const FreeAlgebraSlice& slice);
/// Whether h# restricted to the slice preserves relations into A.
bool extend_is_morphism(std::span<const Element> h, const Algebra& a, const FreeAlgebraSlice& slice);

}  // namespace relalg
