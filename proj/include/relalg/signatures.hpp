#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relalg/rational.hpp"

namespace relalg {

/// A finite chain 0 = q_0 < q_1 < ... < q_k = 1 of rationals, with the
/// truncated addition rounded up into the chain and the chain join.
/// Elements are referred to by index; index order is value order.
class QuantityLattice {
public:
    /// Throws Error unless `elements` is strictly ascending, inside [0,1]
    /// and contains both 0 and 1.
    explicit QuantityLattice(std::vector<Rational> elements);

    /// {0, 1/n, 2/n, ..., 1}.
    static QuantityLattice uniform(int n);

    std::size_t size() const { return elements_.size(); }
    const Rational& value(std::size_t i) const { return elements_.at(i); }
    const std::vector<Rational>& values() const { return elements_; }
    std::optional<std::size_t> index_of(const Rational& q) const;

    std::size_t bottom() const { return 0; }
    std::size_t top() const { return elements_.size() - 1; }

    /// Index of the least element >= min(1, q_i + q_j).
    std::size_t add(std::size_t i, std::size_t j) const { return add_[i * size() + j]; }
    std::size_t max(std::size_t i, std::size_t j) const { return max_[i * size() + j]; }
    /// Index of the least element >= q (q <= 1 is required).
    std::size_t round_up(const Rational& q) const;

    friend bool operator==(const QuantityLattice& a, const QuantityLattice& b) {
        return a.elements_ == b.elements_;
    }

private:
    std::vector<Rational> elements_;
    std::vector<std::size_t> add_;
    std::vector<std::size_t> max_;
};

struct RelationSymbol {
    std::string name;
    int arity = 0;
    friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

/// Ordered table of relation symbols. Symbols built by make_gmet_signature
/// additionally remember their quantity lattice: symbol i is `=:q_i`.
class RelationalSignature {
public:
    RelationalSignature() = default;
    /// Throws Error on duplicate names or arity < 1.
    explicit RelationalSignature(std::vector<RelationSymbol> symbols,
                                 std::optional<QuantityLattice> quantities = std::nullopt);

    std::size_t size() const { return symbols_.size(); }
    const RelationSymbol& operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<RelationSymbol>& symbols() const { return symbols_; }
    std::optional<std::size_t> find(const std::string& name) const;
    /// Like find(), but throws Error for unknown names.
    std::size_t index(const std::string& name) const;

    const std::optional<QuantityLattice>& quantities() const { return quantities_; }
    bool is_quantitative() const { return quantities_.has_value(); }

    friend bool operator==(const RelationalSignature&, const RelationalSignature&) = default;

private:
    std::vector<RelationSymbol> symbols_;
    std::optional<QuantityLattice> quantities_;
};

using SigPtr = std::shared_ptr<const RelationalSignature>;

inline bool same_signature(const SigPtr& a, const SigPtr& b) {
    return a == b || (a && b && *a == *b);
}

struct OperationSymbol {
    std::string name;
    int arity = 0;
    friend bool operator==(const OperationSymbol&, const OperationSymbol&) = default;
};

/// Finitary algebraic signature; arity 0 (constants) is allowed.
class AlgebraicSignature {
public:
    AlgebraicSignature() = default;
    explicit AlgebraicSignature(std::vector<OperationSymbol> symbols);

    std::size_t size() const { return symbols_.size(); }
    const OperationSymbol& operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<OperationSymbol>& symbols() const { return symbols_; }
    std::optional<std::size_t> find(const std::string& name) const;

    friend bool operator==(const AlgebraicSignature&, const AlgebraicSignature&) = default;

private:
    std::vector<OperationSymbol> symbols_;
};

// Lifting specifications. Their semantics live in liftings.hpp.
namespace lifting {
struct Discrete {
    friend bool operator==(const Discrete&, const Discrete&) = default;
};
struct Product {
    friend bool operator==(const Product&, const Product&) = default;
};
/// Coordinatewise on the listed coordinates only.
struct Subset {
    std::vector<int> coordinates;
    friend bool operator==(const Subset&, const Subset&) = default;
};
/// Lexicographic on the named binary symbol; other symbols lift as products.
struct Lexicographic {
    std::string order_symbol = "leq";
    friend bool operator==(const Lexicographic&, const Lexicographic&) = default;
};
struct Lipschitz {
    Rational alpha{1};
    friend bool operator==(const Lipschitz&, const Lipschitz&) = default;
};
/// Lukaszyk-Karmowski mixture, binary operations only.
struct LK {
    Rational p{1, 2};
    friend bool operator==(const LK&, const LK&) = default;
};
}  // namespace lifting

using LiftingSpec = std::variant<lifting::Discrete, lifting::Product, lifting::Subset,
                                 lifting::Lexicographic, lifting::Lipschitz, lifting::LK>;

std::string describe(const LiftingSpec& spec);

/// An algebraic signature with one lifting per operation symbol.
class LiftedSignature {
public:
    LiftedSignature() = default;
    /// Throws Error when the sizes differ, when an LK lifting is attached to
    /// a non-binary symbol, or when a parameter is out of range.
    LiftedSignature(AlgebraicSignature base, std::vector<LiftingSpec> liftings);

    const AlgebraicSignature& base() const { return base_; }
    std::size_t size() const { return base_.size(); }
    const OperationSymbol& operator[](std::size_t i) const { return base_[i]; }
    const LiftingSpec& lifting_of(std::size_t i) const { return liftings_.at(i); }

    friend bool operator==(const LiftedSignature&, const LiftedSignature&) = default;

private:
    AlgebraicSignature base_;
    std::vector<LiftingSpec> liftings_;
};

/// Name of the binary symbol standing for distance <= q.
std::string quantity_symbol_name(const Rational& q);

/// One binary symbol `=:q` per lattice element, ascending.
RelationalSignature make_gmet_signature(const QuantityLattice& q);
/// The single binary symbol `leq`.
RelationalSignature make_poset_signature();
/// One symbol `alpha_f` of arity ar(f)+1 per operation symbol f.
RelationalSignature make_partial_algebra_signature(const AlgebraicSignature& p);

}  // namespace relalg
