#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relalg/signatures.hpp"

namespace relalg {

/// Carrier elements are indices 0..size-1.
using Element = int;
using Tuple = std::vector<Element>;
/// A total map between carriers, given by its table.
using Table = std::vector<Element>;

/// A finite S-structure. Each relation is stored as a sorted set of tuple
/// codes; a tuple (t_0,...,t_{n-1}) has code sum t_k * size^(n-1-k), so code
/// order is lexicographic tuple order.
class Structure {
public:
    Structure() = default;
    Structure(SigPtr sig, std::size_t size);
    /// Throws Error on out-of-range entries or wrong tuple lengths.
    Structure(SigPtr sig, std::size_t size, const std::vector<std::vector<Tuple>>& relations);

    const RelationalSignature& signature() const { return *sig_; }
    const SigPtr& signature_ptr() const { return sig_; }
    std::size_t size() const { return size_; }
    int arity(std::size_t sym) const { return (*sig_)[sym].arity; }

    bool holds(std::size_t sym, std::span<const Element> tuple) const;
    bool holds_code(std::size_t sym, std::uint64_t code) const;
    void insert(std::size_t sym, std::span<const Element> tuple);
    void erase(std::size_t sym, std::span<const Element> tuple);
    /// Replaces a relation wholesale; the codes are sorted and deduplicated.
    void assign_codes(std::size_t sym, std::vector<std::uint64_t> codes);

    const std::vector<std::uint64_t>& codes(std::size_t sym) const { return rel_[sym]; }
    std::size_t tuple_count(std::size_t sym) const { return rel_[sym].size(); }
    std::size_t total_tuples() const;
    std::vector<Tuple> tuples(std::size_t sym) const;

    std::uint64_t encode(std::size_t sym, std::span<const Element> tuple) const;
    Tuple decode(std::size_t sym, std::uint64_t code) const;
    /// Number of possible tuples for the symbol, size^arity.
    std::uint64_t tuple_space(std::size_t sym) const;

    friend bool operator==(const Structure& a, const Structure& b) {
        return a.size_ == b.size_ && same_signature(a.sig_, b.sig_) && a.rel_ == b.rel_;
    }

private:
    void check_tuple(std::size_t sym, std::span<const Element> tuple) const;

    SigPtr sig_;
    std::size_t size_ = 0;
    std::vector<std::vector<std::uint64_t>> rel_;
};

/// A raw map between structures; whether it is a morphism is a checked
/// property (see classify_map).
struct StructureMap {
    Structure dom;
    Structure cod;
    Table table;
};

struct MorphismClass {
    bool preserves = false;
    bool reflects = false;
    bool injective = false;
    bool surjective = false;

    bool is_embedding() const { return injective && preserves && reflects; }
    /// Member of the class of surjections that preserve and reflect.
    bool is_e_refl() const { return surjective && preserves && reflects; }
    bool is_iso() const { return is_embedding() && surjective; }
    friend bool operator==(const MorphismClass&, const MorphismClass&) = default;
};

/// Throws Error on signature mismatch or a table that is not total.
MorphismClass classify_map(const Structure& dom, const Structure& cod, std::span<const Element> table);
inline MorphismClass classify_map(const StructureMap& f) { return classify_map(f.dom, f.cod, f.table); }

bool preserves_relations(const Structure& dom, const Structure& cod, std::span<const Element> table);
bool reflects_relations(const Structure& dom, const Structure& cod, std::span<const Element> table);

/// A relation tuple of `dom` whose image is not related in `cod`.
struct PreservationFailure {
    std::size_t symbol;
    Tuple tuple;
};
std::vector<PreservationFailure> preservation_failures(const Structure& dom, const Structure& cod,
                                                       std::span<const Element> table,
                                                       std::size_t limit = 16);

Table identity_table(std::size_t n);
/// (g . f)(x) = g(f(x)).
Table compose(std::span<const Element> g, std::span<const Element> f);
bool is_surjective(std::span<const Element> table, std::size_t cod_size);
bool is_injective(std::span<const Element> table);

/// Index of a product element from its coordinates; factor 0 is most
/// significant. Shared by products, liftings and free slices.
std::uint64_t product_index(std::span<const Element> coords, std::span<const std::size_t> sizes);
Tuple product_coords(std::uint64_t index, std::span<const std::size_t> sizes);

struct ProductResult {
    Structure product;
    std::vector<Table> projections;
};
/// Cartesian product. An empty factor list gives the one-point structure
/// with every relation total.
ProductResult product(const SigPtr& sig, const std::vector<Structure>& factors);

struct CoproductResult {
    Structure coproduct;
    std::vector<Table> injections;
};
CoproductResult coproduct(const SigPtr& sig, const std::vector<Structure>& summands);

struct SubstructureResult {
    std::vector<Element> subset;  ///< ascending; also the embedding table
    Structure structure;
};
/// Induced substructure on `subset` (any order, duplicates ignored).
SubstructureResult substructure(const Structure& a, std::span<const Element> subset);

struct ImageFactorization {
    Table surjection;  ///< dom -> image
    Structure image;
    Table embedding;   ///< image -> cod, ascending
};
/// f = embedding . surjection through the induced image. Throws Error when f
/// does not preserve relations.
ImageFactorization image_factorize(const Structure& dom, const Structure& cod, std::span<const Element> f);

/// All subsets of size <= max_size (all subsets when absent), ordered by
/// size and then lexicographically.
std::vector<SubstructureResult> enumerate_substructures(const Structure& a,
                                                        std::optional<std::size_t> max_size = std::nullopt);

/// Calls f(table) for every map n -> m, tables in lexicographic order.
template <class F>
void for_each_map(std::size_t n, std::size_t m, F&& f) {
    Table t(n, 0);
    if (n > 0 && m == 0) return;
    while (true) {
        f(static_cast<const Table&>(t));
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (static_cast<std::size_t>(++t[i]) < m) break;
            t[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

}  // namespace relalg
