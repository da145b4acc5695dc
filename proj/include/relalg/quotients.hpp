#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relalg/algebras.hpp"

namespace relalg {

/// Calls f(classes) for every set partition of n elements, given as a
/// restricted growth string (classes[0] = 0, each new class is max+1).
template <class F>
void for_each_partition(std::size_t n, F&& f);

/// Renumbers classes in order of their least member.
Table canonical_classes(std::span<const Element> table);

/// A surjective algebra morphism e: src ->> codomain; codomain element i is
/// the i-th class by least representative.
struct Quotient {
    Table e;
    Algebra codomain;
    friend bool operator==(const Quotient&, const Quotient&) = default;
};

/// Canonical quotient from a surjective table and the codomain; relations
/// and operations are carried over along the renumbering.
Quotient make_quotient(std::span<const Element> e, const Algebra& codomain);

struct ReflexivityCheck {
    bool reflexive = true;
    /// First codomain subset (by size, then lexicographic) without an
    /// isomorphic lift.
    std::optional<std::vector<Element>> witness;
};
/// Every substructure of the codomain with fewer than c elements (all of
/// them when c is absent) is the bijective, embedding image of a
/// substructure of src.
ReflexivityCheck is_c_reflexive(const Structure& src, const Structure& cod, std::span<const Element> e,
                                std::optional<std::size_t> c);

struct ProjectivityReport {
    bool reflexive = true;
    bool projective = true;
    bool agree = true;
    std::size_t objects_checked = 0;
    /// The first object found not to be projective, with the map into the
    /// codomain that has no lift.
    std::optional<Structure> failing_object;
    Table failing_map;
};
/// Compares c-reflexivity of e with projectivity of every test object: all
/// structures with fewer than c and at most size_bound elements (members of
/// C when ax is given), plus the codomain's substructures below c.
ProjectivityReport check_EX_characterization(const Structure& src, const Structure& cod, std::span<const Element> e,
                                             std::optional<std::size_t> c, std::size_t size_bound,
                                             const AxiomSet* ax = nullptr);

struct EnumerationBounds {
    std::size_t max_carrier = 4;
    std::size_t max_symbols = 6;
};

/// Whether the partition is respected by every operation.
bool is_congruence(const Algebra& a, std::span<const Element> classes);

/// All C-quotients of `a`, canonical, sorted along the quotient order (finer
/// first). Throws BoundExceeded outside `bounds`.
std::vector<Quotient> enumerate_quotients(const Algebra& a, const AxiomSet& ax, EnumerationBounds bounds = {});

/// q1 <= q2 when q2 factors through q1.
bool quotient_leq(const Algebra& src, const Quotient& q1, const Quotient& q2);

struct CompatiblePair {
    /// Per relation symbol, the refined relation R' on the base carrier as
    /// sorted tuple codes.
    std::vector<std::vector<std::uint64_t>> refined;
    /// Canonical class table of the congruence.
    Table classes;
    friend bool operator==(const CompatiblePair&, const CompatiblePair&) = default;
};

struct PairCheck {
    bool ok = true;
    /// "refining (a)", "refining (b)", "refining (c)", "congruence",
    /// "compat (a)" or "compat (b)".
    std::string violated;
    std::string detail;
};
PairCheck validate_pair(const Algebra& a, const CompatiblePair& p, const AxiomSet& ax);

/// Pullback of the codomain relations along e, with the kernel of e.
/// Throws Error when the codomain is not in C.
CompatiblePair pair_from_quotient(const Algebra& a, const Quotient& q, const AxiomSet& ax);
/// Relations on the classes read off R'; throws Error for invalid pairs.
Quotient quotient_from_pair(const Algebra& a, const CompatiblePair& p, const AxiomSet& ax);

/// Componentwise inclusion.
bool pair_leq(const CompatiblePair& p1, const CompatiblePair& p2);

/// All compatible pairs, sorted like enumerate_quotients.
std::vector<CompatiblePair> enumerate_compatible_pairs(const Algebra& a, const AxiomSet& ax,
                                                       EnumerationBounds bounds = {});

struct ExactnessReport {
    std::size_t quotients = 0;
    std::size_t pairs = 0;
    bool quotient_round_trip = true;  ///< quotient -> pair -> quotient
    bool pair_round_trip = true;      ///< pair -> quotient -> pair
    bool order_preserved = true;      ///< in both directions
    bool images_match = true;         ///< pair_from_quotient hits every enumerated pair
    bool ok() const {
        return quotients == pairs && quotient_round_trip && pair_round_trip && order_preserved && images_match;
    }
};
ExactnessReport check_exactness(const Algebra& a, const AxiomSet& ax, EnumerationBounds bounds = {});

// ---------------------------------------------------------------------------

template <class F>
void for_each_partition(std::size_t n, F&& f) {
    if (n == 0) {
        f(Table{});
        return;
    }
    Table rgs(n, 0);
    std::vector<Element> maxima(n, 0);  // maxima[i] = max of rgs[0..i]
    while (true) {
        f(static_cast<const Table&>(rgs));
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] > maxima[i - 1]) --i;
        if (i == 0) return;
        ++rgs[i];
        maxima[i] = std::max(maxima[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            maxima[j] = maxima[i];
        }
    }
}

}  // namespace relalg
