#include "doctest.h"

#include "corpus.hpp"
#include "oracle.hpp"
#include "relalg/liftings.hpp"

using namespace relalg;
using corpus::r;

namespace {

std::vector<LiftingSpec> gmet_kinds() {
    return {lifting::Discrete{}, lifting::Product{}, lifting::Subset{{0}}, lifting::Lipschitz{r(2)},
            lifting::LK{r(1, 2)}, lifting::Lipschitz{r(1)}, lifting::LK{r(1, 4)}};
}

std::vector<LiftingSpec> poset_kinds() {
    return {lifting::Discrete{}, lifting::Product{}, lifting::Subset{{1}}, lifting::Lexicographic{"leq"}};
}

}  // namespace

TEST_CASE("lifting examples") {
    auto sig = corpus::gmet_sig(corpus::q4());
    auto m2 = corpus::two_points(sig, r(1, 2));
    auto disc = apply_lifting(lifting::Discrete{}, m2, 2);
    CHECK(disc.size() == 4);
    CHECK(disc.total_tuples() == 0);

    auto ps = corpus::poset_sig();
    auto chain = corpus::chain(ps, 2);
    CHECK(apply_lifting(lifting::Product{}, chain, 2) == product(ps, {chain, chain}).product);

    // alpha * d = 1, so only the top relation holds between (a) and (b)
    auto lip = apply_lifting(lifting::Lipschitz{r(2)}, m2, 1);
    auto q4 = corpus::q4();
    for (std::size_t i = 0; i < q4.size(); ++i) CHECK(lip.holds(i, Tuple{0, 1}) == (r(2) * r(1, 2) <= q4.value(i)));
    CHECK(lip == oracle::lifting(lifting::Lipschitz{r(2)}, m2, 1));

    // lexicographic on the 2-chain: (0,1) <= (1,0)
    auto lex = apply_lifting(lifting::Lexicographic{"leq"}, chain, 2);
    CHECK(lex.holds(0, Tuple{1, 2}));
    CHECK_FALSE(lex.holds(0, Tuple{2, 1}));
    CHECK(lex.tuple_count(0) == 10);  // total order on 4 elements

    CHECK_THROWS_AS(apply_lifting(lifting::LK{r(1, 2)}, m2, 3), Error);
    CHECK_THROWS_AS(apply_lifting(lifting::Lipschitz{r(2)}, chain, 2), Error);
    CHECK_THROWS_AS(apply_lifting(lifting::Lexicographic{"leq"}, m2, 2), Error);
    CHECK_THROWS_AS(apply_lifting(lifting::Subset{{2}}, m2, 2), Error);
}

TEST_CASE("liftings agree with their definitions") {
    auto g = corpus::rng(21);
    auto gs = corpus::gmet_sig(corpus::q4());
    auto ax = gmet_preset(gs, MetricFlags::metric());
    std::vector<Structure> metrics;
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& m : corpus::gmet_members(gs, ax, n)) metrics.push_back(m);
    for (int trial = 0; trial < 60; ++trial) {
        const auto& m = metrics[g() % metrics.size()];
        auto noisy = corpus::random_structure(gs, 1 + g() % 2, 0.5, g);
        for (const auto& spec : gmet_kinds()) {
            int n = std::holds_alternative<lifting::LK>(spec) ? 2 : 1 + static_cast<int>(g() % 2);
            CHECK(apply_lifting(spec, m, n) == oracle::lifting(spec, m, n));
            CHECK(apply_lifting(spec, noisy, n) == oracle::lifting(spec, noisy, n));
        }
    }
    auto ps = corpus::poset_sig();
    for (int trial = 0; trial < 60; ++trial) {
        auto s = corpus::random_structure(ps, 1 + g() % 3, 0.5, g);
        for (const auto& spec : poset_kinds()) {
            int n = 2 + static_cast<int>(g() % 2);
            CHECK(apply_lifting(spec, s, n) == oracle::lifting(spec, s, n));
        }
    }
}

TEST_CASE("lifted maps are functorial") {
    auto g = corpus::rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t a = 1 + g() % 3, b = 1 + g() % 3, c = 1 + g() % 3;
        Table f(a), h(b);
        for (auto& x : f) x = static_cast<Element>(g() % b);
        for (auto& x : h) x = static_cast<Element>(g() % c);
        int n = 1 + static_cast<int>(g() % 3);
        CHECK(lift_map(compose(h, f), c, n) == compose(lift_map(h, c, n), lift_map(f, b, n)));
        CHECK(lift_map(identity_table(a), a, n) == identity_table(lift_map(identity_table(a), a, n).size()));
    }
}

TEST_CASE("embedding preservation") {
    auto gs = corpus::gmet_sig(corpus::q2());
    auto gax = gmet_preset(gs, MetricFlags::metric());
    std::vector<Structure> metrics;
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& m : corpus::gmet_members(gs, gax, n)) metrics.push_back(m);
    auto emb = corpus::maps_between(metrics, metrics, [](const MorphismClass& c) { return c.is_embedding(); });
    REQUIRE(!emb.empty());
    for (const auto& spec : gmet_kinds()) {
        int n = std::holds_alternative<lifting::LK>(spec) ? 2 : 2;
        auto rep = check_preserves_embeddings(spec, emb, n);
        CHECK_MESSAGE(rep.ok, describe(spec));
        CHECK(rep.checked == emb.size());
    }
    auto lk = check_preserves_embeddings(lifting::LK{r(1, 2)}, emb, 2);
    CHECK(lk.notes.size() == 1);

    auto ps = corpus::poset_sig();
    auto pax = poset_preset(ps);
    std::vector<Structure> posets;
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& m : corpus::all_members(ps, pax, n)) posets.push_back(m);
    auto pemb = corpus::maps_between(posets, posets, [](const MorphismClass& c) { return c.is_embedding(); });
    for (const auto& spec : poset_kinds()) CHECK_MESSAGE(check_preserves_embeddings(spec, pemb, 2).ok, describe(spec));

    // identity always passes
    StructureMap id{posets[0], posets[0], identity_table(posets[0].size())};
    CHECK(check_preserves_embeddings(lifting::Product{}, {id}, 3).ok);

    // negative control: product lifting missing the reflexive tuple at 0
    LiftingFunction broken = [](const Structure& a, int n) {
        auto l = apply_lifting(lifting::Product{}, a, n);
        l.erase(0, Tuple{0, 0});
        return l;
    };
    auto bad = check_preserves_embeddings(broken, pemb, 2);
    CHECK_FALSE(bad.ok);
    REQUIRE(!bad.violations.empty());
    CHECK_FALSE(bad.violations[0].lifted.reflects);
}

TEST_CASE("E-refl preservation") {
    auto ps = corpus::poset_sig();
    std::vector<Structure> all;
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& m : corpus::all_members(ps, AxiomSet{"any", ps, {}}, n)) all.push_back(m);
    auto erefl = corpus::maps_between(all, all, [](const MorphismClass& c) { return c.is_e_refl(); });
    REQUIRE(erefl.size() > all.size());
    CHECK(check_preserves_e_refl(lifting::Product{}, erefl, 2).ok);
    CHECK(check_preserves_e_refl(lifting::Discrete{}, erefl, 2).ok);
    StructureMap id{all[3], all[3], identity_table(all[3].size())};
    CHECK(check_preserves_e_refl(lifting::Lexicographic{}, {id}, 2).ok);
}
