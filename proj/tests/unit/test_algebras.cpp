#include "doctest.h"

#include "corpus.hpp"
#include "oracle.hpp"
#include "relalg/algebras.hpp"

using namespace relalg;
using corpus::r;

namespace {

// d(0,1) = 1/2 with binary min.
Algebra min_algebra(const SigPtr& sig) {
    return Algebra(corpus::two_points(sig, r(1, 2)), corpus::one_op("min", 2, lifting::Product{}), {{0, 0, 0, 1}});
}

}  // namespace

TEST_CASE("validation") {
    auto sig = corpus::gmet_sig(corpus::q4());
    auto m = min_algebra(sig);
    // oracle: d(min(x,y), min(x',y')) <= max(d(x,x'), d(y,y')) for all 16 pairs
    auto dist = [](Element a, Element b) { return a == b ? r(0) : r(1, 2); };
    bool nonexpansive = true;
    oracle::odometer(4, 2, [&](const std::vector<Element>& v) {
        auto lhs = dist(std::min(v[0], v[1]), std::min(v[2], v[3]));
        nonexpansive = nonexpansive && lhs <= std::max(dist(v[0], v[2]), dist(v[1], v[3]));
    });
    CHECK(nonexpansive);
    CHECK(validate_algebra(m).valid == nonexpansive);
    auto ax = gmet_preset(sig, MetricFlags::metric());
    auto rep = validate_algebra(m, &ax);
    CHECK(rep.valid);
    CHECK(rep.membership->member);

    Algebra anything(m.carrier(), corpus::one_op("f", 2, lifting::Discrete{}), {{1, 0, 1, 0}});
    CHECK(validate_algebra(anything).valid);

    auto ps = corpus::poset_sig();
    Algebra swap(corpus::chain(ps, 2), corpus::one_op("s", 2, lifting::Product{}), {{1, 1, 0, 0}});
    auto bad = validate_algebra(swap);
    CHECK_FALSE(bad.valid);
    CHECK(bad.valid == oracle::valid_algebra(swap));
    REQUIRE(!bad.violations.empty());
    const auto& v = bad.violations[0];
    CHECK(v.args.size() == 2);
    CHECK_FALSE(swap.carrier().holds(0, v.image));

    CHECK_THROWS_AS(Algebra(m.carrier(), m.signature(), {{0, 0, 0}}), Error);
    CHECK_THROWS_AS(Algebra(m.carrier(), m.signature(), {{0, 0, 0, 2}}), Error);
}

TEST_CASE("algebra morphisms") {
    auto sig = corpus::gmet_sig(corpus::q4());
    auto m = min_algebra(sig);
    CHECK(check_algebra_morphism(m, m, identity_table(2)).ok);
    auto prod = algebra_product(sig, m.signature(), {m, m});
    CHECK(validate_algebra(prod.product).valid);
    for (const auto& p : prod.projections) CHECK(check_algebra_morphism(prod.product, m, p).ok);
    // the swap preserves relations but not min
    auto swap = check_algebra_morphism(m, m, Table{1, 0});
    CHECK_FALSE(swap.ok);
    CHECK(swap.failure == MorphismCheck::Failure::Operation);

    auto unary = algebra_product(sig, m.signature(), {m});
    CHECK(classify_map(unary.product.carrier(), m.carrier(), unary.projections[0]).is_iso());
    auto none = algebra_product(sig, m.signature(), {});
    CHECK(none.product.size() == 1);
    CHECK(none.product.carrier().total_tuples() == sig->size());
    CHECK(none.product.table(0) == Table{0});
}

TEST_CASE("subalgebras") {
    auto sig = corpus::gmet_sig(corpus::q4());
    auto m = min_algebra(sig);
    CHECK(subalgebra_generated(m, std::vector<Element>{0, 1}).algebra == m);
    CHECK(subalgebra_generated(m, std::vector<Element>{0}).subset == std::vector<Element>{0});
    CHECK(subalgebra_generated(m, std::vector<Element>{1}).subset == std::vector<Element>{1});

    LiftedSignature cu(AlgebraicSignature({{"c", 0}, {"u", 1}}), {lifting::Product{}, lifting::Product{}});
    auto three = corpus::metric(sig, 3, {r(1, 2), r(1, 2), r(1, 2)});
    Algebra a(three, cu, {{1}, {0, 1, 1}});
    auto gen = subalgebra_generated(a, std::vector<Element>{});
    CHECK(gen.subset == std::vector<Element>{1});
    CHECK(check_algebra_morphism(gen.algebra, a, gen.subset).ok);
    CHECK(enumerate_subalgebras(a).size() == 4);  // the supersets of {1}
}

TEST_CASE("image factorization of algebras") {
    auto g = corpus::rng(31);
    auto sig = corpus::gmet_sig(corpus::q2());
    auto ax = gmet_preset(sig, MetricFlags::metric());
    auto lsig = corpus::one_op("u", 1, lifting::Product{});
    std::vector<Algebra> algebras;
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& s : corpus::gmet_members(sig, ax, n))
            for (auto& a : corpus::valid_algebras(s, lsig)) algebras.push_back(a);
    auto m = algebras[0];
    auto idf = image_factorize_algebra(m, m, identity_table(m.size()));
    CHECK(idf.surjection == identity_table(m.size()));
    int tested = 0;
    while (tested < 200) {
        const auto& a = algebras[g() % algebras.size()];
        const auto& b = algebras[g() % algebras.size()];
        Table h(a.size());
        for (auto& x : h) x = static_cast<Element>(g() % b.size());
        if (!check_algebra_morphism(a, b, h).ok) {
            CHECK_THROWS_AS(image_factorize_algebra(a, b, h), Error);
            continue;
        }
        ++tested;
        auto f = image_factorize_algebra(a, b, h);
        CHECK(compose(f.embedding, f.surjection) == h);
        CHECK(check_algebra_morphism(a, f.image, f.surjection).ok);
        CHECK(check_algebra_morphism(f.image, b, f.embedding).ok);
        if (is_surjective(h, b.size())) CHECK(f.embedding == identity_table(b.size()));
    }
}

TEST_CASE("homomorphism theorem") {
    auto sig = corpus::gmet_sig(corpus::q2());
    auto ax = gmet_preset(sig, MetricFlags::metric());
    auto lsig = corpus::one_op("u", 1, lifting::Product{});
    std::vector<Algebra> algebras;
    for (std::size_t n = 1; n <= 2; ++n)
        for (const auto& s : corpus::gmet_members(sig, ax, n))
            for (auto& a : corpus::valid_algebras(s, lsig)) algebras.push_back(a);
    auto m = algebras.back();
    auto same = factor_through(m, m, m, identity_table(m.size()), identity_table(m.size()));
    REQUIRE(same.g);
    CHECK(*same.g == identity_table(m.size()));

    std::size_t triples = 0;
    for (const auto& a : algebras)
        for (const auto& b : algebras)
            for_each_map(a.size(), b.size(), [&](const Table& e) {
                if (!is_surjective(e, b.size()) || !check_algebra_morphism(a, b, e).ok) return;
                for (const auto& c : algebras)
                    for_each_map(a.size(), c.size(), [&](const Table& h) {
                        if (!check_algebra_morphism(a, c, h).ok) return;
                        ++triples;
                        auto main = factor_through(a, b, c, e, h);
                        auto ref = oracle::factor_through(a.carrier(), b.carrier(), c.carrier(), e, h);
                        CHECK(main.g.has_value() == ref.has_value());
                        if (main.g) {
                            CHECK(*main.g == *ref);
                            CHECK(check_algebra_morphism(b, c, *main.g).ok);
                        } else {
                            CHECK(main.violated != FactorResult::Violated::None);
                        }
                    });
            });
    CHECK(triples > 0);

    // collapsing e against a separating h names the kernel condition
    auto two = corpus::two_points(sig, r(1));
    auto one = corpus::metric(sig, 1, {});
    Algebra a2(two, lsig, {{0, 1}}), a1(one, lsig, {{0}});
    auto k = factor_through(a2, a1, a2, Table{0, 0}, identity_table(2));
    CHECK_FALSE(k.g);
    CHECK(k.violated == FactorResult::Violated::Kernel);
    CHECK_THROWS_AS(factor_through(a2, a2, a2, Table{0, 0}, identity_table(2)), Error);
}
