#include "sweep.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "oracle.hpp"
#include "relalg/equations.hpp"
#include "relalg/quotients.hpp"

using namespace relalg;

namespace sweep {
namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& g, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(g); }

template <class T>
const T& pick(Rng& g, const std::vector<T>& v) {
    return v[pick(g, v.size())];
}

std::string show(const std::vector<Element>& v) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << ')';
    return out.str();
}

void disagree(Result& r, std::size_t i, const std::string& what) {
    if (r.disagreements++ == 0) r.first = "case " + std::to_string(i) + ": " + what;
}

struct Universe {
    SigPtr q2 = corpus::gmet_sig(corpus::q2());
    SigPtr q4 = corpus::gmet_sig(corpus::q4());
    SigPtr poset = corpus::poset_sig();
    std::vector<AxiomSet> presets;
    // members of C by preset, sizes 1..3
    std::vector<std::vector<Structure>> members;

    Universe() {
        presets = {gmet_preset(q2, MetricFlags::metric()), gmet_preset(q2, MetricFlags::pseudometric()),
                   gmet_preset(q2, MetricFlags::ultrametric()), poset_preset(poset)};
        for (const auto& ax : presets) {
            std::vector<Structure> all;
            for (std::size_t n = 1; n <= 3; ++n) {
                auto m = ax.signature == poset ? corpus::all_members(poset, ax, n) : corpus::gmet_members(ax.signature, ax, n);
                all.insert(all.end(), m.begin(), m.end());
            }
            members.push_back(std::move(all));
        }
    }
};

const Universe& universe() {
    static const Universe u;
    return u;
}

Atom random_atom(Rng& g, const RelationalSignature& sig, std::size_t vars) {
    Atom a{pick(g, sig.size()), {}};
    for (int k = 0; k < sig[a.rel].arity; ++k) a.vars.push_back(static_cast<int>(pick(g, vars)));
    return a;
}

Term random_term(Rng& g, const AlgebraicSignature& ops, std::size_t vars, int depth) {
    if (depth == 0 || pick(g, 3) == 0) return Term::variable(static_cast<int>(pick(g, vars)));
    std::size_t op = pick(g, ops.size());
    std::vector<Term> args;
    for (int k = 0; k < ops[op].arity; ++k) args.push_back(random_term(g, ops, vars, depth - 1));
    return Term::apply(op, std::move(args));
}

Table random_table(Rng& g, std::size_t len, std::size_t m) {
    Table t(len);
    for (auto& x : t) x = static_cast<Element>(pick(g, m));
    return t;
}

std::size_t power(std::size_t m, int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= m;
    return r;
}

// A valid algebra with one unary or binary op on a member of the preset.
Algebra random_algebra(Rng& g, const Structure& s, const AxiomSet& ax) {
    std::vector<LiftingSpec> specs{lifting::Discrete{}, lifting::Product{}};
    if (ax.signature->is_quantitative()) specs.push_back(lifting::Lipschitz{Rational(2)});
    for (int attempt = 0; attempt < 40; ++attempt) {
        int arity = pick(g, 3) == 0 ? 2 : 1;
        auto lsig = corpus::one_op(arity == 2 ? "m" : "u", arity, pick(g, specs));
        Algebra a(s, lsig, {random_table(g, power(s.size(), arity), s.size())});
        if (oracle::valid_algebra(a)) return a;
    }
    Table id(s.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Element>(i);
    return Algebra(s, corpus::one_op("u", 1, lifting::Product{}), {id});
}

}  // namespace

Result clauses(std::size_t cases, std::uint64_t seed) {
    Result r{"clause satisfaction", cases, 0, {}};
    Rng g(seed ^ 0x11);
    const auto& u = universe();
    for (std::size_t i = 0; i < cases; ++i) {
        SigPtr sig = pick(g, 3) == 0 ? u.poset : u.q4;
        auto s = corpus::random_structure(sig, 1 + pick(g, 4), std::uniform_real_distribution<double>(0.2, 0.9)(g), g);
        HornClause c;
        std::size_t vars = 1 + pick(g, 4);
        for (std::size_t v = 0; v < vars; ++v) c.variables.push_back("x" + std::to_string(v));
        std::size_t np = pick(g, 4);
        for (std::size_t k = 0; k < np; ++k) c.premises.push_back(random_atom(g, *sig, vars));
        if (pick(g, 3) == 0)
            c.conclusion = VarEquality{static_cast<int>(pick(g, vars)), static_cast<int>(pick(g, vars))};
        else
            c.conclusion = random_atom(g, *sig, vars);
        auto main = satisfies_clause(s, c);
        auto ref = oracle::satisfies_clause(s, c);
        if (main.satisfied != ref.satisfied || main.witness != ref.witness)
            disagree(r, i, "satisfied " + std::to_string(main.satisfied) + " vs " + std::to_string(ref.satisfied));
    }
    return r;
}

Result equations(std::size_t cases, std::uint64_t seed) {
    Result r{"equation satisfaction", cases, 0, {}};
    Rng g(seed ^ 0x22);
    const auto& u = universe();
    LiftedSignature lsig(AlgebraicSignature({{"m", 2}, {"u", 1}, {"k", 0}}),
                         {lifting::Discrete{}, lifting::Discrete{}, lifting::Discrete{}});
    for (std::size_t i = 0; i < cases; ++i) {
        SigPtr sig = pick(g, 2) == 0 ? u.poset : u.q2;
        std::size_t n = 1 + pick(g, 3);
        auto s = corpus::random_structure(sig, n, 0.5, g);
        Algebra a(s, lsig, {random_table(g, n * n, n), random_table(g, n, n), random_table(g, 1, n)});
        ClusteredEquation eq;
        eq.name = "e";
        std::size_t vars = 1 + pick(g, 3);
        for (std::size_t v = 0; v < vars; ++v) eq.variables.push_back("x" + std::to_string(v));
        std::size_t np = pick(g, 3);
        for (std::size_t k = 0; k < np; ++k) eq.premises.push_back(random_atom(g, *sig, vars));
        if (pick(g, 2) == 0) {
            eq.conclusion = TermEquality{random_term(g, lsig.base(), vars, 2), random_term(g, lsig.base(), vars, 2)};
        } else {
            RelationOnTerms rel{pick(g, sig->size()), {}};
            for (int k = 0; k < (*sig)[rel.rel].arity; ++k) rel.terms.push_back(random_term(g, lsig.base(), vars, 2));
            eq.conclusion = rel;
        }
        auto main = satisfies_equation(a, eq);
        auto ref = oracle::satisfies_equation(a, eq);
        if (main.satisfied != ref.satisfied || main.witness != ref.witness)
            disagree(r, i, "satisfied " + std::to_string(main.satisfied) + " vs " + std::to_string(ref.satisfied));
    }
    return r;
}

Result liftings(std::size_t cases, std::uint64_t seed) {
    Result r{"lifting", cases, 0, {}};
    Rng g(seed ^ 0x33);
    const auto& u = universe();
    const std::vector<Rational> alphas{Rational(1), Rational(3, 2), Rational(2)};
    const std::vector<Rational> ps{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    for (std::size_t i = 0; i < cases; ++i) {
        bool quantitative = pick(g, 3) != 0;
        SigPtr sig = quantitative ? (pick(g, 2) ? u.q2 : u.q4) : u.poset;
        int n = 1 + static_cast<int>(pick(g, 2));
        LiftingSpec spec;
        switch (pick(g, quantitative ? 6 : 4)) {
            case 0: spec = lifting::Discrete{}; break;
            case 1: spec = lifting::Product{}; break;
            case 2: {
                lifting::Subset sub;
                for (int k = 0; k < n; ++k)
                    if (pick(g, 2)) sub.coordinates.push_back(k);
                spec = sub;
                break;
            }
            case 3: spec = lifting::Lexicographic{(*sig)[pick(g, sig->size())].name}; break;
            case 4: spec = lifting::Lipschitz{pick(g, alphas)}; break;
            default:
                spec = lifting::LK{pick(g, ps)};
                n = 2;
        }
        auto s = corpus::random_structure(sig, 1 + pick(g, 3), 0.5, g);
        if (quantitative) close_under_type1(s, gmet_preset(sig, MetricFlags{}));
        if (apply_lifting(spec, s, n) != oracle::lifting(spec, s, n)) disagree(r, i, describe(spec));
    }
    return r;
}

Result quotients(std::size_t cases, std::uint64_t seed) {
    Result r{"quotients", cases, 0, {}};
    Rng g(seed ^ 0x44);
    const auto& u = universe();
    for (std::size_t i = 0; i < cases; ++i) {
        std::size_t p = pick(g, u.presets.size());
        auto a = random_algebra(g, pick(g, u.members[p]), u.presets[p]);
        std::vector<oracle::QuotientKey> got;
        for (const auto& q : enumerate_quotients(a, u.presets[p])) {
            oracle::QuotientKey k{q.e, {}};
            for (std::size_t sym = 0; sym < q.codomain.carrier().signature().size(); ++sym)
                k.relations.push_back(q.codomain.carrier().codes(sym));
            got.push_back(std::move(k));
        }
        std::sort(got.begin(), got.end());
        auto ref = oracle::quotients(a, u.presets[p]);
        if (got != ref) disagree(r, i, std::to_string(got.size()) + " vs " + std::to_string(ref.size()) + " quotients");
    }
    return r;
}

Result pairs(std::size_t cases, std::uint64_t seed) {
    Result r{"compatible pairs", cases, 0, {}};
    Rng g(seed ^ 0x55);
    const auto& u = universe();
    for (std::size_t i = 0; i < cases; ++i) {
        std::size_t p = pick(g, u.presets.size());
        auto a = random_algebra(g, pick(g, u.members[p]), u.presets[p]);
        std::vector<oracle::PairKey> got;
        for (const auto& pr : enumerate_compatible_pairs(a, u.presets[p])) got.push_back({pr.classes, pr.refined});
        std::sort(got.begin(), got.end());
        auto ref = oracle::pairs(a, u.presets[p]);
        if (got != ref) disagree(r, i, std::to_string(got.size()) + " vs " + std::to_string(ref.size()) + " pairs");
    }
    return r;
}

Result reflexive(std::size_t cases, std::uint64_t seed) {
    Result r{"c-reflexivity", cases, 0, {}};
    Rng g(seed ^ 0x66);
    const auto& u = universe();
    const std::vector<std::optional<std::size_t>> bounds{1, 2, 3, 4, std::nullopt};
    for (std::size_t i = 0; i < cases; ++i) {
        SigPtr sig = pick(g, 2) ? u.q2 : u.poset;
        std::size_t m = 1 + pick(g, 3);
        std::size_t n = m + pick(g, 5 - m);
        auto src = corpus::random_structure(sig, n, 0.5, g);
        auto cod = corpus::random_structure(sig, m, 0.5, g);
        Table e = random_table(g, n, m);
        for (std::size_t b = 0; b < m; ++b) e[b] = static_cast<Element>(b);
        std::shuffle(e.begin(), e.end(), g);
        auto c = pick(g, bounds);
        bool main = is_c_reflexive(src, cod, e, c).reflexive;
        if (main != oracle::reflexive(src, cod, e, c)) disagree(r, i, "e = " + show(e));
    }
    return r;
}

Result factorization(std::size_t cases, std::uint64_t seed) {
    Result r{"factorization", cases, 0, {}};
    Rng g(seed ^ 0x77);
    const auto& u = universe();
    for (std::size_t i = 0; i < cases; ++i) {
        SigPtr sig = pick(g, 2) ? u.q2 : u.poset;
        std::size_t nb = 1 + pick(g, 3);
        std::size_t na = nb + pick(g, 4 - nb);
        std::size_t nc = 1 + pick(g, 3);
        auto a = corpus::random_structure(sig, na, 0.4, g);
        auto b = corpus::random_structure(sig, nb, 0.4, g);
        auto c = corpus::random_structure(sig, nc, 0.6, g);
        Table e = random_table(g, na, nb);
        for (std::size_t k = 0; k < nb; ++k) e[k] = static_cast<Element>(k);
        std::shuffle(e.begin(), e.end(), g);
        Table h = random_table(g, na, nc);
        auto main = factor_through(a, b, c, e, h);
        auto ref = oracle::factor_through(a, b, c, e, h);
        if (main.g != ref) disagree(r, i, "e = " + show(e) + ", h = " + show(h));
    }
    return r;
}

std::vector<Result> all(std::size_t cases, std::uint64_t seed) {
    return {clauses(cases, seed),   equations(cases, seed), liftings(cases, seed),     quotients(cases, seed),
            pairs(cases, seed),     reflexive(cases, seed), factorization(cases, seed)};
}

}  // namespace sweep
