#include "relalg/liftings.hpp"

#include <algorithm>
#include <optional>

namespace relalg {

namespace {

std::vector<std::size_t> power_sizes(std::size_t s, int n) { return std::vector<std::size_t>(static_cast<std::size_t>(n), s); }

// Relation codes on A^n for a symbol of arity m, where coordinate i of the
// m lifted tuples ranges over choices[i] (each a list of m-tuples of A).
std::vector<std::uint64_t> combine_coordinates(const Structure& lifted, std::size_t sym,
                                               const std::vector<std::vector<Tuple>>& choices, std::size_t s) {
    std::vector<std::uint64_t> codes;
    const std::size_t n = choices.size();
    for (const auto& c : choices)
        if (c.empty()) return codes;
    const std::size_t m = static_cast<std::size_t>(lifted.arity(sym));
    auto sizes = power_sizes(s, static_cast<int>(n));
    std::vector<std::size_t> pos(n, 0);
    Tuple coords(n), combined(m);
    while (true) {
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < n; ++i) coords[i] = choices[i][pos[i]][j];
            combined[j] = static_cast<Element>(product_index(coords, sizes));
        }
        codes.push_back(lifted.encode(sym, combined));
        std::size_t i = n;
        bool done = true;
        while (i-- > 0) {
            if (++pos[i] < choices[i].size()) {
                done = false;
                break;
            }
            pos[i] = 0;
        }
        if (done) break;
    }
    return codes;
}

std::vector<Tuple> all_tuples(std::size_t s, int m) {
    std::vector<Tuple> out;
    for_each_map(static_cast<std::size_t>(m), s, [&](const Table& t) { out.push_back(t); });
    return out;
}

Structure subset_lifting(const Structure& a, int n, const std::vector<bool>& constrained) {
    const auto s = a.size();
    auto sizes = power_sizes(s, n);
    std::uint64_t carrier = 1;
    for (auto z : sizes) carrier *= z;
    Structure lifted(a.signature_ptr(), static_cast<std::size_t>(carrier));
    for (std::size_t r = 0; r < a.signature().size(); ++r) {
        auto related = a.tuples(r);
        auto free = all_tuples(s, a.arity(r));
        std::vector<std::vector<Tuple>> choices;
        for (int i = 0; i < n; ++i) choices.push_back(constrained[static_cast<std::size_t>(i)] ? related : free);
        if (n == 0) {
            // A^0 is a point; the empty conjunction holds.
            lifted.assign_codes(r, {0});
            continue;
        }
        lifted.assign_codes(r, combine_coordinates(lifted, r, choices, s));
    }
    return lifted;
}

// Least lattice index q with a =:q b, if any.
std::vector<std::optional<std::size_t>> min_distances(const Structure& a) {
    const auto s = a.size();
    std::vector<std::optional<std::size_t>> d(s * s);
    for (std::size_t r = a.signature().size(); r-- > 0;)
        for (auto code : a.codes(r)) d[code] = r;  // binary: code = x*s + y
    return d;
}

template <class Value>
Structure quantitative_lifting(const Structure& a, int n, Value&& value) {
    const auto& q = *a.signature().quantities();
    const auto s = a.size();
    auto sizes = power_sizes(s, n);
    std::uint64_t carrier = 1;
    for (auto z : sizes) carrier *= z;
    Structure lifted(a.signature_ptr(), static_cast<std::size_t>(carrier));
    auto md = min_distances(a);
    std::vector<std::vector<std::uint64_t>> codes(q.size());
    for (std::uint64_t u = 0; u < carrier; ++u) {
        auto cu = product_coords(u, sizes);
        for (std::uint64_t v = 0; v < carrier; ++v) {
            auto cv = product_coords(v, sizes);
            std::optional<Rational> val = value(md, cu, cv, s);
            if (!val || Rational(1) < *val) continue;
            for (std::size_t i = q.round_up(*val); i < q.size(); ++i) codes[i].push_back(u * carrier + v);
        }
    }
    for (std::size_t i = 0; i < q.size(); ++i) lifted.assign_codes(i, std::move(codes[i]));
    return lifted;
}

Structure lexicographic_lifting(const Structure& a, int n, std::size_t order) {
    // Other symbols lift as products.
    auto lifted = subset_lifting(a, n, std::vector<bool>(static_cast<std::size_t>(n), true));
    const auto s = a.size();
    auto sizes = power_sizes(s, n);
    std::uint64_t carrier = lifted.size();
    std::vector<std::uint64_t> codes;
    for (std::uint64_t u = 0; u < carrier; ++u) codes.push_back(u * carrier + u);
    for (const auto& t : a.tuples(order)) {
        if (t[0] == t[1]) continue;
        for (int k = 0; k < n; ++k) {
            // equal prefix of length k, (t0,t1) at k, arbitrary suffixes
            const int rest = n - k - 1;
            for_each_map(static_cast<std::size_t>(k), s, [&](const Table& prefix) {
                for_each_map(static_cast<std::size_t>(rest), s, [&](const Table& suf1) {
                    for_each_map(static_cast<std::size_t>(rest), s, [&](const Table& suf2) {
                        Tuple u(prefix), v(prefix);
                        u.push_back(t[0]);
                        v.push_back(t[1]);
                        u.insert(u.end(), suf1.begin(), suf1.end());
                        v.insert(v.end(), suf2.begin(), suf2.end());
                        codes.push_back(product_index(u, sizes) * carrier + product_index(v, sizes));
                    });
                });
            });
        }
    }
    lifted.assign_codes(order, std::move(codes));
    return lifted;
}

}  // namespace

void check_applicable(const LiftingSpec& spec, const RelationalSignature& sig, int n) {
    if (n < 0) throw Error("negative arity");
    if (const auto* sub = std::get_if<lifting::Subset>(&spec)) {
        for (int c : sub->coordinates)
            if (c < 0 || c >= n) throw Error("subset lifting coordinate out of range");
    } else if (const auto* lex = std::get_if<lifting::Lexicographic>(&spec)) {
        auto sym = sig.find(lex->order_symbol);
        if (!sym || sig[*sym].arity != 2)
            throw Error("lexicographic lifting needs a binary symbol '" + lex->order_symbol + "'");
    } else if (std::holds_alternative<lifting::Lipschitz>(spec)) {
        if (!sig.is_quantitative()) throw Error("lipschitz lifting needs a quantitative signature");
    } else if (std::holds_alternative<lifting::LK>(spec)) {
        if (!sig.is_quantitative()) throw Error("lk lifting needs a quantitative signature");
        if (n != 2) throw Error("lk lifting is only defined at arity 2");
    }
}

Structure apply_lifting(const LiftingSpec& spec, const Structure& a, int n) {
    check_applicable(spec, a.signature(), n);
    struct Visitor {
        const Structure& a;
        int n;
        Structure operator()(const lifting::Discrete&) const {
            std::uint64_t carrier = 1;
            for (int i = 0; i < n; ++i) carrier *= a.size();
            return Structure(a.signature_ptr(), static_cast<std::size_t>(carrier));
        }
        Structure operator()(const lifting::Product&) const {
            return product(a.signature_ptr(), std::vector<Structure>(static_cast<std::size_t>(n), a)).product;
        }
        Structure operator()(const lifting::Subset& sub) const {
            std::vector<bool> constrained(static_cast<std::size_t>(n), false);
            for (int c : sub.coordinates) constrained[static_cast<std::size_t>(c)] = true;
            return subset_lifting(a, n, constrained);
        }
        Structure operator()(const lifting::Lexicographic& lex) const {
            return lexicographic_lifting(a, n, a.signature().index(lex.order_symbol));
        }
        Structure operator()(const lifting::Lipschitz& lip) const {
            const auto& q = *a.signature().quantities();
            return quantitative_lifting(a, n, [&](const auto& md, const Tuple& u, const Tuple& v, std::size_t s) {
                Rational worst(0);
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const auto& d = md[static_cast<std::size_t>(u[i]) * s + static_cast<std::size_t>(v[i])];
                    if (!d) return std::optional<Rational>{};
                    worst = std::max(worst, q.value(*d));
                }
                return std::optional<Rational>(lip.alpha * worst);
            });
        }
        Structure operator()(const lifting::LK& lk) const {
            const auto& q = *a.signature().quantities();
            const Rational p = lk.p, r = Rational(1) - lk.p;
            const Rational w[2][2] = {{p * p, p * r}, {r * p, r * r}};
            return quantitative_lifting(a, n, [&](const auto& md, const Tuple& u, const Tuple& v, std::size_t s) {
                Rational total(0);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) {
                        const auto& d = md[static_cast<std::size_t>(u[i]) * s + static_cast<std::size_t>(v[j])];
                        if (!d) return std::optional<Rational>{};
                        total = total + w[i][j] * q.value(*d);
                    }
                return std::optional<Rational>(total);
            });
        }
    };
    return std::visit(Visitor{a, n}, spec);
}

Table lift_map(std::span<const Element> table, std::size_t cod_size, int n) {
    const std::size_t dom_size = table.size();
    auto dom_sizes = power_sizes(dom_size, n);
    auto cod_sizes = power_sizes(cod_size, n);
    std::uint64_t carrier = 1;
    for (auto z : dom_sizes) carrier *= z;
    Table out(static_cast<std::size_t>(carrier));
    for (std::uint64_t u = 0; u < carrier; ++u) {
        auto c = product_coords(u, dom_sizes);
        for (auto& e : c) e = table[static_cast<std::size_t>(e)];
        out[u] = static_cast<Element>(product_index(c, cod_sizes));
    }
    return out;
}

LiftingFunction as_function(const LiftingSpec& spec) {
    return [spec](const Structure& a, int n) { return apply_lifting(spec, a, n); };
}

namespace {

template <class Required, class Expected>
LiftingCheckReport check_class(const LiftingFunction& lifting, const std::vector<StructureMap>& samples, int n,
                               Required&& required, Expected&& expected) {
    LiftingCheckReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& m = samples[i];
        if (!required(classify_map(m))) {
            ++report.skipped;
            continue;
        }
        auto ld = lifting(m.dom, n);
        auto lc = lifting(m.cod, n);
        auto lt = lift_map(m.table, m.cod.size(), n);
        auto cls = classify_map(ld, lc, lt);
        ++report.checked;
        if (!expected(cls)) {
            report.ok = false;
            report.violations.push_back({i, cls});
        }
    }
    return report;
}

void add_quantization_note(LiftingCheckReport& r, const LiftingSpec& spec) {
    if (std::holds_alternative<lifting::Lipschitz>(spec) || std::holds_alternative<lifting::LK>(spec))
        r.notes.push_back(describe(spec) + ": relations saturated within the finite quantity lattice");
}

}  // namespace

LiftingCheckReport check_preserves_embeddings(const LiftingFunction& lifting, const std::vector<StructureMap>& samples,
                                              int n) {
    auto is_emb = [](const MorphismClass& c) { return c.is_embedding(); };
    return check_class(lifting, samples, n, is_emb, is_emb);
}

LiftingCheckReport check_preserves_embeddings(const LiftingSpec& spec, const std::vector<StructureMap>& samples,
                                              int n) {
    auto r = check_preserves_embeddings(as_function(spec), samples, n);
    add_quantization_note(r, spec);
    return r;
}

LiftingCheckReport check_preserves_e_refl(const LiftingFunction& lifting, const std::vector<StructureMap>& samples,
                                          int n) {
    auto is_e = [](const MorphismClass& c) { return c.is_e_refl(); };
    return check_class(lifting, samples, n, is_e, is_e);
}

LiftingCheckReport check_preserves_e_refl(const LiftingSpec& spec, const std::vector<StructureMap>& samples, int n) {
    auto r = check_preserves_e_refl(as_function(spec), samples, n);
    add_quantization_note(r, spec);
    return r;
}

}  // namespace relalg
