#include "relalg/algebras.hpp"

#include <algorithm>

namespace relalg {

namespace {

std::uint64_t power(std::size_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<std::size_t> arg_sizes(std::size_t s, int n) { return std::vector<std::size_t>(static_cast<std::size_t>(n), s); }

}  // namespace

Algebra::Algebra(Structure carrier, LiftedSignature sig, std::vector<Table> ops)
    : carrier_(std::move(carrier)), sig_(std::move(sig)), ops_(std::move(ops)) {
    if (ops_.size() != sig_.size()) throw Error("algebra needs one table per operation symbol");
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i].size() != power(carrier_.size(), sig_[i].arity))
            throw Error("operation table '" + sig_[i].name + "' has the wrong length");
        for (Element v : ops_[i])
            if (v < 0 || static_cast<std::size_t>(v) >= carrier_.size())
                throw Error("operation table '" + sig_[i].name + "' leaves the carrier");
    }
}

std::size_t Algebra::arg_index(std::span<const Element> args) const {
    std::size_t idx = 0;
    for (Element a : args) idx = idx * carrier_.size() + static_cast<std::size_t>(a);
    return idx;
}

Element Algebra::apply(std::size_t op, std::span<const Element> args) const {
    if (args.size() != static_cast<std::size_t>(sig_[op].arity)) throw Error("wrong number of arguments");
    return ops_[op][arg_index(args)];
}

AlgebraReport validate_algebra(const Algebra& a, const AxiomSet* ax, std::size_t limit) {
    AlgebraReport report;
    const auto& sig = a.signature();
    for (std::size_t op = 0; op < sig.size(); ++op) {
        const int n = sig[op].arity;
        auto lifted = apply_lifting(sig.lifting_of(op), a.carrier(), n);
        auto sizes = arg_sizes(a.size(), n);
        for (auto& f : preservation_failures(lifted, a.carrier(), a.table(op), limit)) {
            AlgebraReport::OpViolation v{op, f.symbol, {}, {}};
            for (Element u : f.tuple) {
                v.args.push_back(product_coords(static_cast<std::uint64_t>(u), sizes));
                v.image.push_back(a.table(op)[static_cast<std::size_t>(u)]);
            }
            report.violations.push_back(std::move(v));
        }
    }
    if (!report.violations.empty()) report.valid = false;
    if (ax) {
        report.membership = in_C(a.carrier(), *ax);
        if (!report.membership->member) report.valid = false;
    }
    return report;
}

bool is_valid(const Algebra& a, const AxiomSet* ax) { return validate_algebra(a, ax, 1).valid; }

MorphismCheck check_algebra_morphism(const Algebra& dom, const Algebra& cod, std::span<const Element> table) {
    if (!(dom.signature() == cod.signature())) throw Error("algebra morphism between different signatures");
    auto failures = preservation_failures(dom.carrier(), cod.carrier(), table, 1);
    if (!failures.empty()) return {false, MorphismCheck::Failure::Relation, failures[0].symbol, failures[0].tuple};
    const auto& sig = dom.signature();
    for (std::size_t op = 0; op < sig.size(); ++op) {
        const int n = sig[op].arity;
        MorphismCheck bad;
        for_each_map(static_cast<std::size_t>(n), dom.size(), [&](const Table& args) {
            if (!bad.ok) return;
            Tuple mapped(args.size());
            for (std::size_t k = 0; k < args.size(); ++k) mapped[k] = table[static_cast<std::size_t>(args[k])];
            if (table[static_cast<std::size_t>(dom.apply(op, args))] != cod.apply(op, mapped))
                bad = {false, MorphismCheck::Failure::Operation, op, args};
        });
        if (!bad.ok) return bad;
    }
    return {};
}

AlgebraProduct algebra_product(const SigPtr& sig, const LiftedSignature& lsig, const std::vector<Algebra>& factors) {
    std::vector<Structure> carriers;
    std::vector<std::size_t> sizes;
    for (const auto& f : factors) {
        if (!(f.signature() == lsig)) throw Error("product factors have different signatures");
        carriers.push_back(f.carrier());
        sizes.push_back(f.size());
    }
    auto prod = product(sig, carriers);
    const std::size_t size = prod.product.size();
    std::vector<Table> ops;
    for (std::size_t op = 0; op < lsig.size(); ++op) {
        const int n = lsig[op].arity;
        Table t(static_cast<std::size_t>(power(size, n)));
        std::size_t idx = 0;
        for_each_map(static_cast<std::size_t>(n), size, [&](const Table& args) {
            Tuple coords(factors.size());
            Tuple factor_args(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < factors.size(); ++i) {
                for (std::size_t k = 0; k < args.size(); ++k) factor_args[k] = prod.projections[i][static_cast<std::size_t>(args[k])];
                coords[i] = factors[i].apply(op, factor_args);
            }
            t[idx++] = static_cast<Element>(product_index(coords, sizes));
        });
        ops.push_back(std::move(t));
    }
    return {Algebra(std::move(prod.product), lsig, std::move(ops)), std::move(prod.projections)};
}

Subalgebra induced_subalgebra(const Algebra& a, std::span<const Element> closed) {
    auto sub = substructure(a.carrier(), closed);
    std::vector<int> position(a.size(), -1);
    for (std::size_t i = 0; i < sub.subset.size(); ++i) position[static_cast<std::size_t>(sub.subset[i])] = static_cast<int>(i);
    const auto& sig = a.signature();
    std::vector<Table> ops;
    for (std::size_t op = 0; op < sig.size(); ++op) {
        Table t;
        for_each_map(static_cast<std::size_t>(sig[op].arity), sub.subset.size(), [&](const Table& args) {
            Tuple outer(args.size());
            for (std::size_t k = 0; k < args.size(); ++k) outer[k] = sub.subset[static_cast<std::size_t>(args[k])];
            int p = position[static_cast<std::size_t>(a.apply(op, outer))];
            if (p < 0) throw Error("subset is not closed under '" + sig[op].name + "'");
            t.push_back(p);
        });
        ops.push_back(std::move(t));
    }
    return {sub.subset, Algebra(std::move(sub.structure), sig, std::move(ops))};
}

Subalgebra subalgebra_generated(const Algebra& a, std::span<const Element> seed) {
    std::vector<bool> in(a.size(), false);
    for (Element e : seed) in.at(static_cast<std::size_t>(e)) = true;
    const auto& sig = a.signature();
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Element> current;
        for (std::size_t e = 0; e < a.size(); ++e)
            if (in[e]) current.push_back(static_cast<Element>(e));
        for (std::size_t op = 0; op < sig.size(); ++op) {
            for_each_map(static_cast<std::size_t>(sig[op].arity), current.size(), [&](const Table& args) {
                Tuple outer(args.size());
                for (std::size_t k = 0; k < args.size(); ++k) outer[k] = current[static_cast<std::size_t>(args[k])];
                auto v = static_cast<std::size_t>(a.apply(op, outer));
                if (!in[v]) in[v] = grew = true;
            });
        }
    }
    std::vector<Element> closed;
    for (std::size_t e = 0; e < a.size(); ++e)
        if (in[e]) closed.push_back(static_cast<Element>(e));
    return induced_subalgebra(a, closed);
}

std::vector<Subalgebra> enumerate_subalgebras(const Algebra& a) {
    std::vector<Subalgebra> out;
    for (const auto& s : enumerate_substructures(a.carrier())) {
        bool closed = true;
        for (std::size_t op = 0; op < a.signature().size() && closed; ++op) {
            for_each_map(static_cast<std::size_t>(a.signature()[op].arity), s.subset.size(), [&](const Table& args) {
                if (!closed) return;
                Tuple outer(args.size());
                for (std::size_t k = 0; k < args.size(); ++k) outer[k] = s.subset[static_cast<std::size_t>(args[k])];
                closed = std::binary_search(s.subset.begin(), s.subset.end(), a.apply(op, outer));
            });
        }
        if (closed) out.push_back(induced_subalgebra(a, s.subset));
    }
    return out;
}

AlgebraFactorization image_factorize_algebra(const Algebra& dom, const Algebra& cod, std::span<const Element> h) {
    if (!check_algebra_morphism(dom, cod, h).ok) throw Error("image factorization needs an algebra morphism");
    auto f = image_factorize(dom.carrier(), cod.carrier(), h);
    auto sub = induced_subalgebra(cod, f.embedding);
    return {std::move(f.surjection), std::move(sub.algebra), std::move(f.embedding)};
}

std::string describe(FactorResult::Violated v) {
    switch (v) {
        case FactorResult::Violated::None: return "none";
        case FactorResult::Violated::Kernel: return "kernel";
        case FactorResult::Violated::Relation: return "relation";
    }
    return "none";
}

FactorResult factor_through(const Structure& a, const Structure& b, const Structure& c, std::span<const Element> e,
                            std::span<const Element> h) {
    if (e.size() != a.size() || h.size() != a.size()) throw Error("factor_through: tables must share the domain");
    if (!is_surjective(e, b.size())) throw Error("factor_through: e must be surjective");
    FactorResult r;
    // (1) ker e within ker h; this also defines g.
    Table g(b.size(), -1);
    std::vector<Element> rep(b.size(), -1);
    for (std::size_t x = 0; x < a.size(); ++x) {
        auto bx = static_cast<std::size_t>(e[x]);
        if (g[bx] < 0) {
            g[bx] = h[x];
            rep[bx] = static_cast<Element>(x);
        } else if (g[bx] != h[x]) {
            r.violated = FactorResult::Violated::Kernel;
            r.witness = {rep[bx], static_cast<Element>(x)};
            return r;
        }
    }
    // (2) related e-images have related h-images. By (1) any preimage works.
    for (std::size_t sym = 0; sym < b.signature().size(); ++sym) {
        for (auto code : b.codes(sym)) {
            auto t = b.decode(sym, code);
            Tuple image(t.size()), pre(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) {
                pre[k] = rep[static_cast<std::size_t>(t[k])];
                image[k] = g[static_cast<std::size_t>(t[k])];
            }
            if (!c.holds(sym, image)) {
                r.violated = FactorResult::Violated::Relation;
                r.symbol = sym;
                r.witness = std::move(pre);
                return r;
            }
        }
    }
    r.g = std::move(g);
    return r;
}

}  // namespace relalg
