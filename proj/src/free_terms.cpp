#include "relalg/free_terms.hpp"

#include <algorithm>

namespace relalg {

int Term::depth() const {
    if (is_var()) return 0;
    int d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d + 1;
}

void Term::validate(const AlgebraicSignature& sig, std::size_t var_count) const {
    if (is_var()) {
        if (static_cast<std::size_t>(var) >= var_count) throw Error("term variable out of range");
        return;
    }
    if (op >= sig.size()) throw Error("unknown operation in term");
    if (args.size() != static_cast<std::size_t>(sig[op].arity))
        throw Error("operation '" + sig[op].name + "' applied to the wrong number of arguments");
    for (const auto& a : args) a.validate(sig, var_count);
}

std::string show_term(const Term& t, const std::vector<std::string>& vars, const AlgebraicSignature& sig) {
    if (t.is_var()) return vars.at(static_cast<std::size_t>(t.var));
    std::string s = sig[t.op].name;
    if (t.args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += show_term(t.args[i], vars, sig);
    }
    return s + ')';
}

Term FreeAlgebraSlice::term(std::size_t i) const {
    const auto& n = nodes_.at(i);
    if (n.var >= 0) return Term::variable(n.var);
    std::vector<Term> args;
    for (Element a : n.args) args.push_back(term(static_cast<std::size_t>(a)));
    return Term::apply(n.op, std::move(args));
}

std::optional<Element> FreeAlgebraSlice::find(std::size_t op, const Tuple& args) const {
    auto it = apps_.find({op, args});
    if (it == apps_.end()) return std::nullopt;
    return it->second;
}

std::optional<Element> FreeAlgebraSlice::index_of(const Term& t) const {
    if (t.is_var()) {
        if (static_cast<std::size_t>(t.var) >= base_.size()) return std::nullopt;
        return t.var;
    }
    Tuple args;
    for (const auto& a : t.args) {
        auto i = index_of(a);
        if (!i) return std::nullopt;
        args.push_back(*i);
    }
    return find(t.op, args);
}

FreeAlgebraSlice build_free_slice(const Structure& x, const LiftedSignature& lsig, int d) {
    if (d < 0) throw Error("free slice depth must be >= 0");
    FreeAlgebraSlice s;
    s.base_ = x;
    s.sig_ = lsig;
    s.depth_ = d;
    for (std::size_t v = 0; v < x.size(); ++v) s.nodes_.push_back({static_cast<int>(v), 0, {}, 0});
    s.depth_end_.push_back(s.nodes_.size());
    Structure stage = x;
    for (int k = 1; k <= d; ++k) {
        const std::size_t prev = s.nodes_.size();
        const std::size_t prev_start = k >= 2 ? s.depth_end_[static_cast<std::size_t>(k - 2)] : 0;
        for (std::size_t op = 0; op < lsig.size(); ++op) {
            const int ar = lsig[op].arity;
            for_each_map(static_cast<std::size_t>(ar), prev, [&](const Table& args) {
                // new at depth k: some argument has depth exactly k-1
                bool fresh = ar == 0 ? k == 1
                                     : std::any_of(args.begin(), args.end(), [&](Element a) {
                                           return static_cast<std::size_t>(a) >= prev_start;
                                       });
                if (!fresh) return;
                s.apps_[{op, args}] = static_cast<Element>(s.nodes_.size());
                s.nodes_.push_back({-1, op, args, k});
            });
        }
        s.depth_end_.push_back(s.nodes_.size());

        Structure next(x.signature_ptr(), s.nodes_.size());
        // variable tuples, re-encoded for the larger carrier
        for (std::size_t r = 0; r < x.signature().size(); ++r) {
            std::vector<std::uint64_t> codes;
            for (const auto& t : x.tuples(r)) codes.push_back(next.encode(r, t));
            next.assign_codes(r, std::move(codes));
        }
        std::vector<std::vector<std::uint64_t>> extra(x.signature().size());
        for (std::size_t op = 0; op < lsig.size(); ++op) {
            const int ar = lsig[op].arity;
            auto lifted = apply_lifting(lsig.lifting_of(op), stage, ar);
            auto sizes = std::vector<std::size_t>(static_cast<std::size_t>(ar), prev);
            // index in stage^ar -> node of op(args)
            std::vector<Element> app_of(lifted.size());
            for (std::size_t u = 0; u < lifted.size(); ++u)
                app_of[u] = s.apps_.at({op, product_coords(u, sizes)});
            for (std::size_t r = 0; r < x.signature().size(); ++r)
                for (auto code : lifted.codes(r)) {
                    auto t = lifted.decode(r, code);
                    for (auto& e : t) e = app_of[static_cast<std::size_t>(e)];
                    extra[r].push_back(next.encode(r, t));
                }
        }
        for (std::size_t r = 0; r < x.signature().size(); ++r) {
            auto codes = next.codes(r);
            codes.insert(codes.end(), extra[r].begin(), extra[r].end());
            next.assign_codes(r, std::move(codes));
        }
        stage = std::move(next);
    }
    s.structure_ = std::move(stage);
    return s;
}

std::uint64_t term_count(std::size_t x_size, const AlgebraicSignature& sig, int d) {
    std::uint64_t t = x_size;
    for (int k = 0; k < d; ++k) {
        std::uint64_t next = x_size;
        for (const auto& op : sig.symbols()) {
            std::uint64_t p = 1;
            for (int i = 0; i < op.arity; ++i) p *= t;
            next += p;
        }
        t = next;
    }
    return t;
}

StructureMap canonical_injection(const FreeAlgebraSlice& slice) {
    return {slice.base(), slice.structure(), identity_table(slice.base().size())};
}

Element extend(std::span<const Element> h, const Algebra& a, const Term& t) {
    if (t.is_var()) {
        if (static_cast<std::size_t>(t.var) >= h.size()) throw Error("extend: variable outside the assignment");
        return h[static_cast<std::size_t>(t.var)];
    }
    if (t.op >= a.signature().size() || t.args.size() != static_cast<std::size_t>(a.signature()[t.op].arity))
        throw Error("extend: term does not match the algebra's signature");
    Tuple args;
    for (const auto& s : t.args) args.push_back(extend(h, a, s));
    return a.apply(t.op, args);
}

Table extend_on_slice(std::span<const Element> h, const Algebra& a, const FreeAlgebraSlice& slice) {
    if (h.size() != slice.base().size()) throw Error("extend: assignment size differs from X");
    if (!(a.signature() == slice.signature())) throw Error("extend: signature mismatch");
    Table out(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const auto& n = slice.node(i);
        if (n.var >= 0) {
            out[i] = h[static_cast<std::size_t>(n.var)];
            continue;
        }
        Tuple args;
        for (Element e : n.args) args.push_back(out[static_cast<std::size_t>(e)]);
        out[i] = a.apply(n.op, args);
    }
    return out;
}

bool extend_is_morphism(std::span<const Element> h, const Algebra& a, const FreeAlgebraSlice& slice) {
    return preserves_relations(slice.structure(), a.carrier(), extend_on_slice(h, a, slice));
}

}  // namespace relalg
