#include "relalg/structures.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace relalg {

namespace {

std::uint64_t checked_power(std::size_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / 2 / base)
            throw Error("tuple space too large to encode");
        r *= base;
    }
    return r;
}

}  // namespace

Structure::Structure(SigPtr sig, std::size_t size) : sig_(std::move(sig)), size_(size) {
    if (!sig_) throw Error("structure without signature");
    rel_.resize(sig_->size());
    for (std::size_t s = 0; s < sig_->size(); ++s) checked_power(size_, arity(s));
}

Structure::Structure(SigPtr sig, std::size_t size, const std::vector<std::vector<Tuple>>& relations)
    : Structure(std::move(sig), size) {
    if (relations.size() != sig_->size()) throw Error("relation count does not match signature");
    for (std::size_t s = 0; s < relations.size(); ++s) {
        std::vector<std::uint64_t> codes;
        for (const auto& t : relations[s]) {
            check_tuple(s, t);
            codes.push_back(encode(s, t));
        }
        assign_codes(s, std::move(codes));
    }
}

void Structure::check_tuple(std::size_t sym, std::span<const Element> tuple) const {
    if (tuple.size() != static_cast<std::size_t>(arity(sym)))
        throw Error("tuple length does not match arity of '" + (*sig_)[sym].name + "'");
    for (auto e : tuple)
        if (e < 0 || static_cast<std::size_t>(e) >= size_)
            throw Error("element index " + std::to_string(e) + " out of range");
}

std::uint64_t Structure::encode(std::size_t sym, std::span<const Element> tuple) const {
    (void)sym;
    std::uint64_t code = 0;
    for (auto e : tuple) code = code * size_ + static_cast<std::uint64_t>(e);
    return code;
}

Tuple Structure::decode(std::size_t sym, std::uint64_t code) const {
    Tuple t(static_cast<std::size_t>(arity(sym)));
    for (std::size_t k = t.size(); k-- > 0;) {
        t[k] = static_cast<Element>(code % size_);
        code /= size_;
    }
    return t;
}

std::uint64_t Structure::tuple_space(std::size_t sym) const { return checked_power(size_, arity(sym)); }

bool Structure::holds_code(std::size_t sym, std::uint64_t code) const {
    const auto& r = rel_[sym];
    return std::binary_search(r.begin(), r.end(), code);
}

bool Structure::holds(std::size_t sym, std::span<const Element> tuple) const {
    return holds_code(sym, encode(sym, tuple));
}

void Structure::insert(std::size_t sym, std::span<const Element> tuple) {
    check_tuple(sym, tuple);
    auto code = encode(sym, tuple);
    auto& r = rel_[sym];
    auto it = std::lower_bound(r.begin(), r.end(), code);
    if (it == r.end() || *it != code) r.insert(it, code);
}

void Structure::erase(std::size_t sym, std::span<const Element> tuple) {
    check_tuple(sym, tuple);
    auto code = encode(sym, tuple);
    auto& r = rel_[sym];
    auto it = std::lower_bound(r.begin(), r.end(), code);
    if (it != r.end() && *it == code) r.erase(it);
}

void Structure::assign_codes(std::size_t sym, std::vector<std::uint64_t> codes) {
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    if (!codes.empty() && codes.back() >= tuple_space(sym)) throw Error("tuple code out of range");
    rel_[sym] = std::move(codes);
}

std::size_t Structure::total_tuples() const {
    std::size_t n = 0;
    for (const auto& r : rel_) n += r.size();
    return n;
}

std::vector<Tuple> Structure::tuples(std::size_t sym) const {
    std::vector<Tuple> out;
    out.reserve(rel_[sym].size());
    for (auto c : rel_[sym]) out.push_back(decode(sym, c));
    return out;
}

namespace {

void check_map(const Structure& dom, const Structure& cod, std::span<const Element> table) {
    if (!same_signature(dom.signature_ptr(), cod.signature_ptr()))
        throw Error("structure map between different signatures");
    if (table.size() != dom.size()) throw Error("map table is not total on its domain");
    for (auto v : table)
        if (v < 0 || static_cast<std::size_t>(v) >= cod.size()) throw Error("map value out of range");
}

}  // namespace

bool preserves_relations(const Structure& dom, const Structure& cod, std::span<const Element> table) {
    check_map(dom, cod, table);
    Tuple image;
    for (std::size_t s = 0; s < dom.signature().size(); ++s) {
        for (auto code : dom.codes(s)) {
            image = dom.decode(s, code);
            for (auto& e : image) e = table[static_cast<std::size_t>(e)];
            if (!cod.holds(s, image)) return false;
        }
    }
    return true;
}

std::vector<PreservationFailure> preservation_failures(const Structure& dom, const Structure& cod,
                                                       std::span<const Element> table, std::size_t limit) {
    check_map(dom, cod, table);
    std::vector<PreservationFailure> out;
    for (std::size_t s = 0; s < dom.signature().size(); ++s) {
        for (auto code : dom.codes(s)) {
            auto t = dom.decode(s, code);
            Tuple image = t;
            for (auto& e : image) e = table[static_cast<std::size_t>(e)];
            if (!cod.holds(s, image)) {
                out.push_back({s, std::move(t)});
                if (out.size() >= limit) return out;
            }
        }
    }
    return out;
}

bool reflects_relations(const Structure& dom, const Structure& cod, std::span<const Element> table) {
    check_map(dom, cod, table);
    std::vector<std::vector<Element>> fibers(cod.size());
    for (std::size_t a = 0; a < table.size(); ++a) fibers[static_cast<std::size_t>(table[a])].push_back(static_cast<Element>(a));
    for (std::size_t s = 0; s < cod.signature().size(); ++s) {
        for (auto code : cod.codes(s)) {
            auto t = cod.decode(s, code);
            bool in_image = std::all_of(t.begin(), t.end(), [&](Element b) { return !fibers[static_cast<std::size_t>(b)].empty(); });
            if (!in_image) continue;
            // every preimage tuple must be related in dom
            std::vector<std::size_t> pos(t.size(), 0);
            Tuple pre(t.size());
            while (true) {
                for (std::size_t k = 0; k < t.size(); ++k) pre[k] = fibers[static_cast<std::size_t>(t[k])][pos[k]];
                if (!dom.holds(s, pre)) return false;
                std::size_t k = t.size();
                bool done = true;
                while (k-- > 0) {
                    if (++pos[k] < fibers[static_cast<std::size_t>(t[k])].size()) {
                        done = false;
                        break;
                    }
                    pos[k] = 0;
                }
                if (done) break;
            }
        }
    }
    return true;
}

MorphismClass classify_map(const Structure& dom, const Structure& cod, std::span<const Element> table) {
    MorphismClass c;
    c.preserves = preserves_relations(dom, cod, table);
    c.reflects = reflects_relations(dom, cod, table);
    c.injective = is_injective(table);
    c.surjective = is_surjective(table, cod.size());
    return c;
}

Table identity_table(std::size_t n) {
    Table t(n);
    std::iota(t.begin(), t.end(), 0);
    return t;
}

Table compose(std::span<const Element> g, std::span<const Element> f) {
    Table out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[static_cast<std::size_t>(f[i])];
    return out;
}

bool is_surjective(std::span<const Element> table, std::size_t cod_size) {
    std::vector<bool> hit(cod_size, false);
    for (auto v : table) hit[static_cast<std::size_t>(v)] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_injective(std::span<const Element> table) {
    std::vector<Element> sorted(table.begin(), table.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

std::uint64_t product_index(std::span<const Element> coords, std::span<const std::size_t> sizes) {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) idx = idx * sizes[k] + static_cast<std::uint64_t>(coords[k]);
    return idx;
}

Tuple product_coords(std::uint64_t index, std::span<const std::size_t> sizes) {
    Tuple c(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
        c[k] = static_cast<Element>(index % sizes[k]);
        index /= sizes[k];
    }
    return c;
}

ProductResult product(const SigPtr& sig, const std::vector<Structure>& factors) {
    std::vector<std::size_t> sizes;
    std::uint64_t total = 1;
    for (const auto& f : factors) {
        if (!same_signature(f.signature_ptr(), sig)) throw Error("product factors must share the signature");
        sizes.push_back(f.size());
        total *= f.size();
    }
    if (total > (1u << 24)) throw Error("product carrier too large");
    Structure p(sig, static_cast<std::size_t>(total));
    for (std::size_t s = 0; s < sig->size(); ++s) {
        const int ar = (*sig)[s].arity;
        // Walk all combinations of one related tuple per factor.
        std::vector<std::vector<Tuple>> per_factor;
        bool any_empty = false;
        for (const auto& f : factors) {
            per_factor.push_back(f.tuples(s));
            any_empty = any_empty || per_factor.back().empty();
        }
        if (any_empty || total == 0) continue;
        std::vector<std::uint64_t> codes;
        std::vector<std::size_t> pos(factors.size(), 0);
        Tuple combined(static_cast<std::size_t>(ar));
        Tuple coords(factors.size());
        while (true) {
            for (int j = 0; j < ar; ++j) {
                for (std::size_t k = 0; k < factors.size(); ++k) coords[k] = per_factor[k][pos[k]][static_cast<std::size_t>(j)];
                combined[static_cast<std::size_t>(j)] = static_cast<Element>(product_index(coords, sizes));
            }
            codes.push_back(p.encode(s, combined));
            std::size_t k = factors.size();
            bool done = true;
            while (k-- > 0) {
                if (++pos[k] < per_factor[k].size()) {
                    done = false;
                    break;
                }
                pos[k] = 0;
            }
            if (done) break;
        }
        p.assign_codes(s, std::move(codes));
    }
    ProductResult out{std::move(p), {}};
    for (std::size_t k = 0; k < factors.size(); ++k) {
        Table proj(static_cast<std::size_t>(total));
        for (std::uint64_t i = 0; i < total; ++i) proj[i] = product_coords(i, sizes)[k];
        out.projections.push_back(std::move(proj));
    }
    return out;
}

CoproductResult coproduct(const SigPtr& sig, const std::vector<Structure>& summands) {
    std::size_t total = 0;
    std::vector<std::size_t> offsets;
    for (const auto& s : summands) {
        if (!same_signature(s.signature_ptr(), sig)) throw Error("coproduct summands must share the signature");
        offsets.push_back(total);
        total += s.size();
    }
    Structure c(sig, total);
    for (std::size_t s = 0; s < sig->size(); ++s) {
        std::vector<std::uint64_t> codes;
        for (std::size_t k = 0; k < summands.size(); ++k) {
            for (auto t : summands[k].tuples(s)) {
                for (auto& e : t) e += static_cast<Element>(offsets[k]);
                codes.push_back(c.encode(s, t));
            }
        }
        c.assign_codes(s, std::move(codes));
    }
    CoproductResult out{std::move(c), {}};
    for (std::size_t k = 0; k < summands.size(); ++k) {
        Table inj(summands[k].size());
        for (std::size_t i = 0; i < inj.size(); ++i) inj[i] = static_cast<Element>(offsets[k] + i);
        out.injections.push_back(std::move(inj));
    }
    return out;
}

SubstructureResult substructure(const Structure& a, std::span<const Element> subset) {
    std::vector<Element> sub(subset.begin(), subset.end());
    std::sort(sub.begin(), sub.end());
    sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    for (auto e : sub)
        if (e < 0 || static_cast<std::size_t>(e) >= a.size()) throw Error("substructure index out of range");
    std::vector<Element> position(a.size(), -1);
    for (std::size_t i = 0; i < sub.size(); ++i) position[static_cast<std::size_t>(sub[i])] = static_cast<Element>(i);
    Structure s(a.signature_ptr(), sub.size());
    for (std::size_t r = 0; r < a.signature().size(); ++r) {
        std::vector<std::uint64_t> codes;
        for (auto code : a.codes(r)) {
            auto t = a.decode(r, code);
            bool inside = true;
            for (auto& e : t) {
                e = position[static_cast<std::size_t>(e)];
                inside = inside && e >= 0;
            }
            if (inside) codes.push_back(s.encode(r, t));
        }
        s.assign_codes(r, std::move(codes));
    }
    return {std::move(sub), std::move(s)};
}

ImageFactorization image_factorize(const Structure& dom, const Structure& cod, std::span<const Element> f) {
    if (!preserves_relations(dom, cod, f)) throw Error("image factorization of a non-preserving map");
    auto sub = substructure(cod, f);
    std::vector<Element> position(cod.size(), -1);
    for (std::size_t i = 0; i < sub.subset.size(); ++i) position[static_cast<std::size_t>(sub.subset[i])] = static_cast<Element>(i);
    Table surj(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) surj[i] = position[static_cast<std::size_t>(f[i])];
    return {std::move(surj), std::move(sub.structure), std::move(sub.subset)};
}

std::vector<SubstructureResult> enumerate_substructures(const Structure& a, std::optional<std::size_t> max_size) {
    const std::size_t n = a.size();
    if (n > 20) throw BoundExceeded("substructure enumeration limited to 20 elements");
    const std::size_t limit = std::min(n, max_size.value_or(n));
    std::vector<SubstructureResult> out;
    for (std::size_t k = 0; k <= limit; ++k) {
        // lexicographic k-combinations of 0..n-1
        std::vector<Element> comb(k);
        std::iota(comb.begin(), comb.end(), 0);
        while (true) {
            out.push_back(substructure(a, comb));
            if (k == 0) break;
            std::size_t i = k;
            while (i > 0 && static_cast<std::size_t>(comb[i - 1]) == n - k + i - 1) --i;
            if (i == 0) break;
            ++comb[i - 1];
            for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace relalg
