#include "relalg/quotients.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace relalg {

namespace {

std::size_t class_count(std::span<const Element> classes) {
    Element m = -1;
    for (Element c : classes) m = std::max(m, c);
    return static_cast<std::size_t>(m + 1);
}

// Operation tables of a / classes; the partition must be a congruence.
std::vector<Table> quotient_tables(const Algebra& a, std::span<const Element> classes, std::size_t k) {
    std::vector<Element> rep(k, -1);
    for (std::size_t x = 0; x < classes.size(); ++x)
        if (rep[static_cast<std::size_t>(classes[x])] < 0) rep[static_cast<std::size_t>(classes[x])] = static_cast<Element>(x);
    std::vector<Table> ops;
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        Table t;
        for_each_map(static_cast<std::size_t>(a.signature()[op].arity), k, [&](const Table& args) {
            Tuple outer(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) outer[i] = rep[static_cast<std::size_t>(args[i])];
            t.push_back(classes[static_cast<std::size_t>(a.apply(op, outer))]);
        });
        ops.push_back(std::move(t));
    }
    return ops;
}

// Adds the images of every related lifted tuple until each operation
// preserves relations from its lifting. Returns true when something changed.
bool close_under_operations(Structure& s, const LiftedSignature& sig, const std::vector<Table>& ops) {
    bool changed_any = false, changed = true;
    while (changed) {
        changed = false;
        for (std::size_t op = 0; op < sig.size(); ++op) {
            auto lifted = apply_lifting(sig.lifting_of(op), s, sig[op].arity);
            for (auto& f : preservation_failures(lifted, s, ops[op], static_cast<std::size_t>(-1))) {
                Tuple image;
                for (Element u : f.tuple) image.push_back(ops[op][static_cast<std::size_t>(u)]);
                if (!s.holds(f.symbol, image)) {
                    s.insert(f.symbol, image);
                    changed = true;
                }
            }
        }
        changed_any = changed_any || changed;
    }
    return changed_any;
}

// Enumerates every relation family on `start`'s carrier that contains the
// relations of `start`, is a fixpoint of `close`, and passes `admissible`.
// `admissible` must be upward closed in the failing direction: once a
// family fails, all larger families fail.
template <class Close, class Admissible, class Emit>
void enumerate_closed_families(Structure start, Close&& close, Admissible&& admissible, Emit&& emit) {
    close(start);
    if (!admissible(start)) return;
    std::vector<std::pair<std::size_t, std::uint64_t>> universe;
    for (std::size_t sym = 0; sym < start.signature().size(); ++sym)
        for (std::uint64_t code = 0; code < start.tuple_space(sym); ++code) universe.emplace_back(sym, code);
    std::vector<std::size_t> excluded;
    auto search = [&](auto&& self, std::size_t i, const Structure& cur) -> void {
        while (i < universe.size() && cur.holds_code(universe[i].first, universe[i].second)) ++i;
        if (i == universe.size()) {
            emit(cur);
            return;
        }
        Structure next = cur;
        next.insert(universe[i].first, next.decode(universe[i].first, universe[i].second));
        close(next);
        bool conflict = std::any_of(excluded.begin(), excluded.end(), [&](std::size_t j) {
            return next.holds_code(universe[j].first, universe[j].second);
        });
        if (!conflict && admissible(next)) self(self, i + 1, next);
        excluded.push_back(i);
        self(self, i + 1, cur);
        excluded.pop_back();
    };
    search(search, 0, start);
}

void check_bounds(const Algebra& a, EnumerationBounds bounds) {
    if (a.size() > bounds.max_carrier)
        throw BoundExceeded("carrier of " + std::to_string(a.size()) + " elements exceeds the enumeration bound of " +
                            std::to_string(bounds.max_carrier));
    if (a.carrier().signature().size() > bounds.max_symbols)
        throw BoundExceeded("signature of " + std::to_string(a.carrier().signature().size()) +
                            " symbols exceeds the enumeration bound of " + std::to_string(bounds.max_symbols));
}

std::size_t kernel_size(std::span<const Element> classes) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < classes.size(); ++x)
        for (std::size_t y = 0; y < classes.size(); ++y) n += classes[x] == classes[y];
    return n;
}

std::vector<std::vector<std::uint64_t>> pullback(const Structure& a, const Structure& b, std::span<const Element> e) {
    std::vector<std::vector<std::uint64_t>> out(a.signature().size());
    for (std::size_t sym = 0; sym < a.signature().size(); ++sym)
        for (std::uint64_t code = 0; code < a.tuple_space(sym); ++code) {
            auto t = a.decode(sym, code);
            for (auto& x : t) x = e[static_cast<std::size_t>(x)];
            if (b.holds(sym, t)) out[sym].push_back(code);
        }
    return out;
}

std::size_t total(const std::vector<std::vector<std::uint64_t>>& rel) {
    std::size_t n = 0;
    for (const auto& r : rel) n += r.size();
    return n;
}

// Codes of all tuples of `a` whose class tuple is that of some tuple in
// `codes`.
std::vector<std::uint64_t> saturate(const Structure& a, std::size_t sym, const std::vector<std::uint64_t>& codes,
                                    std::span<const Element> classes) {
    std::set<Tuple> class_tuples;
    for (auto code : codes) {
        auto t = a.decode(sym, code);
        for (auto& x : t) x = classes[static_cast<std::size_t>(x)];
        class_tuples.insert(std::move(t));
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t code = 0; code < a.tuple_space(sym); ++code) {
        auto t = a.decode(sym, code);
        for (auto& x : t) x = classes[static_cast<std::size_t>(x)];
        if (class_tuples.count(t)) out.push_back(code);
    }
    return out;
}

// Type-2 clauses read in `s`, with equality replaced by the partition.
bool type2_modulo(const Structure& s, const AxiomSet& ax, std::span<const Element> classes) {
    for (const auto* c : ax.type2_clauses()) {
        const auto& eq = std::get<VarEquality>(c->conclusion);
        bool ok = true;
        for_each_premise_model(s, c->variables.size(), c->premises, [&](const std::vector<Element>& h) {
            ok = classes[static_cast<std::size_t>(h[static_cast<std::size_t>(eq.lhs)])] ==
                 classes[static_cast<std::size_t>(h[static_cast<std::size_t>(eq.rhs)])];
            return ok;
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

Table canonical_classes(std::span<const Element> table) {
    std::map<Element, Element> renumber;
    Table out;
    for (Element v : table) {
        auto it = renumber.find(v);
        if (it == renumber.end()) it = renumber.emplace(v, static_cast<Element>(renumber.size())).first;
        out.push_back(it->second);
    }
    return out;
}

Quotient make_quotient(std::span<const Element> e, const Algebra& codomain) {
    if (!is_surjective(e, codomain.size())) throw Error("quotient map must be surjective");
    auto canon = canonical_classes(e);
    // old codomain index -> new
    Table perm(codomain.size());
    for (std::size_t x = 0; x < e.size(); ++x) perm[static_cast<std::size_t>(e[x])] = canon[x];
    Table inverse(codomain.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[static_cast<std::size_t>(perm[i])] = static_cast<Element>(i);
    const auto& c = codomain.carrier();
    Structure s(c.signature_ptr(), c.size());
    for (std::size_t sym = 0; sym < c.signature().size(); ++sym) {
        std::vector<std::uint64_t> codes;
        for (auto t : c.tuples(sym)) {
            for (auto& x : t) x = perm[static_cast<std::size_t>(x)];
            codes.push_back(s.encode(sym, t));
        }
        s.assign_codes(sym, std::move(codes));
    }
    std::vector<Table> ops;
    for (std::size_t op = 0; op < codomain.signature().size(); ++op) {
        Table t;
        for_each_map(static_cast<std::size_t>(codomain.signature()[op].arity), c.size(), [&](const Table& args) {
            Tuple old(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) old[i] = inverse[static_cast<std::size_t>(args[i])];
            t.push_back(perm[static_cast<std::size_t>(codomain.apply(op, old))]);
        });
        ops.push_back(std::move(t));
    }
    return {std::move(canon), Algebra(std::move(s), codomain.signature(), std::move(ops))};
}

ReflexivityCheck is_c_reflexive(const Structure& src, const Structure& cod, std::span<const Element> e,
                                std::optional<std::size_t> c) {
    std::optional<std::size_t> max_size;
    if (c) {
        if (*c == 0) return {};
        max_size = *c - 1;
    }
    std::vector<std::vector<Element>> fibers(cod.size());
    for (std::size_t x = 0; x < e.size(); ++x) fibers[static_cast<std::size_t>(e[x])].push_back(static_cast<Element>(x));
    for (const auto& sub : enumerate_substructures(cod, max_size)) {
        const auto& b0 = sub.subset;
        bool found = false;
        std::vector<std::size_t> pick(b0.size(), 0);
        bool any_empty = std::any_of(b0.begin(), b0.end(), [&](Element b) { return fibers[static_cast<std::size_t>(b)].empty(); });
        while (!any_empty && !found) {
            Tuple a0(b0.size());
            for (std::size_t i = 0; i < b0.size(); ++i) a0[i] = fibers[static_cast<std::size_t>(b0[i])][pick[i]];
            bool iso = true;
            for (std::size_t sym = 0; sym < cod.signature().size() && iso; ++sym) {
                for_each_map(static_cast<std::size_t>(cod.arity(sym)), b0.size(), [&](const Table& idx) {
                    if (!iso) return;
                    Tuple ta(idx.size()), tb(idx.size());
                    for (std::size_t k = 0; k < idx.size(); ++k) {
                        ta[k] = a0[static_cast<std::size_t>(idx[k])];
                        tb[k] = b0[static_cast<std::size_t>(idx[k])];
                    }
                    iso = src.holds(sym, ta) == cod.holds(sym, tb);
                });
            }
            if (iso) found = true;
            std::size_t i = b0.size();
            bool done = true;
            while (i-- > 0) {
                if (++pick[i] < fibers[static_cast<std::size_t>(b0[i])].size()) {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if (done) break;
        }
        if (!found) return {false, b0};
    }
    return {};
}

namespace {

// Does every preserving f: X -> cod lift along e to a preserving g: X -> src?
// Returns a map without lift, if any.
std::optional<Table> projectivity_failure(const Structure& x, const Structure& src, const Structure& cod,
                                          std::span<const Element> e) {
    std::vector<std::vector<Element>> fibers(cod.size());
    for (std::size_t a = 0; a < e.size(); ++a) fibers[static_cast<std::size_t>(e[a])].push_back(static_cast<Element>(a));
    std::optional<Table> failing;
    for_each_map(x.size(), cod.size(), [&](const Table& f) {
        if (failing || !preserves_relations(x, cod, f)) return;
        bool lifted = false;
        std::vector<std::size_t> pick(x.size(), 0);
        for (Element b : f)
            if (fibers[static_cast<std::size_t>(b)].empty()) {
                failing = f;
                return;
            }
        while (!lifted) {
            Table g(x.size());
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = fibers[static_cast<std::size_t>(f[i])][pick[i]];
            lifted = preserves_relations(x, src, g);
            std::size_t i = x.size();
            bool done = true;
            while (i-- > 0) {
                if (++pick[i] < fibers[static_cast<std::size_t>(f[i])].size()) {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if (done) break;
        }
        if (!lifted) failing = f;
    });
    return failing;
}

}  // namespace

ProjectivityReport check_EX_characterization(const Structure& src, const Structure& cod, std::span<const Element> e,
                                             std::optional<std::size_t> c, std::size_t size_bound,
                                             const AxiomSet* ax) {
    ProjectivityReport r;
    r.reflexive = is_c_reflexive(src, cod, e, c).reflexive;
    auto test = [&](const Structure& x) {
        if (!r.projective) return;
        ++r.objects_checked;
        if (auto f = projectivity_failure(x, src, cod, e)) {
            r.projective = false;
            r.failing_object = x;
            r.failing_map = *f;
        }
    };
    const auto& sig = cod.signature_ptr();
    for (std::size_t m = 1; m <= size_bound && (!c || m < *c); ++m) {
        std::vector<std::pair<std::size_t, std::uint64_t>> bits;
        Structure probe(sig, m);
        for (std::size_t sym = 0; sym < sig->size(); ++sym)
            for (std::uint64_t code = 0; code < probe.tuple_space(sym); ++code) bits.emplace_back(sym, code);
        if (bits.size() > 20) throw BoundExceeded("too many relation families on " + std::to_string(m) + " elements");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits.size()) && r.projective; ++mask) {
            std::vector<std::vector<std::uint64_t>> codes(sig->size());
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (mask >> i & 1) codes[bits[i].first].push_back(bits[i].second);
            Structure x(sig, m);
            for (std::size_t sym = 0; sym < sig->size(); ++sym) x.assign_codes(sym, std::move(codes[sym]));
            if (ax && !is_member(x, *ax)) continue;
            test(x);
        }
    }
    std::optional<std::size_t> max_size;
    if (c) max_size = *c == 0 ? 0 : *c - 1;
    for (const auto& sub : enumerate_substructures(cod, max_size))
        if (!sub.subset.empty()) test(sub.structure);
    r.agree = r.reflexive == r.projective;
    return r;
}

bool is_congruence(const Algebra& a, std::span<const Element> classes) {
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        std::map<Tuple, Element> seen;
        bool ok = true;
        for_each_map(static_cast<std::size_t>(a.signature()[op].arity), a.size(), [&](const Table& args) {
            if (!ok) return;
            Tuple key(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) key[i] = classes[static_cast<std::size_t>(args[i])];
            Element v = classes[static_cast<std::size_t>(a.apply(op, args))];
            auto [it, inserted] = seen.emplace(std::move(key), v);
            if (!inserted && it->second != v) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

std::vector<Quotient> enumerate_quotients(const Algebra& a, const AxiomSet& ax, EnumerationBounds bounds) {
    check_bounds(a, bounds);
    auto type1 = ax.type1_fragment();
    std::vector<std::pair<std::tuple<std::size_t, std::size_t, Table, std::vector<std::vector<std::uint64_t>>>, Quotient>>
        found;
    for_each_partition(a.size(), [&](const Table& classes) {
        if (!is_congruence(a, classes)) return;
        const std::size_t k = class_count(classes);
        auto ops = quotient_tables(a, classes, k);
        Structure start(a.carrier().signature_ptr(), k);
        for (std::size_t sym = 0; sym < start.signature().size(); ++sym)
            for (auto t : a.carrier().tuples(sym)) {
                for (auto& x : t) x = classes[static_cast<std::size_t>(x)];
                start.insert(sym, t);
            }
        auto close = [&](Structure& s) {
            bool changed = true;
            while (changed) {
                changed = close_under_type1(s, type1);
                changed = close_under_operations(s, a.signature(), ops) || changed;
            }
        };
        auto admissible = [&](const Structure& s) {
            for (const auto* c : ax.type2_clauses())
                if (!satisfies_clause(s, *c).satisfied) return false;
            return true;
        };
        enumerate_closed_families(start, close, admissible, [&](const Structure& s) {
            Quotient q{classes, Algebra(s, a.signature(), ops)};
            auto pulled = pullback(a.carrier(), s, classes);
            std::vector<std::vector<std::uint64_t>> rel;
            for (std::size_t sym = 0; sym < s.signature().size(); ++sym) rel.push_back(s.codes(sym));
            found.emplace_back(std::make_tuple(kernel_size(classes), total(pulled), classes, std::move(rel)), std::move(q));
        });
    });
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Quotient> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

bool quotient_leq(const Algebra& src, const Quotient& q1, const Quotient& q2) {
    return factor_through(src, q1.codomain, q2.codomain, q1.e, q2.e).g.has_value();
}

PairCheck validate_pair(const Algebra& a, const CompatiblePair& p, const AxiomSet& ax) {
    const auto& base = a.carrier();
    const auto& sig = base.signature();
    if (p.refined.size() != sig.size() || p.classes.size() != a.size())
        return {false, "shape", "pair does not match the algebra"};
    Structure refined(base.signature_ptr(), base.size());
    for (std::size_t sym = 0; sym < sig.size(); ++sym) {
        for (auto code : p.refined[sym])
            if (code >= base.tuple_space(sym)) return {false, "shape", "tuple code out of range"};
        refined.assign_codes(sym, p.refined[sym]);
    }
    auto m = in_C(refined, ax.type1_fragment());
    if (!m.member) return {false, "refining (a)", "clause " + m.failures[0].label + " fails for the refined relations"};
    for (std::size_t sym = 0; sym < sig.size(); ++sym)
        for (auto code : base.codes(sym))
            if (!refined.holds_code(sym, code))
                return {false, "refining (b)", "refined '" + sig[sym].name + "' misses a tuple of the algebra"};
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        auto lifted = apply_lifting(a.signature().lifting_of(op), refined, a.signature()[op].arity);
        if (!preserves_relations(lifted, refined, a.table(op)))
            return {false, "refining (c)", "'" + a.signature()[op].name + "' does not preserve the refined relations"};
    }
    if (canonical_classes(p.classes) != p.classes) return {false, "shape", "class table is not canonical"};
    if (!is_congruence(a, p.classes)) return {false, "congruence", "partition is not respected by the operations"};
    for (std::size_t sym = 0; sym < sig.size(); ++sym)
        if (saturate(base, sym, p.refined[sym], p.classes) != p.refined[sym])
            return {false, "compat (a)", "refined '" + sig[sym].name + "' is not closed under the congruence"};
    if (!type2_modulo(refined, ax, p.classes))
        return {false, "compat (b)", "an equality clause identifies elements in different classes"};
    return {};
}

CompatiblePair pair_from_quotient(const Algebra& a, const Quotient& q, const AxiomSet& ax) {
    if (!is_member(q.codomain.carrier(), ax)) throw Error("pair_from_quotient: codomain is not in C");
    return {pullback(a.carrier(), q.codomain.carrier(), q.e), canonical_classes(q.e)};
}

Quotient quotient_from_pair(const Algebra& a, const CompatiblePair& p, const AxiomSet& ax) {
    auto check = validate_pair(a, p, ax);
    if (!check.ok) throw Error("quotient_from_pair: " + check.violated + ": " + check.detail);
    const std::size_t k = class_count(p.classes);
    Structure s(a.carrier().signature_ptr(), k);
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
        std::vector<std::uint64_t> codes;
        for (auto code : p.refined[sym]) {
            auto t = a.carrier().decode(sym, code);
            for (auto& x : t) x = p.classes[static_cast<std::size_t>(x)];
            codes.push_back(s.encode(sym, t));
        }
        s.assign_codes(sym, std::move(codes));
    }
    return {p.classes, Algebra(std::move(s), a.signature(), quotient_tables(a, p.classes, k))};
}

bool pair_leq(const CompatiblePair& p1, const CompatiblePair& p2) {
    if (p1.refined.size() != p2.refined.size() || p1.classes.size() != p2.classes.size()) return false;
    for (std::size_t sym = 0; sym < p1.refined.size(); ++sym)
        if (!std::includes(p2.refined[sym].begin(), p2.refined[sym].end(), p1.refined[sym].begin(), p1.refined[sym].end()))
            return false;
    for (std::size_t x = 0; x < p1.classes.size(); ++x)
        for (std::size_t y = 0; y < p1.classes.size(); ++y)
            if (p1.classes[x] == p1.classes[y] && p2.classes[x] != p2.classes[y]) return false;
    return true;
}

std::vector<CompatiblePair> enumerate_compatible_pairs(const Algebra& a, const AxiomSet& ax, EnumerationBounds bounds) {
    check_bounds(a, bounds);
    auto type1 = ax.type1_fragment();
    std::vector<std::pair<std::tuple<std::size_t, std::size_t, Table, std::vector<std::vector<std::uint64_t>>>, CompatiblePair>>
        found;
    for_each_partition(a.size(), [&](const Table& classes) {
        if (!is_congruence(a, classes)) return;
        auto close = [&](Structure& s) {
            bool changed = true;
            while (changed) {
                changed = close_under_type1(s, type1);
                changed = close_under_operations(s, a.signature(), a.tables()) || changed;
                for (std::size_t sym = 0; sym < s.signature().size(); ++sym) {
                    auto sat = saturate(s, sym, s.codes(sym), classes);
                    if (sat.size() != s.tuple_count(sym)) {
                        s.assign_codes(sym, std::move(sat));
                        changed = true;
                    }
                }
            }
        };
        auto admissible = [&](const Structure& s) { return type2_modulo(s, ax, classes); };
        enumerate_closed_families(a.carrier(), close, admissible, [&](const Structure& s) {
            CompatiblePair p;
            for (std::size_t sym = 0; sym < s.signature().size(); ++sym) p.refined.push_back(s.codes(sym));
            p.classes = classes;
            found.emplace_back(std::make_tuple(kernel_size(classes), total(p.refined), classes, p.refined), std::move(p));
        });
    });
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<CompatiblePair> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

ExactnessReport check_exactness(const Algebra& a, const AxiomSet& ax, EnumerationBounds bounds) {
    ExactnessReport r;
    auto qs = enumerate_quotients(a, ax, bounds);
    auto ps = enumerate_compatible_pairs(a, ax, bounds);
    r.quotients = qs.size();
    r.pairs = ps.size();
    std::vector<CompatiblePair> images;
    for (const auto& q : qs) {
        auto p = pair_from_quotient(a, q, ax);
        if (!(quotient_from_pair(a, p, ax) == q)) r.quotient_round_trip = false;
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) r.images_match = false;
        images.push_back(std::move(p));
    }
    for (const auto& p : ps)
        if (!(pair_from_quotient(a, quotient_from_pair(a, p, ax), ax) == p)) r.pair_round_trip = false;
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j)
            if (quotient_leq(a, qs[i], qs[j]) != pair_leq(images[i], images[j])) r.order_preserved = false;
    return r;
}

}  // namespace relalg
