#include "oracle.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace oracle {

std::uint64_t horner(const std::vector<Element>& d, std::size_t base) {
    std::uint64_t v = 0;
    for (Element x : d) v = v * base + static_cast<std::uint64_t>(x);
    return v;
}

std::vector<Element> digits(std::uint64_t index, std::size_t base, std::size_t n) {
    std::vector<Element> d(n);
    for (std::size_t i = n; i-- > 0;) {
        d[i] = static_cast<Element>(index % base);
        index /= base;
    }
    return d;
}

namespace {

bool atom_holds(const Structure& a, std::size_t rel, const std::vector<int>& vars, const std::vector<Element>& h) {
    std::vector<Element> t;
    for (int v : vars) t.push_back(h[static_cast<std::size_t>(v)]);
    return a.holds(rel, t);
}

std::vector<Table> all_partitions(std::size_t n) {
    std::vector<Table> out;
    odometer(n, n, [&](const std::vector<Element>& t) {
        Element top = -1;
        for (Element x : t) {
            if (x > top + 1) return;
            top = std::max(top, x);
        }
        out.push_back(t);
    });
    return out;
}

bool congruence(const Algebra& a, const Table& classes) {
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        const auto n = static_cast<std::size_t>(a.signature()[op].arity);
        bool ok = true;
        odometer(n, a.size(), [&](const std::vector<Element>& x) {
            odometer(n, a.size(), [&](const std::vector<Element>& y) {
                for (std::size_t i = 0; i < n; ++i)
                    if (classes[static_cast<std::size_t>(x[i])] != classes[static_cast<std::size_t>(y[i])]) return;
                if (classes[static_cast<std::size_t>(a.table(op)[horner(x, a.size())])] !=
                    classes[static_cast<std::size_t>(a.table(op)[horner(y, a.size())])])
                    ok = false;
            });
        });
        if (!ok) return false;
    }
    return true;
}

std::size_t count_classes(const Table& classes) {
    return classes.empty() ? 0 : static_cast<std::size_t>(*std::max_element(classes.begin(), classes.end()) + 1);
}

std::vector<Table> class_ops(const Algebra& a, const Table& classes, std::size_t k) {
    std::vector<Table> ops;
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        const auto n = static_cast<std::size_t>(a.signature()[op].arity);
        std::size_t len = 1;
        for (std::size_t i = 0; i < n; ++i) len *= k;
        Table t(len);
        odometer(n, a.size(), [&](const std::vector<Element>& x) {
            std::vector<Element> cx;
            for (Element e : x) cx.push_back(classes[static_cast<std::size_t>(e)]);
            t[horner(cx, k)] = classes[static_cast<std::size_t>(a.table(op)[horner(x, a.size())])];
        });
        ops.push_back(std::move(t));
    }
    return ops;
}

}  // namespace

ClauseResult satisfies_clause(const Structure& a, const HornClause& clause) {
    ClauseResult r;
    odometer(clause.variables.size(), a.size(), [&](const std::vector<Element>& h) {
        if (!r.satisfied) return;
        for (const auto& p : clause.premises)
            if (!atom_holds(a, p.rel, p.vars, h)) return;
        bool ok;
        if (const auto* at = std::get_if<Atom>(&clause.conclusion)) ok = atom_holds(a, at->rel, at->vars, h);
        else {
            const auto& eq = std::get<VarEquality>(clause.conclusion);
            ok = h[static_cast<std::size_t>(eq.lhs)] == h[static_cast<std::size_t>(eq.rhs)];
        }
        if (!ok) {
            r.satisfied = false;
            r.witness = h;
        }
    });
    return r;
}

bool in_c(const Structure& a, const AxiomSet& ax) {
    for (const auto& c : ax.clauses)
        if (!oracle::satisfies_clause(a, c).satisfied) return false;
    return true;
}

Structure lifting(const LiftingSpec& spec, const Structure& a, int n) {
    const std::size_t s = a.size();
    const auto un = static_cast<std::size_t>(n);
    std::uint64_t carrier = 1;
    for (int i = 0; i < n; ++i) carrier *= s;
    const auto& sig = a.signature();
    Structure out(a.signature_ptr(), static_cast<std::size_t>(carrier));
    auto coordinatewise = [&](std::size_t sym, const std::vector<std::vector<Element>>& us, std::size_t i) {
        std::vector<Element> t;
        for (const auto& u : us) t.push_back(u[i]);
        return a.holds(sym, t);
    };
    for (std::size_t sym = 0; sym < sig.size(); ++sym) {
        const auto m = static_cast<std::size_t>(sig[sym].arity);
        odometer(m, static_cast<std::size_t>(carrier), [&](const std::vector<Element>& lifted) {
            std::vector<std::vector<Element>> us;
            for (Element u : lifted) us.push_back(digits(static_cast<std::uint64_t>(u), s, un));
            bool related = false;
            if (std::holds_alternative<lifting::Discrete>(spec)) {
                related = false;
            } else if (std::holds_alternative<lifting::Product>(spec)) {
                related = true;
                for (std::size_t i = 0; i < un; ++i) related = related && coordinatewise(sym, us, i);
            } else if (const auto* sub = std::get_if<lifting::Subset>(&spec)) {
                related = true;
                for (int i : sub->coordinates) related = related && coordinatewise(sym, us, static_cast<std::size_t>(i));
            } else if (const auto* lex = std::get_if<lifting::Lexicographic>(&spec)) {
                if (sig[sym].name == lex->order_symbol) {
                    if (us[0] == us[1]) related = true;
                    else {
                        std::size_t k = 0;
                        while (us[0][k] == us[1][k]) ++k;
                        related = a.holds(sym, std::vector<Element>{us[0][k], us[1][k]});
                    }
                } else {
                    related = true;
                    for (std::size_t i = 0; i < un; ++i) related = related && coordinatewise(sym, us, i);
                }
            } else if (const auto* lip = std::get_if<lifting::Lipschitz>(&spec)) {
                const auto& q = *sig.quantities();
                const Rational eps = q.value(sym);
                related = true;
                for (std::size_t i = 0; i < un && related; ++i) {
                    bool some = false;
                    for (std::size_t d = 0; d < q.size(); ++d)
                        if (lip->alpha * q.value(d) <= eps && a.holds(d, std::vector<Element>{us[0][i], us[1][i]})) some = true;
                    related = some;
                }
            } else if (const auto* lk = std::get_if<lifting::LK>(&spec)) {
                const auto& q = *sig.quantities();
                const Rational eps = q.value(sym);
                const Rational p = lk->p, r = Rational(1) - lk->p;
                odometer(4, q.size(), [&](const std::vector<Element>& d) {
                    if (related) return;
                    auto hold = [&](std::size_t i, std::size_t j, Element e) {
                        return a.holds(static_cast<std::size_t>(e), std::vector<Element>{us[0][i], us[1][j]});
                    };
                    if (!hold(0, 0, d[0]) || !hold(0, 1, d[1]) || !hold(1, 0, d[2]) || !hold(1, 1, d[3])) return;
                    Rational mix = p * p * q.value(static_cast<std::size_t>(d[0])) + p * r * q.value(static_cast<std::size_t>(d[1])) +
                                   r * p * q.value(static_cast<std::size_t>(d[2])) + r * r * q.value(static_cast<std::size_t>(d[3]));
                    if (mix <= eps) related = true;
                });
            }
            if (related) out.insert(sym, lifted);
        });
    }
    return out;
}

bool preserves(const Structure& dom, const Structure& cod, const std::vector<Element>& table) {
    for (std::size_t sym = 0; sym < dom.signature().size(); ++sym) {
        bool ok = true;
        odometer(static_cast<std::size_t>(dom.arity(sym)), dom.size(), [&](const std::vector<Element>& t) {
            if (!ok || !dom.holds(sym, t)) return;
            std::vector<Element> img;
            for (Element x : t) img.push_back(table[static_cast<std::size_t>(x)]);
            ok = cod.holds(sym, img);
        });
        if (!ok) return false;
    }
    return true;
}

bool valid_algebra(const Algebra& a) {
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
        auto lifted = lifting(a.signature().lifting_of(op), a.carrier(), a.signature()[op].arity);
        if (!preserves(lifted, a.carrier(), a.table(op))) return false;
    }
    return true;
}

Element evaluate(const Term& t, const std::vector<Element>& h, const Algebra& a) {
    if (t.var >= 0) return h[static_cast<std::size_t>(t.var)];
    std::vector<Element> args;
    for (const auto& s : t.args) args.push_back(evaluate(s, h, a));
    return a.table(t.op)[horner(args, a.size())];
}

ClauseResult satisfies_equation(const Algebra& a, const ClusteredEquation& eq) {
    ClauseResult r;
    odometer(eq.variables.size(), a.size(), [&](const std::vector<Element>& h) {
        if (!r.satisfied) return;
        for (const auto& p : eq.premises)
            if (!atom_holds(a.carrier(), p.rel, p.vars, h)) return;
        bool ok;
        if (const auto* rel = std::get_if<RelationOnTerms>(&eq.conclusion)) {
            std::vector<Element> t;
            for (const auto& term : rel->terms) t.push_back(evaluate(term, h, a));
            ok = a.carrier().holds(rel->rel, t);
        } else {
            const auto& e = std::get<TermEquality>(eq.conclusion);
            ok = evaluate(e.lhs, h, a) == evaluate(e.rhs, h, a);
        }
        if (!ok) {
            r.satisfied = false;
            r.witness = h;
        }
    });
    return r;
}

std::optional<Table> factor_through(const Structure& a, const Structure& b, const Structure& c, const Table& e,
                                    const Table& h) {
    std::optional<Table> found;
    odometer(b.size(), c.size(), [&](const std::vector<Element>& g) {
        if (found) return;
        for (std::size_t x = 0; x < a.size(); ++x)
            if (g[static_cast<std::size_t>(e[x])] != h[x]) return;
        if (preserves(b, c, g)) found = g;
    });
    return found;
}

std::vector<QuotientKey> quotients(const Algebra& a, const AxiomSet& ax, std::size_t max_free_bits) {
    std::vector<QuotientKey> out;
    for (const auto& classes : all_partitions(a.size())) {
        if (!congruence(a, classes)) continue;
        const std::size_t k = count_classes(classes);
        Structure forced(a.carrier().signature_ptr(), k);
        for (std::size_t sym = 0; sym < forced.signature().size(); ++sym)
            odometer(static_cast<std::size_t>(a.carrier().arity(sym)), a.size(), [&](const std::vector<Element>& t) {
                if (!a.carrier().holds(sym, t)) return;
                std::vector<Element> img;
                for (Element x : t) img.push_back(classes[static_cast<std::size_t>(x)]);
                forced.insert(sym, img);
            });
        std::vector<std::pair<std::size_t, std::vector<Element>>> free;
        for (std::size_t sym = 0; sym < forced.signature().size(); ++sym)
            odometer(static_cast<std::size_t>(forced.arity(sym)), k, [&](const std::vector<Element>& t) {
                if (!forced.holds(sym, t)) free.emplace_back(sym, t);
            });
        if (free.size() > max_free_bits) throw BoundExceeded("oracle: too many free relation tuples");
        auto ops = class_ops(a, classes, k);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
            Structure b = forced;
            for (std::size_t i = 0; i < free.size(); ++i)
                if (mask >> i & 1) b.insert(free[i].first, free[i].second);
            if (!in_c(b, ax)) continue;
            Algebra q(b, a.signature(), ops);
            if (!valid_algebra(q)) continue;
            QuotientKey key{classes, {}};
            for (std::size_t sym = 0; sym < b.signature().size(); ++sym) {
                std::vector<std::uint64_t> codes;
                odometer(static_cast<std::size_t>(b.arity(sym)), k, [&](const std::vector<Element>& t) {
                    if (b.holds(sym, t)) codes.push_back(horner(t, k));
                });
                key.relations.push_back(std::move(codes));
            }
            out.push_back(std::move(key));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PairKey> pairs(const Algebra& a, const AxiomSet& ax, std::size_t max_free_bits) {
    std::vector<PairKey> out;
    const auto& base = a.carrier();
    AxiomSet type1{ax.name, ax.signature, {}};
    std::vector<HornClause> type2;
    for (const auto& c : ax.clauses) (std::holds_alternative<Atom>(c.conclusion) ? type1.clauses : type2).push_back(c);
    for (const auto& classes : all_partitions(a.size())) {
        if (!congruence(a, classes)) continue;
        const std::size_t k = count_classes(classes);
        // Saturated families are unions of class-tuple blocks.
        std::set<std::pair<std::size_t, std::vector<Element>>> forced;
        for (std::size_t sym = 0; sym < base.signature().size(); ++sym)
            odometer(static_cast<std::size_t>(base.arity(sym)), a.size(), [&](const std::vector<Element>& t) {
                if (!base.holds(sym, t)) return;
                std::vector<Element> c;
                for (Element x : t) c.push_back(classes[static_cast<std::size_t>(x)]);
                forced.emplace(sym, c);
            });
        std::vector<std::pair<std::size_t, std::vector<Element>>> free;
        for (std::size_t sym = 0; sym < base.signature().size(); ++sym)
            odometer(static_cast<std::size_t>(base.arity(sym)), k, [&](const std::vector<Element>& t) {
                if (!forced.count({sym, t})) free.emplace_back(sym, t);
            });
        if (free.size() > max_free_bits) throw BoundExceeded("oracle: too many free relation blocks");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
            auto blocks = forced;
            for (std::size_t i = 0; i < free.size(); ++i)
                if (mask >> i & 1) blocks.insert(free[i]);
            Structure refined(base.signature_ptr(), base.size());
            for (std::size_t sym = 0; sym < base.signature().size(); ++sym)
                odometer(static_cast<std::size_t>(base.arity(sym)), a.size(), [&](const std::vector<Element>& t) {
                    std::vector<Element> c;
                    for (Element x : t) c.push_back(classes[static_cast<std::size_t>(x)]);
                    if (blocks.count({sym, c})) refined.insert(sym, t);
                });
            if (!in_c(refined, type1)) continue;
            bool ops_ok = true;
            for (std::size_t op = 0; op < a.signature().size() && ops_ok; ++op)
                ops_ok = preserves(lifting(a.signature().lifting_of(op), refined, a.signature()[op].arity), refined, a.table(op));
            if (!ops_ok) continue;
            bool compat_b = true;
            for (const auto& c : type2) {
                const auto& eq = std::get<VarEquality>(c.conclusion);
                odometer(c.variables.size(), a.size(), [&](const std::vector<Element>& h) {
                    if (!compat_b) return;
                    for (const auto& p : c.premises)
                        if (!atom_holds(refined, p.rel, p.vars, h)) return;
                    if (classes[static_cast<std::size_t>(h[static_cast<std::size_t>(eq.lhs)])] !=
                        classes[static_cast<std::size_t>(h[static_cast<std::size_t>(eq.rhs)])])
                        compat_b = false;
                });
            }
            if (!compat_b) continue;
            PairKey key{classes, {}};
            for (std::size_t sym = 0; sym < base.signature().size(); ++sym) {
                std::vector<std::uint64_t> codes;
                odometer(static_cast<std::size_t>(base.arity(sym)), a.size(), [&](const std::vector<Element>& t) {
                    if (refined.holds(sym, t)) codes.push_back(horner(t, a.size()));
                });
                key.refined.push_back(std::move(codes));
            }
            out.push_back(std::move(key));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool reflexive(const Structure& src, const Structure& cod, const Table& e, std::optional<std::size_t> c) {
    for (std::uint64_t bmask = 0; bmask < (std::uint64_t{1} << cod.size()); ++bmask) {
        std::vector<Element> b0;
        for (std::size_t i = 0; i < cod.size(); ++i)
            if (bmask >> i & 1) b0.push_back(static_cast<Element>(i));
        if (c && b0.size() >= *c) continue;
        bool lifted = false;
        for (std::uint64_t amask = 0; amask < (std::uint64_t{1} << src.size()) && !lifted; ++amask) {
            std::vector<Element> a0;
            for (std::size_t i = 0; i < src.size(); ++i)
                if (amask >> i & 1) a0.push_back(static_cast<Element>(i));
            if (a0.size() != b0.size()) continue;
            std::set<Element> image;
            for (Element x : a0) image.insert(e[static_cast<std::size_t>(x)]);
            if (image != std::set<Element>(b0.begin(), b0.end())) continue;
            bool iso = true;
            for (std::size_t sym = 0; sym < src.signature().size() && iso; ++sym)
                odometer(static_cast<std::size_t>(src.arity(sym)), a0.size(), [&](const std::vector<Element>& idx) {
                    std::vector<Element> ta, tb;
                    for (Element i : idx) {
                        ta.push_back(a0[static_cast<std::size_t>(i)]);
                        tb.push_back(e[static_cast<std::size_t>(a0[static_cast<std::size_t>(i)])]);
                    }
                    if (src.holds(sym, ta) != cod.holds(sym, tb)) iso = false;
                });
            lifted = iso;
        }
        if (!lifted) return false;
    }
    return true;
}

std::uint64_t count_terms(std::size_t vars, const AlgebraicSignature& sig, int d) {
    std::set<std::string> terms;
    for (std::size_t v = 0; v < vars; ++v) terms.insert("v" + std::to_string(v));
    for (int k = 0; k < d; ++k) {
        std::vector<std::string> prev(terms.begin(), terms.end());
        std::set<std::string> next;
        for (std::size_t v = 0; v < vars; ++v) next.insert("v" + std::to_string(v));
        for (const auto& op : sig.symbols())
            odometer(static_cast<std::size_t>(op.arity), prev.size(), [&](const std::vector<Element>& args) {
                std::string s = op.name + "(";
                for (Element i : args) s += prev[static_cast<std::size_t>(i)] + ",";
                next.insert(s + ")");
            });
        terms = std::move(next);
    }
    return terms.size();
}

}  // namespace oracle
