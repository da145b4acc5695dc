// relalg: command-line front end for .ral documents.
//
// Every check prints one JSON object per line with the keys kind, subject,
// result and witness (in that order). Exit status: 0 when every check
// passes, 1 when some check fails, 2 on usage, parse or resolution errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relalg/dsl.hpp"
#include "relalg/free_terms.hpp"

using namespace relalg;
using json = nlohmann::ordered_json;

namespace {

struct UsageError {
    std::string message;
};

class Reporter {
public:
    explicit Reporter(bool pretty) : pretty_(pretty) {}

    void emit(const std::string& kind, const std::string& subject, bool result, json witness = nullptr) {
        failed_ = failed_ || !result;
        if (pretty_) {
            std::cout << (result ? "[pass] " : "[FAIL] ") << kind << " " << subject << "\n";
            if (!witness.is_null()) std::cout << witness.dump(2) << "\n";
            return;
        }
        json line;
        line["kind"] = kind;
        line["subject"] = subject;
        line["result"] = result;
        line["witness"] = std::move(witness);
        std::cout << line.dump() << "\n";
    }

    bool failed() const { return failed_; }

private:
    bool pretty_;
    bool failed_ = false;
};

dsl::Model load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError{"cannot read " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    auto parsed = dsl::parse(buf.str());
    std::string errors;
    for (const auto& d : parsed.diagnostics) errors += path + ":" + dsl::describe(d) + "\n";
    if (!parsed.ok()) throw UsageError{errors};
    auto resolved = dsl::resolve(parsed.document);
    for (const auto& d : resolved.diagnostics) errors += path + ":" + dsl::describe(d) + "\n";
    if (!resolved.ok()) throw UsageError{errors};
    return std::move(resolved.model);
}

template <class M>
const typename M::mapped_type& find(const M& map, const std::string& name, const char* kind) {
    auto it = map.find(name);
    if (it == map.end()) throw UsageError{std::string("unknown ") + kind + " '" + name + "'"};
    return it->second;
}

json names(const std::vector<std::string>& elems, std::span<const Element> xs) {
    json out = json::array();
    for (auto x : xs) out.push_back(elems[static_cast<std::size_t>(x)]);
    return out;
}

json assignment(const std::vector<std::string>& vars, const std::vector<std::string>& elems, std::span<const Element> h) {
    json out = json::object();
    for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = elems[static_cast<std::size_t>(h[i])];
    return out;
}

std::string clause_name(const AxiomSet& ax, std::size_t idx) {
    const auto& label = ax.clauses[idx].label;
    return label.empty() ? "#" + std::to_string(idx) : label;
}

json membership_witness(const MembershipReport& r, const AxiomSet& ax, const std::vector<std::string>& elems) {
    if (r.member) return nullptr;
    json out = json::array();
    for (const auto& f : r.failures)
        out.push_back({{"clause", clause_name(ax, f.clause)},
                       {"assignment", assignment(ax.clauses[f.clause].variables, elems, f.witness)}});
    return out;
}

void check_algebra(Reporter& rep, const std::string& name, const dsl::NamedAlgebra& na) {
    auto r = validate_algebra(na.algebra);
    json w = nullptr;
    if (!r.valid) {
        w = json::array();
        const auto& rel = na.algebra.carrier().signature();
        for (const auto& v : r.violations) {
            json args = json::array();
            for (const auto& t : v.args) args.push_back(names(na.elements, t));
            w.push_back({{"operation", na.algebra.signature()[v.op].name},
                         {"relation", rel[v.symbol].name},
                         {"arguments", args},
                         {"images", names(na.elements, v.image)}});
        }
    }
    rep.emit("algebra", name, r.valid, std::move(w));
}

void satisfies(Reporter& rep, const dsl::NamedAlgebra& na, const std::string& alg, const dsl::NamedEquation& ne) {
    if (na.signature != ne.signature || na.operations != ne.operations)
        throw UsageError{"'" + alg + "' and '" + ne.equation.name + "' use different signatures"};
    auto r = satisfies_equation(na.algebra, ne.equation);
    json w = nullptr;
    if (r.witness) w = assignment(ne.equation.variables, na.elements, *r.witness);
    rep.emit("satisfies", alg + " |= " + ne.equation.name, r.satisfied, std::move(w));
}

int cmd_check(Reporter& rep, const dsl::Model& m) {
    for (const auto& name : m.algebra_order) check_algebra(rep, name, m.algebras.at(name));
    for (const auto& c : m.checks) {
        if (c.kind == dsl::CheckDecl::Kind::Member) {
            const auto& ax = m.axioms.at(c.target);
            auto r = in_C(*m.carrier(c.subject), ax);
            rep.emit("member", c.subject + " in " + c.target, r.member, membership_witness(r, ax, *m.elements(c.subject)));
        } else {
            satisfies(rep, m.algebras.at(c.subject), c.subject, m.equations.at(c.target));
        }
    }
    return 0;
}

int cmd_satisfies(Reporter& rep, const dsl::Model& m, const std::string& alg, const std::vector<std::string>& eqs) {
    const auto& na = find(m.algebras, alg, "algebra");
    if (!eqs.empty()) {
        for (const auto& e : eqs) satisfies(rep, na, alg, find(m.equations, e, "equation"));
        return 0;
    }
    for (const auto& e : m.equation_order) {
        const auto& ne = m.equations.at(e);
        if (ne.signature == na.signature && ne.operations == na.operations) satisfies(rep, na, alg, ne);
    }
    return 0;
}

int cmd_free(Reporter& rep, const dsl::Model& m, const std::string& st, const std::string& ops, int depth) {
    const auto& ns = find(m.structures, st, "structure");
    const auto& lsig = find(m.operations, ops, "operations");
    auto slice = build_free_slice(ns.structure, lsig, depth);
    json terms = json::array();
    for (std::size_t i = 0; i < slice.size(); ++i) terms.push_back(show_term(slice.term(i), ns.elements, lsig.base()));
    json rels = json::object();
    const auto& s = slice.structure();
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym) rels[s.signature()[sym].name] = s.tuple_count(sym);
    bool embedding = classify_map(canonical_injection(slice)).is_embedding();
    rep.emit("free", st + " " + ops + " depth " + std::to_string(depth), embedding,
             {{"terms", slice.size()}, {"term_list", terms}, {"tuples", rels}});
    return 0;
}

std::vector<std::vector<std::string>> class_members(std::span<const Element> classes, const std::vector<std::string>& elems) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t x = 0; x < classes.size(); ++x) {
        auto c = static_cast<std::size_t>(classes[x]);
        if (out.size() <= c) out.resize(c + 1);
        out[c].push_back(elems[x]);
    }
    return out;
}

json tuples_json(const Structure& s, std::size_t sym, const std::vector<std::string>* elems) {
    json out = json::array();
    for (const auto& t : s.tuples(sym)) {
        if (elems) {
            out.push_back(names(*elems, t));
        } else {
            json idx = json::array();
            for (auto x : t) idx.push_back(x);
            out.push_back(idx);
        }
    }
    return out;
}

int cmd_reflexive(Reporter& rep, const dsl::Model& m, const std::string& map, std::optional<std::size_t> c) {
    const auto& nm = find(m.maps, map, "map");
    const auto& src = *m.carrier(nm.from);
    const auto& cod = *m.carrier(nm.to);
    if (!is_surjective(nm.table, cod.size())) throw UsageError{"map '" + map + "' is not surjective"};
    auto r = is_c_reflexive(src, cod, nm.table, c);
    json w = nullptr;
    if (r.witness) w = {{"unlifted", names(*m.elements(nm.to), *r.witness)}};
    rep.emit("reflexive", map + " c=" + describe(c), r.reflexive, std::move(w));
    return 0;
}

struct Target {
    const dsl::NamedAlgebra& alg;
    const AxiomSet& ax;
};

Target target(const dsl::Model& m, const std::string& alg, const std::string& axioms) {
    const auto& na = find(m.algebras, alg, "algebra");
    const auto& ax = find(m.axioms, axioms, "axioms");
    if (*ax.signature != na.algebra.carrier().signature())
        throw UsageError{"'" + alg + "' and '" + axioms + "' use different signatures"};
    return {na, ax};
}

int cmd_quotients(Reporter& rep, const dsl::Model& m, const std::string& alg, const std::string& axioms,
                  EnumerationBounds bounds) {
    auto t = target(m, alg, axioms);
    json list = json::array();
    for (const auto& q : enumerate_quotients(t.alg.algebra, t.ax, bounds)) {
        json rels = json::object();
        const auto& s = q.codomain.carrier();
        for (std::size_t sym = 0; sym < s.signature().size(); ++sym) rels[s.signature()[sym].name] = tuples_json(s, sym, nullptr);
        list.push_back({{"classes", class_members(q.e, t.alg.elements)}, {"relations", rels}});
    }
    rep.emit("quotients", alg + " in " + axioms, true, {{"count", list.size()}, {"quotients", list}});
    return 0;
}

int cmd_pairs(Reporter& rep, const dsl::Model& m, const std::string& alg, const std::string& axioms,
              EnumerationBounds bounds) {
    auto t = target(m, alg, axioms);
    json list = json::array();
    const auto& base = t.alg.algebra.carrier();
    for (const auto& p : enumerate_compatible_pairs(t.alg.algebra, t.ax, bounds)) {
        json rels = json::object();
        Structure refined(base.signature_ptr(), base.size());
        for (std::size_t sym = 0; sym < base.signature().size(); ++sym) {
            refined.assign_codes(sym, p.refined[sym]);
            rels[base.signature()[sym].name] = tuples_json(refined, sym, &t.alg.elements);
        }
        list.push_back({{"classes", class_members(p.classes, t.alg.elements)}, {"refined", rels}});
    }
    rep.emit("pairs", alg + " in " + axioms, true, {{"count", list.size()}, {"pairs", list}});
    return 0;
}

int cmd_exactness(Reporter& rep, const dsl::Model& m, const std::string& alg, const std::string& axioms,
                  EnumerationBounds bounds) {
    auto t = target(m, alg, axioms);
    auto r = check_exactness(t.alg.algebra, t.ax, bounds);
    rep.emit("exactness", alg + " in " + axioms, r.ok(),
             {{"quotients", r.quotients},
              {"pairs", r.pairs},
              {"quotient_round_trip", r.quotient_round_trip},
              {"pair_round_trip", r.pair_round_trip},
              {"order_preserved", r.order_preserved},
              {"images_match", r.images_match}});
    return 0;
}

int cmd_closure(Reporter& rep, const dsl::Model& m, const std::string& axioms, const std::vector<std::string>& eq_names,
                bool all_quotients, EnumerationBounds bounds) {
    const auto& ax = find(m.axioms, axioms, "axioms");
    std::vector<ClusteredEquation> eqs;
    std::string sig, ops;
    for (const auto& e : eq_names) {
        const auto& ne = find(m.equations, e, "equation");
        if (!eqs.empty() && (ne.signature != sig || ne.operations != ops))
            throw UsageError{"equations must share their signatures"};
        sig = ne.signature;
        ops = ne.operations;
        eqs.push_back(ne.equation);
    }
    if (*ax.signature != *m.signatures.at(sig)) throw UsageError{"axioms and equations use different signatures"};
    std::vector<Algebra> pool;
    std::vector<std::string> pool_names;
    for (const auto& name : m.algebra_order) {
        const auto& na = m.algebras.at(name);
        if (na.signature != sig || na.operations != ops) continue;
        if (!is_valid(na.algebra, &ax)) throw UsageError{"pool algebra '" + name + "' is not a valid member of " + axioms};
        pool.push_back(na.algebra);
        pool_names.push_back(name);
    }
    auto r = check_closure_soundness(eqs, pool, ax, all_quotients ? QuotientScope::All : QuotientScope::Reflexive, bounds);
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"kind", v.kind}, {"member", pool_names[v.member]}, {"other", v.other}, {"equation", v.equation}});
    std::string subject;
    for (const auto& e : eq_names) subject += (subject.empty() ? "" : ", ") + e;
    rep.emit("closure", subject + " over " + axioms + (all_quotients ? " (all quotients)" : " (reflexive quotients)"), r.ok,
             {{"pool", pool_names},
              {"models", r.models},
              {"products_checked", r.products_checked},
              {"subalgebras_checked", r.subalgebras_checked},
              {"quotients_checked", r.quotients_checked},
              {"out_of_scope_failures", r.out_of_scope_failures},
              {"violations", violations}});
    return 0;
}

int cmd_roundtrip(Reporter& rep, const dsl::Model& m, std::vector<std::string> structs) {
    if (structs.empty())
        for (const auto& name : m.structure_order)
            if (m.structures.at(name).structure.signature().is_quantitative()) structs.push_back(name);
    for (const auto& name : structs) {
        const auto& ns = find(m.structures, name, "structure");
        if (!ns.structure.signature().is_quantitative()) throw UsageError{"'" + name + "' is not over a gmet signature"};
        auto d = structure_to_metric(ns.structure);
        bool same = metric_to_structure(ns.structure.signature_ptr(), d) == ns.structure;
        json matrix = json::array();
        for (const auto& row : d) {
            json r = json::array();
            for (const auto& q : row) r.push_back(q.str());
            matrix.push_back(r);
        }
        rep.emit("roundtrip-gmet", name, same, {{"elements", ns.elements}, {"distances", matrix}});
    }
    return 0;
}

int cmd_translate(Reporter& rep, const dsl::Model& m, const std::string& map, int depth, std::optional<std::size_t> c,
                  const std::vector<std::string>& checks) {
    const auto& nm = find(m.maps, map, "map");
    const auto& xs = m.structure(nm.from);
    const auto& alg = m.algebra(nm.to);
    if (!xs || !alg) throw UsageError{"map '" + map + "' must go from a structure to an algebra"};
    auto slice = build_free_slice(xs->structure, alg->algebra.signature(), depth);
    auto e = extend_on_slice(nm.table, alg->algebra, slice);
    if (!is_surjective(e, alg->algebra.size()))
        throw UsageError{"the extension of '" + map + "' to depth " + std::to_string(depth) + " is not surjective"};
    AbstractEquationInstance inst{xs->structure, alg->algebra.signature(), depth, e, alg->algebra, c};
    Translation tr;
    try {
        tr = translate_abstract_equation(inst);
    } catch (const Error& err) {
        throw UsageError{err.what()};
    }
    json eqs = json::array();
    const auto& rel = xs->structure.signature();
    for (const auto& eq : tr.equations) eqs.push_back(dsl::show_equation(eq, rel, alg->algebra.signature().base()));
    rep.emit("translate", map + " depth " + std::to_string(depth) + " c=" + describe(c), true,
             {{"equations", eqs.size()}, {"equation_list", eqs}, {"scope", tr.scope_note}});
    for (const auto& name : checks) {
        const auto& other = find(m.algebras, name, "algebra");
        if (!(other.algebra.signature() == alg->algebra.signature()) || other.signature != alg->signature)
            throw UsageError{"'" + name + "' does not match the signature of '" + nm.to + "'"};
        bool abstract = satisfies_abstract(other.algebra, inst);
        bool clustered = satisfies_all(other.algebra, tr.equations);
        rep.emit("translate-agreement", name, abstract == clustered, {{"abstract", abstract}, {"clustered", clustered}});
    }
    return 0;
}

std::optional<std::size_t> parse_c(const std::string& text) {
    if (text.empty() || text == "inf") return std::nullopt;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v == 0) throw UsageError{"cluster bound must be a positive integer or 'inf'"};
    return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relalg: check relational algebra specifications"};
    app.require_subcommand(1);
    bool pretty = false, json_mode = false;
    std::size_t max_carrier = 4;
    app.add_flag("--pretty", pretty, "human-readable output");
    app.add_flag("--json", json_mode, "JSON lines (default)");
    app.add_option("--max-carrier", max_carrier, "largest carrier for quotient and pair enumeration")
        ->check(CLI::PositiveNumber);

    std::string file, a1, a2, c_text;
    std::vector<std::string> rest;
    int depth = 1;
    bool all_quotients = false;

    auto* check = app.add_subcommand("check", "validate algebras and run the check directives");
    check->add_option("file", file)->required();

    auto* sat = app.add_subcommand("satisfies", "check equations on an algebra");
    sat->add_option("file", file)->required();
    sat->add_option("algebra", a1)->required();
    sat->add_option("equations", rest, "default: all equations over the algebra's signatures");

    auto* free = app.add_subcommand("free", "build the depth-d slice of the free algebra");
    free->add_option("file", file)->required();
    free->add_option("structure", a1)->required();
    free->add_option("operations", a2)->required();
    free->add_option("--depth,-d", depth)->check(CLI::Range(0, 8));

    auto* refl = app.add_subcommand("reflexive", "c-reflexivity of a surjective map");
    refl->add_option("file", file)->required();
    refl->add_option("map", a1)->required();
    refl->add_option("--c", c_text, "cluster bound (default: inf)");

    auto* quot = app.add_subcommand("quotients", "enumerate the quotients of an algebra in C");
    auto* pairs = app.add_subcommand("pairs", "enumerate the compatible pairs of an algebra");
    auto* exact = app.add_subcommand("exactness", "compare quotients with compatible pairs");
    for (auto* sub : {quot, pairs, exact}) {
        sub->add_option("file", file)->required();
        sub->add_option("algebra", a1)->required();
        sub->add_option("axioms", a2)->required();
    }

    auto* clos = app.add_subcommand("closure", "closure of the models under products, subalgebras and quotients");
    clos->add_option("file", file)->required();
    clos->add_option("axioms", a1)->required();
    clos->add_option("equations", rest)->required();
    clos->add_flag("--all-quotients", all_quotients, "check every quotient, not only the c-reflexive ones");

    auto* rt = app.add_subcommand("roundtrip-gmet", "structure -> distances -> structure");
    rt->add_option("file", file)->required();
    rt->add_option("structures", rest, "default: every structure over a gmet signature");

    auto* tr = app.add_subcommand("translate", "abstract equation to clustered equations");
    tr->add_option("file", file)->required();
    tr->add_option("map", a1, "a map from a structure to an algebra")->required();
    tr->add_option("--depth,-d", depth)->check(CLI::Range(0, 4));
    tr->add_option("--c", c_text, "cluster bound (default: inf)");
    tr->add_option("--check", rest, "algebras on which to compare both readings");

    auto* fmt = app.add_subcommand("format", "print the document in canonical form");
    fmt->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    (void)json_mode;

    Reporter rep(pretty);
    try {
        if (fmt->parsed()) {
            std::ifstream in(file, std::ios::binary);
            if (!in) throw UsageError{"cannot read " + file};
            std::stringstream buf;
            buf << in.rdbuf();
            auto parsed = dsl::parse(buf.str());
            if (!parsed.ok()) {
                for (const auto& d : parsed.diagnostics) std::cerr << file << ":" << dsl::describe(d) << "\n";
                return 2;
            }
            std::cout << dsl::serialize(parsed.document);
            return 0;
        }
        auto model = load(file);
        EnumerationBounds bounds{max_carrier, 6};
        if (check->parsed()) cmd_check(rep, model);
        if (sat->parsed()) cmd_satisfies(rep, model, a1, rest);
        if (free->parsed()) cmd_free(rep, model, a1, a2, depth);
        if (refl->parsed()) cmd_reflexive(rep, model, a1, parse_c(c_text));
        if (quot->parsed()) cmd_quotients(rep, model, a1, a2, bounds);
        if (pairs->parsed()) cmd_pairs(rep, model, a1, a2, bounds);
        if (exact->parsed()) cmd_exactness(rep, model, a1, a2, bounds);
        if (clos->parsed()) cmd_closure(rep, model, a1, rest, all_quotients, bounds);
        if (rt->parsed()) cmd_roundtrip(rep, model, rest);
        if (tr->parsed()) cmd_translate(rep, model, a1, depth, parse_c(c_text), rest);
    } catch (const UsageError& e) {
        std::cerr << e.message << (e.message.empty() || e.message.back() != '\n' ? "\n" : "");
        return 2;
    } catch (const BoundExceeded& e) {
        std::cerr << "bound exceeded: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rep.failed() ? 1 : 0;
}
