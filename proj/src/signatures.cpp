#include "relalg/signatures.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace relalg {

Rational Rational::parse(std::string_view text) {
    auto to_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw Error("malformed rational '" + std::string(text) + "'");
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return {to_int(text.substr(0, slash)), to_int(text.substr(slash + 1))};
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 9) throw Error("malformed rational '" + std::string(text) + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        auto whole = dot == 0 ? 0 : to_int(text.substr(0, dot));
        return {whole * den + to_int(frac), den};
    }
    return {to_int(text)};
}

QuantityLattice::QuantityLattice(std::vector<Rational> elements) : elements_(std::move(elements)) {
    if (elements_.size() < 2 || elements_.front() != Rational(0) || elements_.back() != Rational(1))
        throw Error("quantity lattice must contain 0 and 1");
    for (std::size_t i = 1; i < elements_.size(); ++i)
        if (!(elements_[i - 1] < elements_[i]))
            throw Error("quantity lattice must be strictly ascending");
    const auto n = elements_.size();
    add_.resize(n * n);
    max_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto sum = elements_[i] + elements_[j];
            add_[i * n + j] = round_up(sum < Rational(1) ? sum : Rational(1));
            max_[i * n + j] = std::max(i, j);
        }
    }
}

QuantityLattice QuantityLattice::uniform(int n) {
    if (n < 1) throw Error("uniform lattice needs n >= 1");
    std::vector<Rational> v;
    for (int i = 0; i <= n; ++i) v.emplace_back(i, n);
    return QuantityLattice(std::move(v));
}

std::optional<std::size_t> QuantityLattice::index_of(const Rational& q) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), q);
    if (it == elements_.end() || *it != q) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t QuantityLattice::round_up(const Rational& q) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), q);
    if (it == elements_.end()) throw Error("quantity " + q.str() + " exceeds 1");
    return static_cast<std::size_t>(it - elements_.begin());
}

RelationalSignature::RelationalSignature(std::vector<RelationSymbol> symbols,
                                         std::optional<QuantityLattice> quantities)
    : symbols_(std::move(symbols)), quantities_(std::move(quantities)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 1) throw Error("relational arity must be >= 1 (symbol '" + s.name + "')");
        if (!seen.insert(s.name).second) throw Error("duplicate relation symbol '" + s.name + "'");
    }
    if (quantities_ && quantities_->size() != symbols_.size())
        throw Error("quantitative signature must have one symbol per lattice element");
}

std::optional<std::size_t> RelationalSignature::find(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

std::size_t RelationalSignature::index(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw Error("unknown relation symbol '" + name + "'");
}

AlgebraicSignature::AlgebraicSignature(std::vector<OperationSymbol> symbols)
    : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 0) throw Error("operation arity must be >= 0 (symbol '" + s.name + "')");
        if (!seen.insert(s.name).second) throw Error("duplicate operation symbol '" + s.name + "'");
    }
}

std::optional<std::size_t> AlgebraicSignature::find(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

std::string describe(const LiftingSpec& spec) {
    struct Visitor {
        std::string operator()(const lifting::Discrete&) const { return "discrete"; }
        std::string operator()(const lifting::Product&) const { return "product"; }
        std::string operator()(const lifting::Subset& s) const {
            std::string out = "subset{";
            for (std::size_t i = 0; i < s.coordinates.size(); ++i)
                out += (i ? "," : "") + std::to_string(s.coordinates[i]);
            return out + "}";
        }
        std::string operator()(const lifting::Lexicographic& l) const { return "lex(" + l.order_symbol + ")"; }
        std::string operator()(const lifting::Lipschitz& l) const { return "lipschitz(" + l.alpha.str() + ")"; }
        std::string operator()(const lifting::LK& l) const { return "lk(" + l.p.str() + ")"; }
    };
    return std::visit(Visitor{}, spec);
}

LiftedSignature::LiftedSignature(AlgebraicSignature base, std::vector<LiftingSpec> liftings)
    : base_(std::move(base)), liftings_(std::move(liftings)) {
    if (liftings_.size() != base_.size())
        throw Error("lifted signature needs exactly one lifting per operation symbol");
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const auto& op = base_[i];
        const auto& spec = liftings_[i];
        if (std::holds_alternative<lifting::LK>(spec)) {
            if (op.arity != 2)
                throw Error("lk lifting assigned to non-binary symbol '" + op.name + "'");
            auto p = std::get<lifting::LK>(spec).p;
            if (!(Rational(0) < p && p < Rational(1))) throw Error("lk parameter must lie in (0,1)");
        }
        if (auto* lip = std::get_if<lifting::Lipschitz>(&spec); lip && lip->alpha < Rational(1))
            throw Error("lipschitz constant must be >= 1");
        if (auto* sub = std::get_if<lifting::Subset>(&spec)) {
            for (int c : sub->coordinates)
                if (c < 0 || c >= op.arity)
                    throw Error("subset coordinate " + std::to_string(c) + " out of range for '" + op.name + "'");
        }
    }
}

std::string quantity_symbol_name(const Rational& q) { return "=:" + q.str(); }

RelationalSignature make_gmet_signature(const QuantityLattice& q) {
    std::vector<RelationSymbol> symbols;
    for (const auto& v : q.values()) symbols.push_back({quantity_symbol_name(v), 2});
    return RelationalSignature(std::move(symbols), q);
}

RelationalSignature make_poset_signature() { return RelationalSignature({{"leq", 2}}); }

RelationalSignature make_partial_algebra_signature(const AlgebraicSignature& p) {
    std::vector<RelationSymbol> symbols;
    for (const auto& f : p.symbols()) symbols.push_back({"alpha_" + f.name, f.arity + 1});
    return RelationalSignature(std::move(symbols));
}

}  // namespace relalg
