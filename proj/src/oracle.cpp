#include "rowl/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace rowl::oracle {

namespace {

// ── Bit-level relation algebra ──────────────────────────────────────────────

std::uint64_t full_mask(int n) { return (std::uint64_t{1} << n) - 1; }

std::uint64_t full_rel(int n) {
    int bits = n * n;
    return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::uint64_t transpose(std::uint64_t rel, int n) {
    std::uint64_t out = 0;
    for (int d = 0; d < n; ++d) {
        for (int e = 0; e < n; ++e) {
            if (rel >> (d * n + e) & 1) {
                out |= std::uint64_t{1} << (e * n + d);
            }
        }
    }
    return out;
}

std::uint64_t compose(std::uint64_t a, std::uint64_t b, int n) {
    std::uint64_t out = 0;
    for (int d = 0; d < n; ++d) {
        std::uint64_t row = (a >> (d * n)) & full_mask(n);
        std::uint64_t acc = 0;
        for (int e = 0; e < n; ++e) {
            if (row >> e & 1) {
                acc |= (b >> (e * n)) & full_mask(n);
            }
        }
        out |= acc << (d * n);
    }
    return out;
}

std::uint64_t diagonal(std::uint64_t mask, int n) {
    std::uint64_t out = 0;
    for (int d = 0; d < n; ++d) {
        if (mask >> d & 1) {
            out |= std::uint64_t{1} << (d * n + d);
        }
    }
    return out;
}

// ── Indexed signatures and worlds ───────────────────────────────────────────
// A World is an interpretation with names replaced by indices into a
// SigIndex: dense vectors instead of maps, for the enumeration loops.

struct SigIndex {
    std::vector<EntityName> classes;
    std::vector<EntityName> properties;
    std::vector<EntityName> individuals;

    static SigIndex from(const Signature& sig) {
        SigIndex idx;
        for (const auto& n : sig.classes()) {
            idx.classes.push_back(n);
        }
        for (const auto& n : sig.properties()) {
            if (n != EntityName::universal_property()) {
                idx.properties.push_back(n);
            }
        }
        for (const auto& n : sig.individuals()) {
            idx.individuals.push_back(n);
        }
        return idx;  // Signature sets are ordered, so the vectors are sorted
    }

    static int find(const std::vector<EntityName>& names, const EntityName& name) {
        auto it = std::lower_bound(names.begin(), names.end(), name);
        if (it == names.end() || *it != name) {
            return -1;
        }
        return static_cast<int>(it - names.begin());
    }

    int class_index(const EntityName& n) const { return find(classes, n); }
    int property_index(const EntityName& n) const { return find(properties, n); }
    int individual_index(const EntityName& n) const { return find(individuals, n); }
};

struct World {
    int n = 1;
    std::vector<std::uint64_t> classes;
    std::vector<std::uint64_t> props;
    std::vector<int> inds;  // 0-based elements

    void reset(const SigIndex& sig, int domain) {
        n = domain;
        classes.assign(sig.classes.size(), 0);
        props.assign(sig.properties.size(), 0);
        inds.assign(sig.individuals.size(), 0);
    }
};

// Odometer step in the documented enumeration order: individuals fastest,
// then property extensions, then class extensions, each component ascending.
bool advance(World& w) {
    for (auto it = w.inds.rbegin(); it != w.inds.rend(); ++it) {
        if (*it + 1 < w.n) {
            ++*it;
            return true;
        }
        *it = 0;
    }
    std::uint64_t rel_max = full_rel(w.n);
    for (auto it = w.props.rbegin(); it != w.props.rend(); ++it) {
        if (*it < rel_max) {
            ++*it;
            return true;
        }
        *it = 0;
    }
    std::uint64_t mask_max = full_mask(w.n);
    for (auto it = w.classes.rbegin(); it != w.classes.rend(); ++it) {
        if (*it < mask_max) {
            ++*it;
            return true;
        }
        *it = 0;
    }
    return false;
}

// ── Compiled formulas ───────────────────────────────────────────────────────

struct PropRef {
    int index = -1;  // -1: universal property
    bool inverted = false;
};

std::uint64_t extent(const PropRef& p, const World& w) {
    if (p.index < 0) {
        return full_rel(w.n);
    }
    std::uint64_t rel = w.props[p.index];
    return p.inverted ? transpose(rel, w.n) : rel;
}

struct ExprNode {
    ClassExpression::Kind kind = ClassExpression::Kind::Top;
    int index = -1;  // class index (Named) or individual index (Nominal)
    PropRef prop;
    std::vector<ExprNode> children;
};

PropRef compile_prop(const PropertyExpression& p, const SigIndex& sig) {
    if (p.is_universal()) {
        return {};
    }
    int index = sig.property_index(p.base());
    if (index < 0) {
        throw EvalError("property '" + p.base().display() + "' is not interpreted");
    }
    return {index, p.inverted()};
}

ExprNode compile_expr(const ClassExpression& expr, const SigIndex& sig) {
    ExprNode node;
    node.kind = expr.kind();
    switch (expr.kind()) {
        case ClassExpression::Kind::Top:
        case ClassExpression::Kind::Bottom:
            break;
        case ClassExpression::Kind::Named:
            node.index = sig.class_index(expr.name());
            if (node.index < 0) {
                throw EvalError("class '" + expr.name().display() + "' is not interpreted");
            }
            break;
        case ClassExpression::Kind::Nominal:
            node.index = sig.individual_index(expr.name());
            if (node.index < 0) {
                throw EvalError("individual '" + expr.name().display() +
                                "' is not interpreted");
            }
            break;
        case ClassExpression::Kind::Conjunction:
            for (const auto& c : expr.conjuncts()) {
                node.children.push_back(compile_expr(c, sig));
            }
            break;
        case ClassExpression::Kind::Existential:
            node.prop = compile_prop(expr.property(), sig);
            node.children.push_back(compile_expr(expr.filler(), sig));
            break;
        case ClassExpression::Kind::SelfRestriction:
            node.prop = compile_prop(expr.property(), sig);
            break;
    }
    return node;
}

std::uint64_t eval_expr(const ExprNode& node, const World& w) {
    switch (node.kind) {
        case ClassExpression::Kind::Top:
            return full_mask(w.n);
        case ClassExpression::Kind::Bottom:
            return 0;
        case ClassExpression::Kind::Named:
            return w.classes[node.index];
        case ClassExpression::Kind::Nominal:
            return std::uint64_t{1} << w.inds[node.index];
        case ClassExpression::Kind::Conjunction: {
            std::uint64_t mask = full_mask(w.n);
            for (const auto& c : node.children) {
                mask &= eval_expr(c, w);
            }
            return mask;
        }
        case ClassExpression::Kind::Existential: {
            std::uint64_t rel = extent(node.prop, w);
            std::uint64_t filler = eval_expr(node.children.front(), w);
            std::uint64_t mask = 0;
            for (int d = 0; d < w.n; ++d) {
                if (((rel >> (d * w.n)) & full_mask(w.n)) & filler) {
                    mask |= std::uint64_t{1} << d;
                }
            }
            return mask;
        }
        case ClassExpression::Kind::SelfRestriction: {
            std::uint64_t rel = extent(node.prop, w);
            std::uint64_t mask = 0;
            for (int d = 0; d < w.n; ++d) {
                if (rel >> (d * w.n + d) & 1) {
                    mask |= std::uint64_t{1} << d;
                }
            }
            return mask;
        }
    }
    return 0;
}

struct CompiledAxiom {
    bool subclass = true;
    ExprNode sub, sup;
    std::vector<PropRef> chain;
    PropRef super;
};

CompiledAxiom compile_axiom(const Axiom& axiom, const SigIndex& sig) {
    CompiledAxiom out;
    if (axiom.kind() == Axiom::Kind::SubClassOf) {
        out.sub = compile_expr(axiom.sub(), sig);
        out.sup = compile_expr(axiom.sup(), sig);
    } else {
        out.subclass = false;
        for (const auto& p : axiom.chain()) {
            out.chain.push_back(compile_prop(p, sig));
        }
        out.super = compile_prop(axiom.super(), sig);
    }
    return out;
}

bool holds(const CompiledAxiom& axiom, const World& w) {
    if (axiom.subclass) {
        return (eval_expr(axiom.sub, w) & ~eval_expr(axiom.sup, w)) == 0;
    }
    std::uint64_t rel = extent(axiom.chain.front(), w);
    for (std::size_t i = 1; i < axiom.chain.size(); ++i) {
        rel = compose(rel, extent(axiom.chain[i], w), w.n);
    }
    return (rel & ~extent(axiom.super, w)) == 0;
}

struct TermRef {
    bool is_var = true;
    int index = 0;  // variable slot or individual index
};

struct AtomRef {
    bool is_class = true;
    int id = 0;  // into exprs / props
    TermRef t0, t1;
};

struct CompiledRule {
    std::vector<ExprNode> exprs;
    std::vector<PropRef> props;
    std::vector<AtomRef> body, head;
    int nvars = 0;
};

// Reused across worlds to keep the enumeration loops allocation-free.
struct Scratch {
    std::vector<std::uint64_t> masks;
    std::vector<std::uint64_t> rels;
    std::vector<int> assign;
};

CompiledRule compile_rule(const Rule& rule, const SigIndex& sig) {
    CompiledRule out;
    auto vars = rule.body_variables();
    out.nvars = static_cast<int>(vars.size());
    auto term_ref = [&](const Term& t) -> TermRef {
        if (t.is_variable()) {
            auto it = std::lower_bound(vars.begin(), vars.end(), t);
            return {true, static_cast<int>(it - vars.begin())};
        }
        int index = sig.individual_index(t.name);
        if (index < 0) {
            throw EvalError("individual '" + t.name.display() + "' is not interpreted");
        }
        return {false, index};
    };
    auto compile_atoms = [&](const std::vector<Atom>& atoms, std::vector<AtomRef>& refs) {
        for (const auto& atom : atoms) {
            AtomRef ref;
            if (atom.is_class_atom()) {
                ref.id = static_cast<int>(out.exprs.size());
                out.exprs.push_back(compile_expr(atom.expr(), sig));
                ref.t0 = term_ref(atom.term());
            } else {
                ref.is_class = false;
                ref.id = static_cast<int>(out.props.size());
                out.props.push_back(compile_prop(atom.property(), sig));
                ref.t0 = term_ref(atom.subject());
                ref.t1 = term_ref(atom.object());
            }
            refs.push_back(ref);
        }
    };
    compile_atoms(rule.body(), out.body);
    compile_atoms(rule.head(), out.head);
    return out;
}

bool holds(const CompiledRule& rule, const World& w, Scratch& s) {
    s.masks.clear();
    for (const auto& e : rule.exprs) {
        s.masks.push_back(eval_expr(e, w));
    }
    s.rels.clear();
    for (const auto& p : rule.props) {
        s.rels.push_back(extent(p, w));
    }
    s.assign.assign(rule.nvars, 0);
    auto element = [&](const TermRef& t) {
        return t.is_var ? s.assign[t.index] : w.inds[t.index];
    };
    auto atom_holds = [&](const AtomRef& a) {
        if (a.is_class) {
            return (s.masks[a.id] >> element(a.t0) & 1) != 0;
        }
        return (s.rels[a.id] >> (element(a.t0) * w.n + element(a.t1)) & 1) != 0;
    };
    while (true) {
        bool body_holds = true;
        for (const auto& a : rule.body) {
            if (!atom_holds(a)) {
                body_holds = false;
                break;
            }
        }
        if (body_holds) {
            for (const auto& a : rule.head) {
                if (!atom_holds(a)) {
                    return false;
                }
            }
        }
        // Next substitution, last variable fastest.
        int i = rule.nvars - 1;
        while (i >= 0 && s.assign[i] + 1 == w.n) {
            s.assign[i--] = 0;
        }
        if (i < 0) {
            return true;
        }
        ++s.assign[i];
    }
}

using CompiledFormula = std::variant<CompiledRule, CompiledAxiom>;

CompiledFormula compile_formula(const Formula& f, const SigIndex& sig) {
    if (const auto* rule = std::get_if<Rule>(&f)) {
        return compile_rule(*rule, sig);
    }
    return compile_axiom(std::get<Axiom>(f), sig);
}

bool holds(const CompiledFormula& f, const World& w, Scratch& s) {
    if (const auto* rule = std::get_if<CompiledRule>(&f)) {
        return holds(*rule, w, s);
    }
    return holds(std::get<CompiledAxiom>(f), w);
}

bool all_hold(const std::vector<CompiledFormula>& fs, const World& w, Scratch& s) {
    for (const auto& f : fs) {
        if (!holds(f, w, s)) {
            return false;
        }
    }
    return true;
}

// ── Conversions between Worlds and Interpretations ─────────────────────────

Signature signature_of(const Formula& f) {
    if (const auto* rule = std::get_if<Rule>(&f)) {
        return rule_signature(*rule);
    }
    return axiom_signature(std::get<Axiom>(f));
}

Signature union_signature(const FormulaSet& s1, const FormulaSet& s2) {
    Signature sig;
    for (const auto& f : s1) {
        sig.merge(signature_of(f));
    }
    for (const auto& f : s2) {
        sig.merge(signature_of(f));
    }
    return sig;
}

Interpretation to_interpretation(const World& w, const SigIndex& sig) {
    Interpretation out;
    out.domain_size = w.n;
    for (std::size_t i = 0; i < sig.classes.size(); ++i) {
        out.class_extensions[sig.classes[i]] = w.classes[i];
    }
    for (std::size_t i = 0; i < sig.properties.size(); ++i) {
        out.property_extensions[sig.properties[i]] = w.props[i];
    }
    for (std::size_t i = 0; i < sig.individuals.size(); ++i) {
        out.individual_map[sig.individuals[i]] = w.inds[i] + 1;
    }
    return out;
}

World world_from(const Interpretation& interp, const SigIndex& sig) {
    World w;
    if (interp.domain_size < 1 || interp.domain_size > kMaxDomainSize) {
        throw EvalError("domain size must be between 1 and " +
                        std::to_string(kMaxDomainSize));
    }
    w.n = interp.domain_size;
    for (const auto& name : sig.classes) {
        auto it = interp.class_extensions.find(name);
        if (it == interp.class_extensions.end()) {
            throw EvalError("class '" + name.display() + "' is not interpreted");
        }
        if (it->second & ~full_mask(w.n)) {
            throw EvalError("extension of '" + name.display() + "' lies outside the domain");
        }
        w.classes.push_back(it->second);
    }
    for (const auto& name : sig.properties) {
        auto it = interp.property_extensions.find(name);
        if (it == interp.property_extensions.end()) {
            throw EvalError("property '" + name.display() + "' is not interpreted");
        }
        if (it->second & ~full_rel(w.n)) {
            throw EvalError("extension of '" + name.display() + "' lies outside the domain");
        }
        w.props.push_back(it->second);
    }
    for (const auto& name : sig.individuals) {
        auto it = interp.individual_map.find(name);
        if (it == interp.individual_map.end()) {
            throw EvalError("individual '" + name.display() + "' is not interpreted");
        }
        if (it->second < 1 || it->second > w.n) {
            throw EvalError("individual '" + name.display() + "' is mapped outside the domain");
        }
        w.inds.push_back(it->second - 1);
    }
    return w;
}

std::string describe(const Formula& f) {
    if (const auto* rule = std::get_if<Rule>(&f)) {
        return "rule '" + rule->name() + "'";
    }
    return std::get<Axiom>(f).canonical_string();
}

// The first formula of `fs` failing on w; used for counterexample details.
std::string first_failing(const FormulaSet& fs, const std::vector<CompiledFormula>& compiled,
                          const World& w, Scratch& s) {
    for (std::size_t i = 0; i < compiled.size(); ++i) {
        if (!holds(compiled[i], w, s)) {
            return describe(fs[i]);
        }
    }
    return "?";
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > ~std::uint64_t{0} / a) {
        return ~std::uint64_t{0};
    }
    return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > ~std::uint64_t{0} - b ? ~std::uint64_t{0} : a + b;
}

void check_max_domain(int max_domain) {
    if (max_domain < 1 || max_domain > kMaxDomainSize) {
        throw std::invalid_argument("max_domain must be between 1 and " +
                                    std::to_string(kMaxDomainSize));
    }
}

void check_budget(const Signature& sig, int max_domain, std::uint64_t budget) {
    std::uint64_t required = enumeration_space(sig, max_domain);
    if (required > budget) {
        throw BudgetExceededError(required, budget);
    }
}

}  // namespace

// ── Public interface ────────────────────────────────────────────────────────

std::uint64_t subset_mask(std::initializer_list<int> elements) {
    std::uint64_t mask = 0;
    for (int e : elements) {
        mask |= std::uint64_t{1} << (e - 1);
    }
    return mask;
}

std::uint64_t relation_mask(int domain_size,
                            std::initializer_list<std::pair<int, int>> pairs) {
    std::uint64_t mask = 0;
    for (const auto& [d, e] : pairs) {
        mask |= std::uint64_t{1} << ((d - 1) * domain_size + (e - 1));
    }
    return mask;
}

std::string Interpretation::to_string() const {
    std::ostringstream out;
    out << "domain = {";
    for (int d = 1; d <= domain_size; ++d) {
        out << (d > 1 ? ", " : "") << d;
    }
    out << "}";
    for (const auto& [name, mask] : class_extensions) {
        out << "\n" << name.display() << " = {";
        bool first = true;
        for (int d = 1; d <= domain_size; ++d) {
            if (mask >> (d - 1) & 1) {
                out << (first ? "" : ", ") << d;
                first = false;
            }
        }
        out << "}";
    }
    for (const auto& [name, rel] : property_extensions) {
        out << "\n" << name.display() << " = {";
        bool first = true;
        for (int d = 1; d <= domain_size; ++d) {
            for (int e = 1; e <= domain_size; ++e) {
                if (rel >> ((d - 1) * domain_size + (e - 1)) & 1) {
                    out << (first ? "" : ", ") << "(" << d << "," << e << ")";
                    first = false;
                }
            }
        }
        out << "}";
    }
    for (const auto& [name, element] : individual_map) {
        out << "\n" << name.display() << " = " << element;
    }
    return out.str();
}

BudgetExceededError::BudgetExceededError(std::uint64_t required_, std::uint64_t budget_)
    : std::runtime_error("enumeration space of " + std::to_string(required_) +
                         " interpretations exceeds the budget of " + std::to_string(budget_) +
                         "; use equivalent_sampled instead"),
      required(required_),
      budget(budget_) {}

std::set<int> eval_class(const ClassExpression& expr, const Interpretation& interp) {
    SigIndex sig = SigIndex::from(class_expression_signature(expr));
    World w = world_from(interp, sig);
    std::uint64_t mask = eval_expr(compile_expr(expr, sig), w);
    std::set<int> out;
    for (int d = 1; d <= w.n; ++d) {
        if (mask >> (d - 1) & 1) {
            out.insert(d);
        }
    }
    return out;
}

bool entails(const Interpretation& interp, const Formula& formula) {
    SigIndex sig = SigIndex::from(signature_of(formula));
    World w = world_from(interp, sig);
    Scratch scratch;
    return holds(compile_formula(formula, sig), w, scratch);
}

std::uint64_t enumeration_space(const Signature& sig, int max_domain) {
    check_max_domain(max_domain);
    SigIndex idx = SigIndex::from(sig);
    std::uint64_t total = 0;
    for (int n = 1; n <= max_domain; ++n) {
        std::uint64_t bits = n * idx.classes.size() + n * n * idx.properties.size();
        std::uint64_t space;
        if (bits >= 63) {
            space = ~std::uint64_t{0};
        } else {
            space = std::uint64_t{1} << bits;
        }
        for (std::size_t i = 0; i < idx.individuals.size(); ++i) {
            space = saturating_mul(space, static_cast<std::uint64_t>(n));
        }
        total = saturating_add(total, space);
    }
    return total;
}

std::optional<Counterexample> equivalent_exhaustive(const FormulaSet& s1, const FormulaSet& s2,
                                                    int max_domain, std::uint64_t budget) {
    check_max_domain(max_domain);
    Signature shared = union_signature(s1, s2);
    check_budget(shared, max_domain, budget);
    SigIndex sig = SigIndex::from(shared);
    std::vector<CompiledFormula> c1, c2;
    for (const auto& f : s1) {
        c1.push_back(compile_formula(f, sig));
    }
    for (const auto& f : s2) {
        c2.push_back(compile_formula(f, sig));
    }
    Scratch scratch;
    World w;
    for (int n = 1; n <= max_domain; ++n) {
        w.reset(sig, n);
        do {
            bool e1 = all_hold(c1, w, scratch);
            bool e2 = all_hold(c2, w, scratch);
            if (e1 != e2) {
                std::string detail =
                    e1 ? "entails the first set but not " +
                             first_failing(s2, c2, w, scratch)
                       : "entails the second set but not " +
                             first_failing(s1, c1, w, scratch);
                return Counterexample{to_interpretation(w, sig), std::move(detail)};
            }
        } while (advance(w));
    }
    return std::nullopt;
}

std::optional<Counterexample> conservative_extension_check(const Rule& base,
                                                           const std::vector<Axiom>& extension,
                                                           const std::set<EntityName>& fresh,
                                                           int max_domain,
                                                           std::uint64_t budget) {
    check_max_domain(max_domain);
    Signature base_sig = rule_signature(base);
    for (const auto& name : fresh) {
        if (base_sig.has_any(name)) {
            throw std::invalid_argument("fresh name '" + name.display() +
                                        "' occurs in the source rule");
        }
    }
    Signature ext_sig;
    for (const auto& ax : extension) {
        ext_sig.merge(axiom_signature(ax));
    }
    Signature full_sig = base_sig;
    full_sig.merge(ext_sig);

    // Extension names other than the fresh properties must come from base.
    auto check_known = [&](const std::set<EntityName>& names, bool properties) {
        for (const auto& name : names) {
            if (name == EntityName::universal_property()) {
                continue;
            }
            if (properties && fresh.count(name)) {
                continue;
            }
            if (!base_sig.has_any(name)) {
                throw std::invalid_argument("extension name '" + name.display() +
                                            "' is neither fresh nor in the source rule");
            }
        }
    };
    check_known(ext_sig.classes(), false);
    check_known(ext_sig.properties(), true);
    check_known(ext_sig.individuals(), false);

    // Read the canonical witness class of each fresh property off its
    // rolification axiom C ⊑ ∃R_C.Self.
    std::map<EntityName, ClassExpression> witnesses;
    for (const auto& ax : extension) {
        if (ax.kind() != Axiom::Kind::SubClassOf ||
            ax.sup().kind() != ClassExpression::Kind::SelfRestriction) {
            continue;
        }
        const auto& prop = ax.sup().property();
        if (!prop.inverted() && fresh.count(prop.base())) {
            witnesses.emplace(prop.base(), ax.sub());
        }
    }
    for (const auto& name : fresh) {
        if (!witnesses.count(name)) {
            throw std::invalid_argument("no rolification axiom defines fresh property '" +
                                        name.display() + "'");
        }
    }

    // Both directions enumerate: (i) over the full signature, (ii) over the
    // base signature.
    std::uint64_t required = saturating_add(enumeration_space(full_sig, max_domain),
                                            enumeration_space(base_sig, max_domain));
    if (required > budget) {
        throw BudgetExceededError(required, budget);
    }

    SigIndex full_idx = SigIndex::from(full_sig);
    SigIndex base_idx = SigIndex::from(base_sig);

    std::vector<CompiledFormula> ext_full;
    for (const auto& ax : extension) {
        ext_full.push_back(compile_axiom(ax, full_idx));
    }
    CompiledRule base_full = compile_rule(base, full_idx);
    Scratch scratch;

    // Direction (i): the extension entails the base rule.
    World w;
    for (int n = 1; n <= max_domain; ++n) {
        w.reset(full_idx, n);
        do {
            if (all_hold(ext_full, w, scratch) && !holds(base_full, w, scratch)) {
                return Counterexample{to_interpretation(w, full_idx),
                                      "the axioms hold but the rule does not"};
            }
        } while (advance(w));
    }

    // Direction (ii): models of the base rule extend along the canonical
    // witness.  Property slot j of the extended world is either copied from
    // the base world or filled with the witness diagonal.
    CompiledRule base_base = compile_rule(base, base_idx);
    struct Slot {
        int base_index = -1;    // copy from this base property
        ExprNode witness;       // or evaluate this over the base world
    };
    std::vector<Slot> slots;
    for (const auto& name : full_idx.properties) {
        Slot slot;
        if (fresh.count(name)) {
            slot.witness = compile_expr(witnesses.at(name), base_idx);
        } else {
            slot.base_index = base_idx.property_index(name);
        }
        slots.push_back(std::move(slot));
    }

    World ext_world;
    for (int n = 1; n <= max_domain; ++n) {
        w.reset(base_idx, n);
        do {
            if (!holds(base_base, w, scratch)) {
                continue;
            }
            ext_world.n = n;
            ext_world.classes = w.classes;  // class and individual names agree
            ext_world.inds = w.inds;
            ext_world.props.clear();
            for (const auto& slot : slots) {
                if (slot.base_index >= 0) {
                    ext_world.props.push_back(w.props[slot.base_index]);
                } else {
                    ext_world.props.push_back(diagonal(eval_expr(slot.witness, w), n));
                }
            }
            for (std::size_t i = 0; i < ext_full.size(); ++i) {
                if (!holds(ext_full[i], ext_world, scratch)) {
                    return Counterexample{
                        to_interpretation(ext_world, full_idx),
                        "the canonical witness extension fails " +
                            extension[i].canonical_string()};
                }
            }
        } while (advance(w));
    }
    return std::nullopt;
}

std::optional<Counterexample> equivalent_sampled(const FormulaSet& s1, const FormulaSet& s2,
                                                 int trials, int max_domain,
                                                 std::uint64_t seed) {
    check_max_domain(max_domain);
    Signature shared = union_signature(s1, s2);
    SigIndex sig = SigIndex::from(shared);
    std::vector<CompiledFormula> c1, c2;
    for (const auto& f : s1) {
        c1.push_back(compile_formula(f, sig));
    }
    for (const auto& f : s2) {
        c2.push_back(compile_formula(f, sig));
    }
    // Raw engine draws keep the sampling deterministic across platforms.
    std::mt19937_64 rng(seed);
    Scratch scratch;
    World w;
    for (int t = 0; t < trials; ++t) {
        int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_domain));
        w.reset(sig, n);
        for (auto& mask : w.classes) {
            mask = rng() & full_mask(n);
        }
        for (auto& rel : w.props) {
            rel = rng() & full_rel(n);
        }
        for (auto& e : w.inds) {
            e = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        }
        bool e1 = all_hold(c1, w, scratch);
        bool e2 = all_hold(c2, w, scratch);
        if (e1 != e2) {
            std::string detail =
                "trial " + std::to_string(t) + ": " +
                (e1 ? "entails the first set but not " + first_failing(s2, c2, w, scratch)
                    : "entails the second set but not " + first_failing(s1, c1, w, scratch));
            return Counterexample{to_interpretation(w, sig), std::move(detail)};
        }
    }
    return std::nullopt;
}

}  // namespace rowl::oracle
