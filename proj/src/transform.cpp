#include "rowl/transform.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "rowl/parser.hpp"

namespace rowl {

namespace {

// Pipeline normal form: exactly one head atom, variables everywhere, and a
// body whose atoms all hang together.  preprocess() establishes this.
void require_normal_form(const Rule& rule) {
    if (rule.head().size() != 1) {
        throw std::invalid_argument("rule '" + rule.name() +
                                    "' has " + std::to_string(rule.head().size()) +
                                    " head atoms; expected exactly one");
    }
    for (const auto* side : {&rule.body(), &rule.head()}) {
        for (const auto& atom : *side) {
            for (const auto& t : atom.terms()) {
                if (!t.is_variable()) {
                    throw std::invalid_argument("rule '" + rule.name() +
                                                "' still mentions the individual " +
                                                t.display());
                }
            }
        }
    }
    auto vars = rule.body_variables();
    for (const auto& v : vars) {
        if (!connected(vars.front(), v, rule.body())) {
            throw std::invalid_argument("rule '" + rule.name() +
                                        "' has a disconnected body");
        }
    }
}

bool is_self_loop(const Atom& atom) {
    return !atom.is_class_atom() && atom.subject() == atom.object();
}

// Replaces every P(x,x) with (∃P.Self)(x) on one side of a rule.
std::vector<Atom> introduce_selfs(const std::vector<Atom>& atoms) {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const auto& atom : atoms) {
        if (is_self_loop(atom)) {
            out.push_back(Atom::class_atom(
                ClassExpression::self_restriction(atom.property()), atom.subject()));
        } else {
            out.push_back(atom);
        }
    }
    return out;
}

// Class atoms of the body, grouped by the variable they talk about.
std::map<Term, std::vector<ClassExpression>> class_atoms_by_variable(
    const std::vector<Atom>& body) {
    std::map<Term, std::vector<ClassExpression>> groups;
    for (const auto& atom : body) {
        if (atom.is_class_atom()) {
            groups[atom.term()].push_back(atom.expr());
        }
    }
    return groups;
}

}  // namespace

std::string to_string(DeltaStepKind kind) {
    switch (kind) {
        case DeltaStepKind::SelfIntro: return "SelfIntro";
        case DeltaStepKind::ConjMerge: return "ConjMerge";
        case DeltaStepKind::RollUp: return "RollUp";
    }
    return "?";
}

DeltaResult delta(const Rule& rule) {
    require_normal_form(rule);

    DeltaResult result{rule, {}};
    Rule& current = result.rule;

    auto record = [&](DeltaStepKind kind, Rule next) {
        result.trace.steps.push_back({current, kind, next});
        current = std::move(next);
    };

    for (;;) {
        // Self-restriction introduction, body and head at once.
        bool any_loop = false;
        for (const auto* side : {&current.body(), &current.head()}) {
            for (const auto& atom : *side) {
                any_loop |= is_self_loop(atom);
            }
        }
        if (any_loop) {
            record(DeltaStepKind::SelfIntro,
                   Rule(current.name(), introduce_selfs(current.body()),
                        introduce_selfs(current.head()), current.annotation()));
            continue;
        }

        // Conjunction merging: every variable with two or more class atoms
        // gets them fused into one, all in the same step.
        auto groups = class_atoms_by_variable(current.body());
        bool any_group = std::any_of(groups.begin(), groups.end(),
                                     [](const auto& g) { return g.second.size() > 1; });
        if (any_group) {
            std::vector<Atom> body;
            std::set<Term> merged;
            for (const auto& atom : current.body()) {
                if (!atom.is_class_atom()) {
                    body.push_back(atom);
                    continue;
                }
                const auto& group = groups.at(atom.term());
                if (group.size() == 1) {
                    body.push_back(atom);
                } else if (merged.insert(atom.term()).second) {
                    body.push_back(Atom::class_atom(ClassExpression::conjunction(group),
                                                    atom.term()));
                }
            }
            record(DeltaStepKind::ConjMerge,
                   Rule(current.name(), std::move(body), current.head(),
                        current.annotation()));
            continue;
        }

        // Roll-up: a variable that the head never mentions and exactly one
        // binary atom touches can be folded into a class expression on the
        // atom's other end.  One variable per step, smallest name first.
        std::set<Term> head_vars;
        for (const auto& atom : current.head()) {
            for (const auto& t : atom.terms()) {
                head_vars.insert(t);
            }
        }
        std::map<Term, int> binary_count;
        for (const auto& atom : current.body()) {
            if (!atom.is_class_atom()) {
                ++binary_count[atom.subject()];
                ++binary_count[atom.object()];
            }
        }
        std::optional<Term> target;
        for (const auto& v : current.body_variables()) {
            if (!head_vars.count(v) && binary_count[v] == 1) {
                target = v;
                break;  // body_variables() is sorted, so this is the smallest
            }
        }
        if (!target) {
            break;  // fixpoint
        }

        std::vector<Atom> body;
        std::optional<ClassExpression> filler;
        std::optional<PropertyExpression> towards_target;
        std::optional<Term> anchor;
        for (const auto& atom : current.body()) {
            if (atom.is_class_atom() && atom.term() == *target) {
                filler = atom.expr();
            } else if (!atom.is_class_atom() && atom.object() == *target) {
                towards_target = atom.property();
                anchor = atom.subject();
            } else if (!atom.is_class_atom() && atom.subject() == *target) {
                towards_target = atom.property().inverse();
                anchor = atom.object();
            } else {
                body.push_back(atom);
            }
        }
        body.push_back(Atom::class_atom(
            ClassExpression::existential(*towards_target,
                                         filler ? *filler : ClassExpression::top()),
            *anchor));
        record(DeltaStepKind::RollUp,
               Rule(current.name(), std::move(body), current.head(),
                    current.annotation()));
    }

    return result;
}

// ── Shape recognition ────────────────────────────────────────────────────────

namespace {

struct Edge {
    Term from, to;
    PropertyExpression property;  // as stored, oriented from `from` to `to`
};

// Depth-first search for a simple path from `at` to `goal` that uses every
// edge exactly once.  Edges may be walked backwards (the property is then
// inverted).  Returns true on success with the traversal appended to
// `nodes`/`edges_out`.
bool cover_path(const Term& at, const Term& goal, const std::vector<Edge>& edges,
                std::vector<bool>& used, std::set<Term>& visited,
                std::vector<Term>& nodes, std::vector<PropertyExpression>& edges_out) {
    if (at == goal) {
        return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (used[i]) {
            continue;
        }
        const auto& e = edges[i];
        Term next;
        PropertyExpression as_walked = e.property;
        if (e.from == at) {
            next = e.to;
        } else if (e.to == at) {
            next = e.from;
            as_walked = e.property.inverse();
        } else {
            continue;
        }
        if (visited.count(next)) {
            continue;
        }
        used[i] = true;
        visited.insert(next);
        nodes.push_back(next);
        edges_out.push_back(as_walked);
        if (cover_path(next, goal, edges, used, visited, nodes, edges_out)) {
            return true;
        }
        edges_out.pop_back();
        nodes.pop_back();
        visited.erase(next);
        used[i] = false;
    }
    return false;
}

// Why did the path search fail?  Checked in order of how specifically the
// structure can be blamed.
std::string diagnose_no_path(const std::vector<Edge>& edges,
                             const std::map<Term, std::vector<ClassExpression>>& classes,
                             const Term& start, const Term& goal) {
    for (const auto& e : edges) {
        if (e.from == e.to) {
            return "body has a self-loop on " + e.from.display();
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto &a = edges[i], &b = edges[j];
            bool same = (a.from == b.from && a.to == b.to) ||
                        (a.from == b.to && a.to == b.from);
            if (same) {
                return "body has parallel edges between " + a.from.display() + " and " +
                       a.to.display();
            }
        }
    }
    std::map<Term, int> degree;
    for (const auto& e : edges) {
        ++degree[e.from];
        ++degree[e.to];
    }
    for (const auto& [v, _] : classes) {
        if (!degree.count(v) && v != start && v != goal) {
            return "variable " + v.display() + " is not on any path between the head variables";
        }
    }
    std::set<Term> vertices;
    for (const auto& e : edges) {
        vertices.insert(e.from);
        vertices.insert(e.to);
    }
    if (edges.size() >= vertices.size()) {
        return "body has a cycle";
    }
    for (const auto& [v, d] : degree) {
        if (d > 2) {
            return "body branches at " + v.display();
        }
    }
    return "body binary atoms do not form one simple path between the head variables";
}

Shape recognize_property_head(const Rule& rule) {
    const Atom& head = rule.head().front();
    if (head.subject() == head.object()) {
        return UntranslatableShape{"head repeats " + head.subject().display() +
                                   " in both positions"};
    }

    std::vector<Edge> edges;
    auto classes = class_atoms_by_variable(rule.body());
    for (const auto& atom : rule.body()) {
        if (!atom.is_class_atom()) {
            edges.push_back({atom.subject(), atom.object(), atom.property()});
        }
    }
    for (const auto& [v, group] : classes) {
        if (group.size() > 1) {
            return UntranslatableShape{"variable " + v.display() +
                                       " carries several class atoms"};
        }
    }
    if (edges.empty()) {
        return UntranslatableShape{"no binary atom links the head variables"};
    }

    const Term& start = head.subject();
    const Term& goal = head.object();
    std::vector<bool> used(edges.size(), false);
    std::set<Term> visited{start};
    std::vector<Term> nodes{start};
    std::vector<PropertyExpression> walked;
    if (!cover_path(start, goal, edges, used, visited, nodes, walked)) {
        return UntranslatableShape{diagnose_no_path(edges, classes, start, goal)};
    }

    std::set<Term> on_path(nodes.begin(), nodes.end());
    for (const auto& [v, _] : classes) {
        if (!on_path.count(v)) {
            return UntranslatableShape{"class atom on " + v.display() +
                                       " sits off the path"};
        }
    }

    ChainShape shape;
    shape.super = head.property();
    shape.nodes = nodes;
    shape.edges = std::move(walked);
    for (const auto& v : nodes) {
        auto it = classes.find(v);
        shape.node_classes.push_back(
            it == classes.end() ? std::nullopt : std::optional(it->second.front()));
    }
    return shape;
}

}  // namespace

Shape recognize_shape(const Rule& rule) {
    if (rule.head().size() != 1) {
        return UntranslatableShape{"rule has several head atoms"};
    }
    const Atom& head = rule.head().front();

    if (!head.is_class_atom()) {
        return recognize_property_head(rule);
    }

    if (rule.body().size() == 1 && rule.body().front().is_class_atom()) {
        // Head variables come from the body, so the two atoms necessarily
        // talk about the same variable.
        return ClassInclusionShape{rule.body().front().expr(), head.expr()};
    }
    bool any_binary = std::any_of(rule.body().begin(), rule.body().end(),
                                  [](const Atom& a) { return !a.is_class_atom(); });
    if (any_binary) {
        // Every reducible variable would have been rolled up already, so what
        // remains is circular.
        return UntranslatableShape{"body has a cycle"};
    }
    return UntranslatableShape{"body does not reduce to a single class atom"};
}

// ── Fresh helper properties ──────────────────────────────────────────────────

FreshPropertyRegistry::FreshPropertyRegistry(std::string prefix)
    : prefix_(std::move(prefix)) {}

FreshPropertyRegistry FreshPropertyRegistry::seeded_from(const Signature& signature,
                                                         std::string prefix) {
    FreshPropertyRegistry registry(std::move(prefix));
    for (const auto& name : signature.properties()) {
        registry.avoid(name);
        const std::string full = name.display();
        if (full.size() <= registry.prefix_.size() ||
            full.compare(0, registry.prefix_.size(), registry.prefix_) != 0) {
            continue;
        }
        std::string digits = full.substr(registry.prefix_.size());
        if (!std::all_of(digits.begin(), digits.end(),
                         [](unsigned char c) { return std::isdigit(c); })) {
            continue;
        }
        std::size_t value = std::stoul(digits);
        registry.next_index_ = std::max(registry.next_index_, value + 1);
    }
    return registry;
}

void FreshPropertyRegistry::avoid(const EntityName& name) {
    avoided_.insert(name.display());
}

EntityName FreshPropertyRegistry::name_for(const ClassExpression& rolified) {
    auto key = rolified.canonical_string();
    auto it = by_canonical_.find(key);
    if (it != by_canonical_.end()) {
        return it->second;
    }
    std::string candidate;
    do {
        candidate = prefix_ + std::to_string(next_index_++);
    } while (avoided_.count(candidate));
    EntityName name(candidate);
    avoided_.insert(candidate);
    by_canonical_.emplace(std::move(key), name);
    assignments_.emplace_back(rolified, name);
    return name;
}

// ── Axiom emission ───────────────────────────────────────────────────────────

std::vector<Axiom> emit_class_inclusion(const ClassInclusionShape& shape) {
    return {Axiom::subclass_of(shape.sub, shape.sup)};
}

ChainEmission emit_chain(const ChainShape& shape, FreshPropertyRegistry& registry) {
    ChainEmission out;
    std::vector<PropertyExpression> chain;
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        if (shape.node_classes[i]) {
            const ClassExpression& cls = *shape.node_classes[i];
            EntityName helper = registry.name_for(cls);
            PropertyExpression helper_prop{helper};
            out.axioms.push_back(Axiom::subclass_of(
                cls, ClassExpression::self_restriction(helper_prop)));
            out.rolified.emplace_back(helper, cls);
            chain.push_back(helper_prop);
        }
        if (i < shape.edges.size()) {
            chain.push_back(shape.edges[i]);
        }
    }
    out.axioms.push_back(Axiom::subproperty_chain_of(std::move(chain), shape.super));
    return out;
}

// ── End-to-end translation ───────────────────────────────────────────────────

TranslationResult translate(const Rule& rule, const Signature& signature,
                            FreshPropertyRegistry& registry) {
    TranslationResult result{rule, AxiomsOutcome{}, {}, {}, {}, {}};

    auto pre = preprocess(rule);
    result.preprocess_trace = std::move(pre.trace);
    for (const auto& step : result.preprocess_trace.steps) {
        result.diagnostics.push_back(std::string(to_string(step.kind)) +
                                     " applied to rule '" + step.before.name() + "'");
    }

    // Classify everything before emitting anything, so a late failure cannot
    // leave half a rule's helpers in the registry.
    std::vector<Shape> shapes;
    std::vector<std::string> failures;
    for (const auto& split : pre.rules) {
        auto d = delta(split);
        for (auto& step : d.trace.steps) {
            result.delta_trace.steps.push_back(std::move(step));
        }
        shapes.push_back(recognize_shape(d.rule));
        if (const auto* u = std::get_if<UntranslatableShape>(&shapes.back())) {
            std::string where =
                pre.rules.size() > 1 ? "split rule '" + split.name() + "': " : "";
            failures.push_back(where + u->reason);
        }
    }
    if (!failures.empty()) {
        std::string reason = failures.front();
        for (std::size_t i = 1; i < failures.size(); ++i) {
            reason += "; " + failures[i];
        }
        result.outcome = FallbackOutcome{std::move(reason)};
        return result;
    }

    for (const auto& name : signature.properties()) {
        registry.avoid(name);
    }
    Signature own = rule_signature(rule);
    for (const auto& name : own.properties()) {
        registry.avoid(name);
    }

    std::string annotation = render_rule(rule);
    std::vector<Axiom> axioms;
    auto add = [&](Axiom axiom) {
        axiom = axiom.with_annotation(annotation);
        if (std::find(axioms.begin(), axioms.end(), axiom) == axioms.end()) {
            axioms.push_back(std::move(axiom));
        }
    };
    for (const auto& shape : shapes) {
        if (const auto* inclusion = std::get_if<ClassInclusionShape>(&shape)) {
            for (auto& axiom : emit_class_inclusion(*inclusion)) {
                add(std::move(axiom));
            }
        } else {
            auto emission = emit_chain(std::get<ChainShape>(shape), registry);
            for (auto& axiom : emission.axioms) {
                add(std::move(axiom));
            }
            for (auto& pair : emission.rolified) {
                if (std::find(result.fresh_properties.begin(),
                              result.fresh_properties.end(),
                              pair) == result.fresh_properties.end()) {
                    result.fresh_properties.push_back(std::move(pair));
                }
            }
        }
    }
    result.outcome = AxiomsOutcome{std::move(axioms)};
    return result;
}

// ── Property-hierarchy sanity ────────────────────────────────────────────────

RegularityReport check_regularity(const std::vector<Axiom>& axioms) {
    // Dependency graph over property names: each chain member must come
    // strictly before the super-property it helps define, except where OWL 2
    // allows a property to recur in its own chain (S∘S ⊑ S, or S leading xor
    // trailing its chain).
    std::map<EntityName, std::set<EntityName>> graph;
    std::map<std::pair<EntityName, EntityName>, std::vector<const Axiom*>> edge_axioms;
    for (const auto& axiom : axioms) {
        if (axiom.kind() != Axiom::Kind::SubPropertyChainOf) {
            continue;
        }
        const auto& chain = axiom.chain();
        const EntityName super = axiom.super().base();
        bool leads = chain.front().base() == super;
        bool trails = chain.back().base() == super;
        bool exempt_ends = (leads != trails) || (leads && trails && chain.size() <= 2);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const EntityName member = chain[i].base();
            bool at_end = i == 0 || i + 1 == chain.size();
            if (member == super && exempt_ends && at_end) {
                continue;
            }
            graph[member].insert(super);
            edge_axioms[{member, super}].push_back(&axiom);
        }
        graph.try_emplace(super);
    }

    // Tarjan's strongly connected components; any component with a cycle is
    // one violation.
    std::map<EntityName, int> index, low;
    std::map<EntityName, bool> on_stack;
    std::vector<EntityName> stack;
    std::vector<std::vector<EntityName>> cyclic_components;
    int counter = 0;
    std::function<void(const EntityName&)> strongconnect = [&](const EntityName& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const auto& w : graph[v]) {
            if (!index.count(w)) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<EntityName> component;
            for (;;) {
                EntityName w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(w);
                if (w == v) {
                    break;
                }
            }
            bool self_loop = component.size() == 1 && graph[v].count(v);
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                cyclic_components.push_back(std::move(component));
            }
        }
    };
    for (const auto& [v, _] : graph) {
        if (!index.count(v)) {
            strongconnect(v);
        }
    }

    RegularityReport report;
    for (const auto& component : cyclic_components) {
        RegularityViolation violation;
        std::set<EntityName> members(component.begin(), component.end());

        // Walk a concrete cycle from the smallest member, always taking the
        // smallest in-component successor; within an SCC this must loop.
        std::vector<EntityName> walk{component.front()};
        std::set<EntityName> seen{component.front()};
        for (;;) {
            const EntityName& at = walk.back();
            std::optional<EntityName> next;
            for (const auto& w : graph[at]) {
                if (members.count(w)) {
                    next = w;
                    break;
                }
            }
            walk.push_back(*next);
            if (seen.count(*next)) {
                break;
            }
            seen.insert(*next);
        }
        // Trim the lead-in so the walk starts and ends on the same name.
        auto loop_start = std::find(walk.begin(), walk.end() - 1, walk.back());
        violation.cycle.assign(loop_start, walk.end());

        std::set<const Axiom*> involved;
        for (std::size_t i = 0; i + 1 < violation.cycle.size(); ++i) {
            for (const Axiom* a : edge_axioms[{violation.cycle[i], violation.cycle[i + 1]}]) {
                involved.insert(a);
            }
        }
        for (const Axiom* a : involved) {
            violation.axioms.push_back(*a);
        }
        std::sort(violation.axioms.begin(), violation.axioms.end());

        std::string names = violation.cycle.front().display();
        for (std::size_t i = 1; i < violation.cycle.size(); ++i) {
            names += " -> " + violation.cycle[i].display();
        }
        violation.description = "property chain dependencies form a cycle: " + names;
        report.violations.push_back(std::move(violation));
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const RegularityViolation& a, const RegularityViolation& b) {
                  return a.cycle < b.cycle;
              });
    return report;
}

}  // namespace rowl
