#include "rowl/preprocess.hpp"

#include <algorithm>

namespace rowl {

namespace {

std::optional<Term> smallest_body_variable(const Rule& rule) {
    auto vars = rule.body_variables();  // sorted
    if (vars.empty()) {
        return std::nullopt;
    }
    return vars.front();
}

ClassExpression nominal_of(const Term& t) { return ClassExpression::nominal(t.name); }

// The ground-atom encoding (∃U.(…))(anchor): satisfied by every element or
// by none, depending only on whether the bracketed class is non-empty.
Atom ground_encoding(ClassExpression inner, const Term& anchor) {
    return Atom::class_atom(
        ClassExpression::existential(PropertyExpression::universal(), std::move(inner)),
        anchor);
}

Atom eliminate_in_atom(const Atom& atom, const Term& anchor) {
    if (atom.is_class_atom()) {
        if (atom.term().is_variable()) {
            return atom;
        }
        // C(a) → (∃U.({a} ⊓ C))(anchor)
        return ground_encoding(
            ClassExpression::conjunction({nominal_of(atom.term()), atom.expr()}), anchor);
    }
    bool subj_var = atom.subject().is_variable();
    bool obj_var = atom.object().is_variable();
    if (subj_var && obj_var) {
        return atom;
    }
    if (subj_var) {
        // R(x, a) → (∃R.{a})(x)
        return Atom::class_atom(
            ClassExpression::existential(atom.property(), nominal_of(atom.object())),
            atom.subject());
    }
    if (obj_var) {
        // R(a, x) → (∃R⁻.{a})(x)
        return Atom::class_atom(
            ClassExpression::existential(atom.property().inverse(), nominal_of(atom.subject())),
            atom.object());
    }
    // R(a, b) → (∃U.({a} ⊓ ∃R.{b}))(anchor)
    return ground_encoding(
        ClassExpression::conjunction(
            {nominal_of(atom.subject()),
             ClassExpression::existential(atom.property(), nominal_of(atom.object()))}),
        anchor);
}

bool has_individual_argument(const Rule& rule) {
    for (const auto* side : {&rule.body(), &rule.head()}) {
        for (const auto& atom : *side) {
            for (const auto& t : atom.terms()) {
                if (!t.is_variable()) {
                    return true;
                }
            }
        }
    }
    return false;
}

}  // namespace

Rule eliminate_constants(const Rule& rule) {
    if (!has_individual_argument(rule)) {
        return rule;
    }
    Term anchor = Term::variable("x0");
    std::vector<Atom> body;
    auto smallest = smallest_body_variable(rule);
    if (smallest) {
        anchor = *smallest;
    } else {
        body.push_back(Atom::class_atom(ClassExpression::top(), anchor));
    }
    for (const auto& atom : rule.body()) {
        body.push_back(eliminate_in_atom(atom, anchor));
    }
    std::vector<Atom> head;
    for (const auto& atom : rule.head()) {
        head.push_back(eliminate_in_atom(atom, anchor));
    }
    return Rule(rule.name(), std::move(body), std::move(head), rule.annotation());
}

std::vector<Rule> split_head(const Rule& rule) {
    if (rule.head().size() == 1) {
        return {rule};
    }
    std::vector<Rule> out;
    int k = 1;
    for (const auto& atom : rule.head()) {
        out.push_back(Rule(rule.name() + "#" + std::to_string(k++), rule.body(), {atom},
                           rule.annotation()));
    }
    return out;
}

Rule connect_body(const Rule& rule) {
    if (rule.head().size() != 1) {
        throw std::invalid_argument("connect_body requires a single-atom head");
    }
    const Atom& head = rule.head().front();
    const Term& head_arg = head.is_class_atom() ? head.term() : head.subject();
    if (!head_arg.is_variable()) {
        throw std::invalid_argument("connect_body requires a constant-free head");
    }

    // Union-find over the body's variables, merged per atom.
    auto vars = rule.body_variables();
    auto root_of = [&](const Term& t) {
        return static_cast<int>(
            std::lower_bound(vars.begin(), vars.end(), t) - vars.begin());
    };
    std::vector<int> parent(vars.size());
    for (std::size_t i = 0; i < parent.size(); ++i) {
        parent[i] = static_cast<int>(i);
    }
    auto find = [&](int i) {
        while (parent[i] != i) {
            i = parent[i] = parent[parent[i]];
        }
        return i;
    };
    for (const auto& atom : rule.body()) {
        auto terms = atom.terms();
        for (std::size_t i = 1; i < terms.size(); ++i) {
            if (terms[0].is_variable() && terms[i].is_variable()) {
                parent[find(root_of(terms[0]))] = find(root_of(terms[i]));
            }
        }
    }

    int anchor_root = find(root_of(head_arg));
    std::vector<Atom> added;
    // vars is sorted, so the first variable seen per component is its
    // lexicographic representative.
    std::set<int> seen;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        int root = find(static_cast<int>(i));
        if (root == anchor_root || !seen.insert(root).second) {
            continue;
        }
        added.push_back(
            Atom::property_atom(PropertyExpression::universal(), head_arg, vars[i]));
    }
    if (added.empty()) {
        return rule;
    }
    std::vector<Atom> body = rule.body();
    body.insert(body.end(), added.begin(), added.end());
    return Rule(rule.name(), std::move(body), rule.head(), rule.annotation());
}

PreprocessResult preprocess(const Rule& rule) {
    PreprocessResult out;
    Rule constant_free = eliminate_constants(rule);
    if (!constant_free.same_formula(rule)) {
        out.trace.steps.push_back(
            {PreprocessStepKind::ConstantElimination, rule, {constant_free}});
    }
    auto splits = split_head(constant_free);
    if (splits.size() > 1) {
        out.trace.steps.push_back({PreprocessStepKind::HeadSplit, constant_free, splits});
    }
    for (const auto& split : splits) {
        Rule connected_rule = connect_body(split);
        if (!connected_rule.same_formula(split)) {
            out.trace.steps.push_back(
                {PreprocessStepKind::ConnectivityPatch, split, {connected_rule}});
        }
        out.rules.push_back(std::move(connected_rule));
    }
    return out;
}

const char* to_string(PreprocessStepKind kind) {
    switch (kind) {
        case PreprocessStepKind::ConstantElimination: return "ConstantElimination";
        case PreprocessStepKind::HeadSplit: return "HeadSplit";
        case PreprocessStepKind::ConnectivityPatch: return "ConnectivityPatch";
    }
    return "";
}

}  // namespace rowl
