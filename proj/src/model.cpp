#include "rowl/model.hpp"

#include <algorithm>
#include <sstream>

namespace rowl {

namespace {

const std::string kReservedTokens[] = {"^", "->", "(", ")", ",", "?"};

void validate_local_name(const std::string& local) {
    if (local.empty()) {
        throw std::invalid_argument("entity name must be non-empty");
    }
    for (char c : local) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            throw std::invalid_argument("entity name '" + local + "' contains whitespace");
        }
    }
    for (const auto& tok : kReservedTokens) {
        if (local.find(tok) != std::string::npos) {
            throw std::invalid_argument("entity name '" + local + "' contains reserved token '" +
                                        tok + "'");
        }
    }
}

}  // namespace

// ── EntityName ──────────────────────────────────────────────────────────────

EntityName::EntityName(std::string local_name, std::string ns)
    : ns_(std::move(ns)), local_(std::move(local_name)) {
    validate_local_name(local_);
}

const EntityName& EntityName::universal_property() {
    static const EntityName u("topObjectProperty", "owl");
    return u;
}

const EntityName& EntityName::thing() {
    static const EntityName t("Thing", "owl");
    return t;
}

const EntityName& EntityName::nothing() {
    static const EntityName n("Nothing", "owl");
    return n;
}

std::string EntityName::display() const {
    return ns_.empty() ? local_ : ns_ + ":" + local_;
}

// ── Term ────────────────────────────────────────────────────────────────────

Term Term::variable(std::string local_name) {
    return Term{TermKind::Variable, EntityName(std::move(local_name))};
}

Term Term::individual(std::string local_name) {
    return Term{TermKind::Individual, EntityName(std::move(local_name))};
}

Term Term::individual(EntityName name) {
    return Term{TermKind::Individual, std::move(name)};
}

std::string Term::display() const {
    return is_variable() ? "?" + name.display() : name.display();
}

// ── PropertyExpression ──────────────────────────────────────────────────────

PropertyExpression::PropertyExpression(EntityName base, bool inverted)
    : base_(std::move(base)), inverted_(inverted) {
    if (is_universal()) {
        inverted_ = false;  // U is symmetric; U- is identified with U
    }
}

PropertyExpression PropertyExpression::universal() {
    return PropertyExpression(EntityName::universal_property());
}

bool PropertyExpression::is_universal() const {
    return base_ == EntityName::universal_property();
}

PropertyExpression PropertyExpression::inverse() const {
    if (is_universal()) {
        return *this;
    }
    return PropertyExpression(base_, !inverted_);
}

std::string PropertyExpression::display() const {
    std::string s = is_universal() ? "U" : base_.display();
    if (inverted_) {
        s += "-";
    }
    return s;
}

// ── ClassExpression ─────────────────────────────────────────────────────────

ClassExpression ClassExpression::named(EntityName name) {
    if (name == EntityName::thing()) {
        return top();
    }
    if (name == EntityName::nothing()) {
        return bottom();
    }
    ClassExpression e;
    e.kind_ = Kind::Named;
    e.name_ = std::move(name);
    return e;
}

ClassExpression ClassExpression::named(std::string local_name) {
    return named(EntityName(std::move(local_name)));
}

ClassExpression ClassExpression::top() {
    ClassExpression e;
    e.kind_ = Kind::Top;
    return e;
}

ClassExpression ClassExpression::bottom() {
    ClassExpression e;
    e.kind_ = Kind::Bottom;
    return e;
}

ClassExpression ClassExpression::nominal(EntityName individual) {
    ClassExpression e;
    e.kind_ = Kind::Nominal;
    e.name_ = std::move(individual);
    return e;
}

ClassExpression ClassExpression::conjunction(std::vector<ClassExpression> conjuncts) {
    std::vector<ClassExpression> flat;
    for (auto& c : conjuncts) {
        if (c.kind_ == Kind::Conjunction) {
            // Directly nested conjunctions are flattened; their conjuncts are
            // already flat by construction.
            for (auto& inner : c.children_) {
                flat.push_back(std::move(inner));
            }
        } else if (c.kind_ == Kind::Top) {
            // top contributes nothing to an intersection
        } else {
            flat.push_back(std::move(c));
        }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) {
        return top();
    }
    if (flat.size() == 1) {
        return std::move(flat.front());
    }
    ClassExpression e;
    e.kind_ = Kind::Conjunction;
    e.children_ = std::move(flat);
    return e;
}

ClassExpression ClassExpression::existential(PropertyExpression property, ClassExpression filler) {
    ClassExpression e;
    e.kind_ = Kind::Existential;
    e.property_ = std::move(property);
    e.children_.push_back(std::move(filler));
    return e;
}

ClassExpression ClassExpression::self_restriction(PropertyExpression property) {
    ClassExpression e;
    e.kind_ = Kind::SelfRestriction;
    e.property_ = std::move(property);
    return e;
}

const EntityName& ClassExpression::name() const {
    if (kind_ != Kind::Named && kind_ != Kind::Nominal) {
        throw std::logic_error("class expression has no name");
    }
    return name_;
}

const PropertyExpression& ClassExpression::property() const {
    if (kind_ != Kind::Existential && kind_ != Kind::SelfRestriction) {
        throw std::logic_error("class expression has no property");
    }
    return property_;
}

const ClassExpression& ClassExpression::filler() const {
    if (kind_ != Kind::Existential) {
        throw std::logic_error("class expression has no filler");
    }
    return children_.front();
}

const std::vector<ClassExpression>& ClassExpression::conjuncts() const {
    if (kind_ != Kind::Conjunction) {
        throw std::logic_error("class expression is not a conjunction");
    }
    return children_;
}

std::string ClassExpression::canonical_string() const {
    switch (kind_) {
        case Kind::Top:
            return "(top)";
        case Kind::Bottom:
            return "(bottom)";
        case Kind::Named:
            return "(class " + name_.display() + ")";
        case Kind::Nominal:
            return "(nominal " + name_.display() + ")";
        case Kind::Conjunction: {
            std::string s = "(and";
            for (const auto& c : children_) {
                s += " " + c.canonical_string();
            }
            return s + ")";
        }
        case Kind::Existential:
            return "(some " + property_.display() + " " + children_.front().canonical_string() +
                   ")";
        case Kind::SelfRestriction:
            return "(self " + property_.display() + ")";
    }
    return "";
}

bool ClassExpression::operator==(const ClassExpression& other) const {
    return kind_ == other.kind_ && name_ == other.name_ && property_ == other.property_ &&
           children_ == other.children_;
}

bool ClassExpression::operator<(const ClassExpression& other) const {
    return canonical_string() < other.canonical_string();
}

// ── Atom ────────────────────────────────────────────────────────────────────

Atom Atom::class_atom(ClassExpression expr, Term term) {
    Atom a;
    a.is_class_ = true;
    a.expr_ = std::move(expr);
    a.terms_ = {std::move(term)};
    return a;
}

Atom Atom::property_atom(PropertyExpression property, Term subject, Term object) {
    Atom a;
    a.is_class_ = false;
    a.property_ = std::move(property);
    a.terms_ = {std::move(subject), std::move(object)};
    return a;
}

const ClassExpression& Atom::expr() const {
    if (!is_class_) {
        throw std::logic_error("property atom has no class expression");
    }
    return expr_;
}

const Term& Atom::term() const {
    if (!is_class_) {
        throw std::logic_error("property atom has two terms; use subject()/object()");
    }
    return terms_.front();
}

const PropertyExpression& Atom::property() const {
    if (is_class_) {
        throw std::logic_error("class atom has no property");
    }
    return property_;
}

const Term& Atom::subject() const {
    if (is_class_) {
        throw std::logic_error("class atom has no subject");
    }
    return terms_[0];
}

const Term& Atom::object() const {
    if (is_class_) {
        throw std::logic_error("class atom has no object");
    }
    return terms_[1];
}

std::vector<Term> Atom::terms() const {
    return terms_;
}

std::string Atom::canonical_string() const {
    if (is_class_) {
        return "(c " + expr_.canonical_string() + " " + terms_[0].display() + ")";
    }
    return "(p " + property_.display() + " " + terms_[0].display() + " " + terms_[1].display() +
           ")";
}

bool Atom::operator==(const Atom& other) const {
    return is_class_ == other.is_class_ && expr_ == other.expr_ &&
           property_ == other.property_ && terms_ == other.terms_;
}

bool Atom::operator<(const Atom& other) const {
    return canonical_string() < other.canonical_string();
}

Atom canonicalize_atom(const Atom& atom) {
    if (atom.is_class_atom()) {
        return atom;
    }
    if (atom.property().inverted()) {
        return Atom::property_atom(atom.property().inverse(), atom.object(), atom.subject());
    }
    return atom;
}

// ── Rule ────────────────────────────────────────────────────────────────────

namespace {

std::vector<Atom> canonical_atom_set(std::vector<Atom> atoms) {
    for (auto& a : atoms) {
        a = canonicalize_atom(a);
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

void collect_variables(const std::vector<Atom>& atoms, std::set<Term>& out) {
    for (const auto& a : atoms) {
        for (const auto& t : a.terms()) {
            if (t.is_variable()) {
                out.insert(t);
            }
        }
    }
}

}  // namespace

Rule::Rule(std::string name, std::vector<Atom> body, std::vector<Atom> head,
           std::optional<std::string> annotation)
    : name_(std::move(name)),
      body_(canonical_atom_set(std::move(body))),
      head_(canonical_atom_set(std::move(head))),
      annotation_(std::move(annotation)) {
    if (body_.empty()) {
        throw std::invalid_argument("rule '" + name_ + "' has an empty body");
    }
    if (head_.empty()) {
        throw std::invalid_argument("rule '" + name_ + "' has an empty head");
    }
    std::set<Term> body_vars, head_vars;
    collect_variables(body_, body_vars);
    collect_variables(head_, head_vars);
    for (const auto& v : head_vars) {
        if (!body_vars.count(v)) {
            throw std::invalid_argument("rule '" + name_ + "': head variable " + v.display() +
                                        " does not occur in the body");
        }
    }
}

Rule Rule::with_name(std::string name) const {
    Rule r = *this;
    r.name_ = std::move(name);
    return r;
}

std::vector<Term> Rule::body_variables() const {
    std::set<Term> vars;
    collect_variables(body_, vars);
    return {vars.begin(), vars.end()};
}

std::vector<Term> Rule::variables() const {
    std::set<Term> vars;
    collect_variables(body_, vars);
    collect_variables(head_, vars);
    return {vars.begin(), vars.end()};
}

bool Rule::same_formula(const Rule& other) const {
    return body_ == other.body_ && head_ == other.head_;
}

// ── Axiom ───────────────────────────────────────────────────────────────────

Axiom Axiom::subclass_of(ClassExpression sub, ClassExpression sup,
                         std::optional<std::string> annotation) {
    Axiom a;
    a.kind_ = Kind::SubClassOf;
    a.sub_ = std::move(sub);
    a.sup_ = std::move(sup);
    a.annotation_ = std::move(annotation);
    return a;
}

Axiom Axiom::subproperty_chain_of(std::vector<PropertyExpression> chain,
                                  PropertyExpression super,
                                  std::optional<std::string> annotation) {
    if (chain.empty()) {
        throw std::invalid_argument("property chain must not be empty");
    }
    Axiom a;
    a.kind_ = Kind::SubPropertyChainOf;
    a.chain_ = std::move(chain);
    a.super_ = std::move(super);
    a.annotation_ = std::move(annotation);
    return a;
}

const ClassExpression& Axiom::sub() const {
    if (kind_ != Kind::SubClassOf) {
        throw std::logic_error("not a SubClassOf axiom");
    }
    return sub_;
}

const ClassExpression& Axiom::sup() const {
    if (kind_ != Kind::SubClassOf) {
        throw std::logic_error("not a SubClassOf axiom");
    }
    return sup_;
}

const std::vector<PropertyExpression>& Axiom::chain() const {
    if (kind_ != Kind::SubPropertyChainOf) {
        throw std::logic_error("not a SubPropertyChainOf axiom");
    }
    return chain_;
}

const PropertyExpression& Axiom::super() const {
    if (kind_ != Kind::SubPropertyChainOf) {
        throw std::logic_error("not a SubPropertyChainOf axiom");
    }
    return super_;
}

Axiom Axiom::with_annotation(std::optional<std::string> annotation) const {
    Axiom a = *this;
    a.annotation_ = std::move(annotation);
    return a;
}

std::string Axiom::canonical_string() const {
    if (kind_ == Kind::SubClassOf) {
        return "(sub " + sub_.canonical_string() + " " + sup_.canonical_string() + ")";
    }
    std::string s = "(chain";
    for (const auto& p : chain_) {
        s += " " + p.display();
    }
    return s + " -> " + super_.display() + ")";
}

bool Axiom::operator==(const Axiom& other) const {
    return kind_ == other.kind_ && sub_ == other.sub_ && sup_ == other.sup_ &&
           chain_ == other.chain_ && super_ == other.super_ && annotation_ == other.annotation_;
}

bool Axiom::operator<(const Axiom& other) const {
    return canonical_string() < other.canonical_string();
}

// ── Signature ───────────────────────────────────────────────────────────────

void Signature::add_class(EntityName name) {
    if (properties_.count(name) || individuals_.count(name)) {
        throw std::invalid_argument("declaration conflict: '" + name.display() +
                                    "' is already declared with a different kind");
    }
    classes_.insert(std::move(name));
}

void Signature::add_property(EntityName name) {
    if (classes_.count(name) || individuals_.count(name)) {
        throw std::invalid_argument("declaration conflict: '" + name.display() +
                                    "' is already declared with a different kind");
    }
    properties_.insert(std::move(name));
}

void Signature::add_individual(EntityName name) {
    if (classes_.count(name) || properties_.count(name)) {
        throw std::invalid_argument("declaration conflict: '" + name.display() +
                                    "' is already declared with a different kind");
    }
    individuals_.insert(std::move(name));
}

bool Signature::has_class(const EntityName& name) const { return classes_.count(name) != 0; }
bool Signature::has_property(const EntityName& name) const { return properties_.count(name) != 0; }
bool Signature::has_individual(const EntityName& name) const {
    return individuals_.count(name) != 0;
}

bool Signature::has_any(const EntityName& name) const {
    return has_class(name) || has_property(name) || has_individual(name);
}

void Signature::merge(const Signature& other) {
    for (const auto& n : other.classes_) add_class(n);
    for (const auto& n : other.properties_) add_property(n);
    for (const auto& n : other.individuals_) add_individual(n);
}

bool Signature::empty() const {
    return classes_.empty() && properties_.empty() && individuals_.empty();
}

// ── Free operations ─────────────────────────────────────────────────────────

bool connected(const Term& t, const Term& u, const std::vector<Atom>& body) {
    std::set<Term> all_terms;
    for (const auto& a : body) {
        for (const auto& term : a.terms()) {
            all_terms.insert(term);
        }
    }
    if (!all_terms.count(t)) {
        throw std::invalid_argument("term " + t.display() + " does not occur in the body");
    }
    if (!all_terms.count(u)) {
        throw std::invalid_argument("term " + u.display() + " does not occur in the body");
    }
    // Breadth-first closure under "co-occurs in one atom".
    std::set<Term> reached{t};
    std::vector<Term> frontier{t};
    while (!frontier.empty()) {
        Term cur = frontier.back();
        frontier.pop_back();
        for (const auto& a : body) {
            auto terms = a.terms();
            bool touches = std::find(terms.begin(), terms.end(), cur) != terms.end();
            if (!touches) {
                continue;
            }
            for (const auto& next : terms) {
                if (reached.insert(next).second) {
                    frontier.push_back(next);
                }
            }
        }
    }
    return reached.count(u) != 0;
}

namespace {

void collect_expr_names(const ClassExpression& expr, Signature& sig);

void collect_property_name(const PropertyExpression& p, Signature& sig) {
    sig.add_property(p.base());
}

void collect_expr_names(const ClassExpression& expr, Signature& sig) {
    switch (expr.kind()) {
        case ClassExpression::Kind::Top:
        case ClassExpression::Kind::Bottom:
            break;
        case ClassExpression::Kind::Named:
            sig.add_class(expr.name());
            break;
        case ClassExpression::Kind::Nominal:
            sig.add_individual(expr.name());
            break;
        case ClassExpression::Kind::Conjunction:
            for (const auto& c : expr.conjuncts()) {
                collect_expr_names(c, sig);
            }
            break;
        case ClassExpression::Kind::Existential:
            collect_property_name(expr.property(), sig);
            collect_expr_names(expr.filler(), sig);
            break;
        case ClassExpression::Kind::SelfRestriction:
            collect_property_name(expr.property(), sig);
            break;
    }
}

void collect_atom_names(const Atom& atom, Signature& sig) {
    if (atom.is_class_atom()) {
        collect_expr_names(atom.expr(), sig);
    } else {
        collect_property_name(atom.property(), sig);
    }
    for (const auto& t : atom.terms()) {
        if (!t.is_variable()) {
            sig.add_individual(t.name);
        }
    }
}

}  // namespace

Signature rule_signature(const Rule& rule) {
    Signature sig;
    for (const auto& a : rule.body()) collect_atom_names(a, sig);
    for (const auto& a : rule.head()) collect_atom_names(a, sig);
    return sig;
}

Signature axiom_signature(const Axiom& axiom) {
    Signature sig;
    if (axiom.kind() == Axiom::Kind::SubClassOf) {
        collect_expr_names(axiom.sub(), sig);
        collect_expr_names(axiom.sup(), sig);
    } else {
        for (const auto& p : axiom.chain()) {
            collect_property_name(p, sig);
        }
        collect_property_name(axiom.super(), sig);
    }
    return sig;
}

Signature class_expression_signature(const ClassExpression& expr) {
    Signature sig;
    collect_expr_names(expr, sig);
    return sig;
}

namespace {

EntityName rename_name(const EntityName& name, const std::map<EntityName, EntityName>& renaming) {
    auto it = renaming.find(name);
    return it == renaming.end() ? name : it->second;
}

PropertyExpression rename_property(const PropertyExpression& p,
                                   const std::map<EntityName, EntityName>& renaming) {
    return PropertyExpression(rename_name(p.base(), renaming), p.inverted());
}

ClassExpression rename_expr(const ClassExpression& expr,
                            const std::map<EntityName, EntityName>& renaming) {
    using Kind = ClassExpression::Kind;
    switch (expr.kind()) {
        case Kind::Top:
        case Kind::Bottom:
        case Kind::Named:
        case Kind::Nominal:
            return expr;
        case Kind::Conjunction: {
            std::vector<ClassExpression> conjuncts;
            for (const auto& c : expr.conjuncts()) {
                conjuncts.push_back(rename_expr(c, renaming));
            }
            return ClassExpression::conjunction(std::move(conjuncts));
        }
        case Kind::Existential:
            return ClassExpression::existential(rename_property(expr.property(), renaming),
                                                rename_expr(expr.filler(), renaming));
        case Kind::SelfRestriction:
            return ClassExpression::self_restriction(rename_property(expr.property(), renaming));
    }
    return expr;
}

}  // namespace

Axiom rename_properties(const Axiom& axiom, const std::map<EntityName, EntityName>& renaming) {
    if (axiom.kind() == Axiom::Kind::SubClassOf) {
        return Axiom::subclass_of(rename_expr(axiom.sub(), renaming),
                                  rename_expr(axiom.sup(), renaming), axiom.annotation());
    }
    std::vector<PropertyExpression> chain;
    for (const auto& p : axiom.chain()) {
        chain.push_back(rename_property(p, renaming));
    }
    return Axiom::subproperty_chain_of(std::move(chain), rename_property(axiom.super(), renaming),
                                       axiom.annotation());
}

bool axioms_equal_modulo(const std::vector<Axiom>& a, const std::vector<Axiom>& b,
                         const std::map<EntityName, EntityName>& renaming) {
    std::set<std::string> left, right;
    for (const auto& ax : a) {
        left.insert(rename_properties(ax, renaming).canonical_string());
    }
    for (const auto& ax : b) {
        right.insert(ax.canonical_string());
    }
    return left == right;
}

}  // namespace rowl
