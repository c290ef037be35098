// Core data model: entity names, terms, property/class expressions, atoms,
// rules, axioms and signatures.
//
// Everything here is an immutable value after construction.  Construction
// canonicalizes: conjunctions are flattened, deduplicated and sorted by a
// deterministic serialization; rule bodies and heads are duplicate-free
// atom sets in canonical order.  The rest of the pipeline relies on these
// invariants, so they are enforced in the factories rather than re-checked
// downstream.

#ifndef ROWL_MODEL_HPP
#define ROWL_MODEL_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rowl {

// ── EntityName ──────────────────────────────────────────────────────────────
// A name from one of the class / property / individual vocabularies.  The
// namespace is empty for the default namespace; the only namespaced names
// the toolchain itself produces live in "owl".

class EntityName {
public:
    EntityName() = default;
    explicit EntityName(std::string local_name, std::string ns = "");

    // owl:topObjectProperty, the universal property.  Surface token: `U`.
    static const EntityName& universal_property();
    // owl:Thing / owl:Nothing as names (the expression factories are the
    // usual way to get at top/bottom).
    static const EntityName& thing();
    static const EntityName& nothing();

    const std::string& local_name() const noexcept { return local_; }
    const std::string& ns() const noexcept { return ns_; }

    // "ns:local", or just "local" for the default namespace.
    std::string display() const;

    bool operator==(const EntityName&) const = default;
    auto operator<=>(const EntityName&) const = default;

private:
    std::string ns_;
    std::string local_;
};

// ── Term ────────────────────────────────────────────────────────────────────

enum class TermKind { Variable, Individual };

struct Term {
    TermKind kind = TermKind::Variable;
    EntityName name;

    static Term variable(std::string local_name);
    static Term individual(std::string local_name);
    static Term individual(EntityName name);

    bool is_variable() const noexcept { return kind == TermKind::Variable; }

    std::string display() const;  // "?x" for variables, "a" for individuals

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

// ── PropertyExpression ──────────────────────────────────────────────────────
// A named property, possibly inverted.  Double inversion cannot be
// represented: inverse() of an inverted expression is the base again.
// Inverting the universal property is the universal property.

class PropertyExpression {
public:
    PropertyExpression() = default;
    explicit PropertyExpression(EntityName base, bool inverted = false);

    static PropertyExpression universal();

    const EntityName& base() const noexcept { return base_; }
    bool inverted() const noexcept { return inverted_; }
    bool is_universal() const;

    PropertyExpression inverse() const;

    std::string display() const;  // "hasParent", "hasParent-", "U"

    bool operator==(const PropertyExpression&) const = default;
    auto operator<=>(const PropertyExpression&) const = default;

private:
    EntityName base_;
    bool inverted_ = false;
};

// ── ClassExpression ─────────────────────────────────────────────────────────
// The class-expression grammar: named class, top, bottom, nominal,
// conjunction, existential restriction and self restriction.
//
// The conjunction factory flattens directly nested conjunctions, drops top
// conjuncts, deduplicates, and sorts by canonical_string().  An empty list
// yields top and a singleton yields its sole element, so a Conjunction node
// always has >= 2 conjuncts.

class ClassExpression {
public:
    enum class Kind { Named, Top, Bottom, Nominal, Conjunction, Existential, SelfRestriction };

    ClassExpression() = default;  // top

    static ClassExpression named(EntityName name);
    static ClassExpression named(std::string local_name);
    static ClassExpression top();
    static ClassExpression bottom();
    static ClassExpression nominal(EntityName individual);
    static ClassExpression conjunction(std::vector<ClassExpression> conjuncts);
    static ClassExpression existential(PropertyExpression property, ClassExpression filler);
    static ClassExpression self_restriction(PropertyExpression property);

    Kind kind() const noexcept { return kind_; }

    // Named: the class name.  Nominal: the individual.
    const EntityName& name() const;
    // Existential / SelfRestriction only.
    const PropertyExpression& property() const;
    // Existential only.
    const ClassExpression& filler() const;
    // Conjunction only; canonically ordered.
    const std::vector<ClassExpression>& conjuncts() const;

    // Deterministic serialization; also the sort key for conjunct order.
    std::string canonical_string() const;

    bool operator==(const ClassExpression& other) const;
    bool operator!=(const ClassExpression& other) const { return !(*this == other); }
    bool operator<(const ClassExpression& other) const;

private:
    Kind kind_ = Kind::Top;
    EntityName name_;
    PropertyExpression property_;
    std::vector<ClassExpression> children_;  // conjuncts, or [filler]
};

// ── Atom ────────────────────────────────────────────────────────────────────
// C(t) or R(t, u).  The factories store arguments as given; use
// canonicalize_atom to re-orient inverted property atoms.

class Atom {
public:
    static Atom class_atom(ClassExpression expr, Term term);
    static Atom property_atom(PropertyExpression property, Term subject, Term object);

    bool is_class_atom() const noexcept { return is_class_; }

    // Class atoms.
    const ClassExpression& expr() const;
    const Term& term() const;
    // Property atoms.
    const PropertyExpression& property() const;
    const Term& subject() const;
    const Term& object() const;

    // All terms of the atom (one for class atoms, two for property atoms).
    std::vector<Term> terms() const;

    std::string canonical_string() const;

    bool operator==(const Atom& other) const;
    bool operator!=(const Atom& other) const { return !(*this == other); }
    bool operator<(const Atom& other) const;

private:
    Atom() = default;
    bool is_class_ = true;
    ClassExpression expr_;
    PropertyExpression property_;
    std::vector<Term> terms_;
};

// Re-orient an inverted property atom onto its base property (R-(u, t)
// becomes R(t, u)).  Class atoms come back unchanged; idempotent.
Atom canonicalize_atom(const Atom& atom);

// ── Rule ────────────────────────────────────────────────────────────────────
// body -> head over duplicate-free canonically ordered atom sets.  The
// constructor canonicalizes every atom, sorts, deduplicates and checks the
// invariants: both sides non-empty and every head variable occurs in the
// body.  Violations throw std::invalid_argument.

class Rule {
public:
    Rule(std::string name, std::vector<Atom> body, std::vector<Atom> head,
         std::optional<std::string> annotation = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Atom>& body() const noexcept { return body_; }
    const std::vector<Atom>& head() const noexcept { return head_; }
    const std::optional<std::string>& annotation() const noexcept { return annotation_; }

    Rule with_name(std::string name) const;

    // Variables of the body / of the whole rule, sorted by name.
    std::vector<Term> body_variables() const;
    std::vector<Term> variables() const;

    // Same body and head; ignores name and annotation.
    bool same_formula(const Rule& other) const;

    bool operator==(const Rule&) const = default;

private:
    std::string name_;
    std::vector<Atom> body_;
    std::vector<Atom> head_;
    std::optional<std::string> annotation_;
};

// ── Axiom ───────────────────────────────────────────────────────────────────
// C ⊑ D, or R1 ∘ ... ∘ Rn ⊑ S.  The chain super is kept as a property
// expression for generality; everything this toolchain emits uses a named,
// non-inverted super.

class Axiom {
public:
    enum class Kind { SubClassOf, SubPropertyChainOf };

    static Axiom subclass_of(ClassExpression sub, ClassExpression sup,
                             std::optional<std::string> annotation = std::nullopt);
    static Axiom subproperty_chain_of(std::vector<PropertyExpression> chain,
                                      PropertyExpression super,
                                      std::optional<std::string> annotation = std::nullopt);

    Kind kind() const noexcept { return kind_; }

    const ClassExpression& sub() const;
    const ClassExpression& sup() const;
    const std::vector<PropertyExpression>& chain() const;
    const PropertyExpression& super() const;

    const std::optional<std::string>& annotation() const noexcept { return annotation_; }
    Axiom with_annotation(std::optional<std::string> annotation) const;
    Axiom without_annotation() const { return with_annotation(std::nullopt); }

    // Serialization of the logical content; annotations are not part of it.
    std::string canonical_string() const;

    // Structural equality including the annotation.
    bool operator==(const Axiom& other) const;
    bool operator!=(const Axiom& other) const { return !(*this == other); }
    bool operator<(const Axiom& other) const;

private:
    Axiom() = default;
    Kind kind_ = Kind::SubClassOf;
    ClassExpression sub_, sup_;
    std::vector<PropertyExpression> chain_;
    PropertyExpression super_;
    std::optional<std::string> annotation_;
};

// ── Signature ───────────────────────────────────────────────────────────────
// Tool-scope vocabularies.  The three sets are pairwise disjoint; declaring
// a name in a second kind throws std::invalid_argument.

class Signature {
public:
    void add_class(EntityName name);
    void add_property(EntityName name);
    void add_individual(EntityName name);

    bool has_class(const EntityName& name) const;
    bool has_property(const EntityName& name) const;
    bool has_individual(const EntityName& name) const;
    bool has_any(const EntityName& name) const;

    const std::set<EntityName>& classes() const noexcept { return classes_; }
    const std::set<EntityName>& properties() const noexcept { return properties_; }
    const std::set<EntityName>& individuals() const noexcept { return individuals_; }

    void merge(const Signature& other);
    bool empty() const;

    bool operator==(const Signature&) const = default;

private:
    std::set<EntityName> classes_;
    std::set<EntityName> properties_;
    std::set<EntityName> individuals_;
};

// ── Free operations ─────────────────────────────────────────────────────────

// True iff t and u are connected in the body: some sequence of terms with
// consecutive elements co-occurring in one atom.  Reflexive.  Throws
// std::invalid_argument when a term does not occur in the body.
bool connected(const Term& t, const Term& u, const std::vector<Atom>& body);

// All class, property-base and individual names occurring in the rule /
// axiom.  Top and bottom are logical constants and not reported; the
// universal property is reported when used.
Signature rule_signature(const Rule& rule);
Signature axiom_signature(const Axiom& axiom);
Signature class_expression_signature(const ClassExpression& expr);

// Set equality after applying `renaming` to property base names of `a` and
// stripping annotations.  Conjunct order and atom orientation are already
// canonical, so plain canonical-set comparison remains.
bool axioms_equal_modulo(const std::vector<Axiom>& a, const std::vector<Axiom>& b,
                         const std::map<EntityName, EntityName>& renaming);

// Renaming applied to one axiom (property base names only).
Axiom rename_properties(const Axiom& axiom, const std::map<EntityName, EntityName>& renaming);

}  // namespace rowl

#endif  // ROWL_MODEL_HPP
