#pragma once

// Rule-to-axiom rewriting.  A preprocessed rule is driven to a fixpoint of
// three body/head rewrites (self-restriction introduction, conjunction
// merging, and roll-up of private variables), the fixpoint is classified as a
// class inclusion, a property-chain pattern, or neither, and the recognized
// shapes are emitted as annotated axioms.  Chain emission mints "rolification"
// helper properties through a registry so that repeated translations reuse
// names consistently.  A final utility inspects emitted chain axioms for
// circular property dependencies.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rowl/model.hpp"
#include "rowl/preprocess.hpp"

namespace rowl {

// ── The rewriting system ─────────────────────────────────────────────────────

enum class DeltaStepKind {
    SelfIntro,   // R(x,x)  ⇒  (∃R.Self)(x), in body and head
    ConjMerge,   // {C1(y), …, Cn(y)} in the body  ⇒  ((C1 ⊓ … ⊓ Cn))(y)
    RollUp,      // private y in one binary atom R(z,y) [+ C(y)]  ⇒  (∃R.C)(z)
};

std::string to_string(DeltaStepKind kind);

struct DeltaStep {
    Rule before;
    DeltaStepKind transformation;
    Rule after;
};

struct DeltaTrace {
    std::vector<DeltaStep> steps;
};

struct DeltaResult {
    Rule rule;  // the fixpoint
    DeltaTrace trace;
};

// Rewrites `rule` until none of the three transformations applies.  The step
// order is deterministic: all self-restriction introductions at once, then all
// conjunction merges at once, then a single roll-up of the lexicographically
// smallest eligible variable; repeat.  Roll-up is attempted only when the
// other two are exhausted, and each recorded step shows the whole rule before
// and after.
//
// The rule must be in pipeline normal form (one head atom, no individual
// arguments, connected body); anything else throws std::invalid_argument.
DeltaResult delta(const Rule& rule);

// ── Shape recognition ────────────────────────────────────────────────────────

// Fixpoint of the form C(x) → D(x).
struct ClassInclusionShape {
    ClassExpression sub;
    ClassExpression sup;
};

// Fixpoint whose body is one simple path between the head variables.  The
// path visits nodes[0] … nodes[k]; edges[i] connects nodes[i] to nodes[i+1]
// and is stored as traversed, so an atom walked object-to-subject appears
// inverted.  node_classes[i] is the class atom sitting on nodes[i], if any.
struct ChainShape {
    PropertyExpression super;                            // the head property
    std::vector<Term> nodes;                             // head subject … head object
    std::vector<PropertyExpression> edges;               // size: nodes.size() - 1
    std::vector<std::optional<ClassExpression>> node_classes;  // size: nodes.size()
};

struct UntranslatableShape {
    std::string reason;
};

using Shape = std::variant<ClassInclusionShape, ChainShape, UntranslatableShape>;

// Classifies a rewriting fixpoint.  Rules that fit neither supported form
// come back as UntranslatableShape with a human-readable reason; this
// function never throws on well-formed rules.
Shape recognize_shape(const Rule& rule);

// ── Fresh helper properties ──────────────────────────────────────────────────

// Hands out property names "R1", "R2", … for rolified class expressions.
// A given class expression always maps to the same name within one registry's
// lifetime, and generated names never collide with names the registry has
// been told to avoid (typically the ambient signature).
class FreshPropertyRegistry {
public:
    FreshPropertyRegistry() = default;
    explicit FreshPropertyRegistry(std::string prefix);

    // Starts the counter one past the highest existing "<prefix><digits>"
    // property in `signature` and avoids every property name in it.
    static FreshPropertyRegistry seeded_from(const Signature& signature,
                                             std::string prefix = "R");

    // Never hand out `name`; existing assignments are unaffected.
    void avoid(const EntityName& name);

    // The memoized name for `rolified`, minting a new one on first sight.
    EntityName name_for(const ClassExpression& rolified);

    // Assignments in creation order.
    const std::vector<std::pair<ClassExpression, EntityName>>& assignments() const noexcept {
        return assignments_;
    }

    const std::string& prefix() const noexcept { return prefix_; }
    std::size_t next_index() const noexcept { return next_index_; }

private:
    std::string prefix_ = "R";
    std::size_t next_index_ = 1;
    std::set<std::string> avoided_;
    std::map<std::string, EntityName> by_canonical_;
    std::vector<std::pair<ClassExpression, EntityName>> assignments_;
};

// ── Axiom emission ───────────────────────────────────────────────────────────

// A class-inclusion fixpoint becomes the one obvious axiom.
std::vector<Axiom> emit_class_inclusion(const ClassInclusionShape& shape);

struct ChainEmission {
    std::vector<Axiom> axioms;
    // The helper property used at each classed node, with its class, in path
    // order.  Reused registry entries appear here too: every emission restates
    // the defining axiom for each helper it mentions.
    std::vector<std::pair<EntityName, ClassExpression>> rolified;
};

// A chain fixpoint becomes one defining axiom C ⊑ ∃R_C.Self per classed path
// node plus a property-chain inclusion that interleaves those helpers with
// the path's edges.  Nodes without a class atom contribute nothing at their
// position.
ChainEmission emit_chain(const ChainShape& shape, FreshPropertyRegistry& registry);

// ── End-to-end translation ───────────────────────────────────────────────────

struct AxiomsOutcome {
    std::vector<Axiom> axioms;
};

struct FallbackOutcome {
    std::string reason;
};

struct TranslationResult {
    Rule source_rule;
    std::variant<AxiomsOutcome, FallbackOutcome> outcome;
    std::vector<std::pair<EntityName, ClassExpression>> fresh_properties;
    PreprocessTrace preprocess_trace;
    DeltaTrace delta_trace;  // steps of every split rule, in split order
    std::vector<std::string> diagnostics;

    bool translated() const noexcept {
        return std::holds_alternative<AxiomsOutcome>(outcome);
    }
    const std::vector<Axiom>& axioms() const {
        return std::get<AxiomsOutcome>(outcome).axioms;
    }
    const std::string& fallback_reason() const {
        return std::get<FallbackOutcome>(outcome).reason;
    }
};

// Runs the whole pipeline on one source rule: normalize, rewrite each split
// to its fixpoint, classify, emit.  If any split fails classification the
// whole rule falls back (no axioms, registry untouched); otherwise every
// emitted axiom is annotated with the source rule's text.  `signature` is the
// ambient vocabulary; its property names are added to the registry's avoid
// set, as are the rule's own names.
TranslationResult translate(const Rule& rule, const Signature& signature,
                            FreshPropertyRegistry& registry);

// ── Property-hierarchy sanity ────────────────────────────────────────────────

struct RegularityViolation {
    std::vector<EntityName> cycle;  // properties along the cycle; front == back
    std::vector<Axiom> axioms;      // the chain axioms involved
    std::string description;
};

struct RegularityReport {
    std::vector<RegularityViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

// Flags circular dependencies among chain axioms.  Every named member of a
// chain depends on the axiom's super-property, except in the directly
// supported recursion patterns (S∘S ⊑ S, or a chain that starts xor ends
// with its own super).  Any cycle in that dependency graph is reported with
// a witness path and the contributing axioms.  The check is an approximation:
// it can flag hierarchies a full global check would admit, but a clean report
// means no cyclic chain dependencies at all.
RegularityReport check_regularity(const std::vector<Axiom>& axioms);

}  // namespace rowl
