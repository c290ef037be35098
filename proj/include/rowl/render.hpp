#pragma once

#include <string>

#include "rowl/model.hpp"
#include "rowl/transform.hpp"

namespace rowl {

// ── Output formats ──────────────────────────────────────────────────────────

enum class OutputFormat { ManchesterText, FunctionalText, StructuredReport };

// ── Manchester-style expression display ─────────────────────────────────────
// Grammar: `and`, `some`, `Self`, `inverse <P>`, `{a}`, `owl:Thing`,
// `owl:Nothing`; the universal property prints as `U`.  A top-level
// expression is bare; conjunctions, existentials and self restrictions
// nested inside another expression are parenthesized.

std::string manchester(const ClassExpression& expr);
std::string manchester(const PropertyExpression& property);

// ── Functional-style expression display ─────────────────────────────────────
// ObjectIntersectionOf / ObjectSomeValuesFrom / ObjectHasSelf /
// ObjectInverseOf / ObjectOneOf; the universal property prints as
// `owl:topObjectProperty`.

std::string functional(const ClassExpression& expr);
std::string functional(const PropertyExpression& property);

// ── Axioms and whole results ─────────────────────────────────────────────────

// One axiom, no annotation, no trailing newline.
//   ManchesterText:  "<C> SubClassOf <D>"
//                    "<P1> o <P2> o ... SubPropertyOf: <S>"
//   FunctionalText:  "SubClassOf(C D)"
//                    "SubObjectPropertyOf(ObjectPropertyChain(P1 ... Pn) S)"
// StructuredReport delegates to the functional text — that is the form the
// report format embeds.
std::string render_axiom(const Axiom& axiom, OutputFormat format);

// A whole translation.  The text formats print each axiom on its own line
// preceded by a comment line carrying its annotation ("# rule: <text>" in
// Manchester, `Annotation(rdfs:comment "<text>")` in functional); fallbacks
// print the source-rule comment line and a second comment line with the
// reason.  StructuredReport emits a JSON document (format_version 1) with the
// source rule, outcome, functional-text axioms, fresh properties, fallback
// reason, diagnostics, and any property-hierarchy violations among the
// emitted axioms.  Output always ends with a newline.
std::string render_result(const TranslationResult& result, OutputFormat format);

}  // namespace rowl
