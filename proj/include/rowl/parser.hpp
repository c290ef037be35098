#pragma once

#include <string>
#include <variant>

#include "rowl/model.hpp"

namespace rowl {

// ── Parsing the rule surface syntax ─────────────────────────────────────────
// Grammar, with whitespace insignificant around the punctuation:
//
//   rule  :=  atoms "->" atoms
//   atoms :=  atom ("^" atom)*
//   atom  :=  name "(" term ("," term)? ")"
//   term  :=  "?" name | name            -- variable | individual
//
// Predicate position accepts named classes and properties only; `U` (and
// `owl:topObjectProperty`) is the universal property, `owl:Thing` and
// `owl:Nothing` the builtin classes.  With auto-declaration on, unknown
// unary predicates become classes, unknown binary predicates become
// properties, and unknown argument names become individuals; with it off,
// any unknown name is an error.

struct SourcePosition {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    bool operator==(const SourcePosition&) const = default;
};

enum class ParseErrorKind {
    UnexpectedToken,
    ArityMismatch,
    EmptyBody,
    EmptyHead,
    UnknownPredicate,
    HeadVariableNotInBody,
    SignatureKindConflict,
};

struct ParseError {
    ParseErrorKind kind = ParseErrorKind::UnexpectedToken;
    std::string message;
    SourcePosition position;
};

struct ParsedRule {
    Rule rule;
    // Names newly declared while parsing (empty unless auto_declare).
    Signature additions;
};

using ParseResult = std::variant<ParsedRule, ParseError>;

ParseResult parse_rule(const std::string& text, const Signature& signature, bool auto_declare,
                       const std::string& rule_name = "rule");

// Inverse of parse_rule for rules within the surface syntax: atoms joined
// with " ^ ", sides with " -> ", variables as "?x", individuals bare.
// Rules carrying complex class expressions (which no surface text produces)
// render them in Manchester style, parenthesized in predicate position.
std::string render_rule(const Rule& rule);

const char* to_string(ParseErrorKind kind);

}  // namespace rowl
