#pragma once

#include <vector>

#include "rowl/model.hpp"

namespace rowl {

// ── Rule normalization ──────────────────────────────────────────────────────
// Rewrites a rule to satisfy three assumptions with the minimum
// modifications: (1) no individual terms in atom argument positions,
// (2) a single-atom head, (3) a connected body.

enum class PreprocessStepKind { ConstantElimination, HeadSplit, ConnectivityPatch };

struct PreprocessStep {
    PreprocessStepKind kind;
    Rule before;
    std::vector<Rule> after;  // several rules for HeadSplit, one otherwise
};

struct PreprocessTrace {
    std::vector<PreprocessStep> steps;
};

// Rewrites individual terms out of argument positions (they survive only
// inside nominals): R(x, a) → (∃R.{a})(x); R(a, x) → (∃R⁻.{a})(x); ground
// R(a, b) → (∃U.({a} ⊓ ∃R.{b}))(anchor) and ground C(a) → (∃U.({a} ⊓ C))(anchor),
// where the anchor is the lexicographically smallest body variable; a rule
// without variables gets a fresh variable x0 plus the body atom owl:Thing(x0).
// Constant-free atoms are untouched.
Rule eliminate_constants(const Rule& rule);

// One rule per head atom, sharing the body; names are suffixed "#1", "#2", …
// when a split happens, and a single-head rule comes back as a singleton,
// unchanged.
std::vector<Rule> split_head(const Rule& rule);

// Links the connected components of the body's variable graph with
// universal-property atoms: the component holding the head's first argument
// anchors a star, each other component contributing one
// U(anchor, representative) atom with representatives chosen
// lexicographically — k components gain exactly k−1 atoms.  Requires a
// single-atom, constant-free head.
Rule connect_body(const Rule& rule);

struct PreprocessResult {
    std::vector<Rule> rules;
    PreprocessTrace trace;
};

// eliminate_constants, then split_head, then connect_body per split rule.
// Steps are recorded only when they change something; replaying them from
// the input reproduces the output set.
PreprocessResult preprocess(const Rule& rule);

const char* to_string(PreprocessStepKind kind);

}  // namespace rowl
