#pragma once

// The built-in evaluation corpus: twelve rules with their hand-written axiom
// answer keys, plus one variant that reads the parent/female sentence from
// the child's side.  The runner translates each rule with a shared session
// (signature and helper-property registry accumulate in corpus order),
// compares the output against the key up to helper renaming, and verifies
// the semantic claim with the finite-model oracle.

#include <cstdint>
#include <string>
#include <vector>

#include "rowl/model.hpp"
#include "rowl/oracle.hpp"

namespace rowl::corpus {

enum class CheckKind {
    Equivalence,            // rule and axioms hold in exactly the same models
    ConservativeExtension,  // axioms with helper properties extend the rule
};

struct CorpusCase {
    std::string id;
    std::string rule_text;
    std::vector<Axiom> expected;  // answer key, written with its own helper numbering
    // Helper properties of the answer key, with the class each one encodes.
    std::vector<std::pair<EntityName, ClassExpression>> expected_fresh;
    CheckKind check = CheckKind::Equivalence;
};

// The twelve embedded cases, in order.
std::vector<CorpusCase> evaluation_cases();

// The thirteenth case: same body as the ninth, head on the other variable.
CorpusCase single_variable_variant();

struct CaseOutcome {
    std::string id;
    bool structural_match = false;  // translated axioms equal the key modulo renaming
    bool semantic_ok = false;       // the oracle confirms the check kind
    bool sampled = false;           // oracle fell back to sampling (budget)
    std::string detail;             // empty on success
    bool ok() const { return structural_match && semantic_ok; }
};

struct CorpusRun {
    std::vector<CaseOutcome> outcomes;
    bool all_ok() const;
};

// Runs the given cases as one session.  Oracle checks enumerate exhaustively
// up to max_domain within the budget; a case whose enumeration space exceeds
// the budget is sampled instead (`trials` draws from `seed`) and marked so.
CorpusRun run(const std::vector<CorpusCase>& cases, int max_domain,
              std::uint64_t budget = oracle::kDefaultBudget, std::uint64_t seed = 1,
              int trials = 2000);

}  // namespace rowl::corpus
