#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <variant>

#include "rowl/model.hpp"

// Finite-model semantics for rules and axioms with brute-force equivalence
// and conservative-extension checking.  Domains are {1, ..., n} with n <= 8;
// a class extension is a bitmask with bit d-1 for element d, a property
// extension a bitmask with bit (d-1)*n + (e-1) for the pair (d, e).  Top,
// bottom and the universal property have fixed extensions and are never
// stored.

namespace rowl::oracle {

inline constexpr int kMaxDomainSize = 8;
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

struct Interpretation {
    int domain_size = 1;
    std::map<EntityName, std::uint64_t> class_extensions;
    std::map<EntityName, std::uint64_t> property_extensions;
    std::map<EntityName, int> individual_map;  // element, 1-based

    std::string to_string() const;
    bool operator==(const Interpretation&) const = default;
};

// Mask-building helpers: subset_mask({1,2}) sets bits for elements 1 and 2;
// relation_mask(n, {{1,2}}) sets the bit for the pair (1,2) over domain size n.
std::uint64_t subset_mask(std::initializer_list<int> elements);
std::uint64_t relation_mask(int domain_size, std::initializer_list<std::pair<int, int>> pairs);

using Formula = std::variant<Rule, Axiom>;
using FormulaSet = std::vector<Formula>;

struct Counterexample {
    Interpretation interpretation;
    std::string detail;
};

// A name required by a formula is missing from the interpretation, or an
// extension strays outside the domain.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The exhaustive enumeration space exceeds the configured budget; callers
// should fall back to equivalent_sampled.
struct BudgetExceededError : std::runtime_error {
    BudgetExceededError(std::uint64_t required, std::uint64_t budget);
    std::uint64_t required;
    std::uint64_t budget;
};

// Elements of the domain satisfying expr, 1-based.
std::set<int> eval_class(const ClassExpression& expr, const Interpretation& interp);

// Rules quantify over all substitutions of their body variables; SubClassOf
// is a subset check; a chain axiom is relational composition containment.
bool entails(const Interpretation& interp, const Formula& formula);

// The number of interpretations enumerated for sig over domain sizes
// 1..max_domain (saturating): sum of 2^(n|C|) * 2^(n^2|P|) * n^|I|.
std::uint64_t enumeration_space(const Signature& sig, int max_domain);

// Enumerate every interpretation of the union signature over domain sizes
// 1..max_domain in a fixed order (smallest domain first; class extensions,
// then property extensions, then individual assignments, last component
// varying fastest, each ascending from empty).  Returns the first
// interpretation entailing exactly one side, or nullopt when the sets are
// equivalent on every enumerated interpretation.  Throws
// BudgetExceededError when the space exceeds the budget.
std::optional<Counterexample> equivalent_exhaustive(const FormulaSet& s1, const FormulaSet& s2,
                                                    int max_domain,
                                                    std::uint64_t budget = kDefaultBudget);

// Checks that `extension` is a conservative extension of {base}:
//   (i)  every interpretation of the full signature entailing all extension
//        axioms entails base;
//   (ii) every interpretation of base's signature entailing base extends to
//        one entailing the extension, using the canonical rolification
//        witness ext(R_C) := {(d,d) | d in eval(C)} for each fresh property,
//        where C is read off the extension's C ⊑ ∃R_C.Self axiom.
// Direction (ii) is sound for the rolification pattern but does not search
// arbitrary extensions.  Fresh names must not occur in base; every fresh
// name needs a rolification axiom; extension names must otherwise stay
// within base's signature.
std::optional<Counterexample> conservative_extension_check(const Rule& base,
                                                           const std::vector<Axiom>& extension,
                                                           const std::set<EntityName>& fresh,
                                                           int max_domain,
                                                           std::uint64_t budget = kDefaultBudget);

// Samples `trials` pseudo-random interpretations (domain size uniform in
// 1..max_domain, extensions uniform) from a fixed seed; deterministic.
// nullopt means no counterexample was found — a one-sided verdict.
std::optional<Counterexample> equivalent_sampled(const FormulaSet& s1, const FormulaSet& s2,
                                                 int trials, int max_domain, std::uint64_t seed);

}  // namespace rowl::oracle
