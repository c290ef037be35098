#include "rowl/corpus.hpp"

#include <algorithm>
#include <map>
#include <variant>

#include "rowl/parser.hpp"
#include "rowl/render.hpp"
#include "rowl/transform.hpp"

namespace rowl::corpus {

namespace {

ClassExpression cls(const std::string& name) { return ClassExpression::named(name); }
PropertyExpression prop(const std::string& name) {
    return PropertyExpression(EntityName(name));
}

Axiom rolification(const std::string& class_name, const std::string& helper) {
    return Axiom::subclass_of(cls(class_name),
                              ClassExpression::self_restriction(prop(helper)));
}

}  // namespace

std::vector<CorpusCase> evaluation_cases() {
    std::vector<CorpusCase> cases;

    cases.push_back({"Ru1",
                     "Father(?x) -> Parent(?x)",
                     {Axiom::subclass_of(cls("Father"), cls("Parent"))},
                     {},
                     CheckKind::Equivalence});

    cases.push_back({"Ru2",
                     "University(?x) -> EducationalInstitution(?x)",
                     {Axiom::subclass_of(cls("University"), cls("EducationalInstitution"))},
                     {},
                     CheckKind::Equivalence});

    cases.push_back({"Ru3",
                     "Person(?x) ^ hasMother(?x, ?y) -> Parent(?y)",
                     {Axiom::subclass_of(
                         ClassExpression::existential(prop("hasMother").inverse(),
                                                      cls("Person")),
                         cls("Parent"))},
                     {},
                     CheckKind::Equivalence});

    cases.push_back(
        {"Ru4",
         "EducationalInstitution(?x) ^ awards(?x, ?y) ^ MedicalDegree(?y) "
         "-> MedicalSchool(?x)",
         {Axiom::subclass_of(
             ClassExpression::conjunction(
                 {cls("EducationalInstitution"),
                  ClassExpression::existential(prop("awards"), cls("MedicalDegree"))}),
             cls("MedicalSchool"))},
         {},
         CheckKind::Equivalence});

    cases.push_back(
        {"Ru5",
         "Person(?x) ^ hasBrother(?x, ?y) ^ hasSon(?y, ?z) -> hasNephew(?x, ?z)",
         {rolification("Person", "R1"),
          Axiom::subproperty_chain_of({prop("R1"), prop("hasBrother"), prop("hasSon")},
                                      prop("hasNephew"))},
         {{EntityName("R1"), cls("Person")}},
         CheckKind::ConservativeExtension});

    cases.push_back(
        {"Ru6",
         "Forest(?x) ^ Desert(?y) -> moreBiodiverseThan(?x, ?y)",
         {rolification("Forest", "R2"), rolification("Desert", "R3"),
          Axiom::subproperty_chain_of(
              {prop("R2"), PropertyExpression::universal(), prop("R3")},
              prop("moreBiodiverseThan"))},
         {{EntityName("R2"), cls("Forest")}, {EntityName("R3"), cls("Desert")}},
         CheckKind::ConservativeExtension});

    cases.push_back({"Ru7",
                     "Parent(?x) -> Human(?x)",
                     {Axiom::subclass_of(cls("Parent"), cls("Human"))},
                     {},
                     CheckKind::Equivalence});

    cases.push_back({"Ru8",
                     "EducationalInstitution(?x) -> Organization(?x)",
                     {Axiom::subclass_of(cls("EducationalInstitution"), cls("Organization"))},
                     {},
                     CheckKind::Equivalence});

    cases.push_back(
        {"Ru9",
         "Person(?x) ^ hasParent(?x, ?y) ^ Female(?y) -> Mother(?x)",
         {Axiom::subclass_of(
             ClassExpression::conjunction(
                 {cls("Person"),
                  ClassExpression::existential(prop("hasParent"), cls("Female"))}),
             cls("Mother"))},
         {},
         CheckKind::Equivalence});

    cases.push_back(
        {"Ru10",
         "University(?x) ^ fundedBy(?x, ?y) ^ StateGovernment(?y) -> PublicUniversity(?x)",
         {Axiom::subclass_of(
             ClassExpression::conjunction(
                 {cls("University"),
                  ClassExpression::existential(prop("fundedBy"), cls("StateGovernment"))}),
             cls("PublicUniversity"))},
         {},
         CheckKind::Equivalence});

    cases.push_back(
        {"Ru11",
         "Person(?x) ^ hasChild(?x, ?y) ^ Female(?y) -> hasDaughter(?x, ?y)",
         {rolification("Person", "R4"), rolification("Female", "R5"),
          Axiom::subproperty_chain_of({prop("R4"), prop("hasChild"), prop("R5")},
                                      prop("hasDaughter"))},
         {{EntityName("R4"), cls("Person")}, {EntityName("R5"), cls("Female")}},
         CheckKind::ConservativeExtension});

    cases.push_back(
        {"Ru12",
         "Teenager(?x) ^ Twen(?y) -> youngerThan(?x, ?y)",
         {rolification("Teenager", "R6"), rolification("Twen", "R7"),
          Axiom::subproperty_chain_of(
              {prop("R6"), PropertyExpression::universal(), prop("R7")},
              prop("youngerThan"))},
         {{EntityName("R6"), cls("Teenager")}, {EntityName("R7"), cls("Twen")}},
         CheckKind::ConservativeExtension});

    return cases;
}

CorpusCase single_variable_variant() {
    return {"Ru9b",
            "Person(?x) ^ hasParent(?x, ?y) ^ Female(?y) -> Mother(?y)",
            {Axiom::subclass_of(
                ClassExpression::conjunction(
                    {ClassExpression::existential(prop("hasParent").inverse(),
                                                  cls("Person")),
                     cls("Female")}),
                cls("Mother"))},
            {},
            CheckKind::Equivalence};
}

bool CorpusRun::all_ok() const {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const CaseOutcome& o) { return o.ok(); });
}

CorpusRun run(const std::vector<CorpusCase>& cases, int max_domain, std::uint64_t budget,
              std::uint64_t seed, int trials) {
    CorpusRun out;
    Signature session;
    FreshPropertyRegistry registry;

    for (const auto& c : cases) {
        CaseOutcome outcome;
        outcome.id = c.id;

        auto parsed = parse_rule(c.rule_text, session, true, c.id);
        if (const auto* error = std::get_if<ParseError>(&parsed)) {
            outcome.detail = "parse error: " + error->message;
            out.outcomes.push_back(std::move(outcome));
            continue;
        }
        session.merge(std::get<ParsedRule>(parsed).additions);
        const Rule& rule = std::get<ParsedRule>(parsed).rule;

        auto result = translate(rule, session, registry);
        if (!result.translated()) {
            outcome.detail = "fell back: " + result.fallback_reason();
            out.outcomes.push_back(std::move(outcome));
            continue;
        }

        // Key comparison up to helper renaming: the session registry may
        // hand this rule different helper numbers than the answer key,
        // so map helpers by the class they encode.
        std::map<EntityName, EntityName> renaming;
        bool matched_helpers = true;
        for (const auto& [key_name, key_class] : c.expected_fresh) {
            auto it = std::find_if(result.fresh_properties.begin(),
                                   result.fresh_properties.end(),
                                   [&](const auto& actual) {
                                       return actual.second == key_class;
                                   });
            if (it == result.fresh_properties.end()) {
                matched_helpers = false;
                outcome.detail = "no helper property encodes " + functional(key_class);
                break;
            }
            renaming[it->first] = key_name;
        }
        if (!matched_helpers) {
            out.outcomes.push_back(std::move(outcome));
            continue;
        }
        outcome.structural_match =
            result.fresh_properties.size() == c.expected_fresh.size() &&
            axioms_equal_modulo(result.axioms(), c.expected, renaming);
        if (!outcome.structural_match && outcome.detail.empty()) {
            outcome.detail = "axioms differ from the answer key";
        }

        // Semantic verification, sampled only if enumeration is too big.
        try {
            std::optional<oracle::Counterexample> ce;
            if (c.check == CheckKind::Equivalence) {
                oracle::FormulaSet lhs{rule};
                oracle::FormulaSet rhs(c.expected.begin(), c.expected.end());
                try {
                    ce = oracle::equivalent_exhaustive(lhs, rhs, max_domain, budget);
                } catch (const oracle::BudgetExceededError&) {
                    outcome.sampled = true;
                    ce = oracle::equivalent_sampled(lhs, rhs, trials, max_domain, seed);
                }
            } else {
                std::set<EntityName> fresh;
                for (const auto& [name, _] : c.expected_fresh) {
                    fresh.insert(name);
                }
                ce = oracle::conservative_extension_check(rule, c.expected, fresh,
                                                          max_domain, budget);
            }
            outcome.semantic_ok = !ce.has_value();
            if (ce) {
                outcome.detail += (outcome.detail.empty() ? "" : "; ");
                outcome.detail += "oracle counterexample: " + ce->detail;
            }
        } catch (const std::exception& e) {
            outcome.semantic_ok = false;
            outcome.detail += (outcome.detail.empty() ? "" : "; ");
            outcome.detail += "oracle error: " + std::string(e.what());
        }

        out.outcomes.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace rowl::corpus
