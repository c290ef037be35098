#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rowl/oracle.hpp"
#include "rowl/parser.hpp"

using namespace rowl;
using namespace rowl::oracle;

namespace {

Rule rule(const std::string& text, const std::string& name = "r") {
    return std::get<ParsedRule>(parse_rule(text, {}, true, name)).rule;
}

ClassExpression cls(const std::string& n) { return ClassExpression::named(n); }
PropertyExpression prop(const std::string& n) { return PropertyExpression(EntityName(n)); }

// Ru5 and its Table-style translation, used across several suites.
Rule ru5() {
    return rule("Person(?x) ^ hasBrother(?x,?y) ^ hasSon(?y,?z) -> hasNephew(?x,?z)", "Ru5");
}

std::vector<Axiom> ax5(std::vector<std::string> chain_names = {"R1", "hasBrother", "hasSon"}) {
    std::vector<PropertyExpression> chain;
    for (const auto& n : chain_names) {
        chain.push_back(prop(n));
    }
    return {
        Axiom::subclass_of(cls("Person"), ClassExpression::self_restriction(prop("R1"))),
        Axiom::subproperty_chain_of(std::move(chain), prop("hasNephew")),
    };
}

}  // namespace

TEST_SUITE("class expression evaluation") {
    TEST_CASE("self restrictions pick out reflexive elements") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.property_extensions[EntityName("R")] = relation_mask(2, {{1, 1}, {1, 2}});
        auto expr = ClassExpression::self_restriction(prop("R"));
        CHECK(eval_class(expr, interp) == std::set<int>{1});
    }

    TEST_CASE("top and bottom have fixed extensions") {
        Interpretation interp;
        interp.domain_size = 2;
        CHECK(eval_class(ClassExpression::top(), interp) == std::set<int>{1, 2});
        CHECK(eval_class(ClassExpression::bottom(), interp) == std::set<int>{});
    }

    TEST_CASE("an inverse existential under a conjunction") {
        // ∃hasParent⁻.Person ⊓ Female on the two-element model: hasParent
        // relates 1 to 2 and Person = {1}, so the inverse existential is {2},
        // which intersected with Female = {2} stays {2}.
        Interpretation interp;
        interp.domain_size = 2;
        interp.class_extensions[EntityName("Person")] = subset_mask({1});
        interp.class_extensions[EntityName("Female")] = subset_mask({2});
        interp.property_extensions[EntityName("hasParent")] = relation_mask(2, {{1, 2}});
        auto expr = ClassExpression::conjunction(
            {ClassExpression::existential(prop("hasParent").inverse(), cls("Person")),
             cls("Female")});
        CHECK(eval_class(expr, interp) == std::set<int>{2});
    }

    TEST_CASE("nominals and existentials over the universal property") {
        Interpretation interp;
        interp.domain_size = 3;
        interp.individual_map[EntityName("mary")] = 2;
        interp.class_extensions[EntityName("A")] = subset_mask({3});
        CHECK(eval_class(ClassExpression::nominal(EntityName("mary")), interp) ==
              std::set<int>{2});
        // ∃U.A is the whole domain whenever A is non-empty.
        auto some_u = ClassExpression::existential(PropertyExpression::universal(), cls("A"));
        CHECK(eval_class(some_u, interp) == std::set<int>{1, 2, 3});
        interp.class_extensions[EntityName("A")] = 0;
        CHECK(eval_class(some_u, interp) == std::set<int>{});
    }

    TEST_CASE("missing names and stray elements are evaluation errors") {
        Interpretation interp;
        interp.domain_size = 2;
        CHECK_THROWS_AS(eval_class(cls("A"), interp), EvalError);
        interp.class_extensions[EntityName("A")] = subset_mask({3});  // outside {1,2}
        CHECK_THROWS_AS(eval_class(cls("A"), interp), EvalError);
        interp.class_extensions[EntityName("A")] = subset_mask({1});
        CHECK(eval_class(cls("A"), interp) == std::set<int>{1});
        Interpretation bad;
        bad.domain_size = 9;
        CHECK_THROWS_AS(eval_class(ClassExpression::top(), bad), EvalError);
    }

    TEST_CASE("enlarging a class extension never shrinks any evaluation") {
        const ClassExpression exprs[] = {
            ClassExpression::conjunction(
                {cls("A"), ClassExpression::existential(prop("R"), cls("B"))}),
            ClassExpression::existential(prop("R").inverse(),
                                         ClassExpression::conjunction({cls("A"), cls("B")})),
            ClassExpression::existential(prop("R"),
                                         ClassExpression::existential(prop("R"), cls("A"))),
        };
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            int n = 1 + static_cast<int>(rng() % 4);
            Interpretation interp;
            interp.domain_size = n;
            std::uint64_t domain = (std::uint64_t{1} << n) - 1;
            interp.class_extensions[EntityName("A")] = rng() & domain;
            interp.class_extensions[EntityName("B")] = rng() & domain;
            interp.property_extensions[EntityName("R")] =
                rng() & ((std::uint64_t{1} << (n * n)) - 1);

            Interpretation larger = interp;
            larger.class_extensions[EntityName("A")] |=
                std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(n));

            for (const auto& expr : exprs) {
                auto before = eval_class(expr, interp);
                auto after = eval_class(expr, larger);
                CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
            }
        }
    }
}

TEST_SUITE("entailment") {
    TEST_CASE("subclass axioms are subset checks") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.class_extensions[EntityName("Father")] = subset_mask({1});
        interp.class_extensions[EntityName("Parent")] = subset_mask({1, 2});
        CHECK(entails(interp, Axiom::subclass_of(cls("Father"), cls("Parent"))));
        interp.class_extensions[EntityName("Parent")] = 0;
        CHECK_FALSE(entails(interp, Axiom::subclass_of(cls("Father"), cls("Parent"))));
    }

    TEST_CASE("rules quantify over substitutions") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.class_extensions[EntityName("Father")] = subset_mask({1});
        interp.class_extensions[EntityName("Parent")] = 0;
        CHECK_FALSE(entails(interp, rule("Father(?x) -> Parent(?x)")));
        interp.class_extensions[EntityName("Parent")] = subset_mask({1});
        CHECK(entails(interp, rule("Father(?x) -> Parent(?x)")));
    }

    TEST_CASE("the Ru5 model entails both the rule and its translation") {
        // Person = {1}, hasBrother = {(1,2)}, hasSon = {(2,3)},
        // hasNephew = {(1,3)}, R1 = {(1,1)}: the chain composes to {(1,3)}.
        Interpretation interp;
        interp.domain_size = 3;
        interp.class_extensions[EntityName("Person")] = subset_mask({1});
        interp.property_extensions[EntityName("hasBrother")] = relation_mask(3, {{1, 2}});
        interp.property_extensions[EntityName("hasSon")] = relation_mask(3, {{2, 3}});
        interp.property_extensions[EntityName("hasNephew")] = relation_mask(3, {{1, 3}});
        interp.property_extensions[EntityName("R1")] = relation_mask(3, {{1, 1}});
        CHECK(entails(interp, ru5()));
        for (const auto& ax : ax5()) {
            CHECK(entails(interp, ax));
        }
        // Emptying hasNephew breaks the chain axiom and the rule alike.
        interp.property_extensions[EntityName("hasNephew")] = 0;
        CHECK_FALSE(entails(interp, ax5()[1]));
        CHECK_FALSE(entails(interp, ru5()));
    }

    TEST_CASE("universal property atoms always hold") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.class_extensions[EntityName("A")] = subset_mask({1});
        interp.class_extensions[EntityName("B")] = 0;
        CHECK_FALSE(entails(interp, rule("A(?x) ^ U(?x,?y) -> B(?y)")));
        interp.class_extensions[EntityName("B")] = subset_mask({1, 2});
        CHECK(entails(interp, rule("A(?x) ^ U(?x,?y) -> B(?y)")));
    }

    TEST_CASE("individuals resolve through the individual map") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.individual_map[EntityName("a")] = 1;
        interp.class_extensions[EntityName("A")] = subset_mask({1});
        interp.class_extensions[EntityName("B")] = subset_mask({2});
        CHECK_FALSE(entails(interp, rule("A(a) -> B(a)")));
        interp.class_extensions[EntityName("B")] = subset_mask({1, 2});
        CHECK(entails(interp, rule("A(a) -> B(a)")));
        interp.individual_map.erase(EntityName("a"));
        CHECK_THROWS_AS(entails(interp, rule("A(a) -> B(a)")), EvalError);
    }

    TEST_CASE("axiom entailment agrees with the rule form") {
        // C ⊑ D versus C(x) → D(x) for a compound C across random models.
        auto sub = ClassExpression::conjunction(
            {cls("A"), ClassExpression::existential(prop("R"), cls("B"))});
        auto axiom = Axiom::subclass_of(sub, cls("B"));
        Rule as_rule("r", {Atom::class_atom(sub, Term::variable("x"))},
                     {Atom::class_atom(cls("B"), Term::variable("x"))});
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 300; ++trial) {
            int n = 1 + static_cast<int>(rng() % 3);
            Interpretation interp;
            interp.domain_size = n;
            std::uint64_t domain = (std::uint64_t{1} << n) - 1;
            interp.class_extensions[EntityName("A")] = rng() & domain;
            interp.class_extensions[EntityName("B")] = rng() & domain;
            interp.property_extensions[EntityName("R")] =
                rng() & ((std::uint64_t{1} << (n * n)) - 1);
            CHECK(entails(interp, axiom) == entails(interp, as_rule));
        }
    }
}

TEST_SUITE("exhaustive equivalence") {
    TEST_CASE("a rule and its subclass axiom are equivalent") {
        FormulaSet left{rule("Father(?x) -> Parent(?x)")};
        FormulaSet right{Axiom::subclass_of(cls("Father"), cls("Parent"))};
        CHECK_FALSE(equivalent_exhaustive(left, right, 2).has_value());
    }

    TEST_CASE("subclass direction matters") {
        FormulaSet left{Axiom::subclass_of(cls("A"), cls("B"))};
        FormulaSet right{Axiom::subclass_of(cls("B"), cls("A"))};
        auto ce = equivalent_exhaustive(left, right, 1);
        REQUIRE(ce.has_value());
        CHECK(ce->interpretation.domain_size == 1);
        // The witness entails exactly one side.
        bool e1 = entails(ce->interpretation, left[0]);
        bool e2 = entails(ce->interpretation, right[0]);
        CHECK(e1 != e2);
        // Stable across runs.
        auto again = equivalent_exhaustive(left, right, 1);
        REQUIRE(again.has_value());
        CHECK(again->interpretation == ce->interpretation);
    }

    TEST_CASE("empty sets are equivalent") {
        CHECK_FALSE(equivalent_exhaustive({}, {}, 2).has_value());
    }

    TEST_CASE("the arguments are symmetric") {
        FormulaSet left{rule("A(?x) ^ R(?x,?y) -> B(?y)")};
        FormulaSet right{Axiom::subclass_of(
            ClassExpression::existential(prop("R").inverse(), cls("A")), cls("B"))};
        CHECK_FALSE(equivalent_exhaustive(left, right, 2).has_value());
        CHECK_FALSE(equivalent_exhaustive(right, left, 2).has_value());

        FormulaSet wrong{Axiom::subclass_of(
            ClassExpression::existential(prop("R"), cls("A")), cls("B"))};
        auto one = equivalent_exhaustive(left, wrong, 2);
        auto two = equivalent_exhaustive(wrong, left, 2);
        REQUIRE(one.has_value());
        REQUIRE(two.has_value());
        CHECK(one->interpretation == two->interpretation);
    }

    TEST_CASE("the enumeration budget is enforced") {
        // Seven properties at domain size 2 need 2^28 interpretations.
        std::vector<Atom> body;
        for (char c = 'P'; c < 'W'; ++c) {
            body.push_back(Atom::property_atom(prop(std::string(1, c)), Term::variable("x"),
                                               Term::variable("y")));
        }
        Rule wide("wide", body, {body.front()});
        try {
            equivalent_exhaustive({wide}, {wide}, 2);
            FAIL("expected BudgetExceededError");
        } catch (const BudgetExceededError& e) {
            CHECK(e.required > kDefaultBudget);
            CHECK(e.budget == kDefaultBudget);
            CHECK(std::string(e.what()).find("equivalent_sampled") != std::string::npos);
        }
        // The budget is a parameter: a small one rejects a small check, a
        // sufficient one admits it.
        FormulaSet small{rule("A(?x) -> B(?x)")};
        CHECK_THROWS_AS(equivalent_exhaustive(small, small, 2, 4), BudgetExceededError);
        CHECK_FALSE(equivalent_exhaustive(small, small, 2, 1024).has_value());
    }

    TEST_CASE("domain bounds are validated") {
        CHECK_THROWS_AS(equivalent_exhaustive({}, {}, 0), std::invalid_argument);
        CHECK_THROWS_AS(equivalent_exhaustive({}, {}, 9), std::invalid_argument);
    }
}

TEST_SUITE("enumeration space") {
    TEST_CASE("hand-computed sizes") {
        Signature one_class;
        one_class.add_class(EntityName("A"));
        // 2^1 + 2^2
        CHECK(enumeration_space(one_class, 2) == 6);

        Signature mixed = one_class;
        mixed.add_property(EntityName("R"));
        // n=1: 2^1·2^1 = 4; n=2: 2^2·2^4 = 64
        CHECK(enumeration_space(mixed, 2) == 68);

        Signature with_ind = mixed;
        with_ind.add_individual(EntityName("a"));
        // n=1: 4·1 = 4; n=2: 64·2 = 128
        CHECK(enumeration_space(with_ind, 2) == 132);

        // The universal property is never enumerated.
        Signature with_u = mixed;
        with_u.add_property(EntityName::universal_property());
        CHECK(enumeration_space(with_u, 2) == 68);
    }

    TEST_CASE("large signatures saturate instead of overflowing") {
        Signature sig;
        for (int i = 0; i < 40; ++i) {
            sig.add_property(EntityName("P" + std::to_string(i)));
        }
        CHECK(enumeration_space(sig, 8) == ~std::uint64_t{0});
    }
}

TEST_SUITE("conservative extension checking") {
    TEST_CASE("the Ru5 translation is conservative") {
        CHECK_FALSE(
            conservative_extension_check(ru5(), ax5(), {EntityName("R1")}, 2).has_value());
    }

    TEST_CASE("a disconnected-body translation with U is conservative") {
        auto base = rule("Teenager(?x) ^ U(?x,?y) ^ Twen(?y) -> youngerThan(?x,?y)", "Ru12");
        std::vector<Axiom> ext{
            Axiom::subclass_of(cls("Teenager"), ClassExpression::self_restriction(prop("R6"))),
            Axiom::subclass_of(cls("Twen"), ClassExpression::self_restriction(prop("R7"))),
            Axiom::subproperty_chain_of(
                {prop("R6"), PropertyExpression::universal(), prop("R7")},
                prop("youngerThan")),
        };
        CHECK_FALSE(conservative_extension_check(base, ext,
                                                 {EntityName("R6"), EntityName("R7")}, 2)
                        .has_value());
    }

    TEST_CASE("reversing the chain breaks conservativity") {
        auto ce = conservative_extension_check(ru5(), ax5({"R1", "hasSon", "hasBrother"}),
                                               {EntityName("R1")}, 2);
        REQUIRE(ce.has_value());
        CHECK_FALSE(ce->detail.empty());
    }

    TEST_CASE("misused fresh names are rejected") {
        // Fresh name occurring in the rule.
        CHECK_THROWS_AS(
            conservative_extension_check(ru5(), ax5(), {EntityName("hasBrother")}, 2),
            std::invalid_argument);
        // Fresh name without a rolification axiom.
        CHECK_THROWS_AS(conservative_extension_check(
                            ru5(), {ax5()[1]}, {EntityName("R1")}, 2),
                        std::invalid_argument);
        // Extension name that is neither fresh nor from the rule.
        auto stray = ax5();
        stray.push_back(Axiom::subclass_of(cls("Person"), cls("Stranger")));
        CHECK_THROWS_AS(conservative_extension_check(ru5(), stray, {EntityName("R1")}, 2),
                        std::invalid_argument);
    }

    TEST_CASE("an extension too weak to entail the rule fails direction (i)") {
        // A ⊑ ∃R.Self says nothing about S, so it cannot entail
        // A(x) → S(x,x): witnessed by A = {1}, R = {(1,1)}, S = {}.
        auto base = rule("A(?x) -> S(?x,?x)");
        std::vector<Axiom> ext{
            Axiom::subclass_of(cls("A"), ClassExpression::self_restriction(prop("R"))),
        };
        auto ce = conservative_extension_check(base, ext, {EntityName("R")}, 2);
        REQUIRE(ce.has_value());
        CHECK(ce->detail == "the axioms hold but the rule does not");
    }

    TEST_CASE("budgets apply to both enumeration directions") {
        CHECK_THROWS_AS(
            conservative_extension_check(ru5(), ax5(), {EntityName("R1")}, 2, 1024),
            BudgetExceededError);
    }
}

TEST_SUITE("sampled equivalence") {
    TEST_CASE("a truly equivalent pair survives a thousand trials") {
        FormulaSet left{
            rule("Person(?x) ^ hasParent(?x,?y) ^ Female(?y) -> Mother(?x)", "Ru9")};
        FormulaSet right{Axiom::subclass_of(
            ClassExpression::conjunction(
                {cls("Person"), ClassExpression::existential(prop("hasParent"), cls("Female"))}),
            cls("Mother"))};
        CHECK_FALSE(equivalent_sampled(left, right, 1000, 3, 1).has_value());
    }

    TEST_CASE("an inequivalent pair is caught") {
        FormulaSet left{Axiom::subclass_of(cls("A"), cls("B"))};
        FormulaSet right{Axiom::subclass_of(cls("A"), ClassExpression::bottom())};
        auto ce = equivalent_sampled(left, right, 1000, 2, 42);
        REQUIRE(ce.has_value());
        bool e1 = entails(ce->interpretation, left[0]);
        bool e2 = entails(ce->interpretation, right[0]);
        CHECK(e1 != e2);
    }

    TEST_CASE("zero trials find nothing") {
        FormulaSet left{Axiom::subclass_of(cls("A"), cls("B"))};
        FormulaSet right{Axiom::subclass_of(cls("A"), ClassExpression::bottom())};
        CHECK_FALSE(equivalent_sampled(left, right, 0, 2, 42).has_value());
    }

    TEST_CASE("a fixed seed reproduces the counterexample") {
        FormulaSet left{Axiom::subclass_of(cls("A"), cls("B"))};
        FormulaSet right{Axiom::subclass_of(cls("B"), cls("A"))};
        auto one = equivalent_sampled(left, right, 500, 2, 7);
        auto two = equivalent_sampled(left, right, 500, 2, 7);
        REQUIRE(one.has_value());
        REQUIRE(two.has_value());
        CHECK(one->interpretation == two->interpretation);
        CHECK(one->detail == two->detail);
    }
}

TEST_SUITE("interpretation display") {
    TEST_CASE("to_string lists extensions one-based") {
        Interpretation interp;
        interp.domain_size = 2;
        interp.class_extensions[EntityName("A")] = subset_mask({1});
        interp.property_extensions[EntityName("R")] = relation_mask(2, {{1, 2}, {2, 2}});
        interp.individual_map[EntityName("a")] = 2;
        CHECK(interp.to_string() ==
              "domain = {1, 2}\nA = {1}\nR = {(1,2), (2,2)}\na = 2");
    }
}
