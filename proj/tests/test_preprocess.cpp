#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "rowl/oracle.hpp"
#include "rowl/parser.hpp"
#include "rowl/preprocess.hpp"

using namespace rowl;

namespace {

Rule rule(const std::string& text, const std::string& name = "r") {
    return std::get<ParsedRule>(parse_rule(text, {}, true, name)).rule;
}

ClassExpression cls(const std::string& n) { return ClassExpression::named(n); }
PropertyExpression prop(const std::string& n) { return PropertyExpression(EntityName(n)); }
ClassExpression nom(const std::string& n) { return ClassExpression::nominal(EntityName(n)); }
Term var(const std::string& n) { return Term::variable(n); }

// Both formulas hold in exactly the same interpretations with at most two
// elements.
void check_equivalent(const Rule& original, const std::vector<Rule>& rewritten) {
    oracle::FormulaSet left{original};
    oracle::FormulaSet right(rewritten.begin(), rewritten.end());
    auto ce = oracle::equivalent_exhaustive(left, right, 2);
    if (ce) {
        FAIL("not equivalent; counterexample:\n", ce->interpretation.to_string(), "\n",
             ce->detail);
    }
}

bool body_is_connected(const Rule& r) {
    auto vars = r.body_variables();
    for (const auto& v : vars) {
        if (!connected(vars.front(), v, r.body())) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("constant elimination") {
    TEST_CASE("an individual in object position becomes a nominal filler") {
        auto out = eliminate_constants(rule("Person(?x) ^ hasParent(?x, mary) -> A(?x)"));
        auto expected = Rule(
            "r",
            {Atom::class_atom(cls("Person"), var("x")),
             Atom::class_atom(ClassExpression::existential(prop("hasParent"), nom("mary")),
                              var("x"))},
            {Atom::class_atom(cls("A"), var("x"))});
        CHECK(out.same_formula(expected));
        check_equivalent(rule("Person(?x) ^ hasParent(?x, mary) -> A(?x)"), {out});
    }

    TEST_CASE("an individual in subject position inverts the property") {
        auto in = rule("hasParent(mary, ?x) -> A(?x)");
        auto out = eliminate_constants(in);
        auto expected = Rule(
            "r",
            {Atom::class_atom(
                ClassExpression::existential(prop("hasParent").inverse(), nom("mary")),
                var("x"))},
            {Atom::class_atom(cls("A"), var("x"))});
        CHECK(out.same_formula(expected));
        check_equivalent(in, {out});
    }

    TEST_CASE("constant-free rules are untouched") {
        auto in = rule("Father(?x) -> Parent(?x)");
        CHECK(eliminate_constants(in) == in);
    }

    TEST_CASE("a ground property atom anchors on a body variable") {
        auto in = rule("R(a, b) ^ A(?x) -> B(?x)");
        auto out = eliminate_constants(in);
        auto encoding = ClassExpression::existential(
            PropertyExpression::universal(),
            ClassExpression::conjunction(
                {nom("a"), ClassExpression::existential(prop("R"), nom("b"))}));
        auto expected = Rule("r",
                             {Atom::class_atom(encoding, var("x")),
                              Atom::class_atom(cls("A"), var("x"))},
                             {Atom::class_atom(cls("B"), var("x"))});
        CHECK(out.same_formula(expected));
        check_equivalent(in, {out});
    }

    TEST_CASE("the anchor is the smallest body variable") {
        auto out = eliminate_constants(rule("B(?z) ^ A(?y) ^ C(a) -> A(?y)"));
        auto encoding = Atom::class_atom(
            ClassExpression::existential(PropertyExpression::universal(),
                                         ClassExpression::conjunction({nom("a"), cls("C")})),
            var("y"));
        CHECK(std::count(out.body().begin(), out.body().end(), encoding) == 1);
    }

    TEST_CASE("head-side constants are rewritten the same way") {
        auto in = rule("A(?x) -> R(?x, b)");
        auto out = eliminate_constants(in);
        auto expected =
            Rule("r", {Atom::class_atom(cls("A"), var("x"))},
                 {Atom::class_atom(ClassExpression::existential(prop("R"), nom("b")),
                                   var("x"))});
        CHECK(out.same_formula(expected));
        check_equivalent(in, {out});

        auto ground_head = rule("A(?x) -> B(b)");
        auto out2 = eliminate_constants(ground_head);
        auto expected2 = Rule(
            "r", {Atom::class_atom(cls("A"), var("x"))},
            {Atom::class_atom(
                ClassExpression::existential(PropertyExpression::universal(),
                                             ClassExpression::conjunction({nom("b"), cls("B")})),
                var("x"))});
        CHECK(out2.same_formula(expected2));
        check_equivalent(ground_head, {out2});
    }

    TEST_CASE("a rule without variables introduces one") {
        auto in = rule("A(a) -> B(a)");
        auto out = eliminate_constants(in);
        REQUIRE(out.body().size() == 2);  // owl:Thing(x0) plus the encoding
        CHECK(out.body_variables() == std::vector<Term>{var("x0")});
        bool found_top = false;
        for (const auto& atom : out.body()) {
            found_top |= atom.is_class_atom() && atom.expr() == ClassExpression::top();
        }
        CHECK(found_top);
        check_equivalent(in, {out});
    }
}

TEST_SUITE("head splitting") {
    TEST_CASE("multi-atom heads split into sibling rules") {
        auto bound = rule("C(?x) ^ R(?x, ?y) -> A(?x) ^ B(?y)", "multi");
        auto out = split_head(bound);
        REQUIRE(out.size() == 2);
        CHECK(out[0].name() == "multi#1");
        CHECK(out[1].name() == "multi#2");
        CHECK(out[0].body() == bound.body());
        CHECK(out[1].body() == bound.body());
        CHECK(out[0].head().size() == 1);
        CHECK(out[1].head().size() == 1);
        CHECK(out[0].head() != out[1].head());
    }

    TEST_CASE("single heads pass through unchanged, name included") {
        auto in = rule("Person(?x) ^ hasBrother(?x,?y) ^ hasSon(?y,?z) -> hasNephew(?x,?z)",
                       "Ru5");
        auto out = split_head(in);
        REQUIRE(out.size() == 1);
        CHECK(out.front() == in);
    }

    TEST_CASE("duplicate head atoms were already collapsed") {
        auto in = rule("B(?x) -> A(?x) ^ A(?x)");
        CHECK(in.head().size() == 1);
        CHECK(split_head(in).size() == 1);
    }
}

TEST_SUITE("body connectivity patching") {
    TEST_CASE("two components are linked by one universal atom") {
        auto in = rule("Forest(?x) ^ Desert(?y) -> moreBiodiverseThan(?x,?y)", "Ru6");
        auto out = connect_body(in);
        auto expected = rule("Forest(?x) ^ U(?x,?y) ^ Desert(?y) -> moreBiodiverseThan(?x,?y)",
                             "Ru6");
        CHECK(out.same_formula(expected));
        check_equivalent(in, {out});
    }

    TEST_CASE("connected bodies are untouched") {
        auto in = rule("Person(?x) ^ hasMother(?x,?y) -> Parent(?y)", "Ru3");
        CHECK(connect_body(in) == in);
    }

    TEST_CASE("three components gain exactly two patch atoms in a star") {
        auto in = rule("A(?x) ^ B(?y) ^ C(?z) -> R(?x,?z)");
        auto out = connect_body(in);
        CHECK(out.body().size() == in.body().size() + 2);
        auto u = PropertyExpression::universal();
        CHECK(std::count(out.body().begin(), out.body().end(),
                         Atom::property_atom(u, var("x"), var("y"))) == 1);
        CHECK(std::count(out.body().begin(), out.body().end(),
                         Atom::property_atom(u, var("x"), var("z"))) == 1);
        CHECK(body_is_connected(out));
        check_equivalent(in, {out});
    }

    TEST_CASE("the anchor component is the one holding the head's first argument") {
        auto in = rule("A(?x) ^ B(?y) -> C(?y)");
        auto out = connect_body(in);
        CHECK(std::count(out.body().begin(), out.body().end(),
                         Atom::property_atom(PropertyExpression::universal(), var("y"),
                                             var("x"))) == 1);
    }

    TEST_CASE("preconditions are enforced") {
        CHECK_THROWS_AS(connect_body(rule("A(?x) -> B(?x) ^ C(?x)")),
                        std::invalid_argument);
        CHECK_THROWS_AS(connect_body(rule("A(?x) -> B(b)")), std::invalid_argument);
    }
}

TEST_SUITE("the full preprocess pipeline") {
    TEST_CASE("rules satisfying all assumptions are returned as-is") {
        auto in = rule("Person(?x) ^ hasParent(?x,?y) ^ Female(?y) -> Mother(?x)", "Ru9");
        auto out = preprocess(in);
        REQUIRE(out.rules.size() == 1);
        CHECK(out.rules.front() == in);
        CHECK(out.trace.steps.empty());
    }

    TEST_CASE("a fully ground rule is rewritten to an equivalent one") {
        auto in = rule("A(a) -> B(a)");
        auto out = preprocess(in);
        REQUIRE(out.rules.size() == 1);
        check_equivalent(in, out.rules);
        CHECK(out.trace.steps.size() == 1);
        CHECK(out.trace.steps.front().kind == PreprocessStepKind::ConstantElimination);
    }

    TEST_CASE("splitting happens after constant elimination, patching after both") {
        auto in = rule("A(?x) ^ B(?y) -> R(?x, a) ^ C(?y)");
        auto out = preprocess(in);
        REQUIRE(out.rules.size() == 2);
        for (const auto& r : out.rules) {
            CHECK(r.head().size() == 1);
            CHECK(body_is_connected(r));
        }
        check_equivalent(in, out.rules);
        // Kinds appear in pipeline order.
        std::vector<PreprocessStepKind> kinds;
        for (const auto& s : out.trace.steps) {
            kinds.push_back(s.kind);
        }
        CHECK(kinds == std::vector<PreprocessStepKind>{
                           PreprocessStepKind::ConstantElimination,
                           PreprocessStepKind::HeadSplit,
                           PreprocessStepKind::ConnectivityPatch,
                           PreprocessStepKind::ConnectivityPatch,
                       });
    }

    TEST_CASE("replaying the trace reproduces the output") {
        auto in = rule("A(?x) ^ B(?y) -> R(?x, a) ^ C(?y)");
        auto out = preprocess(in);
        std::vector<Rule> current{in};
        for (const auto& step : out.trace.steps) {
            bool applied = false;
            for (std::size_t i = 0; i < current.size(); ++i) {
                if (current[i].name() == step.before.name() &&
                    current[i].same_formula(step.before)) {
                    current.erase(current.begin() + static_cast<long>(i));
                    current.insert(current.begin() + static_cast<long>(i),
                                   step.after.begin(), step.after.end());
                    applied = true;
                    break;
                }
            }
            CHECK(applied);
        }
        REQUIRE(current.size() == out.rules.size());
        for (std::size_t i = 0; i < current.size(); ++i) {
            CHECK(current[i] == out.rules[i]);
        }
    }

    TEST_CASE("outputs satisfy all three assumptions and preprocess is idempotent") {
        const char* samples[] = {
            "A(a) -> B(a)",
            "R(a, b) ^ C(?x) -> A(?x) ^ B(?x)",
            "A(?x) ^ B(?y) ^ C(?z) -> R(?x, ?z) ^ A(?y)",
            "hasParent(?x, mary) ^ Person(?x) -> Parent(mary) ^ A(?x)",
        };
        for (const char* text : samples) {
            CAPTURE(text);
            auto out = preprocess(rule(text));
            for (const auto& r : out.rules) {
                REQUIRE(r.head().size() == 1);
                const auto& head = r.head().front();
                if (head.is_class_atom()) {
                    CHECK(head.term().is_variable());
                } else {
                    CHECK(head.subject().is_variable());
                    CHECK(head.object().is_variable());
                }
                for (const auto& atom : r.body()) {
                    for (const auto& t : atom.terms()) {
                        CHECK(t.is_variable());
                    }
                }
                CHECK(body_is_connected(r));
                auto again = preprocess(r);
                REQUIRE(again.rules.size() == 1);
                CHECK(again.rules.front().same_formula(r));
            }
        }
    }

    TEST_CASE("random rules stay equivalent through the pipeline") {
        testing::RuleGenerator gen(2026);
        for (int i = 0; i < 60; ++i) {
            auto r = gen.next("g" + std::to_string(i));
            CAPTURE(render_rule(r));
            auto out = preprocess(r);
            check_equivalent(r, out.rules);
            // Idempotence over the whole set.
            for (const auto& p : out.rules) {
                auto again = preprocess(p);
                REQUIRE(again.rules.size() == 1);
                CHECK(again.rules.front().same_formula(p));
            }
        }
    }
}
