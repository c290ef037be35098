#include "rowl/render.hpp"

#include <json.hpp>

#include "rowl/parser.hpp"

namespace rowl {

namespace {

bool needs_parens(const ClassExpression& expr) {
    switch (expr.kind()) {
        case ClassExpression::Kind::Conjunction:
        case ClassExpression::Kind::Existential:
        case ClassExpression::Kind::SelfRestriction:
            return true;
        default:
            return false;
    }
}

std::string manchester_expr(const ClassExpression& expr, bool subexpression) {
    std::string s;
    switch (expr.kind()) {
        case ClassExpression::Kind::Top:
            return "owl:Thing";
        case ClassExpression::Kind::Bottom:
            return "owl:Nothing";
        case ClassExpression::Kind::Named:
            return expr.name().display();
        case ClassExpression::Kind::Nominal:
            return "{" + expr.name().display() + "}";
        case ClassExpression::Kind::Conjunction: {
            bool first = true;
            for (const auto& c : expr.conjuncts()) {
                if (!first) {
                    s += " and ";
                }
                s += manchester_expr(c, true);
                first = false;
            }
            break;
        }
        case ClassExpression::Kind::Existential:
            s = manchester(expr.property()) + " some " + manchester_expr(expr.filler(), true);
            break;
        case ClassExpression::Kind::SelfRestriction:
            s = manchester(expr.property()) + " Self";
            break;
    }
    if (subexpression && needs_parens(expr)) {
        return "(" + s + ")";
    }
    return s;
}

}  // namespace

std::string manchester(const ClassExpression& expr) {
    return manchester_expr(expr, false);
}

std::string manchester(const PropertyExpression& property) {
    if (property.is_universal()) {
        return "U";
    }
    if (property.inverted()) {
        return "inverse " + property.base().display();
    }
    return property.base().display();
}

std::string functional(const ClassExpression& expr) {
    switch (expr.kind()) {
        case ClassExpression::Kind::Top:
            return "owl:Thing";
        case ClassExpression::Kind::Bottom:
            return "owl:Nothing";
        case ClassExpression::Kind::Named:
            return expr.name().display();
        case ClassExpression::Kind::Nominal:
            return "ObjectOneOf(" + expr.name().display() + ")";
        case ClassExpression::Kind::Conjunction: {
            std::string s = "ObjectIntersectionOf(";
            bool first = true;
            for (const auto& c : expr.conjuncts()) {
                if (!first) {
                    s += " ";
                }
                s += functional(c);
                first = false;
            }
            return s + ")";
        }
        case ClassExpression::Kind::Existential:
            return "ObjectSomeValuesFrom(" + functional(expr.property()) + " " +
                   functional(expr.filler()) + ")";
        case ClassExpression::Kind::SelfRestriction:
            return "ObjectHasSelf(" + functional(expr.property()) + ")";
    }
    return "";
}

std::string functional(const PropertyExpression& property) {
    if (property.is_universal()) {
        return "owl:topObjectProperty";
    }
    if (property.inverted()) {
        return "ObjectInverseOf(" + property.base().display() + ")";
    }
    return property.base().display();
}

// ── Axioms and whole results ─────────────────────────────────────────────────

std::string render_axiom(const Axiom& axiom, OutputFormat format) {
    if (format == OutputFormat::ManchesterText) {
        if (axiom.kind() == Axiom::Kind::SubClassOf) {
            return manchester(axiom.sub()) + " SubClassOf " + manchester(axiom.sup());
        }
        std::string s;
        bool first = true;
        for (const auto& p : axiom.chain()) {
            if (!first) {
                s += " o ";
            }
            s += manchester(p);
            first = false;
        }
        return s + " SubPropertyOf: " + manchester(axiom.super());
    }
    // Functional text doubles as the structured-report embedding.
    if (axiom.kind() == Axiom::Kind::SubClassOf) {
        return "SubClassOf(" + functional(axiom.sub()) + " " + functional(axiom.sup()) + ")";
    }
    std::string s = "SubObjectPropertyOf(ObjectPropertyChain(";
    bool first = true;
    for (const auto& p : axiom.chain()) {
        if (!first) {
            s += " ";
        }
        s += functional(p);
        first = false;
    }
    return s + ") " + functional(axiom.super()) + ")";
}

namespace {

std::string comment_line(const std::string& text, OutputFormat format) {
    if (format == OutputFormat::ManchesterText) {
        return "# rule: " + text + "\n";
    }
    return "Annotation(rdfs:comment \"" + text + "\")\n";
}

std::string render_result_text(const TranslationResult& result, OutputFormat format) {
    std::string out;
    if (!result.translated()) {
        out += comment_line(render_rule(result.source_rule), format);
        if (format == OutputFormat::ManchesterText) {
            out += "# fallback: " + result.fallback_reason() + "\n";
        } else {
            out += "Annotation(rdfs:comment \"fallback: " + result.fallback_reason() +
                   "\")\n";
        }
        return out;
    }
    for (const auto& axiom : result.axioms()) {
        if (axiom.annotation()) {
            out += comment_line(*axiom.annotation(), format);
        }
        out += render_axiom(axiom, format) + "\n";
    }
    return out;
}

}  // namespace

std::string render_result(const TranslationResult& result, OutputFormat format) {
    if (format != OutputFormat::StructuredReport) {
        return render_result_text(result, format);
    }

    nlohmann::json report;
    report["format_version"] = 1;
    report["rule"] = render_rule(result.source_rule);
    report["rule_name"] = result.source_rule.name();
    report["outcome"] = result.translated() ? "axioms" : "fallback";

    auto axioms = nlohmann::json::array();
    auto violations = nlohmann::json::array();
    if (result.translated()) {
        for (const auto& axiom : result.axioms()) {
            axioms.push_back(render_axiom(axiom, OutputFormat::FunctionalText));
        }
        for (const auto& violation : check_regularity(result.axioms()).violations) {
            nlohmann::json v;
            auto cycle = nlohmann::json::array();
            for (const auto& name : violation.cycle) {
                cycle.push_back(name.display());
            }
            v["cycle"] = std::move(cycle);
            v["description"] = violation.description;
            auto involved = nlohmann::json::array();
            for (const auto& axiom : violation.axioms) {
                involved.push_back(render_axiom(axiom, OutputFormat::FunctionalText));
            }
            v["axioms"] = std::move(involved);
            violations.push_back(std::move(v));
        }
    }
    report["axioms"] = std::move(axioms);
    report["regularity_violations"] = std::move(violations);

    auto fresh = nlohmann::json::array();
    for (const auto& [name, cls] : result.fresh_properties) {
        fresh.push_back({{"name", name.display()}, {"class", functional(cls)}});
    }
    report["fresh_properties"] = std::move(fresh);

    if (result.translated()) {
        report["fallback_reason"] = nullptr;
    } else {
        report["fallback_reason"] = result.fallback_reason();
    }
    report["diagnostics"] = result.diagnostics;

    return report.dump(2) + "\n";
}

}  // namespace rowl
