#include "rowl/parser.hpp"

#include <cctype>
#include <vector>

#include "rowl/render.hpp"

namespace rowl {

namespace {

// ── Tokenizer ───────────────────────────────────────────────────────────────

enum class TokenKind { Name, Variable, LParen, RParen, Comma, Caret, Arrow, End };

struct Token {
    TokenKind kind;
    std::string text;  // name without the leading '?' for variables
    SourcePosition position;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct TokenizeResult {
    std::vector<Token> tokens;
    std::optional<ParseError> error;
};

TokenizeResult tokenize(const std::string& text) {
    TokenizeResult result;
    SourcePosition pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        SourcePosition start = pos;
        if (c == '(') {
            result.tokens.push_back({TokenKind::LParen, "(", start});
            advance(1);
        } else if (c == ')') {
            result.tokens.push_back({TokenKind::RParen, ")", start});
            advance(1);
        } else if (c == ',') {
            result.tokens.push_back({TokenKind::Comma, ",", start});
            advance(1);
        } else if (c == '^') {
            result.tokens.push_back({TokenKind::Caret, "^", start});
            advance(1);
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            result.tokens.push_back({TokenKind::Arrow, "->", start});
            advance(2);
        } else if (c == '?') {
            advance(1);
            if (i >= text.size() || !name_start(text[i])) {
                result.error = ParseError{ParseErrorKind::UnexpectedToken,
                                          "expected a variable name after '?'", start};
                return result;
            }
            std::size_t begin = i;
            while (i < text.size() && name_char(text[i])) {
                advance(1);
            }
            result.tokens.push_back(
                {TokenKind::Variable, text.substr(begin, i - begin), start});
        } else if (name_start(c)) {
            std::size_t begin = i;
            while (i < text.size() && name_char(text[i])) {
                advance(1);
            }
            // One optional prefix separator, as in owl:Thing.
            if (i + 1 < text.size() && text[i] == ':' && name_start(text[i + 1])) {
                advance(1);
                while (i < text.size() && name_char(text[i])) {
                    advance(1);
                }
            }
            result.tokens.push_back({TokenKind::Name, text.substr(begin, i - begin), start});
        } else {
            result.error = ParseError{ParseErrorKind::UnexpectedToken,
                                      std::string("unexpected character '") + c + "'", start};
            return result;
        }
    }
    // The end marker points at the last character so that every reported
    // position stays inside the text.
    SourcePosition end = pos;
    if (end.column > 1) {
        --end.column;
    }
    result.tokens.push_back({TokenKind::End, "", end});
    return result;
}

// ── Name resolution ─────────────────────────────────────────────────────────

bool is_universal_name(const std::string& name) {
    return name == "U" || name == "owl:topObjectProperty";
}

bool is_thing_name(const std::string& name) { return name == "owl:Thing"; }
bool is_nothing_name(const std::string& name) { return name == "owl:Nothing"; }

bool is_builtin_name(const std::string& name) {
    return is_universal_name(name) || is_thing_name(name) || is_nothing_name(name);
}

EntityName make_entity_name(const std::string& token_text) {
    auto colon = token_text.find(':');
    if (colon == std::string::npos) {
        return EntityName(token_text);
    }
    return EntityName(token_text.substr(colon + 1), token_text.substr(0, colon));
}

// ── Parser ──────────────────────────────────────────────────────────────────

class RuleParser {
public:
    RuleParser(std::vector<Token> tokens, const Signature& signature, bool auto_declare)
        : tokens_(std::move(tokens)), signature_(&signature), auto_declare_(auto_declare) {}

    ParseResult run(const std::string& rule_name) {
        auto body = parse_side(/*is_head=*/false);
        if (error_) {
            return *error_;
        }
        const Token& arrow = peek();
        if (arrow.kind != TokenKind::Arrow) {
            return fail(ParseErrorKind::UnexpectedToken, "expected '->', '^' or '('",
                        arrow.position);
        }
        if (body.empty()) {
            return fail(ParseErrorKind::EmptyBody, "rule has no body atoms", arrow.position);
        }
        next();
        auto head = parse_side(/*is_head=*/true);
        if (error_) {
            return *error_;
        }
        if (peek().kind != TokenKind::End) {
            return fail(ParseErrorKind::UnexpectedToken, "expected '^' or end of rule",
                        peek().position);
        }
        if (head.empty()) {
            return fail(ParseErrorKind::EmptyHead, "rule has no head atoms", arrow.position);
        }
        // z⃗ ⊆ x⃗: every head variable must occur in the body.
        std::set<Term> body_vars;
        for (const auto& a : body) {
            for (const auto& t : a.terms()) {
                if (t.is_variable()) {
                    body_vars.insert(t);
                }
            }
        }
        for (const auto& [var, position] : head_variables_) {
            if (!body_vars.count(var)) {
                return fail(ParseErrorKind::HeadVariableNotInBody,
                            "head variable ?" + var.name.display() +
                                " does not occur in the body",
                            position);
            }
        }
        return ParsedRule{Rule(rule_name, std::move(body), std::move(head)),
                          std::move(additions_)};
    }

private:
    const Token& peek() const { return tokens_[index_]; }
    const Token& next() { return tokens_[index_++]; }

    ParseError fail(ParseErrorKind kind, std::string message, SourcePosition position) {
        error_ = ParseError{kind, std::move(message), position};
        return *error_;
    }

    std::vector<Atom> parse_side(bool is_head) {
        std::vector<Atom> atoms;
        if (peek().kind != TokenKind::Name) {
            return atoms;  // empty side; the caller decides whether that is an error
        }
        while (true) {
            auto atom = parse_atom(is_head);
            if (!atom) {
                return atoms;
            }
            atoms.push_back(std::move(*atom));
            if (peek().kind != TokenKind::Caret) {
                return atoms;
            }
            next();
        }
    }

    std::optional<Atom> parse_atom(bool is_head) {
        const Token& pred = peek();
        if (pred.kind != TokenKind::Name) {
            fail(ParseErrorKind::UnexpectedToken, "expected a predicate name", pred.position);
            return std::nullopt;
        }
        next();
        if (peek().kind != TokenKind::LParen) {
            fail(ParseErrorKind::UnexpectedToken, "expected '(' after predicate name",
                 peek().position);
            return std::nullopt;
        }
        next();
        std::vector<Term> args;
        auto first = parse_term(is_head);
        if (!first) {
            return std::nullopt;
        }
        args.push_back(*first);
        if (peek().kind == TokenKind::Comma) {
            next();
            auto second = parse_term(is_head);
            if (!second) {
                return std::nullopt;
            }
            args.push_back(*second);
        }
        if (peek().kind == TokenKind::Comma) {
            fail(ParseErrorKind::ArityMismatch, "predicates take one or two arguments",
                 peek().position);
            return std::nullopt;
        }
        if (peek().kind != TokenKind::RParen) {
            fail(ParseErrorKind::UnexpectedToken, "expected ',' or ')'", peek().position);
            return std::nullopt;
        }
        next();
        return make_atom(pred, std::move(args));
    }

    std::optional<Term> parse_term(bool is_head) {
        const Token& tok = peek();
        if (tok.kind == TokenKind::Variable) {
            next();
            Term var = Term::variable(tok.text);
            if (is_head) {
                head_variables_.emplace_back(var, tok.position);
            }
            return var;
        }
        if (tok.kind != TokenKind::Name) {
            fail(ParseErrorKind::UnexpectedToken, "expected a term ('?variable' or individual)",
                 tok.position);
            return std::nullopt;
        }
        next();
        if (is_builtin_name(tok.text)) {
            fail(ParseErrorKind::SignatureKindConflict,
                 "'" + tok.text + "' cannot be used as an individual", tok.position);
            return std::nullopt;
        }
        EntityName name = make_entity_name(tok.text);
        if (declared_class(name) || declared_property(name)) {
            fail(ParseErrorKind::SignatureKindConflict,
                 "'" + tok.text + "' is declared as a " +
                     (declared_class(name) ? "class" : "property") +
                     " but used as an individual",
                 tok.position);
            return std::nullopt;
        }
        if (!declared_individual(name)) {
            if (!auto_declare_) {
                fail(ParseErrorKind::UnknownPredicate,
                     "undeclared individual '" + tok.text + "'", tok.position);
                return std::nullopt;
            }
            additions_.add_individual(name);
        }
        return Term::individual(name);
    }

    std::optional<Atom> make_atom(const Token& pred, std::vector<Term> args) {
        bool unary = args.size() == 1;
        if (is_universal_name(pred.text)) {
            if (unary) {
                fail(ParseErrorKind::ArityMismatch,
                     "'" + pred.text + "' is the universal property and takes two arguments",
                     pred.position);
                return std::nullopt;
            }
            return Atom::property_atom(PropertyExpression::universal(), args[0], args[1]);
        }
        if (is_thing_name(pred.text) || is_nothing_name(pred.text)) {
            if (!unary) {
                fail(ParseErrorKind::ArityMismatch,
                     "'" + pred.text + "' is a class and takes one argument", pred.position);
                return std::nullopt;
            }
            auto expr = is_thing_name(pred.text) ? ClassExpression::top()
                                                 : ClassExpression::bottom();
            return Atom::class_atom(expr, args[0]);
        }
        EntityName name = make_entity_name(pred.text);
        if (declared_individual(name)) {
            fail(ParseErrorKind::SignatureKindConflict,
                 "'" + pred.text + "' is declared as an individual but used as a predicate",
                 pred.position);
            return std::nullopt;
        }
        if (unary) {
            if (declared_property(name)) {
                fail(ParseErrorKind::ArityMismatch,
                     "property '" + pred.text + "' applied to one argument", pred.position);
                return std::nullopt;
            }
            if (!declared_class(name)) {
                if (!auto_declare_) {
                    fail(ParseErrorKind::UnknownPredicate,
                         "undeclared predicate '" + pred.text + "'", pred.position);
                    return std::nullopt;
                }
                additions_.add_class(name);
            }
            return Atom::class_atom(ClassExpression::named(name), args[0]);
        }
        if (declared_class(name)) {
            fail(ParseErrorKind::ArityMismatch,
                 "class '" + pred.text + "' applied to two arguments", pred.position);
            return std::nullopt;
        }
        if (!declared_property(name)) {
            if (!auto_declare_) {
                fail(ParseErrorKind::UnknownPredicate, "undeclared predicate '" + pred.text + "'",
                     pred.position);
                return std::nullopt;
            }
            additions_.add_property(name);
        }
        return Atom::property_atom(PropertyExpression(name), args[0], args[1]);
    }

    bool declared_class(const EntityName& n) const {
        return signature_->has_class(n) || additions_.has_class(n);
    }
    bool declared_property(const EntityName& n) const {
        return signature_->has_property(n) || additions_.has_property(n);
    }
    bool declared_individual(const EntityName& n) const {
        return signature_->has_individual(n) || additions_.has_individual(n);
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
    const Signature* signature_;
    bool auto_declare_;
    Signature additions_;
    std::vector<std::pair<Term, SourcePosition>> head_variables_;
    std::optional<ParseError> error_;
};

std::string render_predicate(const ClassExpression& expr) {
    switch (expr.kind()) {
        case ClassExpression::Kind::Named:
        case ClassExpression::Kind::Top:
        case ClassExpression::Kind::Bottom:
        case ClassExpression::Kind::Nominal:
            return manchester(expr);
        default:
            return "(" + manchester(expr) + ")";
    }
}

std::string render_atom(const Atom& atom) {
    if (atom.is_class_atom()) {
        return render_predicate(atom.expr()) + "(" + atom.term().display() + ")";
    }
    return manchester(atom.property()) + "(" + atom.subject().display() + ", " +
           atom.object().display() + ")";
}

std::string render_side(const std::vector<Atom>& atoms) {
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) {
            s += " ^ ";
        }
        s += render_atom(atoms[i]);
    }
    return s;
}

}  // namespace

ParseResult parse_rule(const std::string& text, const Signature& signature, bool auto_declare,
                       const std::string& rule_name) {
    auto tokens = tokenize(text);
    if (tokens.error) {
        return *tokens.error;
    }
    return RuleParser(std::move(tokens.tokens), signature, auto_declare).run(rule_name);
}

std::string render_rule(const Rule& rule) {
    return render_side(rule.body()) + " -> " + render_side(rule.head());
}

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::UnexpectedToken: return "UnexpectedToken";
        case ParseErrorKind::ArityMismatch: return "ArityMismatch";
        case ParseErrorKind::EmptyBody: return "EmptyBody";
        case ParseErrorKind::EmptyHead: return "EmptyHead";
        case ParseErrorKind::UnknownPredicate: return "UnknownPredicate";
        case ParseErrorKind::HeadVariableNotInBody: return "HeadVariableNotInBody";
        case ParseErrorKind::SignatureKindConflict: return "SignatureKindConflict";
    }
    return "UnexpectedToken";
}

}  // namespace rowl
