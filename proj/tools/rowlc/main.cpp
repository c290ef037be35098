// rowlc — rule-to-axiom translator front end.
//
//   rowlc translate [file]   batch-translate a rule file (or standard input)
//   rowlc repl               interactive line-by-line session
//   rowlc check [file]       scan functional-text axioms for chain cycles
//   rowlc corpus             run the embedded evaluation corpus
//
// Exit codes: 0 success; 1 unreadable input; 2 fallbacks under keep/drop (or
// failed check/corpus); 3 parse errors; 4 first fallback under --fallback
// fail.  When several apply, the highest wins.

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rowl/corpus.hpp"
#include "rowl/model.hpp"
#include "rowl/oracle.hpp"
#include "rowl/parser.hpp"
#include "rowl/preprocess.hpp"
#include "rowl/render.hpp"
#include "rowl/transform.hpp"

namespace {

using namespace rowl;

enum class FallbackMode { Keep, Drop, Fail };

struct CliConfig {
    OutputFormat format = OutputFormat::ManchesterText;
    bool auto_declare = true;
    std::string fresh_prefix = "R";
    FallbackMode fallback_mode = FallbackMode::Keep;
    int max_domain = 2;
    std::optional<std::string> output_path;
    std::uint64_t seed = 1;
    std::uint64_t budget = oracle::kDefaultBudget;
    bool corpus_extended = false;
};

// ── Output sink ──────────────────────────────────────────────────────────────
// Everything destined for standard output is buffered so that --output can
// write the identical bytes to a file instead.

class Sink {
public:
    void append(const std::string& text) { buffer_ += text; }

    int flush(const std::optional<std::string>& path) {
        if (!path) {
            std::cout << buffer_;
            return 0;
        }
        std::ofstream out(*path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write to '" << *path << "'\n";
            return 1;
        }
        out << buffer_;
        return 0;
    }

private:
    std::string buffer_;
};

// ── Rule files ───────────────────────────────────────────────────────────────
// UTF-8 text; '#' starts a comment; blank lines are skipped; an entry is
// one rule per line, optionally prefixed by "<name>: " (the colon must be
// followed by whitespace).  Unnamed entries get rule_<k> for the k-th entry.

struct RuleEntry {
    std::string name;
    std::string text;
    int line = 0;
};

struct RuleFile {
    std::vector<RuleEntry> entries;
    std::vector<std::string> errors;  // duplicate-name complaints
};

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return "";
    }
    auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

RuleFile parse_rule_file(std::istream& in) {
    RuleFile file;
    std::set<std::string> names;
    std::string line;
    int line_number = 0;
    int entry_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        ++entry_number;

        RuleEntry entry;
        entry.line = line_number;
        entry.text = line;
        entry.name = "rule_" + std::to_string(entry_number);
        // "<name>: <rule>" — the colon must be followed by whitespace, so a
        // namespaced predicate like ex:Father(?x) is not mistaken for a name.
        std::size_t i = 0;
        while (i < line.size() && is_name_char(line[i])) {
            ++i;
        }
        if (i > 0 && i + 1 < line.size() && line[i] == ':' &&
            (line[i + 1] == ' ' || line[i + 1] == '\t')) {
            entry.name = line.substr(0, i);
            entry.text = trim(line.substr(i + 1));
        }
        if (!names.insert(entry.name).second) {
            file.errors.push_back("line " + std::to_string(line_number) +
                                  ": duplicate rule name '" + entry.name + "'");
            continue;
        }
        file.entries.push_back(std::move(entry));
    }
    return file;
}

// ── Functional-text axiom reading (for `check`) ──────────────────────────────

class AxiomReader {
public:
    explicit AxiomReader(const std::string& text) {
        std::string current;
        auto flush = [&] {
            if (!current.empty()) {
                tokens_.push_back(current);
                current.clear();
            }
        };
        for (char c : text) {
            if (c == '(' || c == ')') {
                flush();
                tokens_.push_back(std::string(1, c));
            } else if (c == ' ' || c == '\t') {
                flush();
            } else {
                current += c;
            }
        }
        flush();
    }

    Axiom axiom() {
        std::string head = next();
        if (head == "SubClassOf") {
            expect("(");
            auto sub = class_expression();
            auto sup = class_expression();
            expect(")");
            finish();
            return Axiom::subclass_of(std::move(sub), std::move(sup));
        }
        if (head != "SubObjectPropertyOf") {
            throw std::runtime_error("expected SubClassOf or SubObjectPropertyOf, got '" +
                                     head + "'");
        }
        expect("(");
        expect("ObjectPropertyChain");
        expect("(");
        std::vector<PropertyExpression> chain;
        while (peek() != ")") {
            chain.push_back(property());
        }
        expect(")");
        auto super = property();
        expect(")");
        finish();
        return Axiom::subproperty_chain_of(std::move(chain), std::move(super));
    }

private:
    std::string next() {
        if (index_ >= tokens_.size()) {
            throw std::runtime_error("unexpected end of axiom");
        }
        return tokens_[index_++];
    }
    const std::string& peek() {
        if (index_ >= tokens_.size()) {
            throw std::runtime_error("unexpected end of axiom");
        }
        return tokens_[index_];
    }
    void expect(const std::string& token) {
        std::string got = next();
        if (got != token) {
            throw std::runtime_error("expected '" + token + "', got '" + got + "'");
        }
    }
    void finish() {
        if (index_ != tokens_.size()) {
            throw std::runtime_error("trailing tokens after axiom");
        }
    }

    static EntityName name_of(const std::string& token) {
        auto colon = token.find(':');
        if (colon == std::string::npos) {
            return EntityName(token);
        }
        return EntityName(token.substr(colon + 1), token.substr(0, colon));
    }

    PropertyExpression property() {
        std::string t = next();
        if (t == "owl:topObjectProperty") {
            return PropertyExpression::universal();
        }
        if (t == "ObjectInverseOf") {
            expect("(");
            auto base = name_of(next());
            expect(")");
            return PropertyExpression(base, true);
        }
        return PropertyExpression(name_of(t));
    }

    ClassExpression class_expression() {
        std::string t = next();
        if (t == "owl:Thing") {
            return ClassExpression::top();
        }
        if (t == "owl:Nothing") {
            return ClassExpression::bottom();
        }
        if (t == "ObjectOneOf") {
            expect("(");
            auto individual = name_of(next());
            expect(")");
            return ClassExpression::nominal(individual);
        }
        if (t == "ObjectIntersectionOf") {
            expect("(");
            std::vector<ClassExpression> conjuncts;
            while (peek() != ")") {
                conjuncts.push_back(class_expression());
            }
            expect(")");
            return ClassExpression::conjunction(std::move(conjuncts));
        }
        if (t == "ObjectSomeValuesFrom") {
            expect("(");
            auto p = property();
            auto filler = class_expression();
            expect(")");
            return ClassExpression::existential(std::move(p), std::move(filler));
        }
        if (t == "ObjectHasSelf") {
            expect("(");
            auto p = property();
            expect(")");
            return ClassExpression::self_restriction(std::move(p));
        }
        if (t == "(" || t == ")") {
            throw std::runtime_error("unexpected '" + t + "'");
        }
        return ClassExpression::named(name_of(t));
    }

    std::vector<std::string> tokens_;
    std::size_t index_ = 0;
};

// ── Shared translation session ───────────────────────────────────────────────

struct Session {
    explicit Session(const CliConfig& config)
        : registry(config.fresh_prefix), auto_declare(config.auto_declare) {}

    Signature signature;
    FreshPropertyRegistry registry;
    bool auto_declare;

    std::variant<TranslationResult, ParseError> feed(const std::string& text,
                                                     const std::string& name) {
        auto parsed = parse_rule(text, signature, auto_declare, name);
        if (auto* error = std::get_if<ParseError>(&parsed)) {
            return *error;
        }
        auto& ok = std::get<ParsedRule>(parsed);
        signature.merge(ok.additions);
        return translate(ok.rule, signature, registry);
    }
};

// ── translate ────────────────────────────────────────────────────────────────

int cmd_translate(const std::string& input_path, const CliConfig& config) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!input_path.empty() && input_path != "-") {
        file.open(input_path);
        if (!file) {
            std::cerr << "error: cannot read '" << input_path << "'\n";
            return 1;
        }
        in = &file;
    }

    RuleFile rules = parse_rule_file(*in);
    bool parse_errors = !rules.errors.empty();
    for (const auto& e : rules.errors) {
        std::cerr << "error: " << e << "\n";
    }

    Sink sink;
    Session session(config);
    bool any_fallback = false;
    for (const auto& entry : rules.entries) {
        auto outcome = session.feed(entry.text, entry.name);
        if (const auto* error = std::get_if<ParseError>(&outcome)) {
            parse_errors = true;
            std::cerr << "error: line " << entry.line << ", column "
                      << error->position.column << ": " << error->message << "\n";
            continue;
        }
        const auto& result = std::get<TranslationResult>(outcome);
        if (result.translated()) {
            sink.append(render_result(result, config.format));
            continue;
        }

        any_fallback = true;
        std::cerr << "fallback: rule '" << entry.name
                  << "': " << result.fallback_reason() << "\n";
        switch (config.fallback_mode) {
            case FallbackMode::Keep:
                if (config.format == OutputFormat::StructuredReport) {
                    sink.append(render_result(result, config.format));
                } else {
                    sink.append("# FALLBACK: " + render_rule(result.source_rule) + "\n");
                    sink.append("# reason: " + result.fallback_reason() + "\n");
                }
                break;
            case FallbackMode::Drop:
                break;
            case FallbackMode::Fail:
                if (int rc = sink.flush(config.output_path)) {
                    return rc;
                }
                return 4;
        }
    }

    if (int rc = sink.flush(config.output_path)) {
        return rc;
    }
    if (parse_errors) {
        return 3;
    }
    return any_fallback ? 2 : 0;
}

// ── repl ─────────────────────────────────────────────────────────────────────

int cmd_repl(const CliConfig& config) {
    struct Snapshot {
        Signature signature;
        FreshPropertyRegistry registry;
        std::size_t axiom_count;
        std::string name;
    };

    Session session(config);
    std::vector<Axiom> store;
    std::vector<Snapshot> snapshots;
    bool interactive = isatty(fileno(stdin));
    int entered = 0;
    std::string line;

    auto print_signature = [&] {
        auto list = [](const std::set<EntityName>& names) {
            std::string s;
            for (const auto& n : names) {
                s += (s.empty() ? "" : ", ") + n.display();
            }
            return s.empty() ? "(none)" : s;
        };
        std::cout << "classes: " << list(session.signature.classes()) << "\n"
                  << "properties: " << list(session.signature.properties()) << "\n"
                  << "individuals: " << list(session.signature.individuals()) << "\n";
    };

    while (true) {
        if (interactive) {
            std::cout << "rowl> " << std::flush;
        }
        if (!std::getline(std::cin, line)) {
            break;
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line == ":quit") {
            break;
        }
        if (line == ":sig") {
            print_signature();
            continue;
        }
        if (line == ":undo") {
            if (snapshots.empty()) {
                std::cout << "nothing to undo\n";
                continue;
            }
            auto& snapshot = snapshots.back();
            session.signature = std::move(snapshot.signature);
            session.registry = std::move(snapshot.registry);
            store.erase(store.begin() + static_cast<std::ptrdiff_t>(snapshot.axiom_count),
                        store.end());
            std::cout << "removed rule '" << snapshot.name << "' and its axioms\n";
            snapshots.pop_back();
            --entered;
            continue;
        }
        if (line[0] == ':') {
            std::cout << "unknown command '" << line << "' (try :sig, :undo, :quit)\n";
            continue;
        }

        std::string name = "rule_" + std::to_string(entered + 1);
        std::string text = line;
        std::size_t i = 0;
        while (i < line.size() && is_name_char(line[i])) {
            ++i;
        }
        if (i > 0 && i + 1 < line.size() && line[i] == ':' &&
            (line[i + 1] == ' ' || line[i + 1] == '\t')) {
            name = line.substr(0, i);
            text = trim(line.substr(i + 1));
        }

        Snapshot snapshot{session.signature, session.registry, store.size(), name};
        auto outcome = session.feed(text, name);
        if (const auto* error = std::get_if<ParseError>(&outcome)) {
            std::cout << "parse error at column " << error->position.column << ": "
                      << error->message << "\n";
            continue;
        }
        ++entered;
        snapshots.push_back(std::move(snapshot));
        const auto& result = std::get<TranslationResult>(outcome);
        if (!result.translated()) {
            std::cout << "fallback: " << result.fallback_reason() << "\n";
            continue;
        }
        if (config.format == OutputFormat::StructuredReport) {
            std::cout << render_result(result, config.format);
        } else {
            for (const auto& axiom : result.axioms()) {
                std::cout << render_axiom(axiom, config.format) << "\n";
            }
        }
        store.insert(store.end(), result.axioms().begin(), result.axioms().end());
    }
    return 0;
}

// ── check ────────────────────────────────────────────────────────────────────

int cmd_check(const std::string& input_path, const CliConfig& config) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!input_path.empty() && input_path != "-") {
        file.open(input_path);
        if (!file) {
            std::cerr << "error: cannot read '" << input_path << "'\n";
            return 1;
        }
        in = &file;
    }

    std::vector<Axiom> axioms;
    std::string line;
    int line_number = 0;
    while (std::getline(*in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' ||
            stripped.rfind("Annotation(", 0) == 0) {
            continue;
        }
        try {
            axioms.push_back(AxiomReader(stripped).axiom());
        } catch (const std::exception& e) {
            std::cerr << "error: line " << line_number << ": " << e.what() << "\n";
            return 3;
        }
    }

    Sink sink;
    auto report = check_regularity(axioms);
    for (const auto& violation : report.violations) {
        sink.append(violation.description + "\n");
        for (const auto& axiom : violation.axioms) {
            sink.append("  " + render_axiom(axiom, OutputFormat::FunctionalText) + "\n");
        }
    }
    if (int rc = sink.flush(config.output_path)) {
        return rc;
    }
    return report.ok() ? 0 : 2;
}

// ── corpus ───────────────────────────────────────────────────────────────────

int cmd_corpus(const CliConfig& config) {
    auto cases = corpus::evaluation_cases();
    if (config.corpus_extended) {
        cases.push_back(corpus::single_variable_variant());
    }
    auto run = corpus::run(cases, config.max_domain, config.budget, config.seed);

    Sink sink;
    int passed = 0;
    for (const auto& outcome : run.outcomes) {
        std::string status = outcome.ok() ? "pass" : "FAIL";
        if (outcome.sampled) {
            status += " (sampled)";
        }
        std::string row = outcome.id;
        row.resize(std::max<std::size_t>(row.size(), 6), ' ');
        sink.append(row + " " + status +
                    (outcome.detail.empty() ? "" : "  " + outcome.detail) + "\n");
        passed += outcome.ok();
    }
    sink.append(std::to_string(passed) + "/" + std::to_string(run.outcomes.size()) +
                " passed\n");
    if (int rc = sink.flush(config.output_path)) {
        return rc;
    }
    return run.all_ok() ? 0 : 2;
}

std::uint64_t budget_from_environment() {
    const char* raw = std::getenv("ROWLC_MAX_BUDGET");
    if (!raw || !*raw) {
        return oracle::kDefaultBudget;
    }
    char* end = nullptr;
    unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || value == 0) {
        std::cerr << "warning: ignoring invalid ROWLC_MAX_BUDGET '" << raw << "'\n";
        return oracle::kDefaultBudget;
    }
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rule-to-axiom translator"};
    app.require_subcommand(1);

    CliConfig config;
    config.budget = budget_from_environment();

    std::map<std::string, OutputFormat> format_names{
        {"manchester", OutputFormat::ManchesterText},
        {"functional", OutputFormat::FunctionalText},
        {"report", OutputFormat::StructuredReport},
    };
    std::map<std::string, FallbackMode> fallback_names{
        {"keep", FallbackMode::Keep},
        {"drop", FallbackMode::Drop},
        {"fail", FallbackMode::Fail},
    };

    std::string output_path;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", config.format, "output format")
            ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
        cmd->add_option("--output", output_path, "write standard output to this file");
    };

    std::string translate_input;
    auto* translate_cmd =
        app.add_subcommand("translate", "translate a rule file (default: standard input)");
    translate_cmd->add_option("file", translate_input, "rule file, '-' for standard input");
    add_common(translate_cmd);
    translate_cmd->add_flag("--auto-declare,!--no-auto-declare", config.auto_declare,
                            "declare unknown names on first use (default: on)");
    translate_cmd->add_option("--fresh-prefix", config.fresh_prefix,
                              "prefix for generated helper properties");
    translate_cmd->add_option("--fallback", config.fallback_mode,
                              "untranslatable rules: keep, drop, or fail")
        ->transform(CLI::CheckedTransformer(fallback_names, CLI::ignore_case));

    auto* repl_cmd = app.add_subcommand("repl", "interactive session");
    add_common(repl_cmd);
    repl_cmd->add_flag("--auto-declare,!--no-auto-declare", config.auto_declare,
                       "declare unknown names on first use (default: on)");
    repl_cmd->add_option("--fresh-prefix", config.fresh_prefix,
                         "prefix for generated helper properties");

    std::string check_input;
    auto* check_cmd =
        app.add_subcommand("check", "check functional-text axioms for chain cycles");
    check_cmd->add_option("file", check_input, "axiom file, '-' for standard input");
    add_common(check_cmd);

    auto* corpus_cmd = app.add_subcommand("corpus", "run the embedded evaluation corpus");
    add_common(corpus_cmd);
    corpus_cmd->add_option("--max-domain", config.max_domain, "largest model size checked")
        ->check(CLI::Range(1, 8));
    corpus_cmd->add_option("--seed", config.seed,
                           "seed for sampled oracle runs (used when the "
                           "enumeration budget is exceeded)");
    corpus_cmd->add_flag("--extended", config.corpus_extended,
                         "include the thirteenth, single-variable-head case");

    CLI11_PARSE(app, argc, argv);

    if (!output_path.empty()) {
        config.output_path = output_path;
    }

    if (translate_cmd->parsed()) {
        return cmd_translate(translate_input, config);
    }
    if (repl_cmd->parsed()) {
        return cmd_repl(config);
    }
    if (check_cmd->parsed()) {
        return cmd_check(check_input, config);
    }
    return cmd_corpus(config);
}
