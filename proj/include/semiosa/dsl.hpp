#pragma once

#include "blend.hpp"
#include "diag.hpp"
#include "dynamics.hpp"
#include "morphism.hpp"
#include "rational.hpp"
#include "system.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace semiosa::dsl {

// Text form of a workspace. A file is a sequence of system, morphism,
// scenario, and blend declarations. Keywords are contextual: any spelling
// is a legal name where a name is expected. In term position a bare
// identifier starting with an uppercase letter reads as a variable and
// anything else as a constructor; literals of data sorts are quoted.

struct ScenarioDecl {
    struct CandidateDecl {
        std::string label;
        Rational weight;
        std::string target;
        std::string morphism;
    };
    struct ComponentDecl {
        FStep f;
        std::vector<CandidateDecl> candidates;
    };

    std::string name;
    std::string init;
    std::uint64_t seed = 0;
    Rational gamma_up = Rational(1, 5);
    Rational gamma_down = Rational(1, 10);
    std::vector<ComponentDecl> components;
};

struct BlendDecl {
    std::string name;
    std::string init;
    std::optional<FStep> f0;
    std::string target;
    std::string target_mu;
    std::string source;
    std::string source_mu;
    std::optional<FStep> f1_target;
    std::optional<FStep> f1_source;
    bool match_auto = true;
    std::string via; // association system for automatic matching, may be empty
    Correspondence explicit_corr;
    std::optional<FStep> f2;
    std::uint64_t threshold = 0;
};

struct Workspace {
    std::map<std::string, SignSystem> systems;
    std::map<std::string, SemioticMorphism> morphisms;
    std::map<std::string, ScenarioDecl> scenarios;
    std::map<std::string, BlendDecl> blends;
};

struct LoadResult {
    Workspace ws;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

namespace detail {

struct Token {
    enum class Kind { ident, number, string, punct, end };
    Kind kind = Kind::end;
    std::string text;
    int line = 1;
    int col = 1;
};

struct SyntaxAbort {};

inline std::vector<Token> lex(const std::string& text, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    auto error = [&](const std::string& msg) {
        diags.push_back(make_diag(DiagKind::syntax, "BadToken", "", msg, line, col));
        out.push_back({Token::Kind::end, "", line, col});
        throw SyntaxAbort{};
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(c);
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') { bump(text[i]); ++i; }
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_')) ++j;
            out.push_back({Token::Kind::ident, text.substr(i, j - i), tl, tc});
            while (i < j) { bump(text[i]); ++i; }
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && (text[j] == '.' || text[j] == '/') && j + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            out.push_back({Token::Kind::number, text.substr(i, j - i), tl, tc});
            while (i < j) { bump(text[i]); ++i; }
            continue;
        }
        if (c == '"') {
            std::string value;
            bump(c);
            ++i;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                if (d == '"') {
                    bump(d);
                    ++i;
                    closed = true;
                    break;
                }
                if (d == '\n') break;
                if (d == '\\') {
                    if (i + 1 >= text.size()) break;
                    char e = text[i + 1];
                    if (e == '"') value += '"';
                    else if (e == '\\') value += '\\';
                    else if (e == 'n') value += '\n';
                    else if (e == 't') value += '\t';
                    else error(std::string("unknown escape \\") + e);
                    bump(d);
                    bump(e);
                    i += 2;
                    continue;
                }
                value += d;
                bump(d);
                ++i;
            }
            if (!closed) error("unterminated string literal");
            out.push_back({Token::Kind::string, value, tl, tc});
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::punct, "->", tl, tc});
            bump('-');
            bump('>');
            i += 2;
            continue;
        }
        if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::punct, "=>", tl, tc});
            bump('=');
            bump('>');
            i += 2;
            continue;
        }
        if (std::string("{}():;,<~").find(c) != std::string::npos) {
            out.push_back({Token::Kind::punct, std::string(1, c), tl, tc});
            bump(c);
            ++i;
            continue;
        }
        error(std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Kind::end, "", line, col});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
        : toks_(std::move(toks)), diags_(diags) {}

    void parse_file(Workspace& ws) {
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind != Token::Kind::ident)
                error("expected a top-level declaration");
            if (t.text == "system") parse_system(ws);
            else if (t.text == "morphism") parse_morphism(ws);
            else if (t.text == "scenario") parse_scenario(ws);
            else if (t.text == "blend") parse_blend(ws);
            else error("expected system, morphism, scenario, or blend");
        }
    }

    Atom parse_single_atom() {
        Atom a = parse_atom();
        if (!at_end()) error("trailing input after the atom");
        return a;
    }

  private:
    std::vector<Token> toks_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    const Token& get() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
    bool at_end() const { return peek().kind == Token::Kind::end; }

    [[noreturn]] void error(const std::string& msg) {
        const Token& t = peek();
        diags_.push_back(make_diag(DiagKind::syntax, "Unexpected", "", msg, t.line, t.col));
        throw SyntaxAbort{};
    }

    bool at_punct(const char* p) const {
        return peek().kind == Token::Kind::punct && peek().text == p;
    }
    bool at_ident(const char* s) const {
        return peek().kind == Token::Kind::ident && peek().text == s;
    }
    void expect_punct(const char* p) {
        if (!at_punct(p)) error(std::string("expected '") + p + "'");
        ++pos_;
    }
    bool accept_punct(const char* p) {
        if (!at_punct(p)) return false;
        ++pos_;
        return true;
    }
    void expect_keyword(const char* s) {
        if (!at_ident(s)) error(std::string("expected '") + s + "'");
        ++pos_;
    }
    bool accept_keyword(const char* s) {
        if (!at_ident(s)) return false;
        ++pos_;
        return true;
    }
    std::string expect_name(const char* what) {
        if (peek().kind != Token::Kind::ident) error(std::string("expected ") + what);
        return get().text;
    }
    std::uint64_t expect_nat(const char* what) {
        if (peek().kind != Token::Kind::number) error(std::string("expected ") + what);
        const std::string& s = peek().text;
        if (s.find('.') != std::string::npos || s.find('/') != std::string::npos)
            error(std::string(what) + " must be a plain natural number");
        try {
            std::uint64_t v = std::stoull(s);
            ++pos_;
            return v;
        } catch (const std::out_of_range&) {
            error(std::string(what) + " does not fit in 64 bits");
        }
    }
    Rational expect_rational(const char* what) {
        if (peek().kind != Token::Kind::number) error(std::string("expected ") + what);
        auto r = parse_rational(peek().text);
        if (!r) error(std::string("cannot read ") + what + " '" + peek().text + "'");
        ++pos_;
        return *r;
    }

    void duplicate(const std::string& where, const std::string& what, const Token& at) {
        diags_.push_back(make_diag(DiagKind::validate, "DuplicateName", where,
                                   what + " is declared twice", at.line, at.col));
    }

    // Terms and atoms. Bare uppercase identifiers are variables; everything
    // else is a constructor, nullary when written without parentheses.
    Term parse_term() {
        if (peek().kind == Token::Kind::string) return Term::lit(get().text, "");
        if (peek().kind != Token::Kind::ident) error("expected a term");
        Token t = get();
        if (at_punct("(")) {
            ++pos_;
            std::vector<Term> args;
            if (!at_punct(")")) {
                args.push_back(parse_term());
                while (accept_punct(",")) args.push_back(parse_term());
            }
            expect_punct(")");
            Term out = Term::app(t.text);
            out.args = std::move(args);
            return out;
        }
        if (std::isupper(static_cast<unsigned char>(t.text[0]))) return Term::var(t.text);
        return Term::app(t.text);
    }

    Atom parse_atom() {
        Atom a;
        a.rel = expect_name("a relation name");
        expect_punct("(");
        if (!at_punct(")")) {
            a.args.push_back(parse_term());
            while (accept_punct(",")) a.args.push_back(parse_term());
        }
        expect_punct(")");
        return a;
    }

    // Declaration statements shared between system bodies and deltas.
    void parse_sort_stmt(const std::string& where, std::map<std::string, SortDecl>& sorts) {
        Token at = peek();
        std::string name = expect_name("a sort name");
        expect_keyword("level");
        std::uint64_t level = expect_nat("a level");
        expect_punct(";");
        if (!sorts.emplace(name, SortDecl{name, level}).second)
            duplicate(where, "sort " + name, at);
    }
    void parse_data_stmt(const std::string& where, std::map<std::string, DataSortDecl>& data) {
        Token at = peek();
        std::string name = expect_name("a data sort name");
        expect_punct(";");
        if (!data.emplace(name, DataSortDecl{name}).second)
            duplicate(where, "data sort " + name, at);
    }
    void parse_subsort_stmt(const std::string& where,
                            std::set<std::pair<std::string, std::string>>& edges) {
        Token at = peek();
        std::string a = expect_name("a sort name");
        expect_punct("<");
        std::string b = expect_name("a sort name");
        expect_punct(";");
        if (!edges.insert({a, b}).second)
            duplicate(where, "subsort " + a + " < " + b, at);
    }
    void parse_ctor_stmt(const std::string& where, std::map<std::string, CtorDecl>& ctors) {
        Token at = peek();
        CtorDecl d;
        d.name = expect_name("a constructor name");
        expect_punct(":");
        while (!at_punct("->")) d.args.push_back(expect_name("an argument sort"));
        expect_punct("->");
        d.result = expect_name("a result sort");
        expect_keyword("prio");
        d.priority = expect_nat("a priority");
        expect_punct(";");
        std::string name = d.name;
        if (!ctors.emplace(name, std::move(d)).second)
            duplicate(where, "constructor " + name, at);
    }
    void parse_rel_stmt(const std::string& where, std::map<std::string, RelDecl>& rels) {
        Token at = peek();
        RelDecl d;
        d.name = expect_name("a relation name");
        expect_punct("(");
        if (!at_punct(")")) {
            d.args.push_back(expect_name("an argument sort"));
            while (accept_punct(",")) d.args.push_back(expect_name("an argument sort"));
        }
        expect_punct(")");
        d.environmental = accept_keyword("env");
        expect_punct(";");
        std::string name = d.name;
        if (!rels.emplace(name, std::move(d)).second)
            duplicate(where, "relation " + name, at);
    }
    void parse_axiom_stmt(const std::string& where, AxiomKind kind,
                          std::map<std::string, Axiom>& axioms) {
        Token at = peek();
        std::string name = expect_name("an axiom name");
        expect_keyword("rank");
        std::uint64_t rank = expect_nat("a rank");
        expect_punct(":");
        Axiom ax;
        switch (kind) {
        case AxiomKind::fact:
            ax = Axiom::fact(name, rank, parse_atom());
            break;
        case AxiomKind::rule: {
            std::vector<Atom> body{parse_atom()};
            while (accept_punct(",")) body.push_back(parse_atom());
            expect_punct("=>");
            ax = Axiom::rule(name, rank, std::move(body), parse_atom());
            break;
        }
        case AxiomKind::denial: {
            std::vector<Atom> body{parse_atom()};
            while (accept_punct(",")) body.push_back(parse_atom());
            ax = Axiom::denial(name, rank, std::move(body));
            break;
        }
        }
        expect_punct(";");
        if (!axioms.emplace(name, std::move(ax)).second)
            duplicate(where, "axiom " + name, at);
    }

    void parse_system(Workspace& ws) {
        expect_keyword("system");
        Token at = peek();
        std::string name = expect_name("a system name");
        std::string where = "system " + name;
        SignSystem sys;
        sys.name = name;
        expect_punct("{");
        while (!accept_punct("}")) {
            if (accept_keyword("sort")) parse_sort_stmt(where, sys.sorts);
            else if (accept_keyword("data")) parse_data_stmt(where, sys.data_sorts);
            else if (accept_keyword("subsort")) parse_subsort_stmt(where, sys.subsorts);
            else if (accept_keyword("ctor")) parse_ctor_stmt(where, sys.ctors);
            else if (accept_keyword("rel")) parse_rel_stmt(where, sys.rels);
            else if (accept_keyword("fact")) parse_axiom_stmt(where, AxiomKind::fact, sys.axioms);
            else if (accept_keyword("rule")) parse_axiom_stmt(where, AxiomKind::rule, sys.axioms);
            else if (accept_keyword("deny")) parse_axiom_stmt(where, AxiomKind::denial, sys.axioms);
            else error("expected a system statement");
        }
        if (!ws.systems.emplace(name, std::move(sys)).second)
            duplicate("", "system " + name, at);
    }

    void parse_morphism(Workspace& ws) {
        expect_keyword("morphism");
        Token at = peek();
        SemioticMorphism m;
        m.name = expect_name("a morphism name");
        expect_punct(":");
        m.from = expect_name("a system name");
        expect_punct("->");
        m.to = expect_name("a system name");
        std::string where = "morphism " + m.name;
        expect_punct("{");
        while (!accept_punct("}")) {
            std::map<std::string, std::string>* target = nullptr;
            const char* what = nullptr;
            if (accept_keyword("sort")) { target = &m.sort_map; what = "sort"; }
            else if (accept_keyword("data")) { target = &m.data_map; what = "data sort"; }
            else if (accept_keyword("ctor")) { target = &m.ctor_map; what = "constructor"; }
            else if (accept_keyword("rel")) { target = &m.rel_map; what = "relation"; }
            else error("expected a mapping statement");
            Token mt = peek();
            std::string src = expect_name("a source name");
            expect_punct("->");
            std::string dst = expect_name("a target name");
            expect_punct(";");
            if (!target->emplace(src, dst).second)
                duplicate(where, std::string(what) + " mapping for " + src, mt);
        }
        std::string name = m.name;
        if (!ws.morphisms.emplace(name, std::move(m)).second)
            duplicate("", "morphism " + name, at);
    }

    FStep parse_fstep(const std::string& where) {
        FStep f;
        expect_punct("{");
        expect_keyword("diverge");
        expect_punct("{");
        while (!accept_punct("}")) {
            if (accept_keyword("sort")) parse_sort_stmt(where, f.divergence.sorts);
            else if (accept_keyword("data")) parse_data_stmt(where, f.divergence.data_sorts);
            else if (accept_keyword("subsort")) parse_subsort_stmt(where, f.divergence.subsorts);
            else if (accept_keyword("ctor")) parse_ctor_stmt(where, f.divergence.ctors);
            else error("expected a divergence statement");
        }
        expect_keyword("converge");
        expect_punct("{");
        while (!accept_punct("}")) {
            if (accept_keyword("rel")) parse_rel_stmt(where, f.convergence.rels);
            else if (accept_keyword("fact"))
                parse_axiom_stmt(where, AxiomKind::fact, f.convergence.axioms);
            else if (accept_keyword("rule"))
                parse_axiom_stmt(where, AxiomKind::rule, f.convergence.axioms);
            else if (accept_keyword("deny"))
                parse_axiom_stmt(where, AxiomKind::denial, f.convergence.axioms);
            else error("expected a convergence statement");
        }
        expect_punct("}");
        accept_punct(";");
        return f;
    }

    void parse_scenario(Workspace& ws) {
        expect_keyword("scenario");
        Token at = peek();
        ScenarioDecl sc;
        sc.name = expect_name("a scenario name");
        std::string where = "scenario " + sc.name;
        expect_punct("{");
        while (!accept_punct("}")) {
            if (accept_keyword("init")) {
                sc.init = expect_name("a system name");
                expect_punct(";");
            } else if (accept_keyword("seed")) {
                sc.seed = expect_nat("a seed");
                expect_punct(";");
            } else if (accept_keyword("gamma")) {
                sc.gamma_up = expect_rational("the reinforcement gain");
                sc.gamma_down = expect_rational("the reinforcement loss");
                expect_punct(";");
            } else if (accept_keyword("component")) {
                ScenarioDecl::ComponentDecl comp;
                expect_punct("{");
                expect_keyword("diverge");
                expect_punct("{");
                while (!accept_punct("}")) {
                    if (accept_keyword("sort")) parse_sort_stmt(where, comp.f.divergence.sorts);
                    else if (accept_keyword("data"))
                        parse_data_stmt(where, comp.f.divergence.data_sorts);
                    else if (accept_keyword("subsort"))
                        parse_subsort_stmt(where, comp.f.divergence.subsorts);
                    else if (accept_keyword("ctor"))
                        parse_ctor_stmt(where, comp.f.divergence.ctors);
                    else error("expected a divergence statement");
                }
                expect_keyword("converge");
                expect_punct("{");
                while (!accept_punct("}")) {
                    if (accept_keyword("rel")) parse_rel_stmt(where, comp.f.convergence.rels);
                    else if (accept_keyword("fact"))
                        parse_axiom_stmt(where, AxiomKind::fact, comp.f.convergence.axioms);
                    else if (accept_keyword("rule"))
                        parse_axiom_stmt(where, AxiomKind::rule, comp.f.convergence.axioms);
                    else if (accept_keyword("deny"))
                        parse_axiom_stmt(where, AxiomKind::denial, comp.f.convergence.axioms);
                    else error("expected a convergence statement");
                }
                while (accept_keyword("candidate")) {
                    ScenarioDecl::CandidateDecl c;
                    c.label = expect_name("a candidate label");
                    expect_keyword("weight");
                    c.weight = expect_rational("a weight");
                    expect_keyword("target");
                    c.target = expect_name("a system name");
                    expect_keyword("morphism");
                    c.morphism = expect_name("a morphism name");
                    expect_punct(";");
                    comp.candidates.push_back(std::move(c));
                }
                expect_punct("}");
                sc.components.push_back(std::move(comp));
            } else {
                error("expected a scenario statement");
            }
        }
        if (sc.init.empty())
            diags_.push_back(make_diag(DiagKind::resolve, "MissingInit", where,
                                       "scenario declares no initial system", at.line, at.col));
        std::string name = sc.name;
        if (!ws.scenarios.emplace(name, std::move(sc)).second)
            duplicate("", "scenario " + name, at);
    }

    void parse_blend(Workspace& ws) {
        expect_keyword("blend");
        Token at = peek();
        BlendDecl b;
        b.name = expect_name("a blend name");
        std::string where = "blend " + b.name;
        expect_punct("{");
        while (!accept_punct("}")) {
            if (accept_keyword("init")) {
                b.init = expect_name("a system name");
                expect_punct(";");
            } else if (accept_keyword("f0")) {
                b.f0 = parse_fstep(where);
            } else if (accept_keyword("target")) {
                b.target = expect_name("a system name");
                expect_keyword("via");
                b.target_mu = expect_name("a morphism name");
                expect_punct(";");
            } else if (accept_keyword("source")) {
                b.source = expect_name("a system name");
                expect_keyword("via");
                b.source_mu = expect_name("a morphism name");
                expect_punct(";");
            } else if (accept_keyword("f1target")) {
                b.f1_target = parse_fstep(where);
            } else if (accept_keyword("f1source")) {
                b.f1_source = parse_fstep(where);
            } else if (accept_keyword("match")) {
                if (accept_keyword("auto")) {
                    b.match_auto = true;
                    if (accept_keyword("via")) b.via = expect_name("a system name");
                    expect_punct(";");
                } else {
                    b.match_auto = false;
                    expect_punct("{");
                    while (!accept_punct("}")) {
                        std::set<std::pair<std::string, std::string>>* pairs = nullptr;
                        if (accept_keyword("sort")) pairs = &b.explicit_corr.sort_pairs;
                        else if (accept_keyword("ctor")) pairs = &b.explicit_corr.ctor_pairs;
                        else if (accept_keyword("rel")) pairs = &b.explicit_corr.rel_pairs;
                        else error("expected a correspondence statement");
                        Token pt = peek();
                        std::string t = expect_name("a target name");
                        expect_punct("~");
                        std::string s = expect_name("a source name");
                        expect_punct(";");
                        if (!pairs->insert({t, s}).second)
                            duplicate(where, "pair " + t + " ~ " + s, pt);
                    }
                    accept_punct(";");
                }
            } else if (accept_keyword("f2")) {
                b.f2 = parse_fstep(where);
            } else if (accept_keyword("threshold")) {
                b.threshold = expect_nat("a threshold");
                expect_punct(";");
            } else {
                error("expected a blend statement");
            }
        }
        for (const char* missing :
             {b.init.empty() ? "init" : nullptr, !b.f0 ? "f0" : nullptr,
              b.target.empty() ? "target" : nullptr, b.source.empty() ? "source" : nullptr,
              !b.f1_target ? "f1target" : nullptr, !b.f1_source ? "f1source" : nullptr,
              !b.f2 ? "f2" : nullptr})
            if (missing)
                diags_.push_back(make_diag(DiagKind::resolve, "MissingStatement", where,
                                           std::string("blend declares no ") + missing, at.line,
                                           at.col));
        std::string name = b.name;
        if (!ws.blends.emplace(name, std::move(b)).second)
            duplicate("", "blend " + name, at);
    }
};

inline void check_references(const Workspace& ws, std::vector<Diagnostic>& diags) {
    auto need_system = [&](const std::string& n, const std::string& where) {
        if (!n.empty() && !ws.systems.count(n))
            diags.push_back(make_diag(DiagKind::resolve, "UnresolvedReference", where,
                                      "unknown system " + n));
    };
    auto need_morphism = [&](const std::string& n, const std::string& where) {
        if (!n.empty() && !ws.morphisms.count(n))
            diags.push_back(make_diag(DiagKind::resolve, "UnresolvedReference", where,
                                      "unknown morphism " + n));
    };
    for (const auto& [name, m] : ws.morphisms) {
        need_system(m.from, "morphism " + name);
        need_system(m.to, "morphism " + name);
    }
    for (const auto& [name, sc] : ws.scenarios) {
        std::string where = "scenario " + name;
        need_system(sc.init, where);
        for (const auto& comp : sc.components)
            for (const auto& c : comp.candidates) {
                need_system(c.target, where);
                need_morphism(c.morphism, where);
            }
    }
    for (const auto& [name, b] : ws.blends) {
        std::string where = "blend " + name;
        need_system(b.init, where);
        need_system(b.target, where);
        need_system(b.source, where);
        need_system(b.via, where);
        need_morphism(b.target_mu, where);
        need_morphism(b.source_mu, where);
    }
}

} // namespace detail

inline LoadResult load_text(const std::string& text) {
    LoadResult out;
    try {
        auto tokens = detail::lex(text, out.diagnostics);
        detail::Parser parser(std::move(tokens), out.diagnostics);
        parser.parse_file(out.ws);
    } catch (const detail::SyntaxAbort&) {
        return out;
    }

    for (auto& [name, sys] : out.ws.systems) {
        resolve_literals(sys);
        auto diags = validate_system(sys);
        out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
        for (const auto& [an, ax] : sys.axioms) {
            std::set<std::string> vars;
            for (const Atom& a : ax.body) collect_vars(a, vars);
            if (ax.kind != AxiomKind::denial) collect_vars(ax.head, vars);
            for (const auto& v : vars)
                if (sys.ctors.count(v))
                    out.diagnostics.push_back(make_diag(
                        DiagKind::resolve, "AmbiguousName", "system " + name + " / axiom " + an,
                        v + " reads as a variable but names a constructor; write " + v +
                            "() to apply the constructor"));
        }
    }
    detail::check_references(out.ws, out.diagnostics);
    return out;
}

inline LoadResult load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_text(buf.str());
}

// One ground-or-not atom on its own, as written inside axioms. Used for
// probe atoms arriving from outside a file.
inline Atom parse_atom_text(const std::string& text) {
    std::vector<Diagnostic> diags;
    try {
        auto tokens = detail::lex(text, diags);
        detail::Parser parser(std::move(tokens), diags);
        return parser.parse_single_atom();
    } catch (const detail::SyntaxAbort&) {
        fail("BadProbe", diags.empty() ? "cannot read atom '" + text + "'"
                                       : diags.front().format());
    }
}

// Turning name-level declarations into runnable structures. Lookups fail
// with UnresolvedReference, though loading has already reported those.

inline const SignSystem& need_system(const Workspace& ws, const std::string& name) {
    auto it = ws.systems.find(name);
    if (it == ws.systems.end()) fail("UnresolvedReference", "unknown system " + name);
    return it->second;
}

inline const SemioticMorphism& need_morphism(const Workspace& ws, const std::string& name) {
    auto it = ws.morphisms.find(name);
    if (it == ws.morphisms.end()) fail("UnresolvedReference", "unknown morphism " + name);
    return it->second;
}

inline Scenario resolve_scenario(const Workspace& ws, const ScenarioDecl& decl) {
    Scenario sc;
    sc.name = decl.name;
    sc.initial = need_system(ws, decl.init);
    sc.seed = decl.seed;
    sc.gamma_up = decl.gamma_up;
    sc.gamma_down = decl.gamma_down;
    for (const auto& comp : decl.components) {
        SemioticComponent c;
        c.f = comp.f;
        for (const auto& cand : comp.candidates)
            c.candidates.push_back({cand.label, cand.weight, need_system(ws, cand.target),
                                    need_morphism(ws, cand.morphism)});
        sc.components.push_back(std::move(c));
    }
    return sc;
}

inline BlendInput resolve_blend(const Workspace& ws, const BlendDecl& decl) {
    auto need_step = [&](const std::optional<FStep>& f, const char* what) -> const FStep& {
        if (!f) fail("UnresolvedReference", "blend " + decl.name + " declares no " + what);
        return *f;
    };
    BlendInput in;
    in.name = decl.name;
    in.xi0 = need_system(ws, decl.init);
    in.f0 = need_step(decl.f0, "f0");
    in.target = need_system(ws, decl.target);
    in.mu1 = need_morphism(ws, decl.target_mu);
    in.source = need_system(ws, decl.source);
    in.mu1p = need_morphism(ws, decl.source_mu);
    in.f1_target = need_step(decl.f1_target, "f1target");
    in.f1_source = need_step(decl.f1_source, "f1source");
    in.match_auto = decl.match_auto;
    in.explicit_corr = decl.explicit_corr;
    if (!decl.via.empty()) in.via = need_system(ws, decl.via);
    in.f2 = need_step(decl.f2, "f2");
    in.threshold = decl.threshold;
    return in;
}

// Canonical printing. Statements are grouped by category in a fixed order
// and sorted by name inside each group, so printing is a normal form:
// loading the output reproduces the workspace exactly. Scenario components
// and candidates keep their declared order, which is semantically relevant.

namespace detail {

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\\\"";
        else if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else out += c;
    }
    out += '"';
    return out;
}

inline void print_term(std::string& out, const Term& t) {
    switch (t.kind) {
    case Term::Kind::var:
        out += t.head;
        return;
    case Term::Kind::data:
        out += quote(t.head);
        return;
    case Term::Kind::app:
        out += t.head;
        if (!t.args.empty() || std::isupper(static_cast<unsigned char>(t.head[0]))) {
            out += '(';
            for (size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ", ";
                print_term(out, t.args[i]);
            }
            out += ')';
        }
        return;
    }
}

inline void print_atom(std::string& out, const Atom& a) {
    out += a.rel;
    out += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        print_term(out, a.args[i]);
    }
    out += ')';
}

inline void print_decls(std::string& out, const std::string& indent,
                        const std::map<std::string, SortDecl>& sorts,
                        const std::map<std::string, DataSortDecl>& data,
                        const std::set<std::pair<std::string, std::string>>& subsorts,
                        const std::map<std::string, CtorDecl>& ctors) {
    for (const auto& [n, d] : sorts)
        out += indent + "sort " + n + " level " + std::to_string(d.level) + ";\n";
    for (const auto& [n, d] : data) out += indent + "data " + n + ";\n";
    for (const auto& [a, b] : subsorts) out += indent + "subsort " + a + " < " + b + ";\n";
    for (const auto& [n, d] : ctors) {
        out += indent + "ctor " + n + " :";
        for (const auto& a : d.args) out += " " + a;
        out += " -> " + d.result + " prio " + std::to_string(d.priority) + ";\n";
    }
}

inline void print_rels_axioms(std::string& out, const std::string& indent,
                              const std::map<std::string, RelDecl>& rels,
                              const std::map<std::string, Axiom>& axioms) {
    for (const auto& [n, d] : rels) {
        out += indent + "rel " + n + "(";
        for (size_t i = 0; i < d.args.size(); ++i) {
            if (i) out += ", ";
            out += d.args[i];
        }
        out += ")";
        if (d.environmental) out += " env";
        out += ";\n";
    }
    for (AxiomKind kind : {AxiomKind::fact, AxiomKind::rule, AxiomKind::denial}) {
        for (const auto& [n, ax] : axioms) {
            if (ax.kind != kind) continue;
            const char* kw = kind == AxiomKind::fact ? "fact"
                             : kind == AxiomKind::rule ? "rule"
                                                       : "deny";
            out += indent + kw + " " + n + " rank " + std::to_string(ax.rank) + " : ";
            if (kind == AxiomKind::fact) {
                print_atom(out, ax.head);
            } else {
                for (size_t i = 0; i < ax.body.size(); ++i) {
                    if (i) out += ", ";
                    print_atom(out, ax.body[i]);
                }
                if (kind == AxiomKind::rule) {
                    out += " => ";
                    print_atom(out, ax.head);
                }
            }
            out += ";\n";
        }
    }
}

inline void print_fstep(std::string& out, const std::string& indent, const FStep& f) {
    out += indent + "diverge {\n";
    print_decls(out, indent + "    ", f.divergence.sorts, f.divergence.data_sorts,
                f.divergence.subsorts, f.divergence.ctors);
    out += indent + "}\n";
    out += indent + "converge {\n";
    print_rels_axioms(out, indent + "    ", f.convergence.rels, f.convergence.axioms);
    out += indent + "}\n";
}

} // namespace detail

inline std::string print_system(const SignSystem& sys) {
    std::string out = "system " + sys.name + " {\n";
    detail::print_decls(out, "    ", sys.sorts, sys.data_sorts, sys.subsorts, sys.ctors);
    detail::print_rels_axioms(out, "    ", sys.rels, sys.axioms);
    out += "}\n";
    return out;
}

inline std::string print_morphism(const SemioticMorphism& m) {
    std::string out = "morphism " + m.name + " : " + m.from + " -> " + m.to + " {\n";
    for (const auto& [k, v] : m.sort_map) out += "    sort " + k + " -> " + v + ";\n";
    for (const auto& [k, v] : m.data_map) out += "    data " + k + " -> " + v + ";\n";
    for (const auto& [k, v] : m.ctor_map) out += "    ctor " + k + " -> " + v + ";\n";
    for (const auto& [k, v] : m.rel_map) out += "    rel " + k + " -> " + v + ";\n";
    out += "}\n";
    return out;
}

inline std::string print_scenario(const ScenarioDecl& sc) {
    std::string out = "scenario " + sc.name + " {\n";
    out += "    init " + sc.init + ";\n";
    out += "    seed " + std::to_string(sc.seed) + ";\n";
    out += "    gamma " + to_fraction(sc.gamma_up) + " " + to_fraction(sc.gamma_down) + ";\n";
    for (const auto& comp : sc.components) {
        out += "    component {\n";
        detail::print_fstep(out, "        ", comp.f);
        for (const auto& c : comp.candidates)
            out += "        candidate " + c.label + " weight " + to_fraction(c.weight) +
                   " target " + c.target + " morphism " + c.morphism + ";\n";
        out += "    }\n";
    }
    out += "}\n";
    return out;
}

inline std::string print_blend(const BlendDecl& b) {
    std::string out = "blend " + b.name + " {\n";
    out += "    init " + b.init + ";\n";
    auto step = [&](const char* kw, const std::optional<FStep>& f) {
        if (!f) return;
        out += std::string("    ") + kw + " {\n";
        detail::print_fstep(out, "        ", *f);
        out += "    }\n";
    };
    step("f0", b.f0);
    out += "    target " + b.target + " via " + b.target_mu + ";\n";
    out += "    source " + b.source + " via " + b.source_mu + ";\n";
    step("f1target", b.f1_target);
    step("f1source", b.f1_source);
    if (b.match_auto) {
        out += "    match auto";
        if (!b.via.empty()) out += " via " + b.via;
        out += ";\n";
    } else {
        out += "    match {\n";
        for (const auto& [t, s] : b.explicit_corr.sort_pairs)
            out += "        sort " + t + " ~ " + s + ";\n";
        for (const auto& [t, s] : b.explicit_corr.ctor_pairs)
            out += "        ctor " + t + " ~ " + s + ";\n";
        for (const auto& [t, s] : b.explicit_corr.rel_pairs)
            out += "        rel " + t + " ~ " + s + ";\n";
        out += "    }\n";
    }
    step("f2", b.f2);
    out += "    threshold " + std::to_string(b.threshold) + ";\n";
    out += "}\n";
    return out;
}

inline std::string print_workspace(const Workspace& ws) {
    std::string out;
    bool first = true;
    auto sep = [&]() {
        if (!first) out += "\n";
        first = false;
    };
    for (const auto& [n, sys] : ws.systems) {
        sep();
        out += print_system(sys);
    }
    for (const auto& [n, m] : ws.morphisms) {
        sep();
        out += print_morphism(m);
    }
    for (const auto& [n, sc] : ws.scenarios) {
        sep();
        out += print_scenario(sc);
    }
    for (const auto& [n, b] : ws.blends) {
        sep();
        out += print_blend(b);
    }
    return out;
}

} // namespace semiosa::dsl
