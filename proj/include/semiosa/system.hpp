#pragma once

#include "diag.hpp"
#include "term.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace semiosa {

// A sign system bundles a vocabulary with ranked axioms:
//   * sorts, partially ordered by subsort edges and stratified into levels,
//   * opaque data sorts holding literal values,
//   * prioritized constructors building terms,
//   * relations over sorts, each internal or environmental,
//   * ranked axioms: ground facts, Horn rules, and denials.
// Declarations are keyed by name, so iteration order is deterministic and
// names are unique per category by construction.

struct SortDecl {
    std::string name;
    std::uint64_t level = 0;
    bool operator==(const SortDecl&) const = default;
};

struct DataSortDecl {
    std::string name;
    bool operator==(const DataSortDecl&) const = default;
};

struct CtorDecl {
    std::string name;
    std::vector<std::string> args; // sort or data sort names
    std::string result;            // ordinary sort name
    std::uint64_t priority = 0;
    bool operator==(const CtorDecl&) const = default;
};

struct RelDecl {
    std::string name;
    std::vector<std::string> args; // sort or data sort names
    bool environmental = false;
    bool operator==(const RelDecl&) const = default;
};

enum class AxiomKind { fact, rule, denial };

// Facts keep the atom in `head` with an empty body. Rules use both. Denials
// have only a body; deriving all of it is what the axiom forbids.
struct Axiom {
    std::string name;
    std::uint64_t rank = 0;
    AxiomKind kind = AxiomKind::fact;
    std::vector<Atom> body;
    Atom head;

    static Axiom fact(std::string name, std::uint64_t rank, Atom a) {
        Axiom ax;
        ax.name = std::move(name);
        ax.rank = rank;
        ax.kind = AxiomKind::fact;
        ax.head = std::move(a);
        return ax;
    }
    static Axiom rule(std::string name, std::uint64_t rank, std::vector<Atom> body, Atom head) {
        Axiom ax;
        ax.name = std::move(name);
        ax.rank = rank;
        ax.kind = AxiomKind::rule;
        ax.body = std::move(body);
        ax.head = std::move(head);
        return ax;
    }
    static Axiom denial(std::string name, std::uint64_t rank, std::vector<Atom> body) {
        Axiom ax;
        ax.name = std::move(name);
        ax.rank = rank;
        ax.kind = AxiomKind::denial;
        ax.body = std::move(body);
        return ax;
    }
};

inline bool operator==(const Axiom& a, const Axiom& b) {
    return a.name == b.name && a.rank == b.rank && a.kind == b.kind && a.body == b.body &&
           (a.kind == AxiomKind::denial || a.head == b.head);
}
inline bool operator!=(const Axiom& a, const Axiom& b) { return !(a == b); }

struct SignSystem {
    std::string name;
    std::map<std::string, SortDecl> sorts;
    std::map<std::string, DataSortDecl> data_sorts;
    std::set<std::pair<std::string, std::string>> subsorts; // declared edges, sub < super
    std::map<std::string, CtorDecl> ctors;
    std::map<std::string, RelDecl> rels;
    std::map<std::string, Axiom> axioms;

    bool empty() const {
        return sorts.empty() && data_sorts.empty() && subsorts.empty() && ctors.empty() &&
               rels.empty() && axioms.empty();
    }
};

// Reflexive-transitive view of the declared subsort edges.
struct SubsortOrder {
    std::map<std::string, std::set<std::string>> above; // strict reachability

    bool leq(const std::string& a, const std::string& b) const {
        if (a == b) return true;
        auto it = above.find(a);
        return it != above.end() && it->second.count(b) > 0;
    }
};

inline SubsortOrder build_order(const SignSystem& sys) {
    SubsortOrder o;
    for (const auto& [sub, super] : sys.subsorts) o.above[sub].insert(super);
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto& [sub, supers] : o.above) {
            std::set<std::string> add;
            for (const std::string& s : supers) {
                auto it = o.above.find(s);
                if (it == o.above.end()) continue;
                for (const std::string& t : it->second)
                    if (!supers.count(t)) add.insert(t);
            }
            if (!add.empty()) {
                supers.insert(add.begin(), add.end());
                grew = true;
            }
        }
    }
    return o;
}

// Strict comparable pairs (a, b) with a <= b and a != b.
inline std::set<std::pair<std::string, std::string>> order_pairs(const SignSystem& sys) {
    std::set<std::pair<std::string, std::string>> out;
    SubsortOrder o = build_order(sys);
    for (const auto& [sub, supers] : o.above)
        for (const std::string& s : supers)
            if (s != sub) out.emplace(sub, s);
    return out;
}

namespace detail {

// Least sort of a ground term, or an explanation of why there is none.
// Ordinary sorts compare through the subsort order; data sorts only to
// themselves.
inline std::optional<std::string> try_least_sort(const SignSystem& sys, const SubsortOrder& ord,
                                                 const Term& t, std::string* why) {
    auto reject = [&](const std::string& msg) -> std::optional<std::string> {
        if (why) *why = msg;
        return std::nullopt;
    };
    switch (t.kind) {
        case Term::Kind::var:
            return reject("term contains variable " + t.head);
        case Term::Kind::data:
            if (t.data_sort.empty())
                return reject("literal \"" + t.head + "\" has no resolved data sort");
            if (!sys.data_sorts.count(t.data_sort))
                return reject("data sort " + t.data_sort + " is not declared");
            return t.data_sort;
        case Term::Kind::app: {
            auto it = sys.ctors.find(t.head);
            if (it == sys.ctors.end()) return reject("constructor " + t.head + " is not declared");
            const CtorDecl& c = it->second;
            if (c.args.size() != t.args.size())
                return reject("constructor " + t.head + " expects " +
                              std::to_string(c.args.size()) + " arguments, got " +
                              std::to_string(t.args.size()));
            for (size_t i = 0; i < t.args.size(); ++i) {
                auto ls = try_least_sort(sys, ord, t.args[i], why);
                if (!ls) return std::nullopt;
                const std::string& want = c.args[i];
                bool ok;
                if (sys.data_sorts.count(want) || sys.data_sorts.count(*ls))
                    ok = *ls == want;
                else
                    ok = ord.leq(*ls, want);
                if (!ok)
                    return reject("argument " + std::to_string(i + 1) + " of " + t.head +
                                  " has least sort " + *ls + ", not below " + want);
            }
            return c.result;
        }
    }
    return reject("malformed term");
}

inline bool well_sorted(const SignSystem& sys, const SubsortOrder& ord, const Atom& a,
                        std::string* why) {
    auto it = sys.rels.find(a.rel);
    if (it == sys.rels.end()) {
        if (why) *why = "relation " + a.rel + " is not declared";
        return false;
    }
    if (it->second.args.size() != a.args.size()) {
        if (why)
            *why = "relation " + a.rel + " expects " + std::to_string(it->second.args.size()) +
                   " arguments, got " + std::to_string(a.args.size());
        return false;
    }
    for (size_t i = 0; i < a.args.size(); ++i) {
        auto ls = try_least_sort(sys, ord, a.args[i], why);
        if (!ls) return false;
        const std::string& want = it->second.args[i];
        bool ok;
        if (sys.data_sorts.count(want) || sys.data_sorts.count(*ls))
            ok = *ls == want;
        else
            ok = ord.leq(*ls, want);
        if (!ok) {
            if (why)
                *why = "argument " + std::to_string(i + 1) + " of " + a.rel + " has least sort " +
                       *ls + ", not below " + want;
            return false;
        }
    }
    return true;
}

// Name and arity checks that make sense for atoms still containing
// variables. Full sortedness is decided per grounding.
inline void check_atom_shape(const SignSystem& sys, const Atom& a, const std::string& where,
                             std::vector<Diagnostic>& out) {
    auto rel = sys.rels.find(a.rel);
    if (rel == sys.rels.end())
        out.push_back(make_diag(DiagKind::validate, "UnknownRelation", where,
                                "relation " + a.rel + " is not declared"));
    else if (rel->second.args.size() != a.args.size())
        out.push_back(make_diag(DiagKind::validate, "ArityMismatch", where,
                                "relation " + a.rel + " expects " +
                                    std::to_string(rel->second.args.size()) + " arguments, got " +
                                    std::to_string(a.args.size())));
    std::vector<const Term*> stack;
    for (const Term& t : a.args) stack.push_back(&t);
    while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->kind == Term::Kind::app) {
            auto c = sys.ctors.find(t->head);
            if (c == sys.ctors.end())
                out.push_back(make_diag(DiagKind::validate, "UnknownConstructor", where,
                                        "constructor " + t->head + " is not declared"));
            else if (c->second.args.size() != t->args.size())
                out.push_back(make_diag(DiagKind::validate, "ArityMismatch", where,
                                        "constructor " + t->head + " expects " +
                                            std::to_string(c->second.args.size()) +
                                            " arguments, got " + std::to_string(t->args.size())));
            for (const Term& sub : t->args) stack.push_back(&sub);
        } else if (t->kind == Term::Kind::data) {
            if (t->data_sort.empty())
                out.push_back(make_diag(DiagKind::validate, "UnresolvedLiteral", where,
                                        "literal \"" + t->head +
                                            "\" occupies a position that is not a data sort"));
            else if (!sys.data_sorts.count(t->data_sort))
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "data sort " + t->data_sort + " is not declared"));
        }
    }
}

// Walks an axiom and stamps each literal with the data sort declared for the
// position it sits in. Positions typed by an ordinary sort leave the literal
// unresolved; validation reports it.
inline void resolve_term_literals(const SignSystem& sys, Term& t, const std::string& expected) {
    if (t.kind == Term::Kind::data) {
        if (t.data_sort.empty() && sys.data_sorts.count(expected)) t.data_sort = expected;
        return;
    }
    if (t.kind != Term::Kind::app) return;
    auto it = sys.ctors.find(t.head);
    for (size_t i = 0; i < t.args.size(); ++i) {
        std::string want;
        if (it != sys.ctors.end() && i < it->second.args.size()) want = it->second.args[i];
        resolve_term_literals(sys, t.args[i], want);
    }
}

inline void resolve_atom_literals(const SignSystem& sys, Atom& a) {
    auto it = sys.rels.find(a.rel);
    for (size_t i = 0; i < a.args.size(); ++i) {
        std::string want;
        if (it != sys.rels.end() && i < it->second.args.size()) want = it->second.args[i];
        resolve_term_literals(sys, a.args[i], want);
    }
}

} // namespace detail

inline void resolve_literals(const SignSystem& sys, Axiom& ax) {
    for (Atom& a : ax.body) detail::resolve_atom_literals(sys, a);
    if (ax.kind != AxiomKind::denial) detail::resolve_atom_literals(sys, ax.head);
}

inline void resolve_literals(SignSystem& sys) {
    for (auto& [name, ax] : sys.axioms) resolve_literals(sys, ax);
}

// Least sort of a ground term. Throws IllSorted when the term does not
// type-check against the system's declarations.
inline std::string least_sort(const SignSystem& sys, const Term& t) {
    SubsortOrder ord = build_order(sys);
    std::string why;
    auto ls = detail::try_least_sort(sys, ord, t, &why);
    if (!ls) fail("IllSorted", why);
    return *ls;
}

// Every violated invariant yields one diagnostic; an empty result means the
// system is valid. Checks: name uniqueness across sorts and data sorts,
// resolution of every referenced name, acyclicity of the subsort order,
// data sorts staying out of subsort edges, arities, ground well-sorted
// facts, nonempty rule and denial bodies, and rule safety (head variables
// bound by the body).
inline std::vector<Diagnostic> validate_system(const SignSystem& sys) {
    std::vector<Diagnostic> out;
    const std::string sysname = "system " + sys.name;

    for (const auto& [name, _] : sys.sorts)
        if (sys.data_sorts.count(name))
            out.push_back(make_diag(DiagKind::validate, "DuplicateName", sysname,
                                    name + " is declared both as a sort and as a data sort"));

    auto known_sort = [&](const std::string& n) {
        return sys.sorts.count(n) || sys.data_sorts.count(n);
    };

    for (const auto& [sub, super] : sys.subsorts) {
        const std::string where = sysname + " / subsort " + sub + " < " + super;
        for (const std::string& end : {sub, super}) {
            if (sys.data_sorts.count(end))
                out.push_back(make_diag(DiagKind::validate, "DataSortInSubsort", where,
                                        "data sort " + end + " cannot take part in a subsort edge"));
            else if (!sys.sorts.count(end))
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "sort " + end + " is not declared"));
        }
        if (sub == super)
            out.push_back(make_diag(DiagKind::validate, "SubsortCycle", where,
                                    "sort " + sub + " is a subsort of itself"));
    }

    // Cycles are reported once per strongly connected component.
    {
        SubsortOrder ord = build_order(sys);
        std::set<std::string> seen;
        for (const auto& [a, supers] : ord.above) {
            if (seen.count(a) || !supers.count(a)) continue;
            std::vector<std::string> comp;
            for (const std::string& b : supers)
                if (ord.leq(b, a)) comp.push_back(b);
            std::string members;
            for (const std::string& m : comp) {
                seen.insert(m);
                if (!members.empty()) members += ", ";
                members += m;
            }
            out.push_back(make_diag(DiagKind::validate, "SubsortCycle", sysname,
                                    "subsort cycle through " + members));
        }
    }

    for (const auto& [name, c] : sys.ctors) {
        const std::string where = sysname + " / ctor " + name;
        for (const std::string& a : c.args)
            if (!known_sort(a))
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "argument sort " + a + " is not declared"));
        if (!sys.sorts.count(c.result)) {
            if (sys.data_sorts.count(c.result))
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "result " + c.result +
                                            " is a data sort; constructors build ordinary sorts"));
            else
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "result sort " + c.result + " is not declared"));
        }
    }

    for (const auto& [name, r] : sys.rels) {
        const std::string where = sysname + " / rel " + name;
        for (const std::string& a : r.args)
            if (!known_sort(a))
                out.push_back(make_diag(DiagKind::validate, "UnknownSort", where,
                                        "argument sort " + a + " is not declared"));
    }

    SubsortOrder ord = build_order(sys);
    for (const auto& [name, ax] : sys.axioms) {
        const char* kindname = ax.kind == AxiomKind::fact   ? "fact "
                               : ax.kind == AxiomKind::rule ? "rule "
                                                            : "deny ";
        const std::string where = sysname + " / " + kindname + name;
        switch (ax.kind) {
            case AxiomKind::fact: {
                if (!ax.body.empty())
                    out.push_back(make_diag(DiagKind::validate, "MalformedAxiom", where,
                                            "facts take no body"));
                detail::check_atom_shape(sys, ax.head, where, out);
                if (!is_ground(ax.head)) {
                    out.push_back(make_diag(DiagKind::validate, "NonGroundFact", where,
                                            "fact atoms must be ground"));
                    break;
                }
                std::string why;
                if (!detail::well_sorted(sys, ord, ax.head, &why))
                    out.push_back(make_diag(DiagKind::validate, "IllSortedFact", where, why));
                break;
            }
            case AxiomKind::rule: {
                if (ax.body.empty())
                    out.push_back(make_diag(DiagKind::validate, "EmptyBody", where,
                                            "rules need at least one body atom"));
                for (const Atom& a : ax.body) detail::check_atom_shape(sys, a, where, out);
                detail::check_atom_shape(sys, ax.head, where, out);
                std::set<std::string> bodyvars, headvars;
                for (const Atom& a : ax.body) collect_vars(a, bodyvars);
                collect_vars(ax.head, headvars);
                for (const std::string& v : headvars)
                    if (!bodyvars.count(v))
                        out.push_back(make_diag(DiagKind::validate, "UnsafeRule", where,
                                                "head variable " + v +
                                                    " does not occur in the body"));
                break;
            }
            case AxiomKind::denial: {
                if (ax.body.empty())
                    out.push_back(make_diag(DiagKind::validate, "EmptyBody", where,
                                            "denials need at least one body atom"));
                for (const Atom& a : ax.body) detail::check_atom_shape(sys, a, where, out);
                break;
            }
        }
    }

    return out;
}

} // namespace semiosa
