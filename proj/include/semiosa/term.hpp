#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace semiosa {

// A term is a variable, a data literal, or a constructor application.
// Literals carry the data sort they were resolved against; the parser fills
// it in from the declared sort of the position the literal occupies.
struct Term {
    enum class Kind { var, data, app };

    Kind kind = Kind::app;
    std::string head;       // variable name, literal value, or constructor name
    std::string data_sort;  // literals only
    std::vector<Term> args; // applications only

    static Term var(std::string name) {
        Term t;
        t.kind = Kind::var;
        t.head = std::move(name);
        return t;
    }
    static Term lit(std::string value, std::string sort = {}) {
        Term t;
        t.kind = Kind::data;
        t.head = std::move(value);
        t.data_sort = std::move(sort);
        return t;
    }
    static Term app(std::string ctor, std::vector<Term> args = {}) {
        Term t;
        t.kind = Kind::app;
        t.head = std::move(ctor);
        t.args = std::move(args);
        return t;
    }
};

inline int cmp(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = a.head.compare(b.head)) return c < 0 ? -1 : 1;
    if (a.kind == Term::Kind::data) {
        if (int c = a.data_sort.compare(b.data_sort)) return c < 0 ? -1 : 1;
        return 0;
    }
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = cmp(a.args[i], b.args[i])) return c;
    return 0;
}

inline bool operator==(const Term& a, const Term& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return cmp(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return cmp(a, b) < 0; }

struct Atom {
    std::string rel;
    std::vector<Term> args;
};

inline int cmp(const Atom& a, const Atom& b) {
    if (int c = a.rel.compare(b.rel)) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = cmp(a.args[i], b.args[i])) return c;
    return 0;
}

inline bool operator==(const Atom& a, const Atom& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Atom& a, const Atom& b) { return cmp(a, b) != 0; }
inline bool operator<(const Atom& a, const Atom& b) { return cmp(a, b) < 0; }

inline std::string to_string(const Term& t) {
    switch (t.kind) {
        case Term::Kind::var: return t.head;
        case Term::Kind::data: return "\"" + t.head + "\"";
        case Term::Kind::app: {
            if (t.args.empty()) return t.head;
            std::string out = t.head + "(";
            for (size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ", ";
                out += to_string(t.args[i]);
            }
            return out + ")";
        }
    }
    return {};
}

inline std::string to_string(const Atom& a) {
    std::string out = a.rel + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(a.args[i]);
    }
    return out + ")";
}

inline bool is_ground(const Term& t) {
    if (t.kind == Term::Kind::var) return false;
    for (const Term& a : t.args)
        if (!is_ground(a)) return false;
    return true;
}

inline bool is_ground(const Atom& a) {
    for (const Term& t : a.args)
        if (!is_ground(t)) return false;
    return true;
}

inline void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::var) {
        out.insert(t.head);
        return;
    }
    for (const Term& a : t.args) collect_vars(a, out);
}

inline void collect_vars(const Atom& a, std::set<std::string>& out) {
    for (const Term& t : a.args) collect_vars(t, out);
}

using Binding = std::map<std::string, Term>;

inline Term substitute(const Term& t, const Binding& b) {
    if (t.kind == Term::Kind::var) {
        auto it = b.find(t.head);
        return it == b.end() ? t : it->second;
    }
    if (t.kind == Term::Kind::data) return t;
    Term out = Term::app(t.head);
    out.args.reserve(t.args.size());
    for (const Term& a : t.args) out.args.push_back(substitute(a, b));
    return out;
}

inline Atom substitute(const Atom& a, const Binding& b) {
    Atom out{a.rel, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(substitute(t, b));
    return out;
}

// One-way matching of a pattern against a ground term. Extends `b` on
// success and leaves it untouched on failure.
inline bool match(const Term& pattern, const Term& ground, Binding& b) {
    if (pattern.kind == Term::Kind::var) {
        auto it = b.find(pattern.head);
        if (it != b.end()) return it->second == ground;
        b.emplace(pattern.head, ground);
        return true;
    }
    if (pattern.kind != ground.kind) return false;
    if (pattern.kind == Term::Kind::data)
        return pattern.head == ground.head && pattern.data_sort == ground.data_sort;
    if (pattern.head != ground.head || pattern.args.size() != ground.args.size()) return false;
    Binding saved = b;
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        if (!match(pattern.args[i], ground.args[i], b)) {
            b = saved;
            return false;
        }
    }
    return true;
}

inline bool match(const Atom& pattern, const Atom& ground, Binding& b) {
    if (pattern.rel != ground.rel || pattern.args.size() != ground.args.size()) return false;
    Binding saved = b;
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        if (!match(pattern.args[i], ground.args[i], b)) {
            b = saved;
            return false;
        }
    }
    return true;
}

} // namespace semiosa
