#pragma once

#include "closure.hpp"
#include "system.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semiosa {

// A semiotic morphism is a partial, name-level map between two sign systems.
// Partiality is legitimate: anything unmapped is simply not carried over.
// Data sorts may only be mapped to themselves.
struct SemioticMorphism {
    std::string name;
    std::string from;
    std::string to;
    std::map<std::string, std::string> sort_map;
    std::map<std::string, std::string> data_map;
    std::map<std::string, std::string> ctor_map;
    std::map<std::string, std::string> rel_map;

    size_t mapping_count() const {
        return sort_map.size() + data_map.size() + ctor_map.size() + rel_map.size();
    }
};

inline bool same_mappings(const SemioticMorphism& a, const SemioticMorphism& b) {
    return a.sort_map == b.sort_map && a.data_map == b.data_map && a.ctor_map == b.ctor_map &&
           a.rel_map == b.rel_map;
}

// Identity morphism on everything `sys` declares.
inline SemioticMorphism identity_morphism(const SignSystem& sys, std::string name = "id") {
    SemioticMorphism m;
    m.name = std::move(name);
    m.from = sys.name;
    m.to = sys.name;
    for (const auto& [n, _] : sys.sorts) m.sort_map.emplace(n, n);
    for (const auto& [n, _] : sys.data_sorts) m.data_map.emplace(n, n);
    for (const auto& [n, _] : sys.ctors) m.ctor_map.emplace(n, n);
    for (const auto& [n, _] : sys.rels) m.rel_map.emplace(n, n);
    return m;
}

// Keeps only the mappings whose source element the given system declares.
inline SemioticMorphism restrict_morphism(const SemioticMorphism& m, const SignSystem& sys) {
    SemioticMorphism out;
    out.name = m.name;
    out.from = sys.name;
    out.to = m.to;
    for (const auto& [k, v] : m.sort_map)
        if (sys.sorts.count(k)) out.sort_map.emplace(k, v);
    for (const auto& [k, v] : m.data_map)
        if (sys.data_sorts.count(k)) out.data_map.emplace(k, v);
    for (const auto& [k, v] : m.ctor_map)
        if (sys.ctors.count(k)) out.ctor_map.emplace(k, v);
    for (const auto& [k, v] : m.rel_map)
        if (sys.rels.count(k)) out.rel_map.emplace(k, v);
    return out;
}

// Structural translation along the morphism. Undefined (not an error) as soon
// as any needed mapping is missing; variables pass through untouched.
inline std::optional<Term> translate(const SemioticMorphism& m, const Term& t) {
    switch (t.kind) {
        case Term::Kind::var:
            return t;
        case Term::Kind::data:
            if (!m.data_map.count(t.data_sort)) return std::nullopt;
            return t;
        case Term::Kind::app: {
            auto it = m.ctor_map.find(t.head);
            if (it == m.ctor_map.end()) return std::nullopt;
            Term out = Term::app(it->second);
            out.args.reserve(t.args.size());
            for (const Term& a : t.args) {
                auto ta = translate(m, a);
                if (!ta) return std::nullopt;
                out.args.push_back(std::move(*ta));
            }
            return out;
        }
    }
    return std::nullopt;
}

inline std::optional<Atom> translate(const SemioticMorphism& m, const Atom& a) {
    auto it = m.rel_map.find(a.rel);
    if (it == m.rel_map.end()) return std::nullopt;
    Atom out{it->second, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) {
        auto tt = translate(m, t);
        if (!tt) return std::nullopt;
        out.args.push_back(std::move(*tt));
    }
    return out;
}

inline std::optional<Axiom> translate(const SemioticMorphism& m, const Axiom& ax) {
    Axiom out = ax;
    out.body.clear();
    for (const Atom& a : ax.body) {
        auto ta = translate(m, a);
        if (!ta) return std::nullopt;
        out.body.push_back(std::move(*ta));
    }
    if (ax.kind != AxiomKind::denial) {
        auto th = translate(m, ax.head);
        if (!th) return std::nullopt;
        out.head = std::move(*th);
    } else {
        out.head = Atom{};
    }
    return out;
}

// Well-formedness of a morphism between two concrete systems:
//   * every mapped name exists on both ends, in its own category,
//   * the data map is the identity,
//   * subsort pairs with both endpoints mapped stay subsort pairs,
//   * mapped constructors and relations keep their arity, and where all the
//     involved sorts are mapped the image signature must match the target
//     declaration exactly (relation kinds are free to change).
inline std::vector<Diagnostic> verify(const SemioticMorphism& m, const SignSystem& src,
                                      const SignSystem& dst) {
    std::vector<Diagnostic> out;
    const std::string where = "morphism " + m.name;
    auto bad = [&](const std::string& code, const std::string& msg) {
        out.push_back(make_diag(DiagKind::validate, code, where, msg));
    };

    for (const auto& [k, v] : m.sort_map) {
        if (!src.sorts.count(k)) bad("UnknownSort", "source sort " + k + " is not declared");
        if (!dst.sorts.count(v)) bad("UnknownSort", "target sort " + v + " is not declared");
    }
    for (const auto& [k, v] : m.data_map) {
        if (k != v) bad("DataNotIdentity", "data sort " + k + " must map to itself, not " + v);
        if (!src.data_sorts.count(k)) bad("UnknownSort", "source data sort " + k + " is not declared");
        if (!dst.data_sorts.count(v)) bad("UnknownSort", "target data sort " + v + " is not declared");
    }
    for (const auto& [k, v] : m.ctor_map) {
        if (!src.ctors.count(k)) bad("UnknownConstructor", "source constructor " + k + " is not declared");
        if (!dst.ctors.count(v)) bad("UnknownConstructor", "target constructor " + v + " is not declared");
    }
    for (const auto& [k, v] : m.rel_map) {
        if (!src.rels.count(k)) bad("UnknownRelation", "source relation " + k + " is not declared");
        if (!dst.rels.count(v)) bad("UnknownRelation", "target relation " + v + " is not declared");
    }
    if (!out.empty()) return out;

    SubsortOrder dord = build_order(dst);
    for (const auto& [s, x] : order_pairs(src)) {
        auto is = m.sort_map.find(s), ix = m.sort_map.find(x);
        if (is == m.sort_map.end() || ix == m.sort_map.end()) continue;
        if (!dord.leq(is->second, ix->second))
            bad("SubsortNotPreserved", s + " < " + x + " maps to " + is->second + ", " +
                                           ix->second + " which are not ordered in " + dst.name);
    }

    // `image` resolves a signature sort through whichever map owns it.
    auto image = [&](const std::string& s) -> std::optional<std::string> {
        if (src.data_sorts.count(s)) {
            auto it = m.data_map.find(s);
            if (it != m.data_map.end()) return it->second;
            return std::nullopt;
        }
        auto it = m.sort_map.find(s);
        if (it != m.sort_map.end()) return it->second;
        return std::nullopt;
    };

    for (const auto& [k, v] : m.ctor_map) {
        const CtorDecl& c = src.ctors.at(k);
        const CtorDecl& d = dst.ctors.at(v);
        if (c.args.size() != d.args.size()) {
            bad("ArityMismatch", "constructor " + k + " has arity " + std::to_string(c.args.size()) +
                                     " but its image " + v + " has arity " +
                                     std::to_string(d.args.size()));
            continue;
        }
        bool total = true;
        std::vector<std::string> img;
        for (const std::string& a : c.args) {
            auto ia = image(a);
            if (!ia) { total = false; break; }
            img.push_back(*ia);
        }
        auto ir = image(c.result);
        if (!ir) total = false;
        if (!total) continue;
        if (img != d.args || *ir != d.result)
            bad("SignatureMismatch", "constructor " + k + " maps to " + v +
                                         " whose signature differs from the translated one");
    }

    for (const auto& [k, v] : m.rel_map) {
        const RelDecl& r = src.rels.at(k);
        const RelDecl& d = dst.rels.at(v);
        if (r.args.size() != d.args.size()) {
            bad("ArityMismatch", "relation " + k + " has arity " + std::to_string(r.args.size()) +
                                     " but its image " + v + " has arity " +
                                     std::to_string(d.args.size()));
            continue;
        }
        bool total = true;
        std::vector<std::string> img;
        for (const std::string& a : r.args) {
            auto ia = image(a);
            if (!ia) { total = false; break; }
            img.push_back(*ia);
        }
        if (!total) continue;
        if (img != d.args)
            bad("SignatureMismatch", "relation " + k + " maps to " + v +
                                         " whose argument sorts differ from the translated ones");
    }

    return out;
}

enum class Property { level, priority, axiom, natural };

struct PropertyCheck {
    bool requested = false;
    bool holds = false;
    std::vector<std::string> witnesses; // counterexamples when the check fails
};

struct PropertyReport {
    bool well_formed = false;
    std::vector<Diagnostic> issues;
    PropertyCheck level;
    PropertyCheck priority;
    PropertyCheck axiom;
    PropertyCheck natural;
    std::vector<std::string> skipped_axioms; // untranslatable under the partial map
    size_t epsilon_source = 0;               // filled when naturalness was checked
    size_t epsilon_target = 0;
};

namespace detail {

struct PropertyContext {
    const GroundModel* target_model = nullptr; // reused across calls when provided
    const size_t* eps_src = nullptr;
    const size_t* eps_dst = nullptr;
};

inline PropertyReport check_properties_impl(const SemioticMorphism& m, const SignSystem& src,
                                            const SignSystem& dst,
                                            const std::set<Property>& requested,
                                            const PropertyContext& ctx) {
    PropertyReport rep;
    rep.issues = verify(m, src, dst);
    rep.well_formed = rep.issues.empty();
    if (!rep.well_formed) return rep;

    if (requested.count(Property::level)) {
        rep.level.requested = true;
        rep.level.holds = true;
        for (const auto& [sn, sd] : src.sorts) {
            auto is = m.sort_map.find(sn);
            if (is == m.sort_map.end()) continue;
            for (const auto& [xn, xd] : src.sorts) {
                auto ix = m.sort_map.find(xn);
                if (ix == m.sort_map.end()) continue;
                if (sd.level >= xd.level) continue;
                if (dst.sorts.at(is->second).level > dst.sorts.at(ix->second).level) {
                    rep.level.holds = false;
                    rep.level.witnesses.push_back(
                        sn + " below " + xn + " but " + is->second + " above " + ix->second);
                }
            }
        }
    }

    if (requested.count(Property::priority)) {
        rep.priority.requested = true;
        rep.priority.holds = true;
        for (const auto& [cn, cd] : src.ctors) {
            auto ic = m.ctor_map.find(cn);
            if (ic == m.ctor_map.end()) continue;
            auto cres = src.sorts.find(cd.result);
            if (cres == src.sorts.end()) continue;
            for (const auto& [yn, yd] : src.ctors) {
                auto iy = m.ctor_map.find(yn);
                if (iy == m.ctor_map.end()) continue;
                auto yres = src.sorts.find(yd.result);
                if (yres == src.sorts.end()) continue;
                if (cres->second.level != yres->second.level) continue;
                if (cd.priority <= yd.priority) continue;
                if (dst.ctors.at(ic->second).priority <= dst.ctors.at(iy->second).priority) {
                    rep.priority.holds = false;
                    rep.priority.witnesses.push_back(cn + " outranks " + yn + " but " +
                                                     ic->second + " does not outrank " +
                                                     iy->second);
                }
            }
        }
    }

    if (requested.count(Property::axiom)) {
        rep.axiom.requested = true;
        rep.axiom.holds = true;
        GroundModel local;
        const GroundModel* model = ctx.target_model;
        if (!model) {
            local = closure(dst);
            model = &local;
        }
        for (const auto& [name, ax] : src.axioms) {
            auto t = translate(m, ax);
            if (!t) {
                rep.skipped_axioms.push_back(name);
                continue;
            }
            if (!entails_in(dst, *model, *t)) {
                rep.axiom.holds = false;
                rep.axiom.witnesses.push_back(name);
            }
        }
    }

    if (requested.count(Property::natural)) {
        rep.natural.requested = true;
        rep.epsilon_source = ctx.eps_src ? *ctx.eps_src : epsilon(src);
        rep.epsilon_target = ctx.eps_dst ? *ctx.eps_dst : epsilon(dst);
        rep.natural.holds = rep.epsilon_source > rep.epsilon_target;
        if (!rep.natural.holds)
            rep.natural.witnesses.push_back("epsilon " + std::to_string(rep.epsilon_source) +
                                            " does not exceed " +
                                            std::to_string(rep.epsilon_target));
    }

    return rep;
}

} // namespace detail

// Checks the requested subset of {level, priority, axiom, natural}:
//   level    - lower-level sorts never map above higher-level ones,
//   priority - among constructors of one level, strict priority is kept,
//   axiom    - every translatable axiom is entailed by the target; axioms the
//              partial map cannot translate are skipped and listed,
//   natural  - the target leaves strictly fewer ground atoms environmental.
inline PropertyReport check_properties(const SemioticMorphism& m, const SignSystem& src,
                                       const SignSystem& dst,
                                       const std::set<Property>& requested) {
    return detail::check_properties_impl(m, src, dst, requested, {});
}

// Composition is defined wherever both legs are: anything m1 drops or m2
// cannot continue simply stays out of the result.
inline SemioticMorphism compose(const SemioticMorphism& m1, const SemioticMorphism& m2) {
    if (m1.to != m2.from)
        fail("DomainMismatch",
             "cannot compose " + m1.name + " into " + m2.name + ": " + m1.to + " is not " + m2.from);
    SemioticMorphism out;
    out.name = m1.name + "_" + m2.name;
    out.from = m1.from;
    out.to = m2.to;
    auto chain = [](const std::map<std::string, std::string>& a,
                    const std::map<std::string, std::string>& b) {
        std::map<std::string, std::string> r;
        for (const auto& [k, v] : a) {
            auto it = b.find(v);
            if (it != b.end()) r.emplace(k, it->second);
        }
        return r;
    };
    out.sort_map = chain(m1.sort_map, m2.sort_map);
    out.data_map = chain(m1.data_map, m2.data_map);
    out.ctor_map = chain(m1.ctor_map, m2.ctor_map);
    out.rel_map = chain(m1.rel_map, m2.rel_map);
    return out;
}

} // namespace semiosa
