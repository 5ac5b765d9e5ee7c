// Independent reference implementations used to cross-check the engine.
// Everything here is written from the definitions alone: plain fixpoints,
// exhaustive enumeration, no sharing of engine internals beyond the data
// types. Systems handed to these helpers must already be literal-resolved.
#pragma once

#include <semiosa/semiosa.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace semiosa::testing {

using SortPairSet = std::set<std::pair<std::string, std::string>>;

// Reflexive-transitive subsort reachability recomputed from the raw edges.
inline SortPairSet oracle_leq(const SignSystem& sys) {
    SortPairSet leq;
    for (const auto& [name, decl] : sys.sorts) leq.emplace(name, name);
    for (const auto& e : sys.subsorts) leq.insert(e);
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [a, b] : SortPairSet(leq))
            for (const auto& [c, d] : SortPairSet(leq))
                if (b == c && leq.emplace(a, d).second) grew = true;
    }
    return leq;
}

inline std::optional<std::string> oracle_term_sort(const SignSystem& sys, const SortPairSet& leq,
                                                   const Term& t) {
    if (t.kind == Term::Kind::var) return std::nullopt;
    if (t.kind == Term::Kind::data)
        return t.data_sort.empty() ? std::nullopt : std::optional(t.data_sort);
    auto it = sys.ctors.find(t.head);
    if (it == sys.ctors.end()) return std::nullopt;
    const CtorDecl& decl = it->second;
    if (decl.args.size() != t.args.size()) return std::nullopt;
    for (size_t i = 0; i < t.args.size(); ++i) {
        auto got = oracle_term_sort(sys, leq, t.args[i]);
        if (!got) return std::nullopt;
        const std::string& want = decl.args[i];
        if (sys.data_sorts.count(want)) {
            if (*got != want) return std::nullopt;
        } else if (!leq.count({*got, want})) {
            return std::nullopt;
        }
    }
    return decl.result;
}

inline bool oracle_admissible(const SignSystem& sys, const SortPairSet& leq, const Atom& a) {
    if (!is_ground(a)) return false;
    auto it = sys.rels.find(a.rel);
    if (it == sys.rels.end() || it->second.args.size() != a.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
        auto got = oracle_term_sort(sys, leq, a.args[i]);
        if (!got) return false;
        const std::string& want = it->second.args[i];
        if (sys.data_sorts.count(want)) {
            if (*got != want) return false;
        } else if (!leq.count({*got, want})) {
            return false;
        }
    }
    return true;
}

namespace detail {

inline bool oracle_match(const Term& pat, const Term& ground, Binding& b) {
    switch (pat.kind) {
        case Term::Kind::var: {
            auto it = b.find(pat.head);
            if (it != b.end()) return it->second == ground;
            b.emplace(pat.head, ground);
            return true;
        }
        case Term::Kind::data:
            return ground.kind == Term::Kind::data && ground.head == pat.head &&
                   ground.data_sort == pat.data_sort;
        case Term::Kind::app: {
            if (ground.kind != Term::Kind::app || ground.head != pat.head ||
                ground.args.size() != pat.args.size())
                return false;
            for (size_t i = 0; i < pat.args.size(); ++i)
                if (!oracle_match(pat.args[i], ground.args[i], b)) return false;
            return true;
        }
    }
    return false;
}

inline Term oracle_subst(const Term& t, const Binding& b) {
    if (t.kind == Term::Kind::var) {
        auto it = b.find(t.head);
        return it != b.end() ? it->second : t;
    }
    Term out = t;
    for (Term& a : out.args) a = oracle_subst(a, b);
    return out;
}

inline void oracle_body_matches(const std::vector<Atom>& body, size_t idx, const GroundModel& model,
                                Binding b, std::vector<Binding>& out) {
    if (idx == body.size()) {
        out.push_back(std::move(b));
        return;
    }
    for (const Atom& fact : model) {
        if (fact.rel != body[idx].rel || fact.args.size() != body[idx].args.size()) continue;
        Binding next = b;
        bool ok = true;
        for (size_t i = 0; i < fact.args.size() && ok; ++i)
            ok = oracle_match(body[idx].args[i], fact.args[i], next);
        if (ok) oracle_body_matches(body, idx + 1, model, std::move(next), out);
    }
}

} // namespace detail

// Naive bottom-up fixpoint: facts seed the model, rules fire by matching
// their bodies against it, heads join the model when ground and well-sorted.
inline GroundModel oracle_closure(const SignSystem& sys) {
    SortPairSet leq = oracle_leq(sys);
    GroundModel model;
    for (const auto& [name, ax] : sys.axioms)
        if (ax.kind == AxiomKind::fact && oracle_admissible(sys, leq, ax.head))
            model.insert(ax.head);

    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [name, ax] : sys.axioms) {
            if (ax.kind != AxiomKind::rule) continue;
            std::vector<Binding> hits;
            detail::oracle_body_matches(ax.body, 0, model, {}, hits);
            for (const Binding& b : hits) {
                Atom head = ax.head;
                for (Term& t : head.args) t = detail::oracle_subst(t, b);
                if (oracle_admissible(sys, leq, head) && model.insert(head).second) grew = true;
            }
        }
    }
    return model;
}

inline size_t oracle_epsilon(const SignSystem& sys) {
    size_t n = 0;
    for (const Atom& a : oracle_closure(sys)) {
        auto it = sys.rels.find(a.rel);
        if (it != sys.rels.end() && it->second.environmental) ++n;
    }
    return n;
}

// Exhaustive enumeration of the total morphisms between two systems: every
// assignment of sorts, constructors and relations is tried and kept when
// data sorts carry over by name, strict subsort pairs stay ordered, and
// every mapped signature agrees exactly.
inline std::vector<SemioticMorphism> oracle_total_morphisms(const SignSystem& src,
                                                            const SignSystem& dst) {
    std::vector<SemioticMorphism> found;
    for (const auto& [d, _] : src.data_sorts)
        if (!dst.data_sorts.count(d)) return found;

    std::vector<std::string> src_sorts, dst_sorts;
    for (const auto& [n, d] : src.sorts) src_sorts.push_back(n);
    for (const auto& [n, d] : dst.sorts) dst_sorts.push_back(n);
    if (!src_sorts.empty() && dst_sorts.empty()) return found;

    SortPairSet src_leq = oracle_leq(src);
    SortPairSet dst_leq = oracle_leq(dst);

    std::vector<size_t> pick(src_sorts.size(), 0);
    for (bool more = true; more;) {
        std::map<std::string, std::string> sort_map;
        for (size_t i = 0; i < src_sorts.size(); ++i) sort_map[src_sorts[i]] = dst_sorts[pick[i]];

        bool ordered = true;
        for (const auto& [a, b] : src_leq)
            if (a != b && !dst_leq.count({sort_map[a], sort_map[b]})) ordered = false;

        if (ordered) {
            auto mapped = [&](const std::string& s) {
                return src.data_sorts.count(s) ? s : sort_map.at(s);
            };
            std::vector<std::string> src_ctors, src_rels;
            std::vector<std::vector<std::string>> ctor_choices, rel_choices;
            bool feasible = true;
            for (const auto& [n, c] : src.ctors) {
                src_ctors.push_back(n);
                std::vector<std::string> fits;
                for (const auto& [m, d] : dst.ctors) {
                    if (d.args.size() != c.args.size() || d.result != mapped(c.result)) continue;
                    bool same = true;
                    for (size_t i = 0; i < c.args.size() && same; ++i)
                        same = d.args[i] == mapped(c.args[i]);
                    if (same) fits.push_back(m);
                }
                if (fits.empty()) feasible = false;
                ctor_choices.push_back(std::move(fits));
            }
            for (const auto& [n, r] : src.rels) {
                src_rels.push_back(n);
                std::vector<std::string> fits;
                for (const auto& [m, d] : dst.rels) {
                    if (d.args.size() != r.args.size()) continue;
                    bool same = true;
                    for (size_t i = 0; i < r.args.size() && same; ++i)
                        same = d.args[i] == mapped(r.args[i]);
                    if (same) fits.push_back(m);
                }
                if (fits.empty()) feasible = false;
                rel_choices.push_back(std::move(fits));
            }

            if (feasible) {
                std::vector<size_t> ci(src_ctors.size(), 0), ri(src_rels.size(), 0);
                for (bool inner = true; inner;) {
                    SemioticMorphism m;
                    m.name = "oracle";
                    m.from = src.name;
                    m.to = dst.name;
                    m.sort_map = sort_map;
                    for (const auto& [d, _] : src.data_sorts) m.data_map[d] = d;
                    for (size_t i = 0; i < src_ctors.size(); ++i)
                        m.ctor_map[src_ctors[i]] = ctor_choices[i][ci[i]];
                    for (size_t i = 0; i < src_rels.size(); ++i)
                        m.rel_map[src_rels[i]] = rel_choices[i][ri[i]];
                    found.push_back(std::move(m));

                    inner = false;
                    for (size_t i = 0; i < ci.size(); ++i) {
                        if (++ci[i] < ctor_choices[i].size()) { inner = true; break; }
                        ci[i] = 0;
                    }
                    if (!inner)
                        for (size_t i = 0; i < ri.size(); ++i) {
                            if (++ri[i] < rel_choices[i].size()) { inner = true; break; }
                            ri[i] = 0;
                        }
                }
            }
        }

        more = false;
        for (size_t i = 0; i < pick.size(); ++i) {
            if (++pick[i] < dst_sorts.size()) { more = true; break; }
            pick[i] = 0;
        }
        if (src_sorts.empty()) break;
    }
    return found;
}

// Values pinned before the engine existed; the suite checks the engine
// against them rather than the other way round.
namespace frozen {

inline constexpr std::uint64_t seed42_state1 = 10481999410520546993ULL;
inline constexpr double seed42_u[5] = {0.5682303266439077, 0.22546342894775137,
                                       0.41283831882951183, 0.6303980498395979,
                                       0.6801478072421157};
inline constexpr double seed7_u0 = 0.49321226683922953;

// Weights (2, 1), gamma 1/5 and 1/10, first label chosen.
inline constexpr const char* reinforced_chosen = "12/5";
inline constexpr const char* reinforced_rejected = "9/10";

} // namespace frozen

} // namespace semiosa::testing
