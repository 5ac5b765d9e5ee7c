#pragma once

#include "closure.hpp"
#include "morphism.hpp"
#include "search.hpp"
#include "sysops.hpp"
#include "system.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semiosa {

// An observer is a morphism into a fixed observation vocabulary. Observing
// a system yields its image: what the observer can see of it, renamed into
// the observer's own terms. Emergence is then a statement about closures of
// images: an observed atom is emergent when the whole system shows it but
// the part shared with another system does not.

struct ObserverSpec {
    SemioticMorphism m;
    SignSystem codomain;
};

// Image of `sys` under the observer. The morphism is first restricted to
// the elements `sys` declares, then required to verify and preserve axioms
// into the codomain. Declarations are copied from the codomain; constructors
// and relations whose codomain signatures mention sorts outside the image
// are dropped, along with any axiom that refers to a dropped element.
inline SignSystem observe(const ObserverSpec& obs, const SignSystem& sys) {
    SemioticMorphism mr = restrict_morphism(obs.m, sys);
    auto rep = check_properties(mr, sys, obs.codomain, {Property::axiom});
    if (!rep.well_formed)
        fail("InvalidObserver",
             "observer does not verify against " + sys.name + ": " + rep.issues.front().format());
    if (!rep.axiom.holds)
        fail("NotAxiomPreserving",
             "observer loses axiom " + rep.axiom.witnesses.front() + " of " + sys.name);

    SignSystem out;
    out.name = obs.m.name + "(" + sys.name + ")";

    std::set<std::string> img_sorts, img_data;
    for (const auto& [s, t] : mr.sort_map)
        if (sys.sorts.count(s)) img_sorts.insert(t);
    for (const auto& [s, t] : mr.data_map)
        if (sys.data_sorts.count(s)) img_data.insert(t);

    for (const auto& n : img_sorts) out.sorts.emplace(n, obs.codomain.sorts.at(n));
    for (const auto& n : img_data) out.data_sorts.emplace(n, DataSortDecl{n});

    auto cod_pairs = order_pairs(obs.codomain);
    for (const auto& a : img_sorts)
        for (const auto& b : img_sorts)
            if (cod_pairs.count({a, b})) out.subsorts.insert({a, b});

    auto inside = [&](const std::vector<std::string>& args) {
        for (const auto& a : args)
            if (!img_sorts.count(a) && !img_data.count(a)) return false;
        return true;
    };

    for (const auto& [s, t] : mr.ctor_map) {
        if (!sys.ctors.count(s)) continue;
        const CtorDecl& d = obs.codomain.ctors.at(t);
        if (inside(d.args) && img_sorts.count(d.result)) out.ctors.emplace(t, d);
    }
    for (const auto& [s, t] : mr.rel_map) {
        if (!sys.rels.count(s)) continue;
        const RelDecl& d = obs.codomain.rels.at(t);
        if (inside(d.args)) out.rels.emplace(t, d);
    }

    auto mentions_only_kept = [&](const Axiom& ax) {
        auto atom_ok = [&](const Atom& a) {
            if (!out.rels.count(a.rel)) return false;
            std::vector<const Term*> stack;
            for (const Term& t : a.args) stack.push_back(&t);
            while (!stack.empty()) {
                const Term* t = stack.back();
                stack.pop_back();
                if (t->kind == Term::Kind::app) {
                    if (!out.ctors.count(t->head)) return false;
                    for (const Term& sub : t->args) stack.push_back(&sub);
                } else if (t->kind == Term::Kind::data) {
                    if (!t->data_sort.empty() && !out.data_sorts.count(t->data_sort))
                        return false;
                }
            }
            return true;
        };
        for (const Atom& a : ax.body)
            if (!atom_ok(a)) return false;
        if (ax.kind != AxiomKind::denial && !atom_ok(ax.head)) return false;
        return true;
    };

    for (const auto& [name, ax] : sys.axioms) {
        auto t = translate(mr, ax);
        if (!t) continue;
        if (!mentions_only_kept(*t)) continue;
        out.axioms.emplace(name, std::move(*t));
    }

    auto diags = validate_system(out);
    if (!diags.empty())
        fail("InvalidResult", "observation of " + sys.name + " does not validate: " +
                                  diags.front().format());
    return out;
}

struct EmergenceCheck {
    bool emergent = false;
    SignSystem obs_whole;  // image of the whole system
    SignSystem obs_common; // image of its part shared with the other system
    GroundModel whole;     // closure of obs_whole
    GroundModel common;    // closure of obs_common
};

// The probe atom is emergent for `xi` against `xi2` under the observer when
// it follows from the observed whole but not from the observed common part.
inline EmergenceCheck is_emergent(const Atom& probe, const SignSystem& xi,
                                  const SignSystem& xi2, const ObserverSpec& obs) {
    EmergenceCheck out;
    out.obs_whole = observe(obs, xi);
    if (out.obs_whole.empty())
        fail("EmptyObservation", "observer sees nothing of " + xi.name);
    if (!is_ground(probe))
        fail("UnknownVocabulary", "probe atom must be ground");
    out.whole = closure(out.obs_whole);

    Axiom query = Axiom::fact("probe", 0, probe);
    bool in_whole = entails_in(out.obs_whole, out.whole, query);

    out.obs_common = observe(obs, intersect(xi, xi2));
    out.common = closure(out.obs_common);
    bool in_common = false;
    try {
        in_common = entails_in(out.obs_common, out.common, query);
    } catch (const Error&) {
        in_common = false; // vocabulary absent from the common image
    }

    out.emergent = in_whole && !in_common;
    return out;
}

struct Deducibility {
    bool deducible = false;
    std::optional<SemioticMorphism> witness;
};

// Whether one observed image maps into the other at all: if some morphism
// exists from observe(xi) to observe(xi2), whatever xi shows the observer
// is readable as part of what xi2 shows, so nothing xi exhibits is beyond
// deduction for an agent holding xi2.
inline Deducibility classify_deducibility(const SignSystem& xi, const SignSystem& xi2,
                                          const ObserverSpec& obs) {
    SignSystem o1 = observe(obs, xi);
    SignSystem o2 = observe(obs, xi2);
    if (o1.empty() || o2.empty())
        fail("EmptyObservation", "deducibility needs both observations nonempty");
    auto found = find_morphisms(o1, o2, {}, 1);
    Deducibility out;
    out.deducible = !found.empty();
    if (out.deducible) out.witness = found.front();
    return out;
}

struct SourceClass {
    enum class Kind { not_emergent, interpretation, process, ontology, undetermined };
    Kind kind = Kind::undetermined;
    std::string witness;
};

inline const char* to_string(SourceClass::Kind k) {
    switch (k) {
    case SourceClass::Kind::not_emergent: return "NotEmergent";
    case SourceClass::Kind::interpretation: return "Interpretation";
    case SourceClass::Kind::process: return "Process";
    case SourceClass::Kind::ontology: return "Ontology";
    default: return "Undetermined";
    }
}

// Heuristic attribution of where an emergent atom comes from, checked in a
// fixed order. Interpretation: no atom of the underlying closure translates
// to the probe, so observation alone introduced it. Process: some supplied
// alternative system shares enough with xi that their common image already
// shows the probe. Ontology: the probe's vocabulary is not xi's own, or
// asserting it inside xi would break a denial of the highest denial rank.
// Anything else stays undetermined.
inline SourceClass classify_source(const Atom& probe, const SignSystem& xi,
                                   const SignSystem& xi2, const ObserverSpec& obs,
                                   const std::vector<SignSystem>& alternatives) {
    EmergenceCheck check = is_emergent(probe, xi, xi2, obs);
    if (!check.emergent) return {SourceClass::Kind::not_emergent, ""};

    Atom goal = probe;
    detail::resolve_atom_literals(check.obs_whole, goal);

    SemioticMorphism mr = restrict_morphism(obs.m, xi);
    GroundModel base = closure(xi);
    bool has_preimage = false;
    for (const Atom& q : base) {
        auto t = translate(mr, q);
        if (t && *t == goal) {
            has_preimage = true;
            break;
        }
    }
    if (!has_preimage) return {SourceClass::Kind::interpretation, ""};

    for (const SignSystem& alt : alternatives) {
        try {
            SignSystem o = observe(obs, intersect(xi, alt));
            Axiom query = Axiom::fact("probe", 0, probe);
            if (entails_in(o, closure(o), query)) return {SourceClass::Kind::process, alt.name};
        } catch (const Error&) {
            continue;
        }
    }

    auto vocab_missing = [&]() {
        if (!xi.rels.count(goal.rel)) return true;
        std::vector<const Term*> stack;
        for (const Term& t : goal.args) stack.push_back(&t);
        while (!stack.empty()) {
            const Term* t = stack.back();
            stack.pop_back();
            if (t->kind == Term::Kind::app) {
                if (!xi.ctors.count(t->head)) return true;
                for (const Term& sub : t->args) stack.push_back(&sub);
            } else if (t->kind == Term::Kind::data) {
                if (!t->data_sort.empty() && !xi.data_sorts.count(t->data_sort)) return true;
            }
        }
        return false;
    };
    if (vocab_missing()) return {SourceClass::Kind::ontology, goal.rel};

    std::uint64_t max_denial = 0;
    bool any_denial = false;
    for (const auto& [n, ax] : xi.axioms)
        if (ax.kind == AxiomKind::denial) {
            any_denial = true;
            max_denial = std::max(max_denial, ax.rank);
        }
    if (any_denial) {
        try {
            SignSystem probed = xi;
            Axiom fact = Axiom::fact("probe", 0, probe);
            resolve_literals(probed, fact);
            probed.axioms.emplace("probe", fact);
            auto diags = validate_system(probed);
            if (diags.empty()) {
                GroundModel model = closure(probed);
                for (const auto& [n, ax] : xi.axioms) {
                    if (ax.kind != AxiomKind::denial || ax.rank != max_denial) continue;
                    if (!entails_in(probed, model, ax))
                        return {SourceClass::Kind::ontology, n};
                }
            }
        } catch (const Error&) {
            // a probe the system cannot even state is not a denial violation
        }
    }

    return {SourceClass::Kind::undetermined, ""};
}

struct CreativityVerdict {
    bool natural = false;
    bool unique = false;
    size_t morphism_count = 0; // capped at 2, uniqueness needs no more
    bool creative = false;
};

// A process morphism is creative when it is natural (it strictly reduces
// how much the closure leaves to the environment) and essentially unique
// (the observed images admit exactly one total morphism between them).
inline CreativityVerdict check_creative(const SemioticMorphism& pi, const SignSystem& from,
                                        const SignSystem& to, const SignSystem& obs_from,
                                        const SignSystem& obs_to) {
    auto issues = verify(pi, from, to);
    if (!issues.empty())
        fail("InvalidMorphism", "process morphism does not verify: " + issues.front().format());

    CreativityVerdict out;
    out.natural = epsilon(from) > epsilon(to);
    auto found = find_morphisms(obs_from, obs_to, {}, 2);
    out.morphism_count = found.size();
    out.unique = found.size() == 1;
    out.creative = out.natural && out.unique;
    return out;
}

} // namespace semiosa
