#pragma once

#include "system.hpp"

#include <set>
#include <string>
#include <vector>

namespace semiosa {

using GroundModel = std::set<Atom>;

namespace detail {

// Enumerates every binding that grounds all body atoms against atoms already
// in the model, invoking `sink` once per complete binding. Variables only
// ever bind to ground terms occurring in the model, so no new terms are
// invented.
template <typename Sink>
void ground_body(const std::vector<Atom>& body, size_t i, const GroundModel& model, Binding& b,
                 Sink&& sink) {
    if (i == body.size()) {
        sink(b);
        return;
    }
    for (const Atom& candidate : model) {
        Binding attempt = b;
        if (match(body[i], candidate, attempt))
            ground_body(body, i + 1, model, attempt, sink);
    }
}

} // namespace detail

// Least fixpoint of forward chaining: facts seed the model, rules fire on
// groundings whose body already holds. A grounding is admissible only when
// the instantiated head is well-sorted; inadmissible groundings are skipped
// rather than reported. Denials contribute nothing here.
inline GroundModel closure(const SignSystem& sys) {
    GroundModel model;
    SubsortOrder ord = build_order(sys);

    for (const auto& [name, ax] : sys.axioms)
        if (ax.kind == AxiomKind::fact) model.insert(ax.head);

    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [name, ax] : sys.axioms) {
            if (ax.kind != AxiomKind::rule) continue;
            std::vector<Atom> found;
            Binding empty;
            detail::ground_body(ax.body, 0, model, empty, [&](const Binding& b) {
                Atom head = substitute(ax.head, b);
                if (!is_ground(head)) return;
                if (!detail::well_sorted(sys, ord, head, nullptr)) return;
                if (!model.count(head)) found.push_back(head);
            });
            for (const Atom& a : found)
                if (model.insert(a).second) grew = true;
        }
    }
    return model;
}

namespace detail {

inline void require_known_vocabulary(const SignSystem& sys, const Atom& a,
                                     const std::string& what) {
    if (!sys.rels.count(a.rel))
        fail("UnknownVocabulary", what + " uses undeclared relation " + a.rel);
    std::vector<const Term*> stack;
    for (const Term& t : a.args) stack.push_back(&t);
    while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->kind == Term::Kind::app) {
            if (!sys.ctors.count(t->head))
                fail("UnknownVocabulary", what + " uses undeclared constructor " + t->head);
            for (const Term& sub : t->args) stack.push_back(&sub);
        } else if (t->kind == Term::Kind::data) {
            if (!t->data_sort.empty() && !sys.data_sorts.count(t->data_sort))
                fail("UnknownVocabulary", what + " uses undeclared data sort " + t->data_sort);
        }
    }
}

} // namespace detail

// Bounded entailment against a model already computed for `sys`:
//   fact   - the atom is in the model,
//   rule   - every admissible grounding of the body has its head present,
//   denial - no grounding of the body holds.
// Throws UnknownVocabulary when the axiom mentions names the system lacks,
// and UnsafeRule for rules with unbound head variables.
inline bool entails_in(const SignSystem& sys, const GroundModel& model, const Axiom& ax) {
    Axiom query = ax;
    resolve_literals(sys, query);
    const std::string what = "axiom " + (ax.name.empty() ? std::string("<anonymous>") : ax.name);
    for (const Atom& a : query.body) detail::require_known_vocabulary(sys, a, what);
    if (query.kind != AxiomKind::denial) detail::require_known_vocabulary(sys, query.head, what);

    SubsortOrder ord = build_order(sys);
    switch (query.kind) {
        case AxiomKind::fact:
            return model.count(query.head) > 0;
        case AxiomKind::rule: {
            std::set<std::string> bodyvars, headvars;
            for (const Atom& a : query.body) collect_vars(a, bodyvars);
            collect_vars(query.head, headvars);
            for (const std::string& v : headvars)
                if (!bodyvars.count(v))
                    fail("UnsafeRule", what + " has unbound head variable " + v);
            bool ok = true;
            Binding empty;
            detail::ground_body(query.body, 0, model, empty, [&](const Binding& b) {
                if (!ok) return;
                Atom head = substitute(query.head, b);
                if (!detail::well_sorted(sys, ord, head, nullptr)) return; // inadmissible
                if (!model.count(head)) ok = false;
            });
            return ok;
        }
        case AxiomKind::denial: {
            bool violated = false;
            Binding empty;
            detail::ground_body(query.body, 0, model, empty,
                                [&](const Binding&) { violated = true; });
            return !violated;
        }
    }
    return false;
}

inline bool entails(const SignSystem& sys, const Axiom& ax) {
    return entails_in(sys, closure(sys), ax);
}

// Number of environmental ground atoms in the closure. This is the measure
// that orders systems by how much they still leave to the environment.
inline size_t epsilon_in(const SignSystem& sys, const GroundModel& model) {
    size_t n = 0;
    for (const Atom& a : model) {
        auto it = sys.rels.find(a.rel);
        if (it != sys.rels.end() && it->second.environmental) ++n;
    }
    return n;
}

inline size_t epsilon(const SignSystem& sys) { return epsilon_in(sys, closure(sys)); }

} // namespace semiosa
