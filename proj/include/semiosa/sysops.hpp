#pragma once

#include "system.hpp"

#include <string>
#include <utility>

namespace semiosa {

// Structural equality up to the system name. Subsort structure is compared
// through its reflexive-transitive closure, so systems that declare the same
// order with different edge sets count as the same.
inline bool same_system(const SignSystem& a, const SignSystem& b) {
    return a.sorts == b.sorts && a.data_sorts == b.data_sorts && a.ctors == b.ctors &&
           a.rels == b.rels && a.axioms == b.axioms && order_pairs(a) == order_pairs(b);
}

// Greatest common subsystem: keeps exactly the declarations both systems
// state identically, and drops anything that would dangle afterwards.
// Subsort pairs survive when both orders contain them.
inline SignSystem intersect(const SignSystem& a, const SignSystem& b) {
    SignSystem out;
    out.name = a.name + "&" + b.name;

    for (const auto& [name, decl] : a.sorts) {
        auto it = b.sorts.find(name);
        if (it != b.sorts.end() && it->second == decl) out.sorts.emplace(name, decl);
    }
    for (const auto& [name, decl] : a.data_sorts)
        if (b.data_sorts.count(name)) out.data_sorts.emplace(name, decl);

    auto pa = order_pairs(a), pb = order_pairs(b);
    for (const auto& p : pa)
        if (pb.count(p) && out.sorts.count(p.first) && out.sorts.count(p.second))
            out.subsorts.insert(p);

    auto sort_kept = [&](const std::string& n) {
        return out.sorts.count(n) || out.data_sorts.count(n);
    };

    for (const auto& [name, decl] : a.ctors) {
        auto it = b.ctors.find(name);
        if (it == b.ctors.end() || !(it->second == decl)) continue;
        bool ok = out.sorts.count(decl.result) > 0;
        for (const std::string& s : decl.args) ok = ok && sort_kept(s);
        if (ok) out.ctors.emplace(name, decl);
    }
    for (const auto& [name, decl] : a.rels) {
        auto it = b.rels.find(name);
        if (it == b.rels.end() || !(it->second == decl)) continue;
        bool ok = true;
        for (const std::string& s : decl.args) ok = ok && sort_kept(s);
        if (ok) out.rels.emplace(name, decl);
    }

    // An axiom survives only if its whole vocabulary did.
    auto atom_kept = [&](const Atom& at) {
        if (!out.rels.count(at.rel)) return false;
        std::vector<const Term*> stack;
        for (const Term& t : at.args) stack.push_back(&t);
        while (!stack.empty()) {
            const Term* t = stack.back();
            stack.pop_back();
            if (t->kind == Term::Kind::app) {
                if (!out.ctors.count(t->head)) return false;
                for (const Term& sub : t->args) stack.push_back(&sub);
            } else if (t->kind == Term::Kind::data) {
                if (!out.data_sorts.count(t->data_sort)) return false;
            }
        }
        return true;
    };
    for (const auto& [name, ax] : a.axioms) {
        auto it = b.axioms.find(name);
        if (it == b.axioms.end() || !(it->second == ax)) continue;
        bool ok = true;
        for (const Atom& at : ax.body) ok = ok && atom_kept(at);
        if (ax.kind != AxiomKind::denial) ok = ok && atom_kept(ax.head);
        if (ok) out.axioms.emplace(name, ax);
    }
    return out;
}

inline bool is_subsystem(const SignSystem& a, const SignSystem& b) {
    return same_system(intersect(a, b), a);
}

} // namespace semiosa
