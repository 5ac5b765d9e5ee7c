#pragma once

#include "morphism.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace semiosa {

// Enumerates total morphisms from src to dst in canonical order: source
// names are visited sorted per category (sorts, then constructors, then
// relations) and candidate targets are tried in sorted order, so the output
// is the lexicographic sequence of assignment vectors. Data sorts are forced
// to the identity; if dst lacks one of src's data sorts there is no total
// morphism at all. Candidates incompatible with the partial assignment are
// pruned by signature, which never changes the emitted order. Enumeration
// stops once `limit` morphisms satisfy every property in `required`.
inline std::vector<SemioticMorphism> find_morphisms(const SignSystem& src, const SignSystem& dst,
                                                    const std::set<Property>& required,
                                                    size_t limit) {
    std::vector<SemioticMorphism> out;
    if (limit == 0) return out;

    for (const auto& [d, _] : src.data_sorts)
        if (!dst.data_sorts.count(d)) return out;

    std::vector<const SortDecl*> src_sorts;
    for (const auto& [n, d] : src.sorts) src_sorts.push_back(&d);
    std::vector<const CtorDecl*> src_ctors;
    for (const auto& [n, d] : src.ctors) src_ctors.push_back(&d);
    std::vector<const RelDecl*> src_rels;
    for (const auto& [n, d] : src.rels) src_rels.push_back(&d);

    SubsortOrder sord = build_order(src);
    SubsortOrder dord = build_order(dst);

    // Shared work for the property filter.
    GroundModel dst_model;
    size_t eps_src = 0, eps_dst = 0;
    if (required.count(Property::axiom)) dst_model = closure(dst);
    if (required.count(Property::natural)) {
        eps_src = epsilon(src);
        eps_dst = epsilon(dst);
    }

    SemioticMorphism m;
    m.from = src.name;
    m.to = dst.name;
    for (const auto& [d, _] : src.data_sorts) m.data_map.emplace(d, d);

    // Signature sorts resolve through the assignment built so far; by the
    // time constructors are placed the sort map is total.
    auto image = [&](const std::string& s) -> const std::string* {
        if (src.data_sorts.count(s)) {
            auto it = m.data_map.find(s);
            return it == m.data_map.end() ? nullptr : &it->second;
        }
        auto it = m.sort_map.find(s);
        return it == m.sort_map.end() ? nullptr : &it->second;
    };

    auto emit = [&]() {
        SemioticMorphism candidate = m;
        candidate.name = "mu" + std::to_string(out.size() + 1);
        if (!required.empty()) {
            detail::PropertyContext ctx;
            if (required.count(Property::axiom)) ctx.target_model = &dst_model;
            ctx.eps_src = &eps_src;
            ctx.eps_dst = &eps_dst;
            PropertyReport rep = detail::check_properties_impl(candidate, src, dst, required, ctx);
            if (!rep.well_formed) return;
            if (required.count(Property::level) && !rep.level.holds) return;
            if (required.count(Property::priority) && !rep.priority.holds) return;
            if (required.count(Property::axiom) && !rep.axiom.holds) return;
            if (required.count(Property::natural) && !rep.natural.holds) return;
        }
        out.push_back(std::move(candidate));
    };

    std::function<void(size_t)> place_rel = [&](size_t i) {
        if (out.size() >= limit) return;
        if (i == src_rels.size()) {
            emit();
            return;
        }
        const RelDecl& r = *src_rels[i];
        for (const auto& [dn, dd] : dst.rels) {
            if (dd.args.size() != r.args.size()) continue;
            bool ok = true;
            for (size_t k = 0; k < r.args.size() && ok; ++k) {
                const std::string* img = image(r.args[k]);
                ok = img && *img == dd.args[k];
            }
            if (!ok) continue;
            m.rel_map[r.name] = dn;
            place_rel(i + 1);
            m.rel_map.erase(r.name);
            if (out.size() >= limit) return;
        }
    };

    std::function<void(size_t)> place_ctor = [&](size_t i) {
        if (out.size() >= limit) return;
        if (i == src_ctors.size()) {
            place_rel(0);
            return;
        }
        const CtorDecl& c = *src_ctors[i];
        for (const auto& [dn, dd] : dst.ctors) {
            if (dd.args.size() != c.args.size()) continue;
            const std::string* res = image(c.result);
            bool ok = res && *res == dd.result;
            for (size_t k = 0; k < c.args.size() && ok; ++k) {
                const std::string* img = image(c.args[k]);
                ok = img && *img == dd.args[k];
            }
            if (!ok) continue;
            m.ctor_map[c.name] = dn;
            place_ctor(i + 1);
            m.ctor_map.erase(c.name);
            if (out.size() >= limit) return;
        }
    };

    std::function<void(size_t)> place_sort = [&](size_t i) {
        if (out.size() >= limit) return;
        if (i == src_sorts.size()) {
            place_ctor(0);
            return;
        }
        const SortDecl& s = *src_sorts[i];
        for (const auto& [dn, dd] : dst.sorts) {
            bool ok = true;
            for (size_t j = 0; j < i && ok; ++j) {
                const std::string& other = src_sorts[j]->name;
                const std::string& oimg = m.sort_map.at(other);
                if (sord.leq(other, s.name) && !dord.leq(oimg, dn)) ok = false;
                if (sord.leq(s.name, other) && !dord.leq(dn, oimg)) ok = false;
            }
            if (!ok) continue;
            m.sort_map[s.name] = dn;
            place_sort(i + 1);
            m.sort_map.erase(s.name);
            if (out.size() >= limit) return;
        }
    };

    place_sort(0);
    return out;
}

} // namespace semiosa
