#pragma once

#include "closure.hpp"
#include "dynamics.hpp"
#include "morphism.hpp"
#include "system.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace semiosa {

// Analogical blending takes a primed target system, a mould source system,
// and a correspondence between them, and builds a new system whose elements
// wear the target's names while carrying the source's structure. The stages
// below follow the creative sequence: prepare the initial space, check the
// source is compatible, match analogues, detail what has no counterpart,
// construct the blend, then reinterpret the original problem inside it.

// Pairs are (target name, source name), per element category.
struct Correspondence {
    std::set<std::pair<std::string, std::string>> sort_pairs;
    std::set<std::pair<std::string, std::string>> ctor_pairs;
    std::set<std::pair<std::string, std::string>> rel_pairs;

    size_t size() const { return sort_pairs.size() + ctor_pairs.size() + rel_pairs.size(); }
};

inline bool operator==(const Correspondence& a, const Correspondence& b) {
    return a.sort_pairs == b.sort_pairs && a.ctor_pairs == b.ctor_pairs &&
           a.rel_pairs == b.rel_pairs;
}

enum class Compatibility { subset, disjoint, incompatible };

inline const char* to_string(Compatibility c) {
    switch (c) {
    case Compatibility::subset: return "Subset";
    case Compatibility::disjoint: return "Disjoint";
    default: return "Incompatible";
    }
}

// The initial space may borrow the source's ordinary sorts either wholesale
// or not at all. Subset holds when every sort of xi0 is declared identically
// in the source and xi0's subsort pairs all hold there too; Disjoint when no
// sort name is shared. Anything in between cannot be blended against.
inline Compatibility check_compatibility(const SignSystem& xi0, const SignSystem& source) {
    bool subset = true;
    bool shared = false;
    auto xi0_pairs = order_pairs(xi0);
    auto src_pairs = order_pairs(source);
    for (const auto& [name, decl] : xi0.sorts) {
        auto it = source.sorts.find(name);
        if (it != source.sorts.end()) {
            shared = true;
            if (!(it->second == decl)) subset = false;
        } else {
            subset = false;
        }
    }
    if (subset)
        for (const auto& edge : xi0_pairs)
            if (!src_pairs.count(edge)) { subset = false; break; }
    if (subset) return Compatibility::subset;
    if (!shared) return Compatibility::disjoint;
    return Compatibility::incompatible;
}

namespace detail {

// Reachability over the union of both systems' subsort edges plus an
// optional association system. Names are compared as strings; the
// association exists precisely to supply shared supersorts.
struct CombinedReach {
    std::map<std::string, std::set<std::string>> up;

    void add_edges(const SignSystem& sys) {
        for (const auto& [a, b] : sys.subsorts) up[a].insert(b);
    }
    void close() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& [a, bs] : up) {
                std::set<std::string> add;
                for (const auto& b : bs) {
                    auto it = up.find(b);
                    if (it == up.end()) continue;
                    for (const auto& c : it->second)
                        if (!bs.count(c) && c != a) add.insert(c);
                }
                if (!add.empty()) {
                    bs.insert(add.begin(), add.end());
                    changed = true;
                }
            }
        }
    }
    bool leq(const std::string& a, const std::string& b) const {
        if (a == b) return true;
        auto it = up.find(a);
        return it != up.end() && it->second.count(b);
    }
    bool common_supersort(const std::string& t, const std::string& s,
                          const std::set<std::string>& names) const {
        for (const auto& z : names)
            if (leq(t, z) && leq(s, z)) return true;
        return false;
    }
};

inline std::string corr_key(const Correspondence& c) {
    std::string k;
    for (const auto& [t, s] : c.sort_pairs) k += "sort " + t + "~" + s + ";";
    for (const auto& [t, s] : c.ctor_pairs) k += "ctor " + t + "~" + s + ";";
    for (const auto& [t, s] : c.rel_pairs) k += "rel " + t + "~" + s + ";";
    return k;
}

inline bool ctor_pair_allowed(const SignSystem& target, const SignSystem& source,
                              const CtorDecl& ct, const CtorDecl& cs,
                              const std::set<std::pair<std::string, std::string>>& sort_pairs) {
    if (ct.args.size() != cs.args.size()) return false;
    for (size_t i = 0; i < ct.args.size(); ++i) {
        bool t_data = target.data_sorts.count(ct.args[i]) > 0;
        bool s_data = source.data_sorts.count(cs.args[i]) > 0;
        if (t_data != s_data) return false;
        if (t_data) {
            if (ct.args[i] != cs.args[i]) return false;
        } else if (!sort_pairs.count({ct.args[i], cs.args[i]})) {
            return false;
        }
    }
    return sort_pairs.count({ct.result, cs.result}) > 0;
}

inline bool rel_pair_allowed(const SignSystem& target, const SignSystem& source,
                             const RelDecl& rt, const RelDecl& rs,
                             const std::set<std::pair<std::string, std::string>>& sort_pairs) {
    if (rt.args.size() != rs.args.size()) return false;
    for (size_t i = 0; i < rt.args.size(); ++i) {
        bool t_data = target.data_sorts.count(rt.args[i]) > 0;
        bool s_data = source.data_sorts.count(rs.args[i]) > 0;
        if (t_data != s_data) return false;
        if (t_data) {
            if (rt.args[i] != rs.args[i]) return false;
        } else if (!sort_pairs.count({rt.args[i], rs.args[i]})) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Deterministic analogue matching. A target sort may pair with a source
// sort of the same name, or with one that shares a named supersort in the
// combined subsort graph of target, source, and the association system.
// Constructor and relation pairs additionally need equal arity with their
// argument and result sorts pairwise matched (data arguments must agree by
// name). Among all one-to-one correspondences the largest wins; ties go to
// the one with the smallest canonical serialized form.
inline Correspondence match_analogue(const SignSystem& target, const SignSystem& source,
                                     const SignSystem* via = nullptr) {
    detail::CombinedReach reach;
    reach.add_edges(target);
    reach.add_edges(source);
    if (via) reach.add_edges(*via);
    reach.close();

    std::set<std::string> names;
    for (const auto& [n, d] : target.sorts) names.insert(n);
    for (const auto& [n, d] : source.sorts) names.insert(n);
    if (via)
        for (const auto& [n, d] : via->sorts) names.insert(n);

    std::vector<std::string> tsorts, tctors, trels;
    for (const auto& [n, d] : target.sorts) tsorts.push_back(n);
    for (const auto& [n, d] : target.ctors) tctors.push_back(n);
    for (const auto& [n, d] : target.rels) trels.push_back(n);

    std::map<std::string, std::vector<std::string>> sort_cands;
    for (const auto& t : tsorts)
        for (const auto& [s, d] : source.sorts)
            if (t == s || reach.common_supersort(t, s, names)) sort_cands[t].push_back(s);

    Correspondence best;
    std::string best_key;
    bool have_best = false;
    Correspondence cur;
    std::set<std::string> used_sorts, used_ctors, used_rels;

    auto consider = [&]() {
        if (!have_best || cur.size() > best.size()) {
            best = cur;
            best_key = detail::corr_key(cur);
            have_best = true;
            return;
        }
        if (cur.size() == best.size()) {
            std::string k = detail::corr_key(cur);
            if (k < best_key) {
                best = cur;
                best_key = k;
            }
        }
    };

    // Upper bound used to prune branches that cannot reach the best size.
    auto bound_rels = [&](size_t i) { return trels.size() - i; };

    std::function<void(size_t)> match_rels = [&](size_t i) {
        if (i == trels.size()) {
            consider();
            return;
        }
        if (have_best && cur.size() + bound_rels(i) < best.size()) return;
        const RelDecl& rt = target.rels.at(trels[i]);
        for (const auto& [s, rs] : source.rels) {
            if (used_rels.count(s)) continue;
            if (!detail::rel_pair_allowed(target, source, rt, rs, cur.sort_pairs)) continue;
            used_rels.insert(s);
            cur.rel_pairs.insert({trels[i], s});
            match_rels(i + 1);
            cur.rel_pairs.erase({trels[i], s});
            used_rels.erase(s);
        }
        match_rels(i + 1); // leave unmatched
    };

    auto bound_ctors = [&](size_t i) { return tctors.size() - i + trels.size(); };

    std::function<void(size_t)> match_ctors = [&](size_t i) {
        if (i == tctors.size()) {
            match_rels(0);
            return;
        }
        if (have_best && cur.size() + bound_ctors(i) < best.size()) return;
        const CtorDecl& ct = target.ctors.at(tctors[i]);
        for (const auto& [s, cs] : source.ctors) {
            if (used_ctors.count(s)) continue;
            if (!detail::ctor_pair_allowed(target, source, ct, cs, cur.sort_pairs)) continue;
            used_ctors.insert(s);
            cur.ctor_pairs.insert({tctors[i], s});
            match_ctors(i + 1);
            cur.ctor_pairs.erase({tctors[i], s});
            used_ctors.erase(s);
        }
        match_ctors(i + 1);
    };

    auto bound_sorts = [&](size_t i) {
        return tsorts.size() - i + tctors.size() + trels.size();
    };

    std::function<void(size_t)> match_sorts = [&](size_t i) {
        if (i == tsorts.size()) {
            match_ctors(0);
            return;
        }
        if (have_best && cur.size() + bound_sorts(i) < best.size()) return;
        auto it = sort_cands.find(tsorts[i]);
        if (it != sort_cands.end()) {
            for (const auto& s : it->second) {
                if (used_sorts.count(s)) continue;
                used_sorts.insert(s);
                cur.sort_pairs.insert({tsorts[i], s});
                match_sorts(i + 1);
                cur.sort_pairs.erase({tsorts[i], s});
                used_sorts.erase(s);
            }
        }
        match_sorts(i + 1);
    };

    match_sorts(0);
    return best;
}

struct DetailResult {
    SignSystem source;   // source extended with stubs
    Correspondence corr; // now total on the target
    std::vector<std::string> stubs;
};

// Every target element without a counterpart gets a fresh stub declaration
// in the source, named stub_<target name> with the target's structure
// carried over through the sort pairing. Sorts are stubbed first so that
// constructor and relation signatures always find a paired source sort.
inline DetailResult detail_source(const SignSystem& source, const SignSystem& target,
                                  const Correspondence& corr) {
    DetailResult out{source, corr, {}};

    std::set<std::string> matched_sorts, matched_ctors, matched_rels;
    for (const auto& [t, s] : corr.sort_pairs) matched_sorts.insert(t);
    for (const auto& [t, s] : corr.ctor_pairs) matched_ctors.insert(t);
    for (const auto& [t, s] : corr.rel_pairs) matched_rels.insert(t);

    for (const auto& [name, decl] : target.sorts) {
        if (matched_sorts.count(name)) continue;
        std::string stub = "stub_" + name;
        if (out.source.sorts.count(stub) || out.source.data_sorts.count(stub))
            fail("NameCollision", "stub sort " + stub + " collides with a source declaration");
        out.source.sorts.emplace(stub, SortDecl{stub, decl.level});
        out.corr.sort_pairs.insert({name, stub});
        out.stubs.push_back(stub);
    }

    for (const auto& [name, decl] : target.data_sorts)
        if (!out.source.data_sorts.count(name))
            out.source.data_sorts.emplace(name, DataSortDecl{name});

    std::map<std::string, std::string> to_source;
    for (const auto& [t, s] : out.corr.sort_pairs) to_source[t] = s;
    auto map_sort = [&](const std::string& n) -> std::string {
        if (target.data_sorts.count(n)) return n; // data keeps its name
        auto it = to_source.find(n);
        if (it == to_source.end())
            fail("InvalidResult", "target sort " + n + " has no source counterpart");
        return it->second;
    };

    for (const auto& [name, decl] : target.ctors) {
        if (matched_ctors.count(name)) continue;
        std::string stub = "stub_" + name;
        if (out.source.ctors.count(stub))
            fail("NameCollision", "stub constructor " + stub + " collides with a source declaration");
        CtorDecl d{stub, {}, map_sort(decl.result), decl.priority};
        for (const auto& a : decl.args) d.args.push_back(map_sort(a));
        out.source.ctors.emplace(stub, std::move(d));
        out.corr.ctor_pairs.insert({name, stub});
        out.stubs.push_back(stub);
    }

    for (const auto& [name, decl] : target.rels) {
        if (matched_rels.count(name)) continue;
        std::string stub = "stub_" + name;
        if (out.source.rels.count(stub))
            fail("NameCollision", "stub relation " + stub + " collides with a source declaration");
        RelDecl d{stub, {}, decl.environmental};
        for (const auto& a : decl.args) d.args.push_back(map_sort(a));
        out.source.rels.emplace(stub, std::move(d));
        out.corr.rel_pairs.insert({name, stub});
        out.stubs.push_back(stub);
    }

    auto diags = validate_system(out.source);
    if (!diags.empty())
        fail("InvalidResult", "detailing produced an invalid source: " + diags.front().format());
    return out;
}

namespace detail {

inline bool same_form(const Axiom& a, const Axiom& b) {
    return a.kind == b.kind && a.body == b.body &&
           (a.kind == AxiomKind::denial || a.head == b.head);
}

struct Renamer {
    std::map<std::string, std::string> sorts, ctors, rels;

    std::string sort(const std::string& n) const {
        auto it = sorts.find(n);
        return it == sorts.end() ? n : it->second;
    }
    std::string ctor(const std::string& n) const {
        auto it = ctors.find(n);
        return it == ctors.end() ? n : it->second;
    }
    std::string rel(const std::string& n) const {
        auto it = rels.find(n);
        return it == rels.end() ? n : it->second;
    }
    Term term(const Term& t) const {
        if (t.kind != Term::Kind::app) return t;
        Term out = Term::app(ctor(t.head));
        for (const auto& a : t.args) out.args.push_back(term(a));
        return out;
    }
    Atom atom(const Atom& a) const {
        Atom out{rel(a.rel), {}};
        for (const auto& t : a.args) out.args.push_back(term(t));
        return out;
    }
    Axiom axiom(const Axiom& ax) const {
        Axiom out = ax;
        out.body.clear();
        for (const auto& a : ax.body) out.body.push_back(atom(a));
        if (ax.kind != AxiomKind::denial) out.head = atom(ax.head);
        return out;
    }
};

} // namespace detail

struct BlendParts {
    SignSystem blend;
    SemioticMorphism mu2;  // target into blend, identity on names
    SemioticMorphism mu2p; // source into blend, renamed through the pairing
};

// Fuses the two systems over a correspondence that is total on the target.
// Each pair yields one element named after the target and structured after
// the source; unmatched source elements carry over with their sort
// references renamed. Source axioms keep their ranks; target axioms are
// copied with ranks offset above the highest source rank, so the mould's
// relative ordering survives while the priming's requirements dominate.
inline BlendParts construct_blend(const SignSystem& target, const SignSystem& source,
                                  const Correspondence& corr) {
    std::set<std::string> covered_sorts, covered_ctors, covered_rels;
    for (const auto& [t, s] : corr.sort_pairs) covered_sorts.insert(t);
    for (const auto& [t, s] : corr.ctor_pairs) covered_ctors.insert(t);
    for (const auto& [t, s] : corr.rel_pairs) covered_rels.insert(t);
    for (const auto& [n, d] : target.sorts)
        if (!covered_sorts.count(n))
            fail("InvalidResult", "correspondence leaves target sort " + n + " unmatched");
    for (const auto& [n, d] : target.ctors)
        if (!covered_ctors.count(n))
            fail("InvalidResult", "correspondence leaves target constructor " + n + " unmatched");
    for (const auto& [n, d] : target.rels)
        if (!covered_rels.count(n))
            fail("InvalidResult", "correspondence leaves target relation " + n + " unmatched");

    detail::Renamer rn;
    for (const auto& [t, s] : corr.sort_pairs) rn.sorts[s] = t;
    for (const auto& [t, s] : corr.ctor_pairs) rn.ctors[s] = t;
    for (const auto& [t, s] : corr.rel_pairs) rn.rels[s] = t;

    BlendParts out;
    SignSystem& blend = out.blend;
    blend.name = "blend(" + target.name + "," + source.name + ")";

    for (const auto& [s, decl] : source.sorts) {
        std::string n = rn.sort(s);
        if (!blend.sorts.emplace(n, SortDecl{n, decl.level}).second)
            fail("NameClash", "blend sort " + n + " arises twice");
    }
    for (const auto& [n, d] : target.data_sorts) blend.data_sorts.emplace(n, d);
    for (const auto& [n, d] : source.data_sorts) blend.data_sorts.emplace(n, d);

    for (const auto& [a, b] : source.subsorts) blend.subsorts.insert({rn.sort(a), rn.sort(b)});
    for (const auto& [a, b] : target.subsorts) blend.subsorts.insert({a, b});

    auto rename_sig = [&](const std::vector<std::string>& args) {
        std::vector<std::string> out_args;
        for (const auto& a : args)
            out_args.push_back(source.data_sorts.count(a) ? a : rn.sort(a));
        return out_args;
    };

    for (const auto& [s, decl] : source.ctors) {
        std::string n = rn.ctor(s);
        CtorDecl d{n, rename_sig(decl.args), rn.sort(decl.result), decl.priority};
        if (!blend.ctors.emplace(n, std::move(d)).second)
            fail("NameClash", "blend constructor " + n + " arises twice");
    }
    for (const auto& [s, decl] : source.rels) {
        std::string n = rn.rel(s);
        RelDecl d{n, rename_sig(decl.args), decl.environmental};
        if (!blend.rels.emplace(n, std::move(d)).second)
            fail("NameClash", "blend relation " + n + " arises twice");
    }

    std::uint64_t max_source_rank = 0;
    for (const auto& [n, ax] : source.axioms) max_source_rank = std::max(max_source_rank, ax.rank);
    std::uint64_t offset = max_source_rank + 1;

    for (const auto& [n, ax] : source.axioms) blend.axioms.emplace(n, rn.axiom(ax));
    for (const auto& [n, ax] : target.axioms) {
        Axiom copy = ax;
        copy.rank += offset;
        auto it = blend.axioms.find(n);
        if (it != blend.axioms.end()) {
            if (!detail::same_form(it->second, copy))
                fail("NameClash", "axiom " + n + " names different statements in the two inputs");
            it->second = std::move(copy); // identical form, priming rank wins
        } else {
            blend.axioms.emplace(n, std::move(copy));
        }
    }

    auto diags = validate_system(blend);
    if (!diags.empty())
        fail("InvalidResult", "blend does not validate: " + diags.front().format());

    out.mu2 = identity_morphism(target, "mu2");
    out.mu2.to = blend.name;

    out.mu2p.name = "mu2p";
    out.mu2p.from = source.name;
    out.mu2p.to = blend.name;
    for (const auto& [s, d] : source.sorts) out.mu2p.sort_map[s] = rn.sort(s);
    for (const auto& [s, d] : source.data_sorts) out.mu2p.data_map[s] = s;
    for (const auto& [s, d] : source.ctors) out.mu2p.ctor_map[s] = rn.ctor(s);
    for (const auto& [s, d] : source.rels) out.mu2p.rel_map[s] = rn.rel(s);

    auto rep2 = check_properties(out.mu2, target, blend, {Property::axiom});
    if (!rep2.well_formed)
        fail("PropertyViolation", "mu2 does not verify: " + rep2.issues.front().format());
    if (!rep2.axiom.holds)
        fail("PropertyViolation", "mu2 is not axiom-preserving: " + rep2.axiom.witnesses.front());

    auto rep2p =
        check_properties(out.mu2p, source, blend, {Property::level, Property::priority});
    if (!rep2p.well_formed)
        fail("PropertyViolation", "mu2p does not verify: " + rep2p.issues.front().format());
    if (!rep2p.level.holds)
        fail("PropertyViolation", "mu2p is not level-preserving: " + rep2p.level.witnesses.front());
    if (!rep2p.priority.holds)
        fail("PropertyViolation",
             "mu2p is not priority-preserving: " + rep2p.priority.witnesses.front());

    return out;
}

struct Reinterpretation {
    std::string axiom;
    std::uint64_t rank = 0;
    enum class Verdict { holds, fails, skipped } verdict = Verdict::skipped;
};

inline const char* to_string(Reinterpretation::Verdict v) {
    switch (v) {
    case Reinterpretation::Verdict::holds: return "holds";
    case Reinterpretation::Verdict::fails: return "fails";
    default: return "skipped";
    }
}

struct ReinterpretationResult {
    std::vector<Reinterpretation> entries; // descending rank, then name
    bool accepted = false;
};

// Carries the problem specification's axioms into the blend along the
// target path and checks each one against the blend's closure. Axioms the
// partial path cannot translate are reported as skipped; acceptance asks
// that every translatable axiom at or above the threshold holds.
inline ReinterpretationResult reinterpret(const SignSystem& blend,
                                          const SignSystem& spec_system,
                                          const std::vector<const SemioticMorphism*>& path,
                                          std::uint64_t threshold) {
    GroundModel model = closure(blend);

    std::vector<const Axiom*> order;
    for (const auto& [n, ax] : spec_system.axioms) order.push_back(&ax);
    std::sort(order.begin(), order.end(), [](const Axiom* a, const Axiom* b) {
        if (a->rank != b->rank) return a->rank > b->rank;
        return a->name < b->name;
    });

    ReinterpretationResult out;
    out.accepted = true;
    for (const Axiom* ax : order) {
        Reinterpretation entry{ax->name, ax->rank, Reinterpretation::Verdict::skipped};
        std::optional<Axiom> cur = *ax;
        for (const SemioticMorphism* m : path) {
            cur = translate(*m, *cur);
            if (!cur) break;
        }
        if (cur) {
            bool ok = false;
            try {
                ok = entails_in(blend, model, *cur);
            } catch (const Error&) {
                ok = false;
            }
            entry.verdict =
                ok ? Reinterpretation::Verdict::holds : Reinterpretation::Verdict::fails;
            if (!ok && ax->rank >= threshold) out.accepted = false;
        }
        out.entries.push_back(std::move(entry));
    }
    return out;
}

struct BlendInput {
    std::string name;
    SignSystem xi0;
    FStep f0;
    SignSystem target;
    SemioticMorphism mu1; // post-f0 initial space into the target
    SignSystem source;
    SemioticMorphism mu1p; // post-f0 initial space into the source
    FStep f1_target;
    FStep f1_source;
    bool match_auto = true;
    Correspondence explicit_corr;           // used when match_auto is false
    std::optional<SignSystem> via;          // association mediating the matching
    FStep f2;
    std::uint64_t threshold = 0;
};

struct BlendReport {
    std::string name;
    Compatibility compatibility = Compatibility::incompatible;
    Correspondence correspondence;
    std::vector<std::string> stubs;
    SignSystem xi0f;    // initial space after f0
    SignSystem target1; // target after f1
    SignSystem source2; // source after f1 and detailing
    SignSystem blend;   // final blend, after f2
    SemioticMorphism mu2;
    SemioticMorphism mu2p;
    ReinterpretationResult reinterpretation;
    bool accepted = false;
};

namespace detail {

template <typename F>
auto at_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (Error& e) {
        if (e.stage.empty()) e.stage = stage;
        throw;
    }
}

} // namespace detail

// The whole pipeline. The first failing stage aborts with an error tagged
// by stage name; a completed run returns the full report. Matching and
// detailing run on the post-f1 systems so that the correspondence handed to
// construction is total on everything the target then contains.
inline BlendReport run_pipeline(const BlendInput& input) {
    BlendReport report;
    report.name = input.name;

    report.xi0f = detail::at_stage("f0", [&] { return apply_f(input.xi0, input.f0); });

    detail::at_stage("mu1", [&] {
        auto rep = check_properties(input.mu1, report.xi0f, input.target, {Property::axiom});
        if (!rep.well_formed)
            fail("PropertyViolation", "mu1 does not verify: " + rep.issues.front().format());
        if (!rep.axiom.holds)
            fail("PropertyViolation",
                 "mu1 is not axiom-preserving: " + rep.axiom.witnesses.front());
        return 0;
    });
    detail::at_stage("mu1p", [&] {
        auto rep = check_properties(input.mu1p, report.xi0f, input.source,
                                    {Property::level, Property::priority});
        if (!rep.well_formed)
            fail("PropertyViolation", "mu1p does not verify: " + rep.issues.front().format());
        if (!rep.level.holds)
            fail("PropertyViolation",
                 "mu1p is not level-preserving: " + rep.level.witnesses.front());
        if (!rep.priority.holds)
            fail("PropertyViolation",
                 "mu1p is not priority-preserving: " + rep.priority.witnesses.front());
        return 0;
    });

    report.compatibility = detail::at_stage("compatibility", [&] {
        auto c = check_compatibility(input.xi0, input.source);
        if (c == Compatibility::incompatible)
            fail("Incompatible", "the initial space shares only part of the source's sorts");
        return c;
    });

    report.target1 = detail::at_stage("f1", [&] { return apply_f(input.target, input.f1_target); });
    SignSystem source1 =
        detail::at_stage("f1", [&] { return apply_f(input.source, input.f1_source); });

    Correspondence corr = detail::at_stage("matching", [&] {
        if (input.match_auto)
            return match_analogue(report.target1, source1,
                                  input.via ? &*input.via : nullptr);
        for (const auto& [t, s] : input.explicit_corr.sort_pairs)
            if (!report.target1.sorts.count(t) || !source1.sorts.count(s))
                fail("UnknownVocabulary", "explicit pair " + t + "~" + s + " names unknown sorts");
        for (const auto& [t, s] : input.explicit_corr.ctor_pairs)
            if (!report.target1.ctors.count(t) || !source1.ctors.count(s))
                fail("UnknownVocabulary",
                     "explicit pair " + t + "~" + s + " names unknown constructors");
        for (const auto& [t, s] : input.explicit_corr.rel_pairs)
            if (!report.target1.rels.count(t) || !source1.rels.count(s))
                fail("UnknownVocabulary",
                     "explicit pair " + t + "~" + s + " names unknown relations");
        return input.explicit_corr;
    });

    DetailResult detailed = detail::at_stage(
        "detailing", [&] { return detail_source(source1, report.target1, corr); });
    report.correspondence = detailed.corr;
    report.stubs = detailed.stubs;
    report.source2 = detailed.source;

    BlendParts parts = detail::at_stage("construction", [&] {
        auto p = construct_blend(report.target1, report.source2, report.correspondence);
        p.blend.name = input.name;
        p.mu2.to = input.name;
        p.mu2p.to = input.name;
        return p;
    });
    report.mu2 = parts.mu2;
    report.mu2p = parts.mu2p;

    report.blend = detail::at_stage("f2", [&] { return apply_f(parts.blend, input.f2); });

    report.reinterpretation = detail::at_stage("reinterpretation", [&] {
        std::vector<const SemioticMorphism*> path{&input.mu1, &report.mu2};
        return reinterpret(report.blend, report.xi0f, path, input.threshold);
    });
    report.accepted = report.reinterpretation.accepted;
    return report;
}

} // namespace semiosa
