#pragma once

#include "blend.hpp"
#include "diag.hpp"
#include "dynamics.hpp"
#include "emergence.hpp"
#include "morphism.hpp"
#include "rational.hpp"
#include "system.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace semiosa {

// JSON views of engine results. All emitters use ordered maps with a fixed
// key order, and rationals leave as "n/d" strings, so equal inputs always
// serialize to identical bytes.

using Json = nlohmann::ordered_json;

inline Json envelope(const std::string& command) {
    Json j;
    j["schema"] = "semiosa/1";
    j["command"] = command;
    return j;
}

inline Json to_json(const Diagnostic& d) {
    Json j;
    j["kind"] = d.kind == DiagKind::syntax ? "syntax"
                : d.kind == DiagKind::resolve ? "resolve"
                                              : "validate";
    j["code"] = d.code;
    j["where"] = d.where;
    j["message"] = d.message;
    j["line"] = d.line;
    j["col"] = d.col;
    return j;
}

inline Json to_json(const std::vector<Diagnostic>& ds) {
    Json j = Json::array();
    for (const auto& d : ds) j.push_back(to_json(d));
    return j;
}

inline Json model_strings(const GroundModel& m) {
    Json j = Json::array();
    for (const Atom& a : m) j.push_back(to_string(a));
    return j;
}

// Shallow view: sizes plus the closure-derived measures.
inline Json system_summary(const SignSystem& sys) {
    GroundModel m = closure(sys);
    Json j;
    j["name"] = sys.name;
    j["sorts"] = sys.sorts.size();
    j["data_sorts"] = sys.data_sorts.size();
    j["subsorts"] = sys.subsorts.size();
    j["ctors"] = sys.ctors.size();
    j["rels"] = sys.rels.size();
    j["axioms"] = sys.axioms.size();
    j["closure_atoms"] = m.size();
    j["epsilon"] = epsilon_in(sys, m);
    return j;
}

// Deep view: every declaration, spelled out. Used where results are diffed.
inline Json system_detail(const SignSystem& sys) {
    Json j;
    j["name"] = sys.name;
    Json sorts = Json::array();
    for (const auto& [n, d] : sys.sorts)
        sorts.push_back(Json{{"name", n}, {"level", d.level}});
    j["sorts"] = std::move(sorts);
    Json data = Json::array();
    for (const auto& [n, d] : sys.data_sorts) data.push_back(n);
    j["data_sorts"] = std::move(data);
    Json subs = Json::array();
    for (const auto& [a, b] : sys.subsorts) subs.push_back(Json::array({a, b}));
    j["subsorts"] = std::move(subs);
    Json ctors = Json::array();
    for (const auto& [n, d] : sys.ctors)
        ctors.push_back(Json{
            {"name", n}, {"args", d.args}, {"result", d.result}, {"prio", d.priority}});
    j["ctors"] = std::move(ctors);
    Json rels = Json::array();
    for (const auto& [n, d] : sys.rels)
        rels.push_back(Json{{"name", n}, {"args", d.args}, {"env", d.environmental}});
    j["rels"] = std::move(rels);
    Json axioms = Json::array();
    for (const auto& [n, ax] : sys.axioms) {
        Json a;
        a["name"] = n;
        a["rank"] = ax.rank;
        a["kind"] = ax.kind == AxiomKind::fact ? "fact"
                    : ax.kind == AxiomKind::rule ? "rule"
                                                 : "deny";
        Json body = Json::array();
        for (const Atom& at : ax.body) body.push_back(to_string(at));
        a["body"] = std::move(body);
        if (ax.kind != AxiomKind::denial) a["head"] = to_string(ax.head);
        axioms.push_back(std::move(a));
    }
    j["axioms"] = std::move(axioms);
    return j;
}

inline Json to_json(const SemioticMorphism& m) {
    Json j;
    j["name"] = m.name;
    j["from"] = m.from;
    j["to"] = m.to;
    j["sorts"] = Json(m.sort_map);
    j["data"] = Json(m.data_map);
    j["ctors"] = Json(m.ctor_map);
    j["rels"] = Json(m.rel_map);
    return j;
}

inline Json to_json(const PropertyCheck& c) {
    Json j;
    j["requested"] = c.requested;
    j["holds"] = c.holds;
    j["witnesses"] = c.witnesses;
    return j;
}

inline Json to_json(const PropertyReport& r) {
    Json j;
    j["well_formed"] = r.well_formed;
    j["issues"] = to_json(r.issues);
    Json props;
    props["level"] = to_json(r.level);
    props["priority"] = to_json(r.priority);
    props["axiom"] = to_json(r.axiom);
    props["natural"] = to_json(r.natural);
    j["properties"] = std::move(props);
    j["skipped_axioms"] = r.skipped_axioms;
    j["epsilon_source"] = r.epsilon_source;
    j["epsilon_target"] = r.epsilon_target;
    return j;
}

inline Json to_json(const TrajectoryStep& s) {
    Json j;
    j["index"] = s.index;
    j["feasible"] = s.feasible;
    Json probs = Json::array();
    for (const Rational& p : s.probabilities) probs.push_back(to_fraction(p));
    j["probabilities"] = std::move(probs);
    j["chosen"] = s.chosen;
    j["cost_f"] = s.cost_f;
    j["cost_mu"] = s.cost_mu;
    j["epsilon_after"] = s.epsilon_after;
    j["warnings"] = s.warnings;
    return j;
}

inline Json to_json(const Trajectory& t) {
    Json j;
    Json steps = Json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s));
    j["steps"] = std::move(steps);
    j["total_cost_f"] = t.total_cost_f();
    j["total_cost_mu"] = t.total_cost_mu();
    j["total_cost"] = t.total_cost();
    return j;
}

inline Json to_json(const RunResult& r) {
    Json j;
    j["completed"] = r.completed;
    j["error"] = r.error;
    j["trajectory"] = to_json(r.trajectory);
    if (r.omega) {
        Json o;
        o["system"] = system_detail(r.omega->phi);
        o["closure"] = model_strings(r.omega->lambda);
        j["omega"] = std::move(o);
    } else {
        j["omega"] = nullptr;
    }
    return j;
}

inline Json to_json(const Correspondence& c) {
    auto pairs = [](const std::set<std::pair<std::string, std::string>>& ps) {
        Json j = Json::array();
        for (const auto& [t, s] : ps) j.push_back(Json::array({t, s}));
        return j;
    };
    Json j;
    j["sorts"] = pairs(c.sort_pairs);
    j["ctors"] = pairs(c.ctor_pairs);
    j["rels"] = pairs(c.rel_pairs);
    return j;
}

inline Json to_json(const ReinterpretationResult& r) {
    Json j;
    j["accepted"] = r.accepted;
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back(
            Json{{"axiom", e.axiom}, {"rank", e.rank}, {"verdict", to_string(e.verdict)}});
    j["entries"] = std::move(entries);
    return j;
}

inline Json to_json(const BlendReport& r) {
    Json j;
    j["name"] = r.name;
    j["compatibility"] = to_string(r.compatibility);
    j["correspondence"] = to_json(r.correspondence);
    j["stubs"] = r.stubs;
    j["xi0f"] = system_summary(r.xi0f);
    j["target1"] = system_summary(r.target1);
    j["source2"] = system_summary(r.source2);
    j["blend"] = system_detail(r.blend);
    j["mu2"] = to_json(r.mu2);
    j["mu2p"] = to_json(r.mu2p);
    j["reinterpretation"] = to_json(r.reinterpretation);
    j["accepted"] = r.accepted;
    return j;
}

inline Json to_json(const EmergenceCheck& c) {
    Json j;
    j["emergent"] = c.emergent;
    j["obs_whole"] = system_summary(c.obs_whole);
    j["obs_common"] = system_summary(c.obs_common);
    j["whole_closure"] = model_strings(c.whole);
    j["common_closure"] = model_strings(c.common);
    return j;
}

inline Json to_json(const Deducibility& d) {
    Json j;
    j["deducible"] = d.deducible;
    j["witness"] = d.witness ? to_json(*d.witness) : Json(nullptr);
    return j;
}

inline Json to_json(const SourceClass& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["witness"] = s.witness;
    return j;
}

inline Json to_json(const CreativityVerdict& v) {
    Json j;
    j["natural"] = v.natural;
    j["unique"] = v.unique;
    j["morphism_count"] = v.morphism_count;
    j["creative"] = v.creative;
    return j;
}

} // namespace semiosa
