#pragma once

#include "closure.hpp"
#include "morphism.hpp"
#include "rational.hpp"
#include "system.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semiosa {

// One rewrite f splits into a divergent half that opens the system up (new
// sorts or data plus new constructors) and a convergent half that pins it
// down again (new relations or axioms). Neither half may be empty, and
// neither may touch what is already there: no redefinitions, no rank edits.

struct DivergenceDelta {
    std::map<std::string, SortDecl> sorts;
    std::map<std::string, DataSortDecl> data_sorts;
    std::set<std::pair<std::string, std::string>> subsorts;
    std::map<std::string, CtorDecl> ctors;
};

struct ConvergenceDelta {
    std::map<std::string, RelDecl> rels;
    std::map<std::string, Axiom> axioms;
};

struct FStep {
    DivergenceDelta divergence;
    ConvergenceDelta convergence;
};

namespace detail {

inline void require_valid_result(const SignSystem& sys, const char* op) {
    auto diags = validate_system(sys);
    if (!diags.empty())
        fail("InvalidResult", std::string(op) + " produced an invalid system: " +
                                  diags.front().format());
}

} // namespace detail

// Grows the vocabulary: at least one constructor and at least one sort or
// data sort, everything fresh. The result must validate.
inline SignSystem apply_divergence(const SignSystem& sys, const DivergenceDelta& d) {
    if (d.ctors.empty() || (d.sorts.empty() && d.data_sorts.empty()))
        fail("EmptyDelta",
             "divergence must add at least one constructor and at least one sort or data sort");

    SignSystem out = sys;
    for (const auto& [name, decl] : d.sorts) {
        if (out.sorts.count(name) || out.data_sorts.count(name))
            fail("NameCollision", "sort " + name + " is already declared");
        out.sorts.emplace(name, decl);
    }
    for (const auto& [name, decl] : d.data_sorts) {
        if (out.sorts.count(name) || out.data_sorts.count(name))
            fail("NameCollision", "data sort " + name + " is already declared");
        out.data_sorts.emplace(name, decl);
    }
    for (const auto& edge : d.subsorts) {
        if (out.subsorts.count(edge))
            fail("NameCollision",
                 "subsort " + edge.first + " < " + edge.second + " is already declared");
        out.subsorts.insert(edge);
    }
    for (const auto& [name, decl] : d.ctors) {
        if (out.ctors.count(name))
            fail("NameCollision", "constructor " + name + " is already declared");
        out.ctors.emplace(name, decl);
    }
    detail::require_valid_result(out, "divergence");
    return out;
}

// Closes the step: at least one new relation or axiom. Reusing an existing
// axiom name with a different rank is rank tampering, anything else reused
// is a plain collision.
inline SignSystem apply_convergence(const SignSystem& sys, const ConvergenceDelta& d) {
    if (d.rels.empty() && d.axioms.empty())
        fail("EmptyDelta", "convergence must add at least one relation or axiom");

    SignSystem out = sys;
    for (const auto& [name, decl] : d.rels) {
        if (out.rels.count(name))
            fail("NameCollision", "relation " + name + " is already declared");
        out.rels.emplace(name, decl);
    }
    for (const auto& [name, ax] : d.axioms) {
        auto it = out.axioms.find(name);
        if (it != out.axioms.end()) {
            if (it->second.rank != ax.rank)
                fail("RankTamper", "axiom " + name + " already holds rank " +
                                       std::to_string(it->second.rank) +
                                       "; redefining it to rank " + std::to_string(ax.rank) +
                                       " is not allowed");
            fail("NameCollision", "axiom " + name + " is already declared");
        }
        Axiom resolved = ax;
        resolve_literals(out, resolved);
        out.axioms.emplace(name, std::move(resolved));
    }
    detail::require_valid_result(out, "convergence");
    return out;
}

inline SignSystem apply_f(const SignSystem& sys, const FStep& f) {
    return apply_convergence(apply_divergence(sys, f.divergence), f.convergence);
}

// Candidate continuation of a component: a labelled target system together
// with the morphism that is supposed to carry the rewritten system into it.
struct CandidateTransition {
    std::string label;
    Rational weight;
    SignSystem target;
    SemioticMorphism morphism;
};

struct SemioticComponent {
    FStep f;
    std::vector<CandidateTransition> candidates;
};

struct Scenario {
    std::string name;
    SignSystem initial;
    std::uint64_t seed = 0;
    Rational gamma_up = Rational(1, 5);
    Rational gamma_down = Rational(1, 10);
    std::vector<SemioticComponent> components;
};

// The normative generator: a 64-bit linear congruential step followed by a
// division down to binary64. Each component run consumes exactly one draw,
// whatever the number of surviving candidates.
struct Lcg {
    std::uint64_t state;

    explicit Lcg(std::uint64_t seed) : state(seed) {}

    double next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state) * 0x1p-64;
    }
};

struct TrajectoryStep {
    size_t index = 0;
    std::vector<std::string> feasible; // labels in declaration order
    std::vector<Rational> probabilities;
    std::string chosen;
    std::uint64_t cost_f = 0;
    std::uint64_t cost_mu = 0;
    size_t epsilon_after = 0;
    std::vector<std::string> warnings;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;

    std::uint64_t total_cost_f() const {
        std::uint64_t t = 0;
        for (const auto& s : steps) t += s.cost_f;
        return t;
    }
    std::uint64_t total_cost_mu() const {
        std::uint64_t t = 0;
        for (const auto& s : steps) t += s.cost_mu;
        return t;
    }
    std::uint64_t total_cost() const { return total_cost_f() + total_cost_mu(); }
};

struct ProductModel {
    SignSystem phi;
    GroundModel lambda;
};

struct RunResult {
    Trajectory trajectory;
    std::optional<ProductModel> omega; // present only for completed runs
    bool completed = false;
    std::string error;
};

// Reinforcement weights live outside any single component: the same label
// keeps its learned weight across the whole process. A label's weight is
// created from its declared value the first time the label is seen.
using WeightState = std::map<std::string, Rational>;

// One basic component: rewrite, filter candidates by morphism verification,
// renormalize the survivors' weights into exact probabilities, sample by
// inverse CDF in declaration order, then reinforce (chosen up, every other
// survivor down). Returns the step record and the chosen target.
inline std::pair<TrajectoryStep, SignSystem> run_component(const SignSystem& sys,
                                                           const SemioticComponent& comp,
                                                           Lcg& rng, WeightState& weights,
                                                           const Rational& gamma_up,
                                                           const Rational& gamma_down,
                                                           size_t index) {
    TrajectoryStep step;
    step.index = index;

    SignSystem rewritten = apply_f(sys, comp.f);
    step.cost_f = static_cast<std::uint64_t>(rewritten.axioms.size() + rewritten.rels.size());

    for (const CandidateTransition& c : comp.candidates)
        if (!weights.count(c.label)) weights.emplace(c.label, c.weight);

    std::vector<const CandidateTransition*> feasible;
    for (const CandidateTransition& c : comp.candidates) {
        auto diags = verify(c.morphism, rewritten, c.target);
        if (diags.empty()) {
            feasible.push_back(&c);
            step.feasible.push_back(c.label);
        } else {
            step.warnings.push_back("candidate " + c.label + " infeasible: " +
                                    diags.front().format());
        }
    }
    if (feasible.empty())
        fail("InfeasibleComponent",
             "no candidate morphism verifies at step " + std::to_string(index));

    Rational denom(0);
    for (const CandidateTransition* c : feasible) denom += weights.at(c->label);
    for (const CandidateTransition* c : feasible)
        step.probabilities.push_back(weights.at(c->label) / denom);

    double u = rng.next();
    Rational u_exact = rational_from_double(u);
    size_t chosen = feasible.size() - 1;
    Rational cum(0);
    for (size_t k = 0; k < feasible.size(); ++k) {
        cum += step.probabilities[k];
        if (u_exact < cum) {
            chosen = k;
            break;
        }
    }

    const CandidateTransition& pick = *feasible[chosen];
    step.chosen = pick.label;
    step.cost_mu = static_cast<std::uint64_t>(pick.morphism.mapping_count());
    step.epsilon_after = epsilon(pick.target);
    if (step.cost_mu >= step.cost_f)
        step.warnings.push_back("translation cost " + std::to_string(step.cost_mu) +
                                " is not small against rewrite cost " +
                                std::to_string(step.cost_f) + " for candidate " + pick.label);

    weights.at(pick.label) *= Rational(1) + gamma_up;
    for (const CandidateTransition* c : feasible)
        if (c != &pick) weights.at(c->label) *= Rational(1) - gamma_down;

    return {std::move(step), pick.target};
}

// Folds the components from the initial system. A component with no feasible
// candidate aborts the run; the partial trajectory is kept and the product
// model is absent. `max_steps` caps how many components execute.
inline RunResult run_process(const Scenario& sc, size_t max_steps = SIZE_MAX) {
    RunResult result;
    Lcg rng(sc.seed);
    WeightState weights;
    SignSystem current = sc.initial;

    size_t n = sc.components.size() < max_steps ? sc.components.size() : max_steps;
    for (size_t i = 0; i < n; ++i) {
        try {
            auto [step, next] =
                run_component(current, sc.components[i], rng, weights, sc.gamma_up, sc.gamma_down, i);
            result.trajectory.steps.push_back(std::move(step));
            current = std::move(next);
        } catch (const Error& e) {
            if (e.code != "InfeasibleComponent") throw;
            result.error = e.what();
            return result;
        }
    }
    result.completed = true;
    result.omega = ProductModel{current, closure(current)};
    return result;
}

struct ReplayResult {
    SignSystem final_system;
    Trajectory trajectory; // every step collapsed to probability one
};

// Re-executes a recorded trajectory without randomness: each recorded label
// must still be feasible, and is taken with probability one. Costs and
// epsilons are recomputed from scratch.
inline ReplayResult replay(const Trajectory& t, const Scenario& sc) {
    if (t.steps.size() > sc.components.size())
        fail("TrajectoryMismatch", "trajectory has " + std::to_string(t.steps.size()) +
                                       " steps but the scenario only has " +
                                       std::to_string(sc.components.size()) + " components");
    ReplayResult out;
    SignSystem current = sc.initial;
    for (size_t i = 0; i < t.steps.size(); ++i) {
        const SemioticComponent& comp = sc.components[i];
        SignSystem rewritten = apply_f(current, comp.f);

        const CandidateTransition* pick = nullptr;
        for (const CandidateTransition& c : comp.candidates)
            if (c.label == t.steps[i].chosen) pick = &c;
        if (!pick)
            fail("TrajectoryMismatch", "step " + std::to_string(i) + " chose label " +
                                           t.steps[i].chosen + " which the component lacks");
        if (!verify(pick->morphism, rewritten, pick->target).empty())
            fail("TrajectoryMismatch", "recorded choice " + pick->label +
                                           " no longer verifies at step " + std::to_string(i));

        TrajectoryStep step;
        step.index = i;
        step.feasible = {pick->label};
        step.probabilities = {Rational(1)};
        step.chosen = pick->label;
        step.cost_f = static_cast<std::uint64_t>(rewritten.axioms.size() + rewritten.rels.size());
        step.cost_mu = static_cast<std::uint64_t>(pick->morphism.mapping_count());
        step.epsilon_after = epsilon(pick->target);
        out.trajectory.steps.push_back(std::move(step));
        current = pick->target;
    }
    out.final_system = std::move(current);
    return out;
}

} // namespace semiosa
