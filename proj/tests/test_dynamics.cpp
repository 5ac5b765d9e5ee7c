#include <catch2/catch_amalgamated.hpp>

#include <semiosa/semiosa.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <functional>
#include <string>
#include <vector>

using namespace semiosa;
using namespace semiosa::testing;

namespace {

std::string error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code;
    }
    return "";
}

FStep box_step() {
    FStep f;
    f.divergence.sorts.emplace("Box", SortDecl{"Box", 1});
    f.divergence.ctors.emplace("crate", CtorDecl{"crate", {}, "Box", 1});
    f.convergence.rels.emplace("stores", RelDecl{"stores", {"Box", "Part"}, false});
    f.convergence.axioms.emplace(
        "s1", Axiom::fact("s1", 1, Atom{"stores", {Term::app("crate"), Term::app("leaf")}}));
    return f;
}

} // namespace

TEST_CASE("the generator reproduces the pinned sequence") {
    Lcg g(42);
    CHECK(g.next() == frozen::seed42_u[0]);
    CHECK(g.state == frozen::seed42_state1);
    for (int i = 1; i < 5; ++i) CHECK(g.next() == frozen::seed42_u[i]);

    Lcg h(7);
    CHECK(h.next() == frozen::seed7_u0);
}

TEST_CASE("doubles convert to exact rationals") {
    CHECK(rational_from_double(0.75) == Rational(3, 4));
    CHECK(rational_from_double(0.1) != Rational(1, 10));
    Lcg g(42);
    Rational u = rational_from_double(g.next());
    CHECK(u < Rational(2, 3));
    CHECK(u > Rational(1, 2));
}

TEST_CASE("rewrites grow the system and reject malformed deltas") {
    SignSystem toy = make_toy();

    SignSystem grown = apply_f(toy, box_step());
    CHECK(grown.sorts.count("Box") == 1);
    CHECK(grown.axioms.count("s1") == 1);
    CHECK(validate_system(grown).empty());
    CHECK(closure(grown) == oracle_closure(grown));

    SECTION("divergence needs a constructor and a sort") {
        FStep f = box_step();
        f.divergence.ctors.clear();
        CHECK(error_code([&] { apply_f(toy, f); }) == "EmptyDelta");
        f = box_step();
        f.divergence.sorts.clear();
        CHECK(error_code([&] { apply_f(toy, f); }) == "EmptyDelta");
    }
    SECTION("convergence needs a relation or an axiom") {
        FStep f = box_step();
        f.convergence.rels.clear();
        f.convergence.axioms.clear();
        CHECK(error_code([&] { apply_f(toy, f); }) == "EmptyDelta");
    }
    SECTION("data sorts can stand in for the new sort") {
        FStep f = box_step();
        f.divergence.sorts.clear();
        f.divergence.data_sorts.emplace("BoxId", DataSortDecl{"BoxId"});
        f.divergence.ctors.clear();
        f.divergence.ctors.emplace("crate", CtorDecl{"crate", {}, "Whole", 1});
        f.convergence.rels.clear();
        f.convergence.axioms.clear();
        f.convergence.rels.emplace("stores", RelDecl{"stores", {"Whole", "Part"}, false});
        CHECK_NOTHROW(apply_f(toy, f));
    }
    SECTION("redeclaring is a collision") {
        FStep f = box_step();
        f.divergence.sorts.emplace("Part", SortDecl{"Part", 0});
        CHECK(error_code([&] { apply_f(toy, f); }) == "NameCollision");
        f = box_step();
        f.convergence.axioms.emplace("f1", toy.axioms.at("f1"));
        CHECK(error_code([&] { apply_f(toy, f); }) == "NameCollision");
    }
    SECTION("renaming an existing rank is tampering") {
        FStep f = box_step();
        Axiom moved = toy.axioms.at("f1");
        moved.rank = 9;
        f.convergence.axioms.emplace("f1", moved);
        CHECK(error_code([&] { apply_f(toy, f); }) == "RankTamper");
    }
    SECTION("a delta breaking the result is rejected as a whole") {
        FStep f = box_step();
        f.convergence.axioms.at("s1").head.args[0] = Term::app("leaf");
        CHECK(error_code([&] { apply_f(toy, f); }) == "InvalidResult");
    }
}

TEST_CASE("a component filters, samples and reinforces") {
    dsl::Workspace ws = load_fixture("toy.ss");
    SignSystem toy = ws.systems.at("Toy");
    SignSystem grown = ws.systems.at("ToyGrown");

    SemioticComponent comp;
    comp.f = box_step();
    CandidateTransition a{"first", Rational(2), grown, ws.morphisms.at("Grow")};
    CandidateTransition b{"second", Rational(1), grown, ws.morphisms.at("Grow")};
    comp.candidates = {a, b};

    Lcg rng(42);
    WeightState weights;
    auto [step, next] = run_component(toy, comp, rng, weights, Rational(1, 5), Rational(1, 10), 0);

    CHECK(step.feasible == std::vector<std::string>{"first", "second"});
    CHECK(step.probabilities == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    CHECK(step.chosen == "first");
    CHECK(weights.at("first") == *parse_rational(frozen::reinforced_chosen));
    CHECK(weights.at("second") == *parse_rational(frozen::reinforced_rejected));
    CHECK(same_system(next, grown));
}

TEST_CASE("infeasible candidates are excluded with a warning") {
    dsl::Workspace ws = load_fixture("toy.ss");
    SignSystem toy = ws.systems.at("Toy");

    SemioticMorphism broken = ws.morphisms.at("Grow");
    broken.sort_map["Box"] = "Nowhere";

    SemioticComponent comp;
    comp.f = box_step();
    comp.candidates = {{"good", Rational(1), ws.systems.at("ToyGrown"), ws.morphisms.at("Grow")},
                       {"bad", Rational(1), ws.systems.at("ToyGrown"), broken}};

    Lcg rng(7);
    WeightState weights;
    auto [step, next] = run_component(toy, comp, rng, weights, Rational(1, 5), Rational(1, 10), 0);
    CHECK(step.feasible == std::vector<std::string>{"good"});
    CHECK(step.probabilities == std::vector<Rational>{Rational(1)});
    REQUIRE_FALSE(step.warnings.empty());
    CHECK(step.warnings.front().find("bad") != std::string::npos);
    CHECK(weights.at("bad") == Rational(1)); // initialized but untouched

    comp.candidates = {comp.candidates[1]};
    Lcg rng2(7);
    WeightState w2;
    CHECK(error_code([&] { run_component(toy, comp, rng2, w2, Rational(1, 5), Rational(1, 10), 0); }) ==
          "InfeasibleComponent");
}

TEST_CASE("the toy scenario runs to its declared target") {
    dsl::Workspace ws = load_fixture("toy.ss");
    Scenario sc = dsl::resolve_scenario(ws, ws.scenarios.at("ToyGrow"));
    RunResult run = run_process(sc);

    REQUIRE(run.completed);
    REQUIRE(run.trajectory.steps.size() == 1);
    const TrajectoryStep& s = run.trajectory.steps.front();
    CHECK(s.probabilities == std::vector<Rational>{Rational(1)});
    CHECK(s.chosen == "grow");
    CHECK(s.cost_f == 7);
    CHECK(s.cost_mu == 6);
    CHECK(s.epsilon_after == 1);
    CHECK(s.warnings.empty());
    REQUIRE(run.omega);
    CHECK(run.omega->phi.name == "ToyGrown");
    CHECK(run.omega->lambda == oracle_closure(ws.systems.at("ToyGrown")));
}

TEST_CASE("the telephone scenario follows the pinned trajectory") {
    dsl::Workspace ws = load_fixture("ear_telephone.ss");
    Scenario sc = dsl::resolve_scenario(ws, ws.scenarios.at("TelephoneProcess"));
    RunResult run = run_process(sc);

    REQUIRE(run.completed);
    REQUIRE(run.trajectory.steps.size() == 3);

    const auto& steps = run.trajectory.steps;
    CHECK(steps[0].chosen == "electric");
    CHECK(steps[0].probabilities == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    CHECK(steps[1].chosen == "refine");
    CHECK(steps[1].probabilities == std::vector<Rational>{Rational(3, 4), Rational(1, 4)});
    CHECK(steps[2].chosen == "final");
    CHECK(steps[2].probabilities == std::vector<Rational>{Rational(1)});

    CHECK(steps[0].cost_f == 4);
    CHECK(steps[1].cost_f == 8);
    CHECK(steps[2].cost_f == 12);
    CHECK(steps[0].cost_mu == 6);
    CHECK(steps[1].cost_mu == 9);
    CHECK(steps[2].cost_mu == 12);
    for (const auto& s : steps) {
        CHECK(s.epsilon_after == 2);
        CHECK(s.warnings.size() == 1); // the translation cost warning
    }

    CHECK(run.trajectory.total_cost_f() == 24);
    CHECK(run.trajectory.total_cost_mu() == 27);
    CHECK(run.trajectory.total_cost() == 51);
    REQUIRE(run.omega);
    CHECK(run.omega->phi.name == "Telephone");

    RunResult again = run_process(sc);
    CHECK(to_json(run).dump() == to_json(again).dump());

    RunResult capped = run_process(sc, 1);
    CHECK(capped.completed);
    CHECK(capped.trajectory.steps.size() == 1);
    REQUIRE(capped.omega);
    CHECK(capped.omega->phi.name == "ElectricPath");
}

TEST_CASE("replay is the recorded path with certainty") {
    dsl::Workspace ws = load_fixture("ear_telephone.ss");
    Scenario sc = dsl::resolve_scenario(ws, ws.scenarios.at("TelephoneProcess"));
    RunResult run = run_process(sc);
    REQUIRE(run.completed);

    ReplayResult rep = replay(run.trajectory, sc);
    CHECK(same_system(rep.final_system, run.omega->phi));
    REQUIRE(rep.trajectory.steps.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(rep.trajectory.steps[i].probabilities == std::vector<Rational>{Rational(1)});
        CHECK(rep.trajectory.steps[i].feasible ==
              std::vector<std::string>{run.trajectory.steps[i].chosen});
        CHECK(rep.trajectory.steps[i].cost_f == run.trajectory.steps[i].cost_f);
        CHECK(rep.trajectory.steps[i].cost_mu == run.trajectory.steps[i].cost_mu);
    }

    Trajectory tampered = run.trajectory;
    tampered.steps[1].chosen = "nonsense";
    CHECK(error_code([&] { replay(tampered, sc); }) == "TrajectoryMismatch");

    Trajectory overlong = run.trajectory;
    overlong.steps.push_back(run.trajectory.steps.back());
    CHECK(error_code([&] { replay(overlong, sc); }) == "TrajectoryMismatch");
}

TEST_CASE("a run with no feasible continuation stops with a partial trajectory") {
    dsl::Workspace ws = load_fixture("toy.ss");
    Scenario sc = dsl::resolve_scenario(ws, ws.scenarios.at("ToyGrow"));
    sc.components[0].candidates[0].morphism.sort_map["Box"] = "Nowhere";

    RunResult run = run_process(sc);
    CHECK_FALSE(run.completed);
    CHECK_FALSE(run.omega);
    CHECK(run.trajectory.steps.empty());
    CHECK(run.error.find("no candidate morphism verifies") != std::string::npos);
}
