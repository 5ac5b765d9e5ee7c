// Command-line front end for the semiosa engine.
//
// Subcommands mirror the engine's five entry points:
//   check     load a workspace file and validate everything in it
//   morph     verify a morphism and check requested preservation properties
//   simulate  run a stochastic scenario and report its trajectory
//   blend     run the analogical blending pipeline for a declared blend
//   emerge    test an observed atom for emergence and classify it
//
// Exit codes: 0 on success, 1 when the engine rejects something it could
// evaluate (failed verification, failed property, infeasible step, blend
// not accepted, analysis errors), 2 for unusable input (usage, syntax,
// unresolved names, unreadable files).

#include <semiosa/semiosa.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using semiosa::Json;

struct Output {
    std::string json_path; // empty: no JSON; "-": stdout
    bool quiet = false;

    void say(const std::string& line) const {
        if (!quiet) std::cout << line << "\n";
    }
    void emit(const Json& j) const {
        if (json_path.empty()) return;
        if (json_path == "-") {
            std::cout << j.dump(2) << "\n";
            return;
        }
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << json_path << "\n";
            std::exit(2);
        }
        out << j.dump(2) << "\n";
    }
};

void add_common(CLI::App* cmd, Output& out) {
    cmd->add_option("--json", out.json_path, "write a JSON report to this path ('-' for stdout)");
    cmd->add_flag("--quiet", out.quiet, "suppress the text report");
}

int diagnostics_exit(const std::vector<semiosa::Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.kind != semiosa::DiagKind::validate) return 2;
    return 1;
}

// Loads a workspace or exits: unusable input ends the process with the
// diagnostics printed to stderr and mirrored into the JSON report.
semiosa::dsl::Workspace load_or_exit(const std::string& path, const std::string& command,
                                     const Output& out) {
    semiosa::dsl::LoadResult loaded;
    try {
        loaded = semiosa::dsl::load_file(path);
    } catch (const semiosa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        Json j = semiosa::envelope(command);
        j["ok"] = false;
        j["error"] = e.what();
        out.emit(j);
        std::exit(2);
    }
    if (!loaded.ok()) {
        for (const auto& d : loaded.diagnostics) std::cerr << d.format() << "\n";
        Json j = semiosa::envelope(command);
        j["ok"] = false;
        j["diagnostics"] = semiosa::to_json(loaded.diagnostics);
        out.emit(j);
        std::exit(diagnostics_exit(loaded.diagnostics));
    }
    return std::move(loaded.ws);
}

int engine_error_exit(const semiosa::Error& e, const std::string& command, const Output& out) {
    std::cerr << "error";
    if (!e.stage.empty()) std::cerr << " at stage " << e.stage;
    std::cerr << " [" << e.code << "]: " << e.what() << "\n";
    Json j = semiosa::envelope(command);
    j["ok"] = false;
    j["error_code"] = e.code;
    if (!e.stage.empty()) j["stage"] = e.stage;
    j["error"] = e.what();
    out.emit(j);
    return e.code == "UnresolvedReference" || e.code == "IoError" || e.code == "BadProbe" ? 2 : 1;
}

const semiosa::SignSystem& system_or_exit(const semiosa::dsl::Workspace& ws,
                                          const std::string& name, const std::string& command,
                                          const Output& out) {
    auto it = ws.systems.find(name);
    if (it != ws.systems.end()) return it->second;
    std::cerr << "error: unknown system " << name << "\n";
    Json j = semiosa::envelope(command);
    j["ok"] = false;
    j["error"] = "unknown system " + name;
    out.emit(j);
    std::exit(2);
}

const semiosa::SemioticMorphism& morphism_or_exit(const semiosa::dsl::Workspace& ws,
                                                  const std::string& name,
                                                  const std::string& command, const Output& out) {
    auto it = ws.morphisms.find(name);
    if (it != ws.morphisms.end()) return it->second;
    std::cerr << "error: unknown morphism " << name << "\n";
    Json j = semiosa::envelope(command);
    j["ok"] = false;
    j["error"] = "unknown morphism " + name;
    out.emit(j);
    std::exit(2);
}

int run_check(const std::string& path, bool print_canonical, const Output& out) {
    semiosa::dsl::LoadResult loaded;
    try {
        loaded = semiosa::dsl::load_file(path);
    } catch (const semiosa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        Json j = semiosa::envelope("check");
        j["ok"] = false;
        j["error"] = e.what();
        out.emit(j);
        return 2;
    }

    Json j = semiosa::envelope("check");
    j["ok"] = loaded.ok();
    j["diagnostics"] = semiosa::to_json(loaded.diagnostics);

    for (const auto& d : loaded.diagnostics) std::cerr << d.format() << "\n";
    if (!loaded.ok()) {
        out.emit(j);
        return diagnostics_exit(loaded.diagnostics);
    }

    const auto& ws = loaded.ws;
    out.say(path + ": " + std::to_string(ws.systems.size()) + " systems, " +
            std::to_string(ws.morphisms.size()) + " morphisms, " +
            std::to_string(ws.scenarios.size()) + " scenarios, " +
            std::to_string(ws.blends.size()) + " blends");
    Json systems = Json::array();
    for (const auto& [name, sys] : ws.systems) {
        Json s = semiosa::system_summary(sys);
        out.say("system " + name + ": " + std::to_string(sys.sorts.size()) + " sorts, " +
                std::to_string(sys.data_sorts.size()) + " data, " +
                std::to_string(sys.ctors.size()) + " ctors, " +
                std::to_string(sys.rels.size()) + " rels, " +
                std::to_string(sys.axioms.size()) + " axioms, closure " +
                std::to_string(s["closure_atoms"].get<std::uint64_t>()) + ", epsilon " +
                std::to_string(s["epsilon"].get<std::uint64_t>()));
        systems.push_back(std::move(s));
    }
    j["systems"] = std::move(systems);
    if (print_canonical && !out.quiet) std::cout << semiosa::dsl::print_workspace(ws);
    out.emit(j);
    out.say("ok");
    return 0;
}

int run_morph(const std::string& path, const std::string& name, std::vector<std::string> props,
              bool all_props, const Output& out) {
    auto ws = load_or_exit(path, "morph", out);
    const auto& m = morphism_or_exit(ws, name, "morph", out);
    const auto& src = system_or_exit(ws, m.from, "morph", out);
    const auto& dst = system_or_exit(ws, m.to, "morph", out);

    std::set<semiosa::Property> requested;
    if (all_props)
        requested = {semiosa::Property::level, semiosa::Property::priority,
                     semiosa::Property::axiom, semiosa::Property::natural};
    for (const auto& p : props) {
        if (p == "level") requested.insert(semiosa::Property::level);
        else if (p == "priority") requested.insert(semiosa::Property::priority);
        else if (p == "axiom") requested.insert(semiosa::Property::axiom);
        else if (p == "natural") requested.insert(semiosa::Property::natural);
        else {
            std::cerr << "error: unknown property " << p << "\n";
            return 2;
        }
    }

    semiosa::PropertyReport rep;
    try {
        rep = semiosa::check_properties(m, src, dst, requested);
    } catch (const semiosa::Error& e) {
        return engine_error_exit(e, "morph", out);
    }

    Json j = semiosa::envelope("morph");
    j["morphism"] = m.name;
    j["from"] = m.from;
    j["to"] = m.to;
    j["report"] = semiosa::to_json(rep);

    out.say("morphism " + m.name + " : " + m.from + " -> " + m.to);
    bool ok = rep.well_formed;
    if (!rep.well_formed) {
        out.say("well-formed: no");
        for (const auto& d : rep.issues) out.say("  " + d.format());
    } else {
        out.say("well-formed: yes");
        auto describe = [&](const char* label, const semiosa::PropertyCheck& c) {
            if (!c.requested) return;
            if (c.holds) {
                out.say(std::string(label) + ": holds");
            } else {
                ok = false;
                std::string line = std::string(label) + ": fails";
                if (!c.witnesses.empty()) line += " (" + c.witnesses.front() + ")";
                out.say(line);
            }
        };
        describe("level", rep.level);
        describe("priority", rep.priority);
        describe("axiom", rep.axiom);
        describe("natural", rep.natural);
        if (!rep.skipped_axioms.empty()) {
            std::string line = "skipped axioms:";
            for (const auto& a : rep.skipped_axioms) line += " " + a;
            out.say(line);
        }
        if (rep.natural.requested)
            out.say("epsilon: " + std::to_string(rep.epsilon_source) + " -> " +
                    std::to_string(rep.epsilon_target));
    }
    j["ok"] = ok;
    out.emit(j);
    return ok ? 0 : 1;
}

int run_simulate(const std::string& path, const std::string& name, std::uint64_t max_steps,
                 bool do_replay, const Output& out) {
    auto ws = load_or_exit(path, "simulate", out);
    auto it = ws.scenarios.find(name);
    if (it == ws.scenarios.end()) {
        std::cerr << "error: unknown scenario " << name << "\n";
        return 2;
    }

    semiosa::RunResult result;
    semiosa::Scenario sc;
    try {
        sc = semiosa::dsl::resolve_scenario(ws, it->second);
        result = semiosa::run_process(sc, max_steps);
    } catch (const semiosa::Error& e) {
        return engine_error_exit(e, "simulate", out);
    }

    Json j = semiosa::envelope("simulate");
    j["scenario"] = sc.name;
    j["seed"] = sc.seed;
    j["run"] = semiosa::to_json(result);

    out.say("scenario " + sc.name + " seed " + std::to_string(sc.seed));
    for (const auto& step : result.trajectory.steps) {
        std::string line = "step " + std::to_string(step.index) + ": chose " + step.chosen + " of";
        for (size_t i = 0; i < step.feasible.size(); ++i)
            line += " " + step.feasible[i] + " " + semiosa::to_fraction(step.probabilities[i]);
        line += "; cost_f " + std::to_string(step.cost_f) + ", cost_mu " +
                std::to_string(step.cost_mu) + ", epsilon " + std::to_string(step.epsilon_after);
        out.say(line);
        for (const auto& w : step.warnings) out.say("  warning: " + w);
    }
    out.say("completed: " + std::string(result.completed ? "yes" : "no") +
            (result.error.empty() ? "" : " (" + result.error + ")"));
    out.say("total cost " + std::to_string(result.trajectory.total_cost()) + " = f " +
            std::to_string(result.trajectory.total_cost_f()) + " + mu " +
            std::to_string(result.trajectory.total_cost_mu()));
    if (result.omega) out.say("final system " + result.omega->phi.name);

    if (do_replay && result.completed) {
        try {
            auto rr = semiosa::replay(result.trajectory, sc);
            bool same = semiosa::same_system(rr.final_system, result.omega->phi);
            j["replay_consistent"] = same;
            out.say("replay: " + std::string(same ? "consistent" : "INCONSISTENT"));
            if (!same) {
                out.emit(j);
                return 1;
            }
        } catch (const semiosa::Error& e) {
            return engine_error_exit(e, "simulate", out);
        }
    }

    out.emit(j);
    return result.completed ? 0 : 1;
}

int run_blend(const std::string& path, const std::string& name, const Output& out) {
    auto ws = load_or_exit(path, "blend", out);
    auto it = ws.blends.find(name);
    if (it == ws.blends.end()) {
        std::cerr << "error: unknown blend " << name << "\n";
        return 2;
    }

    semiosa::BlendReport report;
    try {
        auto input = semiosa::dsl::resolve_blend(ws, it->second);
        report = semiosa::run_pipeline(input);
    } catch (const semiosa::Error& e) {
        return engine_error_exit(e, "blend", out);
    }

    Json j = semiosa::envelope("blend");
    j["report"] = semiosa::to_json(report);
    j["ok"] = report.accepted;

    out.say("blend " + report.name);
    out.say("compatibility: " + std::string(semiosa::to_string(report.compatibility)));
    out.say("correspondence: " + std::to_string(report.correspondence.sort_pairs.size()) +
            " sorts, " + std::to_string(report.correspondence.ctor_pairs.size()) + " ctors, " +
            std::to_string(report.correspondence.rel_pairs.size()) + " rels");
    if (!report.stubs.empty()) {
        std::string line = "stubs:";
        for (const auto& s : report.stubs) line += " " + s;
        out.say(line);
    }
    out.say("blend system: " + std::to_string(report.blend.sorts.size()) + " sorts, " +
            std::to_string(report.blend.ctors.size()) + " ctors, " +
            std::to_string(report.blend.rels.size()) + " rels, " +
            std::to_string(report.blend.axioms.size()) + " axioms");
    out.say("reinterpretation:");
    for (const auto& e : report.reinterpretation.entries)
        out.say("  " + e.axiom + " rank " + std::to_string(e.rank) + ": " +
                semiosa::to_string(e.verdict));
    out.say("accepted: " + std::string(report.accepted ? "yes" : "no"));
    out.emit(j);
    return report.accepted ? 0 : 1;
}

int run_emerge(const std::string& path, const std::string& system, const std::string& against,
               const std::string& observer, const std::string& probe_text, bool classify,
               const std::vector<std::string>& alternative_names, bool deducible,
               const std::string& creative_pi, const std::string& obs_from_name,
               const std::string& obs_to_name, const Output& out) {
    auto ws = load_or_exit(path, "emerge", out);
    const auto& xi = system_or_exit(ws, system, "emerge", out);
    const auto& xi2 = system_or_exit(ws, against, "emerge", out);
    const auto& m = morphism_or_exit(ws, observer, "emerge", out);
    const auto& codomain = system_or_exit(ws, m.to, "emerge", out);
    semiosa::ObserverSpec obs{m, codomain};

    Json j = semiosa::envelope("emerge");
    j["probe"] = probe_text;
    bool ok = true;

    try {
        semiosa::Atom probe = semiosa::dsl::parse_atom_text(probe_text);
        auto check = semiosa::is_emergent(probe, xi, xi2, obs);
        j["emergence"] = semiosa::to_json(check);
        out.say("probe " + semiosa::to_string(probe));
        out.say("emergent: " + std::string(check.emergent ? "yes" : "no"));

        if (classify) {
            std::vector<semiosa::SignSystem> alternatives;
            for (const auto& n : alternative_names)
                alternatives.push_back(system_or_exit(ws, n, "emerge", out));
            auto source = semiosa::classify_source(probe, xi, xi2, obs, alternatives);
            j["source"] = semiosa::to_json(source);
            std::string line = "source: " + std::string(semiosa::to_string(source.kind));
            if (!source.witness.empty()) line += " (" + source.witness + ")";
            out.say(line);
        }
        if (deducible) {
            auto d = semiosa::classify_deducibility(xi, xi2, obs);
            j["deducibility"] = semiosa::to_json(d);
            out.say("deducible: " + std::string(d.deducible ? "yes" : "no"));
        }
        if (!creative_pi.empty()) {
            const auto& pi = morphism_or_exit(ws, creative_pi, "emerge", out);
            const auto& from = system_or_exit(ws, pi.from, "emerge", out);
            const auto& to = system_or_exit(ws, pi.to, "emerge", out);
            const auto& mf = morphism_or_exit(ws, obs_from_name, "emerge", out);
            const auto& mt = morphism_or_exit(ws, obs_to_name, "emerge", out);
            semiosa::ObserverSpec ef{mf, system_or_exit(ws, mf.to, "emerge", out)};
            semiosa::ObserverSpec et{mt, system_or_exit(ws, mt.to, "emerge", out)};
            auto verdict = semiosa::check_creative(pi, from, to, semiosa::observe(ef, from),
                                                   semiosa::observe(et, to));
            j["creativity"] = semiosa::to_json(verdict);
            out.say("creative: natural " + std::string(verdict.natural ? "yes" : "no") +
                    ", unique " + std::string(verdict.unique ? "yes" : "no") + " -> " +
                    (verdict.creative ? "creative" : "not creative"));
        }
    } catch (const semiosa::Error& e) {
        return engine_error_exit(e, "emerge", out);
    }

    j["ok"] = ok;
    out.emit(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic engine for sign systems, semiotic morphisms, and creative dynamics"};
    app.require_subcommand(1);

    std::string file, morphism_name, scenario_name, blend_name;
    std::string system_name, against_name, observer_name, probe_text;
    std::string creative_pi, obs_from_name, obs_to_name;
    std::vector<std::string> props, alternatives;
    bool all_props = false, print_canonical = false, do_replay = false;
    bool classify = false, deducible = false;
    std::uint64_t max_steps = UINT64_MAX;

    Output check_out, morph_out, sim_out, blend_out, emerge_out;

    auto* check = app.add_subcommand("check", "validate a workspace file");
    check->add_option("file", file, "workspace file")->required();
    check->add_flag("--print", print_canonical, "print the canonical form");
    add_common(check, check_out);

    auto* morph = app.add_subcommand("morph", "verify a morphism and its properties");
    morph->add_option("file", file, "workspace file")->required();
    morph->add_option("--morphism", morphism_name, "morphism to verify")->required();
    morph->add_option("--properties", props, "properties to check")
        ->delimiter(',')
        ->check(CLI::IsMember({"level", "priority", "axiom", "natural"}));
    morph->add_flag("--all", all_props, "check all four properties");
    add_common(morph, morph_out);

    auto* simulate = app.add_subcommand("simulate", "run a creative-process scenario");
    simulate->add_option("file", file, "workspace file")->required();
    simulate->add_option("--scenario", scenario_name, "scenario to run")->required();
    simulate->add_option("--max-steps", max_steps, "stop after this many components");
    simulate->add_flag("--replay", do_replay, "replay the recorded trajectory afterwards");
    add_common(simulate, sim_out);

    auto* blend = app.add_subcommand("blend", "run the analogical blending pipeline");
    blend->add_option("file", file, "workspace file")->required();
    blend->add_option("--blend", blend_name, "blend to run")->required();
    add_common(blend, blend_out);

    auto* emerge = app.add_subcommand("emerge", "test an observed atom for emergence");
    emerge->add_option("file", file, "workspace file")->required();
    emerge->add_option("--system", system_name, "the whole system")->required();
    emerge->add_option("--against", against_name, "the system compared against")->required();
    emerge->add_option("--observer", observer_name, "observer morphism")->required();
    emerge->add_option("--probe", probe_text, "atom to test, e.g. 'fits(pair(leaf, leaf))'")
        ->required();
    emerge->add_flag("--classify", classify, "attribute the emergence to a source");
    emerge->add_option("--alternative", alternatives,
                       "candidate process systems for classification (repeatable)");
    emerge->add_flag("--deducible", deducible, "check morphism-level deducibility");
    emerge->add_option("--creative", creative_pi, "process morphism to test for creativity");
    emerge->add_option("--obs-from", obs_from_name, "observer for the process source");
    emerge->add_option("--obs-to", obs_to_name, "observer for the process result");
    add_common(emerge, emerge_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand(check)) return run_check(file, print_canonical, check_out);
    if (app.got_subcommand(morph))
        return run_morph(file, morphism_name, props, all_props, morph_out);
    if (app.got_subcommand(simulate))
        return run_simulate(file, scenario_name, max_steps, do_replay, sim_out);
    if (app.got_subcommand(blend)) return run_blend(file, blend_name, blend_out);
    if (app.got_subcommand(emerge))
        return run_emerge(file, system_name, against_name, observer_name, probe_text, classify,
                          alternatives, deducible, creative_pi, obs_from_name, obs_to_name,
                          emerge_out);
    return 2;
}
