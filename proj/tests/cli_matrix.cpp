// End-to-end checks of the command-line tool: each subcommand is run
// against the fixture corpus and judged on exit code, text output, and
// the JSON report. The binary path comes from the build system.
#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using Json = nlohmann::ordered_json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(SEMIOSA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(SEMIOSA_FIXTURES_DIR) + "/" + name;
}

Json json_of(const std::string& args) {
    CliResult r = run_cli(args + " --quiet --json -");
    INFO("command: " << args);
    INFO("output: " << r.output);
    return Json::parse(r.output);
}

Json read_golden(const std::string& name) {
    std::ifstream in(std::string(SEMIOSA_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    return Json::parse(in);
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    return path.string();
}

} // namespace

TEST_CASE("check reports the workspace inventory") {
    CliResult r = run_cli("check " + fixture("toy.ss"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("9 systems, 7 morphisms, 1 scenarios, 0 blends") != std::string::npos);
    CHECK(r.output.find("ok\n") != std::string::npos);

    Json j = json_of("check " + fixture("toy.ss"));
    CHECK(j["schema"] == "semiosa/1");
    CHECK(j["command"] == "check");
    CHECK(j["ok"] == true);
    REQUIRE(j["systems"].size() == 9);
    bool saw_toy = false;
    for (const auto& s : j["systems"]) {
        if (s["name"] != "Toy") continue;
        saw_toy = true;
        CHECK(s["closure_atoms"] == 2);
        CHECK(s["epsilon"] == 1);
    }
    CHECK(saw_toy);

    SECTION("--print appends the canonical form") {
        CliResult printed = run_cli("check --print " + fixture("toy.ss"));
        CHECK(printed.exit_code == 0);
        CHECK(printed.output.find("system Toy {") != std::string::npos);
        CHECK(printed.output.find("rule r1 rank 1 : touches(X, Y) => fits(pair(X, Y));") !=
              std::string::npos);
    }
    SECTION("unreadable and unparsable files exit 2") {
        CHECK(run_cli("check /no/such/file.ss").exit_code == 2);
        std::string bad = write_temp("semiosa_cli_bad.ss", "system Broken {\n  sort X level;\n}\n");
        CHECK(run_cli("check " + bad).exit_code == 2);
    }
    SECTION("a workspace that loads but fails validation exits 1") {
        std::string dup = write_temp("semiosa_cli_dup.ss",
                                     "system Dup {\n  sort A level 0;\n  sort A level 1;\n}\n");
        CliResult v = run_cli("check " + dup + " --quiet --json -");
        CHECK(v.exit_code == 1);
        Json report = Json::parse(v.output);
        CHECK(report["ok"] == false);
        CHECK(report["diagnostics"][0]["code"] == "DuplicateName");
    }
}

TEST_CASE("morph verifies a morphism and its properties") {
    CliResult r = run_cli("morph " + fixture("toy.ss") + " --morphism Hush --all");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("well-formed: yes") != std::string::npos);
    CHECK(r.output.find("natural: holds") != std::string::npos);
    CHECK(r.output.find("epsilon: 1 -> 0") != std::string::npos);

    Json j = json_of("morph " + fixture("toy.ss") + " --morphism Hush --all");
    CHECK(j["ok"] == true);
    CHECK(j["report"]["well_formed"] == true);
    CHECK(j["report"]["properties"]["level"]["holds"] == true);
    CHECK(j["report"]["properties"]["natural"]["holds"] == true);
    CHECK(j["report"]["epsilon_source"] == 1);
    CHECK(j["report"]["epsilon_target"] == 0);

    SECTION("a failed property exits 1 and names itself") {
        CliResult bad = run_cli("morph " + fixture("toy.ss") + " --morphism Rename --all");
        CHECK(bad.exit_code == 1);
        CHECK(bad.output.find("natural: fails") != std::string::npos);
        CHECK(bad.output.find("axiom: holds") != std::string::npos);
    }
    SECTION("verification alone passes where a property fails") {
        CHECK(run_cli("morph " + fixture("toy.ss") + " --morphism Rename").exit_code == 0);
        CHECK(run_cli("morph " + fixture("toy.ss") + " --morphism Rename --properties natural")
                  .exit_code == 1);
    }
    SECTION("unknown names exit 2") {
        CHECK(run_cli("morph " + fixture("toy.ss") + " --morphism Ghost").exit_code == 2);
        CHECK(run_cli("morph " + fixture("toy.ss") + " --morphism Hush --properties magic")
                  .exit_code == 2);
    }
}

TEST_CASE("simulate runs the telephone scenario deterministically") {
    std::string base = "simulate " + fixture("ear_telephone.ss") + " --scenario TelephoneProcess";

    CliResult r = run_cli(base);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("step 0: chose electric of electric 2/3 acoustic 1/3; "
                        "cost_f 4, cost_mu 6, epsilon 2") != std::string::npos);
    CHECK(r.output.find("step 1: chose refine") != std::string::npos);
    CHECK(r.output.find("step 2: chose final") != std::string::npos);
    CHECK(r.output.find("completed: yes") != std::string::npos);
    CHECK(r.output.find("total cost 51 = f 24 + mu 27") != std::string::npos);
    CHECK(r.output.find("final system Telephone") != std::string::npos);

    Json j = json_of(base + " --replay");
    CHECK_FALSE(j.contains("ok"));
    CHECK(j["run"]["completed"] == true);
    REQUIRE(j["run"]["trajectory"]["steps"].size() == 3);
    CHECK(j["run"]["trajectory"]["steps"][0]["chosen"] == "electric");
    CHECK(j["run"]["trajectory"]["steps"][0]["probabilities"] == Json::array({"2/3", "1/3"}));
    CHECK(j["run"]["trajectory"]["steps"][1]["chosen"] == "refine");
    CHECK(j["run"]["trajectory"]["steps"][2]["chosen"] == "final");
    CHECK(j["run"]["trajectory"]["total_cost"] == 51);
    CHECK(j["run"]["omega"]["system"]["name"] == "Telephone");
    CHECK(j["replay_consistent"] == true);

    SECTION("--max-steps truncates the run but still completes") {
        Json capped = json_of(base + " --max-steps 1");
        CHECK(capped["run"]["completed"] == true);
        CHECK(capped["run"]["trajectory"]["steps"].size() == 1);
        CHECK(capped["run"]["omega"]["system"]["name"] == "ElectricPath");
    }
    SECTION("two invocations emit identical reports") {
        CliResult a = run_cli(base + " --quiet --json -");
        CliResult b = run_cli(base + " --quiet --json -");
        CHECK(a.output == b.output);
    }
    SECTION("unknown scenarios exit 2") {
        CHECK(run_cli("simulate " + fixture("ear_telephone.ss") + " --scenario Ghost").exit_code ==
              2);
    }
}

TEST_CASE("blend reproduces the golden reports") {
    std::string ear = "blend " + fixture("ear_telephone.ss") + " --blend EarTelephone";
    CliResult r = run_cli(ear);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("compatibility: Disjoint") != std::string::npos);
    CHECK(r.output.find("accepted: yes") != std::string::npos);

    Json j = json_of(ear);
    CHECK(j["ok"] == true);
    CHECK(j["report"]["name"] == "EarTelephone");
    CHECK(j["report"]["blend"]["name"] == "EarTelephone");
    CHECK(j["report"]["reinterpretation"]["entries"][0]["axiom"] == "req1");
    CHECK(j["report"]["reinterpretation"]["entries"][0]["verdict"] == "holds");
    CHECK(j == read_golden("ear_telephone_blend.json"));

    Json skin = json_of("blend " + fixture("heart_skin.ss") + " --blend SkinMeter");
    CHECK(skin["ok"] == true);
    CHECK(skin["report"]["accepted"] == true);
    CHECK(skin == read_golden("skin_meter_blend.json"));

    SECTION("a pipeline failure reports its stage and exits 1") {
        // The source declares the initial space's sort S at a different
        // level, so the spaces overlap without nesting: incompatible.
        std::string clash = write_temp("semiosa_cli_clash.ss",
                                       "system A {\n"
                                       "    sort S level 0;\n"
                                       "    ctor a : -> S prio 1;\n"
                                       "    rel r(S);\n"
                                       "    fact ax rank 1 : r(a);\n"
                                       "}\n"
                                       "system Atar {\n"
                                       "    sort S level 0;\n"
                                       "    sort T level 0;\n"
                                       "    ctor a : -> S prio 1;\n"
                                       "    ctor t : -> T prio 1;\n"
                                       "    rel r(S);\n"
                                       "    rel q(T);\n"
                                       "    fact ax rank 1 : r(a);\n"
                                       "}\n"
                                       "system B {\n"
                                       "    sort S level 1;\n"
                                       "    sort U level 0;\n"
                                       "    ctor b : -> U prio 1;\n"
                                       "    rel w(U);\n"
                                       "}\n"
                                       "morphism Mt : A -> Atar {\n"
                                       "    sort S -> S;\n"
                                       "    sort T -> T;\n"
                                       "    ctor a -> a;\n"
                                       "    ctor t -> t;\n"
                                       "    rel r -> r;\n"
                                       "    rel q -> q;\n"
                                       "}\n"
                                       "morphism Ms : A -> B {\n"
                                       "    sort S -> U;\n"
                                       "    sort T -> U;\n"
                                       "    ctor a -> b;\n"
                                       "    ctor t -> b;\n"
                                       "    rel r -> w;\n"
                                       "    rel q -> w;\n"
                                       "}\n"
                                       "blend Clash {\n"
                                       "    init A;\n"
                                       "    f0 {\n"
                                       "        diverge { sort T level 0; ctor t : -> T prio 1; }\n"
                                       "        converge { rel q(T); }\n"
                                       "    }\n"
                                       "    target Atar via Mt;\n"
                                       "    source B via Ms;\n"
                                       "    f1target { diverge { } converge { } }\n"
                                       "    f1source { diverge { } converge { } }\n"
                                       "    match auto;\n"
                                       "    f2 { diverge { } converge { } }\n"
                                       "    threshold 1;\n"
                                       "}\n");
        CliResult fail = run_cli("blend " + clash + " --blend Clash --quiet --json -");
        CHECK(fail.exit_code == 1);
        Json report = Json::parse(fail.output);
        CHECK(report["ok"] == false);
        CHECK(report["stage"] == "compatibility");
        CHECK(report["error_code"] == "Incompatible");
    }
    SECTION("unknown blends exit 2") {
        CHECK(run_cli("blend " + fixture("heart_skin.ss") + " --blend Ghost").exit_code == 2);
    }
}

TEST_CASE("emerge analyses a probe end to end") {
    std::string base = "emerge " + fixture("toy.ss") +
                       " --system Toy --against ToyPlain --observer IdToy"
                       " --probe \"fits(pair(leaf, leaf))\"";

    CliResult r = run_cli(base);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("probe fits(pair(leaf, leaf))") != std::string::npos);
    CHECK(r.output.find("emergent: yes") != std::string::npos);

    Json j = json_of(base + " --classify --alternative ToyGrown --deducible"
                            " --creative Hush --obs-from IdToy --obs-to IdQuiet");
    CHECK(j["ok"] == true);
    CHECK(j["emergence"]["emergent"] == true);
    CHECK(j["source"]["kind"] == "Process");
    CHECK(j["source"]["witness"] == "ToyGrown");
    // The two observed images share a full signature, so one maps into the
    // other even though the probe is emergent.
    CHECK(j["deducibility"]["deducible"] == true);
    CHECK(j["deducibility"]["witness"].is_object());
    CHECK(j["creativity"]["natural"] == true);
    CHECK(j["creativity"]["unique"] == true);
    CHECK(j["creativity"]["creative"] == true);

    SECTION("a non-emergent probe still exits 0") {
        CliResult tame = run_cli("emerge " + fixture("toy.ss") +
                                 " --system Toy --against ToyPlain --observer IdToy"
                                 " --probe \"touches(leaf, leaf)\"");
        CHECK(tame.exit_code == 0);
        CHECK(tame.output.find("emergent: no") != std::string::npos);
    }
    SECTION("signature-incompatible images are not deducible") {
        // The comparison system lacks any relation the observer can keep,
        // so its image offers nowhere for the observed relation to go.
        std::string split = write_temp("semiosa_cli_split.ss",
                                       "system P {\n"
                                       "    sort A level 0;\n"
                                       "    ctor p : -> A prio 1;\n"
                                       "    rel one(A);\n"
                                       "    fact k rank 1 : one(p);\n"
                                       "}\n"
                                       "system Q {\n"
                                       "    sort A level 0;\n"
                                       "    ctor p : -> A prio 1;\n"
                                       "    rel two(A, A);\n"
                                       "    fact k2 rank 1 : two(p, p);\n"
                                       "}\n"
                                       "morphism IdP : P -> P {\n"
                                       "    sort A -> A;\n"
                                       "    ctor p -> p;\n"
                                       "    rel one -> one;\n"
                                       "}\n");
        CliResult r2 = run_cli("emerge " + split +
                               " --system P --against Q --observer IdP"
                               " --probe \"one(p)\" --deducible");
        CHECK(r2.exit_code == 0);
        CHECK(r2.output.find("deducible: no") != std::string::npos);
        Json j2 = Json::parse(run_cli("emerge " + split +
                                      " --system P --against Q --observer IdP"
                                      " --probe \"one(p)\" --deducible --quiet --json -")
                                  .output);
        CHECK(j2["deducibility"]["deducible"] == false);
        CHECK(j2["deducibility"]["witness"].is_null());
    }
    SECTION("an unreadable probe exits 2") {
        CHECK(run_cli("emerge " + fixture("toy.ss") +
                      " --system Toy --against ToyPlain --observer IdToy --probe \"fits(\"")
                  .exit_code == 2);
    }
    SECTION("unknown systems exit 2") {
        CHECK(run_cli("emerge " + fixture("toy.ss") +
                      " --system Ghost --against ToyPlain --observer IdToy --probe \"t(a)\"")
                  .exit_code == 2);
    }
}

TEST_CASE("usage errors and help behave like a normal tool") {
    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("check") != std::string::npos);
    CHECK(help.output.find("simulate") != std::string::npos);

    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("check").exit_code == 2);
    CHECK(run_cli("simulate " + fixture("toy.ss")).exit_code == 2);

    SECTION("--json writes to a file path") {
        auto path = std::filesystem::temp_directory_path() / "semiosa_cli_check.json";
        std::filesystem::remove(path);
        CliResult r = run_cli("check " + fixture("toy.ss") + " --quiet --json " + path.string());
        CHECK(r.exit_code == 0);
        std::ifstream in(path);
        REQUIRE(in.good());
        Json j = Json::parse(in);
        CHECK(j["ok"] == true);
        std::filesystem::remove(path);
    }
    SECTION("an unwritable --json path exits 2") {
        CHECK(run_cli("check " + fixture("toy.ss") + " --json /no/dir/out.json").exit_code == 2);
    }
}
