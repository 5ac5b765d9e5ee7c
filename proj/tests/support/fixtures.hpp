// Hand-built copies of the small systems from fixtures/toy.ss, for tests
// that should not depend on the parser, plus loaders for the fixture files.
#pragma once

#include <semiosa/semiosa.hpp>

#include <stdexcept>
#include <string>

namespace semiosa::testing {

inline SignSystem make_toy() {
    SignSystem s;
    s.name = "Toy";
    s.sorts.emplace("Part", SortDecl{"Part", 0});
    s.sorts.emplace("Whole", SortDecl{"Whole", 1});
    s.ctors.emplace("leaf", CtorDecl{"leaf", {}, "Part", 1});
    s.ctors.emplace("pair", CtorDecl{"pair", {"Part", "Part"}, "Whole", 2});
    s.rels.emplace("touches", RelDecl{"touches", {"Part", "Part"}, false});
    s.rels.emplace("fits", RelDecl{"fits", {"Whole"}, true});
    Term leaf = Term::app("leaf");
    s.axioms.emplace("f1", Axiom::fact("f1", 1, Atom{"touches", {leaf, leaf}}));
    s.axioms.emplace("r1", Axiom::rule("r1", 1, {Atom{"touches", {Term::var("X"), Term::var("Y")}}},
                                       Atom{"fits", {Term::app("pair", {Term::var("X"),
                                                                        Term::var("Y")})}}));
    s.axioms.emplace("f2",
                     Axiom::fact("f2", 2, Atom{"fits", {Term::app("pair", {leaf, leaf})}}));
    return s;
}

inline SignSystem make_toy2() {
    SignSystem s;
    s.name = "Toy2";
    s.sorts.emplace("Piece", SortDecl{"Piece", 0});
    s.sorts.emplace("Unit", SortDecl{"Unit", 1});
    s.ctors.emplace("seed", CtorDecl{"seed", {}, "Piece", 1});
    s.ctors.emplace("duo", CtorDecl{"duo", {"Piece", "Piece"}, "Unit", 2});
    s.rels.emplace("meets", RelDecl{"meets", {"Piece", "Piece"}, false});
    s.rels.emplace("suits", RelDecl{"suits", {"Unit"}, true});
    Term seed = Term::app("seed");
    s.axioms.emplace("f1", Axiom::fact("f1", 1, Atom{"meets", {seed, seed}}));
    s.axioms.emplace("r1", Axiom::rule("r1", 1, {Atom{"meets", {Term::var("X"), Term::var("Y")}}},
                                       Atom{"suits", {Term::app("duo", {Term::var("X"),
                                                                        Term::var("Y")})}}));
    s.axioms.emplace("f2",
                     Axiom::fact("f2", 2, Atom{"suits", {Term::app("duo", {seed, seed})}}));
    return s;
}

inline SignSystem make_toy_quiet() {
    SignSystem s;
    s.name = "ToyQuiet";
    s.sorts.emplace("Bit", SortDecl{"Bit", 0});
    s.sorts.emplace("Lump", SortDecl{"Lump", 1});
    s.ctors.emplace("dot", CtorDecl{"dot", {}, "Bit", 1});
    s.ctors.emplace("pack", CtorDecl{"pack", {"Bit", "Bit"}, "Lump", 2});
    s.rels.emplace("joins", RelDecl{"joins", {"Bit", "Bit"}, false});
    s.rels.emplace("holds", RelDecl{"holds", {"Lump"}, false});
    Term dot = Term::app("dot");
    s.axioms.emplace("f1", Axiom::fact("f1", 1, Atom{"joins", {dot, dot}}));
    s.axioms.emplace("r1", Axiom::rule("r1", 1, {Atom{"joins", {Term::var("X"), Term::var("Y")}}},
                                       Atom{"holds", {Term::app("pack", {Term::var("X"),
                                                                         Term::var("Y")})}}));
    s.axioms.emplace("f2",
                     Axiom::fact("f2", 2, Atom{"holds", {Term::app("pack", {dot, dot})}}));
    return s;
}

inline SignSystem make_toy_plain() {
    SignSystem s = make_toy();
    s.name = "ToyPlain";
    s.axioms.erase("r1");
    s.axioms.erase("f2");
    return s;
}

inline SemioticMorphism make_rename() {
    SemioticMorphism m;
    m.name = "Rename";
    m.from = "Toy";
    m.to = "Toy2";
    m.sort_map = {{"Part", "Piece"}, {"Whole", "Unit"}};
    m.ctor_map = {{"leaf", "seed"}, {"pair", "duo"}};
    m.rel_map = {{"touches", "meets"}, {"fits", "suits"}};
    return m;
}

inline SemioticMorphism make_hush() {
    SemioticMorphism m;
    m.name = "Hush";
    m.from = "Toy";
    m.to = "ToyQuiet";
    m.sort_map = {{"Part", "Bit"}, {"Whole", "Lump"}};
    m.ctor_map = {{"leaf", "dot"}, {"pair", "pack"}};
    m.rel_map = {{"touches", "joins"}, {"fits", "holds"}};
    return m;
}

inline std::string fixture_path(const std::string& filename) {
    return std::string(SEMIOSA_FIXTURES_DIR) + "/" + filename;
}

inline dsl::Workspace load_fixture(const std::string& filename) {
    dsl::LoadResult r = dsl::load_file(fixture_path(filename));
    if (!r.ok()) {
        std::string msg = "fixture " + filename + " failed to load:";
        for (const Diagnostic& d : r.diagnostics) msg += "\n  " + d.format();
        throw std::runtime_error(msg);
    }
    return std::move(r.ws);
}

} // namespace semiosa::testing
