#include <random>

#include "doctest.h"
#include "mcd/curve_complex.hpp"
#include "mcd/error.hpp"
#include "mcd/json_io.hpp"
#include "random_system.hpp"

using namespace mcd;

namespace {

CurveSystem fixture(const char* name) { return load_system(std::string(MCD_FIXTURE_DIR) + "/" + name + ".json"); }

}  // namespace

TEST_CASE("bundled fixtures validate") {
    for (const char* name : {"cor55", "levy", "cantor", "chain", "thm14", "coiled-fatou"}) {
        CAPTURE(name);
        auto r = validate(fixture(name));
        CHECK_MESSAGE(r.ok(), r.summary());
    }
}

TEST_CASE("embedded fixtures equal the shipped files") {
    for (const auto& [name, text] : embedded_fixtures()) {
        CAPTURE(name);
        CHECK(structurally_equal(load_system("@" + name), fixture(name.c_str())));
    }
    CHECK(embedded_fixtures().size() == 6);
}

TEST_CASE("emptied word fails pre-stability") {
    auto s = fixture("cor55");
    s.words["beta"].clear();
    auto r = validate(s);
    CHECK_FALSE(r.ok());
    CHECK(r.has("pre-stability"));
}

TEST_CASE("dangling target fails stability") {
    std::mt19937_64 rng(7);
    auto s = testing::random_system(rng);
    s.words[s.curves[0].id].push_back({"nowhere", 1, Orientation::Same});
    auto r = validate(s);
    CHECK(r.has("stability"));
}

TEST_CASE("unresolved references are reported") {
    auto s = fixture("cor55");
    s.points[0].image = "ghost";
    s.curves[0].left_piece = "P9";
    auto r = validate(s);
    CHECK(r.has("reference"));
    CHECK_THROWS_AS(require_valid(s), ValidationError);
}

TEST_CASE("entry degree above global degree") {
    auto s = fixture("cor55");
    s.words["alpha"][0].degree = 3;
    CHECK(validate(s).has("entry-degree"));
}

TEST_CASE("inessential curve is rejected") {
    auto s = fixture("cor55");
    // move m4 into P2 so beta bounds a single point on its right
    s.pieces[1].points = {"m3", "m4"};
    s.pieces[2].points = {"m5"};
    CHECK(validate(s).has("essential"));
}

TEST_CASE("degree sum checked only with an inessential table") {
    auto s = fixture("cor55");
    CHECK(validate(s).ok());
    CHECK_FALSE(validate(s).warnings.empty());
    s.inessential = std::map<std::string, std::vector<InessentialEntry>>{{"alpha", {}}, {"beta", {}}};
    CHECK(validate(s).has("degree-sum"));
}

TEST_CASE("dual tree of cor55 and thm14 are paths") {
    auto t = dual_tree(fixture("cor55"));
    CHECK(t.nodes.size() == 3);
    REQUIRE(t.edges.size() == 2);
    CHECK(t.edges[0].curve == "alpha");
    CHECK(t.edges[0].a == "P1");
    CHECK(t.edges[0].b == "P2");
    CHECK(t.edges[1].curve == "beta");
    CHECK(t.edges[1].a == "P2");
    CHECK(t.edges[1].b == "P3");

    auto e = dual_tree(fixture("thm14"));
    REQUIRE(e.edges.size() == 2);
    CHECK(e.edges[0].curve == "gamma");
    CHECK(e.edges[1].curve == "alpha");
    CHECK(e.side("alpha", "P3") == std::set<std::string>{"P3"});
    CHECK(e.side("alpha", "P2") == std::set<std::string>{"P1", "P2"});
}

TEST_CASE("one-curve system has two nodes") {
    auto t = dual_tree(fixture("levy"));
    CHECK(t.nodes.size() == 2);
    CHECK(t.edges.size() == 1);
}

TEST_CASE("cyclic piece graph is not a sphere decomposition") {
    auto s = fixture("cor55");
    s.curves[1].right_piece = "P1";
    s.pieces[0].boundary.push_back("beta");
    s.pieces[2].boundary.clear();
    CHECK_THROWS_WITH_AS(dual_tree(s), doctest::Contains("not a sphere decomposition"), ValidationError);
}

TEST_CASE("sub_system glues across dropped curves") {
    auto s = fixture("thm14");
    auto sub = sub_system(s, {"gamma"});
    REQUIRE(sub.pieces.size() == 2);
    REQUIRE(sub.curves.size() == 1);
    auto names = merged_piece_names(s, {"gamma"});
    CHECK(names["P2"] == names["P3"]);
    CHECK(names["P1"] != names["P2"]);
    for (const auto& p : sub.pieces) CHECK(p.image == p.id);
    CHECK(validate(sub).ok());
    CHECK(sub.word("gamma").size() == 1);
}

TEST_CASE("sub_system with every curve is the identity") {
    for (const char* name : {"cor55", "thm14", "cantor", "chain"}) {
        auto s = fixture(name);
        std::set<std::string> all;
        for (const auto& c : s.curves) all.insert(c.id);
        CHECK(structurally_equal(sub_system(s, all), s));
    }
}

TEST_CASE("non-stable subset is rejected with the violating curve") {
    auto s = fixture("cantor");
    CHECK_THROWS_WITH_AS(sub_system(s, {"gamma1"}), doctest::Contains("gamma2"), ValidationError);
}

TEST_CASE("induced piece map") {
    auto s = fixture("thm14");
    auto f = induced_piece_map(s, {"gamma"});
    for (const auto& [k, v] : f) CHECK(k == v);

    // a swap P2 <-> P3 becomes a fixed merged piece
    auto t = fixture("thm14");
    t.pieces[1].image = "P3";
    t.pieces[2].image = "P2";
    auto g = induced_piece_map(t, {"gamma"});
    auto names = merged_piece_names(t, {"gamma"});
    CHECK(g[names["P2"]] == names["P2"]);
}

TEST_CASE("inconsistent piece dynamics") {
    auto s = fixture("thm14");
    s.pieces[1].image = "P1";
    CHECK_THROWS_WITH_AS(induced_piece_map(s, {"gamma"}), doctest::Contains("inconsistent piece dynamics"),
                         ConsistencyError);
}

TEST_CASE("piece periods") {
    auto s = fixture("thm14");
    CHECK(piece_period(s, "P1") == 1);
    s.pieces[1].image = "P3";
    s.pieces[2].image = "P2";
    CHECK(piece_period(s, "P2") == 2);
}

TEST_CASE("random systems: tree shape, orbits and idempotent sub_system") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = testing::random_system(rng);
        auto r = validate(s);
        REQUIRE_MESSAGE(r.ok(), r.summary());
        CHECK(s.pieces.size() == s.curves.size() + 1);
        auto t = dual_tree(s);
        CHECK(t.side(s.curves[0].id, s.curves[0].left_piece).size() +
                  t.side(s.curves[0].id, s.curves[0].right_piece).size() ==
              s.pieces.size());
        std::set<std::string> all;
        for (const auto& c : s.curves) all.insert(c.id);
        auto once = sub_system(s, all);
        CHECK(structurally_equal(sub_system(once, all), once));
        if (s.inessential) CHECK_FALSE(validate(once).has("degree-sum"));
    }
}
