#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mcd/cli.hpp"
#include "mcd/error.hpp"

using namespace mcd;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mcd");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("mcd_test_" + name)).string();
}

std::string fixture(const char* name) { return std::string(MCD_FIXTURE_DIR) + "/" + name + ".json"; }

}  // namespace

TEST_CASE("schema errors are validation errors") {
    CHECK_THROWS_AS(system_from_json(Json::parse("[]")), ValidationError);
    CHECK_THROWS_AS(system_from_json(Json::parse(R"({"degree": 2})")), ValidationError);
    auto j = Json::parse(read_source("@cor55"));
    j["words"]["beta"][0]["orientation"] = "Sideways";
    CHECK_THROWS_AS(system_from_json(j), ValidationError);
    CHECK_THROWS_AS(load_system("@nonexistent"), ValidationError);
    CHECK_THROWS_AS(load_system(tmp("does_not_exist.json")), ValidationError);
}

TEST_CASE("compact entries and defaults") {
    auto j = Json::parse(read_source("@levy"));
    j["words"]["gamma"] = Json::parse(R"([["gamma", 1, "Reversed"]])");
    auto s = system_from_json(j);
    CHECK(s.word("gamma")[0].orientation == Orientation::Reversed);
}

TEST_CASE("system JSON round trip") {
    for (const auto& [name, text] : embedded_fixtures()) {
        auto s = load_system("@" + name);
        CHECK(structurally_equal(system_from_json(system_to_json(s)), s));
    }
}

TEST_CASE("map JSON") {
    auto m = map_from_json(Json::parse(R"({"num": [0, 0, 2], "den": [1, 0, 0, 0, [1, 0]]})"));
    CHECK(m.degree() == 4);
    auto back = map_from_json(map_to_json(m));
    CHECK(back.num.c == m.num.c);
    CHECK_THROWS_AS(map_from_json(Json::parse(R"({"num": [1, 1], "den": [1]})")), ValidationError);
}

TEST_CASE("analyze cor55") {
    auto r = cli({"analyze", fixture("cor55")});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["validation"]["ok"] == true);
    CHECK(j["growth"]["beta"]["class"] == "Coiling");
    CHECK(j["growth"]["beta"]["witness"]["branching"] == "beta");
    CHECK(j["growth"]["alpha"]["class"] == "Const1");
    CHECK(j["growth"]["beta"]["kappa_1_to_8"][7] == 17);
    CHECK(j["separation"]["rows"][1]["verdict"] == "disjoint");
    CHECK(j["separation"]["rows"][0]["verdict"] == "touching");
    CHECK(j["obstruction"]["obstruction"] == false);
    CHECK(std::abs(j["lambda"]["value"].get<double>() - 0.5) < 1e-12);
    CHECK(j["matrices"]["M"]["exact"][1][1] == "1/2");
}

TEST_CASE("analyze levy") {
    auto r = cli({"analyze", "@levy"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["obstruction"]["obstruction"] == true);
    CHECK(j["levy_cycle"]["curves"][0] == "gamma");
}

TEST_CASE("analyze failures") {
    auto r = cli({"analyze", tmp("missing.json")});
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot read") != std::string::npos);

    auto j = Json::parse(read_source("@cor55"));
    j["words"]["beta"] = Json::array();
    std::string path = tmp("bad.json");
    std::ofstream(path) << j.dump();
    auto bad = cli({"analyze", path});
    CHECK(bad.code == 1);
    auto rep = Json::parse(bad.out);
    CHECK(rep["validation"]["ok"] == false);
    CHECK(rep["validation"]["violations"][0]["rule"] == "pre-stability");
}

TEST_CASE("argument errors exit 1") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"solve-param", "3"}).code == 1);
    CHECK(cli({"render", "no-such-family"}).code == 1);
    CHECK(cli({"certify", "@thm14", "--piece", "P9"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("refine writes a re-analysable system") {
    std::string out = tmp("chain_refined.json");
    auto r = cli({"refine", fixture("chain"), "--out", out});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("N=2") != std::string::npos);
    auto j = Json::parse(read_source(out));
    CHECK(j["refinement"]["N"] == 2);
    CHECK(j["refinement"]["dichotomy"] == true);
    auto again = cli({"analyze", out});
    CHECK(again.code == 0);
    auto rep = Json::parse(again.out);
    CHECK(rep["separation"]["refined"] == true);

    auto forced = cli({"refine", "@cor55", "--N", "2"});
    REQUIRE(forced.code == 0);
    CHECK(Json::parse(forced.out)["refinement"]["N"] == 2);
}

TEST_CASE("certify") {
    auto find = cli({"certify", fixture("thm14"), "--find"});
    REQUIRE(find.code == 0);
    auto j = Json::parse(find.out);
    CHECK(j["piece"] == "P1");
    CHECK(j["gamma_prime"] == Json::array({"alpha", "gamma"}));
    CHECK(j["certificate"]["verified"] == true);

    auto piece = cli({"certify", "@thm14", "--piece", "P1"});
    REQUIRE(piece.code == 0);
    auto p = Json::parse(piece.out);
    CHECK(p["certificate"]["period"] == 1);
    CHECK(p["combinatorial_data"]["boundary"][0]["degree"] == 2);

    auto none = cli({"certify", "@cor55", "--piece", "P2"});
    REQUIRE(none.code == 0);
    CHECK(Json::parse(none.out)["certificate"].is_null());

    auto fatou = cli({"certify", "@coiled-fatou"});
    REQUIRE(fatou.code == 0);
    CHECK(Json::parse(fatou.out)["coiled_fatou"]["witnesses"]["fixed_point"] == "a");
}

TEST_CASE("solve-param and verify-example") {
    auto s = cli({"solve-param", "1", "--digits", "13"});
    CHECK(s.code == 0);
    CHECK(s.out.find("13/13 digits match") != std::string::npos);
    auto s2 = cli({"solve-param", "2"});
    CHECK(s2.code == 0);

    auto v = cli({"verify-example", "2"});
    CHECK(v.code == 0);
    CHECK(v.out.find("all residuals < 1e-8") != std::string::npos);
    auto vj = cli({"verify-example", "1", "--json"});
    CHECK(vj.code == 0);
    CHECK(Json::parse(vj.out)["ok"] == true);
}

TEST_CASE("render") {
    std::string out = tmp("r2.ppm");
    auto r = cli({"render", "ex2.R", "--out", out, "--px", "96", "--threads", "2"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["stats"]["classified_fraction"].get<double>() >= 0.99);
    std::ifstream f(out, std::ios::binary);
    std::string head(13, '\0');
    f.read(head.data(), 13);
    CHECK(head == "P6\n96 96\n255\n");

    std::string mpath = tmp("square.json");
    std::ofstream(mpath) << R"({"num": [0, 0, 1], "den": [1]})";
    auto sq = cli({"render", mpath, "--px", "32", "--center", "0.5,0", "--width", "1"});
    CHECK(sq.code == 0);
}

TEST_CASE("seed flag keeps results deterministic") {
    auto a = cli({"--seed", "7", "verify-example", "1", "--json"});
    auto b = cli({"--seed", "7", "verify-example", "1", "--json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto c1 = cli({"analyze", "@thm14"});
    auto c2 = cli({"analyze", "@thm14"});
    CHECK(c1.out == c2.out);
}
