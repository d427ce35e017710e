#include <random>

#include "doctest.h"
#include "mcd/analysis.hpp"
#include "mcd/decomposition.hpp"
#include "mcd/json_io.hpp"
#include "random_system.hpp"

using namespace mcd;

namespace {

std::set<std::string> coiling(const CurveSystem& s) {
    std::set<std::string> out;
    for (const auto& c : s.curves)
        if (classify_growth(s, c.id).kind == GrowthKind::Coiling) out.insert(c.id);
    return out;
}

std::set<std::string> coiling_projections(const RefinementResult& r) {
    std::set<std::string> out;
    for (const auto& c : coiling(r.system)) out.insert(r.projection.at(c));
    return out;
}

const char* const kFixtures[] = {"cor55", "levy", "cantor", "chain", "thm14", "coiled-fatou"};

}  // namespace

TEST_CASE("chain refines at depth two") {
    auto d = load_system("@chain");
    CHECK(dichotomy_depth(d) == 2);
    auto r = refine_to_dichotomy(d);
    CHECK(r.N == 2);
    CHECK(r.dichotomy);
    CHECK(r.residual_bounded.empty());
    CHECK(r.system.curves.size() == 6);
    auto va = r.system.curve_index("gamma@0.0");
    auto vb = r.system.curve_index("gamma@0.1");
    REQUIRE(va >= 0);
    REQUIRE(vb >= 0);
    CHECK(r.projection.at("gamma@0.0") == "gamma");
    CHECK(classify_growth(r.system, "gamma@0.0").kind == GrowthKind::Const1);
    CHECK(classify_growth(r.system, "gamma@0.1").kind == GrowthKind::Const1);
    CHECK(validate(r.system).ok());
    REQUIRE(r.system.refinement.has_value());
    CHECK(r.system.refinement->N == 2);
    for (const auto& m : r.system.refinement->markers) CHECK(r.system.point(m).synthetic);
}

TEST_CASE("a single Levy curve refines to itself") {
    auto r = refine_to_dichotomy(load_system("@levy"));
    CHECK(r.N == 1);
    REQUIRE(r.system.curves.size() == 1);
    CHECK(classify_growth(r.system, r.system.curves[0].id).kind == GrowthKind::Const1);
    CHECK(r.dichotomy);
}

TEST_CASE("cor55 refined classes ending at beta coil") {
    auto r = refine_to_dichotomy(load_system("@cor55"));
    CHECK(r.dichotomy);
    for (const auto& c : r.system.curves) {
        CAPTURE(c.id);
        auto g = classify_growth(r.system, c.id);
        bool ends_at_beta = c.id == "beta@1";
        CHECK((g.kind == GrowthKind::Coiling) == ends_at_beta);
    }
}

TEST_CASE("refinement preserves coiling projections and the leading eigenvalue") {
    for (const char* name : kFixtures) {
        CAPTURE(name);
        auto s = load_system(std::string("@") + name);
        auto r = refine_to_dichotomy(s);
        CHECK_MESSAGE(validate(r.system).ok(), validate(r.system).summary());
        CHECK(coiling_projections(r) == coiling(s));
        CHECK(std::abs(leading_eigenvalue(thurston_matrix(r.system)) - leading_eigenvalue(thurston_matrix(s))) < 1e-6);
        // round trip through JSON
        auto again = system_from_json(system_to_json(r.system));
        CHECK(structurally_equal(again, r.system));
        CHECK(validate(again).ok());
    }
}

TEST_CASE("separation reports") {
    auto a = separation_report(load_system("@cor55"));
    REQUIRE(a.rows.size() == 2);
    CHECK_FALSE(a.refined);
    CHECK(a.rows[0].curve == "alpha");
    CHECK_FALSE(a.rows[0].disjoint);
    CHECK(a.rows[1].curve == "beta");
    CHECK(a.rows[1].disjoint);
    CHECK(a.rows[1].left_piece == "P2");
    CHECK(a.rows[1].right_piece == "P3");
    CHECK_FALSE(separation_report(load_system("@levy")).rows[0].disjoint);
    for (const auto& row : separation_report(load_system("@cantor")).rows) CHECK(row.disjoint);
    CHECK(separation_report(refine_to_dichotomy(load_system("@chain")).system).refined);
}

TEST_CASE("renormalization certificates") {
    auto e = load_system("@thm14");
    auto c = renormalization_certificate(e, "P1");
    REQUIRE(c.has_value());
    CHECK(c->period == 1);
    REQUIRE(c->boundary.size() == 1);
    CHECK(c->boundary[0].curve == "gamma");
    CHECK(c->boundary[0].growth == "Coiling");
    CHECK(c->verified);
    CHECK_FALSE(c->theorem.empty());

    CHECK_FALSE(renormalization_certificate(load_system("@cor55"), "P2").has_value());
    auto cantor = load_system("@cantor");
    CHECK(renormalization_certificate(cantor, "P2").has_value());
    CHECK(renormalization_certificate(cantor, "P1").has_value());
    CHECK(renormalization_certificate(cantor, "P3").has_value());

    auto moved = load_system("@thm14");
    moved.pieces[1].image = "P3";
    CHECK_THROWS_AS(renormalization_certificate(moved, "P2"), ValidationError);
}

TEST_CASE("combinatorial renormalization data") {
    auto e = combinatorial_renormalization_data(load_system("@thm14"), "P1");
    REQUIRE(e.boundary.size() == 1);
    CHECK(e.boundary[0].degree == 2);
    int synthetic = 0;
    for (const auto& p : e.marked) synthetic += p.synthetic;
    CHECK(synthetic == 1);
    CHECK(e.marked.size() == 3);  // m1, m2 and the collapsed complement

    auto a = combinatorial_renormalization_data(load_system("@cor55"), "P1");
    REQUIRE(a.boundary.size() == 1);
    CHECK(a.boundary[0].curve == "alpha");
    CHECK(a.boundary[0].degree == 2);
    CHECK(a.boundary[0].synthetic_point == "*alpha");

    // fixed piece with a boundary loop of degree 3
    auto d3 = load_system("@cantor");
    auto p = combinatorial_renormalization_data(d3, "P1");
    REQUIRE(p.boundary.size() == 1);
    CHECK(p.boundary[0].degree == 3);
}

TEST_CASE("renormalizable piece search on thm14") {
    auto r = find_renormalizable_piece(load_system("@thm14"));
    REQUIRE(r.has_value());
    CHECK_FALSE(r->cantor_shortcut);
    CHECK(r->gamma == "gamma");
    CHECK(r->gamma_prime == std::set<std::string>{"gamma", "alpha"});
    CHECK(r->piece == "P1");
    CHECK(r->certificate.period == 1);
    CHECK(r->certificate.verified);
    CHECK(r->post_completely_stable);
    CHECK(r->post_u_fixed);
    CHECK(r->post_lambda_coiling);
    CHECK(r->lambda_gamma == std::set<std::string>{"gamma"});
}

TEST_CASE("renormalizable piece search short-circuits on a Cantor multicurve") {
    auto r = find_renormalizable_piece(load_system("@cantor"));
    REQUIRE(r.has_value());
    CHECK(r->cantor_shortcut);
    CHECK(r->certificate.verified);
    CHECK(piece_period(load_system("@cantor"), r->piece) >= 1);
}

TEST_CASE("no renormalizable piece without a coiling class") {
    std::vector<std::string> trace;
    CHECK_FALSE(find_renormalizable_piece(load_system("@levy"), &trace).has_value());
    CHECK_FALSE(trace.empty());
}

TEST_CASE("coiled Fatou detection") {
    auto f = load_system("@coiled-fatou");
    auto c = detect_coiled_fatou(f);
    REQUIRE(c.has_value());
    CHECK(c->fixed_point == "a");
    CHECK(c->alpha == "alpha");
    CHECK(c->beta == "beta");
    CHECK(c->verified);
    CHECK_FALSE(detect_coiled_fatou(load_system("@cor55")).has_value());
    f.words["beta"][0].target = "beta";
    CHECK_FALSE(detect_coiled_fatou(f).has_value());
}

TEST_CASE("random systems: refinement keeps coiling classes and covers targets") {
    std::mt19937_64 rng(515);
    int residual = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto s = testing::random_system(rng);
        CAPTURE(system_to_json(s).dump());
        auto r = refine_to_dichotomy(s);
        CHECK_MESSAGE(validate(r.system).ok(), validate(r.system).summary());
        CHECK(coiling_projections(r) == coiling(s));
        std::set<std::string> projected;
        for (const auto& [k, v] : r.projection) projected.insert(v);
        for (const auto& c : s.curves) {
            bool incoming = false;
            for (const auto& [src, w] : s.words)
                for (const auto& e : w) incoming |= e.target == c.id;
            if (incoming) CHECK(projected.count(c.id) == 1);
        }
        CHECK(r.dichotomy == r.residual_bounded.empty());
        residual += !r.dichotomy;
    }
    MESSAGE("systems with residual bounded classes: " << residual);
}
