#include <cmath>
#include <random>

#include "doctest.h"
#include "mcd/error.hpp"
#include "mcd/numerics/families.hpp"
#include "mcd/numerics/render.hpp"

using namespace mcd;
using namespace mcd::num;

namespace {

const Complex I(0, 1);

RationalMap square() { return {Poly{0, 0, 1}, Poly{1}}; }

bool has_point(const std::vector<CriticalPoint>& cps, const ExtPoint& z, int mult) {
    for (const auto& c : cps)
        if (chordal(c.z, z) < 1e-9L && c.multiplicity == mult) return true;
    return false;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
    Poly p = Poly::from_roots({1, 2, 3});
    CHECK(p.degree() == 3);
    CHECK(std::abs(p(2)) < 1e-18L);
    CHECK(std::abs(p.derivative()(0) - Complex(11)) < 1e-18L);
    Poly q = pow(Poly{1, 1}, 3);
    CHECK(q.c.size() == 4);
    CHECK(std::abs(q.c[2] - Complex(3)) < 1e-18L);
    CHECK((p - p).trimmed().degree() == -1);
    Complex w(0.3L, -0.2L);
    CHECK(std::abs(eval_reversed(p, w, 3) - std::pow(w, 3) * p(Complex(1) / w)) < 1e-15L);
}

TEST_CASE("Aberth roots with clusters") {
    Poly p = Poly::from_roots({0.5L, 0.5L, Complex(-1, 2), 3});
    auto roots = aberth_roots(p);
    auto cl = cluster_roots(p, roots);
    REQUIRE(cl.size() == 3);
    bool double_half = false;
    for (const auto& c : cl)
        if (std::abs(c.z - Complex(0.5L)) < 1e-10L && c.multiplicity == 2) double_half = true;
    CHECK(double_half);
}

TEST_CASE("projective evaluation") {
    auto r1 = family("ex1.R").map();
    auto v = r1(Complex(Real(2) / 3));
    CHECK(std::abs(v.z - Complex(1)) < 1e-15L);
    CHECK(r1(ExtPoint::inf()).infinite);
    auto r2 = family("ex2.R").map();
    auto at_inf = r2(ExtPoint::inf());
    CHECK_FALSE(at_inf.infinite);
    CHECK(std::abs(at_inf.z) < 1e-18L);
    CHECK(std::abs(r2(Complex(0)).z) < 1e-18L);
    // pole of R2 at a fourth root of -1
    Complex pole = std::polar(Real(1), std::acos(Real(-1)) / 4);
    CHECK(chordal(r2(pole), ExtPoint::inf()) < 1e-6L);
}

TEST_CASE("evaluation is invariant under homogeneous rescaling") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const auto& id : family_ids()) {
        auto m = family(id).map();
        RationalMap scaled{m.num.scaled(Complex(0.7L, 1.3L)), m.den.scaled(Complex(0.7L, 1.3L))};
        Real worst = 0;
        for (int k = 0; k < 1000; ++k) {
            Complex z(u(rng), u(rng));
            worst = std::max(worst, chordal(m(z), scaled(z)));
        }
        CAPTURE(id);
        CHECK(worst < 1e-12L);
    }
}

TEST_CASE("critical points") {
    auto r2 = critical_points(family("ex2.R").map());
    CHECK(r2.size() == 6);
    for (auto z : {Complex(0), Complex(1), Complex(-1), I, -I}) CHECK(has_point(r2, {z, false}, 1));
    CHECK(has_point(r2, ExtPoint::inf(), 1));

    auto r1 = critical_points(family("ex1.R").map());
    CHECK(r1.size() == 3);
    CHECK(has_point(r1, {Complex(0), false}, 1));
    CHECK(has_point(r1, {Complex(Real(2) / 3), false}, 1));
    CHECK(has_point(r1, ExtPoint::inf(), 2));

    auto sq = critical_points(square());
    CHECK(sq.size() == 2);
    CHECK(has_point(sq, {Complex(0), false}, 1));
    CHECK(has_point(sq, ExtPoint::inf(), 1));
}

TEST_CASE("multiplicities sum to 2d - 2 for every builtin map") {
    for (const auto& id : family_ids()) {
        auto m = family(id).map();
        int sum = 0;
        for (const auto& c : critical_points(m)) sum += c.multiplicity;
        CAPTURE(id);
        CHECK(sum == 2 * m.degree() - 2);
    }
}

TEST_CASE("PCF verification and portraits") {
    auto sq = verify_pcf(square());
    CHECK(sq.pcf);
    CHECK(sq.portrait.cycles.size() == 2);
    for (const auto& o : sq.portrait.orbits) CHECK(o.cycle_length == 1);

    for (const auto& id : family_ids()) {
        CAPTURE(id);
        const auto& f = family(id);
        auto m = f.map();
        auto r = verify_pcf(m);
        CHECK(r.pcf);
        CHECK(r.portrait.max_residual < 1e-8L);
        auto match = match_portrait(m, r.portrait, f.portrait(f.defaults()));
        CHECK_MESSAGE(match.ok, match.failure);
    }
    CHECK(verify_pcf(family("ex1.g").map()).portrait.multiplicity_sum == 8);
    CHECK(verify_pcf(family("ex2.g").map()).portrait.multiplicity_sum == 10);
}

TEST_CASE("a non-PCF map is reported") {
    RationalMap m{Poly{Complex(-0.75L, 0.1L), 0, 1}, Poly{1}};  // z^2 + c, c off the real slice
    auto r = verify_pcf(m, 64);
    CHECK_FALSE(r.pcf);
    CHECK_FALSE(r.diagnostics.empty());
    RationalMap a{Poly{Complex(0.2L), 0, 1}, Poly{1}};  // attracting fixed point, multiplier about 0.55
    auto ra = verify_pcf(a, 64);
    CHECK_FALSE(ra.pcf);
}

TEST_CASE("a wrong portrait is rejected") {
    const auto& f = family("ex2.R");
    auto m = f.map();
    auto nodes = f.portrait({});
    nodes[0].image = "1";
    CHECK_FALSE(match_portrait(m, verify_pcf(m).portrait, nodes).ok);
}

TEST_CASE("automatic orbit conditions hold for any parameter") {
    std::mt19937_64 rng(31);
    for (const auto& id : family_ids()) {
        const auto& f = family(id);
        if (f.automatic.empty()) continue;
        for (int trial = 0; trial < 50; ++trial) {
            auto p = f.defaults();
            for (auto& x : p) x *= Real(1) + std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
            for (const auto& cond : f.automatic) {
                CAPTURE(id);
                CAPTURE(cond.label);
                CHECK(std::abs(cond.residual(p)) < 1e-12L);
            }
        }
    }
}

TEST_CASE("parameter recovery") {
    for (int ex : {1, 2}) {
        CAPTURE(ex);
        auto prob = builtin_problem(ex);
        auto sol = solve_parameter(prob);
        CHECK(sol.digits >= 13);
        CHECK(sol.residual < 1e-13L);
        for (auto r : sol.error_ratios()) CHECK(r < 100);
    }
    auto smoke = solve_parameter(quadratic_smoke_problem());
    CHECK(std::abs(smoke.root[0] - Complex(1)) < 1e-14L);
    CHECK(matching_digits(-0.12193589740840572L, "-0.1219358974084060") == 14);
}

TEST_CASE("wrong basin is reported as non-convergence") {
    auto prob = quadratic_smoke_problem();
    prob.seeds = {Complex(-1.5L)};
    prob.target = "1.000000000000000";
    prob.required_digits = 13;
    CHECK_THROWS_AS(solve_parameter(prob), ConvergenceError);
}

TEST_CASE("refining the printed constants") {
    for (const char* id : {"ex1.g", "ex2.g"}) {
        CAPTURE(id);
        auto r = refine_parameters(id, family(id).defaults());
        CHECK(r.consistent);
        CHECK(r.residual < 1e-10L);
        CHECK(r.deviation < 1e-10L);
    }
    auto p = family("ex2.g").defaults();
    for (auto& x : p) x += 1e-6L;
    auto r = refine_parameters("ex2.g", p);
    auto paper = family("ex2.g").defaults();
    for (std::size_t k = 0; k < paper.size(); ++k) CHECK(std::abs(r.refined[k] - Complex(paper[k])) < 1e-10L);
    CHECK_FALSE(r.consistent);  // moved by about 1e-6 from its seeds
}

TEST_CASE("basins of z^2 split at the unit circle") {
    auto m = square();
    auto v = verify_pcf(m);
    RenderOptions opt;
    opt.px = 64;
    opt.max_iter = 200;
    auto r = render_basins(m, v.portrait.cycles, opt);
    CHECK(r.stats.classified_fraction > 0.99);
    const Real step = opt.width / opt.px;
    int zero_basin = -1;
    for (std::size_t k = 0; k < v.portrait.cycles.size(); ++k)
        if (!v.portrait.cycles[k].points[0].infinite) zero_basin = static_cast<int>(k);
    REQUIRE(zero_basin >= 0);
    int wrong = 0;
    for (int y = 0; y < opt.px; ++y)
        for (int x = 0; x < opt.px; ++x) {
            Complex z(-2 + (x + 0.5L) * step, 2 - (y + 0.5L) * step);
            if (std::abs(std::abs(z) - 1) < step) continue;
            int label = r.labels[static_cast<std::size_t>(y) * opt.px + x];
            if ((label == zero_basin) != (std::abs(z) < 1)) ++wrong;
        }
    CHECK(wrong == 0);
}

TEST_CASE("rendering R2 classifies almost every pixel") {
    auto m = family("ex2.R").map();
    auto v = verify_pcf(m);
    RenderOptions opt;
    opt.px = 128;
    opt.threads = 2;
    auto r = render_basins(m, v.portrait.cycles, opt);
    CHECK(r.stats.classified_fraction >= 0.99);
    REQUIRE(r.stats.basin_pixels.size() == 2);
    CHECK(r.stats.basin_pixels[0] > 0);
    CHECK(r.stats.basin_pixels[1] > 0);
    auto bytes = ppm_bytes(r.image);
    CHECK(bytes.rfind("P6\n128 128\n255\n", 0) == 0);
    CHECK(bytes.size() == std::string("P6\n128 128\n255\n").size() + 3u * 128 * 128);
}

TEST_CASE("zoom near the coiled Fatou domain of example 1") {
    auto m = family("ex1.g").map();
    auto v = verify_pcf(m);
    int coiled = -1;
    for (std::size_t k = 0; k < v.portrait.cycles.size(); ++k)
        for (const auto& z : v.portrait.cycles[k].points)
            if (!z.infinite && std::abs(z.z - Complex(1)) < 1e-9L) coiled = static_cast<int>(k);
    REQUIRE(coiled >= 0);
    RenderOptions opt;
    opt.center = 1;
    opt.width = 1e-3L;
    opt.px = 49;  // odd, so one pixel centre sits on the fixed point
    opt.max_iter = 2000;
    auto r = render_basins(m, v.portrait.cycles, opt);
    CHECK(r.stats.basin_pixels[coiled] > 0);
    opt.width = 1e-5L;
    opt.px = 64;
    auto z = render_basins(m, v.portrait.cycles, opt);
    CHECK(z.stats.basin_pixels[coiled] > 50);
}
