#include <random>

#include "doctest.h"
#include "mcd/analysis.hpp"
#include "mcd/json_io.hpp"
#include "oracles.hpp"
#include "random_system.hpp"

using namespace mcd;

namespace {

using testing::Graph;
using testing::brute_growth;
using testing::kappa_table;
using testing::simple_cycles_through;

bool on_cycle(const Graph& g, int v) { return simple_cycles_through(g, v) > 0; }

}  // namespace

TEST_CASE("path-counting lemmas on 1000 random systems") {
    std::mt19937_64 rng(314159);
    int coiling = 0, bounded = 0, cantor = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = testing::random_system(rng);
        REQUIRE(validate(s).ok());
        CAPTURE(system_to_json(s).dump());
        Graph g(s);
        auto table = kappa_table(g, 64);
        bool two_cycles = false;
        for (std::size_t v = 0; v < s.curves.size(); ++v) {
            const auto& id = s.curves[v].id;
            // every class is pre-periodic
            bool reaches_periodic = false;
            for (const auto& r : reachable_from(s, id)) reaches_periodic |= on_cycle(g, s.curve_index(r));
            CHECK(reaches_periodic);

            auto gc = classify_growth(s, id);
            CHECK(gc.name() == brute_growth(table, static_cast<int>(v)));
            coiling += gc.kind == GrowthKind::Coiling;
            bounded += gc.kind == GrowthKind::Bounded;

            CHECK(is_periodic(s, id) == on_cycle(g, static_cast<int>(v)));
            if (is_periodic(s, id) && gc.kind != GrowthKind::Coiling) {
                for (int n = 0; n < 64; ++n) CHECK(table[n][v] == 1);
                auto lam = generated_multicurve(s, id);
                auto sub = sub_system(s, lam);
                for (int n = 1; n <= 16; ++n) CHECK(kappa(sub, id, n) == table[n - 1][v]);
            }
            two_cycles |= simple_cycles_through(g, static_cast<int>(v)) >= 2;
        }
        auto cs = find_cantor_submulticurve(s);
        CHECK(cs.has_value() == two_cycles);
        CHECK(has_unique_cycle(s) == !two_cycles);
        if (cs) {
            ++cantor;
            auto sub = sub_system(s, *cs);
            for (const auto& c : *cs) CHECK(classify_growth(sub, c).kind == GrowthKind::Coiling);
        }
    }
    MESSAGE("coiling classes " << coiling << ", bounded classes " << bounded << ", Cantor systems " << cantor);
    CHECK(coiling > 0);
    CHECK(bounded > 0);
    CHECK(cantor > 0);
}
