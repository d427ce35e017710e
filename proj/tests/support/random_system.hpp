#pragma once

#include <cstdint>
#include <random>

#include "mcd/curve_complex.hpp"

namespace mcd::testing {

struct RandomSystemOptions {
    int max_curves = 6;
    int max_entries = 3;
    int max_degree = 3;
};

// A random essential system on a random dual tree. Leaves carry two fixed
// points, interior pieces one, so every curve is essential and every piece
// has complex type. Words are non-empty; a Trivial remainder closes the
// degree sums when they fit under the global degree.
CurveSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& opt = {});

}  // namespace mcd::testing
