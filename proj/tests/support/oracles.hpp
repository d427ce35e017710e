#pragma once

// Brute-force oracles over the entry-instance multigraph. They use only the
// raw words of a system, never the library's analysis routines.

#include <string>
#include <vector>

#include "mcd/pullback.hpp"

namespace mcd::testing {

struct Graph {
    std::vector<std::vector<int>> out;  // one target per edge instance
    explicit Graph(const CurveSystem& s);
};

// rows[n-1][v] = (B^n 1)_v for n = 1..depth.
std::vector<std::vector<BigInt>> kappa_table(const Graph& g, int depth);

// Coiling when kappa still grows between depths 32 and 64, else the value at 64.
std::string brute_growth(const std::vector<std::vector<BigInt>>& table, int v);

// Distinct simple closed walks through v, parallel edges counted separately.
int simple_cycles_through(const Graph& g, int v);

}  // namespace mcd::testing
