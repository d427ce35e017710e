#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcd/pullback.hpp"

namespace mcd {

struct SpectralResult {
    double lambda = 0.0;
    double power_lambda = 0.0;       // max over irreducible blocks, shifted power iteration
    std::optional<double> exact;     // characteristic-polynomial root, when the matrix is small
    std::vector<std::string> trace;
};

// Perron root of a nonnegative matrix (absolute tolerance 1e-9).
SpectralResult perron_root(const ThurstonMatrix& m);
double leading_eigenvalue(const ThurstonMatrix& m);

// Exact test lambda(M) >= 1 through the characteristic polynomial of L*M.
bool perron_root_at_least_one(const ThurstonMatrix& m);

struct Component {
    std::vector<std::string> curves;
    bool cyclic = false;
    double lambda = 0.0;
};

// Strongly connected components of the support digraph, sorted by the
// position of their first curve.
std::vector<std::vector<int>> strong_components(const CountingMatrix& b);
std::vector<Component> irreducible_components(const CurveSystem& sys);

struct ObstructionResult {
    bool obstruction = false;
    double lambda = 0.0;
    bool exact_boundary_test = false;
};

ObstructionResult is_obstruction(const CurveSystem& sys, const std::set<std::string>& subset);
ObstructionResult is_obstruction(const CurveSystem& sys);

struct CycleEdge {
    std::string source;
    int index = 0;
    std::string target;
    bool operator==(const CycleEdge&) const = default;
};

struct Cycle {
    std::vector<CycleEdge> edges;
    std::vector<std::string> curves() const;
    Orientation orientation(const CurveSystem& sys) const;
    int length() const { return static_cast<int>(edges.size()); }
};

std::optional<Cycle> find_levy_cycle(const CurveSystem& sys);

enum class GrowthKind { Const1, Bounded, Coiling };

struct GrowthClass {
    GrowthKind kind = GrowthKind::Const1;
    BigInt limit = 1;                       // stable kappa when not coiling
    int stabilization_depth = 1;            // first n with kappa_n = limit
    std::optional<std::string> branching;   // coiling witness: vertex with out-multiplicity >= 2
    std::optional<Cycle> feeding_cycle;     // coiling witness: cycle upstream of the branching vertex

    std::string name() const;
};

GrowthClass classify_growth(const CurveSystem& sys, const std::string& curve);

bool is_periodic(const CurveSystem& sys, const std::string& curve);
std::set<std::string> periodic_curves(const CurveSystem& sys);

// Lambda_gamma: every curve with a walk to gamma (gamma included).
std::set<std::string> generated_multicurve(const CurveSystem& sys, const std::string& gamma);

// Simple cycles through `curve` over edge instances, at most `limit` of them.
std::vector<Cycle> cycles_through(const CurveSystem& sys, const std::string& curve, std::size_t limit = 4096);
bool has_unique_cycle(const CurveSystem& sys);

std::optional<std::set<std::string>> find_cantor_submulticurve(const CurveSystem& sys);

// Shortest walk length >= 1 from `from` to `to`, or -1.
int shortest_walk(const CurveSystem& sys, const std::string& from, const std::string& to);

std::set<std::string> reachable_from(const CurveSystem& sys, const std::string& curve);

}  // namespace mcd
