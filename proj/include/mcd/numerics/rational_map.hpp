#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcd/numerics/polynomial.hpp"

namespace mcd::num {

// A point of the Riemann sphere.
struct ExtPoint {
    Complex z{0, 0};
    bool infinite = false;

    static ExtPoint inf() { return {Complex(0), true}; }
};

Real chordal(const ExtPoint& a, const ExtPoint& b);

struct RationalMap {
    Poly num;
    Poly den;

    int degree() const;
    ExtPoint operator()(const ExtPoint& z) const;
    ExtPoint operator()(const Complex& z) const { return (*this)(ExtPoint{z, false}); }
    // num' den - num den'
    Poly wronskian() const;
};

struct CriticalPoint {
    ExtPoint z;
    int multiplicity = 1;
};

std::vector<CriticalPoint> critical_points(const RationalMap& m, std::uint64_t seed = RootOptions{}.seed);

struct OrbitStep {
    ExtPoint z;
    Real nearest = 0;  // chordal distance to the nearest earlier orbit point
};

struct CriticalOrbit {
    CriticalPoint critical;
    std::vector<OrbitStep> steps;  // z_0 = critical point, z_{k+1} = f(z_k)
    int cycle_start = 0;           // index j with z_last ~ z_j
    int cycle_length = 0;
    Real residual = 0;             // chordal distance of the closing repeat
};

struct AttractingCycle {
    std::vector<ExtPoint> points;
    bool superattracting = false;
};

struct CriticalPortrait {
    int degree = 0;
    int multiplicity_sum = 0;
    std::vector<CriticalOrbit> orbits;
    std::vector<AttractingCycle> cycles;
    Real max_residual = 0;
};

struct PcfResult {
    bool pcf = false;
    CriticalPortrait portrait;
    std::vector<std::string> diagnostics;
};

PcfResult verify_pcf(const RationalMap& m, int max_orbit = 64, Real tol = 1e-8L,
                     std::uint64_t seed = RootOptions{}.seed);

// Expected critical portrait, as named nodes with multiplicity and image.
struct PortraitNode {
    std::string name;
    int multiplicity = 0;  // 0 for non-critical postcritical points
    std::string image;
    std::optional<ExtPoint> value;         // when fixed by the formula
    std::optional<std::string> negation_of;  // value must be minus that node's value
};

struct PortraitMatch {
    bool ok = false;
    std::vector<std::pair<std::string, ExtPoint>> assignment;  // expected node -> computed point
    std::string failure;
};

// Graph isomorphism between the postcritical graph of `portrait` and `expected`.
PortraitMatch match_portrait(const RationalMap& m, const CriticalPortrait& portrait,
                             const std::vector<PortraitNode>& expected, Real tol = 1e-8L, Real value_tol = 1e-7L);

}  // namespace mcd::num
