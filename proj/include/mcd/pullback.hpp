#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "mcd/curve_complex.hpp"

namespace mcd {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Rows and columns follow sys.curves order.
struct CountingMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<int>> b;
    std::size_t size() const { return ids.size(); }
};

struct ThurstonMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<Rational>> exact;
    std::size_t size() const { return ids.size(); }
    std::vector<std::vector<double>> values() const;
    ThurstonMatrix restrict_to(const std::vector<int>& rows) const;
};

CountingMatrix counting_matrix(const CurveSystem& sys);
ThurstonMatrix thurston_matrix(const CurveSystem& sys);

// An occurrence of `target` inside words[source] at position `index`.
struct EdgeInstance {
    int source = 0;
    int index = 0;
    int target = 0;
    int degree = 1;
    Orientation orientation = Orientation::Same;

    bool operator==(const EdgeInstance&) const = default;
};

// out[i] = edge instances leaving curve i, in word order.
std::vector<std::vector<EdgeInstance>> edge_instances(const CurveSystem& sys);

struct WalkStep {
    int index = 0;
    std::string target;
    bool operator==(const WalkStep&) const = default;
};

struct WalkAddress {
    std::vector<WalkStep> steps;
    BigInt degree = 1;
    Orientation orientation = Orientation::Same;

    const std::string& end() const { return steps.back().target; }
};

struct LevelWord {
    std::string curve;
    int level = 1;
    std::vector<WalkAddress> addresses;
};

// kappa_n(curve) = number of length-n walks from curve = sum_beta (B^n)[curve][beta].
BigInt kappa(const CurveSystem& sys, const std::string& curve, int n);
std::vector<BigInt> kappa_all(const CurveSystem& sys, int n);

// Substitution: each entry (beta, d, o) becomes the level-(n-1) word of beta,
// reversed when o = Reversed, with degrees multiplied by d.
LevelWord level_word(const CurveSystem& sys, const std::string& curve, int n);

// The curve system of F^k. Inessential tables collapse to one Trivial
// remainder entry per target so the degree sum still closes at d^k.
CurveSystem power_system(const CurveSystem& sys, int k);

std::vector<std::vector<BigInt>> matrix_power(const CountingMatrix& b, int k);

}  // namespace mcd
