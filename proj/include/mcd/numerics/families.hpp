#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcd/numerics/rational_map.hpp"

namespace mcd::num {

struct ParamValue {
    std::string name;
    std::string printed;  // digits as printed in the source, used for digit agreement
    Real value = 0;
};

// A named orbit identity that must hold for every parameter value.
struct AutomaticCondition {
    std::string label;
    std::function<Complex(const std::vector<Real>&)> residual;
};

struct Family {
    std::string id;
    std::string formula;
    std::vector<ParamValue> params;  // empty for fixed maps
    std::function<RationalMap(const std::vector<Real>&)> build;
    std::function<std::vector<PortraitNode>(const std::vector<Real>&)> portrait;
    std::vector<AutomaticCondition> automatic;

    std::vector<Real> defaults() const;
    RationalMap map() const { return build(defaults()); }
};

const std::vector<std::string>& family_ids();
const Family& family(const std::string& id);

struct NewtonStep {
    int iteration = 0;
    std::vector<Complex> x;
    Real residual = 0;
    Real step = 0;
};

struct ParameterProblem {
    std::string name;
    std::string family;                         // builtin id, or empty
    std::vector<std::string> unknowns;
    std::vector<Complex> seeds;
    std::function<std::vector<Complex>(const std::vector<Complex>&)> residual;
    std::optional<std::string> target;          // printed digits the root must reproduce
    int required_digits = 0;
    Real tolerance = 1e-13L;
    int max_iterations = 50;
};

struct ParameterSolution {
    std::vector<Complex> root;
    std::vector<NewtonStep> trace;
    Real residual = 0;
    int digits = -1;  // agreement with target, when one is set
    int target_digits = 0;

    // e_{k+1} / e_k^2 with e_k = |x_k - root|, for steps where e_k is above the noise floor.
    std::vector<Real> error_ratios() const;
};

// 1 or 2: the tuned-map parameter nu of the corresponding example.
ParameterProblem builtin_problem(int example);
ParameterProblem quadratic_smoke_problem();

// Newton iteration with a central-difference Jacobian. Throws ConvergenceError.
ParameterSolution solve_parameter(const ParameterProblem& p);

// Significant digits shared by `x` and the printed decimal `printed`.
int matching_digits(Real x, const std::string& printed);

struct RefinedParameters {
    std::string family;
    std::vector<std::string> unknowns;
    std::vector<Complex> seeds;
    std::vector<Complex> refined;
    std::vector<std::string> conditions;
    Real residual_at_seeds = 0;
    Real residual = 0;
    Real deviation = 0;  // max |refined - seed| over the map constants
    bool consistent = false;
    std::vector<NewtonStep> trace;
};

// Polish the printed constants of "ex1.g" or "ex2.g" by Newton on the
// critical-orbit system. The seeds are never overwritten; an excessive
// deviation is reported through `consistent`.
RefinedParameters refine_parameters(const std::string& family_id, const std::vector<Real>& seeds,
                                    Real deviation_tol = 1e-10L);

}  // namespace mcd::num
