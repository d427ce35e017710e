#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mcd::num {

using Real = long double;
using Complex = std::complex<Real>;

struct Poly {
    std::vector<Complex> c;  // ascending powers

    Poly() = default;
    Poly(std::initializer_list<Complex> coeffs) : c(coeffs) {}
    explicit Poly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {}

    int degree() const;  // -1 for the zero polynomial
    Complex lead() const;
    Complex operator()(const Complex& z) const;
    Poly derivative() const;
    Poly scaled(const Complex& s) const;
    // Drop leading coefficients below rel * max|c_k|.
    Poly trimmed(Real rel = 0) const;

    static Poly monomial(const Complex& a, int k);
    static Poly from_roots(const std::vector<Complex>& roots, const Complex& lead = 1);
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly pow(const Poly& a, int k);

// Evaluate the reversed polynomial w^deg * p(1/w).
Complex eval_reversed(const Poly& p, const Complex& w, int deg);

struct RootOptions {
    std::uint64_t seed = 20240917;
    int max_iterations = 800;
    Real step_tol = 1e-17L;
};

// All roots of p (with repetition) by Aberth-Ehrlich iteration from a
// randomly perturbed ring. Throws ConvergenceError with residuals on failure.
std::vector<Complex> aberth_roots(const Poly& p, const RootOptions& opt = {});

struct RootCluster {
    Complex z;
    int multiplicity = 1;
};

// Group roots closer than rel * max(1, |z|), then polish each centre by
// Newton on the (m-1)-th derivative.
std::vector<RootCluster> cluster_roots(const Poly& p, const std::vector<Complex>& roots, Real rel = 1e-5L);

}  // namespace mcd::num
