#pragma once

// Exact univariate polynomials over Q: characteristic polynomials of integer
// matrices and Sturm-sequence root isolation.

#include <vector>

#include "mcd/pullback.hpp"

namespace mcd {

using QPoly = std::vector<Rational>;  // ascending coefficients, trimmed

void trim(QPoly& p);
int degree(const QPoly& p);
Rational eval(const QPoly& p, const Rational& x);
QPoly derivative(const QPoly& p);
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly gcd(QPoly a, QPoly b);
QPoly squarefree_part(const QPoly& p);

// det(xI - A) by Faddeev-LeVerrier; exact for integer A.
QPoly characteristic_polynomial(const std::vector<std::vector<BigInt>>& a);

class SturmChain {
public:
    explicit SturmChain(const QPoly& squarefree);
    int variations(const Rational& x) const;
    int variations_at_plus_infinity() const;
    // Number of distinct real roots in (a, b].
    int count(const Rational& a, const Rational& b) const;
    int count_above(const Rational& a) const;  // in (a, +inf)

private:
    std::vector<QPoly> seq_;
};

// Largest real root of p inside (lo, hi], bisected to width <= tol.
// Returns false when p has no root there.
bool largest_real_root(const QPoly& p, Rational lo, Rational hi, const Rational& tol, Rational& root);

}  // namespace mcd
