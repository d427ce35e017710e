#include "mcd/numerics/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mcd/error.hpp"

namespace mcd::num {

int Poly::degree() const {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (c[k] != Complex(0)) return k;
    return -1;
}

Complex Poly::lead() const {
    int d = degree();
    return d < 0 ? Complex(0) : c[d];
}

Complex Poly::operator()(const Complex& z) const {
    Complex acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Poly Poly::derivative() const {
    std::vector<Complex> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<Real>(k));
    return Poly(d);
}

Poly Poly::scaled(const Complex& s) const {
    Poly p = *this;
    for (auto& x : p.c) x *= s;
    return p;
}

Poly Poly::trimmed(Real rel) const {
    Real big = 0;
    for (const auto& x : c) big = std::max(big, std::abs(x));
    Poly p = *this;
    while (!p.c.empty() && std::abs(p.c.back()) <= rel * big) p.c.pop_back();
    return p;
}

Poly Poly::monomial(const Complex& a, int k) {
    std::vector<Complex> v(k + 1, Complex(0));
    v[k] = a;
    return Poly(v);
}

Poly Poly::from_roots(const std::vector<Complex>& roots, const Complex& lead) {
    Poly p({lead});
    for (const auto& r : roots) p = p * Poly({-r, Complex(1)});
    return p;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Complex> v(std::max(a.c.size(), b.c.size()), Complex(0));
    for (std::size_t k = 0; k < a.c.size(); ++k) v[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) v[k] += b.c[k];
    return Poly(v);
}

Poly operator-(const Poly& a, const Poly& b) { return a + b.scaled(-1); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.c.empty() || b.c.empty()) return Poly();
    std::vector<Complex> v(a.c.size() + b.c.size() - 1, Complex(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    return Poly(v);
}

Poly pow(const Poly& a, int k) {
    Poly r({Complex(1)});
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

Complex eval_reversed(const Poly& p, const Complex& w, int deg) {
    // sum_k c_k w^(deg-k), Horner from the constant term upwards.
    Complex acc = 0;
    for (int k = 0; k <= deg; ++k) acc = acc * w + (k < static_cast<int>(p.c.size()) ? p.c[k] : Complex(0));
    return acc;
}

namespace {

Real backward_bound(const Poly& p, const Complex& z) {
    Real az = std::abs(z), acc = 0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * az + std::abs(*it);
    return acc;
}

}  // namespace

std::vector<Complex> aberth_roots(const Poly& p0, const RootOptions& opt) {
    Poly p = p0.trimmed(0);
    const int n = p.degree();
    if (n < 1) return {};
    Poly dp = p.derivative();

    // Zero roots are split off exactly.
    int zeros = 0;
    while (zeros < n && p.c[zeros] == Complex(0)) ++zeros;
    std::vector<Complex> roots(zeros, Complex(0));
    if (zeros == n) return roots;
    Poly q(std::vector<Complex>(p.c.begin() + zeros, p.c.end()));
    Poly dq = q.derivative();
    const int m = q.degree();

    // Ring radius: geometric mean of root moduli from the constant and leading terms.
    Real radius = std::pow(std::abs(q.c[0] / q.lead()), 1.0L / m);
    if (!(radius > 0) || !std::isfinite(static_cast<double>(radius))) radius = 1;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::vector<Complex> z(m);
    const Real pi = std::numbers::pi_v<Real>;
    for (int k = 0; k < m; ++k) {
        Real theta = 2 * pi * (k + 0.5L + static_cast<Real>(jitter(rng))) / m + 0.4L;
        Real r = radius * (1 + 0.1L * static_cast<Real>(jitter(rng)));
        z[k] = std::polar(r, theta);
    }

    bool converged = false;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
        Real worst = 0;
        for (int i = 0; i < m; ++i) {
            Complex pv = q(z[i]);
            if (pv == Complex(0)) continue;
            Complex ratio = pv / dq(z[i]);
            Complex s = 0;
            for (int j = 0; j < m; ++j)
                if (j != i) s += Complex(1) / (z[i] - z[j]);
            Complex w = ratio / (Complex(1) - ratio * s);
            if (!std::isfinite(static_cast<double>(std::abs(w)))) w = ratio;
            z[i] -= w;
            worst = std::max(worst, std::abs(w) / std::max<Real>(1, std::abs(z[i])));
        }
        converged = worst < opt.step_tol;
    }

    std::vector<std::string> bad;
    for (int i = 0; i < m; ++i) {
        Real res = std::abs(q(z[i]));
        if (res > 1e-15L * backward_bound(q, z[i]) && !converged) {
            std::ostringstream os;
            os << "root " << i << " at (" << static_cast<double>(z[i].real()) << "," << static_cast<double>(z[i].imag())
               << ") residual " << static_cast<double>(res);
            bad.push_back(os.str());
        }
    }
    if (!bad.empty()) throw ConvergenceError("Aberth-Ehrlich iteration did not converge", bad);
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<RootCluster> cluster_roots(const Poly& p, const std::vector<Complex>& roots, Real rel) {
    std::vector<RootCluster> out;
    std::vector<char> used(roots.size(), 0);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        used[i] = 1;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - roots[i]) < rel * std::max<Real>(1, std::abs(roots[i]))) {
                used[j] = 1;
                sum += roots[j];
                ++count;
            }
        }
        Complex z = sum / static_cast<Real>(count);
        Poly g = p;
        for (int k = 1; k < count; ++k) g = g.derivative();
        Poly dg = g.derivative();
        for (int it = 0; it < 60; ++it) {
            Complex d = dg(z);
            if (d == Complex(0)) break;
            Complex step = g(z) / d;
            z -= step;
            if (std::abs(step) <= 1e-19L * std::max<Real>(1, std::abs(z))) break;
        }
        out.push_back({z, count});
    }
    return out;
}

}  // namespace mcd::num
