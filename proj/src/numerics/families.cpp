#include "mcd/numerics/families.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mcd/error.hpp"

namespace mcd::num {

namespace {

const Complex I(0, 1);

Poly lin(const Complex& r) { return Poly({-r, Complex(1)}); }

RationalMap ex1_R() { return {Poly({0, 0, Complex(27) / Real(4), Complex(-27) / Real(4)}), Poly({1})}; }

RationalMap ex2_R() { return {Poly({0, 0, 2}), Poly({1, 0, 0, 0, 1})}; }

Complex ex1_mu(const Complex& nu) { return (Real(1) + nu + nu * nu) / (Real(1) + nu); }

RationalMap ex1_g0(const Complex& nu) {
    Complex mu = ex1_mu(nu);
    Poly n = (Poly({0, 0, 1}) * lin(mu)).scaled((Real(1) + nu) / nu) + Poly({nu});
    return {n, Poly({1})};
}

RationalMap ex2_g0(const Complex& nu) {
    Poly n({-nu * nu, 0, 1});
    Poly d({-nu, 0, -(Real(2) * nu * nu - Real(2) * nu - Real(1)), 0, nu * (nu - Real(1))});
    return {n, d};
}

Complex ex1_q(const Complex& a, const Complex& b, const Complex& c, const Complex& d) {
    return d * (Real(3) * a * b + a * c + b * c) / (a * b * c);
}

RationalMap ex1_g(const Complex& a, const Complex& b, const Complex& c, const Complex& d) {
    Poly n = (lin(a) * lin(b) * pow(lin(c), 3)).scaled(-d);
    Poly den = Poly({d, -ex1_q(a, b, c, d), 1}).scaled(b * c * c * c);
    return {n, den};
}

RationalMap ex2_g(const Complex& a, const Complex& b, const Complex& c) {
    Poly z2m1({-1, 0, 1});
    Poly n = (z2m1 * z2m1 * Poly({-a * a, 0, 1})).scaled(c);
    return {n, Poly({-a * c, 0, b, 0, 1})};
}

ExtPoint pt(const Complex& z) { return {z, false}; }

// sum |c_k| |x|^k, the rounding scale of p(x).
Real abs_eval(const Poly& p, const Complex& x) {
    Real ax = std::abs(x), acc = 0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
}

// Residual of f(x) = y written as N(x) - y D(x), relative to its rounding scale.
Complex orbit_residual(const RationalMap& m, const Complex& x, const Complex& y) {
    Real scale = abs_eval(m.num, x) + std::abs(y) * abs_eval(m.den, x);
    return (m.num(x) - y * m.den(x)) / (scale > 0 ? scale : Real(1));
}

// Residual of f'(x) = 0 written as N'D - ND', relative to its rounding scale.
Complex critical_residual(const RationalMap& m, const Complex& x) {
    Poly dn = m.num.derivative(), dd = m.den.derivative();
    Real scale = abs_eval(dn, x) * abs_eval(m.den, x) + abs_eval(m.num, x) * abs_eval(dd, x);
    return (dn(x) * m.den(x) - m.num(x) * dd(x)) / (scale > 0 ? scale : Real(1));
}

Complex at_infinity_is_infinity(const RationalMap& m) {
    return m.num.degree() > m.den.degree() ? Complex(0) : Complex(1);
}

Real parse(const std::string& s) { return std::stold(s); }

std::vector<Family> make_families() {
    std::vector<Family> fs;

    Family r1;
    r1.id = "ex1.R";
    r1.formula = "R(z) = -27/4 z^2 (z - 1)";
    r1.build = [](const std::vector<Real>&) { return ex1_R(); };
    r1.portrait = [](const std::vector<Real>&) {
        return std::vector<PortraitNode>{{"0", 1, "0", pt(0), {}},
                                         {"2/3", 1, "1", pt(Real(2) / 3), {}},
                                         {"1", 0, "0", pt(1), {}},
                                         {"inf", 2, "inf", ExtPoint::inf(), {}}};
    };
    fs.push_back(r1);

    Family g0;
    g0.id = "ex1.g0";
    g0.formula = "g0(z) = (1+nu)/nu z^2 (z - mu) + nu, mu = (1+nu+nu^2)/(1+nu)";
    g0.params = {{"nu", "-0.1219358974084060", parse("-0.1219358974084060")}};
    g0.build = [](const std::vector<Real>& p) { return ex1_g0(p[0]); };
    g0.portrait = [](const std::vector<Real>& p) {
        Complex nu = p[0], c0 = Real(2) * ex1_mu(nu) / Real(3);
        return std::vector<PortraitNode>{{"inf", 2, "inf", ExtPoint::inf(), {}},
                                         {"0", 1, "nu", pt(0), {}},
                                         {"c0", 1, "1", pt(c0), {}},
                                         {"1", 0, "0", pt(1), {}},
                                         {"nu", 0, "0", pt(nu), {}}};
    };
    g0.automatic = {
        {"g0(0) = nu", [](const std::vector<Real>& p) { return orbit_residual(ex1_g0(p[0]), 0, p[0]); }},
        {"g0(1) = 0", [](const std::vector<Real>& p) { return orbit_residual(ex1_g0(p[0]), 1, 0); }},
        {"g0(nu) = 0", [](const std::vector<Real>& p) { return orbit_residual(ex1_g0(p[0]), p[0], 0); }},
        {"g0'(0) = 0", [](const std::vector<Real>& p) { return critical_residual(ex1_g0(p[0]), 0); }},
        {"g0'(2mu/3) = 0",
         [](const std::vector<Real>& p) {
             return critical_residual(ex1_g0(p[0]), Real(2) * ex1_mu(p[0]) / Real(3));
         }},
    };
    fs.push_back(g0);

    Family g1;
    g1.id = "ex1.g";
    g1.formula = "g(z) = -d (z-a)(z-b)(z-c)^3 / (b c^3 (z^2 - q z + d)), q = d(3ab+ac+bc)/(abc)";
    g1.params = {{"a", "-0.1203582660251960", parse("-0.1203582660251960")},
                 {"b", "0.1369645575161714", parse("0.1369645575161714")},
                 {"c", "0.9975907956140505", parse("0.9975907956140505")},
                 {"d", "1.0001239392656081", parse("1.0001239392656081")}};
    g1.build = [](const std::vector<Real>& p) { return ex1_g(p[0], p[1], p[2], p[3]); };
    g1.portrait = [](const std::vector<Real>& p) {
        return std::vector<PortraitNode>{{"inf", 2, "inf", ExtPoint::inf(), {}},
                                         {"c2", 1, "1", {}, {}},
                                         {"1", 1, "1", pt(1), {}},
                                         {"c", 2, "0", pt(p[2]), {}},
                                         {"0", 1, "a", pt(0), {}},
                                         {"a", 0, "0", pt(p[0]), {}},
                                         {"c1", 1, "a", {}, {}}};
    };
    auto m1 = [](const std::vector<Real>& p) { return ex1_g(p[0], p[1], p[2], p[3]); };
    g1.automatic = {
        {"g(a) = 0", [m1](const std::vector<Real>& p) { return orbit_residual(m1(p), p[0], 0); }},
        {"g(c) = 0", [m1](const std::vector<Real>& p) { return orbit_residual(m1(p), p[2], 0); }},
        {"g(0) = a", [m1](const std::vector<Real>& p) { return orbit_residual(m1(p), 0, p[0]); }},
        {"g'(0) = 0", [m1](const std::vector<Real>& p) { return critical_residual(m1(p), 0); }},
        {"g'(c) = 0", [m1](const std::vector<Real>& p) { return critical_residual(m1(p), p[2]); }},
        {"g(inf) = inf", [m1](const std::vector<Real>& p) { return at_infinity_is_infinity(m1(p)); }},
    };
    fs.push_back(g1);

    Family r2;
    r2.id = "ex2.R";
    r2.formula = "R(z) = 2 z^2 / (z^4 + 1)";
    r2.build = [](const std::vector<Real>&) { return ex2_R(); };
    r2.portrait = [](const std::vector<Real>&) {
        return std::vector<PortraitNode>{{"inf", 1, "0", ExtPoint::inf(), {}}, {"0", 1, "0", pt(0), {}},
                                         {"i", 1, "-1", pt(I), {}},          {"-i", 1, "-1", pt(-I), {}},
                                         {"-1", 1, "1", pt(-1), {}},         {"1", 1, "1", pt(1), {}}};
    };
    fs.push_back(r2);

    Family h0;
    h0.id = "ex2.g0";
    h0.formula = "g0(z) = (z^2 - nu^2) / (nu(nu-1) z^4 - (2nu^2 - 2nu - 1) z^2 - nu)";
    h0.params = {{"nu", "-0.4287815744562657", parse("-0.4287815744562657")}};
    h0.build = [](const std::vector<Real>& p) { return ex2_g0(p[0]); };
    h0.portrait = [](const std::vector<Real>& p) {
        Complex nu = p[0];
        Complex c0 = I * std::sqrt(Complex(Real(1) - Real(2) * nu * nu));
        return std::vector<PortraitNode>{{"inf", 1, "0", ExtPoint::inf(), {}}, {"0", 1, "nu", pt(0), {}},
                                         {"nu", 0, "0", pt(nu), {}},         {"c0", 1, "-1", pt(c0), {}},
                                         {"-c0", 1, "-1", pt(-c0), {}},      {"-1", 1, "1", pt(-1), {}},
                                         {"1", 1, "1", pt(1), {}}};
    };
    auto c0_of = [](Real nu) { return I * std::sqrt(Complex(Real(1) - Real(2) * nu * nu)); };
    h0.automatic = {
        {"g0(0) = nu", [](const std::vector<Real>& p) { return orbit_residual(ex2_g0(p[0]), 0, p[0]); }},
        {"g0(nu) = 0", [](const std::vector<Real>& p) { return orbit_residual(ex2_g0(p[0]), p[0], 0); }},
        {"g0(1) = 1", [](const std::vector<Real>& p) { return orbit_residual(ex2_g0(p[0]), 1, 1); }},
        {"g0(-1) = 1", [](const std::vector<Real>& p) { return orbit_residual(ex2_g0(p[0]), -1, 1); }},
        {"g0(inf) = 0",
         [](const std::vector<Real>& p) {
             auto m = ex2_g0(p[0]);
             return m.num.degree() < m.den.degree() ? Complex(0) : Complex(1);
         }},
        {"g0'(0) = 0", [](const std::vector<Real>& p) { return critical_residual(ex2_g0(p[0]), 0); }},
        {"g0'(1) = 0", [](const std::vector<Real>& p) { return critical_residual(ex2_g0(p[0]), 1); }},
        {"g0'(-1) = 0", [](const std::vector<Real>& p) { return critical_residual(ex2_g0(p[0]), -1); }},
        {"g0'(c0) = 0", [c0_of](const std::vector<Real>& p) { return critical_residual(ex2_g0(p[0]), c0_of(p[0])); }},
        {"g0'(-c0) = 0",
         [c0_of](const std::vector<Real>& p) { return critical_residual(ex2_g0(p[0]), -c0_of(p[0])); }},
    };
    fs.push_back(h0);

    Family g2;
    g2.id = "ex2.g";
    g2.formula = "g(z) = c (z^2-1)^2 (z^2-a^2) / (z^4 + b z^2 - a c)";
    g2.params = {{"a", "0.1266022073620638", parse("0.1266022073620638")},
                 {"b", "-0.0469758128977771", parse("-0.0469758128977771")},
                 {"c", "-0.0327926126839635", parse("-0.0327926126839635")}};
    g2.build = [](const std::vector<Real>& p) { return ex2_g(p[0], p[1], p[2]); };
    // "c+" and "c-" are the critical points written as the pair +-c in the portrait.
    g2.portrait = [](const std::vector<Real>& p) {
        return std::vector<PortraitNode>{{"inf", 1, "inf", ExtPoint::inf(), {}},
                                         {"c+", 1, "-c1", {}, {}},
                                         {"c-", 1, "-c1", {}, std::string("c+")},
                                         {"-c1", 1, "c1", {}, std::string("c1")},
                                         {"c1", 1, "c1", {}, {}},
                                         {"1", 1, "0", pt(1), {}},
                                         {"-1", 1, "0", pt(-1), {}},
                                         {"0", 1, "a", pt(0), {}},
                                         {"a", 0, "0", pt(p[0]), {}},
                                         {"c2+", 1, "a", {}, {}},
                                         {"c2-", 1, "a", {}, std::string("c2+")}};
    };
    auto m2 = [](const std::vector<Real>& p) { return ex2_g(p[0], p[1], p[2]); };
    g2.automatic = {
        {"g(a) = 0", [m2](const std::vector<Real>& p) { return orbit_residual(m2(p), p[0], 0); }},
        {"g(1) = 0", [m2](const std::vector<Real>& p) { return orbit_residual(m2(p), 1, 0); }},
        {"g(-1) = 0", [m2](const std::vector<Real>& p) { return orbit_residual(m2(p), -1, 0); }},
        {"g'(1) = 0", [m2](const std::vector<Real>& p) { return critical_residual(m2(p), 1); }},
        {"g'(-1) = 0", [m2](const std::vector<Real>& p) { return critical_residual(m2(p), -1); }},
        {"g(0) = a", [m2](const std::vector<Real>& p) { return orbit_residual(m2(p), 0, p[0]); }},
        {"g'(0) = 0", [m2](const std::vector<Real>& p) { return critical_residual(m2(p), 0); }},
        {"g(inf) = inf", [m2](const std::vector<Real>& p) { return at_infinity_is_infinity(m2(p)); }},
    };
    fs.push_back(g2);
    return fs;
}

const std::vector<Family>& families() {
    static const std::vector<Family> fs = make_families();
    return fs;
}

Real norm(const std::vector<Complex>& v) {
    Real s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Jacobian by central differences of order 2 or 4.
Mat jacobian(const std::function<std::vector<Complex>(const std::vector<Complex>&)>& f,
             const std::vector<Complex>& x, std::size_t rows, Real rel_h, bool five_point) {
    Mat j(rows, x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        Real h = rel_h * std::max<Real>(1, std::abs(x[k]));
        auto at = [&](Real s) {
            auto y = x;
            y[k] += s * h;
            return f(y);
        };
        auto p1 = at(1), m1 = at(-1);
        if (five_point) {
            auto p2 = at(2), m2 = at(-2);
            for (std::size_t r = 0; r < rows; ++r)
                j(r, k) = (-p2[r] + Real(8) * p1[r] - Real(8) * m1[r] + m2[r]) / (Real(12) * h);
        } else {
            for (std::size_t r = 0; r < rows; ++r) j(r, k) = (p1[r] - m1[r]) / (Real(2) * h);
        }
    }
    return j;
}

std::vector<Complex> newton_step(const Mat& j, const std::vector<Complex>& r) {
    Vec rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs(i) = r[i];
    Vec dx = j.completeOrthogonalDecomposition().solve(rhs);
    std::vector<Complex> out(dx.size());
    for (Eigen::Index i = 0; i < dx.size(); ++i) out[i] = dx(i);
    return out;
}

struct NewtonResult {
    std::vector<Complex> x;
    std::vector<NewtonStep> trace;
    Real residual = 0;
    bool converged = false;
};

NewtonResult newton(const std::function<std::vector<Complex>(const std::vector<Complex>&)>& f,
                    std::vector<Complex> x, Real tol, int max_iter, Real rel_h, bool five_point) {
    NewtonResult out;
    for (int it = 0; it <= max_iter; ++it) {
        auto r = f(x);
        NewtonStep st;
        st.iteration = it;
        st.x = x;
        st.residual = norm(r);
        if (!std::isfinite(static_cast<double>(st.residual))) {
            out.trace.push_back(st);
            break;
        }
        if (it == max_iter) {
            out.trace.push_back(st);
            break;
        }
        auto dx = newton_step(jacobian(f, x, r.size(), rel_h, five_point), r);
        st.step = norm(dx);
        out.trace.push_back(st);
        Real scale = std::max<Real>(1, norm(x));
        // Stop once the residual is below tolerance and the correction is at the rounding floor.
        if (st.residual < tol && st.step <= 1e-15L * scale) break;
        if (it > 0 && st.residual < tol && st.step >= out.trace[it - 1].step) break;
        for (std::size_t k = 0; k < x.size(); ++k) x[k] -= dx[k];
    }
    out.x = out.trace.back().x;
    out.residual = out.trace.back().residual;
    out.converged = out.residual < tol;
    return out;
}

std::vector<std::string> trace_lines(const std::vector<NewtonStep>& t) {
    std::vector<std::string> lines;
    for (const auto& s : t) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "iter %d residual %.3Le step %.3Le", s.iteration, s.residual, s.step);
        lines.push_back(buf);
    }
    return lines;
}

}  // namespace

std::vector<Real> Family::defaults() const {
    std::vector<Real> v;
    for (const auto& p : params) v.push_back(p.value);
    return v;
}

const std::vector<std::string>& family_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& f : families()) v.push_back(f.id);
        return v;
    }();
    return ids;
}

const Family& family(const std::string& id) {
    for (const auto& f : families())
        if (f.id == id) return f;
    throw ValidationError("unknown family '" + id + "'");
}

std::vector<Real> ParameterSolution::error_ratios() const {
    std::vector<Real> out;
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        Real e0 = 0, e1 = 0;
        for (std::size_t i = 0; i < root.size(); ++i) {
            e0 = std::max(e0, std::abs(trace[k].x[i] - root[i]));
            e1 = std::max(e1, std::abs(trace[k + 1].x[i] - root[i]));
        }
        if (e0 > 1e-7L && e1 > 0) out.push_back(e1 / (e0 * e0));
    }
    return out;
}

ParameterProblem builtin_problem(int example) {
    ParameterProblem p;
    p.unknowns = {"nu"};
    p.required_digits = 13;
    if (example == 1) {
        p.name = "ex1.g0: g0(2mu/3) = 1";
        p.family = "ex1.g0";
        p.seeds = {Complex(-0.12L)};
        p.target = "-0.1219358974084060";
        p.residual = [](const std::vector<Complex>& x) {
            auto m = ex1_g0(x[0]);
            Complex c0 = Real(2) * ex1_mu(x[0]) / Real(3);
            return std::vector<Complex>{m.num(c0) - Real(1)};
        };
    } else if (example == 2) {
        p.name = "ex2.g0: g0(i sqrt(1 - 2 nu^2)) = -1";
        p.family = "ex2.g0";
        p.seeds = {Complex(-0.43L)};
        p.target = "-0.4287815744562657";
        p.residual = [](const std::vector<Complex>& x) {
            auto m = ex2_g0(x[0]);
            Complex c0 = I * std::sqrt(Real(1) - Real(2) * x[0] * x[0]);
            return std::vector<Complex>{m.num(c0) / m.den(c0) + Real(1)};
        };
    } else {
        throw ValidationError("example must be 1 or 2");
    }
    return p;
}

ParameterProblem quadratic_smoke_problem() {
    ParameterProblem p;
    p.name = "z^2 - 1 = 0";
    p.unknowns = {"z"};
    p.seeds = {Complex(1.5L)};
    p.residual = [](const std::vector<Complex>& x) { return std::vector<Complex>{x[0] * x[0] - Real(1)}; };
    return p;
}

int matching_digits(Real x, const std::string& printed) {
    std::string s = printed;
    bool neg = !s.empty() && s[0] == '-';
    if (neg || (!s.empty() && s[0] == '+')) s.erase(0, 1);
    if ((x < 0) != neg) return 0;
    // Significant digits and decimal exponent of the printed value.
    std::string digits;
    int point = -1, first = -1, pos = 0;
    for (char ch : s) {
        if (ch == '.') {
            point = pos;
            continue;
        }
        if (ch < '0' || ch > '9') break;
        if (first < 0 && ch != '0') first = pos;
        if (first >= 0) digits.push_back(ch);
        ++pos;
    }
    if (digits.empty()) return 0;
    if (point < 0) point = pos;
    int exp_printed = point - first - 1;

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.30Le", std::fabs(x));
    std::string m(buf);
    auto epos = m.find('e');
    int exp_x = std::stoi(m.substr(epos + 1));
    std::string xd;
    for (std::size_t i = 0; i < epos; ++i)
        if (m[i] != '.') xd.push_back(m[i]);
    if (exp_x != exp_printed) return 0;
    int n = 0;
    while (n < static_cast<int>(digits.size()) && n < static_cast<int>(xd.size()) && digits[n] == xd[n]) ++n;
    return n;
}

ParameterSolution solve_parameter(const ParameterProblem& p) {
    auto r = newton(p.residual, p.seeds, p.tolerance, p.max_iterations, 5e-7L, false);
    if (!r.converged) throw ConvergenceError("Newton iteration for " + p.name + " did not converge", trace_lines(r.trace));
    ParameterSolution s;
    s.root = r.x;
    s.trace = r.trace;
    s.residual = r.residual;
    if (p.target) {
        s.target_digits = p.required_digits;
        s.digits = matching_digits(s.root.front().real(), *p.target);
        if (std::abs(s.root.front().imag()) > 1e-12L || s.digits < p.required_digits) {
            auto lines = trace_lines(r.trace);
            lines.push_back("root agrees with " + *p.target + " to " + std::to_string(s.digits) + " digits");
            throw ConvergenceError("Newton iteration for " + p.name + " converged to the wrong root", lines);
        }
    }
    return s;
}

namespace {

// Critical points named in the expected portrait, read off the seed map.
std::map<std::string, Complex> named_points(const Family& f, const std::vector<Real>& seeds) {
    RationalMap m = f.build(seeds);
    for (Real tol : {1e-8L, 1e-6L, 1e-4L, 1e-3L}) {
        auto pcf = verify_pcf(m, 64, tol);
        auto match = match_portrait(m, pcf.portrait, f.portrait(seeds), tol, std::max<Real>(1e-7L, 10 * tol));
        if (!match.ok) continue;
        std::map<std::string, Complex> out;
        for (const auto& [name, z] : match.assignment)
            if (!z.infinite) out[name] = z.z;
        return out;
    }
    throw ConvergenceError("could not identify the critical portrait of " + f.id + " at the seeds", {});
}

}  // namespace

RefinedParameters refine_parameters(const std::string& family_id, const std::vector<Real>& seeds,
                                    Real deviation_tol) {
    const Family& f = family(family_id);
    if (seeds.size() != f.params.size()) throw ValidationError("wrong number of seeds for " + family_id);
    auto named = named_points(f, seeds);
    RefinedParameters out;
    out.family = family_id;
    std::function<std::vector<Complex>(const std::vector<Complex>&)> residual;
    std::vector<Complex> x0;
    Real rel_h = 1e-6L;
    for (Real s : seeds) x0.push_back(s);

    if (family_id == "ex1.g") {
        out.unknowns = {"a", "b", "c", "d", "c1", "c2"};
        out.conditions = {"g(1) = 1", "g'(1) = 0", "g'(c1) = 0", "g(c1) = a", "g'(c2) = 0", "g(c2) = 1"};
        x0.push_back(named.at("c1"));
        x0.push_back(named.at("c2"));
        // The poles sit about 1e-4 from the fixed point 1 and 1 - q + d is of order 1e-7.
        rel_h = 1e-10L;
        residual = [](const std::vector<Complex>& x) {
            auto m = ex1_g(x[0], x[1], x[2], x[3]);
            return std::vector<Complex>{orbit_residual(m, 1, 1),         critical_residual(m, 1),
                                        critical_residual(m, x[4]),      orbit_residual(m, x[4], x[0]),
                                        critical_residual(m, x[5]),      orbit_residual(m, x[5], 1)};
        };
    } else if (family_id == "ex2.g") {
        out.unknowns = {"a", "b", "c", "c+", "c1", "c2+"};
        out.conditions = {"g'(c+) = 0", "g(c+) = -c1", "g'(c1) = 0", "g(c1) = c1", "g'(c2+) = 0", "g(c2+) = a"};
        x0.push_back(named.at("c+"));
        x0.push_back(named.at("c1"));
        x0.push_back(named.at("c2+"));
        residual = [](const std::vector<Complex>& x) {
            auto m = ex2_g(x[0], x[1], x[2]);
            return std::vector<Complex>{critical_residual(m, x[3]), orbit_residual(m, x[3], -x[4]),
                                        critical_residual(m, x[4]), orbit_residual(m, x[4], x[4]),
                                        critical_residual(m, x[5]), orbit_residual(m, x[5], x[0])};
        };
    } else {
        throw ValidationError("refine_parameters supports ex1.g and ex2.g");
    }
    out.seeds = x0;
    out.residual_at_seeds = norm(residual(x0));
    auto r = newton(residual, x0, 1e-14L, 40, rel_h, true);
    out.refined = r.x;
    out.trace = r.trace;
    out.residual = r.residual;
    for (std::size_t k = 0; k < seeds.size(); ++k)
        out.deviation = std::max(out.deviation, std::abs(out.refined[k] - Complex(seeds[k])));
    out.consistent = out.deviation <= deviation_tol;
    return out;
}

}  // namespace mcd::num
