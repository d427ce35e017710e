#include "mcd/numerics/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mcd/error.hpp"

namespace mcd::num {

Real chordal(const ExtPoint& a, const ExtPoint& b) {
    if (a.infinite && b.infinite) return 0;
    if (a.infinite) return 2 / std::sqrt(1 + std::norm(b.z));
    if (b.infinite) return 2 / std::sqrt(1 + std::norm(a.z));
    return 2 * std::abs(a.z - b.z) / std::sqrt((1 + std::norm(a.z)) * (1 + std::norm(b.z)));
}

int RationalMap::degree() const { return std::max(num.degree(), den.degree()); }

ExtPoint RationalMap::operator()(const ExtPoint& p) const {
    const int dn = num.degree(), dd = den.degree();
    if (p.infinite) {
        if (dn > dd) return ExtPoint::inf();
        if (dn < dd) return {Complex(0), false};
        return {num.lead() / den.lead(), false};
    }
    const Complex& z = p.z;
    Complex n, d;
    if (std::abs(z) <= 1) {
        n = num(z);
        d = den(z);
        if (d == Complex(0)) return ExtPoint::inf();
        return {n / d, false};
    }
    // Homogeneous form at w = 1/z: f(z) = z^(dn-dd) * N~(w) / D~(w).
    Complex w = Complex(1) / z;
    n = eval_reversed(num, w, dn);
    d = eval_reversed(den, w, dd);
    if (d == Complex(0)) return ExtPoint::inf();
    Complex r = n / d;
    int e = dn - dd;
    if (e > 0)
        for (int k = 0; k < e; ++k) r *= z;
    else
        for (int k = 0; k < -e; ++k) r *= w;
    if (!std::isfinite(static_cast<double>(std::abs(r)))) return ExtPoint::inf();
    return {r, false};
}

Poly RationalMap::wronskian() const { return num.derivative() * den - num * den.derivative(); }

std::vector<CriticalPoint> critical_points(const RationalMap& m, std::uint64_t seed) {
    const int d = m.degree();
    if (d < 2) throw ValidationError("critical points need degree >= 2");
    Poly w = m.wronskian().trimmed(1e-12L);
    RootOptions opt;
    opt.seed = seed;
    auto roots = aberth_roots(w, opt);
    auto clusters = cluster_roots(w, roots);
    std::vector<CriticalPoint> out;
    int inf_mult = 2 * d - 2 - w.degree();
    if (inf_mult > 0) out.push_back({ExtPoint::inf(), inf_mult});
    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (std::abs(a.z.real() - b.z.real()) > 1e-9L) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    for (const auto& c : clusters) out.push_back({ExtPoint{c.z, false}, c.multiplicity});
    return out;
}

namespace {

std::string show(const ExtPoint& p) {
    if (p.infinite) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(p.z.real());
    if (p.z.imag() != 0) os << (p.z.imag() < 0 ? "" : "+") << static_cast<double>(p.z.imag()) << "i";
    return os.str();
}

// |(f^p)'| along a cycle of finite, non-polar points.
std::optional<Real> cycle_multiplier(const RationalMap& m, const std::vector<ExtPoint>& cycle) {
    const Poly w = m.wronskian();
    Real lam = 1;
    for (const auto& q : cycle) {
        if (q.infinite) return std::nullopt;
        Complex d = m.den(q.z);
        if (std::abs(d) == 0) return std::nullopt;
        lam *= std::abs(w(q.z) / (d * d));
    }
    return lam;
}

}  // namespace

PcfResult verify_pcf(const RationalMap& m, int max_orbit, Real tol, std::uint64_t seed) {
    PcfResult res;
    auto& pt = res.portrait;
    pt.degree = m.degree();
    auto crit = critical_points(m, seed);
    res.pcf = true;
    for (const auto& c : crit) pt.multiplicity_sum += c.multiplicity;
    if (pt.multiplicity_sum != 2 * pt.degree - 2) {
        res.pcf = false;
        res.diagnostics.push_back("critical multiplicities sum to " + std::to_string(pt.multiplicity_sum) +
                                  ", expected " + std::to_string(2 * pt.degree - 2));
    }

    for (const auto& c : crit) {
        CriticalOrbit orbit;
        orbit.critical = c;
        orbit.steps.push_back({c.z, 0});
        bool closed = false;
        for (int k = 1; k <= max_orbit && !closed; ++k) {
            ExtPoint z = m(orbit.steps.back().z);
            std::vector<int> hits;
            Real nearest = 1e9L, hit_dist = 0;
            for (int j = 0; j < k; ++j) {
                Real dist = chordal(z, orbit.steps[j].z);
                nearest = std::min(nearest, dist);
                if (dist < tol) {
                    hits.push_back(j);
                    hit_dist = dist;
                }
            }
            orbit.steps.push_back({z, nearest});
            if (hits.empty()) continue;
            closed = true;
            if (hits.size() > 1) {
                res.pcf = false;
                res.diagnostics.push_back("tolerance collision in the orbit of " + show(c.z) + " at step " +
                                          std::to_string(k));
            }
            orbit.cycle_start = hits.front();
            orbit.cycle_length = k - hits.front();
            orbit.residual = hit_dist;
            // A true landing arrives from a different preimage; a convergent
            // orbit arrives from next to the earlier predecessor.
            int j = hits.front();
            if (j >= 1 && chordal(orbit.steps[k - 1].z, orbit.steps[j - 1].z) < 1e-4L) {
                res.pcf = false;
                res.diagnostics.push_back("orbit of " + show(c.z) + " converges to a cycle instead of landing on it (step " +
                                          std::to_string(k) + ")");
            }
        }
        if (!closed) {
            res.pcf = false;
            res.diagnostics.push_back("orbit of " + show(c.z) + " does not repeat within " + std::to_string(max_orbit) +
                                      " steps");
        }
        pt.max_residual = std::max(pt.max_residual, orbit.residual);
        if (closed) {
            AttractingCycle cyc;
            for (int j = orbit.cycle_start; j < orbit.cycle_start + orbit.cycle_length; ++j)
                cyc.points.push_back(orbit.steps[j].z);
            bool known = false;
            for (const auto& other : pt.cycles)
                for (const auto& q : other.points)
                    if (chordal(q, cyc.points.front()) < tol) known = true;
            if (!known) {
                for (const auto& q : cyc.points)
                    for (const auto& cc : crit)
                        if (chordal(q, cc.z) < tol) cyc.superattracting = true;
                // A convergent orbit also "repeats" within tol; reject cycles
                // that attract without containing a critical point.
                if (!cyc.superattracting) {
                    auto lam = cycle_multiplier(m, cyc.points);
                    if (lam && *lam < 1 - 1e-4L) {
                        res.pcf = false;
                        res.diagnostics.push_back("orbit of " + show(c.z) + " converges to an attracting cycle with |multiplier| " +
                                                  std::to_string(static_cast<double>(*lam)));
                    }
                }
                pt.cycles.push_back(cyc);
            }
        }
        pt.orbits.push_back(std::move(orbit));
    }
    // Only superattracting cycles are attracting for a PCF map.
    std::erase_if(pt.cycles, [](const AttractingCycle& c) { return !c.superattracting; });
    return res;
}

PortraitMatch match_portrait(const RationalMap& m, const CriticalPortrait& portrait,
                             const std::vector<PortraitNode>& expected, Real tol, Real value_tol) {
    (void)m;
    PortraitMatch out;
    struct Node {
        ExtPoint z;
        int mult = 0;
        int image = -1;
    };
    std::vector<Node> nodes;
    auto node_of = [&](const ExtPoint& z) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (chordal(nodes[i].z, z) < tol) return static_cast<int>(i);
        nodes.push_back({z, 0, -1});
        return static_cast<int>(nodes.size()) - 1;
    };
    for (const auto& o : portrait.orbits) {
        int prev = -1;
        for (const auto& s : o.steps) {
            int cur = node_of(s.z);
            if (prev >= 0) {
                if (nodes[prev].image >= 0 && nodes[prev].image != cur) {
                    out.failure = "postcritical graph is not a function at " + show(nodes[prev].z);
                    return out;
                }
                nodes[prev].image = cur;
            }
            prev = cur;
        }
        nodes[node_of(o.critical.z)].mult += o.critical.multiplicity;
    }
    if (nodes.size() != expected.size()) {
        out.failure = "postcritical graph has " + std::to_string(nodes.size()) + " nodes, expected " +
                      std::to_string(expected.size());
        return out;
    }
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < expected.size(); ++i) index[expected[i].name] = static_cast<int>(i);
    for (const auto& e : expected)
        if (!index.count(e.image) || (e.negation_of && !index.count(*e.negation_of))) {
            out.failure = "expected portrait refers to an unknown node from '" + e.name + "'";
            return out;
        }

    const int n = static_cast<int>(expected.size());
    std::vector<int> assign(n, -1);
    std::vector<char> used(n, 0);
    auto consistent = [&](int i) {
        const auto& e = expected[i];
        const auto& v = nodes[assign[i]];
        if (v.mult != e.multiplicity) return false;
        if (e.value && chordal(*e.value, v.z) >= value_tol) return false;
        int img = index[e.image];
        if (assign[img] >= 0 && v.image != assign[img]) return false;
        for (int j = 0; j < n; ++j) {
            if (assign[j] < 0 || j == i) continue;
            if (index[expected[j].image] == i && nodes[assign[j]].image != assign[i]) return false;
            auto neg_ok = [&](int a, int b) {
                const auto& za = nodes[assign[a]].z;
                const auto& zb = nodes[assign[b]].z;
                if (za.infinite || zb.infinite) return za.infinite && zb.infinite;
                return chordal(za, ExtPoint{-zb.z, false}) < value_tol;
            };
            if (expected[j].negation_of && index[*expected[j].negation_of] == i && !neg_ok(j, i)) return false;
            if (e.negation_of && index[*e.negation_of] == j && !neg_ok(i, j)) return false;
        }
        return true;
    };
    std::function<bool(int)> search = [&](int i) {
        if (i == n) return true;
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            assign[i] = v;
            used[v] = 1;
            if (consistent(i) && search(i + 1)) return true;
            used[v] = 0;
            assign[i] = -1;
        }
        return false;
    };
    if (!search(0)) {
        out.failure = "no isomorphism between computed and expected critical portraits";
        return out;
    }
    out.ok = true;
    for (int i = 0; i < n; ++i) out.assignment.push_back({expected[i].name, nodes[assign[i]].z});
    return out;
}

}  // namespace mcd::num
