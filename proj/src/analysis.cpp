#include "mcd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>

#include "mcd/charpoly.hpp"
#include "mcd/error.hpp"

namespace mcd {

namespace {

constexpr std::size_t kExactLimit = 12;

using Adjacency = std::vector<std::vector<int>>;

Adjacency support(const ThurstonMatrix& m) {
    Adjacency adj(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m.exact[i][j] != 0) adj[i].push_back(static_cast<int>(j));
    return adj;
}

Adjacency support(const CountingMatrix& b) {
    Adjacency adj(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b.b[i][j]) adj[i].push_back(static_cast<int>(j));
    return adj;
}

// Kosaraju, iterative. Components ordered by their smallest vertex.
std::vector<std::vector<int>> scc(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    Adjacency radj(n);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) radj[v].push_back(u);

    std::vector<int> order;
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [u, k] = stack.back();
            if (k < adj[u].size()) {
                int v = adj[u][k++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{*it};
        comp[*it] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            out[id].push_back(u);
            for (int v : radj[u])
                if (comp[v] < 0) {
                    comp[v] = id;
                    stack.push_back(v);
                }
        }
    }
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

bool component_cyclic(const Adjacency& adj, const std::vector<int>& comp) {
    if (comp.size() > 1) return true;
    int u = comp.front();
    return std::find(adj[u].begin(), adj[u].end(), u) != adj[u].end();
}

// Shifted power iteration on an irreducible block with Collatz-Wielandt bounds.
double block_power(const std::vector<std::vector<long double>>& a, std::vector<std::string>& trace) {
    const std::size_t n = a.size();
    if (n == 1) return static_cast<double>(a[0][0]);
    std::vector<long double> x(n, 1.0L), y(n);
    long double lo = 0, hi = 0;
    const int max_iter = 200000;
    for (int it = 1; it <= max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            long double s = x[i];
            for (std::size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
            y[i] = s;
        }
        lo = std::numeric_limits<long double>::infinity();
        hi = -lo;
        long double top = 0;
        for (std::size_t i = 0; i < n; ++i) {
            long double r = y[i] / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            top = std::max(top, y[i]);
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
        if (it % 1000 == 0 || it <= 3) {
            std::ostringstream os;
            os.precision(17);
            os << "iter " << it << ": bracket [" << static_cast<double>(lo - 1) << ", " << static_cast<double>(hi - 1)
               << "]";
            trace.push_back(os.str());
        }
        if (hi - lo <= 1e-13L * std::max<long double>(1, hi)) return static_cast<double>((lo + hi) / 2 - 1);
    }
    throw ConvergenceError("power iteration did not converge", trace);
}

BigInt lcm_of_denominators(const ThurstonMatrix& m) {
    BigInt l = 1;
    for (const auto& row : m.exact)
        for (const auto& v : row) {
            BigInt d = boost::multiprecision::denominator(v);
            l = l / boost::multiprecision::gcd(l, d) * d;
        }
    return l;
}

std::vector<std::vector<BigInt>> scaled_integer(const ThurstonMatrix& m, const BigInt& l) {
    std::vector<std::vector<BigInt>> a(m.size(), std::vector<BigInt>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            Rational v = m.exact[i][j] * Rational(l);
            a[i][j] = boost::multiprecision::numerator(v);
        }
    return a;
}

BigInt max_row_sum(const std::vector<std::vector<BigInt>>& a) {
    BigInt best = 0;
    for (const auto& row : a) best = std::max(best, std::accumulate(row.begin(), row.end(), BigInt(0)));
    return best;
}

double exact_perron(const ThurstonMatrix& m) {
    BigInt l = lcm_of_denominators(m);
    auto a = scaled_integer(m, l);
    QPoly p = characteristic_polynomial(a);
    Rational root;
    Rational hi(max_row_sum(a) + 1);
    Rational tol = Rational(l) / Rational(BigInt(1000000000000000LL) * 1000);
    if (!largest_real_root(p, Rational(-1), hi, tol, root)) return 0.0;
    return (root / Rational(l)).convert_to<double>();
}

bool exact_at_least_one(const ThurstonMatrix& m) {
    BigInt l = lcm_of_denominators(m);
    auto a = scaled_integer(m, l);
    QPoly q = squarefree_part(characteristic_polynomial(a));
    if (degree(q) < 1) return false;
    Rational x(l);
    if (eval(q, x) == 0) return true;
    return SturmChain(q).count_above(x) > 0;
}

}  // namespace

std::vector<std::vector<int>> strong_components(const CountingMatrix& b) { return scc(support(b)); }

SpectralResult perron_root(const ThurstonMatrix& m) {
    SpectralResult r;
    if (m.size() == 0) return r;
    auto adj = support(m);
    double best = 0.0;
    for (const auto& comp : scc(adj)) {
        if (!component_cyclic(adj, comp)) continue;
        std::vector<std::vector<long double>> block(comp.size(), std::vector<long double>(comp.size()));
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = 0; j < comp.size(); ++j)
                block[i][j] = m.exact[comp[i]][comp[j]].convert_to<long double>();
        best = std::max(best, block_power(block, r.trace));
    }
    r.power_lambda = best;
    r.lambda = best;
    if (m.size() <= kExactLimit) {
        r.exact = exact_perron(m);
        if (std::abs(*r.exact - best) > 1e-9) {
            std::ostringstream os;
            os.precision(17);
            os << "Perron root mismatch: characteristic polynomial gives " << *r.exact
               << ", block power iteration gives " << best;
            throw ConsistencyError(os.str());
        }
        r.lambda = *r.exact;
    }
    return r;
}

double leading_eigenvalue(const ThurstonMatrix& m) { return perron_root(m).lambda; }

bool perron_root_at_least_one(const ThurstonMatrix& m) {
    auto adj = support(m);
    for (const auto& comp : scc(adj)) {
        if (!component_cyclic(adj, comp)) continue;
        ThurstonMatrix block = m.restrict_to(comp);
        if (block.size() <= 4 * kExactLimit) {
            if (exact_at_least_one(block)) return true;
        } else if (leading_eigenvalue(block) >= 1.0 - 1e-12) {
            return true;
        }
    }
    return false;
}

std::vector<Component> irreducible_components(const CurveSystem& sys) {
    auto b = counting_matrix(sys);
    auto m = thurston_matrix(sys);
    auto adj = support(b);
    std::vector<Component> out;
    for (const auto& comp : scc(adj)) {
        Component c;
        for (int i : comp) c.curves.push_back(b.ids[i]);
        c.cyclic = component_cyclic(adj, comp);
        c.lambda = c.cyclic ? leading_eigenvalue(m.restrict_to(comp)) : 0.0;
        out.push_back(c);
    }
    return out;
}

ObstructionResult is_obstruction(const CurveSystem& sys, const std::set<std::string>& subset) {
    auto st = check_stability(sys, subset);
    if (!st.unstable.empty())
        throw ValidationError("curve set is not stable: '" + st.unstable.front() + "' has preimages in it");
    auto m = thurston_matrix(sys);
    std::vector<int> rows;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (subset.count(m.ids[i])) rows.push_back(static_cast<int>(i));
    auto sub = m.restrict_to(rows);
    ObstructionResult r;
    r.lambda = leading_eigenvalue(sub);
    if (std::abs(r.lambda - 1.0) < 1e-6) {
        r.exact_boundary_test = true;
        r.obstruction = perron_root_at_least_one(sub);
    } else {
        r.obstruction = r.lambda >= 1.0 - 1e-9;
    }
    return r;
}

ObstructionResult is_obstruction(const CurveSystem& sys) {
    auto ids = sys.curve_ids();
    return is_obstruction(sys, std::set<std::string>(ids.begin(), ids.end()));
}

std::vector<std::string> Cycle::curves() const {
    std::vector<std::string> out;
    for (const auto& e : edges) out.push_back(e.source);
    return out;
}

Orientation Cycle::orientation(const CurveSystem& sys) const {
    Orientation o = Orientation::Same;
    for (const auto& e : edges) o = compose(o, sys.word(e.source).at(e.index).orientation);
    return o;
}

namespace {

// Shortest cycle through s using only edges accepted by `use`.
std::optional<Cycle> shortest_cycle(const CurveSystem& sys, const std::vector<std::vector<EdgeInstance>>& edges,
                                    int s, const std::function<bool(const EdgeInstance&)>& use) {
    const int n = static_cast<int>(edges.size());
    std::vector<int> parent_edge_src(n, -1), parent_edge_idx(n, -1);
    std::vector<char> seen(n, 0);
    std::deque<int> queue;
    std::optional<EdgeInstance> closing;
    for (const auto& e : edges[s]) {
        if (!use(e)) continue;
        if (e.target == s) {
            closing = e;
            break;
        }
        if (!seen[e.target]) {
            seen[e.target] = 1;
            parent_edge_src[e.target] = s;
            parent_edge_idx[e.target] = e.index;
            queue.push_back(e.target);
        }
    }
    while (!closing && !queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& e : edges[u]) {
            if (!use(e)) continue;
            if (e.target == s) {
                closing = e;
                break;
            }
            if (!seen[e.target]) {
                seen[e.target] = 1;
                parent_edge_src[e.target] = u;
                parent_edge_idx[e.target] = e.index;
                queue.push_back(e.target);
            }
        }
    }
    if (!closing) return std::nullopt;
    Cycle c;
    c.edges.push_back({sys.curves[closing->source].id, closing->index, sys.curves[s].id});
    int v = closing->source;
    while (v != s) {
        int u = parent_edge_src[v];
        c.edges.push_back({sys.curves[u].id, parent_edge_idx[v], sys.curves[v].id});
        v = u;
    }
    std::reverse(c.edges.begin(), c.edges.end());
    return c;
}

std::vector<char> reach_mask(const std::vector<std::vector<EdgeInstance>>& edges, const std::vector<int>& starts) {
    std::vector<char> seen(edges.size(), 0);
    std::vector<int> stack;
    for (int s : starts)
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& e : edges[u])
            if (!seen[e.target]) {
                seen[e.target] = 1;
                stack.push_back(e.target);
            }
    }
    return seen;
}

std::vector<char> cyclic_mask(const CurveSystem& sys) {
    auto b = counting_matrix(sys);
    auto adj = support(b);
    std::vector<char> mask(b.size(), 0);
    for (const auto& comp : scc(adj))
        if (component_cyclic(adj, comp))
            for (int v : comp) mask[v] = 1;
    return mask;
}

}  // namespace

std::optional<Cycle> find_levy_cycle(const CurveSystem& sys) {
    auto edges = edge_instances(sys);
    for (std::size_t s = 0; s < edges.size(); ++s) {
        auto c = shortest_cycle(sys, edges, static_cast<int>(s), [](const EdgeInstance& e) { return e.degree == 1; });
        if (c) return c;
    }
    return std::nullopt;
}

std::string GrowthClass::name() const {
    switch (kind) {
        case GrowthKind::Const1: return "Const1";
        case GrowthKind::Bounded: return "Bounded(" + limit.str() + ")";
        case GrowthKind::Coiling: return "Coiling";
    }
    return "?";
}

GrowthClass classify_growth(const CurveSystem& sys, const std::string& curve) {
    int g = sys.curve_index(curve);
    if (g < 0) throw ValidationError("unknown curve '" + curve + "'");
    auto edges = edge_instances(sys);
    const int n = static_cast<int>(edges.size());
    auto cyclic = cyclic_mask(sys);
    auto reach = reach_mask(edges, {g});

    // Graph criterion.
    std::vector<int> on_cycle;
    for (int v = 0; v < n; ++v)
        if (reach[v] && cyclic[v]) on_cycle.push_back(v);
    auto downstream = reach_mask(edges, on_cycle);
    std::optional<int> branching;
    {
        // breadth-first from gamma so the witness is the nearest branching vertex
        std::vector<char> seen(n, 0);
        std::deque<int> queue{g};
        seen[g] = 1;
        while (!queue.empty() && !branching) {
            int u = queue.front();
            queue.pop_front();
            if (downstream[u] && !on_cycle.empty() && edges[u].size() >= 2) branching = u;
            for (const auto& e : edges[u])
                if (!seen[e.target]) {
                    seen[e.target] = 1;
                    queue.push_back(e.target);
                }
        }
    }

    // Independent decision: iterate W_n = B W_{n-1} on the reachable set.
    std::vector<BigInt> w(n, BigInt(1)), next(n);
    int size_r = static_cast<int>(std::count(reach.begin(), reach.end(), 1));
    bool fixpoint = false;
    std::vector<BigInt> history;
    for (int step = 1; step <= size_r + 1; ++step) {
        for (int v = 0; v < n; ++v) {
            if (!reach[v]) continue;
            BigInt s = 0;
            for (const auto& e : edges[v]) s += w[e.target];
            next[v] = s;
        }
        bool same = true;
        for (int v = 0; v < n; ++v)
            if (reach[v] && next[v] != w[v]) same = false;
        for (int v = 0; v < n; ++v)
            if (reach[v]) w[v] = next[v];
        history.push_back(w[g]);
        if (same) {
            fixpoint = true;
            break;
        }
    }

    if (branching.has_value() == fixpoint)
        throw ConsistencyError("growth of '" + curve + "': graph criterion says " +
                               (branching ? "coiling" : "bounded") + " but kappa iteration " +
                               (fixpoint ? "reached a fixpoint" : "did not stabilise"));

    GrowthClass gc;
    if (branching) {
        gc.kind = GrowthKind::Coiling;
        gc.branching = sys.curves[*branching].id;
        for (int c : on_cycle) {
            auto r = reach_mask(edges, {c});
            if (!r[*branching]) continue;
            gc.feeding_cycle = shortest_cycle(sys, edges, c, [](const EdgeInstance&) { return true; });
            break;
        }
        gc.limit = 0;
        gc.stabilization_depth = 0;
        return gc;
    }
    gc.limit = history.back();
    gc.kind = gc.limit == 1 ? GrowthKind::Const1 : GrowthKind::Bounded;
    for (std::size_t i = 0; i < history.size(); ++i)
        if (history[i] == gc.limit) {
            gc.stabilization_depth = static_cast<int>(i) + 1;
            break;
        }
    return gc;
}

bool is_periodic(const CurveSystem& sys, const std::string& curve) {
    int i = sys.curve_index(curve);
    if (i < 0) throw ValidationError("unknown curve '" + curve + "'");
    return cyclic_mask(sys)[i] != 0;
}

std::set<std::string> periodic_curves(const CurveSystem& sys) {
    auto mask = cyclic_mask(sys);
    std::set<std::string> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.insert(sys.curves[i].id);
    return out;
}

std::set<std::string> reachable_from(const CurveSystem& sys, const std::string& curve) {
    auto edges = edge_instances(sys);
    int g = sys.curve_index(curve);
    if (g < 0) throw ValidationError("unknown curve '" + curve + "'");
    auto mask = reach_mask(edges, {g});
    std::set<std::string> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.insert(sys.curves[i].id);
    return out;
}

std::set<std::string> generated_multicurve(const CurveSystem& sys, const std::string& gamma) {
    if (!is_periodic(sys, gamma)) throw ValidationError("curve '" + gamma + "' is not periodic");
    auto edges = edge_instances(sys);
    const int n = static_cast<int>(edges.size());
    std::vector<std::vector<int>> rev(n);
    for (const auto& row : edges)
        for (const auto& e : row) rev[e.target].push_back(e.source);
    int g = sys.curve_index(gamma);
    std::vector<char> seen(n, 0);
    std::vector<int> stack{g};
    seen[g] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : rev[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    std::set<std::string> out;
    for (int i = 0; i < n; ++i)
        if (seen[i]) out.insert(sys.curves[i].id);
    return out;
}

std::vector<Cycle> cycles_through(const CurveSystem& sys, const std::string& curve, std::size_t limit) {
    int g = sys.curve_index(curve);
    if (g < 0) throw ValidationError("unknown curve '" + curve + "'");
    auto edges = edge_instances(sys);
    std::vector<Cycle> out;
    std::vector<char> on_path(edges.size(), 0);
    std::vector<CycleEdge> path;
    std::function<void(int)> dfs = [&](int u) {
        for (const auto& e : edges[u]) {
            if (out.size() >= limit) return;
            if (e.target == g) {
                Cycle c;
                c.edges = path;
                c.edges.push_back({sys.curves[u].id, e.index, sys.curves[g].id});
                out.push_back(std::move(c));
            } else if (!on_path[e.target]) {
                on_path[e.target] = 1;
                path.push_back({sys.curves[u].id, e.index, sys.curves[e.target].id});
                dfs(e.target);
                path.pop_back();
                on_path[e.target] = 0;
            }
        }
    };
    on_path[g] = 1;
    dfs(g);
    return out;
}

bool has_unique_cycle(const CurveSystem& sys) {
    for (const auto& c : sys.curves) {
        auto cycles = cycles_through(sys, c.id, 2);
        if (cycles.size() > 1) return false;
    }
    return true;
}

std::optional<std::set<std::string>> find_cantor_submulticurve(const CurveSystem& sys) {
    auto edges = edge_instances(sys);
    auto b = counting_matrix(sys);
    auto adj = support(b);
    std::optional<std::string> best;
    for (const auto& comp : scc(adj)) {
        if (!component_cyclic(adj, comp)) continue;
        std::set<int> inside(comp.begin(), comp.end());
        std::size_t internal = 0;
        for (int v : comp)
            for (const auto& e : edges[v])
                if (inside.count(e.target)) ++internal;
        if (internal <= comp.size()) continue;  // a simple cycle with multiplicity one
        for (int v : comp)
            if (!best || sys.curves[v].id < *best) best = sys.curves[v].id;
    }
    if (!best) return std::nullopt;
    auto lambda = generated_multicurve(sys, *best);

    // Certify the claim rather than trusting the construction.
    CurveSystem sub = sub_system(sys, lambda);
    for (const auto& c : lambda)
        if (classify_growth(sub, c).kind != GrowthKind::Coiling)
            throw ConsistencyError("Cantor candidate generated by '" + *best + "' has non-coiling member '" + c + "'");
    return lambda;
}

int shortest_walk(const CurveSystem& sys, const std::string& from, const std::string& to) {
    auto edges = edge_instances(sys);
    int s = sys.curve_index(from), t = sys.curve_index(to);
    if (s < 0 || t < 0) throw ValidationError("unknown curve in shortest_walk");
    std::vector<int> dist(edges.size(), -1);
    std::deque<int> queue;
    for (const auto& e : edges[s])
        if (dist[e.target] < 0) {
            dist[e.target] = 1;
            queue.push_back(e.target);
        }
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& e : edges[u])
            if (dist[e.target] < 0) {
                dist[e.target] = dist[u] + 1;
                queue.push_back(e.target);
            }
    }
    return dist[t];
}

}  // namespace mcd
