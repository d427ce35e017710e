#include "oracles.hpp"

#include <functional>

namespace mcd::testing {

Graph::Graph(const CurveSystem& s) : out(s.curves.size()) {
    for (std::size_t i = 0; i < s.curves.size(); ++i)
        for (const auto& e : s.word(s.curves[i].id)) out[i].push_back(s.curve_index(e.target));
}

std::vector<std::vector<BigInt>> kappa_table(const Graph& g, int depth) {
    std::vector<std::vector<BigInt>> rows;
    std::vector<BigInt> w(g.out.size(), 1);
    for (int k = 0; k < depth; ++k) {
        std::vector<BigInt> next(w.size(), 0);
        for (std::size_t v = 0; v < w.size(); ++v)
            for (int t : g.out[v]) next[v] += w[t];
        w = next;
        rows.push_back(w);
    }
    return rows;
}

std::string brute_growth(const std::vector<std::vector<BigInt>>& table, int v) {
    if (table[63][v] != table[31][v]) return "Coiling";
    if (table[63][v] == 1) return "Const1";
    return "Bounded(" + table[63][v].str() + ")";
}

int simple_cycles_through(const Graph& g, int v) {
    int count = 0;
    std::vector<char> on(g.out.size(), 0);
    std::function<void(int)> dfs = [&](int u) {
        for (int t : g.out[u]) {
            if (t == v) {
                ++count;
            } else if (!on[t]) {
                on[t] = 1;
                dfs(t);
                on[t] = 0;
            }
        }
    };
    on[v] = 1;
    dfs(v);
    return count;
}

}  // namespace mcd::testing
