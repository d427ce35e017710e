#include "random_system.hpp"

#include <map>
#include <string>

namespace mcd::testing {

CurveSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& opt) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    CurveSystem s;
    s.degree = uniform(2, opt.max_degree);
    const int n = uniform(1, opt.max_curves);

    std::vector<int> parent(n + 1, -1);
    std::vector<int> valence(n + 1, 0);
    for (int k = 1; k <= n; ++k) {
        parent[k] = uniform(0, k - 1);
        ++valence[k];
        ++valence[parent[k]];
    }
    for (int k = 0; k <= n; ++k) s.pieces.push_back({"P" + std::to_string(k), {}, {}, "P" + std::to_string(k)});
    for (int k = 1; k <= n; ++k) {
        std::string id = "c" + std::to_string(k);
        s.curves.push_back({id, "P" + std::to_string(parent[k]), "P" + std::to_string(k), std::nullopt});
        s.pieces[parent[k]].boundary.push_back(id);
        s.pieces[k].boundary.push_back(id);
    }
    int next_point = 1;
    for (int k = 0; k <= n; ++k) {
        int count = valence[k] <= 1 ? 2 : 1;
        for (int j = 0; j < count; ++j) {
            std::string id = "m" + std::to_string(next_point++);
            s.points.push_back({id, id, uniform(0, 3) == 0, false});
            s.pieces[k].points.push_back(id);
        }
    }

    std::map<std::string, int> incoming;
    for (const auto& c : s.curves) {
        int len = uniform(1, opt.max_entries);
        auto& w = s.words[c.id];
        for (int j = 0; j < len; ++j) {
            PullbackEntry e;
            e.target = s.curves[uniform(0, n - 1)].id;
            e.degree = uniform(1, s.degree);
            e.orientation = uniform(0, 1) ? Orientation::Same : Orientation::Reversed;
            incoming[e.target] += e.degree;
            w.push_back(e);
        }
    }
    bool closes = true;
    for (const auto& c : s.curves)
        if (incoming[c.id] > s.degree) closes = false;
    if (closes) {
        std::map<std::string, std::vector<InessentialEntry>> table;
        for (const auto& c : s.curves) {
            auto& v = table[c.id];
            int rest = s.degree - incoming[c.id];
            if (rest > 0) v.push_back({InessentialKind::Trivial, std::nullopt, rest});
        }
        s.inessential = std::move(table);
    }
    return s;
}

}  // namespace mcd::testing
