#include "mcd/pullback.hpp"

#include <algorithm>
#include <limits>

#include "mcd/error.hpp"

namespace mcd {

std::vector<std::vector<double>> ThurstonMatrix::values() const {
    std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) out[i][j] = exact[i][j].convert_to<double>();
    return out;
}

ThurstonMatrix ThurstonMatrix::restrict_to(const std::vector<int>& rows) const {
    ThurstonMatrix m;
    for (int r : rows) m.ids.push_back(ids[r]);
    m.exact.assign(rows.size(), std::vector<Rational>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m.exact[i][j] = exact[rows[i]][rows[j]];
    return m;
}

std::vector<std::vector<EdgeInstance>> edge_instances(const CurveSystem& sys) {
    std::vector<std::vector<EdgeInstance>> out(sys.curves.size());
    for (std::size_t i = 0; i < sys.curves.size(); ++i) {
        const auto& w = sys.word(sys.curves[i].id);
        for (std::size_t k = 0; k < w.size(); ++k) {
            int t = sys.curve_index(w[k].target);
            if (t < 0) throw ValidationError("entry of '" + sys.curves[i].id + "' targets unknown curve '" +
                                             w[k].target + "'");
            out[i].push_back({static_cast<int>(i), static_cast<int>(k), t, w[k].degree, w[k].orientation});
        }
    }
    return out;
}

CountingMatrix counting_matrix(const CurveSystem& sys) {
    CountingMatrix m;
    m.ids = sys.curve_ids();
    m.b.assign(m.size(), std::vector<int>(m.size(), 0));
    auto edges = edge_instances(sys);
    for (const auto& row : edges)
        for (const auto& e : row) ++m.b[e.source][e.target];
    return m;
}

ThurstonMatrix thurston_matrix(const CurveSystem& sys) {
    ThurstonMatrix m;
    m.ids = sys.curve_ids();
    m.exact.assign(m.size(), std::vector<Rational>(m.size(), Rational(0)));
    auto edges = edge_instances(sys);
    for (const auto& row : edges)
        for (const auto& e : row) m.exact[e.source][e.target] += Rational(1, e.degree);
    return m;
}

std::vector<BigInt> kappa_all(const CurveSystem& sys, int n) {
    if (n < 0) throw ValidationError("kappa needs n >= 0");
    auto b = counting_matrix(sys);
    std::vector<BigInt> v(b.size(), BigInt(1));
    for (int step = 0; step < n; ++step) {
        std::vector<BigInt> next(b.size(), BigInt(0));
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (b.b[i][j]) next[i] += b.b[i][j] * v[j];
        v.swap(next);
    }
    return v;
}

BigInt kappa(const CurveSystem& sys, const std::string& curve, int n) {
    if (n < 1) throw ValidationError("kappa needs n >= 1");
    int i = sys.curve_index(curve);
    if (i < 0) throw ValidationError("unknown curve '" + curve + "'");
    return kappa_all(sys, n)[i];
}

namespace {

std::vector<WalkAddress> level_rec(const CurveSystem& sys, const std::string& curve, int n) {
    std::vector<WalkAddress> out;
    const auto& w = sys.word(curve);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto& e = w[k];
        WalkStep step{static_cast<int>(k), e.target};
        if (n == 1) {
            out.push_back({{step}, BigInt(e.degree), e.orientation});
            continue;
        }
        auto sub = level_rec(sys, e.target, n - 1);
        if (e.orientation == Orientation::Reversed) std::reverse(sub.begin(), sub.end());
        for (auto& a : sub) {
            a.steps.insert(a.steps.begin(), step);
            a.degree *= e.degree;
            a.orientation = compose(a.orientation, e.orientation);
            out.push_back(std::move(a));
        }
    }
    return out;
}

}  // namespace

LevelWord level_word(const CurveSystem& sys, const std::string& curve, int n) {
    if (n < 1) throw ValidationError("level_word needs n >= 1");
    if (sys.curve_index(curve) < 0) throw ValidationError("unknown curve '" + curve + "'");
    return {curve, n, level_rec(sys, curve, n)};
}

CurveSystem power_system(const CurveSystem& sys, int k) {
    if (k < 1) throw ValidationError("power_system needs k >= 1");
    if (k == 1) return sys;

    CurveSystem out = sys;
    BigInt dk = 1;
    for (int i = 0; i < k; ++i) dk *= sys.degree;
    if (dk > BigInt(std::numeric_limits<int>::max()))
        throw ValidationError("degree of the iterate overflows");
    out.degree = static_cast<int>(dk);

    out.words.clear();
    std::map<std::string, int> incoming;
    for (const auto& c : sys.curves) {
        auto lw = level_word(sys, c.id, k);
        auto& w = out.words[c.id];
        for (const auto& a : lw.addresses) {
            w.push_back({a.end(), static_cast<int>(a.degree), a.orientation});
            incoming[a.end()] += static_cast<int>(a.degree);
        }
    }

    for (auto& p : out.points) {
        std::string cur = p.id;
        bool crit = false;
        for (int i = 0; i < k; ++i) {
            const auto& q = sys.point(cur);
            crit = crit || q.critical;
            cur = q.image;
        }
        p.image = cur;
        p.critical = crit;
    }
    for (auto& u : out.pieces) {
        std::string cur = u.id;
        for (int i = 0; i < k; ++i) cur = sys.piece(cur).image;
        u.image = cur;
    }

    if (sys.inessential) {
        std::map<std::string, std::vector<InessentialEntry>> t;
        for (const auto& c : sys.curves) {
            int rest = out.degree - incoming[c.id];
            if (rest > 0) t[c.id].push_back({InessentialKind::Trivial, std::nullopt, rest});
        }
        out.inessential = t;
    }
    out.refinement.reset();
    return out;
}

std::vector<std::vector<BigInt>> matrix_power(const CountingMatrix& b, int k) {
    std::size_t n = b.size();
    std::vector<std::vector<BigInt>> r(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    for (int s = 0; s < k; ++s) {
        std::vector<std::vector<BigInt>> next(n, std::vector<BigInt>(n, BigInt(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < n; ++m)
                if (r[i][m] != 0)
                    for (std::size_t j = 0; j < n; ++j)
                        if (b.b[m][j]) next[i][j] += r[i][m] * b.b[m][j];
        r.swap(next);
    }
    return r;
}

}  // namespace mcd
