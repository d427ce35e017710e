#include "mcd/curve_complex.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "mcd/error.hpp"

namespace mcd {

namespace {

template <class T>
int index_of(const std::vector<T>& v, const std::string& id) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].id == id) return static_cast<int>(i);
    return -1;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

int CurveSystem::curve_index(const std::string& id) const { return index_of(curves, id); }
int CurveSystem::piece_index(const std::string& id) const { return index_of(pieces, id); }
int CurveSystem::point_index(const std::string& id) const { return index_of(points, id); }

const CurveClass& CurveSystem::curve(const std::string& id) const {
    int i = curve_index(id);
    if (i < 0) throw ValidationError("unknown curve '" + id + "'");
    return curves[i];
}

const Piece& CurveSystem::piece(const std::string& id) const {
    int i = piece_index(id);
    if (i < 0) throw ValidationError("unknown piece '" + id + "'");
    return pieces[i];
}

const MarkedPoint& CurveSystem::point(const std::string& id) const {
    int i = point_index(id);
    if (i < 0) throw ValidationError("unknown point '" + id + "'");
    return points[i];
}

std::vector<std::string> CurveSystem::curve_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : curves) ids.push_back(c.id);
    return ids;
}

const std::vector<PullbackEntry>& CurveSystem::word(const std::string& curve) const {
    static const std::vector<PullbackEntry> empty;
    auto it = words.find(curve);
    return it == words.end() ? empty : it->second;
}

bool ValidationReport::has(const std::string& rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.rule << ": " << v.message;
        if (!v.ids.empty()) {
            os << " [";
            for (std::size_t i = 0; i < v.ids.size(); ++i) os << (i ? ", " : "") << v.ids[i];
            os << "]";
        }
        os << "\n";
    }
    return os.str();
}

ValidationReport validate(const CurveSystem& sys) {
    ValidationReport rep;
    auto fail = [&](std::string rule, std::vector<std::string> ids, std::string msg) {
        rep.violations.push_back({std::move(rule), std::move(ids), std::move(msg)});
    };

    if (sys.degree < 2) fail("degree", {}, "global degree must be at least 2");

    auto check_dups = [&](const auto& items, const char* what) {
        std::set<std::string> seen;
        for (const auto& x : items)
            if (!seen.insert(x.id).second)
                fail("duplicate-id", {x.id}, std::string("duplicate ") + what + " id");
    };
    check_dups(sys.points, "point");
    check_dups(sys.curves, "curve");
    check_dups(sys.pieces, "piece");

    for (const auto& p : sys.points)
        if (sys.point_index(p.image) < 0)
            fail("reference", {p.id, p.image}, "point image does not resolve");

    bool curves_resolve = true;
    for (const auto& c : sys.curves) {
        bool l = sys.piece_index(c.left_piece) >= 0, r = sys.piece_index(c.right_piece) >= 0;
        if (!l || !r) {
            curves_resolve = false;
            fail("reference", {c.id}, "curve side piece does not resolve");
        }
        if (c.left_piece == c.right_piece)
            fail("curve-sides", {c.id}, "left and right piece coincide");
        if (c.peripheral_around && sys.point_index(*c.peripheral_around) < 0)
            fail("reference", {c.id, *c.peripheral_around}, "peripheral point does not resolve");
    }

    for (const auto& u : sys.pieces) {
        if (sys.piece_index(u.image) < 0)
            fail("reference", {u.id, u.image}, "piece image does not resolve");
        for (const auto& b : u.boundary) {
            int ci = sys.curve_index(b);
            if (ci < 0) {
                fail("reference", {u.id, b}, "boundary curve does not resolve");
                continue;
            }
            const auto& c = sys.curves[ci];
            if (c.left_piece != u.id && c.right_piece != u.id)
                fail("piece-boundary", {u.id, b}, "curve listed in boundary but not adjacent");
        }
        for (const auto& p : u.points)
            if (sys.point_index(p) < 0) fail("reference", {u.id, p}, "piece point does not resolve");
    }
    for (const auto& c : sys.curves) {
        for (const auto* side : {&c.left_piece, &c.right_piece}) {
            int pi = sys.piece_index(*side);
            if (pi >= 0 && !contains(sys.pieces[pi].boundary, c.id))
                fail("piece-boundary", {c.id, *side}, "adjacent piece does not list the curve");
        }
    }

    std::map<std::string, int> placement;
    for (const auto& u : sys.pieces)
        for (const auto& p : u.points) ++placement[p];
    for (const auto& p : sys.points) {
        int n = placement.count(p.id) ? placement[p.id] : 0;
        if (n != 1)
            fail("point-placement", {p.id},
                 "point lies in " + std::to_string(n) + " pieces (expected exactly one)");
    }

    // Marked-point dynamics: a finite self-map is eventually periodic once
    // every image resolves; confirm it explicitly.
    for (const auto& p : sys.points) {
        std::string cur = p.id;
        bool ok = false;
        std::set<std::string> seen;
        for (std::size_t k = 0; k <= sys.points.size(); ++k) {
            int i = sys.point_index(cur);
            if (i < 0) break;
            if (!seen.insert(cur).second) {
                ok = true;
                break;
            }
            cur = sys.points[i].image;
        }
        if (!ok && sys.point_index(p.image) >= 0)
            fail("point-dynamics", {p.id}, "orbit does not close within |points| steps");
    }

    for (const auto& [cid, entries] : sys.words) {
        if (sys.curve_index(cid) < 0) {
            fail("reference", {cid}, "word attached to unknown curve");
            continue;
        }
        for (const auto& e : entries) {
            if (sys.curve_index(e.target) < 0)
                fail("stability", {cid, e.target}, "preimage component targets a curve outside the system");
            if (e.degree < 1 || e.degree > sys.degree)
                fail("entry-degree", {cid, e.target},
                     "entry degree " + std::to_string(e.degree) + " outside [1, global degree]");
        }
    }
    for (const auto& c : sys.curves)
        if (sys.word(c.id).empty())
            fail("pre-stability", {c.id}, "curve is not isotopic to any preimage component");

    // Dual graph must be a tree.
    bool tree_ok = false;
    if (curves_resolve) {
        if (sys.pieces.size() != sys.curves.size() + 1) {
            fail("tree", {}, "expected |pieces| = |curves| + 1, got " + std::to_string(sys.pieces.size()) +
                                 " pieces and " + std::to_string(sys.curves.size()) + " curves");
        } else {
            UnionFind uf(sys.pieces.size());
            bool acyclic = true;
            for (const auto& c : sys.curves) {
                if (!uf.unite(sys.piece_index(c.left_piece), sys.piece_index(c.right_piece))) {
                    acyclic = false;
                    fail("tree", {c.id}, "curve closes a cycle in the dual graph");
                }
            }
            if (acyclic) tree_ok = true;
        }
    }

    if (tree_ok) {
        DualTree tree = dual_tree(sys);
        std::map<std::string, std::size_t> npoints;
        for (const auto& u : sys.pieces) npoints[u.id] = u.points.size();
        auto side_points = [&](const std::set<std::string>& pieces, std::vector<std::string>* ids) {
            std::size_t n = 0;
            for (const auto& u : pieces) {
                n += npoints[u];
                if (ids)
                    for (const auto& p : sys.piece(u).points) ids->push_back(p);
            }
            return n;
        };
        for (const auto& c : sys.curves) {
            auto left = tree.side(c.id, c.left_piece);
            auto right = tree.side(c.id, c.right_piece);
            std::vector<std::string> lp, rp;
            std::size_t nl = side_points(left, &lp), nr = side_points(right, &rp);
            if (!c.peripheral_around) {
                if (nl < 2 || nr < 2)
                    fail("essential", {c.id},
                         "sides carry " + std::to_string(nl) + " and " + std::to_string(nr) +
                             " marked points (need at least two each)");
            } else {
                const std::string& p = *c.peripheral_around;
                bool l_ok = nl == 1 && lp[0] == p, r_ok = nr == 1 && rp[0] == p;
                if (!(l_ok || r_ok) || (l_ok && r_ok))
                    fail("peripheral", {c.id, p}, "exactly one side must carry the single point");
            }
        }
    }

    for (const auto& u : sys.pieces) {
        if (u.boundary.size() + u.points.size() >= 3) continue;
        bool disk = std::any_of(u.boundary.begin(), u.boundary.end(), [&](const std::string& b) {
            int ci = sys.curve_index(b);
            return ci >= 0 && sys.curves[ci].peripheral_around.has_value();
        });
        if (!disk) fail("piece-type", {u.id}, "piece has fewer than three boundary curves plus points");
    }

    if (!sys.inessential) {
        rep.warnings.push_back("no inessential table; degree-sum check skipped");
    } else {
        std::map<std::string, int> sum;
        for (const auto& [cid, entries] : sys.words)
            for (const auto& e : entries) sum[e.target] += e.degree;
        for (const auto& [target, extra] : *sys.inessential) {
            if (sys.curve_index(target) < 0) {
                fail("reference", {target}, "inessential table keyed by unknown curve");
                continue;
            }
            for (const auto& e : extra) {
                sum[target] += e.degree;
                if (e.kind == InessentialKind::Peripheral && (!e.point || sys.point_index(*e.point) < 0))
                    fail("reference", {target}, "peripheral preimage without a resolvable point");
            }
        }
        for (const auto& c : sys.curves) {
            int s = sum.count(c.id) ? sum[c.id] : 0;
            if (s != sys.degree)
                fail("degree-sum", {c.id},
                     "preimage degrees sum to " + std::to_string(s) + ", global degree is " +
                         std::to_string(sys.degree));
        }
    }
    return rep;
}

void require_valid(const CurveSystem& sys) {
    auto rep = validate(sys);
    if (!rep.ok()) throw ValidationError("invalid curve system:\n" + rep.summary());
}

std::set<std::string> DualTree::side(const std::string& curve, const std::string& start) const {
    std::set<std::string> seen{start};
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        auto it = adjacency.find(u);
        if (it == adjacency.end()) continue;
        for (const auto& [c, v] : it->second) {
            if (c == curve || seen.count(v)) continue;
            seen.insert(v);
            queue.push_back(v);
        }
    }
    return seen;
}

DualTree dual_tree(const CurveSystem& sys) {
    DualTree t;
    UnionFind uf(sys.pieces.size());
    for (const auto& u : sys.pieces) {
        t.nodes.push_back(u.id);
        t.adjacency[u.id];
    }
    for (const auto& c : sys.curves) {
        int a = sys.piece_index(c.left_piece), b = sys.piece_index(c.right_piece);
        if (a < 0 || b < 0) throw ValidationError("curve '" + c.id + "' has unresolved side pieces");
        if (!uf.unite(a, b))
            throw ValidationError("not a sphere decomposition: curve '" + c.id + "' closes a cycle");
        t.edges.push_back({c.id, c.left_piece, c.right_piece});
        t.adjacency[c.left_piece].push_back({c.id, c.right_piece});
        t.adjacency[c.right_piece].push_back({c.id, c.left_piece});
    }
    for (std::size_t i = 1; i < sys.pieces.size(); ++i)
        if (uf.find(static_cast<int>(i)) != uf.find(0))
            throw ValidationError("not a sphere decomposition: piece '" + sys.pieces[i].id +
                                  "' is disconnected");
    return t;
}

StabilityCheck check_stability(const CurveSystem& sys, const std::set<std::string>& lambda) {
    StabilityCheck out;
    for (const auto& c : sys.curves) {
        const auto& w = sys.word(c.id);
        bool hits = std::any_of(w.begin(), w.end(),
                                [&](const PullbackEntry& e) { return lambda.count(e.target) > 0; });
        if (lambda.count(c.id)) {
            if (!hits) out.not_prestable.push_back(c.id);
        } else if (hits) {
            out.unstable.push_back(c.id);
        }
    }
    return out;
}

std::map<std::string, std::string> merged_piece_names(const CurveSystem& sys,
                                                      const std::set<std::string>& lambda) {
    UnionFind uf(sys.pieces.size());
    for (const auto& c : sys.curves)
        if (!lambda.count(c.id)) uf.unite(sys.piece_index(c.left_piece), sys.piece_index(c.right_piece));
    std::map<int, std::string> name;
    for (std::size_t i = 0; i < sys.pieces.size(); ++i) {
        int r = uf.find(static_cast<int>(i));
        auto& n = name[r];
        n += (n.empty() ? "" : "+") + sys.pieces[i].id;
    }
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < sys.pieces.size(); ++i)
        out[sys.pieces[i].id] = name[uf.find(static_cast<int>(i))];
    return out;
}

std::map<std::string, std::string> induced_piece_map(const CurveSystem& sys,
                                                     const std::set<std::string>& lambda) {
    auto merged = merged_piece_names(sys, lambda);
    std::map<std::string, std::string> f;
    for (const auto& u : sys.pieces) {
        auto it = merged.find(u.image);
        if (it == merged.end()) throw ValidationError("piece image '" + u.image + "' does not resolve");
        const std::string& src = merged[u.id];
        auto [pos, fresh] = f.emplace(src, it->second);
        if (!fresh && pos->second != it->second)
            throw ConsistencyError("inconsistent piece dynamics: merged piece '" + src + "' maps to both '" +
                                   pos->second + "' and '" + it->second + "'");
    }
    return f;
}

CurveSystem sub_system(const CurveSystem& sys, const std::set<std::string>& lambda) {
    for (const auto& c : lambda)
        if (sys.curve_index(c) < 0) throw ValidationError("sub-multicurve names unknown curve '" + c + "'");
    auto st = check_stability(sys, lambda);
    if (!st.unstable.empty())
        throw ValidationError("sub-multicurve is not stable: preimages of it are isotopic to '" +
                              st.unstable.front() + "'");
    if (!st.not_prestable.empty())
        throw ValidationError("sub-multicurve is not pre-stable at '" + st.not_prestable.front() + "'");

    auto merged = merged_piece_names(sys, lambda);
    auto fmap = induced_piece_map(sys, lambda);

    CurveSystem out;
    out.degree = sys.degree;
    out.points = sys.points;
    std::map<std::string, std::size_t> slot;
    for (const auto& u : sys.pieces) {
        const std::string& m = merged[u.id];
        if (!slot.count(m)) {
            slot[m] = out.pieces.size();
            out.pieces.push_back({m, {}, {}, fmap[m]});
        }
        Piece& dst = out.pieces[slot[m]];
        for (const auto& b : u.boundary)
            if (lambda.count(b) && !contains(dst.boundary, b)) dst.boundary.push_back(b);
        for (const auto& p : u.points) dst.points.push_back(p);
    }
    for (const auto& c : sys.curves) {
        if (!lambda.count(c.id)) continue;
        CurveClass cc = c;
        cc.left_piece = merged[c.left_piece];
        cc.right_piece = merged[c.right_piece];
        out.curves.push_back(cc);
        std::vector<PullbackEntry> w;
        for (const auto& e : sys.word(c.id))
            if (lambda.count(e.target)) w.push_back(e);
        out.words[c.id] = w;
    }
    if (sys.inessential) {
        std::map<std::string, std::vector<InessentialEntry>> t;
        for (const auto& [k, v] : *sys.inessential)
            if (lambda.count(k)) t[k] = v;
        out.inessential = t;
    }
    return out;
}

int piece_period(const CurveSystem& sys, const std::string& piece) {
    std::string cur = piece;
    for (std::size_t k = 1; k <= sys.pieces.size(); ++k) {
        cur = sys.piece(cur).image;
        if (cur == piece) return static_cast<int>(k);
    }
    return 0;
}

bool structurally_equal(const CurveSystem& a, const CurveSystem& b) {
    if (a.degree != b.degree || a.points.size() != b.points.size() || a.curves.size() != b.curves.size() ||
        a.pieces.size() != b.pieces.size())
        return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const auto &p = a.points[i], &q = b.points[i];
        if (p.id != q.id || p.image != q.image || p.critical != q.critical || p.synthetic != q.synthetic)
            return false;
    }
    for (std::size_t i = 0; i < a.curves.size(); ++i) {
        const auto &p = a.curves[i], &q = b.curves[i];
        if (p.id != q.id || p.left_piece != q.left_piece || p.right_piece != q.right_piece ||
            p.peripheral_around != q.peripheral_around)
            return false;
    }
    for (std::size_t i = 0; i < a.pieces.size(); ++i) {
        const auto &p = a.pieces[i], &q = b.pieces[i];
        if (p.id != q.id || p.boundary != q.boundary || p.points != q.points || p.image != q.image)
            return false;
    }
    return a.words == b.words && a.inessential == b.inessential;
}

}  // namespace mcd
