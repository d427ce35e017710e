#include "mcd/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "mcd/error.hpp"
#include "mcd/pullback.hpp"

namespace mcd {

namespace {

std::string join(const std::vector<int>& xs, const char* sep) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? sep : "") << xs[i];
    return os.str();
}

std::string join(const std::set<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return "{" + s + "}";
}

std::string piece_of_point(const CurveSystem& sys, const std::string& point) {
    for (const auto& p : sys.pieces)
        if (std::find(p.points.begin(), p.points.end(), point) != p.points.end()) return p.id;
    throw ValidationError("marked point '" + point + "' lies in no piece");
}

// A length-N walk from `source`, identified by its entry indices.
struct Walk {
    std::string source;
    std::vector<int> indices;
    std::vector<std::string> vertices;  // source, then the target of each step
    Orientation parity = Orientation::Same;

    std::string id() const { return source + "@" + join(indices, "."); }
};

struct WalkTable {
    std::map<std::string, std::vector<Walk>> copies;  // per curve, in level-word order
    std::map<std::pair<std::string, std::vector<int>>, std::string> ids;
};

WalkTable enumerate_walks(const CurveSystem& sys, int n) {
    WalkTable t;
    for (const auto& c : sys.curves) {
        auto lw = level_word(sys, c.id, n);
        auto& list = t.copies[c.id];
        for (const auto& a : lw.addresses) {
            Walk w;
            w.source = c.id;
            w.vertices.push_back(c.id);
            for (const auto& s : a.steps) {
                w.indices.push_back(s.index);
                w.vertices.push_back(s.target);
            }
            w.parity = a.orientation;
            t.ids[{w.source, w.indices}] = w.id();
            list.push_back(std::move(w));
        }
    }
    return t;
}

const std::string& walk_id(const WalkTable& t, const std::string& source, const std::vector<int>& idx) {
    auto it = t.ids.find({source, idx});
    if (it == t.ids.end()) throw ConsistencyError("refinement: missing walk " + source + "@" + join(idx, "."));
    return it->second;
}

std::string first_point_near(const CurveSystem& sys, const DualTree& tree, const std::string& start) {
    std::set<std::string> seen{start};
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        const auto& pc = sys.piece(u);
        if (!pc.points.empty()) return pc.points.front();
        auto it = tree.adjacency.find(u);
        if (it == tree.adjacency.end()) continue;
        for (const auto& [curve, v] : it->second)
            if (seen.insert(v).second) queue.push_back(v);
    }
    throw ValidationError("system has no marked points");
}

}  // namespace

int dichotomy_depth(const CurveSystem& sys) {
    auto periodic = periodic_curves(sys);
    int n = 1;
    for (const auto& c : sys.curves) {
        if (periodic.count(c.id)) continue;
        if (classify_growth(sys, c.id).kind == GrowthKind::Coiling) continue;
        for (const auto& a : periodic) {
            int d = shortest_walk(sys, c.id, a);
            if (d > n) n = d;
        }
    }
    return n;
}

RefinementResult refine_to_dichotomy(const CurveSystem& sys, std::optional<int> n_opt) {
    require_valid(sys);
    const int N = n_opt ? *n_opt : dichotomy_depth(sys);
    if (N < 1) throw ValidationError("refinement depth must be at least 1");

    RefinementResult res;
    res.N = N;
    WalkTable walks = enumerate_walks(sys, N);
    DualTree tree = dual_tree(sys);

    std::set<std::string> taken;
    for (const auto& p : sys.points) taken.insert(p.id);
    for (const auto& p : sys.pieces) taken.insert(p.id);
    auto fresh = [&](const std::string& id) {
        if (!taken.insert(id).second) throw ConsistencyError("refinement: generated id '" + id + "' collides");
        return id;
    };

    CurveSystem out;
    out.degree = sys.degree;
    out.points = sys.points;
    RefinementInfo info;
    info.N = N;

    auto gap_piece = [](const std::string& curve, std::size_t j) { return curve + "~g" + std::to_string(j); };
    auto marker = [](const std::string& curve, std::size_t j) { return curve + "~m" + std::to_string(j); };

    // Curves: one per walk, with gap pieces between consecutive copies of a class.
    for (const auto& c : sys.curves) {
        const auto& list = walks.copies.at(c.id);
        const std::size_t k = list.size();
        std::optional<std::size_t> disk_copy;
        if (c.peripheral_around) {
            auto side = tree.side(c.id, c.left_piece);
            disk_copy = side.count(piece_of_point(sys, *c.peripheral_around)) ? 0 : k - 1;
        }
        for (std::size_t i = 0; i < k; ++i) {
            CurveClass rc;
            rc.id = fresh(list[i].id());
            rc.left_piece = i == 0 ? c.left_piece : gap_piece(c.id, i);
            rc.right_piece = i + 1 == k ? c.right_piece : gap_piece(c.id, i + 1);
            if (disk_copy && *disk_copy == i) rc.peripheral_around = c.peripheral_around;
            out.curves.push_back(rc);
            res.projection[rc.id] = c.id;
        }
    }

    // Original pieces keep their ids; a boundary curve is replaced by the copy facing the piece.
    for (const auto& p : sys.pieces) {
        Piece q = p;
        q.boundary.clear();
        for (const auto& b : p.boundary) {
            const auto& list = walks.copies.at(b);
            const auto& cc = sys.curve(b);
            q.boundary.push_back(cc.left_piece == p.id ? list.front().id() : list.back().id());
        }
        out.pieces.push_back(q);
    }

    // Gap pieces and their markers.
    for (const auto& c : sys.curves) {
        const auto& list = walks.copies.at(c.id);
        for (std::size_t j = 1; j < list.size(); ++j) {
            const Walk& lo = list[j - 1];
            const Walk& hi = list[j];
            Piece g;
            g.id = fresh(gap_piece(c.id, j));
            g.boundary = {lo.id(), hi.id()};
            MarkedPoint m;
            m.id = fresh(marker(c.id, j));
            m.synthetic = true;
            g.points = {m.id};

            if (lo.indices.front() == hi.indices.front()) {
                // Same first step: the gap maps onto a gap of the next class, one level down.
                const auto& e = sys.word(c.id)[lo.indices.front()];
                std::vector<int> wl(lo.indices.begin() + 1, lo.indices.end());
                std::vector<int> wh(hi.indices.begin() + 1, hi.indices.end());
                const auto& first = e.orientation == Orientation::Same ? wl : wh;
                const auto& second = e.orientation == Orientation::Same ? wh : wl;
                const auto& tl = walks.copies.at(e.target);
                auto prefix_is = [](const Walk& w, const std::vector<int>& pre) {
                    return std::equal(pre.begin(), pre.end(), w.indices.begin());
                };
                std::size_t last = tl.size();
                for (std::size_t i = 0; i < tl.size(); ++i)
                    if (prefix_is(tl[i], first)) last = i;
                if (last == tl.size() || last + 1 >= tl.size() || !prefix_is(tl[last + 1], second))
                    throw ConsistencyError("refinement: gap " + g.id + " has no image gap in " + e.target);
                g.image = gap_piece(e.target, last + 1);
                m.image = marker(e.target, last + 1);
            } else {
                // Different first steps: the gap maps into the piece beside the earlier target.
                const auto& e = sys.word(c.id)[lo.indices.front()];
                const auto& e2 = sys.word(c.id)[hi.indices.front()];
                const auto& t1 = sys.curve(e.target);
                const auto& t2 = sys.curve(e2.target);
                std::string v = e.orientation == Orientation::Same ? t1.right_piece : t1.left_piece;
                std::string v2 = e2.orientation == Orientation::Same ? t2.left_piece : t2.right_piece;
                if (v != v2)
                    res.notes.push_back("gap " + g.id + ": neighbouring copies map to different pieces (" + v +
                                        ", " + v2 + "); using " + v);
                g.image = v;
                m.image = first_point_near(sys, tree, v);
            }
            out.pieces.push_back(g);
            out.points.push_back(m);
            info.markers.push_back(m.id);
        }
    }

    // Pullback: the preimage classes of u are u[1:] + e for e in words[end(u)].
    for (const auto& c : sys.curves) {
        for (const auto& u : walks.copies.at(c.id)) {
            const auto& head = sys.word(c.id)[u.indices.front()];
            const std::string& next = u.vertices[1];
            std::vector<int> tail(u.indices.begin() + 1, u.indices.end());
            const auto& last_word = sys.word(u.vertices.back());
            std::vector<PullbackEntry> w;
            for (std::size_t k = 0; k < last_word.size(); ++k) {
                auto idx = tail;
                idx.push_back(static_cast<int>(k));
                w.push_back({walk_id(walks, next, idx), head.degree, head.orientation});
            }
            if (u.parity == Orientation::Reversed) std::reverse(w.begin(), w.end());
            out.words[u.id()] = std::move(w);
        }
    }

    if (sys.inessential) {
        std::map<std::string, std::vector<InessentialEntry>> table;
        for (const auto& rc : out.curves) {
            auto it = sys.inessential->find(res.projection[rc.id]);
            table[rc.id] = it == sys.inessential->end() ? std::vector<InessentialEntry>{} : it->second;
        }
        out.inessential = std::move(table);
    }

    info.projections = res.projection;
    out.refinement = info;

    auto report = validate(out);
    if (!report.ok()) throw ConsistencyError("refined system fails validation: " + report.summary());

    for (const auto& rc : out.curves) {
        auto g = classify_growth(out, rc.id);
        if (g.kind == GrowthKind::Bounded) {
            res.dichotomy = false;
            res.residual_bounded.push_back(rc.id);
        }
    }
    res.system = std::move(out);
    return res;
}

SeparationReport separation_report(const CurveSystem& sys) {
    require_valid(sys);
    SeparationReport r;
    r.refined = sys.refinement.has_value();
    for (const auto& c : sys.curves) {
        SeparationRow row;
        row.curve = c.id;
        row.left_piece = c.left_piece;
        row.right_piece = c.right_piece;
        row.growth = classify_growth(sys, c.id);
        row.disjoint = row.growth.kind == GrowthKind::Coiling;
        r.rows.push_back(std::move(row));
    }
    return r;
}

RenormCertificate combinatorial_renormalization_data(const CurveSystem& sys, const std::string& piece) {
    require_valid(sys);
    const Piece& u = sys.piece(piece);
    const int p = piece_period(sys, piece);
    if (p == 0) throw ValidationError("piece '" + piece + "' is not periodic under the piece map");

    RenormCertificate cert;
    cert.theorem = "combinatorial-renormalization";
    cert.piece = piece;
    cert.period = p;
    DualTree tree = dual_tree(sys);

    auto synthetic_id = [](const std::string& curve) { return "*" + curve; };
    std::map<std::string, std::string> synthetic_of_image;

    for (const auto& b : u.boundary) {
        BoundaryData bd;
        bd.curve = b;
        bd.growth = classify_growth(sys, b).name();
        bd.synthetic_point = synthetic_id(b);
        bool left = sys.curve(b).left_piece == piece;
        std::string cur = b;
        std::string region = piece;
        int degree = 1;
        for (int step = 0; step < p; ++step) {
            const auto& w = sys.word(cur);
            const auto& e = left ? w.front() : w.back();
            degree *= e.degree;
            if (e.orientation == Orientation::Reversed) left = !left;
            cur = e.target;
            region = sys.piece(region).image;
            const auto& tc = sys.curve(cur);
            if ((left ? tc.left_piece : tc.right_piece) != region) {
                cert.dynamics_consistent = false;
                cert.witnesses.push_back("copy of " + b + " tracked to " + cur + " does not face piece " + region);
            }
        }
        bd.degree = degree;
        bd.image_curve = cur;
        if (std::find(u.boundary.begin(), u.boundary.end(), cur) == u.boundary.end()) {
            cert.dynamics_consistent = false;
            cert.witnesses.push_back("copy of " + b + " returns to " + cur + ", not a boundary curve of " + piece);
        }
        cert.boundary.push_back(bd);
    }

    auto iterate = [&](std::string x, int k, bool& critical) {
        critical = false;
        for (int i = 0; i < k; ++i) {
            critical = critical || sys.point(x).critical;
            x = sys.point(x).image;
        }
        return x;
    };

    for (const auto& x : u.points) {
        MarkedPoint mp;
        mp.id = x;
        bool crit = false;
        std::string y = iterate(x, p, crit);
        mp.critical = crit;
        if (std::find(u.points.begin(), u.points.end(), y) != u.points.end()) {
            mp.image = y;
        } else {
            std::string yp = piece_of_point(sys, y);
            for (const auto& b : u.boundary) {
                const auto& bc = sys.curve(b);
                std::string far = bc.left_piece == piece ? bc.right_piece : bc.left_piece;
                if (tree.side(b, far).count(yp)) mp.image = synthetic_id(b);
            }
        }
        cert.marked.push_back(mp);
    }
    for (const auto& bd : cert.boundary) {
        MarkedPoint mp;
        mp.id = bd.synthetic_point;
        mp.image = synthetic_id(bd.image_curve);
        mp.critical = bd.degree > 1;
        mp.synthetic = true;
        cert.marked.push_back(mp);
    }

    std::ostringstream st;
    st << "The first-return cover f^" << p << " on " << piece
       << ", with each complementary component collapsed to a marked point, is a branched covering of degree "
       << (cert.boundary.empty() ? 1 : cert.boundary.front().degree) << " on a sphere with " << cert.marked.size()
       << " marked points.";
    cert.statement = st.str();
    cert.verified = cert.dynamics_consistent;
    return cert;
}

std::optional<RenormCertificate> renormalization_certificate(const CurveSystem& sys, const std::string& piece) {
    require_valid(sys);
    const int p = piece_period(sys, piece);
    if (p == 0) throw ValidationError("piece '" + piece + "' is not periodic under the piece map");
    const Piece& u = sys.piece(piece);
    for (const auto& b : u.boundary)
        if (classify_growth(sys, b).kind != GrowthKind::Coiling) return std::nullopt;

    RenormCertificate data = combinatorial_renormalization_data(sys, piece);
    RenormCertificate cert = data;
    cert.theorem = "periodic-piece-with-coiling-boundary";
    std::ostringstream st;
    st << "Every boundary curve of the f_Gamma-periodic piece " << piece << " (period " << p
       << ") is coiling, so f^" << p << " restricted to a neighbourhood of " << piece
       << " is a renormalization whose small Julia set is disjoint from the other small Julia sets.";
    cert.statement = st.str();
    for (const auto& b : u.boundary) {
        auto g = classify_growth(sys, b);
        std::string w = b + ": Coiling";
        if (g.branching) w += ", branching vertex " + *g.branching;
        if (g.feeding_cycle) {
            w += ", feeding cycle";
            for (const auto& c : g.feeding_cycle->curves()) w += " " + c;
        }
        cert.witnesses.push_back(w);
    }
    cert.witnesses.push_back("period " + std::to_string(p));
    cert.verified = true;
    return cert;
}

namespace {

void note(std::vector<std::string>& trace, const std::string& s) { trace.push_back(s); }

// Largest completely stable subset of `s`: drop targets of outside curves and
// curves with no entry into the set until nothing changes.
std::set<std::string> prune_to_completely_stable(const CurveSystem& sys, std::set<std::string> s,
                                                 std::vector<std::string>& trace) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : sys.curves) {
            bool inside = s.count(c.id) > 0;
            const auto& w = sys.word(c.id);
            if (!inside) {
                for (const auto& e : w)
                    if (s.erase(e.target)) {
                        note(trace, "prune " + e.target + ": has a preimage isotopic to " + c.id);
                        changed = true;
                    }
            } else {
                bool any = std::any_of(w.begin(), w.end(), [&](const PullbackEntry& e) { return s.count(e.target) > 0; });
                if (!any) {
                    s.erase(c.id);
                    note(trace, "prune " + c.id + ": no preimage inside the set");
                    changed = true;
                }
            }
        }
    }
    return s;
}

enum Side { Left = 0, Right = 1 };
const char* side_name(int s) { return s == Left ? "left" : "right"; }

}  // namespace

std::optional<RenormalizablePiece> find_renormalizable_piece(const CurveSystem& sys, std::vector<std::string>* trace_out) {
    require_valid(sys);
    RenormalizablePiece r;
    auto& trace = r.trace;
    auto finish = [&](std::optional<RenormalizablePiece> v) {
        if (trace_out) *trace_out = trace;
        return v;
    };

    std::vector<std::string> coiling;
    for (const auto& c : sys.curves)
        if (classify_growth(sys, c.id).kind == GrowthKind::Coiling) coiling.push_back(c.id);
    if (coiling.empty()) {
        note(trace, "no coiling class");
        return finish(std::nullopt);
    }

    if (auto lam = find_cantor_submulticurve(sys)) {
        note(trace, "Cantor submulticurve " + join(*lam));
        CurveSystem sub = sub_system(sys, *lam);
        for (const auto& pc : sub.pieces) {
            if (piece_period(sub, pc.id) == 0) continue;
            auto cert = renormalization_certificate(sub, pc.id);
            if (!cert) continue;
            r.cantor_shortcut = true;
            r.gamma_prime = *lam;
            r.lambda_gamma = *lam;
            r.piece = pc.id;
            r.period = cert->period;
            r.certificate = *cert;
            r.post_completely_stable = check_stability(sys, *lam).ok() && validate(sub).ok();
            r.post_u_fixed = piece_period(sub, pc.id) > 0;
            r.post_lambda_coiling = std::all_of(lam->begin(), lam->end(), [&](const std::string& c) {
                return classify_growth(sub, c).kind == GrowthKind::Coiling;
            });
            r.certificate.verified = r.post_completely_stable && r.post_u_fixed && r.post_lambda_coiling;
            note(trace, "periodic piece " + pc.id + " of the Cantor sub-system");
            return finish(r);
        }
        note(trace, "Cantor sub-system has no certified periodic piece");
        return finish(std::nullopt);
    }

    // A periodic coiling class with the shortest cycle.
    std::optional<Cycle> best;
    for (const auto& c : coiling) {
        if (!is_periodic(sys, c)) continue;
        auto cycles = cycles_through(sys, c, 2);
        if (cycles.size() != 1)
            throw ConsistencyError("periodic class '" + c + "' lies on " + std::to_string(cycles.size()) +
                                   " cycles without a Cantor submulticurve");
        if (!best || cycles.front().length() < best->length() ||
            (cycles.front().length() == best->length() && c < r.gamma)) {
            best = cycles.front();
            r.gamma = c;
        }
    }
    if (!best) throw ConsistencyError("coiling classes exist but none is periodic");
    const std::string& gamma = r.gamma;
    r.period = best->length();
    r.power = best->orientation(sys) == Orientation::Same ? r.period : 2 * r.period;
    note(trace, "gamma = " + gamma + ", cycle length " + std::to_string(r.period) + ", power " + std::to_string(r.power));

    CurveSystem P = power_system(sys, r.power);
    auto lw = level_word(sys, gamma, r.power);
    std::vector<int> loop;
    for (int rep = 0; rep < r.power / r.period; ++rep)
        for (const auto& e : best->edges) loop.push_back(e.index);
    int c_index = -1;
    for (std::size_t i = 0; i < lw.addresses.size(); ++i) {
        const auto& st = lw.addresses[i].steps;
        bool match = st.size() == loop.size();
        for (std::size_t k = 0; match && k < st.size(); ++k) match = st[k].index == loop[k];
        if (match) c_index = static_cast<int>(i);
    }
    if (c_index < 0) throw ConsistencyError("periodic address of " + gamma + " not found");
    const auto& wg = P.word(gamma);
    if (wg[c_index].orientation != Orientation::Same)
        throw ConsistencyError("periodic address of " + gamma + " is orientation-reversing after passing to the power");
    note(trace, "periodic address at position " + std::to_string(c_index) + " of the power word");

    // Finite criterion: a class has a copy on side s iff it is reachable from a
    // non-loop entry of words_P[gamma] on side s.
    std::map<std::string, std::set<int>> sides;
    for (std::size_t k = 0; k < wg.size(); ++k) {
        if (static_cast<int>(k) == c_index) continue;
        int s = static_cast<int>(k) < c_index ? Left : Right;
        sides[wg[k].target].insert(s);
        for (const auto& b : reachable_from(P, wg[k].target)) sides[b].insert(s);
    }

    // Enumeration to depth 2|curves|; parity along the periodic prefix flips the comparison.
    {
        std::map<std::string, std::set<int>> enumerated;
        using State = std::tuple<std::string, int, int>;  // vertex, side (-1 undiverged), parity
        std::set<State> frontier{{gamma, -1, 0}};
        const int depth = 2 * static_cast<int>(sys.curves.size());
        for (int d = 0; d < depth && !frontier.empty(); ++d) {
            std::set<State> next;
            for (const auto& [v, side, par] : frontier) {
                const auto& w = P.word(v);
                for (std::size_t k = 0; k < w.size(); ++k) {
                    if (side < 0) {
                        if (static_cast<int>(k) == c_index) {
                            next.insert({v, -1, par ^ (w[k].orientation == Orientation::Reversed)});
                            continue;
                        }
                        int s = static_cast<int>(k) < c_index ? Left : Right;
                        if (par) s = 1 - s;
                        next.insert({w[k].target, s, 0});
                        enumerated[w[k].target].insert(s);
                    } else {
                        next.insert({w[k].target, side, 0});
                        enumerated[w[k].target].insert(side);
                    }
                }
            }
            frontier = std::move(next);
        }
        if (enumerated != sides)
            throw ConsistencyError("side analysis: enumeration and reachability criterion disagree");
    }

    for (const auto& [b, s] : sides)
        if (s.size() > 1 && b != gamma)
            throw SideInconsistency("input not realizable as a PCF map: '" + b + "' has copies on both sides of '" +
                                    gamma + "'");

    int chosen = -1;
    for (std::size_t k = 0; k < wg.size() && chosen < 0; ++k)
        if (static_cast<int>(k) != c_index) chosen = static_cast<int>(k) < c_index ? Left : Right;
    if (chosen < 0) throw ConsistencyError("coiling class " + gamma + " has a single preimage copy");
    r.chosen_side = side_name(chosen);
    note(trace, std::string("chosen side: ") + r.chosen_side);

    std::set<std::string> star;
    for (const auto& c : sys.curves) {
        auto it = sides.find(c.id);
        if (it == sides.end() || !it->second.count(1 - chosen)) star.insert(c.id);
    }
    note(trace, "Gamma* before pruning " + join(star));
    star = prune_to_completely_stable(sys, star, trace);
    r.gamma_star = star;
    note(trace, "Gamma* = " + join(star));
    if (!star.count(gamma)) throw ConsistencyError("Gamma* lost the coiling class " + gamma);

    r.lambda_gamma = generated_multicurve(sys, gamma);
    for (const auto& b : r.lambda_gamma)
        if (!star.count(b)) throw ConsistencyError("Lambda_gamma member " + b + " is outside Gamma*");
    note(trace, "Lambda_gamma = " + join(r.lambda_gamma));

    auto merged = merged_piece_names(sys, r.lambda_gamma);
    auto fmap = induced_piece_map(sys, r.lambda_gamma);
    const auto& gc = sys.curve(gamma);
    r.u_gamma = merged.at(chosen == Right ? gc.left_piece : gc.right_piece);
    note(trace, "U_gamma = " + r.u_gamma);

    std::set<std::string> orbit;
    for (std::string x = r.u_gamma; orbit.insert(x).second;) x = fmap.at(x);
    std::set<std::string> grand;
    for (const auto& [orig, name] : merged) {
        std::string x = name;
        for (std::size_t i = 0; i <= merged.size() && !orbit.count(x); ++i) x = fmap.at(x);
        if (orbit.count(x)) grand.insert(name);
    }

    r.gamma_prime = r.lambda_gamma;
    for (const auto& b : star) {
        if (r.lambda_gamma.count(b)) continue;
        if (!grand.count(merged.at(sys.curve(b).left_piece))) r.gamma_prime.insert(b);
    }
    note(trace, "Gamma' = " + join(r.gamma_prime));

    // Independent re-verification.
    r.post_completely_stable = check_stability(sys, r.gamma_prime).ok();
    CurveSystem sub;
    if (r.post_completely_stable) {
        sub = sub_system(sys, r.gamma_prime);
        r.post_completely_stable = validate(sub).ok();
    }
    if (!r.post_completely_stable) {
        note(trace, "Gamma' is not completely stable");
        return finish(std::nullopt);
    }
    if (sub.piece_index(r.u_gamma) >= 0) {
        CurveSystem subp = power_system(sub, r.power);
        r.post_u_fixed = piece_period(sub, r.u_gamma) > 0 && subp.piece(r.u_gamma).image == r.u_gamma;
    }
    r.post_lambda_coiling = std::all_of(r.lambda_gamma.begin(), r.lambda_gamma.end(), [&](const std::string& c) {
        return classify_growth(sub, c).kind == GrowthKind::Coiling;
    });

    std::vector<std::string> candidates;
    if (sub.piece_index(r.u_gamma) >= 0) candidates.push_back(r.u_gamma);
    for (const auto& pc : sub.pieces)
        if (pc.id != r.u_gamma) candidates.push_back(pc.id);
    for (const auto& id : candidates) {
        if (piece_period(sub, id) == 0) continue;
        auto cert = renormalization_certificate(sub, id);
        if (!cert) continue;
        r.piece = id;
        r.certificate = *cert;
        r.certificate.theorem = "coiling-class-yields-renormalizable-piece";
        r.certificate.statement = "Gamma' = " + join(r.gamma_prime) + " is completely stable, " + id +
                                  " is periodic under f_Gamma' and every boundary curve is coiling in Gamma', so f has a "
                                  "renormalization on " + id + ". " + cert->statement;
        r.certificate.verified = cert->verified && r.post_completely_stable && r.post_u_fixed && r.post_lambda_coiling;
        note(trace, "piece " + id);
        return finish(r);
    }
    note(trace, "no periodic piece of the Gamma' system has coiling boundary");
    return finish(std::nullopt);
}

std::optional<CoiledFatouCertificate> detect_coiled_fatou(const CurveSystem& sys) {
    for (const auto& alpha : sys.curves) {
        if (!alpha.essential()) continue;
        const auto& wa = sys.word(alpha.id);
        if (std::none_of(wa.begin(), wa.end(), [&](const PullbackEntry& e) { return e.target == alpha.id; })) continue;
        for (const auto& beta : sys.curves) {
            if (beta.essential()) continue;
            const auto& a = *beta.peripheral_around;
            int ai = sys.point_index(a);
            if (ai < 0) continue;
            const auto& pt = sys.points[ai];
            if (!pt.critical || pt.image != pt.id) continue;
            const auto& wb = sys.word(beta.id);
            if (std::none_of(wb.begin(), wb.end(), [&](const PullbackEntry& e) { return e.target == alpha.id; }))
                continue;
            CoiledFatouCertificate cert;
            cert.fixed_point = a;
            cert.alpha = alpha.id;
            cert.beta = beta.id;
            cert.theorem = "coiled-fatou-domain";
            cert.statement = "f^-1(" + alpha.id + ") has a component isotopic to " + alpha.id +
                             " and a component isotopic to the curve " + beta.id + " peripheral around the fixed critical point " +
                             a + ". The Fatou domain containing " + a +
                             " is a Jordan domain, and its closure is disjoint from the closure of every other Fatou domain.";
            cert.verified = true;
            return cert;
        }
    }
    return std::nullopt;
}

}  // namespace mcd
