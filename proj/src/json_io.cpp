#include "mcd/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mcd/error.hpp"

namespace mcd {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
    return j.at(key);
}

std::string str(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) throw ValidationError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<std::string> str_list(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_array()) throw ValidationError(where + ": '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) throw ValidationError(where + ": '" + key + "' must hold strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

int integer(const Json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ValidationError(where + " must be an integer");
    return v.get<int>();
}

Orientation orientation(const std::string& s, const std::string& where) {
    if (s == "Same" || s == "same" || s == "+") return Orientation::Same;
    if (s == "Reversed" || s == "reversed" || s == "-") return Orientation::Reversed;
    throw ValidationError(where + ": orientation must be Same or Reversed");
}

const char* name(Orientation o) { return o == Orientation::Same ? "Same" : "Reversed"; }

PullbackEntry entry_from_json(const Json& e, const std::string& where) {
    PullbackEntry p;
    if (e.is_array()) {
        if (e.size() != 3 || !e[0].is_string() || !e[2].is_string())
            throw ValidationError(where + ": entry arrays are [target, degree, orientation]");
        p.target = e[0].get<std::string>();
        p.degree = integer(e[1], where + " degree");
        p.orientation = orientation(e[2].get<std::string>(), where);
        return p;
    }
    p.target = str(e, "target", where);
    p.degree = e.contains("degree") ? integer(e.at("degree"), where + " degree") : 1;
    p.orientation = e.contains("orientation") ? orientation(e.at("orientation").get<std::string>(), where)
                                              : Orientation::Same;
    return p;
}

}  // namespace

CurveSystem system_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("system: top level must be an object");
    CurveSystem s;
    s.degree = integer(field(j, "degree", "system"), "degree");
    for (const auto& p : field(j, "points", "system")) {
        MarkedPoint m;
        m.id = str(p, "id", "point");
        m.image = p.contains("image") ? p.at("image").get<std::string>() : m.id;
        m.critical = p.value("critical", false);
        m.synthetic = p.value("synthetic", false);
        s.points.push_back(m);
    }
    for (const auto& c : field(j, "curves", "system")) {
        CurveClass cc;
        cc.id = str(c, "id", "curve");
        cc.left_piece = str(c, "left_piece", "curve " + cc.id);
        cc.right_piece = str(c, "right_piece", "curve " + cc.id);
        if (c.contains("peripheral_around") && !c.at("peripheral_around").is_null())
            cc.peripheral_around = c.at("peripheral_around").get<std::string>();
        s.curves.push_back(cc);
    }
    for (const auto& p : field(j, "pieces", "system")) {
        Piece pc;
        pc.id = str(p, "id", "piece");
        pc.boundary = str_list(p, "boundary", "piece " + pc.id);
        pc.points = str_list(p, "points", "piece " + pc.id);
        pc.image = p.contains("image") ? p.at("image").get<std::string>() : pc.id;
        s.pieces.push_back(pc);
    }
    const Json& words = field(j, "words", "system");
    if (!words.is_object()) throw ValidationError("words must be an object keyed by curve id");
    for (const auto& [cid, list] : words.items()) {
        auto& w = s.words[cid];
        for (const auto& e : list) w.push_back(entry_from_json(e, "words[" + cid + "]"));
    }
    if (j.contains("inessential") && !j.at("inessential").is_null()) {
        std::map<std::string, std::vector<InessentialEntry>> table;
        for (const auto& [cid, list] : j.at("inessential").items()) {
            auto& v = table[cid];
            for (const auto& e : list) {
                InessentialEntry ie;
                std::string kind = str(e, "kind", "inessential[" + cid + "]");
                if (kind == "Peripheral") {
                    ie.kind = InessentialKind::Peripheral;
                    ie.point = str(e, "point", "inessential[" + cid + "]");
                } else if (kind == "Trivial") {
                    ie.kind = InessentialKind::Trivial;
                } else {
                    throw ValidationError("inessential[" + cid + "]: kind must be Peripheral or Trivial");
                }
                ie.degree = integer(field(e, "degree", "inessential[" + cid + "]"), "inessential degree");
                v.push_back(ie);
            }
        }
        s.inessential = std::move(table);
    }
    if (j.contains("refinement") && !j.at("refinement").is_null()) {
        const Json& r = j.at("refinement");
        RefinementInfo info;
        info.N = integer(field(r, "N", "refinement"), "refinement N");
        info.markers = str_list(r, "markers", "refinement");
        for (const auto& [k, v] : field(r, "projections", "refinement").items()) info.projections[k] = v.get<std::string>();
        s.refinement = info;
    }
    return s;
}

Json system_to_json(const CurveSystem& s) {
    Json j;
    j["degree"] = s.degree;
    j["points"] = Json::array();
    for (const auto& p : s.points) {
        Json o{{"id", p.id}, {"image", p.image}, {"critical", p.critical}};
        if (p.synthetic) o["synthetic"] = true;
        j["points"].push_back(o);
    }
    j["curves"] = Json::array();
    for (const auto& c : s.curves) {
        Json o{{"id", c.id}, {"left_piece", c.left_piece}, {"right_piece", c.right_piece}};
        if (c.peripheral_around) o["peripheral_around"] = *c.peripheral_around;
        j["curves"].push_back(o);
    }
    j["pieces"] = Json::array();
    for (const auto& p : s.pieces)
        j["pieces"].push_back({{"id", p.id}, {"boundary", p.boundary}, {"points", p.points}, {"image", p.image}});
    j["words"] = Json::object();
    for (const auto& c : s.curves) {
        Json list = Json::array();
        for (const auto& e : s.word(c.id))
            list.push_back({{"target", e.target}, {"degree", e.degree}, {"orientation", name(e.orientation)}});
        j["words"][c.id] = list;
    }
    if (s.inessential) {
        Json t = Json::object();
        for (const auto& [cid, list] : *s.inessential) {
            Json l = Json::array();
            for (const auto& e : list) {
                Json o{{"kind", e.kind == InessentialKind::Peripheral ? "Peripheral" : "Trivial"}};
                if (e.point) o["point"] = *e.point;
                o["degree"] = e.degree;
                l.push_back(o);
            }
            t[cid] = l;
        }
        j["inessential"] = t;
    }
    if (s.refinement) {
        Json proj = Json::object();
        for (const auto& [k, v] : s.refinement->projections) proj[k] = v;
        j["refinement"] = {{"N", s.refinement->N}, {"markers", s.refinement->markers}, {"projections", proj}};
    }
    return j;
}

std::string read_source(const std::string& src) {
    if (!src.empty() && src[0] == '@') {
        const auto& fx = embedded_fixtures();
        auto it = fx.find(src.substr(1));
        if (it == fx.end()) throw ValidationError("unknown embedded fixture '" + src.substr(1) + "'");
        return it->second;
    }
    std::ifstream in(src);
    if (!in) throw ValidationError("cannot read '" + src + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CurveSystem load_system(const std::string& src) {
    Json j;
    try {
        j = Json::parse(read_source(src));
    } catch (const Json::parse_error& e) {
        throw ValidationError("'" + src + "' is not valid JSON: " + e.what());
    }
    return system_from_json(j);
}

num::RationalMap map_from_json(const Json& j) {
    auto poly = [](const Json& a, const char* key) {
        if (!a.is_array()) throw ValidationError(std::string("map: '") + key + "' must be an array");
        num::Poly p;
        for (const auto& c : a) {
            if (c.is_number()) {
                p.c.emplace_back(c.get<double>(), 0.0);
            } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
                p.c.emplace_back(c[0].get<double>(), c[1].get<double>());
            } else if (c.is_string()) {
                p.c.emplace_back(std::stold(c.get<std::string>()), 0.0L);
            } else {
                throw ValidationError("map coefficients must be numbers or [re, im] pairs");
            }
        }
        return p;
    };
    num::RationalMap m{poly(field(j, "num", "map"), "num"), poly(field(j, "den", "map"), "den")};
    if (m.den.degree() < 0) throw ValidationError("map denominator is zero");
    if (m.degree() < 2) throw ValidationError("map degree must be at least 2");
    return m;
}

Json map_to_json(const num::RationalMap& m) {
    auto poly = [](const num::Poly& p) {
        Json a = Json::array();
        for (const auto& c : p.c) a.push_back({static_cast<double>(c.real()), static_cast<double>(c.imag())});
        return a;
    };
    return {{"num", poly(m.num)}, {"den", poly(m.den)}};
}

Json to_json(const ValidationReport& r) {
    Json v = Json::array();
    for (const auto& x : r.violations) v.push_back({{"rule", x.rule}, {"ids", x.ids}, {"message", x.message}});
    return {{"ok", r.ok()}, {"violations", v}, {"warnings", r.warnings}};
}

Json to_json(const CountingMatrix& b) { return {{"ids", b.ids}, {"B", b.b}}; }

Json to_json(const ThurstonMatrix& m) {
    Json exact = Json::array();
    for (const auto& row : m.exact) {
        Json r = Json::array();
        for (const auto& x : row) {
            std::ostringstream os;
            os << x;
            r.push_back(os.str());
        }
        exact.push_back(r);
    }
    return {{"ids", m.ids}, {"M", m.values()}, {"exact", exact}};
}

Json to_json(const Cycle& c) {
    Json e = Json::array();
    for (const auto& x : c.edges) e.push_back({{"source", x.source}, {"index", x.index}, {"target", x.target}});
    return {{"curves", c.curves()}, {"edges", e}};
}

Json to_json(const GrowthClass& g) {
    Json j{{"class", g.name()}};
    if (g.kind == GrowthKind::Coiling) {
        Json w;
        if (g.branching) w["branching"] = *g.branching;
        if (g.feeding_cycle) w["cycle"] = to_json(*g.feeding_cycle);
        j["witness"] = w;
    } else {
        j["limit"] = g.limit.str();
        j["stabilization_depth"] = g.stabilization_depth;
    }
    return j;
}

Json to_json(const SeparationReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"curve", x.curve},
                        {"pieces", {x.left_piece, x.right_piece}},
                        {"growth", x.growth.name()},
                        {"verdict", x.disjoint ? "disjoint" : "touching"}});
    return {{"refined", r.refined}, {"rows", rows}};
}

Json to_json(const RenormCertificate& c) {
    Json b = Json::array();
    for (const auto& x : c.boundary)
        b.push_back({{"curve", x.curve},
                     {"growth", x.growth},
                     {"degree", x.degree},
                     {"image_curve", x.image_curve},
                     {"synthetic_point", x.synthetic_point}});
    Json pts = Json::array();
    for (const auto& p : c.marked)
        pts.push_back({{"id", p.id}, {"image", p.image}, {"critical", p.critical}, {"synthetic", p.synthetic}});
    return {{"theorem", c.theorem},
            {"statement", c.statement},
            {"piece", c.piece},
            {"period", c.period},
            {"boundary", b},
            {"marked_points", pts},
            {"witnesses", c.witnesses},
            {"dynamics_consistent", c.dynamics_consistent},
            {"verified", c.verified}};
}

Json to_json(const RenormalizablePiece& r) {
    return {{"cantor_shortcut", r.cantor_shortcut},
            {"gamma", r.gamma},
            {"period", r.period},
            {"power", r.power},
            {"chosen_side", r.chosen_side},
            {"gamma_star", r.gamma_star},
            {"lambda_gamma", r.lambda_gamma},
            {"u_gamma", r.u_gamma},
            {"gamma_prime", r.gamma_prime},
            {"piece", r.piece},
            {"postconditions",
             {{"completely_stable", r.post_completely_stable},
              {"u_gamma_fixed", r.post_u_fixed},
              {"lambda_gamma_coiling", r.post_lambda_coiling}}},
            {"certificate", to_json(r.certificate)},
            {"trace", r.trace}};
}

Json to_json(const CoiledFatouCertificate& c) {
    return {{"theorem", c.theorem},
            {"statement", c.statement},
            {"witnesses", {{"fixed_point", c.fixed_point}, {"alpha", c.alpha}, {"beta", c.beta}}},
            {"verified", c.verified}};
}

Json to_json(const RefinementResult& r) {
    return {{"N", r.N},
            {"dichotomy", r.dichotomy},
            {"residual_bounded", r.residual_bounded},
            {"notes", r.notes},
            {"system", system_to_json(r.system)}};
}

Json point_to_json(const num::ExtPoint& p) {
    if (p.infinite) return "inf";
    return Json::array({static_cast<double>(p.z.real()), static_cast<double>(p.z.imag())});
}

Json to_json(const num::CriticalPortrait& p) {
    Json orbits = Json::array();
    for (const auto& o : p.orbits) {
        Json steps = Json::array();
        for (const auto& s : o.steps) steps.push_back(point_to_json(s.z));
        orbits.push_back({{"critical_point", point_to_json(o.critical.z)},
                          {"multiplicity", o.critical.multiplicity},
                          {"orbit", steps},
                          {"cycle_start", o.cycle_start},
                          {"cycle_length", o.cycle_length},
                          {"residual", static_cast<double>(o.residual)}});
    }
    Json cycles = Json::array();
    for (const auto& c : p.cycles) {
        Json pts = Json::array();
        for (const auto& z : c.points) pts.push_back(point_to_json(z));
        cycles.push_back({{"points", pts}, {"superattracting", c.superattracting}});
    }
    return {{"degree", p.degree},
            {"multiplicity_sum", p.multiplicity_sum},
            {"max_residual", static_cast<double>(p.max_residual)},
            {"orbits", orbits},
            {"attracting_cycles", cycles}};
}

Json to_json(const num::RenderStats& s) {
    return {{"pixels", s.total},
            {"classified", s.classified},
            {"classified_fraction", s.classified_fraction},
            {"basin_pixels", s.basin_pixels}};
}

}  // namespace mcd
