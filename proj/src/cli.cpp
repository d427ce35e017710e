#include "mcd/cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "mcd/analysis.hpp"
#include "mcd/decomposition.hpp"
#include "mcd/error.hpp"
#include "mcd/numerics/families.hpp"
#include "mcd/numerics/render.hpp"

namespace mcd {

namespace {

Json big(const BigInt& v) {
    if (boost::multiprecision::abs(v) < BigInt(1) << 53) return v.convert_to<long long>();
    return v.str();
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("mcd", sink);
    log->set_pattern("[%l] %v");
    const char* env = std::getenv("MCD_LOG");
    std::string level = env ? env : "quiet";
    if (level == "debug")
        log->set_level(spdlog::level::debug);
    else if (level == "info")
        log->set_level(spdlog::level::info);
    else
        log->set_level(spdlog::level::warn);
    return log;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << j.dump(2) << "\n";
}

std::string fmt_sci(num::Real x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << static_cast<double>(x);
    return os.str();
}

std::string fmt_point(const num::ExtPoint& p) {
    if (p.infinite) return "inf";
    std::ostringstream os;
    os << std::setprecision(12) << static_cast<double>(p.z.real());
    if (std::abs(p.z.imag()) > 1e-14L)
        os << (p.z.imag() < 0 ? "-" : "+") << std::abs(static_cast<double>(p.z.imag())) << "i";
    return os.str();
}

num::Complex parse_center(const std::string& s) {
    std::string t = s;
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream is(t);
    double re = 0, im = 0;
    if (!(is >> re)) throw ValidationError("--center expects 're,im'");
    is >> im;
    return {re, im};
}

Json certificates_section(const CurveSystem& sys) {
    Json certs;
    Json renorm = Json::array();
    for (const auto& p : sys.pieces) {
        if (piece_period(sys, p.id) == 0) continue;
        if (auto c = renormalization_certificate(sys, p.id)) renorm.push_back(to_json(*c));
    }
    certs["renormalization"] = renorm;

    bool coiling = false;
    for (const auto& c : sys.curves)
        if (classify_growth(sys, c.id).kind == GrowthKind::Coiling) coiling = true;
    if (coiling) {
        std::vector<std::string> trace;
        try {
            auto r = find_renormalizable_piece(sys, &trace);
            certs["renormalizable_piece"] = r ? to_json(*r) : Json{{"found", false}, {"trace", trace}};
        } catch (const SideInconsistency& e) {
            certs["renormalizable_piece"] = {{"found", false}, {"error", e.what()}, {"trace", trace}};
        }
    } else {
        certs["renormalizable_piece"] = nullptr;
    }
    auto cf = detect_coiled_fatou(sys);
    certs["coiled_fatou"] = cf ? to_json(*cf) : Json(nullptr);
    return certs;
}

}  // namespace

Json analyze_report(const CurveSystem& sys) {
    Json r;
    auto report = validate(sys);
    r["validation"] = to_json(report);
    if (!report.ok()) return r;

    auto b = counting_matrix(sys);
    auto m = thurston_matrix(sys);
    r["matrices"] = {{"B", to_json(b)}, {"M", to_json(m)}};

    auto spec = perron_root(m);
    Json comps = Json::array();
    for (const auto& c : irreducible_components(sys))
        comps.push_back({{"curves", c.curves}, {"cyclic", c.cyclic}, {"lambda", c.lambda}});
    r["lambda"] = {{"value", spec.lambda},
                   {"power_iteration", spec.power_lambda},
                   {"exact", spec.exact ? Json(*spec.exact) : Json(nullptr)},
                   {"components", comps}};

    auto ob = is_obstruction(sys);
    r["obstruction"] = {{"obstruction", ob.obstruction}, {"lambda", ob.lambda}, {"exact_boundary_test", ob.exact_boundary_test}};
    auto levy = find_levy_cycle(sys);
    r["levy_cycle"] = levy ? to_json(*levy) : Json(nullptr);

    Json growth = Json::object();
    std::vector<Json> kseq(sys.curves.size(), Json::array());
    for (int n = 1; n <= 8; ++n) {
        auto k = kappa_all(sys, n);
        for (std::size_t i = 0; i < k.size(); ++i) kseq[i].push_back(big(k[i]));
    }
    for (std::size_t i = 0; i < sys.curves.size(); ++i) {
        const auto& id = sys.curves[i].id;
        Json g = to_json(classify_growth(sys, id));
        g["periodic"] = is_periodic(sys, id);
        g["kappa_1_to_8"] = kseq[i];
        growth[id] = g;
    }
    r["growth"] = growth;

    auto cantor = find_cantor_submulticurve(sys);
    r["cantor"] = cantor ? Json(*cantor) : Json(nullptr);
    r["separation"] = to_json(separation_report(sys));
    r["certificates"] = certificates_section(sys);
    return r;
}

Json verify_example_report(int example, std::uint64_t seed, bool& all_ok) {
    all_ok = true;
    Json rows = Json::array();
    for (const char* suffix : {".R", ".g0", ".g"}) {
        std::string id = "ex" + std::to_string(example) + suffix;
        const auto& fam = num::family(id);
        auto m = fam.map();
        auto res = num::verify_pcf(m, 64, 1e-8L, seed);
        auto match = num::match_portrait(m, res.portrait, fam.portrait(fam.defaults()));
        const int expected_sum = 2 * m.degree() - 2;
        bool ok = res.pcf && match.ok && res.portrait.max_residual < 1e-8L &&
                  res.portrait.multiplicity_sum == expected_sum;
        all_ok = all_ok && ok;
        Json assignment = Json::object();
        for (const auto& [name, z] : match.assignment) assignment[name] = point_to_json(z);
        rows.push_back({{"family", id},
                        {"formula", fam.formula},
                        {"degree", m.degree()},
                        {"pcf", res.pcf},
                        {"multiplicity_sum", res.portrait.multiplicity_sum},
                        {"expected_multiplicity_sum", expected_sum},
                        {"portrait_match", match.ok},
                        {"portrait_failure", match.failure},
                        {"assignment", assignment},
                        {"diagnostics", res.diagnostics},
                        {"portrait", to_json(res.portrait)},
                        {"ok", ok}});
    }
    return {{"example", example}, {"tolerance", 1e-8}, {"maps", rows}, {"ok", all_ok}};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);
    CLI::App app{"Multicurve decomposition of PCF branched coverings"};
    app.require_subcommand(1);
    std::uint64_t seed = num::RootOptions{}.seed;
    app.add_option("--seed", seed, "root-finder seed");

    auto* analyze = app.add_subcommand("analyze", "analyze a curve system");
    std::string an_path, an_out;
    analyze->add_option("system", an_path, "system JSON file or @fixture")->required();
    analyze->add_option("--out", an_out, "write the report to a file");

    auto* refine = app.add_subcommand("refine", "refine a system to the growth dichotomy");
    std::string rf_path, rf_out;
    int rf_n = 0;
    refine->add_option("system", rf_path)->required();
    refine->add_option("--N", rf_n, "walk length (computed when omitted)")->check(CLI::PositiveNumber);
    refine->add_option("--out", rf_out, "write the refined system to a file");

    auto* certify = app.add_subcommand("certify", "renormalization certificates");
    std::string ct_path, ct_piece, ct_out;
    bool ct_find = false;
    certify->add_option("system", ct_path)->required();
    auto* piece_opt = certify->add_option("--piece", ct_piece, "certify a periodic piece");
    auto* find_opt = certify->add_flag("--find", ct_find, "search for a renormalizable piece");
    piece_opt->excludes(find_opt);
    certify->add_option("--out", ct_out);

    auto* verify = app.add_subcommand("verify-example", "verify the critical portraits of a worked example");
    int vf_example = 1;
    bool vf_json = false;
    verify->add_option("example", vf_example)->required()->check(CLI::IsMember({1, 2}));
    verify->add_flag("--json", vf_json, "print the full JSON report");

    auto* solve = app.add_subcommand("solve-param", "recover a one-parameter constant by Newton iteration");
    int sp_example = 1, sp_digits = 13;
    solve->add_option("example", sp_example)->required()->check(CLI::IsMember({1, 2}));
    solve->add_option("--digits", sp_digits, "required matching digits")->check(CLI::Range(1, 17));

    auto* render = app.add_subcommand("render", "render basins of attraction to a PPM image");
    std::string rd_src, rd_out, rd_center = "0,0";
    double rd_width = 4;
    int rd_px = 256, rd_maxiter = 10000, rd_threads = 1;
    render->add_option("map", rd_src, "builtin family id or map JSON file")->required();
    render->add_option("--out", rd_out, "PPM output path");
    render->add_option("--center", rd_center, "window centre 're,im'");
    render->add_option("--width", rd_width)->check(CLI::PositiveNumber);
    render->add_option("--px", rd_px)->check(CLI::Range(1, 16384));
    render->add_option("--maxiter", rd_maxiter)->check(CLI::PositiveNumber);
    render->add_option("--threads", rd_threads)->check(CLI::Range(1, 256));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (analyze->parsed()) {
            auto sys = load_system(an_path);
            log->info("loaded {} ({} curves, {} pieces)", an_path, sys.curves.size(), sys.pieces.size());
            Json rep = analyze_report(sys);
            emit(rep, an_out, out);
            if (!rep["validation"]["ok"].get<bool>()) {
                err << "validation failed: " << validate(sys).summary() << "\n";
                return kInvalid;
            }
            return kOk;
        }
        if (refine->parsed()) {
            auto sys = load_system(rf_path);
            require_valid(sys);
            auto res = refine_to_dichotomy(sys, rf_n > 0 ? std::optional<int>(rf_n) : std::nullopt);
            log->info("refined with N={} into {} classes", res.N, res.system.curves.size());
            Json j = system_to_json(res.system);
            j["refinement"]["dichotomy"] = res.dichotomy;
            j["refinement"]["residual_bounded"] = res.residual_bounded;
            j["refinement"]["notes"] = res.notes;
            emit(j, rf_out, out);
            if (!rf_out.empty())
                out << "N=" << res.N << " classes=" << res.system.curves.size()
                    << " dichotomy=" << (res.dichotomy ? "true" : "false") << "\n";
            return kOk;
        }
        if (certify->parsed()) {
            auto sys = load_system(ct_path);
            require_valid(sys);
            Json j;
            if (ct_find) {
                std::vector<std::string> trace;
                auto r = find_renormalizable_piece(sys, &trace);
                j = r ? to_json(*r) : Json{{"found", false}, {"trace", trace}};
            } else if (!ct_piece.empty()) {
                if (sys.piece_index(ct_piece) < 0) throw ValidationError("unknown piece '" + ct_piece + "'");
                auto c = renormalization_certificate(sys, ct_piece);
                j["certificate"] = c ? to_json(*c) : Json(nullptr);
                j["combinatorial_data"] = to_json(combinatorial_renormalization_data(sys, ct_piece));
            } else {
                j = certificates_section(sys);
            }
            emit(j, ct_out, out);
            return kOk;
        }
        if (verify->parsed()) {
            bool ok = false;
            Json rep = verify_example_report(vf_example, seed, ok);
            if (vf_json) {
                out << rep.dump(2) << "\n";
                return ok ? kOk : kNonConvergence;
            }
            out << std::left << std::setw(8) << "map" << std::setw(28) << "critical point" << std::setw(6) << "mult"
                << std::setw(10) << "preperiod" << std::setw(8) << "period" << "residual\n";
            for (const auto& row : rep["maps"]) {
                const auto& fam = num::family(row["family"].get<std::string>());
                auto res = num::verify_pcf(fam.map(), 64, 1e-8L, seed);
                for (const auto& o : res.portrait.orbits)
                    out << std::setw(8) << fam.id << std::setw(28) << fmt_point(o.critical.z) << std::setw(6)
                        << o.critical.multiplicity << std::setw(10) << o.cycle_start << std::setw(8) << o.cycle_length
                        << fmt_sci(o.residual) << "\n";
                out << std::setw(8) << fam.id << "multiplicity sum " << row["multiplicity_sum"].get<int>() << "/"
                    << row["expected_multiplicity_sum"].get<int>() << ", portrait "
                    << (row["portrait_match"].get<bool>() ? "matches" : "MISMATCH: " + row["portrait_failure"].get<std::string>())
                    << "\n";
            }
            out << (ok ? "all residuals < 1e-8\n" : "verification FAILED\n");
            return ok ? kOk : kNonConvergence;
        }
        if (solve->parsed()) {
            auto prob = num::builtin_problem(sp_example);
            prob.required_digits = sp_digits;
            auto sol = num::solve_parameter(prob);
            auto ratios = sol.error_ratios();
            out << prob.name << "\n";
            out << std::left << std::setw(6) << "iter" << std::setw(28) << "x" << std::setw(14) << "residual"
                << "step\n";
            for (const auto& s : sol.trace)
                out << std::setw(6) << s.iteration << std::setw(28) << std::setprecision(17)
                    << static_cast<double>(s.x[0].real()) << std::setw(14) << fmt_sci(s.residual) << fmt_sci(s.step)
                    << "\n";
            out << "error ratios e(k+1)/e(k)^2:";
            for (auto r : ratios) out << " " << fmt_sci(r);
            out << "\n";
            out << prob.unknowns[0] << " = " << std::setprecision(17) << static_cast<double>(sol.root[0].real()) << "\n";
            out << "reference " << *prob.target << "\n";
            int shown = std::min(sol.digits, sp_digits);
            out << shown << "/" << sp_digits << " digits match\n";
            return shown >= sp_digits ? kOk : kNonConvergence;
        }
        if (render->parsed()) {
            num::RationalMap m;
            std::string label = rd_src;
            const auto& ids = num::family_ids();
            if (std::find(ids.begin(), ids.end(), rd_src) != ids.end()) {
                m = num::family(rd_src).map();
            } else {
                Json j;
                try {
                    j = Json::parse(read_source(rd_src));
                } catch (const Json::parse_error& e) {
                    throw ValidationError("'" + rd_src + "' is neither a builtin family nor valid JSON");
                }
                m = map_from_json(j);
            }
            auto pcf = num::verify_pcf(m, 64, 1e-8L, seed);
            if (pcf.portrait.cycles.empty())
                throw ConvergenceError("no superattracting cycle found for " + label, pcf.diagnostics);
            num::RenderOptions opt;
            opt.center = parse_center(rd_center);
            opt.width = rd_width;
            opt.px = rd_px;
            opt.max_iter = rd_maxiter;
            opt.threads = rd_threads;
            auto res = num::render_basins(m, pcf.portrait.cycles, opt);
            if (!rd_out.empty()) num::write_ppm(res.image, rd_out);
            Json cycles = Json::array();
            for (const auto& c : res.cycles) {
                Json pts = Json::array();
                for (const auto& z : c.points) pts.push_back(point_to_json(z));
                cycles.push_back(pts);
            }
            out << Json{{"map", label},
                        {"center", point_to_json(num::ExtPoint{opt.center, false})},
                        {"width", rd_width},
                        {"px", rd_px},
                        {"max_iter", rd_maxiter},
                        {"cycles", cycles},
                        {"stats", to_json(res.stats)},
                        {"out", rd_out.empty() ? Json(nullptr) : Json(rd_out)}}
                       .dump(2)
                << "\n";
            return kOk;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ConvergenceError& e) {
        err << "non-convergence: " << e.what() << "\n";
        for (const auto& line : e.trace) err << "  " << line << "\n";
        return kNonConvergence;
    } catch (const ConsistencyError& e) {
        err << "numerical consistency check failed: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace mcd
