#pragma once

// JSON schema for curve systems, rational maps and reports.

#include <map>
#include <string>

#include "json.hpp"
#include "mcd/analysis.hpp"
#include "mcd/curve_complex.hpp"
#include "mcd/decomposition.hpp"
#include "mcd/numerics/rational_map.hpp"
#include "mcd/numerics/render.hpp"
#include "mcd/pullback.hpp"

namespace mcd {

using Json = nlohmann::ordered_json;

CurveSystem system_from_json(const Json& j);
Json system_to_json(const CurveSystem& sys);

// Fixture name -> file contents, compiled into the library.
const std::map<std::string, std::string>& embedded_fixtures();

// A path, or "@name" for an embedded fixture.
std::string read_source(const std::string& path_or_fixture);
CurveSystem load_system(const std::string& path_or_fixture);

// {"num": [...], "den": [...]}; coefficients ascending, each a number or [re, im].
num::RationalMap map_from_json(const Json& j);
Json map_to_json(const num::RationalMap& m);

Json to_json(const ValidationReport& r);
Json to_json(const CountingMatrix& b);
Json to_json(const ThurstonMatrix& m);
Json to_json(const Cycle& c);
Json to_json(const GrowthClass& g);
Json to_json(const SeparationReport& r);
Json to_json(const RenormCertificate& c);
Json to_json(const RenormalizablePiece& r);
Json to_json(const CoiledFatouCertificate& c);
Json to_json(const RefinementResult& r);

Json point_to_json(const num::ExtPoint& p);
Json to_json(const num::CriticalPortrait& p);
Json to_json(const num::RenderStats& s);

}  // namespace mcd
