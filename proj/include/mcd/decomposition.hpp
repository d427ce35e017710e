#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcd/analysis.hpp"
#include "mcd/curve_complex.hpp"
#include "mcd/error.hpp"

namespace mcd {

// Raised when the side analysis around a fixed coiling curve finds copies on
// both sides, which cannot happen for a PCF rational map.
struct SideInconsistency : ValidationError {
    using ValidationError::ValidationError;
};

// Max over non-coiling, non-periodic gamma and periodic alpha reachable from it
// of the shortest walk gamma -> alpha; 1 when there is no such pair.
int dichotomy_depth(const CurveSystem& sys);

struct RefinementResult {
    CurveSystem system;
    int N = 1;
    bool dichotomy = true;
    std::vector<std::string> residual_bounded;  // refined classes with Bounded(k >= 2)
    std::map<std::string, std::string> projection;
    std::vector<std::string> notes;
};

RefinementResult refine_to_dichotomy(const CurveSystem& sys, std::optional<int> N = std::nullopt);

struct SeparationRow {
    std::string curve;
    std::string left_piece;
    std::string right_piece;
    GrowthClass growth;
    bool disjoint = false;  // small Julia sets on the two sides have disjoint closures
};

struct SeparationReport {
    bool refined = false;
    std::vector<SeparationRow> rows;
};

SeparationReport separation_report(const CurveSystem& sys);

struct BoundaryData {
    std::string curve;
    std::string growth;
    int degree = 1;                // degree of f^p on the tracked copy
    std::string image_curve;       // boundary curve reached after p steps
    std::string synthetic_point;   // collapsed complementary component
};

struct RenormCertificate {
    std::string theorem;
    std::string statement;
    std::string piece;
    int period = 0;
    std::vector<BoundaryData> boundary;
    std::vector<MarkedPoint> marked;   // interior marked points and synthetic points with induced dynamics
    std::vector<std::string> witnesses;
    bool dynamics_consistent = true;  // tracked copies return to the boundary of the piece
    bool verified = false;
};

// Present iff every boundary curve of the periodic piece is coiling.
std::optional<RenormCertificate> renormalization_certificate(const CurveSystem& sys, const std::string& piece);

// Marked-sphere data of the small map on a periodic piece (the map itself is not built).
RenormCertificate combinatorial_renormalization_data(const CurveSystem& sys, const std::string& piece);

struct RenormalizablePiece {
    bool cantor_shortcut = false;
    std::string gamma;
    int period = 0;
    int power = 1;
    std::string chosen_side;  // "left" or "right" of gamma
    std::set<std::string> gamma_star;
    std::set<std::string> lambda_gamma;
    std::string u_gamma;
    std::set<std::string> gamma_prime;
    std::string piece;
    RenormCertificate certificate;
    bool post_completely_stable = false;
    bool post_u_fixed = false;
    bool post_lambda_coiling = false;
    std::vector<std::string> trace;
};

std::optional<RenormalizablePiece> find_renormalizable_piece(const CurveSystem& sys,
                                                              std::vector<std::string>* trace = nullptr);

struct CoiledFatouCertificate {
    std::string fixed_point;
    std::string alpha;
    std::string beta;
    std::string theorem;
    std::string statement;
    bool verified = false;
};

std::optional<CoiledFatouCertificate> detect_coiled_fatou(const CurveSystem& sys);

}  // namespace mcd
