#pragma once

// Combinatorial model of a marked sphere cut along a completely stable
// (pseudo-)multicurve: marked points, curve classes, complementary pieces,
// the induced piece map and the ordered pullback table.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mcd {

enum class Orientation { Same, Reversed };

inline Orientation compose(Orientation a, Orientation b) {
    return a == b ? Orientation::Same : Orientation::Reversed;
}

struct MarkedPoint {
    std::string id;
    std::string image;
    bool critical = false;
    bool synthetic = false;  // added by refinement
};

struct CurveClass {
    std::string id;
    std::string left_piece;
    std::string right_piece;
    std::optional<std::string> peripheral_around;

    bool essential() const { return !peripheral_around; }
};

// One essential component of F^{-1}(target) isotopic to the owning curve.
struct PullbackEntry {
    std::string target;
    int degree = 1;
    Orientation orientation = Orientation::Same;

    bool operator==(const PullbackEntry&) const = default;
};

enum class InessentialKind { Peripheral, Trivial };

struct InessentialEntry {
    InessentialKind kind = InessentialKind::Trivial;
    std::optional<std::string> point;  // set for Peripheral
    int degree = 1;

    bool operator==(const InessentialEntry&) const = default;
};

struct Piece {
    std::string id;
    std::vector<std::string> boundary;
    std::vector<std::string> points;
    std::string image;
};

// Bookkeeping attached to systems produced by refine_to_dichotomy.
struct RefinementInfo {
    int N = 1;
    std::vector<std::string> markers;
    std::map<std::string, std::string> projections;  // refined class -> source curve
};

struct CurveSystem {
    int degree = 2;
    std::vector<MarkedPoint> points;
    std::vector<CurveClass> curves;
    std::vector<Piece> pieces;
    // words[c] lists the components isotopic to c from left_piece to right_piece.
    std::map<std::string, std::vector<PullbackEntry>> words;
    std::optional<std::map<std::string, std::vector<InessentialEntry>>> inessential;
    std::optional<RefinementInfo> refinement;

    int curve_index(const std::string& id) const;
    int piece_index(const std::string& id) const;
    int point_index(const std::string& id) const;

    const CurveClass& curve(const std::string& id) const;
    const Piece& piece(const std::string& id) const;
    const MarkedPoint& point(const std::string& id) const;

    std::vector<std::string> curve_ids() const;
    const std::vector<PullbackEntry>& word(const std::string& curve) const;
};

struct Violation {
    std::string rule;
    std::vector<std::string> ids;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
    bool has(const std::string& rule) const;
    std::string summary() const;
};

ValidationReport validate(const CurveSystem& sys);

// Throws ValidationError carrying the report summary when validation fails.
void require_valid(const CurveSystem& sys);

struct DualTreeEdge {
    std::string curve;
    std::string a;  // left piece
    std::string b;  // right piece
};

struct DualTree {
    std::vector<std::string> nodes;
    std::vector<DualTreeEdge> edges;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> adjacency;  // piece -> (curve, piece)

    // Pieces on the side of `curve` that contains `piece_on_side`.
    std::set<std::string> side(const std::string& curve, const std::string& piece_on_side) const;
};

DualTree dual_tree(const CurveSystem& sys);

// Curves outside `lambda` with an entry into `lambda` (stability violators)
// and curves inside `lambda` with no entry into it (pre-stability violators).
struct StabilityCheck {
    std::vector<std::string> unstable;
    std::vector<std::string> not_prestable;
    bool ok() const { return unstable.empty() && not_prestable.empty(); }
};

StabilityCheck check_stability(const CurveSystem& sys, const std::set<std::string>& lambda);

// Pieces glued across curves not in lambda. Keys: original piece ids.
std::map<std::string, std::string> merged_piece_names(const CurveSystem& sys,
                                                      const std::set<std::string>& lambda);

std::map<std::string, std::string> induced_piece_map(const CurveSystem& sys,
                                                     const std::set<std::string>& lambda);

CurveSystem sub_system(const CurveSystem& sys, const std::set<std::string>& lambda);

// Forward orbit of a piece under the piece map; the period is the length of
// the terminal cycle if it contains the piece, otherwise 0.
int piece_period(const CurveSystem& sys, const std::string& piece);

bool structurally_equal(const CurveSystem& a, const CurveSystem& b);

}  // namespace mcd
