#pragma once

// Sliced tangle diagrams: parser, group-valued coloring propagation,
// invariant evaluation for colored tangles and string knots, gauge
// testing, and the summation oracle used for trivial-connection probes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qholo/rmatrix.hpp"

namespace qholo {

struct tangle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Slice {
  enum class Kind { Xp, Xm, Cup, Cap, Id };
  Kind kind = Kind::Id;
  long pos = 1;  // 1-based leftmost strand the slice acts on
};

struct Diagram {
  std::vector<Slice> slices;
  long bottom_width = 0;
  long top_width = 0;
  std::vector<long> width_before;  // width entering each slice
  long components = 0;
  long closed_components = 0;
  bool string_knot = false;  // one component, one bottom and one top endpoint
};

// Grammar: one slice per line; tokens "xp I", "xm I", "cup I", "cap I",
// "id"; '#' starts a comment; the bottom width is the least one making
// every position legal.
Diagram parse_diagram(const std::string& text);

struct SegmentColor {
  Mat2 color = Mat2::Identity();
  int branch = +1;
};

// the partner color carried by the second leg of a cup: the group image of
// the dual-group inversion of the point under the first leg
Mat2 cup_partner(const Mat2& c, int branch = +1);

struct ColorState {
  // colors at every horizontal level: levels[0] = bottom boundary,
  // levels[i] = after slice i-1
  std::vector<std::vector<SegmentColor>> levels;
  double cap_residual = 0;  // worst pattern mismatch at the caps
  std::vector<Mat2> cup_colors;  // solved first-leg colors, one per cup slice
};

// Propagates bottom colors through the diagram. Colors of cup-created pairs
// are (c, partner(c)); unknown cup colors are solved from the cap-pattern
// consistency (Newton), seeded near the identity or from cup_seeds (keyed
// by slice index). Closed diagrams need at least one seeded cup, which is
// then held fixed.
ColorState propagate(const Diagram& d, const std::vector<SegmentColor>& bottom,
                     const std::map<long, SegmentColor>& cup_seeds = {});

struct InvariantResult {
  MatX op;          // boundary operator (string knots) or 1x1 (closed)
  Cx scalar = 0;    // Schur scalar for string knots
  double centrality_residual = 0;
  double schur_residual = 0;  // off-identity part relative to the scalar
  bool closed = false;
  long ell = 3;
  std::vector<Cx> gauge_log;  // recorded crossing/glue normalizations
};

// Slice-by-slice evaluation: crossings are the holonomy operators,
// cups/caps the twisted coevaluation/evaluation pairings with the
// antipode-square weight on the clockwise turn. All elementary maps are
// equivariance-checked during assembly.
InvariantResult evaluate(const Diagram& d, const ColorState& colors, long ell,
                         const BuildOptions& opts = {});

struct GaugeTestResult {
  Cx scalar_base, scalar_dressed;
  double relative_difference;
  bool rejected = false;
  std::string reason;
};

// Evaluates at the given colors and at the dressed colors (the same group
// element conjugating every segment color) and compares the scalars.
GaugeTestResult gauge_test(const Diagram& d, const ColorState& colors, const Mat2& g, long ell,
                           const BuildOptions& opts = {});

// Summation oracle at the trivial connection: for q = exp(2 pi i / N) and
// (q)_k = prod_{j<=k} (1 - q^j),
//   <3_1>_N = sum_k conj((q))_k,   <4_1>_N = sum_k |(q)_k|^2.
Cx kashaev_oracle(const std::string& knot, long n);

}  // namespace qholo
