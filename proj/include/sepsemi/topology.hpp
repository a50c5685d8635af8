#pragma once

#include <cstdint>
#include <vector>

#include "sepsemi/trace.hpp"

namespace sepsemi {

// ───────────────────────── Locus geometry helpers ─────────────────────────

/** Nearest point of the traced locus: component id, cyclic arc position in
 *  [0,1) along the stored traversal, and the projective distance. */
struct LocusPosition {
  int component = -1;
  double arc = 0;
  double dist = 0;
};

LocusPosition locate_on_locus(const RealLocus& locus, const Vec4& x);

/** Interpolated polyline point at a cyclic arc position. */
Vec4 point_at_arc(const TracedComponent& comp, double arc);

/** Chart tangent direction of the stored traversal at an arc position. */
Eigen::Vector2d chart_tangent_at_arc(const Chart& chart, const TracedComponent& comp,
                                     double arc);

/** Min-norm Newton projection onto {Q = 0, K = 0}; unit representative. */
Vec4 project_to_curve(const SpaceSextic& C, Vec4 x, double tol = 1e-11);

// ───────────────────────── Plane sections of the surface ─────────────────────────

/**
 * Real branch of a plane section of the surface, as a chart trail. Conic
 * branches and ruling lines close up; cone generators run from apex to apex
 * and are marked boundary arcs. Multiplicity 2 marks the double generator cut
 * out by a plane tangent to the cone along a ruling.
 */
struct SectionBranch {
  std::vector<Eigen::Vector2d> uv;
  std::vector<Vec4> points;  // unit ambient representatives matching uv
  int multiplicity = 1;
  bool boundary_arc = false;
  HomologyClass cls;
};

/** D = D0 + D1: the even-multiplicity part and the reduced odd part. */
struct SectionDivisor {
  Vec4 h = Vec4::Zero();  // unit normal of the cutting plane
  std::vector<SectionBranch> d0, d1;

  bool real_empty() const { return d0.empty() && d1.empty(); }
};

/**
 * Cut the surface of C by the plane {h.x = 0} and classify the real locus:
 * irreducible conic, two crossing lines, or a double line. A plane whose
 * section has a single real point is rejected (perturb the plane instead).
 */
SectionDivisor section_divisor(const SpaceSextic& C, const Vec4& h, int n_samples = 800);

// ───────────────────────── Chess-board coloring ─────────────────────────

/** Closed chart polyline, or a boundary-to-boundary arc on the cone chart. */
struct ChartArc {
  std::vector<Eigen::Vector2d> uv;
  bool boundary_arc = false;
};

/**
 * 2-coloring of the chart complement of a family of arcs. Cells touched by an
 * arc are blocked; the remaining cells merge into regions, and colors alternate
 * across every arc. Crossing parities are counted on dual edges between cell
 * centers, so the coloring exists iff the total arc class vanishes mod 2;
 * otherwise chessboard_coloring throws "not chessboard-colorable".
 */
struct Coloring {
  Chart chart;
  double u0 = 0, v0 = 0, cell = 0;
  int nu = 0, nv = 0;
  bool wrap_u = false, wrap_v = false;
  std::vector<std::uint8_t> color;    // nu*nv entries, 0 or 1
  std::vector<std::uint8_t> blocked;  // nu*nv entries
  std::vector<int> region;            // -1 on blocked cells
  int n_regions = 0;

  int cell_index(double u, double v) const;  // -1 outside the grid
  /** Color at a chart point; -1 when the cell is blocked or outside. */
  int color_at(double u, double v) const;
  int region_at(double u, double v) const;
};

Coloring chessboard_coloring(const Chart& chart, const std::vector<ChartArc>& arcs);

/** Arcs of the real curve plus the odd part of an optional section divisor. */
Coloring chessboard_coloring(const SpaceSextic& C, const RealLocus& locus,
                             const SectionDivisor* D = nullptr);

// ───────────────────────── Orientations ─────────────────────────

/** Crossing of a traced component with a section divisor. */
struct OrientationCrossing {
  int component = -1;
  double arc = 0;
  Vec4 x = Vec4::Zero();
  bool flips = true;  // false on even-multiplicity branches
};

/**
 * Signs along the traced components, relative to each component's stored
 * traversal direction. Each component carries a cyclic list of arcs
 * (start position, sign); a component without crossings has a single arc.
 * Assignments are meaningful up to one simultaneous global flip; construction
 * normalizes the sign at component 0, arc position 0 to +1.
 */
struct OrientationAssignment {
  std::vector<std::vector<std::pair<double, int>>> arcs;  // per component, sorted starts
  std::vector<OrientationCrossing> crossings;
  Vec4 section_h = Vec4::Zero();  // set for D-orientations
  bool has_section = false;

  int sign_at(int component, double arc) const;
  void normalize();  // global flip so that sign_at(0, 0) == +1
};

/** True when the per-arc signs agree everywhere, or differ everywhere. */
bool orientations_agree_up_to_flip(const OrientationAssignment& A,
                                   const OrientationAssignment& B);

/**
 * Boundary orientation of the positively colored side along every component,
 * with crossings of the section divisor resolved: signs flip exactly at
 * odd-multiplicity crossings and persist across even ones. Tangential or
 * unresolved crossings throw "perturb D".
 */
OrientationAssignment d_orientation(const SpaceSextic& C, const RealLocus& locus,
                                    const SectionDivisor& D, const Coloring& coloring);

// ───────────────────────── Linking and the fiber obstruction ─────────────────────────

/**
 * Mod-2 linking of the projective line through p0, p1 with a traced loop:
 * winding parity of the pencil of planes through the line along the loop.
 * Throws when the loop meets the line within tolerance.
 */
bool is_linked(const Vec4& p0, const Vec4& p1, const TracedComponent& loop,
               double tol_incidence = 1e-6);

enum class ObstructionVerdict { consistent, obstructed_ok, vacuous };

const char* verdict_name(ObstructionVerdict v);

/** Real fiber point located on the locus; on_d declares membership in D. */
struct FiberPointRef {
  int component = -1;
  double arc = 0;
  Vec4 x = Vec4::Zero();
  bool on_d = false;
};

/**
 * Compare a D-orientation with a complex orientation at the fiber points away
 * from D. "consistent" means the two agree at every point under one of the two
 * global flips (the configuration a separating fiber can never produce);
 * disagreement anywhere is "obstructed-ok"; no points off D is "vacuous".
 * A point lying on the section without being declared is an input error.
 */
ObstructionVerdict obstruction_check(const std::vector<FiberPointRef>& P,
                                     const OrientationAssignment& d_or,
                                     const OrientationAssignment& c_or,
                                     double tol_on_section = 1e-6);

}  // namespace sepsemi
