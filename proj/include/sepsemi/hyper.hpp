#pragma once

#include <cstdint>
#include <vector>

#include "sepsemi/curves.hpp"
#include "sepsemi/morphisms.hpp"
#include "sepsemi/topology.hpp"

namespace sepsemi {

// ──────────────────────────────────────────────────────────────────────────
// Hyperelliptic pencils: rational functions f = (a + b*y)/c on y^2 = F(x)
// with F positive on the real axis. The real locus closes up through the two
// points at infinity: two circles (one per branch sign) for odd genus, a
// single circle running through both branches for even genus.
// ──────────────────────────────────────────────────────────────────────────

/** Number of connected components of the real locus. */
int hyper_components(const HyperellipticCurve& H);

/**
 * Cyclic arc coordinate in [0,1) of the affine point (x, ysign*sqrt(F(x))).
 * Odd genus: each branch is one component, infinity at 0 == 1. Even genus:
 * the single circle covers the y>0 branch on [0,1/2) and the y<0 branch on
 * [1/2,1), both with increasing x; infinity sits at 1/2 and at 0 == 1.
 */
double hyper_arc(const HyperellipticCurve& H, double x, int ysign);
int hyper_component(const HyperellipticCurve& H, int ysign);

struct HyperMorphism {
  RPoly a, b, c;
  int degree = 0;  // nominal fiber degree
};

struct HyperFiberPoint {
  double x = 0;
  double y = 0;
  bool infinite = false;  // point at infinity; x carries the branch sign
  int component = 0;
  double arc = 0;
  int multiplicity = 1;
};

struct HyperFiber {
  double theta = 0;  // t = tan(theta)
  std::vector<HyperFiberPoint> points;
  bool all_real = true;
  double max_im = 0;
};

/** The degree-2 projection (x, y) -> x. */
HyperMorphism hyper_projection(const HyperellipticCurve& H);

/**
 * Pencil with polar divisor P = sum (x_i, y_i), y_i = (-1)^i sqrt(F(x_i)):
 * a interpolates the y_i, b = 1, c = prod (x - x_i). Requires exactly g+1
 * strictly increasing x values; the fiber over the infinite parameter value
 * is P itself.
 */
HyperMorphism hyper_pencil_from_divisor(const HyperellipticCurve& H,
                                        const std::vector<double>& xs);

/**
 * Fiber of f over t = tan(theta): roots of (t*c - a)^2 - b^2*F after removing
 * the fixed factor c, with y back-substituted. Points escaping to infinity
 * (leading-coefficient drop) are reported with infinite = true.
 */
HyperFiber hyper_fiber_at(const HyperellipticCurve& H, const HyperMorphism& f,
                          double theta);

DegreeVector hyper_fiber_degree_vector(const HyperellipticCurve& H,
                                       const HyperFiber& fb);

SeparatingCertificate hyper_separating_certificate(const HyperellipticCurve& H,
                                                   const HyperMorphism& f,
                                                   int n_samples);

/**
 * |sum_j q(x_j) / (y_j * f'(p_j))| over the all-real simple fiber at t; the
 * derivative is taken along the curve. Near zero for genuine pencils, for
 * every q of degree <= g-1.
 */
double abel_sum_residual(const HyperellipticCurve& H, const HyperMorphism& f,
                         double theta, const RPoly& q);

bool hyper_interlacing_check(const HyperellipticCurve& H, const HyperFiber& A,
                             const HyperFiber& B, double tol = 1e-7);

/**
 * Orientation induced by the square of the fiber divisor over xbar (plus the
 * fiber at infinity when g is even): sign of prod (x - xbar_j)^2 * dx / y
 * along the traversal. Crossings at the xbar fibers never flip; for even g
 * the two infinity points flip.
 */
OrientationAssignment hyper_d_orientation(const HyperellipticCurve& H,
                                          const std::vector<double>& xbar);

/** Winding orientation of a certified pencil, one sign per component. */
OrientationAssignment hyper_complex_orientation(const HyperellipticCurve& H,
                                                const HyperMorphism& f);

/**
 * Affine chessboard oracle: the plane is colored by the parity of y^2 < F(x),
 * which flips across the curve and is blind to the doubled fiber lines.
 * Returns the traversal sign the coloring induces at (x, ysign*sqrt(F(x))).
 */
int hyper_coloring_sign(const HyperellipticCurve& H, double x, int ysign);

}  // namespace sepsemi
