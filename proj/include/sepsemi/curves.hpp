#pragma once

#include <random>
#include <string>
#include <vector>

#include "sepsemi/quadric.hpp"

namespace sepsemi {

/**
 * A genus-4 space curve presented as quadric ∩ cubic. Coefficients are real,
 * so the curve is invariant under conjugation. The provenance block records
 * how a synthesized model was built; curves loaded from user input carry an
 * empty recipe id.
 */
struct SexticProvenance {
  std::string recipe;  // empty for user-supplied curves
  SurfaceKind kind = SurfaceKind::ellipsoid;
  int r = 0;           // requested component count
  int l = 0;           // requested oval count
  double epsilon = 0;  // smoothing size
};

struct SpaceSextic {
  Quadric quadric;
  MultiForm cubic;
  SexticProvenance provenance;
};

/**
 * The two ingredients a model recipe perturbs: `base` is the reducible union
 * (three plane sections, or a plane section times a cylinder section) and
 * `bump` the cubic that smooths it. The synthesized model is base - eps*bump
 * on the normal-form surface of the recipe's kind.
 */
struct ModelParts {
  SurfaceKind kind;
  int r = 0, l = 0;
  bool cylinder = false;  // recipe family: plane*quadric instead of three planes
  MultiForm base;
  MultiForm bump;
  double eps_default = 0;
  double eps_max = 0;
};

/** Recipe table lookup; throws invalid_input for a pair outside the table. */
const ModelParts& model_sextic_parts(SurfaceKind kind, int r, int l);

/**
 * Synthesize the model curve of topology (r, l) on the given surface kind and
 * validate it: smoothness certificate plus a trace that must reproduce (r, l).
 * eps = 0 keeps the singular union and is rejected; eps outside the recipe's
 * working range fails the topology check and is rejected with a diagnostic.
 * The overload without eps uses the recipe's frozen default.
 */
SpaceSextic model_sextic(SurfaceKind kind, int r, int l, double eps);
SpaceSextic model_sextic(SurfaceKind kind, int r, int l);

/**
 * Heuristic smoothness/irreducibility certificate for the complex curve:
 *  - the cubic must not be divisible by the quadric and the intersection must
 *    not contain a ruling line (either failure marks the curve reducible);
 *  - a parameter-space scan must produce no singular candidates (this covers
 *    imaginary singular points);
 *  - Newton refinement from a grid x grid chart seed set must find no real
 *    point with |Q|, |K| below tol where all 2x2 minors of the Jacobian
 *    vanish to tol as well.
 */
struct SmoothnessCertificate {
  bool ok = false;
  int grid = 0;
  double tol = 0;
  std::string reject_reason;            // empty when ok
  std::vector<Vec4> real_singular;      // unit representatives of real witnesses
  std::vector<CVec4> complex_singular;  // scan candidates (imaginary included)
};

SmoothnessCertificate validate_smoothness(const SpaceSextic& C, int grid = 48,
                                          double tol = 1e-6);

/**
 * Hyperelliptic curve y^2 = F(x) with F positive on the real axis, so the
 * real locus is two disjoint copies of the x-line's circle and the curve is
 * separating with halves y > 0 and y < 0 over ℝ.
 */
struct HyperellipticCurve {
  int g = 0;
  UniPoly<double> F;  // degree 2g+2, ascending coefficients
  int parity = 0;     // g mod 2; the shape of realizable vectors depends on it
};

/**
 * F = prod_i (x - a_i)^2 + delta for distinct a_1..a_{g+1} and delta > 0:
 * positive on the reals, square-free for small delta, degree 2g+2.
 */
HyperellipticCurve model_hyperelliptic(int g, const std::vector<double>& spread, double delta);

/**
 * Component-ordering functional of a model recipe: orders the traced
 * components so that the labels c1 < c2 < c3 match the recipe's geometry
 * (the plane-section component of a cylinder recipe is the middle one).
 * value = mean over the polyline of num/den (den identically one when the
 * recipe orders by a plain linear value).
 */
double model_order_value(const SpaceSextic& C, const std::vector<Vec4>& component_points);

}  // namespace sepsemi
