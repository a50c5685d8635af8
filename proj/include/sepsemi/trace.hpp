#pragma once

#include <vector>

#include "sepsemi/curves.hpp"

namespace sepsemi {

/**
 * One connected component of the real locus: a closed polyline of unit
 * ambient representatives (consecutive points within the step bound, last
 * point closing to the first), its chart trail, and its homology class.
 * `oval` means the class is trivial, i.e. the loop bounds a disk in the real
 * surface (apex removed for the cone).
 */
struct TracedComponent {
  std::vector<Vec4> points;
  std::vector<Eigen::Vector2d> uv;
  HomologyClass cls;
  bool oval = false;
};

struct RealLocus {
  SurfaceKind kind;
  int r = 0;  // component count
  int l = 0;  // oval count
  std::vector<TracedComponent> components;  // sorted by the model order value
};

/**
 * Trace the real locus of C by continuation on the unit sphere of the ambient
 * coordinates: seeds come from sign changes of the cubic over a chart grid,
 * every component is followed by a predictor-corrector walk until it closes
 * (projectively: a walk may return to the antipode and continue), and the
 * homology class is read off the accumulated chart winding. Components are
 * sorted by model_order_value. Throws non_convergence if continuation stalls
 * or hits a point where the curve's Jacobian degenerates.
 */
RealLocus trace_real_locus(const SpaceSextic& C, double step = 0.01, double tol_trace = 1e-9);

}  // namespace sepsemi
