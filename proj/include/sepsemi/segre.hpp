#pragma once

#include <random>
#include <vector>

#include "sepsemi/quadric.hpp"

namespace sepsemi {

/**
 * Complex rational parametrization of the quadric by two projective lines.
 * Smooth kinds map ([s:t],[p:q]) bilinearly onto the surface (the two factors
 * are the complexified rulings). The cone uses the conic parametrization for
 * (x0,x1,x2) and a separate factor toward the apex; that map contracts the
 * fibers over the conic's circular parameters, which the eliminator divides
 * back out.
 */
struct SurfaceParam {
  SurfaceKind kind;
  std::array<Eigen::Matrix2cd, 4> bilinear;  // smooth kinds: x_c = (s,t) A_c (p,q)^T
  Mat4 from_normal;                          // cone formula applies in normal coords
};

SurfaceParam surface_param(const Classification& cls);

/** Ambient point for parameter values (no twist). */
CVec4 param_point(const SurfaceParam& par, cplx s, cplx t, cplx p, cplx q);

/** A point of an intersection divisor on the curve, with multiplicity. */
struct SectionPoint {
  CVec4 xc;           // complex representative scaled by its largest coordinate
  bool real = false;
  Vec4 xr = Vec4::Zero();  // unit real representative when real
  int multiplicity = 1;
};

/** Largest |Im| of the max-coordinate-normalized representative. */
double imaginary_residual(const CVec4& x);

/** Normalize, classify against tol_im*(1+|x|), and fill the real representative. */
SectionPoint make_section_point(const CVec4& x, double tol_im = 1e-7);

/**
 * All 6*deg(G) intersection points (with multiplicity) of the curve {Q=K=0}
 * with the surface divisor {G=0}, G of degree 1 or 2 and not a multiple of Q.
 * Eliminates the second parametrization factor through a Sylvester resultant
 * of the restricted forms, interpolated from unit-circle samples, and polishes
 * every point by Newton on {Q, K, G}. Deterministic given the rng state;
 * retries internally with fresh parameter twists before giving up.
 */
std::vector<SectionPoint> curve_divisor_points(const SurfaceParam& par, const Quadric& Q,
                                               const MultiForm& K, const MultiForm& G,
                                               std::mt19937_64& rng, double tol_im = 1e-7);

/**
 * Candidate singular points of the curve {Q=K=0}: parameters where a fiber of
 * the first-factor projection meets the curve with multiplicity and the
 * transverse derivative vanishes as well. Empty result certifies no singular
 * point was found at the working tolerance. Finds imaginary nodes too.
 */
std::vector<CVec4> curve_singular_candidates(const SurfaceParam& par, const Quadric& Q,
                                             const MultiForm& K, std::mt19937_64& rng,
                                             double tol = 1e-6);

/** A line of one of the rulings contained in the zero set of a form. */
struct ContainedLine {
  CVec4 p0, p1;  // complex span
  int family;    // 0 = first factor fibers, 1 = second (absent on the cone)
};

/**
 * Ruling lines of the surface lying entirely inside {F=0}. A smooth sextic
 * curve form contains none; plane sections through two surface points of a
 * ruling, tangent planes, and reducible cubics built from planes through a
 * ruling do. Each reported line is re-verified by direct evaluation.
 */
std::vector<ContainedLine> contained_ruling_lines(const SurfaceParam& par, const MultiForm& F,
                                                  std::mt19937_64& rng);

}  // namespace sepsemi
