#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sepsemi/segre.hpp"
#include "sepsemi/topology.hpp"
#include "sepsemi/trace.hpp"

namespace sepsemi {

// ───────────────────────── Pencils on the space sextic ─────────────────────────

/** Conjugation-invariant list of curve points with multiplicities. */
struct Divisor {
  std::vector<SectionPoint> points;

  int degree() const {
    int d = 0;
    for (const auto& p : points) d += p.multiplicity;
    return d;
  }
};

enum class MorphismKind { plane_pencil, quadric_pencil, hyperelliptic };

const char* morphism_kind_name(MorphismKind k);

/**
 * Map to the projective line p -> [S0(p) : S1(p)] given by two independent
 * forms of equal degree; the base divisor collects the common zeros on the
 * curve, which every member of the pencil contains and every fiber drops.
 */
struct MorphismRep {
  MorphismKind kind = MorphismKind::plane_pencil;
  MultiForm s0 = MultiForm::zero(1), s1 = MultiForm::zero(1);
  Divisor base;
  int degree = 0;  // fiber degree after removing the base
};

/** Point of a fiber; real points carry their place on the traced locus. */
struct FiberPoint {
  SectionPoint pt;
  int component = -1;
  double arc = 0;
};

struct Fiber {
  double theta = 0;  // the member cos(theta)*S1 - sin(theta)*S0, t = tan(theta)
  std::vector<FiberPoint> points;
  bool all_real = true;
  double max_im = 0;  // largest imaginary residual among the real points
};

/** Per-component real fiber counts in the traced component order. */
using DegreeVector = std::vector<int>;

/** Pencil of planes through the line spanned by two points (not on C). */
MorphismRep plane_pencil_line(const SpaceSextic& C, const RealLocus& locus,
                              const Vec4& p0, const Vec4& p1, std::uint64_t seed);

/**
 * Pencil of planes through two real curve points. A line of the surface
 * through curve points on two distinct components is rejected: the pencil
 * would not move those points at all.
 */
MorphismRep plane_pencil_points(const SpaceSextic& C, const RealLocus& locus,
                                const Vec4& p, const Vec4& q, std::uint64_t seed);

/** Pencil of planes through a conjugate pair of imaginary curve points. */
MorphismRep plane_pencil_conj(const SpaceSextic& C, const RealLocus& locus,
                              const CVec4& p, std::uint64_t seed);

/**
 * Degree-5 pencil through a divisor P of 5 real curve points: a quadric S0
 * through P leaves a residual divisor R of 7 points on the curve, and the
 * pencil of quadrics through R moves exactly 5 points. Rank-deficient
 * configurations are retried with P jittered along the locus (5 attempts);
 * P is updated in place so the caller sees the divisor actually used.
 */
MorphismRep quadric_pencil_through(const SpaceSextic& C, const RealLocus& locus,
                                   std::vector<Vec4>& P, std::uint64_t seed);

/** Fiber over t = tan(theta); theta = pi/2 is the fiber of S0 = 0. */
Fiber fiber_at(const SpaceSextic& C, const RealLocus& locus, const MorphismRep& f,
               double theta, std::uint64_t seed);

DegreeVector fiber_degree_vector(const RealLocus& locus, const Fiber& fb);

/** Numerical separation certificate from a dense parameter sweep. */
struct SeparatingCertificate {
  bool separating = false;
  int n_samples = 0;
  DegreeVector degrees;
  double max_im = 0;
  double min_root_separation = 0;
  double witness_theta = 0;  // set on refusal
  std::string reason;        // empty when separating
};

/**
 * Sample n_samples fibers over the full real parameter circle; certify iff
 * every fiber is all-real with the same per-component counts. Refusals carry
 * the witness parameter instead of throwing.
 */
SeparatingCertificate separating_certificate(const SpaceSextic& C, const RealLocus& locus,
                                             const MorphismRep& f, int n_samples,
                                             std::uint64_t seed);

// ───────────────────────── Divisor tests ─────────────────────────

struct SpecialityReport {
  bool special = true;
  int rank = 0;
  Vec4 plane = Vec4::Zero();  // a plane through all points when special
};

/**
 * A divisor on the canonical sextic is special iff all its points lie in one
 * plane: rank of the coordinate matrix (conjugate pairs contribute real and
 * imaginary rows) at tolerance 1e-8 relative to the top singular value.
 */
SpecialityReport is_special_divisor(const Divisor& P);

/** True iff on each component exactly one point of B sits between
 *  cyclically consecutive points of A; all-real disjoint fibers only. */
bool interlacing_check(const Fiber& A, const Fiber& B, const RealLocus& locus,
                       double tol = 1e-7);

/**
 * Cyclic alternation core shared by the fiber checks: per list index, equal
 * counts and exactly one B position strictly between consecutive A positions.
 */
bool interlacing_arcs(const std::vector<std::vector<double>>& A,
                      const std::vector<std::vector<double>>& B);

/**
 * Orientation each component inherits from the morphism: the sign of the
 * winding of [S0 : S1] along the stored traversal, one arc per component,
 * normalized like every assignment. The absolute winding equals the
 * component degree of the morphism.
 */
OrientationAssignment complex_orientation(const SpaceSextic& C, const RealLocus& locus,
                                          const MorphismRep& f);

/** Fiber points as obstruction-check references; on_d set within tol. */
std::vector<FiberPointRef> fiber_point_refs(const Fiber& fb, const SectionDivisor& D,
                                            double tol = 1e-6);

}  // namespace sepsemi
