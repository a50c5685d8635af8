#pragma once

#include <optional>
#include <vector>

#include "sepsemi/forms.hpp"

namespace sepsemi {

enum class SurfaceKind { ellipsoid, hyperboloid, cone };

const char* kind_name(SurfaceKind k);
std::optional<SurfaceKind> kind_from_name(const std::string& name);

/** Real quadric surface in P^3, kept both as a form and as its symmetric matrix. */
struct Quadric {
  MultiForm form;  // degree 2
  Mat4 matrix;     // Q(x) = x^T matrix x
};

Quadric quadric_from_matrix(const Mat4& m);
Quadric quadric_from_form(const MultiForm& f);

/** Normal forms: diag(1,1,1,-1) / diag(1,1,-1,-1) / diag(1,1,-1,0). */
Mat4 normal_form_matrix(SurfaceKind kind);

/**
 * Kind plus the congruence taking the quadric to its normal form:
 * with n = to_normal * x one has Q(x) = sign * n^T N n exactly, i.e.
 * to_normal^T * N * to_normal = sign * matrix. Inputs whose real locus is not
 * a surface (empty, a point, rank <= 2) are rejected as invalid_input.
 */
struct Classification {
  SurfaceKind kind;
  Mat4 to_normal;
  Mat4 from_normal;  // inverse of to_normal
  int sign = 1;      // +1 when the matrix already had the canonical signature
  Vec4 eigenvalues;  // of sign*matrix, ordered as in the normal form
};

Classification classify_quadric(const Quadric& q, double tol = 1e-9);

/**
 * Surface chart in normal-form coordinates.
 *   ellipsoid:   u in [0,2pi) periodic, v in [-pi/2,pi/2]; poles at v = +-pi/2.
 *   hyperboloid: u,v in [0,pi), both periodic; u-loops realize class a,
 *                v-loops class b; the lines {v=const} and {u=const} are the
 *                two rulings.
 *   cone:        u in [0,2pi) periodic, v in (-pi/2,pi/2); |v| -> pi/2 is the
 *                apex, an excluded chart point.
 */
struct Chart {
  SurfaceKind kind;
  Mat4 to_normal;
  Mat4 from_normal;
  double period_u = 0;  // > 0, u always periodic
  double period_v = 0;  // 0 when v is not periodic
  double v_min = 0, v_max = 0;

  Vec4 point(double u, double v) const;          // unit-norm ambient representative
  Eigen::Vector2d uv(const Vec4& x) const;       // inverse for on-surface points
  bool v_periodic() const { return period_v > 0; }
  /** Wrap a chart displacement to the nearest representative. */
  double wrap_du(double du) const;
  double wrap_dv(double dv) const;
};

Chart chart_map(const Classification& cls);

/**
 * First homology data of the real surface. On the hyperboloid (a,b) are the
 * ruling classes with a.b = +1; on the cone only `a` is used (winding around
 * the axis in the punctured surface); on the ellipsoid every loop is trivial.
 */
struct HomologyClass {
  SurfaceKind kind = SurfaceKind::ellipsoid;
  int a = 0;
  int b = 0;

  bool trivial() const { return a == 0 && b == 0; }
};

/** Intersection pairing; antisymmetric, nonzero only on the hyperboloid. */
int homology_pairing(const HomologyClass& x, const HomologyClass& y);

/**
 * Class of a closed chart polyline: winding counts per periodic direction.
 * The samples must step by less than half a period between neighbours.
 */
HomologyClass loop_class(const Chart& chart, const std::vector<Eigen::Vector2d>& uv_loop);

/** Lines of the rulings through a surface point. */
struct RulingLine {
  Vec4 p0, p1;  // two distinct points spanning the line
};
struct Rulings {
  std::vector<RulingLine> lines;
  bool infinitely_many = false;  // cone apex: every generator passes through
};

Rulings rulings(const Classification& cls, const Vec4& p, double tol = 1e-8);

}  // namespace sepsemi
