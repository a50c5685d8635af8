#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sepsemi/curves.hpp"
#include "sepsemi/error.hpp"
#include "sepsemi/quadric.hpp"

using namespace sepsemi;

namespace {

MultiForm plane(double a, double b, double c, double d) {
  return MultiForm::linear(Vec4(a, b, c, d));
}

}  // namespace

TEST_CASE("model parts exist for exactly the six supported types") {
  struct Row {
    SurfaceKind kind;
    int r, l;
  };
  for (const auto& [kind, r, l] :
       {Row{SurfaceKind::ellipsoid, 3, 3}, Row{SurfaceKind::hyperboloid, 3, 0},
        Row{SurfaceKind::hyperboloid, 1, 0}, Row{SurfaceKind::hyperboloid, 3, 2},
        Row{SurfaceKind::cone, 3, 0}, Row{SurfaceKind::cone, 3, 2}}) {
    const ModelParts& mp = model_sextic_parts(kind, r, l);
    CHECK(mp.kind == kind);
    CHECK(mp.r == r);
    CHECK(mp.l == l);
    CHECK(mp.eps_default > 0);
    CHECK(mp.eps_default <= mp.eps_max);
    CHECK(mp.base.degree == 3);
    CHECK(mp.bump.degree == 3);
  }
  CHECK_THROWS_AS(model_sextic_parts(SurfaceKind::ellipsoid, 3, 0), Error);
  CHECK_THROWS_AS(model_sextic_parts(SurfaceKind::cone, 1, 0), Error);
  CHECK_THROWS_AS(model_sextic_parts(SurfaceKind::hyperboloid, 2, 1), Error);
}

TEST_CASE("epsilon bounds are enforced") {
  CHECK_THROWS_AS(model_sextic(SurfaceKind::ellipsoid, 3, 3, 0.0), Error);
  CHECK_THROWS_AS(model_sextic(SurfaceKind::ellipsoid, 3, 3, -0.05), Error);
  double above = model_sextic_parts(SurfaceKind::ellipsoid, 3, 3).eps_max * 1.5;
  CHECK_THROWS_AS(model_sextic(SurfaceKind::ellipsoid, 3, 3, above), Error);
}

TEST_CASE("the default ellipsoid model is a certified smooth sextic") {
  SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
  CHECK(C.provenance.kind == SurfaceKind::ellipsoid);
  CHECK(C.provenance.r == 3);
  CHECK(C.provenance.l == 3);
  CHECK(C.provenance.epsilon > 0);
  CHECK(C.cubic.degree == 3);

  SmoothnessCertificate cert = validate_smoothness(C);
  CHECK(cert.ok);
  CHECK(cert.reject_reason.empty());
  CHECK(cert.real_singular.empty());
  CHECK(cert.complex_singular.empty());
}

TEST_CASE("the unsmoothed section union is rejected with located crossings") {
  // Three parallel plane sections of the sphere: the circles are disjoint
  // over the reals, so every witness the scan finds must be complex.
  const ModelParts& mp = model_sextic_parts(SurfaceKind::ellipsoid, 3, 3);
  SpaceSextic C;
  C.quadric = quadric_from_matrix(normal_form_matrix(SurfaceKind::ellipsoid));
  C.cubic = mp.base;
  SmoothnessCertificate cert = validate_smoothness(C);
  CHECK_FALSE(cert.ok);
  CHECK(cert.reject_reason == "singular");
  CHECK(cert.real_singular.empty());
  CHECK(!cert.complex_singular.empty());
}

TEST_CASE("a union with real crossings reports them near the true points") {
  // Two through-axis sections and the waist section of the hyperboloid. The
  // waist plane meets each axis plane in a line that crosses the surface at
  // two real points, so the union has four real nodes, at
  // [1 : -+0.3 : 0 : +-sqrt(1.09)].
  const ModelParts& mp = model_sextic_parts(SurfaceKind::hyperboloid, 1, 0);
  SpaceSextic C;
  C.quadric = quadric_from_matrix(normal_form_matrix(SurfaceKind::hyperboloid));
  C.cubic = mp.base;
  SmoothnessCertificate cert = validate_smoothness(C);
  CHECK_FALSE(cert.ok);
  CHECK(cert.reject_reason == "singular");
  CHECK(cert.real_singular.size() == 4);
  int matched = 0;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      Vec4 node(1.0, s1 * 0.3, 0.0, s2 * std::sqrt(1.09));
      node.normalize();
      for (const Vec4& w : cert.real_singular)
        if (std::min((w - node).norm(), (w + node).norm()) < 1e-4) {
          ++matched;
          break;
        }
    }
  CHECK(matched == 4);
}

TEST_CASE("a cubic that is the quadric times a plane is rejected as reducible") {
  SpaceSextic C;
  C.quadric = quadric_from_matrix(normal_form_matrix(SurfaceKind::ellipsoid));
  C.cubic = multiply(plane(0.3, -1.0, 0.7, 0.2), C.quadric.form);
  SmoothnessCertificate cert = validate_smoothness(C);
  CHECK_FALSE(cert.ok);
  CHECK(cert.reject_reason == "reducible: cubic is the quadric times a plane");
}

TEST_CASE("a cubic vanishing on a ruling line is rejected as reducible") {
  // The line {x0 = x2, x1 = x3} lies on the hyperboloid, and the cubic below
  // vanishes on it without being a quadric multiple.
  SpaceSextic C;
  C.quadric = quadric_from_matrix(normal_form_matrix(SurfaceKind::hyperboloid));
  MultiForm q1 = multiply(plane(0, 1, 0, 0), plane(0, 1, 0, 0));
  MultiForm q2 = multiply(plane(1, 0, 0, 0), plane(0, 0, 0, 1));
  C.cubic = add(multiply(plane(1, 0, -1, 0), add(q1, multiply(plane(0, 0, 1, 0), plane(0, 0, 1, 0)))),
                multiply(plane(0, 1, 0, -1), q2));
  SmoothnessCertificate cert = validate_smoothness(C);
  CHECK_FALSE(cert.ok);
  CHECK(cert.reject_reason == "reducible: the intersection contains a ruling line");
}

TEST_CASE("hyperelliptic models square the spread and stay root free") {
  HyperellipticCurve E = model_hyperelliptic(1, {0.0, 1.0}, 0.1);
  CHECK(E.g == 1);
  CHECK(E.parity == 1);
  CHECK(E.F.size_degree() == 4);
  // F(x) = x^2 (x-1)^2 + 0.1 at a few points
  for (double x : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    double want = x * x * (x - 1) * (x - 1) + 0.1;
    CHECK(E.F.eval(x) == doctest::Approx(want).epsilon(1e-12));
    CHECK(E.F.eval(x) > 0);
  }

  HyperellipticCurve H = model_hyperelliptic(4, {0, 1, 2, 3, 4}, 0.01);
  CHECK(H.g == 4);
  CHECK(H.parity == 0);
  CHECK(H.F.size_degree() == 10);
  for (double x = -1.0; x <= 5.0; x += 0.1) CHECK(H.F.eval(x) > 0);
}

TEST_CASE("hyperelliptic model rejects bad spreads") {
  CHECK_THROWS_AS(model_hyperelliptic(1, {0.0, 1.0}, 0.0), Error);
  CHECK_THROWS_AS(model_hyperelliptic(1, {0.0, 1.0}, -0.1), Error);
  CHECK_THROWS_AS(model_hyperelliptic(1, {0.0, 0.0}, 0.1), Error);
  CHECK_THROWS_AS(model_hyperelliptic(2, {0.0, 1.0}, 0.1), Error);
  CHECK_THROWS_AS(model_hyperelliptic(0, {0.0}, 0.1), Error);
}
