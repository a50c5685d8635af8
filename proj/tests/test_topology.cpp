#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "sepsemi/curves.hpp"
#include "sepsemi/error.hpp"
#include "sepsemi/topology.hpp"
#include "sepsemi/trace.hpp"

using namespace sepsemi;

namespace {

constexpr double kPi = 3.14159265358979323846;

Chart normal_chart(SurfaceKind kind) {
  Quadric q = quadric_from_matrix(normal_form_matrix(kind));
  return chart_map(classify_quadric(q));
}

}  // namespace

TEST_CASE("projection onto the curve and arc location") {
  SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
  RealLocus locus = trace_real_locus(C);
  REQUIRE(locus.components.size() == 3);
  Vec4 p = locus.components[1].points[17];
  Vec4 off = p + Vec4(4e-4, -3e-4, 2e-4, 1e-4);
  Vec4 back = project_to_curve(C, off);
  CHECK(std::abs(evaluate_form<double>(C.quadric.form, back)) < 1e-9);
  CHECK(std::abs(evaluate_form<double>(C.cubic, back)) < 1e-9);
  LocusPosition pos = locate_on_locus(locus, back);
  CHECK(pos.component == 1);
  CHECK(pos.dist < 2e-3);
  Vec4 again = point_at_arc(locus.components[1], pos.arc);
  CHECK(std::min((again - back).norm(), (again + back).norm()) < 2e-3);
}

TEST_CASE("plane sections of the three surfaces") {
  SUBCASE("ellipsoid section is one oval") {
    SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
    SectionDivisor D = section_divisor(C, Vec4(0, 0, 1, 0.2));
    REQUIRE(D.d1.size() == 1);
    CHECK(D.d0.empty());
    CHECK(D.d1[0].multiplicity == 1);
    CHECK_FALSE(D.d1[0].boundary_arc);
    for (const Vec4& x : D.d1[0].points) {
      CHECK(std::abs(evaluate_form<double>(C.quadric.form, x)) < 1e-9);
      CHECK(std::abs(D.h.dot(x)) < 1e-9);
    }
  }
  SUBCASE("plane with no real section") {
    SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
    SectionDivisor D = section_divisor(C, Vec4(0, 0, 0, 1));
    CHECK(D.real_empty());
  }
  SUBCASE("tangent plane of the hyperboloid splits into two rulings") {
    SpaceSextic C = model_sextic(SurfaceKind::hyperboloid, 3, 0);
    // tangent at (1,0,0,1): gradient direction (1,0,0,-1)
    SectionDivisor D = section_divisor(C, Vec4(1, 0, 0, -1));
    REQUIRE(D.d1.size() == 2);
    CHECK(D.d0.empty());
    bool ca = D.d1[0].cls.a != 0 || D.d1[0].cls.b != 0;
    bool cb = D.d1[1].cls.a != 0 || D.d1[1].cls.b != 0;
    CHECK(ca);
    CHECK(cb);
    CHECK((D.d1[0].cls.a != D.d1[1].cls.a || D.d1[0].cls.b != D.d1[1].cls.b));
    for (const auto& br : D.d1)
      for (const Vec4& x : br.points)
        CHECK(std::abs(evaluate_form<double>(C.quadric.form, x)) < 1e-8);
  }
  SUBCASE("plane through the cone apex cuts two generators") {
    SpaceSextic C = model_sextic(SurfaceKind::cone, 3, 0);
    SectionDivisor D = section_divisor(C, Vec4(1, 0, -0.5, 0));
    REQUIRE(D.d1.size() == 2);
    CHECK(D.d0.empty());
    CHECK(D.d1[0].boundary_arc);
    CHECK(D.d1[1].boundary_arc);
  }
  SUBCASE("plane tangent along a generator gives the doubled line") {
    SpaceSextic C = model_sextic(SurfaceKind::cone, 3, 0);
    double us = 0.37;
    SectionDivisor D = section_divisor(C, Vec4(std::cos(us), std::sin(us), -1, 0));
    REQUIRE(D.d0.size() == 1);
    CHECK(D.d1.empty());
    CHECK(D.d0[0].multiplicity == 2);
  }
}

TEST_CASE("coloring of the ellipsoid nest: four regions, alternating sides") {
  SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
  RealLocus locus = trace_real_locus(C);
  Coloring col = chessboard_coloring(C, locus, nullptr);
  CHECK(col.n_regions == 4);

  // across every oval the two sides take opposite colors
  int checked = 0;
  for (const auto& comp : locus.components) {
    const int n = static_cast<int>(comp.uv.size());
    for (int k = 0; k < n; k += n / 7) {
      Eigen::Vector2d a = comp.uv[k];
      Eigen::Vector2d b = comp.uv[(k + 1) % n];
      Eigen::Vector2d t(b - a);
      if (t.norm() < 1e-12) continue;
      t.normalize();
      Eigen::Vector2d nr(-t.y(), t.x());
      int cl = col.color_at(a.x() + 1.6 * col.cell * nr.x(),
                            a.y() + 1.6 * col.cell * nr.y());
      int cr = col.color_at(a.x() - 1.6 * col.cell * nr.x(),
                            a.y() - 1.6 * col.cell * nr.y());
      if (cl < 0 || cr < 0) continue;
      CHECK(cl != cr);
      ++checked;
    }
  }
  CHECK(checked >= 9);
}

TEST_CASE("a lone essential loop on the hyperboloid is not colorable") {
  Chart chart = normal_chart(SurfaceKind::hyperboloid);
  ChartArc arc;
  for (int k = 0; k < 200; ++k) {
    double u = kPi * k / 200.0;
    arc.uv.push_back({u, 0.8});
  }
  bool threw = false;
  try {
    chessboard_coloring(chart, {arc});
  } catch (const Error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("not chessboard-colorable") != std::string::npos);
  }
  CHECK(threw);

  // two parallel copies are fine and bound an annulus pair
  ChartArc arc2;
  for (int k = 0; k < 200; ++k) {
    double u = kPi * k / 200.0;
    arc2.uv.push_back({u, 1.9});
  }
  Coloring col = chessboard_coloring(chart, {arc, arc2});
  CHECK(col.n_regions == 2);
}

TEST_CASE("orientation flips exactly at the six crossings of an irreducible section") {
  SpaceSextic C = model_sextic(SurfaceKind::hyperboloid, 3, 0);
  RealLocus locus = trace_real_locus(C);
  REQUIRE(locus.components.size() == 3);
  SectionDivisor D = section_divisor(C, Vec4(0, 0, 0, 1));
  REQUIRE(D.d1.size() == 1);
  Coloring col = chessboard_coloring(C, locus, &D);
  OrientationAssignment ornt = d_orientation(C, locus, D, col);

  CHECK(ornt.crossings.size() == 6);
  for (const auto& cr : ornt.crossings) CHECK(cr.flips);
  for (int ci = 0; ci < 3; ++ci) {
    REQUIRE(ornt.arcs[ci].size() == 2);
    CHECK(ornt.arcs[ci][0].second == -ornt.arcs[ci][1].second);
  }
  CHECK(ornt.sign_at(0, 0.0) == +1);  // normalized anchor

  OrientationAssignment flipped = ornt;
  for (auto& list : flipped.arcs)
    for (auto& e : list) e.second = -e.second;
  CHECK(orientations_agree_up_to_flip(ornt, flipped));
  // breaking one arc's sign breaks the agreement
  OrientationAssignment broken = ornt;
  broken.arcs[2][0].second = -broken.arcs[2][0].second;
  CHECK_FALSE(orientations_agree_up_to_flip(ornt, broken));
}

TEST_CASE("a double generator never flips the orientation") {
  SpaceSextic C = model_sextic(SurfaceKind::cone, 3, 0);
  RealLocus locus = trace_real_locus(C);
  REQUIRE(locus.components.size() == 3);
  double us = 0.37;
  SectionDivisor D = section_divisor(C, Vec4(std::cos(us), std::sin(us), -1, 0));
  REQUIRE(D.d0.size() == 1);
  Coloring col = chessboard_coloring(C, locus, &D);
  OrientationAssignment ornt = d_orientation(C, locus, D, col);

  CHECK(ornt.crossings.size() == 3);  // the line meets the curve three times
  for (const auto& cr : ornt.crossings) CHECK_FALSE(cr.flips);
  for (int ci = 0; ci < 3; ++ci) CHECK(ornt.arcs[ci].size() == 1);
}

TEST_CASE("mod-2 linking through the pencil of planes") {
  // latitude circle of the unit sphere x0^2+x1^2+x2^2 = x3^2
  TracedComponent lat;
  double cv = std::cos(0.3), sv = std::sin(0.3);
  for (int k = 0; k < 240; ++k) {
    double u = 2 * kPi * k / 240.0;
    lat.points.push_back(Vec4(cv * std::cos(u), cv * std::sin(u), sv, 1).normalized());
  }
  // the polar axis threads the latitude circle
  Vec4 np(0, 0, 1, 1), sp(0, 0, -1, 1);
  CHECK(is_linked(np, sp, lat));
  // a line far outside the sphere does not
  Vec4 q0(3, 0, 0, 1), q1(3, 1, 0, 1);
  CHECK_FALSE(is_linked(q0, q1, lat));
  // representatives of the same line give the same answer
  CHECK(is_linked(Vec4(0, 0, 2, 2), Vec4(0, 0, -0.5, 1.5), lat));
  // incidence is rejected
  Vec4 on = lat.points[0];
  CHECK_THROWS_AS(is_linked(on, Vec4(0, 1, 0, 0), lat), Error);
  // an essential loop has no mod-2 linking class
  Chart hchart = normal_chart(SurfaceKind::hyperboloid);
  TracedComponent ruling_loop;
  for (int k = 0; k < 200; ++k) {
    double u = kPi * k / 200.0;
    ruling_loop.uv.push_back({u, 0.8});
    ruling_loop.points.push_back(hchart.point(u, 0.8));
  }
  CHECK_THROWS_AS(is_linked(np, sp, ruling_loop), Error);
}

TEST_CASE("obstruction verdicts") {
  OrientationAssignment dor;
  dor.has_section = true;
  dor.section_h = Vec4(0, 0, 0, 1);
  dor.arcs = {{{0.0, +1}, {0.5, -1}}, {{0.0, +1}}};
  OrientationAssignment cor;
  cor.arcs = {{{0.0, +1}}, {{0.0, +1}}};

  auto pt = [](int comp, double arc) {
    FiberPointRef p;
    p.component = comp;
    p.arc = arc;
    p.x = Vec4(1, 0, 0, 0.5).normalized();
    return p;
  };

  // both points in the +1 arcs of both assignments: agreement everywhere
  CHECK(obstruction_check({pt(0, 0.2), pt(1, 0.4)}, dor, cor) ==
        ObstructionVerdict::consistent);
  // global flip of the relation is still consistent
  {
    OrientationAssignment cneg = cor;
    for (auto& l : cneg.arcs)
      for (auto& e : l) e.second = -e.second;
    CHECK(obstruction_check({pt(0, 0.2), pt(1, 0.4)}, dor, cneg) ==
          ObstructionVerdict::consistent);
  }
  // one point on each side of the d-flip: mixed relation
  CHECK(obstruction_check({pt(0, 0.2), pt(0, 0.7)}, dor, cor) ==
        ObstructionVerdict::obstructed_ok);
  // only declared points on the section: nothing to compare
  {
    FiberPointRef p = pt(0, 0.2);
    p.on_d = true;
    CHECK(obstruction_check({p}, dor, cor) == ObstructionVerdict::vacuous);
  }
  // a point on the section must be declared
  {
    FiberPointRef p = pt(0, 0.2);
    p.x = Vec4(1, 0, 0, 0).normalized();
    CHECK_THROWS_AS(obstruction_check({p}, dor, cor), Error);
  }
  CHECK(std::string(verdict_name(ObstructionVerdict::obstructed_ok)) ==
        "obstructed-ok");
}
