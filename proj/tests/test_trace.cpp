#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <utility>
#include <vector>

#include "sepsemi/curves.hpp"
#include "sepsemi/error.hpp"
#include "sepsemi/quadric.hpp"
#include "sepsemi/trace.hpp"

using namespace sepsemi;

namespace {

std::vector<std::pair<int, int>> class_list(const RealLocus& loc) {
  std::vector<std::pair<int, int>> out;
  for (const auto& c : loc.components) out.emplace_back(c.cls.a, c.cls.b);
  return out;
}

}  // namespace

TEST_CASE("all six model types trace to their advertised topology") {
  struct Row {
    SurfaceKind kind;
    int r, l;
    // classes in model order (components sorted by the order functional)
    std::vector<std::pair<int, int>> classes;
  };
  std::vector<Row> rows = {
      {SurfaceKind::ellipsoid, 3, 3, {{0, 0}, {0, 0}, {0, 0}}},
      {SurfaceKind::hyperboloid, 3, 0, {{1, 1}, {1, 1}, {1, 1}}},
      {SurfaceKind::hyperboloid, 1, 0, {{3, 1}}},
      {SurfaceKind::hyperboloid, 3, 2, {{0, 0}, {1, 1}, {0, 0}}},
      {SurfaceKind::cone, 3, 0, {{1, 0}, {1, 0}, {1, 0}}},
      {SurfaceKind::cone, 3, 2, {{0, 0}, {1, 0}, {0, 0}}},
  };
  for (const Row& row : rows) {
    CAPTURE(row.r);
    CAPTURE(row.l);
    SpaceSextic C = model_sextic(row.kind, row.r, row.l);
    RealLocus loc = trace_real_locus(C);
    CHECK(loc.kind == row.kind);
    CHECK(loc.r == row.r);
    CHECK(loc.l == row.l);
    CHECK(class_list(loc) == row.classes);
    // components come out sorted by the model order functional
    std::vector<double> vals;
    for (const auto& c : loc.components) vals.push_back(model_order_value(C, c.points));
    CHECK(std::is_sorted(vals.begin(), vals.end()));
    // every traced point satisfies both equations
    for (const auto& c : loc.components) {
      CHECK(c.points.size() >= 8);
      CHECK(c.points.size() == c.uv.size());
      double worst = 0;
      for (const Vec4& p : c.points) {
        worst = std::max(worst, std::abs(evaluate_form<double>(C.quadric.form, p)));
        worst = std::max(worst, std::abs(evaluate_form<double>(C.cubic, p)));
      }
      CHECK(worst < 1e-7);
    }
  }
}

TEST_CASE("the two-oval models keep the plane section in the middle") {
  for (SurfaceKind kind : {SurfaceKind::hyperboloid, SurfaceKind::cone}) {
    SpaceSextic C = model_sextic(kind, 3, 2);
    RealLocus loc = trace_real_locus(C);
    REQUIRE(loc.components.size() == 3);
    CHECK(loc.components[0].oval);
    CHECK_FALSE(loc.components[1].oval);
    CHECK(loc.components[2].oval);
  }
}

TEST_CASE("tracing is deterministic") {
  SpaceSextic C = model_sextic(SurfaceKind::cone, 3, 0);
  RealLocus a = trace_real_locus(C);
  RealLocus b = trace_real_locus(C);
  REQUIRE(a.components.size() == b.components.size());
  for (size_t i = 0; i < a.components.size(); ++i) {
    REQUIRE(a.components[i].points.size() == b.components[i].points.size());
    for (size_t j = 0; j < a.components[i].points.size(); ++j)
      CHECK((a.components[i].points[j] - b.components[i].points[j]).norm() == 0.0);
  }
}

TEST_CASE("topology is independent of step size and cubic scaling") {
  SpaceSextic C = model_sextic(SurfaceKind::hyperboloid, 3, 2);
  RealLocus fine = trace_real_locus(C, 0.005);
  RealLocus coarse = trace_real_locus(C, 0.02);
  CHECK(fine.r == 3);
  CHECK(coarse.r == 3);
  CHECK(fine.l == 2);
  CHECK(coarse.l == 2);
  CHECK(class_list(fine) == class_list(coarse));

  SpaceSextic S = C;
  S.cubic = scale(S.cubic, 37.5);
  RealLocus scaled = trace_real_locus(S);
  CHECK(scaled.r == 3);
  CHECK(scaled.l == 2);
  trace_real_locus(C);  // original still intact after the copy was modified
}

TEST_CASE("tracer rejects bad inputs") {
  SpaceSextic C = model_sextic(SurfaceKind::ellipsoid, 3, 3);
  CHECK_THROWS_AS(trace_real_locus(C, 0.6), Error);
  CHECK_THROWS_AS(trace_real_locus(C, 1e-6), Error);
  CHECK_THROWS_AS(trace_real_locus(C, 0.01, 0.5), Error);
  CHECK_THROWS_AS(trace_real_locus(C, 0.01, 0.0), Error);

  SpaceSextic bad = C;
  bad.cubic = MultiForm::zero(3);
  CHECK_THROWS_AS(trace_real_locus(bad), Error);
  bad.cubic = MultiForm::linear(Vec4(1, 0, 0, 0));
  CHECK_THROWS_AS(trace_real_locus(bad), Error);
}
