#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sepsemi/curves.hpp"
#include "sepsemi/error.hpp"
#include "sepsemi/hyper.hpp"

using namespace sepsemi;

namespace {

constexpr double kPi = 3.14159265358979323846;

HyperellipticCurve curve(int g) {
  std::vector<double> spread;
  for (int i = 0; i <= g; ++i) spread.push_back(i);
  return model_hyperelliptic(g, spread, 0.15);
}

std::vector<double> alternating_xs(int g) {
  std::vector<double> xs;
  for (int i = 0; i <= g; ++i) xs.push_back(i + 0.45);
  return xs;
}

}  // namespace

TEST_CASE("projection certifies degree 2 split by parity") {
  for (int g : {2, 3, 4, 5}) {
    HyperellipticCurve H = curve(g);
    HyperMorphism f = hyper_projection(H);
    SeparatingCertificate cert = hyper_separating_certificate(H, f, 60);
    CHECK(cert.separating);
    if (g % 2 == 1)
      CHECK(cert.degrees == DegreeVector{1, 1});
    else
      CHECK(cert.degrees == DegreeVector{2});
  }
}

TEST_CASE("alternating pencil certifies (m,m) or g+1") {
  for (int g : {2, 3, 4, 5}) {
    HyperellipticCurve H = curve(g);
    HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(g));
    CHECK(f.degree == g + 1);
    SeparatingCertificate cert = hyper_separating_certificate(H, f, 60);
    CHECK(cert.separating);
    CHECK(cert.max_im < 1e-6);
    int m = (g + 1) / 2;
    if (g % 2 == 1)
      CHECK(cert.degrees == DegreeVector{m, m});
    else
      CHECK(cert.degrees == DegreeVector{g + 1});
  }
}

TEST_CASE("infinite parameter anchors the polar divisor with alternating signs") {
  HyperellipticCurve H = curve(4);
  std::vector<double> xs = alternating_xs(4);
  HyperMorphism f = hyper_pencil_from_divisor(H, xs);
  HyperFiber fb = hyper_fiber_at(H, f, kPi / 2);
  REQUIRE(fb.points.size() == 5);
  std::vector<const HyperFiberPoint*> byx;
  for (const auto& p : fb.points) byx.push_back(&p);
  std::sort(byx.begin(), byx.end(),
            [](const HyperFiberPoint* a, const HyperFiberPoint* b) { return a->x < b->x; });
  for (int i = 0; i < 5; ++i) {
    CHECK(byx[i]->x == doctest::Approx(xs[i]).epsilon(1e-9));
    CHECK(byx[i]->y * (i % 2 == 0 ? -1.0 : 1.0) > 0);
  }
}

TEST_CASE("pencil preconditions") {
  HyperellipticCurve H = curve(3);
  CHECK_THROWS_AS(hyper_pencil_from_divisor(H, {0.1, 0.2, 0.3}), Error);
  CHECK_THROWS_AS(hyper_pencil_from_divisor(H, {0.1, 0.1, 0.3, 0.4}), Error);
}

TEST_CASE("degree drop sends the surplus to the right infinity") {
  HyperellipticCurve H = curve(2);
  HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(2));
  // lc(F) = 1 and c is monic, so the escapes happen exactly at t = +-1
  for (double t : {1.0, -1.0}) {
    HyperFiber fb = hyper_fiber_at(H, f, std::atan(t));
    int total = 0, inf_mult = 0;
    for (const auto& p : fb.points) {
      total += p.multiplicity;
      if (p.infinite) {
        inf_mult += p.multiplicity;
        CHECK(p.arc == (t > 0 ? 0.5 : 0.0));
      }
    }
    CHECK(total == 3);
    CHECK(inf_mult == 1);
    CHECK(fb.all_real);
  }
}

TEST_CASE("abel sums vanish on genuine pencils and flag corrupted ones") {
  HyperellipticCurve H = curve(3);
  HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(3));

  CHECK(abel_sum_residual(H, f, 0.4, RPoly({0.0})) == 0.0);
  CHECK_THROWS_AS(abel_sum_residual(H, f, 0.4, RPoly({0, 0, 0, 1})), Error);

  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unif(0.02, kPi - 0.02);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    double theta = unif(rng);
    for (const RPoly& q : {RPoly({1.0}), RPoly({0.0, 1.0}), RPoly({0.0, 0.0, 1.0})})
      worst = std::max(worst, abel_sum_residual(H, f, theta, q));
  }
  CHECK(worst < 1e-6);

  HyperMorphism bad = f;
  bad.a.c[0] += 0.01;
  double flagged = 0;
  for (double theta : {0.4, 0.9, 1.9, 2.6})
    for (const RPoly& q : {RPoly({1.0}), RPoly({0.0, 1.0})})
      flagged = std::max(flagged, abel_sum_residual(H, bad, theta, q));
  CHECK(flagged > 1e-2);
}

TEST_CASE("fibers of a certified pencil interlace") {
  HyperellipticCurve H = curve(4);
  HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(4));
  HyperFiber A = hyper_fiber_at(H, f, 0.3);
  HyperFiber B = hyper_fiber_at(H, f, 0.9);
  CHECK(hyper_interlacing_check(H, A, B));
  CHECK(hyper_interlacing_check(H, B, A));
  CHECK_THROWS_AS(hyper_interlacing_check(H, A, A), Error);

  HyperellipticCurve H3 = curve(3);
  HyperMorphism f3 = hyper_pencil_from_divisor(H3, alternating_xs(3));
  CHECK(hyper_interlacing_check(H3, hyper_fiber_at(H3, f3, 0.5),
                                hyper_fiber_at(H3, f3, 2.2)));
}

TEST_CASE("doubled fibers orient without flips on odd genus") {
  HyperellipticCurve H = curve(3);
  OrientationAssignment d = hyper_d_orientation(H, {0.5});
  REQUIRE(d.arcs.size() == 2);
  CHECK(d.arcs[0].size() == 1);
  CHECK(d.arcs[1].size() == 1);
  CHECK(d.sign_at(0, 0.2) == d.sign_at(0, 0.8));
  CHECK(d.sign_at(0, 0.2) == -d.sign_at(1, 0.2));
  for (const auto& c : d.crossings) CHECK_FALSE(c.flips);
  CHECK(d.crossings.size() == 2);
  CHECK_THROWS_AS(hyper_d_orientation(H, {0.5, 0.5}), Error);
}

TEST_CASE("even genus flips exactly at the two infinity points") {
  HyperellipticCurve H = curve(4);
  OrientationAssignment d = hyper_d_orientation(H, {0.3, 1.7});
  REQUIRE(d.arcs.size() == 1);
  CHECK(d.sign_at(0, 0.25) == -d.sign_at(0, 0.75));
  int flips = 0, contacts = 0;
  for (const auto& c : d.crossings)
    (c.flips ? flips : contacts) += 1;
  CHECK(flips == 2);
  CHECK(contacts == 4);
}

TEST_CASE("doubled-fiber orientation matches the affine coloring oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-2.0, 6.0);
  for (int g : {3, 4}) {
    HyperellipticCurve H = curve(g);
    OrientationAssignment d =
        hyper_d_orientation(H, g % 2 == 1 ? std::vector<double>{0.5}
                                          : std::vector<double>{0.3, 1.7});
    int agree = 0, disagree = 0;
    for (int k = 0; k < 50; ++k) {
      double x = ux(rng);
      int ysign = (rng() & 1) ? +1 : -1;
      int oracle = hyper_coloring_sign(H, x, ysign);
      int mine = d.sign_at(hyper_component(H, ysign), hyper_arc(H, x, ysign));
      (oracle == mine ? agree : disagree) += 1;
    }
    bool consistent = (agree == 50) || (disagree == 50);
    CHECK(consistent);
  }
}

TEST_CASE("complex orientation gives both branches the same x-direction") {
  HyperellipticCurve H = curve(3);
  HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(3));
  OrientationAssignment A = hyper_complex_orientation(H, f);
  REQUIRE(A.arcs.size() == 2);
  CHECK(A.arcs[0].size() == 1);
  CHECK(A.arcs[1].size() == 1);
  CHECK(A.sign_at(0, 0.3) == A.sign_at(1, 0.3));

  OrientationAssignment B = hyper_complex_orientation(H, hyper_projection(H));
  CHECK(orientations_agree_up_to_flip(A, B));

  HyperellipticCurve H4 = curve(4);
  OrientationAssignment C =
      hyper_complex_orientation(H4, hyper_pencil_from_divisor(H4, alternating_xs(4)));
  REQUIRE(C.arcs.size() == 1);
  CHECK(C.arcs[0].size() == 1);
}

TEST_CASE("certificate degrees are stable under re-sampling") {
  HyperellipticCurve H = curve(4);
  HyperMorphism f = hyper_pencil_from_divisor(H, alternating_xs(4));
  SeparatingCertificate a = hyper_separating_certificate(H, f, 60);
  SeparatingCertificate b = hyper_separating_certificate(H, f, 137);
  CHECK(a.separating);
  CHECK(b.separating);
  CHECK(a.degrees == b.degrees);
}
