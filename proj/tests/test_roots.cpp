#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sepsemi/roots.hpp"

using namespace sepsemi;

TEST_CASE("cubic with known real roots") {
  // (t-2)(t+1)(t-1/2) = t^3 - 1.5 t^2 - 1.5 t + 1
  RPoly p({1.0, -1.5, -1.5, 1.0});
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 3);
  // sorted by (Re, Im)
  CHECK(std::abs(roots[0] - cplx(-1.0, 0)) < 1e-10);
  CHECK(std::abs(roots[1] - cplx(0.5, 0)) < 1e-10);
  CHECK(std::abs(roots[2] - cplx(2.0, 0)) < 1e-10);
}

TEST_CASE("degree six mixing real roots and conjugate pairs") {
  // (t^2+1)(t^2-2t+5)(t-3)(t+2): roots +-i, 1+-2i, 3, -2
  RPoly p = poly_mul(poly_mul(RPoly({1.0, 0.0, 1.0}), RPoly({5.0, -2.0, 1.0})),
                     poly_mul(RPoly({-3.0, 1.0}), RPoly({2.0, 1.0})));
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 6);
  auto part = partition_roots(roots);
  REQUIRE(part.real.size() == 2);
  REQUIRE(part.pairs.size() == 2);
  CHECK(part.real[0] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(part.real[1] == doctest::Approx(3.0).epsilon(1e-9));
  for (const auto& [up, down] : part.pairs) {
    CHECK(up.imag() > 0);
    CHECK(std::abs(up - std::conj(down)) < 1e-9);
  }
  CHECK(std::abs(part.pairs[0].first - cplx(0, 1)) < 1e-9);
  CHECK(std::abs(part.pairs[1].first - cplx(1, 2)) < 1e-9);
}

TEST_CASE("triple root recovered within loose cluster tolerance") {
  // (t-1)^3
  RPoly p({-1.0, 3.0, -3.0, 1.0});
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 3);
  for (const auto& r : roots) CHECK(std::abs(r - cplx(1, 0)) < 1e-3);
}

TEST_CASE("root sum invariant on random degree eight") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> c(9);
  for (auto& v : c) v = d(rng);
  c[8] = 1.0;
  RPoly p(c);
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 8);
  cplx sum = 0;
  for (const auto& r : roots) sum += r;
  CHECK(std::abs(sum - cplx(-c[7], 0)) < 1e-8);
}

TEST_CASE("trailing zero coefficients are trimmed") {
  RPoly p({-2.0, 1.0, 0.0, 0.0});
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - cplx(2, 0)) < 1e-12);
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(univariate_roots(RPoly({0.0, 0.0})), Error);
  CHECK(univariate_roots(RPoly({3.0})).empty());
}

TEST_CASE("complex coefficients") {
  // (t - i)(t - 2) with complex coefficient path
  CPoly p({cplx(0, 2), cplx(-2, -1), cplx(1, 0)});
  auto roots = univariate_roots(p);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - cplx(0, 1)) < 1e-10);
  CHECK(std::abs(roots[1] - cplx(2, 0)) < 1e-10);
}

TEST_CASE("partition tolerances") {
  std::vector<cplx> roots = {cplx(1.0, 5e-8), cplx(2.0, 1e-3), cplx(2.0, -1e-3)};
  auto part = partition_roots(roots, 1e-7);
  CHECK(part.real.size() == 1);
  CHECK(part.pairs.size() == 1);
  CHECK(part.max_residual_im == doctest::Approx(5e-8));

  // Unpairable imaginary root
  std::vector<cplx> bad = {cplx(0.0, 0.5)};
  CHECK_THROWS_AS(partition_roots(bad, 1e-7), Error);
}
