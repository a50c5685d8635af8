#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sepsemi/forms.hpp"

using namespace sepsemi;

namespace {

MultiForm random_form(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd c(monomial_count(degree));
  for (int i = 0; i < c.size(); ++i) c(i) = d(rng);
  return MultiForm(degree, c);
}

Vec4 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return Vec4(d(rng), d(rng), d(rng), d(rng));
}

}  // namespace

TEST_CASE("monomial tables") {
  CHECK(monomial_count(1) == 4);
  CHECK(monomial_count(2) == 10);
  CHECK(monomial_count(3) == 20);

  // Graded-lex: exponent tuples descend lexicographically.
  CHECK(monomial_exponents(2)[0] == std::array<int, 4>{2, 0, 0, 0});
  CHECK(monomial_exponents(2)[1] == std::array<int, 4>{1, 1, 0, 0});
  CHECK(monomial_exponents(2)[4] == std::array<int, 4>{0, 2, 0, 0});
  CHECK(monomial_exponents(2)[9] == std::array<int, 4>{0, 0, 0, 2});
  CHECK(monomial_exponents(3)[0] == std::array<int, 4>{3, 0, 0, 0});
  CHECK(monomial_exponents(3)[1] == std::array<int, 4>{2, 1, 0, 0});
  CHECK(monomial_exponents(3)[19] == std::array<int, 4>{0, 0, 0, 3});

  for (int d = 1; d <= 3; ++d)
    for (int i = 0; i < monomial_count(d); ++i)
      CHECK(monomial_index(d, monomial_exponents(d)[i]) == i);
}

TEST_CASE("evaluation against closed-form sums") {
  // All-ones coefficients sum every monomial. At (1,2,3,4):
  //   sum_{|e|=2} x^e = (p1^2 + p2)/2 = (100+30)/2 = 65
  //   sum_{|e|=3} x^e = (p1^3 + 3 p1 p2 + 2 p3)/6 = (1000+900+200)/6 = 350
  Vec4 x(1, 2, 3, 4);
  MultiForm f2(2, Eigen::VectorXd::Ones(10));
  MultiForm f3(3, Eigen::VectorXd::Ones(20));
  CHECK(evaluate_form<double>(f2, x) == doctest::Approx(65.0).epsilon(1e-12));
  CHECK(evaluate_form<double>(f3, x) == doctest::Approx(350.0).epsilon(1e-12));
}

TEST_CASE("homogeneity and Euler identity") {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 3; ++d) {
    MultiForm f = random_form(d, rng);
    Vec4 x = random_point(rng);
    double lam = 1.7;
    CHECK(evaluate_form<double>(f, Vec4(lam * x)) ==
          doctest::Approx(std::pow(lam, d) * evaluate_form<double>(f, x)).epsilon(1e-10));
    Vec4 g = form_gradient<double>(f, x);
    CHECK(g.dot(x) == doctest::Approx(d * evaluate_form<double>(f, x)).epsilon(1e-10));
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(11);
  MultiForm f = random_form(3, rng);
  Vec4 x = random_point(rng);
  Vec4 g = form_gradient<double>(f, x);
  double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    Vec4 xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    double fd = (evaluate_form<double>(f, xp) - evaluate_form<double>(f, xm)) / (2 * h);
    CHECK(g(j) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("transformed composes with the matrix") {
  std::mt19937_64 rng(13);
  Mat4 M;
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = d(rng);
  for (int deg = 1; deg <= 3; ++deg) {
    MultiForm f = random_form(deg, rng);
    MultiForm g = transformed(f, M);
    CHECK(g.degree == deg);
    for (int k = 0; k < 5; ++k) {
      Vec4 p = random_point(rng);
      CHECK(evaluate_form<double>(g, p) ==
            doctest::Approx(evaluate_form<double>(f, Vec4(M * p))).epsilon(1e-9));
    }
  }
  MultiForm f = random_form(2, rng);
  MultiForm id = transformed(f, Mat4::Identity());
  CHECK((id.coeffs - f.coeffs).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("product of forms") {
  std::mt19937_64 rng(17);
  MultiForm a = random_form(1, rng);
  MultiForm b = random_form(2, rng);
  MultiForm ab = multiply(a, b);
  CHECK(ab.degree == 3);
  for (int k = 0; k < 5; ++k) {
    Vec4 p = random_point(rng);
    CHECK(evaluate_form<double>(ab, p) ==
          doctest::Approx(evaluate_form<double>(a, p) * evaluate_form<double>(b, p))
              .epsilon(1e-10));
  }
  CHECK_THROWS_AS(multiply(b, b), Error);  // degree 4 unsupported
}

TEST_CASE("linear helper") {
  Vec4 h(2, -1, 0, 3);
  MultiForm f = MultiForm::linear(h);
  Vec4 p(1, 1, 1, 1);
  CHECK(evaluate_form<double>(f, p) == doctest::Approx(4.0));
}

TEST_CASE("univariate arithmetic") {
  RPoly a({1, 2, 3});        // 1 + 2t + 3t^2
  RPoly b({-1, 1});          // t - 1
  RPoly ab = poly_mul(a, b);
  CHECK(ab.size_degree() == 3);
  for (double t : {0.0, 0.5, -2.0})
    CHECK(ab.eval(t) == doctest::Approx(a.eval(t) * b.eval(t)));
  RPoly s = poly_add(a, poly_scale(b, 2.0));
  CHECK(s.eval(2.0) == doctest::Approx(a.eval(2.0) + 2 * b.eval(2.0)));
  RPoly da = poly_derivative(a);
  CHECK(da.eval(0.7) == doctest::Approx(2 + 6 * 0.7));
  CHECK(poly_degree(RPoly({1, 1, 1e-15})) == 1);
  CHECK(poly_degree(RPoly({0.0, 0.0})) < 0);  // zero polynomial
}

TEST_CASE("exact division") {
  RPoly num({-1, 0, 1});  // t^2 - 1
  RPoly den({-1, 1});     // t - 1
  RPoly q = poly_divide_exact(num, den);
  REQUIRE(poly_degree(q) == 1);
  CHECK(q.eval(3.0) == doctest::Approx(4.0));  // t + 1
  RPoly bad({1, 0, 1});                        // t^2 + 1 leaves remainder
  CHECK_THROWS_AS(poly_divide_exact(bad, den), Error);
}

TEST_CASE("restriction to a rational curve") {
  // Circle path (1-t^2, 2t, t, 1+t^2): x0^2+x1^2-x3^2 vanishes identically
  // and adding x2^2 leaves exactly t^2.
  std::array<RPoly, 4> gamma = {RPoly({1, 0, -1}), RPoly({0, 2}), RPoly({0, 1}),
                                RPoly({1, 0, 1})};
  Eigen::VectorXd c = Eigen::VectorXd::Zero(10);
  c(monomial_index(2, {2, 0, 0, 0})) = 1;
  c(monomial_index(2, {0, 2, 0, 0})) = 1;
  c(monomial_index(2, {0, 0, 0, 2})) = -1;
  MultiForm f(2, c);
  RPoly r = restrict_to_curve(f, gamma);
  CHECK(r.max_abs() == doctest::Approx(0.0).epsilon(1e-12));

  c(monomial_index(2, {0, 0, 2, 0})) = 1;
  MultiForm g(2, c);
  RPoly r2 = restrict_to_curve(g, gamma);
  REQUIRE(poly_degree(r2) == 2);
  CHECK(r2.eval(2.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r2.eval(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("restriction rejects a common root of the coordinates") {
  std::array<RPoly, 4> gamma = {RPoly({0, 1}), RPoly({0, 1}), RPoly({0, 2}), RPoly({0, 1})};
  MultiForm f = MultiForm::linear(Vec4(1, 1, 1, 1));
  CHECK_THROWS_AS(restrict_to_curve(f, gamma), Error);
}
