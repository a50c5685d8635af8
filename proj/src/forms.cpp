#include "sepsemi/forms.hpp"

#include <algorithm>
#include <cmath>

#include "sepsemi/roots.hpp"

namespace sepsemi {

namespace {

std::vector<std::array<int, 4>> build_exponents(int degree) {
  // Lex-descending on (e0,e1,e2,e3): iterate e0 from degree down, then e1, e2.
  std::vector<std::array<int, 4>> out;
  for (int e0 = degree; e0 >= 0; --e0)
    for (int e1 = degree - e0; e1 >= 0; --e1)
      for (int e2 = degree - e0 - e1; e2 >= 0; --e2)
        out.push_back({e0, e1, e2, degree - e0 - e1 - e2});
  return out;
}

const std::vector<std::array<int, 4>>& exponents_cached(int degree) {
  static const std::vector<std::array<int, 4>> tables[4] = {
      build_exponents(0), build_exponents(1), build_exponents(2), build_exponents(3)};
  if (degree < 0 || degree > 3) throw invalid_input("form degree must be 0..3");
  return tables[degree];
}

}  // namespace

int monomial_count(int degree) { return static_cast<int>(exponents_cached(degree).size()); }

const std::vector<std::array<int, 4>>& monomial_exponents(int degree) {
  return exponents_cached(degree);
}

int monomial_index(int degree, const std::array<int, 4>& expo) {
  const auto& tab = exponents_cached(degree);
  for (int i = 0; i < static_cast<int>(tab.size()); ++i)
    if (tab[i] == expo) return i;
  throw invalid_input("exponent tuple does not match degree");
}

MultiForm::MultiForm(int deg, Eigen::VectorXd c) : degree(deg), coeffs(std::move(c)) {
  if (coeffs.size() != monomial_count(degree))
    throw invalid_input("coefficient vector length does not match degree");
}

MultiForm MultiForm::zero(int degree) {
  return MultiForm(degree, Eigen::VectorXd::Zero(monomial_count(degree)));
}

MultiForm MultiForm::linear(const Vec4& h) {
  Eigen::VectorXd c(4);
  c << h(0), h(1), h(2), h(3);
  return MultiForm(1, c);
}

template <class Scalar>
Scalar evaluate_form(const MultiForm& f, const Eigen::Matrix<Scalar, 4, 1>& p) {
  if (p.norm() == 0.0) throw invalid_input("evaluate_form: zero vector is not a point");
  const auto& tab = monomial_exponents(f.degree);
  Scalar acc = Scalar(0);
  for (int i = 0; i < static_cast<int>(tab.size()); ++i) {
    Scalar m = Scalar(f.coeffs(i));
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < tab[i][v]; ++k) m *= p(v);
    acc += m;
  }
  return acc;
}

template double evaluate_form<double>(const MultiForm&, const Eigen::Matrix<double, 4, 1>&);
template cplx evaluate_form<cplx>(const MultiForm&, const Eigen::Matrix<cplx, 4, 1>&);

template <class Scalar>
Eigen::Matrix<Scalar, 4, 1> form_gradient(const MultiForm& f, const Eigen::Matrix<Scalar, 4, 1>& p) {
  if (p.norm() == 0.0) throw invalid_input("form_gradient: zero vector is not a point");
  const auto& tab = monomial_exponents(f.degree);
  Eigen::Matrix<Scalar, 4, 1> g = Eigen::Matrix<Scalar, 4, 1>::Zero();
  for (int i = 0; i < static_cast<int>(tab.size()); ++i) {
    for (int v = 0; v < 4; ++v) {
      if (tab[i][v] == 0) continue;
      Scalar m = Scalar(f.coeffs(i) * tab[i][v]);
      for (int w = 0; w < 4; ++w) {
        int e = tab[i][w] - (w == v ? 1 : 0);
        for (int k = 0; k < e; ++k) m *= p(w);
      }
      g(v) += m;
    }
  }
  return g;
}

template Eigen::Matrix<double, 4, 1> form_gradient<double>(const MultiForm&,
                                                           const Eigen::Matrix<double, 4, 1>&);
template Eigen::Matrix<cplx, 4, 1> form_gradient<cplx>(const MultiForm&,
                                                       const Eigen::Matrix<cplx, 4, 1>&);

MultiForm multiply(const MultiForm& a, const MultiForm& b) {
  int deg = a.degree + b.degree;
  if (deg > 3) throw invalid_input("multiply: product degree exceeds 3");
  MultiForm out = MultiForm::zero(deg);
  const auto& ta = monomial_exponents(a.degree);
  const auto& tb = monomial_exponents(b.degree);
  for (int i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs(i) == 0.0) continue;
    for (int j = 0; j < b.coeffs.size(); ++j) {
      if (b.coeffs(j) == 0.0) continue;
      std::array<int, 4> e{};
      for (int v = 0; v < 4; ++v) e[v] = ta[i][v] + tb[j][v];
      out.coeffs(monomial_index(deg, e)) += a.coeffs(i) * b.coeffs(j);
    }
  }
  return out;
}

MultiForm add(const MultiForm& a, const MultiForm& b) {
  if (a.degree != b.degree) throw invalid_input("add: mixed degrees");
  return MultiForm(a.degree, a.coeffs + b.coeffs);
}

MultiForm scale(const MultiForm& a, double s) { return MultiForm(a.degree, a.coeffs * s); }

MultiForm transformed(const MultiForm& f, const Mat4& M) {
  // Substitute x_v -> sum_w M(v,w) y_w monomial by monomial; forms are degree
  // <= 3 so the expansion is at most 4^3 terms per monomial.
  MultiForm out = MultiForm::zero(f.degree);
  const auto& tab = monomial_exponents(f.degree);
  for (int i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs(i) == 0.0) continue;
    // List the variables of this monomial with multiplicity.
    std::vector<int> vars;
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < tab[i][v]; ++k) vars.push_back(v);
    // Expand the product of linear substitutions.
    std::vector<std::pair<std::array<int, 4>, double>> terms = {{{0, 0, 0, 0}, f.coeffs(i)}};
    for (int v : vars) {
      std::vector<std::pair<std::array<int, 4>, double>> next;
      for (const auto& [e, c] : terms)
        for (int w = 0; w < 4; ++w) {
          if (M(v, w) == 0.0) continue;
          auto e2 = e;
          e2[w] += 1;
          next.emplace_back(e2, c * M(v, w));
        }
      terms = std::move(next);
    }
    for (const auto& [e, c] : terms) out.coeffs(monomial_index(f.degree, e)) += c;
  }
  return out;
}

// ───────────────────────── UniPoly ─────────────────────────

template <class Scalar>
UniPoly<Scalar> poly_add(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b) {
  UniPoly<Scalar> out;
  out.c.resize(std::max(a.c.size(), b.c.size()), Scalar(0));
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

template <class Scalar>
UniPoly<Scalar> poly_scale(const UniPoly<Scalar>& a, Scalar s) {
  UniPoly<Scalar> out = a;
  for (auto& v : out.c) v *= s;
  return out;
}

template <class Scalar>
UniPoly<Scalar> poly_mul(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b) {
  if (a.c.empty() || b.c.empty()) return UniPoly<Scalar>();
  UniPoly<Scalar> out;
  out.c.assign(a.c.size() + b.c.size() - 1, Scalar(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

template <class Scalar>
UniPoly<Scalar> poly_derivative(const UniPoly<Scalar>& a) {
  UniPoly<Scalar> out;
  if (a.c.size() <= 1) return UniPoly<Scalar>({Scalar(0)});
  out.c.resize(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) out.c[i - 1] = a.c[i] * Scalar(double(i));
  return out;
}

template <class Scalar>
int poly_degree(const UniPoly<Scalar>& a, double rel_tol) {
  double m = a.max_abs();
  if (m == 0.0) return -1;
  for (int i = static_cast<int>(a.c.size()) - 1; i >= 0; --i)
    if (std::abs(a.c[i]) > rel_tol * m) return i;
  return -1;
}

template <class Scalar>
UniPoly<Scalar> poly_divide_exact(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b,
                                  double rel_tol) {
  int db = poly_degree(b, 1e-14);
  int da = poly_degree(a, 1e-14);
  if (db < 0) throw invalid_input("poly_divide_exact: zero divisor");
  if (da < db) throw invalid_input("poly_divide_exact: degree of dividend below divisor");
  std::vector<Scalar> rem(a.c.begin(), a.c.begin() + da + 1);
  std::vector<Scalar> quot(da - db + 1, Scalar(0));
  for (int k = da - db; k >= 0; --k) {
    Scalar q = rem[k + db] / b.c[db];
    quot[k] = q;
    for (int j = 0; j <= db; ++j) rem[k + j] -= q * b.c[j];
  }
  double rmax = 0;
  for (int j = 0; j < db; ++j) rmax = std::max(rmax, std::abs(rem[j]));
  if (rmax > rel_tol * std::max(1.0, a.max_abs()))
    throw non_convergence("poly_divide_exact: remainder above tolerance");
  return UniPoly<Scalar>(std::move(quot));
}

template UniPoly<double> poly_add(const UniPoly<double>&, const UniPoly<double>&);
template UniPoly<cplx> poly_add(const UniPoly<cplx>&, const UniPoly<cplx>&);
template UniPoly<double> poly_scale(const UniPoly<double>&, double);
template UniPoly<cplx> poly_scale(const UniPoly<cplx>&, cplx);
template UniPoly<double> poly_mul(const UniPoly<double>&, const UniPoly<double>&);
template UniPoly<cplx> poly_mul(const UniPoly<cplx>&, const UniPoly<cplx>&);
template UniPoly<double> poly_derivative(const UniPoly<double>&);
template UniPoly<cplx> poly_derivative(const UniPoly<cplx>&);
template int poly_degree(const UniPoly<double>&, double);
template int poly_degree(const UniPoly<cplx>&, double);
template UniPoly<double> poly_divide_exact(const UniPoly<double>&, const UniPoly<double>&, double);
template UniPoly<cplx> poly_divide_exact(const UniPoly<cplx>&, const UniPoly<cplx>&, double);

namespace {

template <class Scalar>
UniPoly<Scalar> restrict_impl(const MultiForm& f, const std::array<UniPoly<Scalar>, 4>& gamma) {
  // A common root of all four coordinates would map some parameter to the
  // zero vector; detect it via the roots of the lowest-degree nonzero one.
  int pick = -1;
  for (int v = 0; v < 4; ++v) {
    if (poly_degree(gamma[v], 1e-13) < 0) continue;
    if (pick < 0 || poly_degree(gamma[v], 1e-13) < poly_degree(gamma[pick], 1e-13)) pick = v;
  }
  if (pick < 0) throw invalid_input("restrict_to_curve: all coordinates identically zero");
  if (poly_degree(gamma[pick], 1e-13) >= 1) {
    for (const cplx& r : univariate_roots(gamma[pick])) {
      bool all_vanish = true;
      for (int v = 0; v < 4; ++v) {
        UniPoly<cplx> gc;
        for (const auto& cv : gamma[v].c) gc.c.push_back(cplx(cv));
        double local = gamma[v].max_abs() * std::pow(1.0 + std::abs(r), gamma[v].c.size() - 1);
        if (std::abs(gc.eval(r)) > 1e-9 * (local + 1e-300)) all_vanish = false;
      }
      if (all_vanish)
        throw invalid_input("restrict_to_curve: coordinates share a root, not a curve");
    }
  }

  const auto& tab = monomial_exponents(f.degree);
  UniPoly<Scalar> acc({Scalar(0)});
  for (int i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs(i) == 0.0) continue;
    UniPoly<Scalar> m({Scalar(f.coeffs(i))});
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < tab[i][v]; ++k) m = poly_mul(m, gamma[v]);
    acc = poly_add(acc, m);
  }
  return acc;
}

}  // namespace

RPoly restrict_to_curve(const MultiForm& f, const std::array<RPoly, 4>& gamma) {
  return restrict_impl<double>(f, gamma);
}

CPoly restrict_to_curve_c(const MultiForm& f, const std::array<CPoly, 4>& gamma) {
  return restrict_impl<cplx>(f, gamma);
}

}  // namespace sepsemi
