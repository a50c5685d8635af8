#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "sepsemi/error.hpp"

namespace sepsemi {

using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

// ───────────────────────── Homogeneous forms in x0..x3 ─────────────────────────
//
// Coefficients follow the graded-lex monomial order on x0<x1<x2<x3: within a
// fixed total degree, exponent tuples (e0,e1,e2,e3) are listed lexicographically
// descending, so x0^d comes first and x3^d last. Lengths: 4 / 10 / 20 for
// degrees 1 / 2 / 3. This is the order used by the curve JSON files.

int monomial_count(int degree);
const std::vector<std::array<int, 4>>& monomial_exponents(int degree);
int monomial_index(int degree, const std::array<int, 4>& expo);

struct MultiForm {
  int degree = 0;
  Eigen::VectorXd coeffs;  // monomial_count(degree) entries

  MultiForm() = default;
  MultiForm(int deg, Eigen::VectorXd c);
  static MultiForm zero(int degree);
  static MultiForm linear(const Vec4& h);  // h0*x0 + ... + h3*x3

  double norm() const { return coeffs.norm(); }
};

/** f(p). Rejects the zero vector p. */
template <class Scalar>
Scalar evaluate_form(const MultiForm& f, const Eigen::Matrix<Scalar, 4, 1>& p);

/** Gradient of f at p, one partial per variable. */
template <class Scalar>
Eigen::Matrix<Scalar, 4, 1> form_gradient(const MultiForm& f, const Eigen::Matrix<Scalar, 4, 1>& p);

/** Coefficients of x -> f(M x). */
MultiForm transformed(const MultiForm& f, const Mat4& M);

/** Product of forms; degree sum must stay <= 3. */
MultiForm multiply(const MultiForm& a, const MultiForm& b);

MultiForm add(const MultiForm& a, const MultiForm& b);
MultiForm scale(const MultiForm& a, double s);

// ───────────────────────── Univariate polynomials ─────────────────────────
//
// Coefficients ascending: c[0] + c[1] t + ... Trailing entries may be zero;
// degree() trims them against a relative tolerance.

template <class Scalar>
struct UniPoly {
  std::vector<Scalar> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<Scalar> coeffs) : c(std::move(coeffs)) {}
  static UniPoly constant(Scalar v) { return UniPoly({v}); }

  int size_degree() const { return static_cast<int>(c.size()) - 1; }
  Scalar eval(Scalar t) const {
    Scalar acc = Scalar(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
  double max_abs() const {
    double m = 0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
  }
};

using RPoly = UniPoly<double>;
using CPoly = UniPoly<cplx>;

template <class Scalar>
UniPoly<Scalar> poly_add(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b);
template <class Scalar>
UniPoly<Scalar> poly_scale(const UniPoly<Scalar>& a, Scalar s);
template <class Scalar>
UniPoly<Scalar> poly_mul(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b);
template <class Scalar>
UniPoly<Scalar> poly_derivative(const UniPoly<Scalar>& a);

/** Effective degree after trimming coefficients below rel_tol * max|c|. */
template <class Scalar>
int poly_degree(const UniPoly<Scalar>& a, double rel_tol = 1e-12);

/** Exact-shape division a / b; throws when the remainder exceeds tolerance. */
template <class Scalar>
UniPoly<Scalar> poly_divide_exact(const UniPoly<Scalar>& a, const UniPoly<Scalar>& b,
                                  double rel_tol = 1e-7);

/**
 * Composition f(gamma(t)) for a curve gamma given by four coordinate
 * polynomials. Degree of the result is deg f * max deg gamma_i. Rejects a
 * gamma whose four coordinates share a common root (the composite would not
 * be a curve point there).
 */
RPoly restrict_to_curve(const MultiForm& f, const std::array<RPoly, 4>& gamma);
CPoly restrict_to_curve_c(const MultiForm& f, const std::array<CPoly, 4>& gamma);

}  // namespace sepsemi
