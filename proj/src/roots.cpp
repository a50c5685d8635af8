#include "sepsemi/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace sepsemi {

namespace {

template <class Scalar>
std::vector<cplx> roots_impl(const UniPoly<Scalar>& p) {
  int deg = poly_degree(p, 1e-13);
  if (deg < 0) throw invalid_input("univariate_roots: zero polynomial");
  if (deg == 0) return {};

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  cplx lead = cplx(p.c[deg]);
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -cplx(p.c[i]) / lead;
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw non_convergence("univariate_roots: eigensolver failed");

  // One Newton step against the original coefficients tightens the
  // companion-matrix eigenvalues without risking divergence.
  std::vector<cplx> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) {
    cplx z = es.eigenvalues()(i);
    cplx f(0), df(0);
    for (int k = deg; k >= 0; --k) {
      df = df * z + f;
      f = f * z + cplx(p.c[k]);
    }
    if (std::abs(df) > 1e-300) {
      cplx step = f / df;
      if (std::abs(step) < 1.0 + std::abs(z)) z -= step;
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw non_convergence("univariate_roots: non-finite root");
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace

std::vector<cplx> univariate_roots(const RPoly& p) { return roots_impl(p); }
std::vector<cplx> univariate_roots(const CPoly& p) { return roots_impl(p); }

RootPartition partition_roots(const std::vector<cplx>& roots, double tol_im) {
  RootPartition out;
  std::vector<cplx> imag;
  for (const cplx& z : roots) {
    if (std::abs(z.imag()) < tol_im * (1.0 + std::abs(z))) {
      out.real.push_back(z.real());
      out.max_residual_im = std::max(out.max_residual_im, std::abs(z.imag()));
    } else {
      imag.push_back(z);
    }
  }
  std::sort(out.real.begin(), out.real.end());

  std::vector<bool> used(imag.size(), false);
  for (size_t i = 0; i < imag.size(); ++i) {
    if (used[i]) continue;
    int best = -1;
    double best_d = 1e300;
    for (size_t j = i + 1; j < imag.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(imag[j] - std::conj(imag[i]));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    double scale = 1.0 + std::abs(imag[i]);
    if (best < 0 || best_d > 1e-5 * scale)
      throw non_convergence("partition_roots: unpaired imaginary root");
    used[i] = used[best] = true;
    cplx up = imag[i].imag() > 0 ? imag[i] : imag[best];
    cplx dn = imag[i].imag() > 0 ? imag[best] : imag[i];
    out.pairs.emplace_back(up, dn);
  }
  return out;
}

}  // namespace sepsemi
