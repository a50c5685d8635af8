#include "sepsemi/segre.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "sepsemi/roots.hpp"

namespace sepsemi {

namespace {

constexpr double kTau = 6.28318530717958647692;
const cplx kI(0.0, 1.0);

Eigen::Matrix4cd segre_mix(SurfaceKind kind) {
  // n = L z with z = (sp, sq, tp, tq); rows chosen so Q(n) vanishes identically.
  Eigen::Matrix4cd L = Eigen::Matrix4cd::Zero();
  if (kind == SurfaceKind::hyperboloid) {
    L.row(0) << 1, 0, 0, 1;
    L.row(1) << 0, 1, -1, 0;
    L.row(2) << 0, 1, 1, 0;
    L.row(3) << 1, 0, 0, -1;
  } else {  // ellipsoid
    L.row(0) << 0.5, 0, 0, -0.5;
    L.row(1) << -0.5 * kI, 0, 0, -0.5 * kI;
    L.row(2) << 0, 0.5, 0.5, 0;
    L.row(3) << 0, 0.5, -0.5, 0;
  }
  return L;
}

}  // namespace

SurfaceParam surface_param(const Classification& cls) {
  SurfaceParam par;
  par.kind = cls.kind;
  par.from_normal = cls.from_normal;
  if (cls.kind != SurfaceKind::cone) {
    Eigen::Matrix4cd M = cls.from_normal.cast<cplx>() * segre_mix(cls.kind);
    for (int c = 0; c < 4; ++c) {
      Eigen::Matrix2cd A;
      A << M(c, 0), M(c, 1), M(c, 2), M(c, 3);
      par.bilinear[c] = A;
    }
  }
  return par;
}

CVec4 param_point(const SurfaceParam& par, cplx s, cplx t, cplx p, cplx q) {
  if (par.kind != SurfaceKind::cone) {
    CVec4 x;
    for (int c = 0; c < 4; ++c) {
      const auto& A = par.bilinear[c];
      x(c) = s * (A(0, 0) * p + A(0, 1) * q) + t * (A(1, 0) * p + A(1, 1) * q);
    }
    return x;
  }
  CVec4 n;
  n << p * (s * s - t * t), p * (2.0 * s * t), p * (s * s + t * t), q * (s * s + t * t);
  return par.from_normal.cast<cplx>() * n;
}

double imaginary_residual(const CVec4& x) {
  int jmax = 0;
  for (int j = 1; j < 4; ++j)
    if (std::abs(x(j)) > std::abs(x(jmax))) jmax = j;
  CVec4 y = x / x(jmax);
  double im = 0;
  for (int j = 0; j < 4; ++j) im = std::max(im, std::abs(y(j).imag()));
  return im;
}

SectionPoint make_section_point(const CVec4& x, double tol_im) {
  int jmax = 0;
  for (int j = 1; j < 4; ++j)
    if (std::abs(x(j)) > std::abs(x(jmax))) jmax = j;
  SectionPoint sp;
  sp.xc = x / x(jmax);
  double scale = 0;
  for (int j = 0; j < 4; ++j) scale = std::max(scale, std::abs(sp.xc(j)));
  sp.real = imaginary_residual(x) < tol_im * (1.0 + scale);
  if (sp.real) {
    Vec4 r;
    for (int j = 0; j < 4; ++j) r(j) = sp.xc(j).real();
    r /= r.norm();
    int imax = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(r(j)) > std::abs(r(imax))) imax = j;
    if (r(imax) < 0) r = -r;
    sp.xr = r;
  }
  return sp;
}

namespace {

// ─────────────── Twisted parametrization ───────────────
//
// A fresh pair of generic 2x2 changes of the parameter lines per solve
// attempt keeps fiber points away from the sampling frame's infinity and, for
// the cone, moves the two contracted fibers (the roots of the apex-coordinate
// quadratic h) to generic locations.

struct Twist {
  const SurfaceParam* par = nullptr;
  Eigen::Matrix2cd U1, U2;
  std::array<cplx, 3> h;  // cone apex-coordinate quadratic h0 s^2 + h1 s t + h2 t^2

  CVec4 point(cplx s, cplx t, cplx p, cplx q) const {
    cplx s2 = U1(0, 0) * s + U1(0, 1) * t;
    cplx t2 = U1(1, 0) * s + U1(1, 1) * t;
    cplx p2 = U2(0, 0) * p + U2(0, 1) * q;
    cplx q2 = U2(1, 0) * p + U2(1, 1) * q;
    if (par->kind != SurfaceKind::cone) return param_point(*par, s2, t2, p2, q2);
    CVec4 n;
    n << p2 * (s2 * s2 - t2 * t2), p2 * (2.0 * s2 * t2), p2 * (s2 * s2 + t2 * t2),
        q2 * h_eval(s, t);
    return par->from_normal.cast<cplx>() * n;
  }

  cplx h_eval(cplx s, cplx t) const {
    cplx s2 = U1(0, 0) * s + U1(0, 1) * t;
    cplx t2 = U1(1, 0) * s + U1(1, 1) * t;
    return h[0] * s2 * s2 + h[1] * s2 * t2 + h[2] * t2 * t2;
  }
};

cplx draw_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double a = d(rng), b = d(rng);
  return cplx(a, b);
}

Twist draw_twist(const SurfaceParam& par, std::mt19937_64& rng) {
  Twist tw;
  tw.par = &par;
  for (;;) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        tw.U1(i, j) = draw_unit(rng);
        tw.U2(i, j) = draw_unit(rng);
      }
    tw.h = {draw_unit(rng), draw_unit(rng), draw_unit(rng)};
    if (std::abs(tw.U1.determinant()) > 0.3 && std::abs(tw.U2.determinant()) > 0.3 &&
        std::abs(tw.h[0]) + std::abs(tw.h[2]) > 0.3)
      return tw;
  }
}

// Coefficients of the second-factor binary form of degree m:
// F(point(s,t,p,q)) = sum_i coef[i] p^(m-i) q^i for fixed (s,t).
std::vector<cplx> second_factor_coeffs(const Twist& tw, const MultiForm& F, cplx s, cplx t,
                                       int m) {
  int n = m + 1;
  Eigen::MatrixXcd V(n, n);
  Eigen::VectorXcd rhs(n);
  for (int j = 0; j < n; ++j) {
    double th = 0.37 + kTau * j / (2.0 * n);
    cplx p(std::cos(th), 0.0), q(std::sin(th), 0.0);
    CVec4 x = tw.point(s, t, p, q);
    rhs(j) = evaluate_form<cplx>(F, x);
    for (int i = 0; i < n; ++i) V(j, i) = std::pow(p, m - i) * std::pow(q, i);
  }
  Eigen::VectorXcd c = V.fullPivLu().solve(rhs);
  return std::vector<cplx>(c.data(), c.data() + n);
}

// Coefficients of the first-factor binary form of degree m:
// F(point(s,t,p,q)) = sum_i coef[i] s^(m-i) t^i for fixed (p,q).
std::vector<cplx> first_factor_coeffs(const Twist& tw, const MultiForm& F, cplx p, cplx q,
                                      int m) {
  int n = m + 1;
  Eigen::MatrixXcd V(n, n);
  Eigen::VectorXcd rhs(n);
  for (int j = 0; j < n; ++j) {
    double th = 0.37 + kTau * j / (2.0 * n);
    cplx s(std::cos(th), 0.0), t(std::sin(th), 0.0);
    CVec4 x = tw.point(s, t, p, q);
    rhs(j) = evaluate_form<cplx>(F, x);
    for (int i = 0; i < n; ++i) V(j, i) = std::pow(s, m - i) * std::pow(t, i);
  }
  Eigen::VectorXcd c = V.fullPivLu().solve(rhs);
  return std::vector<cplx>(c.data(), c.data() + n);
}

// Resultant of two binary forms given by p-major coefficient lists. Vanishes
// exactly when they share a projective root, the (0:1) direction included.
cplx binary_resultant(const std::vector<cplx>& A, const std::vector<cplx>& B) {
  int m = static_cast<int>(A.size()) - 1;
  int n = static_cast<int>(B.size()) - 1;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m + n, m + n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) S(r, r + i) = A[i];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) S(n + r, r + i) = B[i];
  return S.determinant();
}

// All m projective roots of a binary form given p-major with formal degree m.
// Trailing coefficient decay means roots at (0:1).
std::vector<std::pair<cplx, cplx>> binary_roots(const std::vector<cplx>& B) {
  const int m = static_cast<int>(B.size()) - 1;
  auto norm_pair = [](cplx p, cplx q) {
    double n = std::hypot(std::abs(p), std::abs(q));
    return std::make_pair(p / n, q / n);
  };
  CPoly b;  // B(p,q) = p^m b(q/p)
  b.c = B;
  int k = poly_degree(b, 1e-10);
  if (k < 0) throw invalid_input("binary_roots: zero form");
  std::vector<std::pair<cplx, cplx>> out;
  for (int i = k; i < m; ++i) out.push_back(norm_pair(0, 1));
  b.c.resize(k + 1);
  if (k > 0)
    for (const cplx& y : univariate_roots(b)) out.push_back(norm_pair(1, y));
  return out;
}

cplx eval_binary(const std::vector<cplx>& B, cplx p, cplx q) {
  const int m = static_cast<int>(B.size()) - 1;
  cplx acc = 0;
  for (int i = 0; i <= m; ++i) acc += B[i] * std::pow(p, m - i) * std::pow(q, i);
  return acc;
}

// Newton on {eqs = 0} with the largest coordinate frozen. Returns the final
// residual relative to the coefficient scale.
double polish_point(CVec4& x, const std::array<const MultiForm*, 3>& eqs) {
  x /= x.norm();
  double scale = 0;
  for (const auto* e : eqs) scale = std::max(scale, e->coeffs.norm());
  double best = 1e300;
  CVec4 best_x = x;
  for (int iter = 0; iter < 10; ++iter) {
    int jmax = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(x(j)) > std::abs(x(jmax))) jmax = j;
    Eigen::Vector3cd F;
    Eigen::Matrix3cd J;
    for (int e = 0; e < 3; ++e) {
      F(e) = evaluate_form<cplx>(*eqs[e], x);
      CVec4 g = form_gradient<cplx>(*eqs[e], x);
      int col = 0;
      for (int j = 0; j < 4; ++j)
        if (j != jmax) J(e, col++) = g(j);
    }
    double res = F.cwiseAbs().maxCoeff();
    if (res < best) {
      best = res;
      best_x = x;
    }
    if (res < 1e-15 * scale) break;
    Eigen::Vector3cd d = J.fullPivLu().solve(F);
    if (!d.allFinite()) break;
    int col = 0;
    for (int j = 0; j < 4; ++j)
      if (j != jmax) x(j) -= d(col++);
    x /= x.norm();
  }
  x = best_x;
  return best / scale;
}

// Gauss-Newton projection onto {Q = K = 0} alone. Used when the full-system
// Jacobian is singular (fiber tangencies): the point stays put to first order
// and lands on the curve quadratically.
double polish_to_curve(CVec4& x, const MultiForm& Qf, const MultiForm& Kf) {
  x /= x.norm();
  double scale = std::max(Qf.coeffs.norm(), Kf.coeffs.norm());
  double best = 1e300;
  CVec4 best_x = x;
  for (int iter = 0; iter < 10; ++iter) {
    int jmax = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(x(j)) > std::abs(x(jmax))) jmax = j;
    Eigen::Vector2cd F(evaluate_form<cplx>(Qf, x), evaluate_form<cplx>(Kf, x));
    Eigen::Matrix<cplx, 2, 3> J;
    CVec4 gq = form_gradient<cplx>(Qf, x), gk = form_gradient<cplx>(Kf, x);
    int col = 0;
    for (int j = 0; j < 4; ++j)
      if (j != jmax) {
        J(0, col) = gq(j);
        J(1, col) = gk(j);
        ++col;
      }
    double res = F.cwiseAbs().maxCoeff();
    if (res < best) {
      best = res;
      best_x = x;
    }
    if (res < 1e-15 * scale) break;
    Eigen::Vector3cd d = J.completeOrthogonalDecomposition().solve(F);
    if (!d.allFinite()) break;
    col = 0;
    for (int j = 0; j < 4; ++j)
      if (j != jmax) x(j) -= d(col++);
    x /= x.norm();
  }
  x = best_x;
  return best / scale;
}

struct Cluster {
  cplx center;
  int size;
};

std::vector<Cluster> cluster_roots(const std::vector<cplx>& roots, double tol) {
  std::vector<Cluster> cl;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int cnt = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(roots[j] - sum / double(cnt)) < tol * (1.0 + std::abs(roots[j]))) {
        sum += roots[j];
        ++cnt;
        used[j] = true;
      }
    }
    cl.push_back({sum / double(cnt), cnt});
  }
  return cl;
}

}  // namespace

std::vector<SectionPoint> curve_divisor_points(const SurfaceParam& par, const Quadric& Q,
                                               const MultiForm& K, const MultiForm& G,
                                               std::mt19937_64& rng, double tol_im) {
  if (K.degree != 3) throw invalid_input("curve_divisor_points: K must be cubic");
  if (G.degree != 1 && G.degree != 2)
    throw invalid_input("curve_divisor_points: divisor degree must be 1 or 2");
  if (G.norm() == 0.0) throw invalid_input("curve_divisor_points: zero divisor form");
  if (G.degree == 2) {
    // A multiple of Q cuts nothing: its section is the whole curve.
    double qn = Q.form.coeffs.norm();
    Eigen::VectorXd residual = G.coeffs - (G.coeffs.dot(Q.form.coeffs) / (qn * qn)) * Q.form.coeffs;
    if (residual.norm() < 1e-10 * G.coeffs.norm())
      throw invalid_input("curve_divisor_points: divisor is a multiple of the surface form");
  }

  const int d = G.degree;
  const int target = 6 * d;       // honest intersection degree
  const int nsamp = target + 1;

  MultiForm Kn = scale(K, 1.0 / K.norm());
  MultiForm Gn = scale(G, 1.0 / G.norm());

  std::string last_err = "no attempt";
  for (int attempt = 0; attempt < 6; ++attempt) {
    Twist tw = draw_twist(par, rng);
    // Eliminant values at unit-circle samples of the first factor.
    std::vector<cplx> vals(nsamp);
    std::vector<std::vector<cplx>> Bs(nsamp);
    bool bad = false;
    double vmax = 0;
    for (int k = 0; k < nsamp && !bad; ++k) {
      cplx s = std::polar(1.0, kTau * k / nsamp);
      auto A = second_factor_coeffs(tw, Kn, s, 1.0, 3);
      Bs[k] = second_factor_coeffs(tw, Gn, s, 1.0, d);
      cplx r = binary_resultant(A, Bs[k]);
      if (par.kind == SurfaceKind::cone) {
        cplx hc = tw.h_eval(s, 1.0);
        if (std::abs(hc) < 0.03) {
          bad = true;
          last_err = "contracted fiber too close to a sample";
          break;
        }
        r /= std::pow(hc, 3 * d);
      }
      vals[k] = r;
      vmax = std::max(vmax, std::abs(r));
    }
    if (bad) continue;

    // Fibers on which the divisor vanishes identically (the divisor contains
    // a line of this ruling family, e.g. any plane tangent to the surface or
    // through the cone apex). Their curve points are honest section points
    // that never reach the resultant, so collect them directly.
    const int gdeg = (par.kind == SurfaceKind::cone) ? 2 * d : d;
    std::vector<CPoly> gpoly(d + 1);
    double gscale = 0;
    for (int j = 0; j <= d; ++j) {
      gpoly[j].c.resize(nsamp);
      for (int i = 0; i < nsamp; ++i) {
        cplx acc(0);
        for (int k = 0; k < nsamp; ++k)
          acc += Bs[k][j] * std::polar(1.0, -kTau * i * k / nsamp);
        gpoly[j].c[i] = acc / double(nsamp);
      }
      gpoly[j].c.resize(gdeg + 1);
      gscale = std::max(gscale, gpoly[j].max_abs());
    }
    if (gscale < 1e-14)
      throw invalid_input("curve_divisor_points: divisor contains the curve");
    {
      double lead = 0;
      for (int j = 0; j <= d; ++j) lead = std::max(lead, std::abs(gpoly[j].c[gdeg]));
      if (lead < 1e-8 * gscale) {
        last_err = "degenerate fiber at the sampling frame infinity";
        continue;
      }
    }
    int j0 = 0;
    for (int j = 1; j <= d; ++j)
      if (gpoly[j].max_abs() > gpoly[j0].max_abs()) j0 = j;

    // Per degenerate fiber: the vanishing order c of the divisor restriction
    // (its content) and the leading residual form; the divisor cuts the fiber
    // points with multiplicity c * (fiber root order), plus whatever the
    // residual divisor adds where it meets the fiber on the curve.
    struct DegenFiber {
      cplx s;
      int content = 0;
      std::vector<cplx> ell;           // residual binary form, p-major
      std::vector<size_t> point_idx;   // indices into pts
    };
    std::vector<DegenFiber> degen;
    bool degen_ok = true;
    for (const cplx& r : univariate_roots(gpoly[j0])) {
      double worst = 0;
      double local = gscale * std::max(1.0, std::pow(std::abs(r), gdeg));
      for (int j = 0; j <= d; ++j) worst = std::max(worst, std::abs(gpoly[j].eval(r)));
      if (worst >= 1e-7 * local) continue;
      DegenFiber f;
      f.s = r;
      // generous window: a doubly covered line splits its gpoly root in two
      bool dup = false;
      for (const auto& g : degen)
        if (std::abs(g.s - r) < 1e-5 * (1.0 + std::abs(r))) dup = true;
      if (dup) continue;
      std::vector<CPoly> der(gpoly.begin(), gpoly.end());
      double fact = 1;
      for (int k = 1; k <= gdeg && f.content == 0; ++k) {
        fact *= k;
        double top = 0;
        std::vector<cplx> lead(d + 1);
        for (int j = 0; j <= d; ++j) {
          der[j] = poly_derivative(der[j]);
          lead[j] = der[j].eval(r) / fact;
          top = std::max(top, std::abs(lead[j]));
        }
        if (top > 1e-6 * local) {
          f.content = k;
          f.ell = lead;
        }
      }
      if (f.content == 0) {
        degen_ok = false;
        break;
      }
      degen.push_back(std::move(f));
    }
    if (!degen_ok) {
      last_err = "divisor content order unresolved";
      continue;
    }

    std::vector<SectionPoint> pts;
    bool consistent = true;
    for (auto& fib : degen) {
      auto A = second_factor_coeffs(tw, Kn, fib.s, 1.0, 3);
      double ascale = 0;
      for (const auto& v : A) ascale = std::max(ascale, std::abs(v));
      if (ascale < 1e-12)
        throw invalid_input("curve_divisor_points: divisor and curve share a ruling line");
      auto fiber_roots = binary_roots(A);
      // collapse multiple roots by proximity
      std::vector<std::pair<std::pair<cplx, cplx>, int>> grouped;
      for (const auto& pq : fiber_roots) {
        bool merged = false;
        for (auto& g : grouped) {
          cplx cross = g.first.first * pq.second - g.first.second * pq.first;
          if (std::abs(cross) < 1e-5) {
            ++g.second;
            merged = true;
            break;
          }
        }
        if (!merged) grouped.push_back({pq, 1});
      }
      for (const auto& [pq, mult] : grouped) {
        CVec4 x = tw.point(fib.s, 1.0, pq.first, pq.second);
        if (x.norm() < 1e-12) {
          consistent = false;
          last_err = "degenerate fiber point collapsed";
          break;
        }
        double res = polish_to_curve(x, Q.form, Kn);
        double g_res = std::abs(evaluate_form<cplx>(Gn, CVec4(x / x.norm())));
        if (res > 1e-9 || g_res > 1e-6) {
          consistent = false;
          last_err = "ruling point polish stalled";
          break;
        }
        SectionPoint sp = make_section_point(x, tol_im);
        sp.multiplicity = fib.content * mult;
        fib.point_idx.push_back(pts.size());
        pts.push_back(sp);
      }
      if (!consistent) break;
    }
    if (!consistent) continue;
    if (vmax < 1e-30)
      throw invalid_input("curve_divisor_points: divisor contains a curve component");

    // Divisor entirely a union of ruling lines: every intersection point sits
    // on a degenerate fiber, and the eliminant collapses to one high-order
    // root whose numerical cluster is too loose to account. The direct count
    // already settles such divisors.
    int degen_total = 0;
    for (const auto& fib : degen) degen_total += 3 * fib.content;
    if (degen_total == target) {
      int total = 0;
      for (const auto& sp : pts) total += sp.multiplicity;
      if (total == target) return pts;
      last_err = "line divisor point count mismatch";
      continue;
    }

    // Inverse DFT gives the eliminant coefficients.
    CPoly elim;
    elim.c.resize(nsamp);
    for (int j = 0; j < nsamp; ++j) {
      cplx acc(0);
      for (int k = 0; k < nsamp; ++k) acc += vals[k] * std::polar(1.0, -kTau * j * k / nsamp);
      elim.c[j] = acc / double(nsamp);
    }
    if (std::abs(elim.c[target]) < 1e-7 * elim.max_abs()) {
      last_err = "eliminant degree dropped";
      continue;
    }

    std::vector<cplx> roots = univariate_roots(elim);
    auto clusters = cluster_roots(roots, 1e-6);

    // Eliminant roots pinned to a degenerate fiber split between the known
    // content factor and tangencies of the residual divisor there.
    for (auto& fib : degen) {
      int absorbed = 0;
      for (const auto& cl : clusters)
        if (std::abs(cl.center - fib.s) < 2e-4 * (1.0 + std::abs(fib.s))) absorbed += cl.size;
      int extra = absorbed - 3 * fib.content;
      if (extra < 0) {
        consistent = false;
        last_err = "degenerate fiber accounting came up short";
        break;
      }
      if (extra == 0) continue;
      // The surplus sits where the residual divisor meets the fiber on the
      // curve: the fiber roots annihilated by the residual form.
      double escale = 0;
      for (const auto& v : fib.ell) escale = std::max(escale, std::abs(v));
      auto A = second_factor_coeffs(tw, Kn, fib.s, 1.0, 3);
      std::vector<size_t> cands;
      for (size_t idx : fib.point_idx) {
        for (const auto& pq : binary_roots(A)) {
          CVec4 y = tw.point(fib.s, 1.0, pq.first, pq.second);
          if (y.norm() < 1e-12) continue;
          SectionPoint spy = make_section_point(y, tol_im);
          if ((spy.xc - pts[idx].xc).norm() > 1e-5 * (1.0 + spy.xc.norm())) continue;
          if (std::abs(eval_binary(fib.ell, pq.first, pq.second)) < 1e-4 * escale)
            cands.push_back(idx);
          break;
        }
      }
      if (cands.size() != 1) {
        consistent = false;
        last_err = "tangential residual multiplicity is ambiguous";
        break;
      }
      pts[cands.front()].multiplicity += extra;
    }
    if (!consistent) continue;

    for (const auto& cl : clusters) {
      bool absorbed = false;
      for (const auto& fib : degen)
        if (std::abs(cl.center - fib.s) < 2e-4 * (1.0 + std::abs(fib.s))) absorbed = true;
      if (absorbed) continue;  // already accounted on the degenerate fiber
      auto A = second_factor_coeffs(tw, Kn, cl.center, 1.0, 3);
      auto B = second_factor_coeffs(tw, Gn, cl.center, 1.0, d);
      double ascale = 0;
      for (const auto& v : A) ascale = std::max(ascale, std::abs(v));
      auto candidates = binary_roots(B);
      std::vector<std::pair<cplx, cplx>> hits;
      double best_res = 1e300;
      std::pair<cplx, cplx> best_pq = candidates.front();
      for (const auto& [p, q] : candidates) {
        cplx av = eval_binary(A, p, q);
        double res = std::abs(av) / (ascale + 1e-300);
        if (res < best_res) {
          best_res = res;
          best_pq = {p, q};
        }
        if (res < 1e-4) hits.push_back({p, q});
      }
      if (hits.empty()) {
        if (best_res < 1e-2)
          hits.push_back(best_pq);
        else {
          consistent = false;
          last_err = "no common second-factor root over an eliminant root";
          break;
        }
      }
      if (cl.size % static_cast<int>(hits.size()) != 0) {
        consistent = false;
        last_err = "multiplicity split ambiguous";
        break;
      }
      int mult = cl.size / static_cast<int>(hits.size());
      for (const auto& [p, q] : hits) {
        CVec4 x = tw.point(cl.center, 1.0, p, q);
        std::array<const MultiForm*, 3> eqs = {&Q.form, &Kn, &Gn};
        double res = polish_point(x, eqs);
        if (res > 1e-9) {
          // Singular full-system Jacobian (tangent divisor): settle for a
          // point exactly on the curve and nearly on the divisor.
          double curve_res = polish_to_curve(x, Q.form, Kn);
          double g_res = std::abs(evaluate_form<cplx>(Gn, x / x.norm()));
          if (curve_res > 1e-9 || g_res > 1e-5) {
            consistent = false;
            last_err = "point polish stalled";
            break;
          }
        }
        SectionPoint sp = make_section_point(x, tol_im);
        sp.multiplicity = mult;
        pts.push_back(sp);
      }
      if (!consistent) break;
    }
    if (!consistent) continue;

    int total = 0;
    for (const auto& sp : pts) total += sp.multiplicity;
    if (total != target) {
      last_err = "intersection count " + std::to_string(total) + " != " + std::to_string(target);
      continue;
    }
    return pts;
  }
  throw non_convergence("curve_divisor_points: " + last_err);
}

std::vector<CVec4> curve_singular_candidates(const SurfaceParam& par, const Quadric& Q,
                                             const MultiForm& K, std::mt19937_64& rng,
                                             double tol) {
  (void)Q;  // the parametrization already enforces Q = 0
  MultiForm Kn = scale(K, 1.0 / K.norm());
  std::vector<CVec4> found;
  auto already = [&](const CVec4& x) {
    SectionPoint a = make_section_point(x);
    for (const auto& f : found) {
      SectionPoint b = make_section_point(f);
      if ((a.xc - b.xc).norm() < 1e-5 * (1.0 + a.xc.norm())) return true;
    }
    return false;
  };

  // Two passes with independent twists: for the cone each pass is blind at its
  // two contracted surface points, which the other pass moves elsewhere.
  for (int pass = 0; pass < 2; ++pass) {
    Twist tw = draw_twist(par, rng);
    const int deg_bound = (par.kind == SurfaceKind::cone) ? 24 : 12;
    const int nsamp = deg_bound + 1;
    std::vector<cplx> vals(nsamp);
    for (int k = 0; k < nsamp; ++k) {
      cplx s = std::polar(1.0, kTau * k / nsamp);
      auto A = second_factor_coeffs(tw, Kn, s, 1.0, 3);
      // Partials of the binary cubic: common root <=> multiple root.
      std::vector<cplx> dp = {3.0 * A[0], 2.0 * A[1], A[2]};
      std::vector<cplx> dq = {A[1], 2.0 * A[2], 3.0 * A[3]};
      vals[k] = binary_resultant(dp, dq);
    }
    CPoly elim;
    elim.c.resize(nsamp);
    for (int j = 0; j < nsamp; ++j) {
      cplx acc(0);
      for (int k = 0; k < nsamp; ++k) acc += vals[k] * std::polar(1.0, -kTau * j * k / nsamp);
      elim.c[j] = acc / double(nsamp);
    }
    if (poly_degree(elim, 1e-9) < 1) continue;  // no branch structure resolved
    std::vector<cplx> roots;
    try {
      roots = univariate_roots(elim);
    } catch (const Error&) {
      continue;
    }

    // The restriction of K to the parameter plane, with its derivative along
    // the free second-factor direction (mode false: (1,w), mode true: (w,1))
    // and along s. The parametrization is polynomial of degree <= 2 in every
    // variable, so central differences of the point map are exact.
    auto restricted = [&](cplx s, cplx w, bool wfirst) {
      cplx p = wfirst ? w : cplx(1), q = wfirst ? cplx(1) : w;
      struct {
        cplx value, dw, ds;
        CVec4 x;
      } out;
      out.x = tw.point(s, 1.0, p, q);
      CVec4 grad = form_gradient<cplx>(Kn, out.x);
      const double h = 0.5;
      CVec4 xw = (tw.point(s, 1.0, wfirst ? w + h : p, wfirst ? q : w + h) -
                  tw.point(s, 1.0, wfirst ? w - h : p, wfirst ? q : w - h)) /
                 (2.0 * h);
      CVec4 xs = (tw.point(s + h, 1.0, p, q) - tw.point(s - h, 1.0, p, q)) / (2.0 * h);
      out.value = evaluate_form<cplx>(Kn, out.x);
      out.dw = (grad.transpose() * xw)(0);
      out.ds = (grad.transpose() * xs)(0);
      return out;
    };

    for (const cplx& s0 : roots) {
      auto A = second_factor_coeffs(tw, Kn, s0, 1.0, 3);
      double ascale = 0;
      for (const auto& v : A) ascale = std::max(ascale, std::abs(v));
      if (ascale < 1e-12) continue;
      std::vector<cplx> dp = {3.0 * A[0], 2.0 * A[1], A[2]};
      std::vector<cplx> dq = {A[1], 2.0 * A[2], 3.0 * A[3]};
      for (const auto& [p, q] : binary_roots(dp)) {
        if (std::abs(eval_binary(dq, p, q)) > 1e-2 * ascale) continue;

        // Gauss-Newton on (K, dK/dw, dK/ds) over (s, w). A point where the
        // full parameter gradient of the restriction dies on the zero set is
        // a singular curve point; anything else stalls at the fold strength.
        bool wfirst = std::abs(p) > std::abs(q);
        cplx s = s0, w = wfirst ? p / q : q / p;
        double best = 1e300;
        CVec4 best_x = CVec4::Zero();
        for (int iter = 0; iter < 15; ++iter) {
          auto r0 = restricted(s, w, wfirst);
          double xscale = 1.0 + std::pow(r0.x.norm(), 3);
          Eigen::Vector3cd F(r0.value, r0.dw, r0.ds);
          double res = F.cwiseAbs().maxCoeff() / xscale;
          if (res < best) {
            best = res;
            best_x = r0.x;
          }
          if (res < 1e-14) break;
          double hs = 1e-5 * (1.0 + std::abs(s)), hw = 1e-5 * (1.0 + std::abs(w));
          auto rs1 = restricted(s + hs, w, wfirst), rs2 = restricted(s - hs, w, wfirst);
          auto rw1 = restricted(s, w + hw, wfirst), rw2 = restricted(s, w - hw, wfirst);
          Eigen::Matrix<cplx, 3, 2> J;
          J(0, 0) = (rs1.value - rs2.value) / (2 * hs);
          J(1, 0) = (rs1.dw - rs2.dw) / (2 * hs);
          J(2, 0) = (rs1.ds - rs2.ds) / (2 * hs);
          J(0, 1) = (rw1.value - rw2.value) / (2 * hw);
          J(1, 1) = (rw1.dw - rw2.dw) / (2 * hw);
          J(2, 1) = (rw1.ds - rw2.ds) / (2 * hw);
          Eigen::Vector2cd step = J.colPivHouseholderQr().solve(F);
          if (!step.allFinite() || step.cwiseAbs().maxCoeff() > 10.0) break;
          s -= step(0);
          w -= step(1);
        }
        if (best > 1e-3 * tol) continue;
        if (best_x.norm() < 1e-12) continue;
        if (par.kind == SurfaceKind::cone && std::abs(tw.h_eval(s, 1.0)) < 1e-3)
          continue;  // contracted fiber of this pass, the other pass covers it
        if (!already(best_x)) found.push_back(best_x / best_x.norm());
      }
    }
  }
  return found;
}

std::vector<ContainedLine> contained_ruling_lines(const SurfaceParam& par, const MultiForm& F,
                                                  std::mt19937_64& rng) {
  const int m = F.degree;
  const double fscale = F.coeffs.norm();
  if (fscale <= 0) throw invalid_input("contained_ruling_lines: zero form");
  std::vector<ContainedLine> out;

  auto push_unique = [&](ContainedLine L) {
    L.p0 /= L.p0.norm();
    L.p1 /= L.p1.norm();
    for (const auto& o : out) {
      if (o.family != L.family) continue;
      Eigen::MatrixXcd S(4, 2);
      S.col(0) = o.p0;
      S.col(1) = o.p1;
      auto dec = S.completeOrthogonalDecomposition();
      double r0 = (S * dec.solve(Eigen::VectorXcd(L.p0)) - L.p0).norm();
      double r1 = (S * dec.solve(Eigen::VectorXcd(L.p1)) - L.p1).norm();
      if (r0 < 1e-6 && r1 < 1e-6) return;
    }
    out.push_back(std::move(L));
  };

  auto verified = [&](int family, const Twist& tw, cplx root) {
    for (int k = 0; k < 5; ++k) {
      double th = 0.17 + kTau * k / 5.0;
      cplx a(std::cos(th), 0.1 * std::sin(th)), b(std::sin(th), 0.0);
      CVec4 x = family == 0 ? tw.point(root, 1.0, a, b) : tw.point(a, b, root, 1.0);
      double nx = x.norm();
      if (nx < 1e-10) return false;  // contracted fiber, not a line
      if (std::abs(evaluate_form<cplx>(F, CVec4(x / nx))) > 1e-7 * fscale) return false;
    }
    return true;
  };

  const int families = (par.kind == SurfaceKind::cone) ? 1 : 2;
  for (int family = 0; family < families; ++family) {
    const int gdeg = (par.kind == SurfaceKind::cone) ? 2 * m : m;
    for (int attempt = 0; attempt < 4; ++attempt) {
      Twist tw = draw_twist(par, rng);
      const int nsamp = gdeg + 1;
      std::vector<std::vector<cplx>> coef(nsamp);
      for (int k = 0; k < nsamp; ++k) {
        cplx w = std::polar(1.0, kTau * k / nsamp);
        coef[k] = family == 0 ? second_factor_coeffs(tw, F, w, 1.0, m)
                              : first_factor_coeffs(tw, F, w, 1.0, m);
      }
      std::vector<CPoly> gp(m + 1);
      double gscale = 0;
      for (int j = 0; j <= m; ++j) {
        gp[j].c.resize(nsamp);
        for (int i = 0; i < nsamp; ++i) {
          cplx acc(0);
          for (int k = 0; k < nsamp; ++k)
            acc += coef[k][j] * std::polar(1.0, -kTau * i * k / nsamp);
          gp[j].c[i] = acc / double(nsamp);
        }
        gp[j].c.resize(gdeg + 1);
        gscale = std::max(gscale, gp[j].max_abs());
      }
      if (gscale < 1e-14 * fscale)
        throw invalid_input("contained_ruling_lines: form vanishes on the whole surface");
      double lead = 0;
      for (int j = 0; j <= m; ++j) lead = std::max(lead, std::abs(gp[j].c[gdeg]));
      if (lead < 1e-8 * gscale) continue;  // a line sits at this frame's infinity
      int j0 = 0;
      for (int j = 1; j <= m; ++j)
        if (gp[j].max_abs() > gp[j0].max_abs()) j0 = j;
      for (const cplx& r : univariate_roots(gp[j0])) {
        double local = gscale * std::max(1.0, std::pow(std::abs(r), gdeg));
        double worst = 0;
        for (int j = 0; j <= m; ++j) worst = std::max(worst, std::abs(gp[j].eval(r)));
        if (worst >= 1e-7 * local) continue;
        if (par.kind == SurfaceKind::cone && std::abs(tw.h_eval(r, 1.0)) < 1e-3) continue;
        if (!verified(family, tw, r)) continue;
        ContainedLine L;
        L.family = family;
        if (family == 0) {
          L.p0 = tw.point(r, 1.0, 1.0, 0.0);
          L.p1 = tw.point(r, 1.0, 0.0, 1.0);
        } else {
          L.p0 = tw.point(1.0, 0.0, r, 1.0);
          L.p1 = tw.point(0.0, 1.0, r, 1.0);
        }
        if (L.p0.norm() < 1e-10 || L.p1.norm() < 1e-10) continue;
        push_unique(std::move(L));
      }
      break;
    }
  }
  return out;
}

}  // namespace sepsemi
