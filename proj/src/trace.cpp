#include "sepsemi/trace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sepsemi/error.hpp"

namespace sepsemi {

namespace {

double proj_dist(const Vec4& a, const Vec4& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

struct CurveSystem {
  const MultiForm* Q;
  const MultiForm* K;
  double qs, ks;

  Eigen::Vector2d value(const Vec4& x) const {
    return {evaluate_form<double>(*Q, x) / qs, evaluate_form<double>(*K, x) / ks};
  }

  Eigen::Matrix<double, 2, 4> jac(const Vec4& x) const {
    Eigen::Matrix<double, 2, 4> J;
    J.row(0) = form_gradient<double>(*Q, x).transpose() / qs;
    J.row(1) = form_gradient<double>(*K, x).transpose() / ks;
    return J;
  }

  bool correct(Vec4& x, double tol) const {
    for (int it = 0; it < 25; ++it) {
      Eigen::Vector2d f = value(x);
      if (f.norm() < tol) return true;
      Vec4 dx = jac(x).completeOrthogonalDecomposition().solve(f);
      if (!dx.allFinite()) return false;
      x = (x - dx).normalized();
    }
    return value(x).norm() < 10 * tol;
  }

  // Unit tangent of the curve on the coordinate sphere: kernel of the rows
  // {dQ, dK, x}. sigma_min reports the smallest nonzero singular value, which
  // collapses at singular points of the curve.
  Vec4 tangent(const Vec4& x, double* sigma_min = nullptr) const {
    Eigen::Matrix<double, 3, 4> M;
    M.topRows<2>() = jac(x);
    M.row(2) = x.transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(M, Eigen::ComputeFullV);
    if (sigma_min) *sigma_min = svd.singularValues()(2);
    Vec4 t = svd.matrixV().col(3);
    int imax = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(t(i)) > std::abs(t(imax))) imax = i;
    if (t(imax) < 0) t = -t;
    return t;
  }
};

}  // namespace

RealLocus trace_real_locus(const SpaceSextic& C, double step, double tol_trace) {
  if (!(step > 1e-5 && step < 0.5))
    throw invalid_input("trace_real_locus: step outside (1e-5, 0.5)");
  if (!(tol_trace > 0 && tol_trace < 1e-3))
    throw invalid_input("trace_real_locus: tol outside (0, 1e-3)");
  if (C.cubic.degree != 3) throw invalid_input("trace_real_locus: cubic of degree != 3");

  Classification cls = classify_quadric(C.quadric);
  Chart chart = chart_map(cls);
  CurveSystem sys{&C.quadric.form, &C.cubic, C.quadric.form.coeffs.norm(),
                  C.cubic.coeffs.norm()};
  if (sys.ks <= 0) throw invalid_input("trace_real_locus: zero cubic");

  // Seeds: sign changes of the cubic along chart grid edges. Where the
  // representative chart.point flips sign across the period, the cubic (odd
  // degree) flips with it, and the bisected crossing is still an honest curve
  // point, so wraps need no special casing.
  const int nu = 160, nv = 80;
  const double u0 = 0, u1 = chart.period_u;
  double v0, v1;
  if (chart.v_periodic()) {
    v0 = 0;
    v1 = chart.period_v;
  } else {
    double margin = (cls.kind == SurfaceKind::cone) ? 0.03 : 0.0;
    v0 = chart.v_min + margin;
    v1 = chart.v_max - margin;
  }
  Eigen::MatrixXd kval(nu + 1, nv + 1);
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j)
      kval(i, j) = evaluate_form<double>(
          C.cubic, chart.point(u0 + (u1 - u0) * i / nu, v0 + (v1 - v0) * j / nv));

  auto edge_seed = [&](double ua, double va, double ub, double vb) {
    auto kv = [&](double t) {
      return evaluate_form<double>(C.cubic,
                                   chart.point(ua + t * (ub - ua), va + t * (vb - va)));
    };
    double lo = 0, hi = 1, flo = kv(0);
    for (int it = 0; it < 50; ++it) {
      double mid = 0.5 * (lo + hi), fm = kv(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double t = 0.5 * (lo + hi);
    return chart.point(ua + t * (ub - ua), va + t * (vb - va));
  };

  std::vector<Vec4> seeds;
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j) {
      double u = u0 + (u1 - u0) * i / nu;
      double v = v0 + (v1 - v0) * j / nv;
      if (i < nu && kval(i, j) * kval(i + 1, j) < 0)
        seeds.push_back(edge_seed(u, v, u + (u1 - u0) / nu, v));
      if (j < nv && kval(i, j) * kval(i, j + 1) < 0)
        seeds.push_back(edge_seed(u, v, u, v + (v1 - v0) / nv));
    }

  const double sigma_floor = 1e-7;
  RealLocus locus;
  locus.kind = cls.kind;

  std::vector<std::vector<Vec4>> polylines;
  auto consumed = [&](const Vec4& s) {
    for (const auto& pl : polylines)
      for (const Vec4& p : pl)
        if (proj_dist(p, s) < 2.0 * step) return true;
    return false;
  };

  long total_steps = 0;
  for (const Vec4& seed0 : seeds) {
    if (consumed(seed0)) continue;
    Vec4 x0 = seed0;
    if (!sys.correct(x0, tol_trace))
      throw non_convergence("trace_real_locus: seed refinement stalled");
    if (consumed(x0)) continue;

    double sg = 0;
    Vec4 t = sys.tangent(x0, &sg);
    if (sg < sigma_floor)
      throw non_convergence("trace_real_locus: curve is singular near a seed point");

    std::vector<Vec4> pts{x0};
    Vec4 x = x0, tprev = t;
    bool closed = false;
    for (int iter = 0; iter < 200000; ++iter) {
      if (++total_steps > 2000000)
        throw non_convergence("trace_real_locus: step budget exhausted");
      double h = step;
      Vec4 xn;
      for (;;) {
        xn = (x + h * tprev).normalized();
        bool ok = sys.correct(xn, tol_trace);
        double moved = proj_dist(xn, x);
        if (ok && moved > 0.2 * h && moved < 1.7 * h) break;
        h /= 2;
        if (h < step / 64.0)
          throw non_convergence("trace_real_locus: continuation step collapsed");
      }
      double sg2 = 0;
      Vec4 tn = sys.tangent(xn, &sg2);
      if (sg2 < sigma_floor)
        throw non_convergence("trace_real_locus: curve is singular along a component");
      if (tn.dot(tprev) < 0) tn = -tn;
      pts.push_back(xn);
      x = xn;
      tprev = tn;
      if (iter >= 8 && proj_dist(x, x0) < 0.75 * step) {
        closed = true;
        break;
      }
    }
    if (!closed) throw non_convergence("trace_real_locus: component failed to close");
    polylines.push_back(std::move(pts));
  }

  for (auto& pl : polylines) {
    TracedComponent comp;
    comp.points = std::move(pl);
    comp.uv.reserve(comp.points.size());
    for (const Vec4& p : comp.points) comp.uv.push_back(chart.uv(p));
    comp.cls = loop_class(chart, comp.uv);
    if (comp.cls.a < 0 || (comp.cls.a == 0 && comp.cls.b < 0)) {
      comp.cls.a = -comp.cls.a;
      comp.cls.b = -comp.cls.b;
    }
    comp.oval = comp.cls.trivial();
    locus.components.push_back(std::move(comp));
  }

  std::stable_sort(locus.components.begin(), locus.components.end(),
                   [&](const TracedComponent& a, const TracedComponent& b) {
                     return model_order_value(C, a.points) < model_order_value(C, b.points);
                   });

  locus.r = static_cast<int>(locus.components.size());
  locus.l = 0;
  for (const auto& c : locus.components) locus.l += c.oval ? 1 : 0;
  return locus;
}

}  // namespace sepsemi
