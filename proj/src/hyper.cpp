#include "sepsemi/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sepsemi/error.hpp"
#include "sepsemi/roots.hpp"

namespace sepsemi {

namespace {

constexpr double kPi = 3.14159265358979323846;

// branch coordinate in (0,1): monotone in x, infinity at the ends
double branch_pos(double x) { return (std::atan(x) + kPi / 2) / kPi; }

double sqrtF(const HyperellipticCurve& H, double x) {
  double v = H.F.eval(x);
  if (!(v > 0)) throw invalid_input("hyperelliptic curve: F not positive");
  return std::sqrt(v);
}

RPoly poly_sub(const RPoly& a, const RPoly& b) {
  return poly_add(a, poly_scale(b, -1.0));
}

// y on the curve at an elimination root, stable against small b values
double back_substitute_y(const HyperellipticCurve& H, const HyperMorphism& f,
                         double t, double x) {
  double num = t * f.c.eval(x) - f.a.eval(x);
  double bv = f.b.eval(x);
  double Fv = H.F.eval(x);
  if (std::abs(num) >= std::abs(bv) * std::sqrt(std::max(Fv, 0.0)))
    return bv * Fv / num;  // conjugate form, |result| <= sqrt(F)
  return num / bv;
}

int ysign_of(double y) { return y >= 0 ? +1 : -1; }

void set_position(const HyperellipticCurve& H, HyperFiberPoint& p) {
  p.component = hyper_component(H, ysign_of(p.y));
  p.arc = hyper_arc(H, p.x, ysign_of(p.y));
}

// infinity point on the branch with sign(y / x^(g+1)) = wsign
HyperFiberPoint infinity_point(const HyperellipticCurve& H, int wsign, int mult) {
  HyperFiberPoint p;
  p.infinite = true;
  p.x = wsign;  // records the branch, not a coordinate
  p.y = 0;
  p.multiplicity = mult;
  if (H.g % 2 == 1) {
    // x -> +inf on branch y*wsign > 0; both ends of that branch meet here
    p.component = hyper_component(H, wsign);
    p.arc = 0.0;
  } else {
    p.component = 0;
    p.arc = wsign > 0 ? 0.5 : 0.0;
  }
  return p;
}

}  // namespace

int hyper_components(const HyperellipticCurve& H) { return H.g % 2 == 1 ? 2 : 1; }

int hyper_component(const HyperellipticCurve& H, int ysign) {
  if (H.g % 2 == 0) return 0;
  return ysign > 0 ? 0 : 1;
}

double hyper_arc(const HyperellipticCurve& H, double x, int ysign) {
  double s = branch_pos(x);
  if (H.g % 2 == 1) return s;
  return ysign > 0 ? s / 2 : 0.5 + s / 2;
}

HyperMorphism hyper_projection(const HyperellipticCurve& H) {
  (void)H;
  HyperMorphism f;
  f.a = RPoly({0.0, 1.0});
  f.b = RPoly({0.0});
  f.c = RPoly::constant(1.0);
  f.degree = 2;
  return f;
}

HyperMorphism hyper_pencil_from_divisor(const HyperellipticCurve& H,
                                        const std::vector<double>& xs) {
  const int n = H.g + 1;
  if (static_cast<int>(xs.size()) != n)
    throw invalid_input("hyper_pencil_from_divisor: need g+1 points");
  for (int i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1]))
      throw invalid_input("hyper_pencil_from_divisor: x values must increase strictly");

  Eigen::VectorXd ys(n);
  for (int i = 0; i < n; ++i) ys[i] = (i % 2 == 0 ? -1.0 : 1.0) * sqrtF(H, xs[i]);

  // interpolant of degree <= g through (x_i, y_i)
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    double p = 1;
    for (int j = 0; j < n; ++j) {
      V(i, j) = p;
      p *= xs[i];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible())
    throw non_convergence("hyper_pencil_from_divisor: interpolation system is singular");
  Eigen::VectorXd ac = lu.solve(ys);

  HyperMorphism f;
  f.a.c.assign(ac.data(), ac.data() + n);
  f.b = RPoly::constant(1.0);
  f.c = RPoly::constant(1.0);
  for (double x : xs) f.c = poly_mul(f.c, RPoly({-x, 1.0}));
  f.degree = n;
  return f;
}

HyperFiber hyper_fiber_at(const HyperellipticCurve& H, const HyperMorphism& f,
                          double theta) {
  HyperFiber fb;
  fb.theta = theta;
  const double t = std::tan(theta);
  const bool infinite_t =
      std::abs(std::remainder(theta, kPi)) > kPi / 2 - 1e-13 || std::isinf(t);

  if (poly_degree(f.b) < 0) {
    // pure function of x: every root carries both branch points
    if (infinite_t) {
      fb.points.push_back(infinity_point(H, +1, 1));
      fb.points.push_back(infinity_point(H, -1, 1));
      return fb;
    }
    RPoly num = poly_sub(poly_scale(f.c, t), f.a);
    if (poly_degree(num) < 0)
      throw invalid_input("hyper_fiber_at: constant member");
    for (const cplx& r : univariate_roots(num)) {
      double im = std::abs(r.imag()) / (1.0 + std::abs(r.real()));
      fb.max_im = std::max(fb.max_im, im);
      if (im > 1e-7) {
        fb.all_real = false;
        continue;
      }
      for (int s : {+1, -1}) {
        HyperFiberPoint p;
        p.x = r.real();
        p.y = s * sqrtF(H, r.real());
        set_position(H, p);
        fb.points.push_back(p);
      }
    }
    return fb;
  }

  if (infinite_t) {
    // poles of f: zeros of c not cancelled by the numerator
    if (poly_degree(f.c) < 1)
      throw invalid_input("hyper_fiber_at: the infinite member needs a nonconstant c");
    for (const cplx& r : univariate_roots(f.c)) {
      if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r)))
        throw non_convergence("hyper_fiber_at: complex pole of the pencil");
      HyperFiberPoint p;
      p.x = r.real();
      p.y = f.a.eval(r.real()) / f.b.eval(r.real());
      set_position(H, p);
      fb.points.push_back(p);
    }
    std::sort(fb.points.begin(), fb.points.end(),
              [](const HyperFiberPoint& a, const HyperFiberPoint& b) {
                if (a.component != b.component) return a.component < b.component;
                return a.arc < b.arc;
              });
    return fb;
  }

  // (t*c - a)^2 - b^2 F carries the fiber along with the fixed zeros of the
  // numerator (the pole conjugates, where a + b*y = 0 independently of t)
  RPoly num = poly_sub(poly_scale(f.c, t), f.a);
  RPoly R = poly_sub(poly_mul(num, num), poly_mul(poly_mul(f.b, f.b), H.F));
  const int npoles = std::max(poly_degree(f.c), 0);
  const int full = f.degree + npoles;

  int deg = poly_degree(R, 1e-10);
  if (deg < 0) throw invalid_input("hyper_fiber_at: member vanishes identically");
  if (deg < full) {
    // escaping branch: w = y/x^(g+1) tends to t*lc(c)/lc(b) at the escape
    double lcc = f.c.c.back();
    double lcb = f.b.c.back();
    int wsign = t * lcc * lcb > 0 ? +1 : -1;
    fb.points.push_back(infinity_point(H, wsign, full - deg));
  }
  R.c.resize(deg + 1);

  std::vector<cplx> roots = deg >= 1 ? univariate_roots(R) : std::vector<cplx>{};
  struct Root {
    cplx x;
    int mult;
    double y;
    double eta;  // numerator residual |a + b*y|, ~0 exactly at the fixed zeros
  };
  std::vector<Root> grouped;
  for (const cplx& r : roots) {
    bool merged = false;
    for (auto& g : grouped)
      if (std::abs(g.x - r) < 1e-6 * (1.0 + std::abs(r))) {
        ++g.mult;
        merged = true;
        break;
      }
    if (!merged) grouped.push_back({r, 1, 0.0, 0.0});
  }
  for (auto& g : grouped) {
    double x = g.x.real();
    g.y = back_substitute_y(H, f, t, x);
    double av = f.a.eval(x), bv = f.b.eval(x);
    g.eta = std::abs(av + bv * g.y) /
            (std::abs(av) + std::abs(bv * g.y) + 1e-300);
  }
  // drop one fixed zero per pole of the pencil, nearest-then-cleanest first
  if (npoles > 0) {
    for (const cplx& pr : univariate_roots(f.c)) {
      int best = -1;
      double score = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(grouped.size()); ++i) {
        if (grouped[i].mult == 0) continue;
        double d = std::abs(grouped[i].x - pr);
        if (d > 0.3) continue;
        double s = grouped[i].eta + d;
        if (s < score) {
          score = s;
          best = i;
        }
      }
      if (best < 0)
        throw non_convergence("hyper_fiber_at: fixed zero missing near a pole");
      grouped[best].mult -= 1;
    }
  }
  for (const auto& g : grouped) {
    if (g.mult == 0) continue;
    double im = std::abs(g.x.imag()) / (1.0 + std::abs(g.x.real()));
    fb.max_im = std::max(fb.max_im, im);
    HyperFiberPoint p;
    p.x = g.x.real();
    p.multiplicity = g.mult;
    if (im > 1e-7) {
      fb.all_real = false;
      p.component = -1;
      fb.points.push_back(p);
      continue;
    }
    p.y = g.y;
    set_position(H, p);
    fb.points.push_back(p);
  }
  std::sort(fb.points.begin(), fb.points.end(),
            [](const HyperFiberPoint& a, const HyperFiberPoint& b) {
              if (a.component != b.component) return a.component < b.component;
              return a.arc < b.arc;
            });
  return fb;
}

DegreeVector hyper_fiber_degree_vector(const HyperellipticCurve& H,
                                       const HyperFiber& fb) {
  DegreeVector d(hyper_components(H), 0);
  for (const auto& p : fb.points)
    if (p.component >= 0) d[p.component] += p.multiplicity;
  return d;
}

SeparatingCertificate hyper_separating_certificate(const HyperellipticCurve& H,
                                                   const HyperMorphism& f,
                                                   int n_samples) {
  if (n_samples < 2)
    throw invalid_input("hyper_separating_certificate: too few samples");
  SeparatingCertificate cert;
  cert.n_samples = n_samples;
  cert.min_root_separation = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_samples; ++j) {
    double theta = kPi * (j + 0.5) / n_samples;
    HyperFiber fb;
    try {
      fb = hyper_fiber_at(H, f, theta);
    } catch (const Error& e) {
      cert.separating = false;
      cert.witness_theta = theta;
      cert.reason = e.what();
      return cert;
    }
    cert.max_im = std::max(cert.max_im, fb.max_im);
    if (!fb.all_real) {
      cert.separating = false;
      cert.witness_theta = theta;
      cert.reason = "fiber with an imaginary pair";
      return cert;
    }
    for (size_t a = 0; a < fb.points.size(); ++a)
      for (size_t b = a + 1; b < fb.points.size(); ++b) {
        double da = std::abs(fb.points[a].arc - fb.points[b].arc);
        da = std::min(da, 1.0 - da);
        if (fb.points[a].component == fb.points[b].component)
          cert.min_root_separation = std::min(cert.min_root_separation, da);
      }
    DegreeVector d = hyper_fiber_degree_vector(H, fb);
    if (j == 0) {
      cert.degrees = d;
    } else if (d != cert.degrees) {
      cert.separating = false;
      cert.witness_theta = theta;
      cert.reason = "component counts vary across fibers";
      return cert;
    }
  }
  cert.separating = true;
  return cert;
}

double abel_sum_residual(const HyperellipticCurve& H, const HyperMorphism& f,
                         double theta, const RPoly& q) {
  if (poly_degree(q, 1e-300) > H.g - 1)
    throw invalid_input("abel_sum_residual: q degree above g-1");
  HyperFiber fb = hyper_fiber_at(H, f, theta);
  if (!fb.all_real) throw invalid_input("abel_sum_residual: fiber not all-real");
  RPoly da = poly_derivative(f.a);
  RPoly db = poly_derivative(f.b);
  RPoly dc = poly_derivative(f.c);
  RPoly dF = poly_derivative(H.F);
  double sum = 0;
  for (const auto& p : fb.points) {
    if (p.infinite)
      throw invalid_input("abel_sum_residual: fiber touches infinity");
    if (p.multiplicity > 1)
      throw non_convergence("abel_sum_residual: critical fiber");
    double x = p.x, y = p.y;
    double cv = f.c.eval(x);
    double yp = dF.eval(x) / (2 * y);
    double fp = (da.eval(x) + db.eval(x) * y + f.b.eval(x) * yp) / cv -
                (f.a.eval(x) + f.b.eval(x) * y) * dc.eval(x) / (cv * cv);
    if (std::abs(fp) < 1e-10)
      throw non_convergence("abel_sum_residual: critical fiber");
    sum += q.eval(x) / (y * fp);
  }
  return std::abs(sum);
}

bool hyper_interlacing_check(const HyperellipticCurve& H, const HyperFiber& A,
                             const HyperFiber& B, double tol) {
  if (!A.all_real || !B.all_real)
    throw invalid_input("hyper_interlacing_check: fibers must be all-real");
  const int nc = hyper_components(H);
  std::vector<std::vector<double>> av(nc), bv(nc);
  for (const auto& p : A.points)
    for (int m = 0; m < p.multiplicity; ++m) av[p.component].push_back(p.arc);
  for (const auto& p : B.points)
    for (int m = 0; m < p.multiplicity; ++m) bv[p.component].push_back(p.arc);
  for (int ci = 0; ci < nc; ++ci)
    for (double a : av[ci])
      for (double b : bv[ci]) {
        double d = std::abs(a - b);
        if (std::min(d, 1.0 - d) < tol)
          throw invalid_input("hyper_interlacing_check: fibers share a point");
      }
  return interlacing_arcs(av, bv);
}

OrientationAssignment hyper_d_orientation(const HyperellipticCurve& H,
                                          const std::vector<double>& xbar) {
  for (size_t i = 0; i < xbar.size(); ++i)
    for (size_t j = i + 1; j < xbar.size(); ++j)
      if (xbar[i] == xbar[j])
        throw invalid_input("hyper_d_orientation: repeated fiber value");

  OrientationAssignment out;
  out.has_section = false;
  if (H.g % 2 == 1) {
    // squares never flip; dx/dphi > 0 on both branches, so sign follows y
    out.arcs.resize(2);
    out.arcs[0].push_back({0.0, +1});
    out.arcs[1].push_back({0.0, -1});
    for (double xb : xbar)
      for (int s : {+1, -1}) {
        OrientationCrossing c;
        c.component = hyper_component(H, s);
        c.arc = hyper_arc(H, xb, s);
        c.flips = false;
        out.crossings.push_back(c);
      }
  } else {
    // single circle; the fiber at infinity contributes two genuine flips
    out.arcs.resize(1);
    out.arcs[0].push_back({0.0, +1});
    out.arcs[0].push_back({0.5, -1});
    for (int w : {+1, -1}) {
      OrientationCrossing c;
      c.component = 0;
      c.arc = w > 0 ? 0.5 : 0.0;
      c.flips = true;
      out.crossings.push_back(c);
    }
    for (double xb : xbar)
      for (int s : {+1, -1}) {
        OrientationCrossing c;
        c.component = 0;
        c.arc = hyper_arc(H, xb, s);
        c.flips = false;
        out.crossings.push_back(c);
      }
  }
  out.normalize();
  return out;
}

OrientationAssignment hyper_complex_orientation(const HyperellipticCurve& H,
                                                const HyperMorphism& f) {
  const int nc = hyper_components(H);
  OrientationAssignment out;
  out.has_section = false;
  out.arcs.resize(nc);
  const int n = 2000;
  for (int ci = 0; ci < nc; ++ci) {
    double total = 0;
    bool have_prev = false;
    double prev_angle = 0;
    for (int i = 0; i <= n; ++i) {
      double arc = (i % n + 0.31) / n;
      // invert the arc coordinate on this component
      double spos, ysign;
      if (H.g % 2 == 1) {
        spos = arc;
        ysign = ci == 0 ? 1.0 : -1.0;
      } else if (arc < 0.5) {
        spos = 2 * arc;
        ysign = 1.0;
      } else {
        spos = 2 * (arc - 0.5);
        ysign = -1.0;
      }
      double x = std::tan(kPi * spos - kPi / 2);
      double y = ysign * sqrtF(H, x);
      double s0 = f.c.eval(x);
      double s1 = f.a.eval(x) + f.b.eval(x) * y;
      if (std::hypot(s0, s1) < 1e-300) continue;
      double ang = std::atan2(s1, s0);
      if (have_prev) {
        double da = std::fmod(ang - prev_angle, kPi);
        if (da > 0.5 * kPi) da -= kPi;
        if (da < -0.5 * kPi) da += kPi;
        total += da;
      }
      prev_angle = ang;
      have_prev = true;
    }
    long w = std::llround(total / kPi);
    if (w == 0)
      throw non_convergence("hyper_complex_orientation: component with zero winding");
    out.arcs[ci].push_back({0.0, w > 0 ? +1 : -1});
  }
  out.normalize();
  return out;
}

int hyper_coloring_sign(const HyperellipticCurve& H, double x, int ysign) {
  // traversal tangent in (x, y): dx > 0 on both branches; left normal points
  // to (-dy, dx); positive color = inside the curve (y^2 < F)
  double y = ysign * sqrtF(H, x);
  double dy = ysign * poly_derivative(H.F).eval(x) / (2 * sqrtF(H, x));
  double nx = -dy, ny = 1.0;
  double nn = std::hypot(nx, ny);
  double eps = 1e-4 * (1.0 + std::abs(y));
  double px = x + eps * nx / nn, py = y + eps * ny / nn;
  bool left_inside = py * py < H.F.eval(px);
  return left_inside ? +1 : -1;
}

}  // namespace sepsemi
