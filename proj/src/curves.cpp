#include "sepsemi/curves.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "sepsemi/error.hpp"
#include "sepsemi/roots.hpp"
#include "sepsemi/segre.hpp"
#include "sepsemi/trace.hpp"

namespace sepsemi {

namespace {

MultiForm lin(double a, double b, double c, double d) {
  return MultiForm::linear(Vec4(a, b, c, d));
}

MultiForm cubic_monomial(const std::array<int, 4>& e, double v) {
  MultiForm f = MultiForm::zero(3);
  f.coeffs(monomial_index(3, e)) = v;
  return f;
}

MultiForm quad_from(const Mat4& m) { return quadric_from_matrix(m).form; }

enum class OrderMode { none, ratio_x2_x3, ratio_x1_x0, ratio_x0_x3, ratio_x1_x3, chart_v };

struct Recipe {
  ModelParts parts;
  const char* id;
  OrderMode order;
  // canonicalized (a, b) of the non-oval components, sorted; the topology
  // check compares against the traced classes, since (r, l) alone does not
  // pin the isotopy type (a single loop could wind (1,-1) instead of (3,1))
  std::vector<std::pair<int, int>> nonoval_classes;
};

std::vector<Recipe> build_recipes() {
  std::vector<Recipe> rs;

  // Ellipsoid, three ovals: three parallel plane sections, smoothed. The
  // sections only meet at the two conjugate points [1:±i:0:0] shared by the
  // whole plane pencil, so the real picture stays three disjoint circles.
  {
    Recipe r;
    r.id = "ellipsoid-3-3/parallel-planes";
    r.order = OrderMode::ratio_x2_x3;
    r.nonoval_classes = {};
    r.parts.kind = SurfaceKind::ellipsoid;
    r.parts.r = 3;
    r.parts.l = 3;
    r.parts.cylinder = false;
    r.parts.base =
        multiply(multiply(lin(0, 0, 1, 0.6), lin(0, 0, 1, 0)), lin(0, 0, 1, -0.6));
    r.parts.bump = cubic_monomial({3, 0, 0, 0}, 1.0);
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.1;
    rs.push_back(std::move(r));
  }

  // Hyperboloid, three crossless components: three plane sections through the
  // surface's axis; they pairwise meet only at [0:0:1:±i].
  {
    Recipe r;
    r.id = "hyperboloid-3-0/axis-planes";
    r.order = OrderMode::ratio_x1_x0;
    r.nonoval_classes = {{1, 1}, {1, 1}, {1, 1}};
    r.parts.kind = SurfaceKind::hyperboloid;
    r.parts.r = 3;
    r.parts.l = 0;
    r.parts.cylinder = false;
    r.parts.base =
        multiply(multiply(lin(0.6, 1, 0, 0), lin(0, 1, 0, 0)), lin(-0.6, 1, 0, 0));
    r.parts.bump = cubic_monomial({0, 0, 3, 0}, 1.0);
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.06;
    rs.push_back(std::move(r));
  }

  // Hyperboloid, one component winding (3,1): two axis sections plus the
  // waist section; their four real crossings are smoothed into a single loop
  // by a bump whose signs at the crossings chain the three conics together.
  {
    Recipe r;
    r.id = "hyperboloid-1-0/two-axis-one-waist";
    r.order = OrderMode::none;
    r.nonoval_classes = {{3, 1}};
    r.parts.kind = SurfaceKind::hyperboloid;
    r.parts.r = 1;
    r.parts.l = 0;
    r.parts.cylinder = false;
    r.parts.base = multiply(multiply(lin(0.3, 1, 0, 0), lin(-0.3, 1, 0, 0)), lin(0, 0, 1, 0));
    // The bump's signs at the four real crossings decide how the three conics
    // reconnect; the x0*x1*x3 pattern chains them into a single (3,1) loop and
    // the x2^3 term keeps it nonzero at the conjugate crossing pair [0:0:1:±i].
    r.parts.bump =
        add(cubic_monomial({1, 1, 0, 1}, 1.0), cubic_monomial({0, 0, 3, 0}, 0.4));
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.2;
    rs.push_back(std::move(r));
  }

  // Hyperboloid, two ovals and a crossless middle: the axis plane section
  // x1 = 0 (same ruling-diagonal class as the (3,0) sections) plus a cylinder
  // of radius 0.4 around the chord {x0=3, x2=2*x1}, which pierces the surface
  // at (3, +-sqrt(8/3), +-2*sqrt(8/3)), once on each side of the plane. The
  // chord crosses the plane at (3, 0, 0), inside the disk x0^2 > x2^2 + x3^2
  // bounded by the section conic, so any line joining the two ovals is linked
  // with the middle component. The section keeps distance > 1 from the
  // cylinder (min of the cylinder form over the section is 1.14, at
  // x2 = +-2.29); the four crossings of the section with the cylinder sit at
  // x0/x3 = 2.5 +- 0.97i, where x3^3 is nonzero.
  {
    Recipe r;
    r.id = "hyperboloid-3-2/axis-plane-linked-cylinder";
    r.order = OrderMode::ratio_x1_x3;
    r.nonoval_classes = {{1, 1}};
    r.parts.kind = SurfaceKind::hyperboloid;
    r.parts.r = 3;
    r.parts.l = 2;
    r.parts.cylinder = true;
    Mat4 S = Mat4::Zero();
    S(0, 0) = 1.0;
    S(0, 3) = S(3, 0) = -3.0;
    S(1, 1) = 0.8;
    S(1, 2) = S(2, 1) = -0.4;
    S(2, 2) = 0.2;
    S(3, 3) = 9.0 - 0.16;
    r.parts.base = multiply(lin(0, 1, 0, 0), quad_from(S));
    r.parts.bump = cubic_monomial({0, 0, 0, 3}, 1.0);
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.2;
    rs.push_back(std::move(r));
  }

  // Cone, three crossless circles: one plane section above the apex plus the
  // two circles cut by a coaxial cylinder (one on each nappe). All three meet
  // only at the conjugate pair [1:±i:0:0] on the infinity circle.
  {
    Recipe r;
    r.id = "cone-3-0/plane-axis-cylinder";
    r.order = OrderMode::chart_v;
    r.nonoval_classes = {{1, 0}, {1, 0}, {1, 0}};
    r.parts.kind = SurfaceKind::cone;
    r.parts.r = 3;
    r.parts.l = 0;
    r.parts.cylinder = true;
    Mat4 S = Mat4::Zero();
    S(0, 0) = 1.0;
    S(1, 1) = 1.0;
    S(3, 3) = -0.25;
    r.parts.base = multiply(lin(0, 0, 1, -1), quad_from(S));
    r.parts.bump = cubic_monomial({3, 0, 0, 0}, 1.0);
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.2;
    rs.push_back(std::move(r));
  }

  // Cone, two ovals separated by a circle: cylinder of radius 0.2 around the
  // vertical chord {x0=0.5, x1=0}, which pierces the two nappes at
  // (0.5, 0, +-0.5), plus the plane section x2 = x3. Along the surface the
  // section (v = pi/4) lies between the ovals (v = +-1.35), and its circle
  // keeps distance 0.3 from the cylinder. The crossings of the section with
  // the cylinder are two finite conjugate points and the two circular points
  // [1:+-i:0:0], so the bump must not vanish at x3 = 0; x0^3 works at all
  // four.
  {
    Recipe r;
    r.id = "cone-3-2/plane-chord-cylinder";
    r.order = OrderMode::chart_v;
    r.nonoval_classes = {{1, 0}};
    r.parts.kind = SurfaceKind::cone;
    r.parts.r = 3;
    r.parts.l = 2;
    r.parts.cylinder = true;
    Mat4 S = Mat4::Zero();
    S(0, 0) = 1.0;
    S(1, 1) = 1.0;
    S(0, 3) = S(3, 0) = -0.5;
    S(3, 3) = 0.25 - 0.04;
    r.parts.base = multiply(lin(0, 0, 1, -1), quad_from(S));
    r.parts.bump = cubic_monomial({3, 0, 0, 0}, 1.0);
    r.parts.eps_default = 0.05;
    r.parts.eps_max = 0.2;
    rs.push_back(std::move(r));
  }

  return rs;
}

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> rs = build_recipes();
  return rs;
}

const Recipe& find_recipe(SurfaceKind kind, int r, int l) {
  for (const auto& rec : recipes())
    if (rec.parts.kind == kind && rec.parts.r == r && rec.parts.l == l) return rec;
  std::ostringstream os;
  os << "model_sextic: no recipe for (" << kind_name(kind) << ", " << r << ", " << l
     << "); the table covers the six non-maximal separating types";
  throw invalid_input(os.str());
}

const Recipe* find_recipe_by_id(const std::string& id) {
  for (const auto& rec : recipes())
    if (id == rec.id) return &rec;
  return nullptr;
}

// Least-squares test for cubic = quadric * (linear form).
bool cubic_is_quadric_multiple(const Quadric& Q, const MultiForm& K) {
  Eigen::MatrixXd A(monomial_count(3), 4);
  for (int i = 0; i < 4; ++i) {
    Vec4 e = Vec4::Zero();
    e(i) = 1.0;
    A.col(i) = multiply(Q.form, MultiForm::linear(e)).coeffs;
  }
  Eigen::VectorXd h = A.colPivHouseholderQr().solve(K.coeffs);
  return (A * h - K.coeffs).norm() < 1e-9 * K.coeffs.norm();
}

}  // namespace

const ModelParts& model_sextic_parts(SurfaceKind kind, int r, int l) {
  return find_recipe(kind, r, l).parts;
}

SmoothnessCertificate validate_smoothness(const SpaceSextic& C, int grid, double tol) {
  SmoothnessCertificate cert;
  cert.grid = grid;
  cert.tol = tol;
  if (C.cubic.degree != 3) throw invalid_input("validate_smoothness: cubic of degree != 3");
  if (C.cubic.coeffs.norm() <= 0) throw invalid_input("validate_smoothness: zero cubic");

  Classification cls = classify_quadric(C.quadric);
  SurfaceParam par = surface_param(cls);
  std::mt19937_64 rng(0x5eb5e111u);

  if (cubic_is_quadric_multiple(C.quadric, C.cubic)) {
    cert.reject_reason = "reducible: cubic is the quadric times a plane";
    return cert;
  }
  if (!contained_ruling_lines(par, C.cubic, rng).empty()) {
    cert.reject_reason = "reducible: the intersection contains a ruling line";
    return cert;
  }

  // Parameter-space scan catches every singular point of the complex curve.
  cert.complex_singular = curve_singular_candidates(par, C.quadric, C.cubic, rng, tol);
  for (const CVec4& z : cert.complex_singular) {
    SectionPoint sp = make_section_point(z, 1e-6);
    if (sp.real) cert.real_singular.push_back(sp.xr);
  }

  // Real chart layer: refine grid seeds toward points where the curve's
  // 2x4 Jacobian drops rank, and record any that converge.
  Chart chart = chart_map(cls);
  const double qs = C.quadric.form.coeffs.norm();
  const double ks = C.cubic.coeffs.norm();
  auto residual = [&](const Vec4& x) {
    Eigen::VectorXd r(8);
    r(0) = evaluate_form<double>(C.quadric.form, x) / qs;
    r(1) = evaluate_form<double>(C.cubic, x) / ks;
    Vec4 gq = form_gradient<double>(C.quadric.form, x);
    Vec4 gk = form_gradient<double>(C.cubic, x);
    double gscale = gq.norm() * gk.norm() + 1e-12 * qs * ks;
    int idx = 2;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) r(idx++) = (gq(i) * gk(j) - gq(j) * gk(i)) / gscale;
    return r;
  };
  auto refine_singular = [&](Vec4 x) -> std::pair<bool, Vec4> {
    double best = residual(x).norm();
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXd r0 = residual(x);
      Eigen::MatrixXd J(8, 4);
      for (int c = 0; c < 4; ++c) {
        Vec4 xp = x;
        double h = 1e-6;
        xp(c) += h;
        xp.normalize();
        J.col(c) = (residual(xp) - r0) / h;
      }
      Vec4 dx = J.colPivHouseholderQr().solve(r0);
      if (!dx.allFinite()) break;
      double stepn = dx.norm();
      if (stepn > 0.3) dx *= 0.3 / stepn;
      x = (x - dx).normalized();
      best = std::min(best, residual(x).norm());
      if (best < 0.3 * tol) break;
    }
    return {residual(x).norm() < tol, x};
  };

  double u0 = 0, u1 = chart.period_u;
  double v0, v1;
  if (chart.v_periodic()) {
    v0 = 0;
    v1 = chart.period_v;
  } else {
    double margin = (cls.kind == SurfaceKind::cone) ? 0.03 : 0.0;
    v0 = chart.v_min + margin;
    v1 = chart.v_max - margin;
  }
  Eigen::MatrixXd kval(grid + 1, grid + 1);
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      double u = u0 + (u1 - u0) * i / grid;
      double v = v0 + (v1 - v0) * j / grid;
      kval(i, j) = evaluate_form<double>(C.cubic, chart.point(u, v));
    }
  auto bisect_edge = [&](double ua, double va, double ub, double vb) {
    auto kv = [&](double t) {
      return evaluate_form<double>(
          C.cubic, chart.point(ua + t * (ub - ua), va + t * (vb - va)));
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
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      double u = u0 + (u1 - u0) * i / grid;
      double v = v0 + (v1 - v0) * j / grid;
      double du = (u1 - u0) / grid, dv = (v1 - v0) / grid;
      std::vector<Vec4> seeds;
      if (i < grid && kval(i, j) * kval(i + 1, j) < 0)
        seeds.push_back(bisect_edge(u, v, u + du, v));
      if (j < grid && kval(i, j) * kval(i, j + 1) < 0)
        seeds.push_back(bisect_edge(u, v, u, v + dv));
      for (const Vec4& s : seeds) {
        auto [hit, w] = refine_singular(s);
        if (!hit) continue;
        bool dup = false;
        for (const Vec4& p : cert.real_singular)
          if (std::min((p - w).norm(), (p + w).norm()) < 1e-4) dup = true;
        if (!dup) cert.real_singular.push_back(w);
      }
    }

  if (!cert.complex_singular.empty() || !cert.real_singular.empty()) {
    cert.reject_reason = "singular";
    return cert;
  }
  cert.ok = true;
  return cert;
}

SpaceSextic model_sextic(SurfaceKind kind, int r, int l, double eps) {
  const Recipe& rec = find_recipe(kind, r, l);
  if (eps == 0)
    throw invalid_input("model_sextic: eps = 0 keeps the singular union of sections");
  if (!(eps > 0) || eps > rec.parts.eps_max) {
    std::ostringstream os;
    os << "model_sextic: eps " << eps << " outside (0, " << rec.parts.eps_max << "]";
    throw invalid_input(os.str());
  }
  SpaceSextic C;
  C.quadric = quadric_from_matrix(normal_form_matrix(kind));
  C.cubic = add(rec.parts.base, scale(rec.parts.bump, -eps));
  C.provenance = {rec.id, kind, r, l, eps};

  SmoothnessCertificate cert = validate_smoothness(C);
  if (!cert.ok)
    throw invalid_input(std::string("model_sextic: validation failed: ") + cert.reject_reason);
  RealLocus loc = trace_real_locus(C);
  if (loc.r != r || loc.l != l) {
    std::ostringstream os;
    os << "model_sextic: eps " << eps << " traced to (" << loc.r << ", " << loc.l
       << ") instead of (" << r << ", " << l << ")";
    throw invalid_input(os.str());
  }
  std::vector<std::pair<int, int>> got;
  for (const TracedComponent& tc : loc.components)
    if (!tc.oval) got.emplace_back(tc.cls.a, tc.cls.b);
  std::sort(got.begin(), got.end());
  std::vector<std::pair<int, int>> want = rec.nonoval_classes;
  std::sort(want.begin(), want.end());
  if (got != want) {
    std::ostringstream os;
    os << "model_sextic: eps " << eps << " traced wrong winding classes:";
    for (auto& p : got) os << " (" << p.first << "," << p.second << ")";
    throw invalid_input(os.str());
  }
  return C;
}

SpaceSextic model_sextic(SurfaceKind kind, int r, int l) {
  return model_sextic(kind, r, l, model_sextic_parts(kind, r, l).eps_default);
}

double model_order_value(const SpaceSextic& C, const std::vector<Vec4>& component_points) {
  if (component_points.empty()) throw invalid_input("model_order_value: empty component");
  const Recipe* rec = find_recipe_by_id(C.provenance.recipe);
  OrderMode mode = rec ? rec->order : OrderMode::chart_v;
  auto ratio_mean = [&](int num, int den) {
    double acc = 0;
    for (const Vec4& x : component_points) acc += x(num) / x(den);
    return acc / double(component_points.size());
  };
  switch (mode) {
    case OrderMode::none:
      return 0;
    case OrderMode::ratio_x2_x3:
      return ratio_mean(2, 3);
    case OrderMode::ratio_x1_x0:
      return ratio_mean(1, 0);
    case OrderMode::ratio_x0_x3:
      return ratio_mean(0, 3);
    case OrderMode::ratio_x1_x3:
      return ratio_mean(1, 3);
    case OrderMode::chart_v: {
      Chart chart = chart_map(classify_quadric(C.quadric));
      double acc = 0;
      for (const Vec4& x : component_points) acc += chart.uv(x)(1);
      return acc / double(component_points.size());
    }
  }
  return 0;
}

HyperellipticCurve model_hyperelliptic(int g, const std::vector<double>& spread, double delta) {
  if (g < 1) throw invalid_input("model_hyperelliptic: genus must be >= 1");
  if (static_cast<int>(spread.size()) != g + 1)
    throw invalid_input("model_hyperelliptic: spread needs exactly g+1 points");
  if (!(delta > 0)) throw invalid_input("model_hyperelliptic: delta must be positive");
  double amax = 0;
  for (double a : spread) amax = std::max(amax, std::abs(a));
  for (size_t i = 0; i < spread.size(); ++i)
    for (size_t j = i + 1; j < spread.size(); ++j)
      if (std::abs(spread[i] - spread[j]) < 1e-9 * (1.0 + amax))
        throw invalid_input("model_hyperelliptic: spread points must be distinct");

  RPoly F{{1.0}};
  for (double a : spread) F = poly_mul(F, RPoly{{a * a, -2.0 * a, 1.0}});
  F.c[0] += delta;

  // The construction is positive by design; verify the numerics agree before
  // certifying square-freeness through root separation.
  CPoly Fc;
  Fc.c.assign(F.c.begin(), F.c.end());
  auto roots = univariate_roots(Fc);
  double rmax = 0;
  for (const auto& z : roots) rmax = std::max(rmax, std::abs(z));
  for (const auto& z : roots)
    if (std::abs(z.imag()) < 1e-9 * (1.0 + rmax))
      throw invalid_input("model_hyperelliptic: delta too small to certify positivity");
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-7 * (1.0 + rmax))
        throw invalid_input("model_hyperelliptic: delta too small to keep F square-free");

  HyperellipticCurve H;
  H.g = g;
  H.F = std::move(F);
  H.parity = g % 2;
  return H;
}

}  // namespace sepsemi
