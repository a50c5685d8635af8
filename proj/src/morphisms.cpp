#include "sepsemi/morphisms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "sepsemi/error.hpp"

namespace sepsemi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double proj_dist(const Vec4& a, const Vec4& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

// Fubini-Study sine distance between complex projective points
double cproj_dist(const CVec4& a, const CVec4& b) {
  double na = a.norm(), nb = b.norm();
  if (!(na > 0) || !(nb > 0)) return 1.0;
  double c = std::abs(a.dot(b.conjugate())) / (na * nb);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 1 | b >> 63);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t theta_bits(double theta) { return std::bit_cast<std::uint64_t>(theta); }

// row of degree-d monomial values, in the library's coefficient order
Eigen::VectorXd monomial_row(int degree, const Vec4& x) {
  const auto& exps = monomial_exponents(degree);
  Eigen::VectorXd row(exps.size());
  for (size_t i = 0; i < exps.size(); ++i) {
    double v = 1;
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < exps[i][c]; ++k) v *= x[c];
    row[i] = v;
  }
  return row;
}

Eigen::VectorXcd monomial_row_c(int degree, const CVec4& x) {
  const auto& exps = monomial_exponents(degree);
  Eigen::VectorXcd row(exps.size());
  for (size_t i = 0; i < exps.size(); ++i) {
    cplx v = 1;
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < exps[i][c]; ++k) v *= x[c];
    row[i] = v;
  }
  return row;
}

bool line_on_surface(const Quadric& Q, const Vec4& p, const Vec4& q) {
  double scale = Q.form.coeffs.norm();
  for (double t : {0.0, 0.35, 0.8, 1.0}) {
    Vec4 x = ((1 - t) * p.normalized() + t * q.normalized()).normalized();
    if (std::abs(evaluate_form<double>(Q.form, x)) > 1e-8 * scale) return false;
  }
  return true;
}

void check_on_curve(const SpaceSextic& C, const Vec4& p, const char* who) {
  Vec4 x = p.normalized();
  double q = std::abs(evaluate_form<double>(C.quadric.form, x)) /
             C.quadric.form.coeffs.norm();
  double k = std::abs(evaluate_form<double>(C.cubic, x)) / C.cubic.coeffs.norm();
  if (q > 1e-6 || k > 1e-6)
    throw invalid_input(std::string(who) + ": base point not on the curve");
}

// two independent plane forms vanishing on the line through p0, p1
std::pair<Vec4, Vec4> line_pencil_forms(const Vec4& p0, const Vec4& p1) {
  Vec4 a0 = p0;
  if (!(a0.norm() > 0)) throw invalid_input("plane pencil: zero base point");
  a0.normalize();
  Vec4 a1 = p1 - p1.dot(a0) * a0;
  if (a1.norm() < 1e-10 * std::max(1.0, p1.norm()))
    throw invalid_input("plane pencil: base points do not span a line");
  a1.normalize();
  Eigen::Matrix<double, 4, 2> L;
  L.col(0) = a0;
  L.col(1) = a1;
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(L, Eigen::ComputeFullU);
  return {svd.matrixU().col(2), svd.matrixU().col(3)};
}

// base divisor of a pencil: zeros of s0 on C where s1 vanishes as well
Divisor pencil_base(const SpaceSextic& C, const MultiForm& s0, const MultiForm& s1,
                    std::uint64_t seed) {
  Classification cls = classify_quadric(C.quadric);
  SurfaceParam par = surface_param(cls);
  std::mt19937_64 rng(mix_seed(seed, 0xba5eba5eULL));
  auto pts = curve_divisor_points(par, C.quadric, C.cubic, s0, rng);
  double s1scale = s1.coeffs.norm();
  Divisor base;
  for (const auto& p : pts) {
    cplx v = evaluate_form<cplx>(s1, p.xc);
    if (std::abs(v) < 1e-6 * s1scale * std::pow(p.xc.norm(), s1.degree))
      base.points.push_back(p);
  }
  return base;
}

MorphismRep finish_plane_pencil(const SpaceSextic& C, const Vec4& g1, const Vec4& g2,
                                std::uint64_t seed) {
  MorphismRep f;
  f.kind = MorphismKind::plane_pencil;
  f.s0 = MultiForm::linear(g1);
  f.s1 = MultiForm::linear(g2);
  f.base = pencil_base(C, f.s0, f.s1, seed);
  f.degree = 6 - f.base.degree();
  if (f.degree <= 0) throw invalid_input("plane pencil: base consumes the whole fiber");
  return f;
}

}  // namespace

const char* morphism_kind_name(MorphismKind k) {
  switch (k) {
    case MorphismKind::plane_pencil:
      return "plane-pencil";
    case MorphismKind::quadric_pencil:
      return "quadric-pencil";
    default:
      return "hyperelliptic";
  }
}

MorphismRep plane_pencil_line(const SpaceSextic& C, const RealLocus& locus,
                              const Vec4& p0, const Vec4& p1, std::uint64_t seed) {
  (void)locus;
  auto [g1, g2] = line_pencil_forms(p0, p1);
  return finish_plane_pencil(C, g1, g2, seed);
}

MorphismRep plane_pencil_points(const SpaceSextic& C, const RealLocus& locus,
                                const Vec4& p, const Vec4& q, std::uint64_t seed) {
  check_on_curve(C, p, "plane_pencil_points");
  check_on_curve(C, q, "plane_pencil_points");
  if (line_on_surface(C.quadric, p, q)) {
    LocusPosition lp = locate_on_locus(locus, p);
    LocusPosition lq = locate_on_locus(locus, q);
    if (lp.component != lq.component)
      throw invalid_input(
          "plane_pencil_points: the line through the base points lies on the surface; "
          "no line of the surface joins these two components");
  }
  auto [g1, g2] = line_pencil_forms(p, q);
  MorphismRep f = finish_plane_pencil(C, g1, g2, seed);
  // the requested points must be part of the base
  for (const Vec4& b : {p, q}) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& bp : f.base.points)
      if (bp.real) best = std::min(best, proj_dist(bp.xr, b.normalized()));
    if (!(best < 1e-5))
      throw non_convergence("plane_pencil_points: base point missing from the divisor");
  }
  return f;
}

MorphismRep plane_pencil_conj(const SpaceSextic& C, const RealLocus& locus,
                              const CVec4& p, std::uint64_t seed) {
  (void)locus;
  double qs = C.quadric.form.coeffs.norm(), ks = C.cubic.coeffs.norm();
  double pn = std::pow(p.norm(), 2);
  if (std::abs(evaluate_form<cplx>(C.quadric.form, p)) > 1e-6 * qs * pn ||
      std::abs(evaluate_form<cplx>(C.cubic, p)) > 1e-6 * ks * pn * p.norm())
    throw invalid_input("plane_pencil_conj: point not on the curve");
  Vec4 a = p.real(), b = p.imag();
  if (b.norm() < 1e-9 * std::max(1.0, a.norm()))
    throw invalid_input("plane_pencil_conj: the point is numerically real");
  auto [g1, g2] = line_pencil_forms(a, b);
  return finish_plane_pencil(C, g1, g2, seed);
}

Fiber fiber_at(const SpaceSextic& C, const RealLocus& locus, const MorphismRep& f,
               double theta, std::uint64_t seed) {
  if (f.kind == MorphismKind::hyperelliptic)
    throw invalid_input("fiber_at: hyperelliptic morphisms use their own fiber solver");
  MultiForm G = add(scale(f.s1, std::cos(theta)), scale(f.s0, -std::sin(theta)));
  if (G.coeffs.norm() < 1e-12) throw invalid_input("fiber_at: degenerate pencil member");

  Classification cls = classify_quadric(C.quadric);
  SurfaceParam par = surface_param(cls);
  std::mt19937_64 rng(mix_seed(seed, theta_bits(theta)));
  auto pts = curve_divisor_points(par, C.quadric, C.cubic, G, rng);

  // drop the base divisor, nearest representatives first
  for (const auto& bp : f.base.points) {
    int need = bp.multiplicity;
    while (need > 0) {
      int best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        if (pts[i].multiplicity == 0) continue;
        double d = cproj_dist(pts[i].xc, bp.xc);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      if (best < 0 || !(bd < 1e-4))
        throw non_convergence("fiber_at: base point missing from the member divisor");
      int take = std::min(need, pts[best].multiplicity);
      pts[best].multiplicity -= take;
      need -= take;
    }
  }

  Fiber fb;
  fb.theta = theta;
  int total = 0;
  for (const auto& p : pts) {
    if (p.multiplicity == 0) continue;
    total += p.multiplicity;
    double res = imaginary_residual(p.xc);
    if (res > 1e-8 && res < 1e-6)
      throw non_convergence("fiber_at: increase precision");
    FiberPoint fp;
    fp.pt = p;
    if (p.real) {
      fb.max_im = std::max(fb.max_im, res);
      LocusPosition pos = locate_on_locus(locus, p.xr);
      if (!(pos.dist < 0.05))
        throw non_convergence("fiber_at: real fiber point off the traced locus");
      fp.component = pos.component;
      fp.arc = pos.arc;
    } else {
      fb.all_real = false;
    }
    fb.points.push_back(fp);
  }
  if (total != f.degree)
    throw non_convergence("fiber_at: fiber degree does not match the pencil");
  std::sort(fb.points.begin(), fb.points.end(), [](const FiberPoint& a,
                                                   const FiberPoint& b) {
    if (a.component != b.component) return a.component < b.component;
    return a.arc < b.arc;
  });
  return fb;
}

DegreeVector fiber_degree_vector(const RealLocus& locus, const Fiber& fb) {
  DegreeVector d(locus.components.size(), 0);
  for (const auto& p : fb.points)
    if (p.pt.real && p.component >= 0) d[p.component] += p.pt.multiplicity;
  return d;
}

SeparatingCertificate separating_certificate(const SpaceSextic& C, const RealLocus& locus,
                                             const MorphismRep& f, int n_samples,
                                             std::uint64_t seed) {
  if (n_samples < 2) throw invalid_input("separating_certificate: too few samples");
  SeparatingCertificate cert;
  cert.n_samples = n_samples;
  cert.min_root_separation = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_samples; ++j) {
    double theta = kPi * (j + 0.5) / n_samples;
    Fiber fb;
    try {
      fb = fiber_at(C, locus, f, theta, seed);
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
      for (size_t b = a + 1; b < fb.points.size(); ++b)
        cert.min_root_separation = std::min(
            cert.min_root_separation, proj_dist(fb.points[a].pt.xr, fb.points[b].pt.xr));
    DegreeVector d = fiber_degree_vector(locus, fb);
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

MorphismRep quadric_pencil_through(const SpaceSextic& C, const RealLocus& locus,
                                   std::vector<Vec4>& P, std::uint64_t seed) {
  if (P.size() != 5) throw invalid_input("quadric_pencil_through: need 5 points");
  Classification cls = classify_quadric(C.quadric);
  SurfaceParam par = surface_param(cls);
  Eigen::VectorXd qc = C.quadric.form.coeffs.normalized();

  // remember locus positions for jittering
  std::vector<LocusPosition> pos(5);
  for (int i = 0; i < 5; ++i) {
    P[i] = project_to_curve(C, P[i]);
    pos[i] = locate_on_locus(locus, P[i]);
  }

  std::string last_error = "rank deficiency";
  for (int attempt = 0; attempt < 5; ++attempt) {
    if (attempt > 0) {
      // jitter the divisor along its components and try again
      for (int i = 0; i < 5; ++i) {
        double shift = 1e-3 * attempt * (i % 2 == 0 ? 1.0 : -1.0);
        Vec4 moved =
            point_at_arc(locus.components[pos[i].component], pos[i].arc + shift);
        P[i] = project_to_curve(C, moved);
      }
    }
    bool collinear = false;
    for (int i = 0; i < 5 && !collinear; ++i)
      for (int j = i + 1; j < 5 && !collinear; ++j)
        if (line_on_surface(C.quadric, P[i], P[j])) collinear = true;
    if (collinear) {
      last_error = "two divisor points lie on a line of the surface";
      continue;
    }

    // quadrics through P, excluding multiples of the surface itself
    Eigen::MatrixXd E(5, 10);
    for (int i = 0; i < 5; ++i) E.row(i) = monomial_row(2, P[i].normalized());
    Eigen::JacobiSVD<Eigen::MatrixXd> esvd(E, Eigen::ComputeFullV);
    int erank = 0;
    for (int i = 0; i < 5; ++i)
      if (esvd.singularValues()[i] > 1e-8 * esvd.singularValues()[0]) ++erank;
    if (erank < 5) {
      last_error = "divisor points in special position";
      continue;
    }
    Eigen::MatrixXd NB = esvd.matrixV().rightCols(10 - erank);
    // remove the quadric's own direction from the null space
    Eigen::VectorXd alpha = NB.transpose() * qc;
    Eigen::MatrixXd W = NB - (NB * alpha) * (alpha.transpose() / alpha.squaredNorm());
    Eigen::HouseholderQR<Eigen::MatrixXd> wqr(W);
    Eigen::MatrixXd WQ = wqr.householderQ() * Eigen::MatrixXd::Identity(10, NB.cols());
    // deterministic pseudo-random combination for S0
    std::mt19937_64 rng(mix_seed(seed, 0x5eed0000ULL + attempt));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd w(WQ.cols() - 1);
    for (int i = 0; i < w.size(); ++i) w[i] = gauss(rng);
    Eigen::VectorXd s0c = WQ.leftCols(WQ.cols() - 1) * w;
    s0c -= qc * qc.dot(s0c);
    if (s0c.norm() < 1e-10) {
      last_error = "degenerate quadric through the divisor";
      continue;
    }
    s0c.normalize();
    MultiForm S0 = MultiForm::zero(2);
    S0.coeffs = s0c;

    // residual divisor R = (S0 . C) - P
    std::mt19937_64 rng2(mix_seed(seed, 0x0d1f0000ULL + attempt));
    std::vector<SectionPoint> div0;
    try {
      div0 = curve_divisor_points(par, C.quadric, C.cubic, S0, rng2);
    } catch (const Error& e) {
      last_error = e.what();
      continue;
    }
    bool matched = true;
    for (const Vec4& p : P) {
      CVec4 pc = p.normalized().cast<cplx>();
      int best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(div0.size()); ++i) {
        if (div0[i].multiplicity == 0) continue;
        double d = cproj_dist(div0[i].xc, pc);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      if (best < 0 || !(bd < 1e-6)) {
        matched = false;
        break;
      }
      div0[best].multiplicity -= 1;
    }
    if (!matched) {
      last_error = "divisor point missing from the quadric section";
      continue;
    }
    Divisor R;
    for (const auto& p : div0)
      if (p.multiplicity > 0) R.points.push_back(p);
    if (R.degree() != 7) {
      last_error = "residual divisor has unexpected degree";
      continue;
    }

    // quadrics through R: conjugate pairs contribute a real and imaginary row
    std::vector<Eigen::VectorXd> rows;
    std::vector<int> skip(R.points.size(), 0);
    for (int i = 0; i < static_cast<int>(R.points.size()); ++i) {
      if (skip[i]) continue;
      const auto& rp = R.points[i];
      if (rp.real) {
        for (int m = 0; m < rp.multiplicity; ++m) rows.push_back(monomial_row(2, rp.xr));
      } else {
        // mark the conjugate partner as handled
        for (int j = i + 1; j < static_cast<int>(R.points.size()); ++j)
          if (!R.points[j].real &&
              cproj_dist(R.points[j].xc, rp.xc.conjugate()) < 1e-7)
            skip[j] = 1;
        Eigen::VectorXcd row = monomial_row_c(2, rp.xc);
        for (int m = 0; m < rp.multiplicity; ++m) {
          rows.push_back(row.real());
          rows.push_back(row.imag());
        }
      }
    }
    Eigen::MatrixXd A(rows.size(), 10);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) A.row(i) = rows[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> asvd(A, Eigen::ComputeFullV);
    int arank = 0;
    for (int i = 0; i < std::min<int>(A.rows(), 10); ++i)
      if (asvd.singularValues()[i] > 1e-8 * asvd.singularValues()[0]) ++arank;
    Eigen::MatrixXd NB2 = asvd.matrixV().rightCols(10 - arank);
    // least-squares-orthogonal pick: the null combination furthest from span{Q, S0}
    Eigen::MatrixXd T = NB2;
    T -= qc * (qc.transpose() * NB2);
    T -= s0c * (s0c.transpose() * NB2);
    Eigen::JacobiSVD<Eigen::MatrixXd> tsvd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (tsvd.singularValues().size() == 0 ||
        tsvd.singularValues()[0] < 1e-6) {
      last_error = "no independent quadric through the residual divisor";
      continue;
    }
    Eigen::VectorXd s1c = T * tsvd.matrixV().col(0);
    s1c.normalize();
    MultiForm S1 = MultiForm::zero(2);
    S1.coeffs = s1c;
    // verify S1 vanishes on R
    bool ok = true;
    for (const auto& rp : R.points) {
      cplx v = evaluate_form<cplx>(S1, rp.xc);
      if (std::abs(v) > 1e-6 * std::pow(rp.xc.norm(), 2)) ok = false;
    }
    if (!ok) {
      last_error = "quadric fails to vanish on the residual divisor";
      continue;
    }

    MorphismRep f;
    f.kind = MorphismKind::quadric_pencil;
    f.s0 = S0;
    f.s1 = S1;
    f.base = R;
    f.degree = 5;
    return f;
  }
  throw non_convergence("quadric_pencil_through: " + last_error +
                        "; retry with jittered P");
}

SpecialityReport is_special_divisor(const Divisor& P) {
  if (P.degree() > 6) throw invalid_input("is_special_divisor: degree above scope");
  if (P.degree() == 0) throw invalid_input("is_special_divisor: empty divisor");
  std::vector<Eigen::VectorXd> rows;
  for (const auto& p : P.points) {
    for (int m = 0; m < p.multiplicity; ++m) {
      if (p.real) {
        rows.push_back(p.xr.transpose());
      } else {
        CVec4 x = p.xc / p.xc.norm();
        rows.push_back(x.real().transpose());
        rows.push_back(x.imag().transpose());
      }
    }
  }
  Eigen::MatrixXd M(rows.size(), 4);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) M.row(i) = rows[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  SpecialityReport rep;
  rep.rank = 0;
  for (int i = 0; i < std::min<int>(M.rows(), 4); ++i)
    if (svd.singularValues()[i] > 1e-8 * svd.singularValues()[0]) ++rep.rank;
  rep.special = rep.rank <= 3;
  if (rep.special) rep.plane = svd.matrixV().col(3);
  return rep;
}

bool interlacing_check(const Fiber& A, const Fiber& B, const RealLocus& locus,
                       double tol) {
  if (!A.all_real || !B.all_real)
    throw invalid_input("interlacing_check: fibers must be all-real");
  for (const auto& a : A.points)
    for (const auto& b : B.points)
      if (proj_dist(a.pt.xr, b.pt.xr) < tol)
        throw invalid_input("interlacing_check: fibers share a point");

  const int nc = static_cast<int>(locus.components.size());
  std::vector<std::vector<double>> av(nc), bv(nc);
  for (const auto& a : A.points)
    if (a.component >= 0)
      for (int m = 0; m < a.pt.multiplicity; ++m) av[a.component].push_back(a.arc);
  for (const auto& b : B.points)
    if (b.component >= 0)
      for (int m = 0; m < b.pt.multiplicity; ++m) bv[b.component].push_back(b.arc);
  return interlacing_arcs(av, bv);
}

bool interlacing_arcs(const std::vector<std::vector<double>>& A,
                      const std::vector<std::vector<double>>& B) {
  if (A.size() != B.size()) return false;
  for (size_t ci = 0; ci < A.size(); ++ci) {
    std::vector<double> av = A[ci], bv = B[ci];
    if (av.size() != bv.size()) return false;
    if (av.empty()) continue;
    std::sort(av.begin(), av.end());
    std::sort(bv.begin(), bv.end());
    const int n = static_cast<int>(av.size());
    for (int i = 0; i < n; ++i) {
      double lo = av[i];
      double hi = i + 1 < n ? av[i + 1] : av[0] + 1.0;
      int count = 0;
      for (double b : bv) {
        double bb = b;
        if (bb < lo) bb += 1.0;
        if (bb > lo && bb < hi) ++count;
      }
      if (count != 1) return false;
    }
  }
  return true;
}

OrientationAssignment complex_orientation(const SpaceSextic& C, const RealLocus& locus,
                                          const MorphismRep& f) {
  if (f.kind == MorphismKind::hyperelliptic)
    throw invalid_input("complex_orientation: hyperelliptic uses its own variant");
  (void)C;
  OrientationAssignment out;
  out.arcs.resize(locus.components.size());
  for (int ci = 0; ci < static_cast<int>(locus.components.size()); ++ci) {
    const auto& pts = locus.components[ci].points;
    const int n = static_cast<int>(pts.size());
    double total = 0;
    Eigen::Vector2d prev(evaluate_form<double>(f.s0, pts[0]),
                         evaluate_form<double>(f.s1, pts[0]));
    for (int i = 1; i <= n; ++i) {
      const Vec4& x = pts[i % n];
      Eigen::Vector2d cur(evaluate_form<double>(f.s0, x),
                          evaluate_form<double>(f.s1, x));
      if (cur.norm() < 1e-13) continue;  // passing through a base point
      double da = std::atan2(cur.y(), cur.x()) - std::atan2(prev.y(), prev.x());
      da = std::fmod(da, kPi);
      if (da > 0.5 * kPi) da -= kPi;
      if (da < -0.5 * kPi) da += kPi;
      total += da;
      prev = cur;
    }
    long w = std::llround(total / kPi);
    if (w == 0)
      throw non_convergence("complex_orientation: component with zero winding");
    out.arcs[ci].push_back({0.0, w > 0 ? +1 : -1});
  }
  out.normalize();
  return out;
}

std::vector<FiberPointRef> fiber_point_refs(const Fiber& fb, const SectionDivisor& D,
                                            double tol) {
  std::vector<FiberPointRef> refs;
  for (const auto& p : fb.points) {
    if (!p.pt.real) continue;
    FiberPointRef r;
    r.component = p.component;
    r.arc = p.arc;
    r.x = p.pt.xr;
    r.on_d = std::abs(D.h.dot(p.pt.xr)) < tol;
    refs.push_back(r);
  }
  return refs;
}

}  // namespace sepsemi
