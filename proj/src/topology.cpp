#include "sepsemi/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

#include "sepsemi/error.hpp"

namespace sepsemi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double proj_dist(const Vec4& a, const Vec4& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

// sign-aligned copy of b relative to a, so consecutive lift flips are harmless
Vec4 aligned(const Vec4& a, const Vec4& b) {
  return (a - b).squaredNorm() <= (a + b).squaredNorm() ? b : Vec4(-b);
}

// cumulative chord length, one entry per sample plus the closing entry
std::vector<double> cumulative_lengths(const std::vector<Vec4>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const Vec4& a = pts[i];
    const Vec4& b = pts[(i + 1) % n];
    cum[i + 1] = cum[i] + proj_dist(a, b);
  }
  return cum;
}

int segment_of_arc(const std::vector<double>& cum, double arc, double* t_out) {
  const int n = static_cast<int>(cum.size()) - 1;
  double total = cum[n];
  double s = arc - std::floor(arc);
  double target = s * total;
  int lo = 0, hi = n;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (cum[mid] <= target)
      lo = mid;
    else
      hi = mid;
  }
  double seg = cum[lo + 1] - cum[lo];
  *t_out = seg > 0 ? (target - cum[lo]) / seg : 0.0;
  return lo;
}

double wrap_delta(double d, double period) {
  d = std::fmod(d, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

Eigen::Vector2d chart_step(const Chart& chart, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b) {
  double du = wrap_delta(b.x() - a.x(), chart.period_u);
  double dv = b.y() - a.y();
  if (chart.v_periodic()) dv = wrap_delta(dv, chart.period_v);
  return {du, dv};
}

}  // namespace

// ───────────────────────── Locus geometry helpers ─────────────────────────

Vec4 point_at_arc(const TracedComponent& comp, double arc) {
  auto cum = cumulative_lengths(comp.points);
  double t = 0;
  int i = segment_of_arc(cum, arc, &t);
  const int n = static_cast<int>(comp.points.size());
  Vec4 a = comp.points[i];
  Vec4 b = aligned(a, comp.points[(i + 1) % n]);
  Vec4 p = a + t * (b - a);
  double nrm = p.norm();
  if (!(nrm > 0)) throw non_convergence("point_at_arc: degenerate segment");
  return p / nrm;
}

Eigen::Vector2d chart_tangent_at_arc(const Chart& chart, const TracedComponent& comp,
                                     double arc) {
  auto cum = cumulative_lengths(comp.points);
  double t = 0;
  int i = segment_of_arc(cum, arc, &t);
  const int n = static_cast<int>(comp.uv.size());
  Eigen::Vector2d d = chart_step(chart, comp.uv[i], comp.uv[(i + 1) % n]);
  double nrm = d.norm();
  if (!(nrm > 0)) throw non_convergence("chart_tangent_at_arc: degenerate segment");
  return d / nrm;
}

LocusPosition locate_on_locus(const RealLocus& locus, const Vec4& x) {
  Vec4 xh = x.normalized();
  LocusPosition best;
  best.dist = std::numeric_limits<double>::infinity();
  for (int ci = 0; ci < static_cast<int>(locus.components.size()); ++ci) {
    const auto& pts = locus.components[ci].points;
    const int n = static_cast<int>(pts.size());
    if (n < 2) continue;
    int bi = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double d = proj_dist(pts[i], xh);
      if (d < bd) {
        bd = d;
        bi = i;
      }
    }
    auto cum = cumulative_lengths(pts);
    double total = cum[n];
    // refine on the two segments adjacent to the best sample
    for (int k = 0; k < 2; ++k) {
      int i = (bi - 1 + k + n) % n;
      Vec4 a = pts[i];
      Vec4 b = aligned(a, pts[(i + 1) % n]);
      Vec4 xs = (a - xh).squaredNorm() <= (a + xh).squaredNorm() ? xh : Vec4(-xh);
      Vec4 ab = b - a;
      double denom = ab.squaredNorm();
      double t = denom > 0 ? std::clamp((xs - a).dot(ab) / denom, 0.0, 1.0) : 0.0;
      Vec4 p = (a + t * ab).normalized();
      double d = proj_dist(p, xh);
      if (d < best.dist) {
        best.dist = d;
        best.component = ci;
        best.arc = (cum[i] + t * (cum[i + 1] - cum[i])) / total;
        if (best.arc >= 1.0) best.arc -= 1.0;
      }
    }
  }
  if (best.component < 0) throw invalid_input("locate_on_locus: empty locus");
  return best;
}

Vec4 project_to_curve(const SpaceSextic& C, Vec4 x, double tol) {
  double qs = C.quadric.form.coeffs.norm();
  double ks = C.cubic.coeffs.norm();
  if (!(qs > 0) || !(ks > 0)) throw invalid_input("project_to_curve: zero form");
  x.normalize();
  for (int iter = 0; iter < 40; ++iter) {
    Eigen::Vector2d F(evaluate_form<double>(C.quadric.form, x) / qs,
                      evaluate_form<double>(C.cubic, x) / ks);
    Eigen::Matrix<double, 2, 4> J;
    J.row(0) = form_gradient<double>(C.quadric.form, x).transpose() / qs;
    J.row(1) = form_gradient<double>(C.cubic, x).transpose() / ks;
    Vec4 dx = J.completeOrthogonalDecomposition().solve(-F);
    x = (x + dx).normalized();
    if (F.norm() < tol && dx.norm() < 1e-9) return x;
  }
  Eigen::Vector2d F(evaluate_form<double>(C.quadric.form, x) / qs,
                    evaluate_form<double>(C.cubic, x) / ks);
  if (F.norm() < 100 * tol) return x;
  throw non_convergence("project_to_curve: Newton refinement did not converge");
}

// ───────────────────────── Plane sections of the surface ─────────────────────────

namespace {

SectionBranch trail_branch(const Chart& chart, const std::vector<Vec4>& ambient,
                           int multiplicity, bool boundary_arc) {
  SectionBranch br;
  br.multiplicity = multiplicity;
  br.boundary_arc = boundary_arc;
  br.points.reserve(ambient.size());
  br.uv.reserve(ambient.size());
  for (const Vec4& x : ambient) {
    Vec4 xn = x.normalized();
    br.points.push_back(xn);
    br.uv.push_back(chart.uv(xn));
  }
  br.cls = boundary_arc ? HomologyClass{chart.kind, 0, 0} : loop_class(chart, br.uv);
  return br;
}

}  // namespace

SectionDivisor section_divisor(const SpaceSextic& C, const Vec4& h_in, int n_samples) {
  if (n_samples < 16) throw invalid_input("section_divisor: too few samples");
  double hn0 = h_in.norm();
  if (!(hn0 > 0)) throw invalid_input("section_divisor: zero plane");

  Classification cls = classify_quadric(C.quadric);
  Chart chart = chart_map(cls);
  SectionDivisor D;
  D.h = h_in / hn0;
  // the plane in normal coordinates; chart points are ambient representatives
  Vec4 hn = (cls.from_normal.transpose() * D.h).normalized();
  Eigen::Matrix4d N = normal_form_matrix(cls.kind);

  if (cls.kind == SurfaceKind::cone && std::abs(hn[3]) < 1e-9) {
    // plane through the apex: a pair of generators, or one doubled
    double R = std::hypot(hn[0], hn[1]);
    if (R < 1e-12) return D;  // x2 = 0 meets the cone in the apex only
    double phi = std::atan2(hn[1], hn[0]);
    double c = -hn[2] / R;
    if (std::abs(c) > 1.0 + 1e-9) return D;  // apex only
    bool tangent = std::abs(c) > 1.0 - 1e-7;
    double spread = tangent ? 0.0 : std::acos(std::clamp(c, -1.0, 1.0));
    std::vector<double> us;
    if (tangent)
      us = {phi + (c < 0 ? kPi : 0.0)};
    else
      us = {phi + spread, phi - spread};
    const double v_lo = -0.5 * kPi + 1e-3, v_hi = 0.5 * kPi - 1e-3;
    for (double u : us) {
      u = std::fmod(u, 2 * kPi);
      if (u < 0) u += 2 * kPi;
      std::vector<Vec4> amb;
      amb.reserve(n_samples);
      for (int k = 0; k < n_samples; ++k) {
        double v = v_lo + (v_hi - v_lo) * k / double(n_samples - 1);
        amb.push_back(chart.point(u, v));
      }
      SectionBranch br = trail_branch(chart, amb, tangent ? 2 : 1, true);
      (tangent ? D.d0 : D.d1).push_back(std::move(br));
    }
    return D;
  }

  // restrict the surface to the plane and diagonalize the resulting conic
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>> qr(hn);
  Eigen::Matrix4d Qfull = qr.householderQ();
  Eigen::Matrix<double, 4, 3> B = Qfull.rightCols<3>();
  Eigen::Matrix3d M = B.transpose() * N * B;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  Eigen::Vector3d lam = es.eigenvalues();
  Eigen::Matrix3d V = es.eigenvectors();
  double scale = lam.cwiseAbs().maxCoeff();
  if (!(scale > 0)) throw invalid_input("section_divisor: degenerate plane section");
  int zero = 0, pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(lam[i]) < 1e-9 * scale)
      ++zero;
    else if (lam[i] > 0)
      ++pos;
    else
      ++neg;
  }

  if (zero == 0 && (pos == 3 || neg == 3)) return D;  // no real points
  if (zero >= 2) throw invalid_input("section_divisor: degenerate plane section");

  if (zero == 0) {
    // irreducible conic with real points; pick the majority sign as positive
    double s = (pos >= 2) ? 1.0 : -1.0;
    int i3 = -1;
    std::array<int, 2> ij{-1, -1};
    int w = 0;
    for (int i = 0; i < 3; ++i) {
      if (s * lam[i] > 0)
        ij[w++] = i;
      else
        i3 = i;
    }
    double a1 = 1.0 / std::sqrt(s * lam[ij[0]]);
    double a2 = 1.0 / std::sqrt(s * lam[ij[1]]);
    double a3 = 1.0 / std::sqrt(-s * lam[i3]);
    std::vector<Vec4> amb;
    amb.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
      double th = 2 * kPi * k / double(n_samples);
      Eigen::Vector3d y = a1 * std::cos(th) * V.col(ij[0]) +
                          a2 * std::sin(th) * V.col(ij[1]) + a3 * V.col(i3);
      amb.push_back(cls.from_normal * (B * y));
    }
    D.d1.push_back(trail_branch(chart, amb, 1, false));
    return D;
  }

  // rank 2: a single real point, or two lines through the conic node
  int iz = 0;
  for (int i = 0; i < 3; ++i)
    if (std::abs(lam[i]) < 1e-9 * scale) iz = i;
  if (pos == 2 || neg == 2)
    throw invalid_input(
        "section_divisor: the real section is a single point; perturb the plane");
  int ip = -1, in = -1;
  for (int i = 0; i < 3; ++i) {
    if (i == iz) continue;
    (lam[i] > 0 ? ip : in) = i;
  }
  Eigen::Vector3d y0 = V.col(iz);
  Eigen::Vector3d wp = V.col(ip) / std::sqrt(lam[ip]);
  Eigen::Vector3d wn = V.col(in) / std::sqrt(-lam[in]);
  for (int sgn = 0; sgn < 2; ++sgn) {
    Eigen::Vector3d d = wp + (sgn ? -1.0 : 1.0) * wn;
    Vec4 P0 = (cls.from_normal * (B * y0)).normalized();
    Vec4 P1 = cls.from_normal * (B * (y0 + d));
    P1 = (P1 - P1.dot(P0) * P0).normalized();
    std::vector<Vec4> amb;
    amb.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
      double ps = kPi * k / double(n_samples);
      amb.push_back(std::cos(ps) * P0 + std::sin(ps) * P1);
    }
    D.d1.push_back(trail_branch(chart, amb, 1, false));
  }
  return D;
}

// ───────────────────────── Chess-board coloring ─────────────────────────

namespace {

struct Seg {
  Eigen::Vector2d a, b;
};

// proper crossing test; the grid is offset so degeneracies have measure zero
bool segments_cross(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                    const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& s,
                  const Eigen::Vector2d& t) {
    return (s.x() - o.x()) * (t.y() - o.y()) - (s.y() - o.y()) * (t.x() - o.x());
  };
  double s1 = cross(p, q, a), s2 = cross(p, q, b);
  if (s1 * s2 >= 0) return false;
  double t1 = cross(a, b, p), t2 = cross(a, b, q);
  return t1 * t2 < 0;
}

}  // namespace

int Coloring::cell_index(double u, double v) const {
  double uu = u - u0;
  uu -= std::floor(uu / (nu * cell)) * (nu * cell);
  int i = static_cast<int>(std::floor(uu / cell));
  if (i < 0 || i >= nu) return -1;
  double vv = v - v0;
  if (wrap_v) vv -= std::floor(vv / (nv * cell)) * (nv * cell);
  int j = static_cast<int>(std::floor(vv / cell));
  if (j < 0 || j >= nv) return -1;
  return j * nu + i;
}

int Coloring::color_at(double u, double v) const {
  int idx = cell_index(u, v);
  if (idx < 0 || blocked[idx]) return -1;
  return color[idx];
}

int Coloring::region_at(double u, double v) const {
  int idx = cell_index(u, v);
  if (idx < 0 || blocked[idx]) return -1;
  return region[idx];
}

Coloring chessboard_coloring(const Chart& chart, const std::vector<ChartArc>& arcs) {
  if (arcs.empty()) throw invalid_input("chessboard_coloring: no arcs");

  Coloring col;
  col.chart = chart;
  col.wrap_u = true;
  col.wrap_v = chart.v_periodic();
  double span_u = chart.period_u;
  double v_lo = chart.v_min, v_hi = chart.v_max;
  double span_v = col.wrap_v ? chart.period_v : (v_hi - v_lo);
  if (chart.kind == SurfaceKind::cone) {
    v_lo += 0.02;
    v_hi -= 0.02;
    span_v = v_hi - v_lo;
  }

  // resolution: a fraction of the closest approach between distinct arcs
  double min_pair = std::numeric_limits<double>::infinity();
  for (size_t ia = 0; ia < arcs.size(); ++ia)
    for (size_t ib = ia + 1; ib < arcs.size(); ++ib) {
      size_t sa = std::max<size_t>(1, arcs[ia].uv.size() / 400);
      size_t sb = std::max<size_t>(1, arcs[ib].uv.size() / 400);
      for (size_t i = 0; i < arcs[ia].uv.size(); i += sa)
        for (size_t j = 0; j < arcs[ib].uv.size(); j += sb) {
          double d = chart_step(chart, arcs[ia].uv[i], arcs[ib].uv[j]).norm();
          if (d < min_pair) min_pair = d;
        }
    }
  double cell = span_v / 48.0;
  if (std::isfinite(min_pair)) cell = std::min(cell, min_pair / 2.5);
  cell = std::max(cell, span_v / 640.0);

  col.nu = std::max(8, static_cast<int>(std::ceil(span_u / cell)));
  col.cell = span_u / col.nu;  // exact period in u
  cell = col.cell;
  col.nv = std::max(4, static_cast<int>(std::ceil(span_v / cell)) + (col.wrap_v ? 0 : 1));
  if (col.wrap_v) col.nv = std::max(4, static_cast<int>(std::llround(span_v / cell)));
  // irrational-ish offsets keep vertices off cell centers and edges
  col.u0 = -0.2371 * cell;
  col.v0 = col.wrap_v ? -0.1693 * cell : v_lo - 0.0731 * cell;
  double gu = col.nu * cell;
  double gv = col.nv * cell;

  // wrap every arc segment into the grid window, duplicating across seams
  std::vector<Seg> segs;
  for (const auto& arc : arcs) {
    const int n = static_cast<int>(arc.uv.size());
    if (n < 2) throw invalid_input("chessboard_coloring: arc with fewer than 2 samples");
    int last = arc.boundary_arc ? n - 1 : n;
    for (int i = 0; i < last; ++i) {
      Eigen::Vector2d a = arc.uv[i];
      Eigen::Vector2d d = chart_step(chart, a, arc.uv[(i + 1) % n]);
      if (d.norm() < 1e-15) continue;
      if (d.norm() > 0.45 * std::min(span_u, span_v))
        throw invalid_input("chessboard_coloring: arc sampling too sparse");
      // reduce the anchor into the window
      a.x() -= std::floor((a.x() - col.u0) / gu) * gu;
      if (col.wrap_v) a.y() -= std::floor((a.y() - col.v0) / gv) * gv;
      Eigen::Vector2d b = a + d;
      for (int su = -1; su <= 1; ++su)
        for (int sv = (col.wrap_v ? -1 : 0); sv <= (col.wrap_v ? 1 : 0); ++sv) {
          Eigen::Vector2d off(su * gu, sv * gv);
          Eigen::Vector2d aa = a + off, bb = b + off;
          double ulo = std::min(aa.x(), bb.x()), uhi = std::max(aa.x(), bb.x());
          double vlo = std::min(aa.y(), bb.y()), vhi = std::max(aa.y(), bb.y());
          if (uhi < col.u0 - cell || ulo > col.u0 + gu + cell) continue;
          if (vhi < col.v0 - cell || vlo > col.v0 + gv + cell) continue;
          segs.push_back({aa, bb});
        }
    }
  }

  // bucket segments by the cells their boxes touch (inflated by half a cell)
  const int ncell = col.nu * col.nv;
  std::vector<std::vector<int>> bucket(ncell);
  col.blocked.assign(ncell, 0);
  for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
    const Seg& s = segs[si];
    double ulo = std::min(s.a.x(), s.b.x()) - 0.5 * cell;
    double uhi = std::max(s.a.x(), s.b.x()) + 0.5 * cell;
    double vlo = std::min(s.a.y(), s.b.y()) - 0.5 * cell;
    double vhi = std::max(s.a.y(), s.b.y()) + 0.5 * cell;
    int i0 = static_cast<int>(std::floor((ulo - col.u0) / cell));
    int i1 = static_cast<int>(std::floor((uhi - col.u0) / cell));
    int j0 = static_cast<int>(std::floor((vlo - col.v0) / cell));
    int j1 = static_cast<int>(std::floor((vhi - col.v0) / cell));
    for (int j = std::max(0, j0); j <= std::min(col.nv - 1, j1); ++j)
      for (int i = std::max(0, i0); i <= std::min(col.nu - 1, i1); ++i) {
        bucket[j * col.nu + i].push_back(si);
        // block on actual bbox overlap without the half-cell inflation
        double cu0 = col.u0 + i * cell, cv0 = col.v0 + j * cell;
        if (std::max(s.a.x(), s.b.x()) >= cu0 &&
            std::min(s.a.x(), s.b.x()) <= cu0 + cell &&
            std::max(s.a.y(), s.b.y()) >= cv0 && std::min(s.a.y(), s.b.y()) <= cv0 + cell)
          col.blocked[j * col.nu + i] = 1;
      }
  }

  auto center = [&](int i, int j) {
    return Eigen::Vector2d(col.u0 + (i + 0.5) * cell, col.v0 + (j + 0.5) * cell);
  };
  auto edge_parity = [&](int i, int j, int axis) {
    // dual edge from cell (i,j) to its +u or +v neighbor (wrapping)
    Eigen::Vector2d c1 = center(i, j);
    Eigen::Vector2d c2 = c1 + (axis == 0 ? Eigen::Vector2d(cell, 0.0)
                                         : Eigen::Vector2d(0.0, cell));
    int i2 = axis == 0 ? (i + 1) % col.nu : i;
    int j2 = axis == 0 ? j : (j + 1) % col.nv;
    int count = 0;
    std::vector<int> seen;
    for (int cidx : {j * col.nu + i, j2 * col.nu + i2})
      for (int si : bucket[cidx]) seen.push_back(si);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (int si : seen)
      if (segments_cross(c1, c2, segs[si].a, segs[si].b)) ++count;
    return count & 1;
  };

  // BFS-color all cells; any odd cycle in the crossing parities is fatal
  col.color.assign(ncell, 0);
  std::vector<std::uint8_t> visited(ncell, 0);
  std::deque<int> queue;
  queue.push_back(0);
  visited[0] = 1;
  col.color[0] = 0;
  auto neighbor = [&](int i, int j, int dir, int* pi, int* pj) {
    // dir 0..3: +u, -u, +v, -v; false when stepping off a non-wrapped edge
    int ii = i, jj = j;
    if (dir == 0) ii = i + 1;
    if (dir == 1) ii = i - 1;
    if (dir == 2) jj = j + 1;
    if (dir == 3) jj = j - 1;
    if (ii < 0 || ii >= col.nu) {
      ii = (ii + col.nu) % col.nu;  // u always wraps
    }
    if (jj < 0 || jj >= col.nv) {
      if (!col.wrap_v) return false;
      jj = (jj + col.nv) % col.nv;
    }
    *pi = ii;
    *pj = jj;
    return true;
  };
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    int i = idx % col.nu, j = idx / col.nu;
    for (int dir = 0; dir < 4; ++dir) {
      int ii, jj;
      if (!neighbor(i, j, dir, &ii, &jj)) continue;
      int p;
      if (dir == 0) p = edge_parity(i, j, 0);
      else if (dir == 1) p = edge_parity(ii, jj, 0);
      else if (dir == 2) p = edge_parity(i, j, 1);
      else p = edge_parity(ii, jj, 1);
      int nidx = jj * col.nu + ii;
      int want = col.color[idx] ^ p;
      if (!visited[nidx]) {
        visited[nidx] = 1;
        col.color[nidx] = static_cast<std::uint8_t>(want);
        queue.push_back(nidx);
      } else if (col.color[nidx] != want) {
        throw invalid_input("not chessboard-colorable");
      }
    }
  }

  // regions: unblocked cells joined across parity-0 dual edges
  col.region.assign(ncell, -1);
  col.n_regions = 0;
  for (int start = 0; start < ncell; ++start) {
    if (col.blocked[start] || col.region[start] >= 0) continue;
    int rid = col.n_regions++;
    std::deque<int> q2{start};
    col.region[start] = rid;
    while (!q2.empty()) {
      int idx = q2.front();
      q2.pop_front();
      int i = idx % col.nu, j = idx / col.nu;
      for (int dir = 0; dir < 4; ++dir) {
        int ii, jj;
        if (!neighbor(i, j, dir, &ii, &jj)) continue;
        int nidx = jj * col.nu + ii;
        if (col.blocked[nidx] || col.region[nidx] >= 0) continue;
        if (col.color[nidx] != col.color[idx]) continue;
        col.region[nidx] = rid;
        q2.push_back(nidx);
      }
    }
  }
  return col;
}

Coloring chessboard_coloring(const SpaceSextic& C, const RealLocus& locus,
                             const SectionDivisor* D) {
  Classification cls = classify_quadric(C.quadric);
  Chart chart = chart_map(cls);
  std::vector<ChartArc> arcs;
  for (const auto& comp : locus.components) arcs.push_back({comp.uv, false});
  if (D)
    for (const auto& br : D->d1) arcs.push_back({br.uv, br.boundary_arc});
  return chessboard_coloring(chart, arcs);
}

// ───────────────────────── Orientations ─────────────────────────

int OrientationAssignment::sign_at(int component, double arc) const {
  if (component < 0 || component >= static_cast<int>(arcs.size()))
    throw invalid_input("sign_at: component out of range");
  const auto& list = arcs[component];
  if (list.empty()) throw invalid_input("sign_at: component without arcs");
  double s = arc - std::floor(arc);
  // the interval starting at the last boundary <= s; wraps to the last arc
  int lo = -1;
  for (int i = 0; i < static_cast<int>(list.size()); ++i)
    if (list[i].first <= s) lo = i;
  if (lo < 0) lo = static_cast<int>(list.size()) - 1;
  return list[lo].second;
}

void OrientationAssignment::normalize() {
  if (arcs.empty() || arcs[0].empty()) return;
  if (sign_at(0, 0.0) >= 0) return;
  for (auto& list : arcs)
    for (auto& e : list) e.second = -e.second;
}

bool orientations_agree_up_to_flip(const OrientationAssignment& A,
                                   const OrientationAssignment& B) {
  if (A.arcs.size() != B.arcs.size()) return false;
  int rel = 0;
  for (int ci = 0; ci < static_cast<int>(A.arcs.size()); ++ci) {
    std::vector<double> cuts;
    for (const auto& e : A.arcs[ci]) cuts.push_back(e.first);
    for (const auto& e : B.arcs[ci]) cuts.push_back(e.first);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (int k = 0; k < static_cast<int>(cuts.size()); ++k) {
      double next = k + 1 < static_cast<int>(cuts.size()) ? cuts[k + 1] : cuts[0] + 1.0;
      double mid = 0.5 * (cuts[k] + next);
      int r = A.sign_at(ci, mid) * B.sign_at(ci, mid);
      if (rel == 0)
        rel = r;
      else if (r != rel)
        return false;
    }
  }
  return rel != 0;
}

namespace {

// |h.x| on the curve near sample i, minimized by golden-section search; the
// chord alone sags ~1e-5 off the curve, so every probe is Newton-projected
double refine_dip(const SpaceSextic& C, const TracedComponent& comp, const Vec4& h,
                  int i, double* t_out, Vec4* x_out) {
  const int n = static_cast<int>(comp.points.size());
  Vec4 a = comp.points[(i - 1 + n) % n];
  Vec4 b = aligned(a, comp.points[i]);
  Vec4 c = aligned(b, comp.points[(i + 1) % n]);
  auto val = [&](double t) {
    // t in [0,2]: first segment then second
    Vec4 p = t <= 1.0 ? Vec4(a + t * (b - a)) : Vec4(b + (t - 1.0) * (c - b));
    Vec4 q = project_to_curve(C, p);
    return std::abs(h.dot(q));
  };
  double lo = 0.0, hi = 2.0;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = val(x1), f2 = val(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = val(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = val(x2);
    }
  }
  *t_out = 0.5 * (lo + hi);
  Vec4 p = *t_out <= 1.0 ? Vec4(a + *t_out * (b - a))
                         : Vec4(b + (*t_out - 1.0) * (c - b));
  *x_out = project_to_curve(C, p);
  return std::abs(h.dot(*x_out));
}

double branch_distance(const SectionBranch& br, const Vec4& x) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(br.points.size());
  int last = br.boundary_arc ? n - 1 : n;
  for (int i = 0; i < last; ++i) {
    const Vec4& a = br.points[i];
    Vec4 b = aligned(a, br.points[(i + 1) % n]);
    Vec4 xs = (a - x).squaredNorm() <= (a + x).squaredNorm() ? x : Vec4(-x);
    Vec4 ab = b - a;
    double den = ab.squaredNorm();
    double t = den > 0 ? std::clamp((xs - a).dot(ab) / den, 0.0, 1.0) : 0.0;
    best = std::min(best, ((a + t * ab).normalized() - xs).norm());
  }
  return best;
}

}  // namespace

OrientationAssignment d_orientation(const SpaceSextic& C, const RealLocus& locus,
                                    const SectionDivisor& D, const Coloring& coloring) {
  const Vec4 h = D.h;
  if (!(h.norm() > 0.5)) throw invalid_input("d_orientation: divisor without a plane");
  OrientationAssignment out;
  out.section_h = h;
  out.has_section = true;
  out.arcs.resize(locus.components.size());

  const Chart& chart = coloring.chart;
  for (int ci = 0; ci < static_cast<int>(locus.components.size()); ++ci) {
    const TracedComponent& comp = locus.components[ci];
    const int n = static_cast<int>(comp.points.size());
    if (n < 8) throw invalid_input("d_orientation: component with too few samples");
    auto cum = cumulative_lengths(comp.points);
    double total = cum[n];

    // h.x along a continuous lift of the loop
    std::vector<double> val(n + 1);
    Vec4 prev = comp.points[0];
    val[0] = h.dot(prev);
    for (int i = 1; i <= n; ++i) {
      Vec4 cur = aligned(prev, comp.points[i % n]);
      val[i] = h.dot(cur);
      prev = cur;
    }

    struct Cross {
      double arc;
      bool flips;
      Vec4 x;
    };
    std::vector<Cross> crossings;
    const double tol_tiny = 1e-7;  // above the tracer's residual, below crossings

    auto check_contact = [&](const Vec4& x) {
      double d0dist = std::numeric_limits<double>::infinity();
      for (const auto& br : D.d0) d0dist = std::min(d0dist, branch_distance(br, x));
      if (!(d0dist < 1e-3)) throw invalid_input("perturb D");
    };

    // zones of samples numerically on the section; the samples around a zone
    // decide between a transverse crossing and an even contact
    std::vector<std::uint8_t> in_zone(n, 0);
    for (int i = 0; i < n; ++i)
      if (std::abs(val[i]) < tol_tiny) in_zone[i] = 1;
    std::vector<std::uint8_t> zone_seen(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!in_zone[i] || zone_seen[i]) continue;
      int i0 = i, i1 = i;
      while (in_zone[(i0 - 1 + n) % n] && i1 - i0 < n) i0--;
      while (in_zone[(i1 + 1) % n] && i1 - i0 < n) i1++;
      if (i1 - i0 >= n - 1) throw invalid_input("perturb D");  // loop on the section
      for (int k = i0; k <= i1; ++k) zone_seen[(k + n) % n] = 1;
      double vb = val[(i0 - 1 + n) % n];
      double va = val[(i1 + 1) % n];
      int ic = ((i0 + i1) / 2 + n) % n;
      Vec4 x = project_to_curve(C, comp.points[ic]);
      double arc = cum[ic] / total;
      if (vb * va < 0) {
        double span = cum[(i1 + 1) % n == 0 ? n : (i1 + 1) % n] - cum[(i0 - 1 + n) % n];
        if (!(std::abs(span) > 0) || (std::abs(vb) + std::abs(va)) / std::abs(span) < 1e-4)
          throw invalid_input("perturb D");
        crossings.push_back({arc, true, x});
      } else {
        double t = 0;
        Vec4 xr;
        double dip = refine_dip(C, comp, h, ic, &t, &xr);
        if (dip >= 1e-8) throw invalid_input("perturb D");
        check_contact(xr);
        crossings.push_back({arc, false, xr});
      }
    }

    // transverse crossings between clean samples
    std::vector<std::uint8_t> pass_a(n, 0);
    for (int i = 0; i < n; ++i) {
      if (in_zone[i] || in_zone[(i + 1) % n]) continue;
      if (val[i] * val[i + 1] >= 0) continue;
      double denom = val[i] - val[i + 1];
      double seg = cum[i + 1] - cum[i];
      if (!(seg > 0) || std::abs(denom) / seg < 1e-4)
        throw invalid_input("perturb D");  // nearly tangential crossing
      double t = val[i] / denom;
      double arc = (cum[i] + t * seg) / total;
      Vec4 a = comp.points[i];
      Vec4 b = aligned(a, comp.points[(i + 1) % n]);
      Vec4 x = project_to_curve(C, a + t * (b - a));
      crossings.push_back({arc, true, x});
      pass_a[i] = 1;
    }

    // even-order contacts: clean local minima of |h.x| without a sign change
    for (int i = 0; i < n; ++i) {
      double am = std::abs(val[i]);
      if (in_zone[i] || am >= 1e-4) continue;
      int im = (i - 1 + n) % n;
      if (am > std::abs(val[im]) || am > std::abs(val[i + 1])) continue;
      if (pass_a[im] || pass_a[i]) continue;
      double t = 0;
      Vec4 x;
      double dip = refine_dip(C, comp, h, i, &t, &x);
      if (dip >= 1e-4) continue;
      if (dip >= 1e-8) throw invalid_input("perturb D");
      check_contact(x);
      int off = t <= 1.0 ? 0 : 1;
      double tt = t <= 1.0 ? t : t - 1.0;
      int ia = (im + off) % n;
      double arc = (cum[ia] + tt * (cum[ia + 1] - cum[ia])) / total;
      bool dup = false;
      for (const auto& cr : crossings) {
        double d = std::abs(cr.arc - arc);
        if (d < 1.5 / n || 1.0 - d < 1.5 / n) dup = true;
      }
      if (!dup) crossings.push_back({arc, false, x});
    }

    std::sort(crossings.begin(), crossings.end(),
              [](const Cross& a, const Cross& b) { return a.arc < b.arc; });
    for (const auto& cr : crossings)
      out.crossings.push_back({ci, cr.arc, cr.x, cr.flips});

    // cut the loop at flipping crossings only
    std::vector<double> cuts;
    for (const auto& cr : crossings)
      if (cr.flips) cuts.push_back(cr.arc);

    // base sign of an arc midpoint: color of the cell on the left of the
    // traversal; color 1 counts as the positive side
    auto left_sign = [&](double arc) -> int {
      // probes stay under 2.5 cells: the grid guarantees distinct arcs are
      // at least that far apart, so the probe cannot land past another arc
      for (double mul : {1.4, 2.0, 2.4}) {
        double t = 0;
        int i = segment_of_arc(cum, arc, &t);
        Eigen::Vector2d tan = chart_step(chart, comp.uv[i], comp.uv[(i + 1) % n]);
        if (tan.norm() < 1e-15) continue;
        tan.normalize();
        Eigen::Vector2d nl(-tan.y(), tan.x());
        Eigen::Vector2d base = comp.uv[i] + t * chart_step(chart, comp.uv[i],
                                                           comp.uv[(i + 1) % n]);
        Eigen::Vector2d probe = base + mul * coloring.cell * nl;
        int c = coloring.color_at(probe.x(), probe.y());
        if (c >= 0) return c == 1 ? +1 : -1;
      }
      return 0;
    };

    auto& arcs_out = out.arcs[ci];
    if (cuts.empty()) {
      int s = 0;
      for (double probe_arc : {0.13, 0.37, 0.61, 0.83}) {
        s = left_sign(probe_arc);
        if (s != 0) break;
      }
      if (s == 0)
        throw non_convergence("d_orientation: no readable cell beside the curve");
      arcs_out.push_back({0.0, s});
    } else {
      for (int k = 0; k < static_cast<int>(cuts.size()); ++k) {
        double next = k + 1 < static_cast<int>(cuts.size()) ? cuts[k + 1] : cuts[0] + 1.0;
        double mid = 0.5 * (cuts[k] + next);
        if (mid >= 1.0) mid -= 1.0;
        int s = left_sign(mid);
        if (s == 0) {
          for (double f : {0.3, 0.7, 0.45, 0.55}) {
            double m2 = cuts[k] + f * (next - cuts[k]);
            if (m2 >= 1.0) m2 -= 1.0;
            s = left_sign(m2);
            if (s != 0) break;
          }
        }
        if (s == 0)
          throw non_convergence("d_orientation: no readable cell beside the curve");
        arcs_out.push_back({cuts[k], s});
      }
      // the coloring must flip across every odd crossing
      for (int k = 0; k < static_cast<int>(arcs_out.size()); ++k) {
        int k2 = (k + 1) % static_cast<int>(arcs_out.size());
        if (arcs_out[k].second == arcs_out[k2].second)
          throw non_convergence("d_orientation: colors fail to flip across the section");
      }
      // and persist across even contacts
      for (const auto& cr : crossings) {
        if (cr.flips) continue;
        double eps = 0.01;
        double before = cr.arc - eps < 0 ? cr.arc - eps + 1.0 : cr.arc - eps;
        double after = cr.arc + eps >= 1.0 ? cr.arc + eps - 1.0 : cr.arc + eps;
        int sb = left_sign(before), sa = left_sign(after);
        if (sb != 0 && sa != 0 && sb != sa)
          throw non_convergence("d_orientation: color flips across an even contact");
      }
    }
  }

  out.normalize();
  return out;
}

// ───────────────────────── Linking and the fiber obstruction ─────────────────────────

namespace {

double pencil_angle_increment(const Eigen::Vector2d& wa, const Eigen::Vector2d& wb) {
  double da = std::atan2(wb.y(), wb.x()) - std::atan2(wa.y(), wa.x());
  // plane classes live modulo a half turn
  da = std::fmod(da, kPi);
  if (da > 0.5 * kPi) da -= kPi;
  if (da < -0.5 * kPi) da += kPi;
  return da;
}

}  // namespace

bool is_linked(const Vec4& p0, const Vec4& p1, const TracedComponent& loop,
               double tol_incidence) {
  Vec4 a0 = p0;
  if (!(a0.norm() > 0)) throw invalid_input("is_linked: zero point");
  a0.normalize();
  Vec4 a1 = p1 - p1.dot(a0) * a0;
  if (a1.norm() < 1e-12 * std::max(1.0, p1.norm()))
    throw invalid_input("is_linked: the two points do not span a line");
  a1.normalize();
  Eigen::Matrix<double, 4, 2> L;
  L.col(0) = a0;
  L.col(1) = a1;
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(L, Eigen::ComputeFullU);
  Vec4 g1 = svd.matrixU().col(2);
  Vec4 g2 = svd.matrixU().col(3);

  const int n = static_cast<int>(loop.points.size());
  if (n < 3) throw invalid_input("is_linked: loop with fewer than 3 samples");
  auto project = [&](const Vec4& x) {
    return Eigen::Vector2d(g1.dot(x), g2.dot(x));
  };

  double total = 0.0;
  double min_r = std::numeric_limits<double>::infinity();
  // subdivide segments whose pencil angle jumps too fast
  std::function<void(const Vec4&, const Vec4&, int)> walk = [&](const Vec4& xa,
                                                                const Vec4& xb,
                                                                int depth) {
    Eigen::Vector2d wa = project(xa), wb = project(xb);
    min_r = std::min({min_r, wa.norm(), wb.norm()});
    double inc = pencil_angle_increment(wa, wb);
    if (std::abs(inc) > 1.2 && depth < 14) {
      Vec4 mid = (xa + aligned(xa, xb)).normalized();
      walk(xa, mid, depth + 1);
      walk(mid, xb, depth + 1);
      return;
    }
    total += inc;
  };
  for (int i = 0; i < n; ++i) {
    Vec4 xa = loop.points[i].normalized();
    Vec4 xb = loop.points[(i + 1) % n].normalized();
    walk(xa, aligned(xa, xb), 0);
  }
  if (min_r < tol_incidence)
    throw invalid_input("is_linked: the loop meets the line within tolerance");

  long w = std::llround(total / kPi);
  if (w & 1)
    throw invalid_input("is_linked: the loop is homologically essential");
  return ((w / 2) & 1) != 0;
}

const char* verdict_name(ObstructionVerdict v) {
  switch (v) {
    case ObstructionVerdict::consistent:
      return "consistent";
    case ObstructionVerdict::obstructed_ok:
      return "obstructed-ok";
    default:
      return "vacuous";
  }
}

ObstructionVerdict obstruction_check(const std::vector<FiberPointRef>& P,
                                     const OrientationAssignment& d_or,
                                     const OrientationAssignment& c_or,
                                     double tol_on_section) {
  if (!d_or.has_section)
    throw invalid_input("obstruction_check: first assignment carries no section");
  const Vec4& h = d_or.section_h;
  int rel = 0;
  bool any = false;
  for (const auto& p : P) {
    double on = std::abs(h.dot(p.x.normalized()));
    if (on < tol_on_section && !p.on_d)
      throw invalid_input(
          "obstruction_check: fiber point lies on the section but is not declared");
    if (p.on_d) continue;
    int r = d_or.sign_at(p.component, p.arc) * c_or.sign_at(p.component, p.arc);
    if (!any) {
      rel = r;
      any = true;
    } else if (r != rel) {
      return ObstructionVerdict::obstructed_ok;
    }
  }
  if (!any) return ObstructionVerdict::vacuous;
  return ObstructionVerdict::consistent;
}

}  // namespace sepsemi
