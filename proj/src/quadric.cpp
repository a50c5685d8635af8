#include "sepsemi/quadric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace sepsemi {

namespace {
constexpr double kPi = 3.14159265358979323846;

double mod_pos(double x, double period) {
  double r = std::fmod(x, period);
  return r < 0 ? r + period : r;
}
}  // namespace

const char* kind_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::ellipsoid: return "ellipsoid";
    case SurfaceKind::hyperboloid: return "hyperboloid";
    case SurfaceKind::cone: return "cone";
  }
  return "?";
}

std::optional<SurfaceKind> kind_from_name(const std::string& name) {
  if (name == "ellipsoid") return SurfaceKind::ellipsoid;
  if (name == "hyperboloid") return SurfaceKind::hyperboloid;
  if (name == "cone") return SurfaceKind::cone;
  return std::nullopt;
}

Quadric quadric_from_matrix(const Mat4& m) {
  Mat4 sym = 0.5 * (m + m.transpose());
  MultiForm f = MultiForm::zero(2);
  const auto& tab = monomial_exponents(2);
  for (int idx = 0; idx < 10; ++idx) {
    int i = -1, j = -1;
    for (int v = 0; v < 4; ++v) {
      if (tab[idx][v] == 2) i = j = v;
      if (tab[idx][v] == 1) (i < 0 ? i : j) = v;
    }
    f.coeffs(idx) = (i == j) ? sym(i, i) : 2.0 * sym(i, j);
  }
  return Quadric{f, sym};
}

Quadric quadric_from_form(const MultiForm& f) {
  if (f.degree != 2) throw invalid_input("quadric_from_form: degree must be 2");
  Mat4 m = Mat4::Zero();
  const auto& tab = monomial_exponents(2);
  for (int idx = 0; idx < 10; ++idx) {
    int i = -1, j = -1;
    for (int v = 0; v < 4; ++v) {
      if (tab[idx][v] == 2) i = j = v;
      if (tab[idx][v] == 1) (i < 0 ? i : j) = v;
    }
    if (i == j)
      m(i, i) = f.coeffs(idx);
    else
      m(i, j) = m(j, i) = 0.5 * f.coeffs(idx);
  }
  return Quadric{f, m};
}

Mat4 normal_form_matrix(SurfaceKind kind) {
  Vec4 d;
  switch (kind) {
    case SurfaceKind::ellipsoid: d << 1, 1, 1, -1; break;
    case SurfaceKind::hyperboloid: d << 1, 1, -1, -1; break;
    case SurfaceKind::cone: d << 1, 1, -1, 0; break;
  }
  return d.asDiagonal();
}

Classification classify_quadric(const Quadric& q, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(q.matrix);
  if (es.info() != Eigen::Success) throw non_convergence("classify_quadric: eigensolver failed");
  Vec4 ev = es.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw invalid_input("classify_quadric: zero matrix");

  int pos = 0, neg = 0, zero = 0;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev(i)) < tol * scale)
      ++zero;
    else if (ev(i) > 0)
      ++pos;
    else
      ++neg;
  }

  // Canonical sense: more positive than negative eigenvalues.
  int sign = (neg > pos) ? -1 : 1;
  if (sign < 0) std::swap(pos, neg);

  SurfaceKind kind;
  if (zero == 0 && pos == 3 && neg == 1)
    kind = SurfaceKind::ellipsoid;
  else if (zero == 0 && pos == 2 && neg == 2)
    kind = SurfaceKind::hyperboloid;
  else if (zero == 1 && pos == 2 && neg == 1)
    kind = SurfaceKind::cone;
  else
    throw invalid_input("classify_quadric: real locus is not a surface (signature " +
                        std::to_string(pos) + "," + std::to_string(neg) + "," +
                        std::to_string(zero) + ")");

  // Order eigenpairs to match the normal form: positives (descending), then
  // negatives (descending magnitude), zero last. Fix eigenvector signs for
  // reproducibility: largest-magnitude component positive.
  struct Pair {
    double lam;
    Vec4 vec;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < 4; ++i) {
    Vec4 v = es.eigenvectors().col(i);
    int imax = 0;
    for (int k = 1; k < 4; ++k)
      if (std::abs(v(k)) > std::abs(v(imax))) imax = k;
    if (v(imax) < 0) v = -v;
    pairs.push_back({sign * ev(i), v});
  }
  auto cat = [&](double lam) {
    if (std::abs(lam) < tol * scale) return 2;
    return lam > 0 ? 0 : 1;
  };
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    int ca = cat(a.lam), cb = cat(b.lam);
    if (ca != cb) return ca < cb;
    return std::abs(a.lam) > std::abs(b.lam);
  });

  Classification cls;
  cls.kind = kind;
  cls.sign = sign;
  Mat4 W;
  for (int i = 0; i < 4; ++i) {
    double lam = pairs[i].lam;
    double w = (cat(lam) == 2) ? 1.0 : std::sqrt(std::abs(lam));
    W.row(i) = w * pairs[i].vec.transpose();
    cls.eigenvalues(i) = lam;
  }
  cls.to_normal = W;
  cls.from_normal = W.inverse();

  Mat4 residual = W.transpose() * normal_form_matrix(kind) * W - double(sign) * q.matrix;
  if (residual.norm() > 1e-9 * std::max(1.0, q.matrix.norm()))
    throw non_convergence("classify_quadric: normalizer residual above tolerance");
  return cls;
}

// ───────────────────────── Chart ─────────────────────────

Chart chart_map(const Classification& cls) {
  Chart ch;
  ch.kind = cls.kind;
  ch.to_normal = cls.to_normal;
  ch.from_normal = cls.from_normal;
  switch (cls.kind) {
    case SurfaceKind::ellipsoid:
      ch.period_u = 2 * kPi;
      ch.period_v = 0;
      ch.v_min = -kPi / 2;
      ch.v_max = kPi / 2;
      break;
    case SurfaceKind::hyperboloid:
      ch.period_u = kPi;
      ch.period_v = kPi;
      ch.v_min = 0;
      ch.v_max = kPi;
      break;
    case SurfaceKind::cone:
      ch.period_u = 2 * kPi;
      ch.period_v = 0;
      ch.v_min = -kPi / 2;
      ch.v_max = kPi / 2;
      break;
  }
  return ch;
}

Vec4 Chart::point(double u, double v) const {
  Vec4 n;
  switch (kind) {
    case SurfaceKind::ellipsoid:
      n << std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v), 1.0;
      break;
    case SurfaceKind::hyperboloid:
      n << std::cos(v - u), std::sin(v - u), std::sin(u + v), std::cos(u + v);
      break;
    case SurfaceKind::cone:
      n << std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::cos(v), std::sin(v);
      break;
  }
  Vec4 x = from_normal * n;
  return x / x.norm();
}

Eigen::Vector2d Chart::uv(const Vec4& x) const {
  Vec4 n = to_normal * x;
  double u = 0, v = 0;
  switch (kind) {
    case SurfaceKind::ellipsoid: {
      if (std::abs(n(3)) < 1e-13 * n.norm())
        throw invalid_input("chart uv: point not on the affine sphere");
      n /= n(3);
      double r = std::hypot(n(0), n(1));
      u = mod_pos(std::atan2(n(1), n(0)), 2 * kPi);
      v = std::atan2(n(2), r);
      break;
    }
    case SurfaceKind::hyperboloid: {
      double alpha = std::atan2(n(1), n(0));  // v - u
      double beta = std::atan2(n(2), n(3));   // u + v
      u = mod_pos(0.5 * (beta - alpha), kPi);
      v = mod_pos(0.5 * (beta + alpha), kPi);
      break;
    }
    case SurfaceKind::cone: {
      if (n(2) < 0) n = -n;
      if (n(2) < 1e-13 * n.norm()) throw invalid_input("chart uv: cone apex has no chart point");
      u = mod_pos(std::atan2(n(1), n(0)), 2 * kPi);
      v = std::atan2(n(3), n(2));
      break;
    }
  }
  return {u, v};
}

double Chart::wrap_du(double du) const {
  double r = std::remainder(du, period_u);
  return r;
}

double Chart::wrap_dv(double dv) const {
  if (period_v <= 0) return dv;
  return std::remainder(dv, period_v);
}

// ───────────────────────── Homology ─────────────────────────

int homology_pairing(const HomologyClass& x, const HomologyClass& y) {
  if (x.kind != y.kind) throw invalid_input("homology_pairing: mixed surface kinds");
  if (x.kind != SurfaceKind::hyperboloid) return 0;
  return x.a * y.b - x.b * y.a;
}

HomologyClass loop_class(const Chart& chart, const std::vector<Eigen::Vector2d>& uv_loop) {
  if (uv_loop.size() < 3) throw invalid_input("loop_class: too few samples");
  double tu = 0, tv = 0;
  for (size_t i = 1; i <= uv_loop.size(); ++i) {
    const auto& prev = uv_loop[i - 1];
    const auto& cur = uv_loop[i % uv_loop.size()];
    tu += chart.wrap_du(cur(0) - prev(0));
    if (chart.v_periodic()) tv += chart.wrap_dv(cur(1) - prev(1));
  }
  HomologyClass cls;
  cls.kind = chart.kind;
  double wu = tu / chart.period_u;
  cls.a = static_cast<int>(std::lround(wu));
  if (std::abs(wu - cls.a) > 0.2)
    throw non_convergence("loop_class: u-winding far from an integer");
  if (chart.v_periodic()) {
    double wv = tv / chart.period_v;
    cls.b = static_cast<int>(std::lround(wv));
    if (std::abs(wv - cls.b) > 0.2)
      throw non_convergence("loop_class: v-winding far from an integer");
  }
  if (chart.kind == SurfaceKind::ellipsoid) cls.a = cls.b = 0;  // H1(S^2) = 0
  return cls;
}

// ───────────────────────── Rulings ─────────────────────────

Rulings rulings(const Classification& cls, const Vec4& p, double tol) {
  Vec4 n = cls.to_normal * p;
  n /= n.norm();
  Rulings out;
  switch (cls.kind) {
    case SurfaceKind::ellipsoid:
      return out;  // no real lines
    case SurfaceKind::hyperboloid: {
      Chart ch = chart_map(cls);
      Eigen::Vector2d uv = ch.uv(p);
      // u-direction line {v = const} and v-direction line {u = const}.
      out.lines.push_back({ch.point(uv(0), uv(1)), ch.point(uv(0) + 0.4, uv(1))});
      out.lines.push_back({ch.point(uv(0), uv(1)), ch.point(uv(0), uv(1) + 0.4)});
      return out;
    }
    case SurfaceKind::cone: {
      double body = std::hypot(std::hypot(n(0), n(1)), n(2));
      if (body < tol) {
        out.infinitely_many = true;  // apex: every generator
        return out;
      }
      Vec4 apex_n(0, 0, 0, 1);
      Vec4 apex = cls.from_normal * apex_n;
      out.lines.push_back({p / p.norm(), apex / apex.norm()});
      return out;
    }
  }
  return out;
}

}  // namespace sepsemi
