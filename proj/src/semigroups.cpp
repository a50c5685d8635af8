#include "sepsemi/semigroups.hpp"

#include <algorithm>
#include <set>

#include "sepsemi/error.hpp"

namespace sepsemi {

namespace {

int vec_sum(const DegreeVector& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

bool dominates(const DegreeVector& v, const DegreeVector& apex) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] < apex[i]) return false;
  return true;
}

bool on_ray(const DegreeVector& v, const DegreeVector& gen) {
  int k = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (gen[i] == 0) {
      if (v[i] != 0) return false;
      continue;
    }
    if (v[i] % gen[i] != 0) return false;
    int ki = v[i] / gen[i];
    if (k == 0) k = ki;
    if (ki != k) return false;
  }
  return k >= 1;
}

// all vectors with entries >= floor elementwise and sum <= bound
void enumerate_above(const DegreeVector& floor, int bound,
                     std::set<DegreeVector>& out) {
  DegreeVector v = floor;
  if (vec_sum(v) > bound) return;
  const int r = static_cast<int>(v.size());
  while (true) {
    out.insert(v);
    int i = 0;
    while (i < r) {
      ++v[i];
      if (vec_sum(v) <= bound) break;
      v[i] = floor[i];
      ++i;
    }
    if (i == r) break;
  }
}

SemigroupDescription full_positive(int r) {
  SemigroupDescription S;
  S.r = r;
  S.cones.push_back(DegreeVector(r, 1));
  return S;
}

}  // namespace

SemigroupDescription table1_description(SurfaceKind kind, int r, int l) {
  SemigroupDescription S;
  S.r = r;
  auto cone121 = [&] { S.cones.push_back({1, 2, 1}); };
  switch (kind) {
    case SurfaceKind::ellipsoid:
      if (r == 3 && l == 3) {
        cone121();
        return S;
      }
      if (r == 5 && l == 5) return full_positive(5);
      break;
    case SurfaceKind::cone:
      if (r == 3 && l == 0) {
        S.finite.push_back({1, 1, 1});
        cone121();
        return S;
      }
      if (r == 3 && l == 2) {
        cone121();
        return S;
      }
      if (r == 5 && l == 4) return full_positive(5);
      break;
    case SurfaceKind::hyperboloid:
      if (r == 1 && l == 0) {
        S.cones.push_back({3});
        return S;
      }
      if (r == 3 && l == 0) return full_positive(3);
      if (r == 3 && l == 2) {
        cone121();
        return S;
      }
      if (r == 5 && l == 4) return full_positive(5);
      break;
  }
  throw invalid_input("table1_description: unknown row");
}

SemigroupDescription theorem2_description(int g) {
  if (g < 1) throw invalid_input("theorem2_description: genus must be >= 1");
  SemigroupDescription S;
  if (g % 2 == 1) {
    S.r = 2;
    int m = (g + 1) / 2;
    S.rays.push_back({1, 1});
    S.cones.push_back({m, m});
  } else {
    S.r = 1;
    S.rays.push_back({2});
    S.cones.push_back({g});
  }
  return S;
}

bool contains_vector(const SemigroupDescription& S, const DegreeVector& v) {
  if (static_cast<int>(v.size()) != S.r)
    throw invalid_input("contains_vector: arity mismatch");
  for (const auto& f : S.finite)
    if (f == v) return true;
  for (const auto& apex : S.cones)
    if (dominates(v, apex)) return true;
  for (const auto& gen : S.rays)
    if (on_ray(v, gen)) return true;
  return false;
}

std::vector<DegreeVector> enumerate_description(const SemigroupDescription& S,
                                                int bound) {
  std::set<DegreeVector> out;
  for (const auto& f : S.finite)
    if (vec_sum(f) <= bound) out.insert(f);
  for (const auto& apex : S.cones) enumerate_above(apex, bound, out);
  for (const auto& gen : S.rays) {
    int gs = vec_sum(gen);
    if (gs == 0) continue;
    for (int k = 1; k * gs <= bound; ++k) {
      DegreeVector v(gen.size());
      for (size_t i = 0; i < gen.size(); ++i) v[i] = k * gen[i];
      out.insert(v);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<DegreeVector> closure_up_to_bound(const RealizationLedger& ledger,
                                              int bound) {
  if (ledger.entries.empty())
    throw invalid_input("closure_up_to_bound: empty ledger");
  std::set<DegreeVector> S;
  for (const auto& e : ledger.entries) {
    if (static_cast<int>(e.d.size()) != ledger.r)
      throw invalid_input("closure_up_to_bound: arity mismatch in ledger");
    if (vec_sum(e.d) <= bound) S.insert(e.d);
    if (e.non_special) enumerate_above(e.d, bound, S);
  }
  // fixpoint under addition
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<DegreeVector> cur(S.begin(), S.end());
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = i; j < cur.size(); ++j) {
        if (vec_sum(cur[i]) + vec_sum(cur[j]) > bound) continue;
        DegreeVector w(cur[i].size());
        for (size_t k = 0; k < w.size(); ++k) w[k] = cur[i][k] + cur[j][k];
        if (S.insert(w).second) grew = true;
      }
  }
  return {S.begin(), S.end()};
}

ComparisonReport compare_up_to_bound(const SemigroupDescription& S,
                                     const std::vector<DegreeVector>& T, int bound) {
  ComparisonReport rep;
  std::set<DegreeVector> tset;
  for (const auto& v : T)
    if (vec_sum(v) <= bound) tset.insert(v);
  for (const auto& v : enumerate_description(S, bound))
    if (!tset.count(v)) rep.only_in_description.push_back(v);
  for (const auto& v : tset)
    if (!contains_vector(S, v)) rep.only_in_set.push_back(v);
  return rep;
}

}  // namespace sepsemi
