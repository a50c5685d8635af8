#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sepsemi/error.hpp"
#include "sepsemi/semigroups.hpp"

using namespace sepsemi;

namespace {

RealizationLedger ledger3(std::vector<std::pair<DegreeVector, bool>> rows) {
  RealizationLedger L;
  L.r = static_cast<int>(rows.front().first.size());
  for (auto& [d, ns] : rows) L.entries.push_back({d, "test", ns});
  return L;
}

}  // namespace

TEST_CASE("row descriptions and membership") {
  SemigroupDescription e33 = table1_description(SurfaceKind::ellipsoid, 3, 3);
  CHECK(contains_vector(e33, {1, 2, 1}));
  CHECK(contains_vector(e33, {2, 5, 3}));
  CHECK_FALSE(contains_vector(e33, {1, 1, 1}));
  CHECK_FALSE(contains_vector(e33, {1, 1, 5}));
  CHECK_THROWS_AS(contains_vector(e33, {1, 2}), Error);

  SemigroupDescription c30 = table1_description(SurfaceKind::cone, 3, 0);
  CHECK(contains_vector(c30, {1, 1, 1}));
  CHECK(contains_vector(c30, {1, 2, 1}));
  CHECK(contains_vector(c30, {3, 2, 4}));
  CHECK_FALSE(contains_vector(c30, {1, 1, 2}));
  CHECK_FALSE(contains_vector(c30, {2, 1, 1}));
  CHECK_FALSE(contains_vector(c30, {1, 1, 3}));

  SemigroupDescription h10 = table1_description(SurfaceKind::hyperboloid, 1, 0);
  CHECK(contains_vector(h10, {3}));
  CHECK(contains_vector(h10, {7}));
  CHECK_FALSE(contains_vector(h10, {2}));

  SemigroupDescription h30 = table1_description(SurfaceKind::hyperboloid, 3, 0);
  CHECK(contains_vector(h30, {1, 1, 1}));
  CHECK(contains_vector(h30, {1, 1, 2}));
  CHECK_FALSE(contains_vector(h30, {0, 1, 2}));

  for (SurfaceKind k :
       {SurfaceKind::ellipsoid, SurfaceKind::cone, SurfaceKind::hyperboloid}) {
    SemigroupDescription m = table1_description(
        k, 5, k == SurfaceKind::ellipsoid ? 5 : 4);
    CHECK(contains_vector(m, {1, 1, 1, 1, 1}));
    CHECK_FALSE(contains_vector(m, {1, 0, 1, 1, 1}));
  }
  CHECK_THROWS_AS(table1_description(SurfaceKind::ellipsoid, 3, 1), Error);
}

TEST_CASE("symmetric rows are invariant under reversing the vector") {
  for (auto [kind, l] : std::vector<std::pair<SurfaceKind, int>>{
           {SurfaceKind::ellipsoid, 3},
           {SurfaceKind::cone, 2},
           {SurfaceKind::hyperboloid, 2}}) {
    SemigroupDescription S = table1_description(kind, 3, l);
    for (const auto& v : enumerate_description(S, 9)) {
      DegreeVector w(v.rbegin(), v.rend());
      CHECK(contains_vector(S, w));
    }
  }
}

TEST_CASE("hyperelliptic descriptions") {
  SemigroupDescription g3 = theorem2_description(3);
  CHECK(contains_vector(g3, {1, 1}));
  CHECK(contains_vector(g3, {3, 3}));
  CHECK(contains_vector(g3, {2, 2}));
  CHECK(contains_vector(g3, {2, 5}));
  CHECK_FALSE(contains_vector(g3, {1, 2}));

  SemigroupDescription g4 = theorem2_description(4);
  CHECK(contains_vector(g4, {2}));
  CHECK(contains_vector(g4, {4}));
  CHECK(contains_vector(g4, {5}));
  CHECK(contains_vector(g4, {6}));
  CHECK_FALSE(contains_vector(g4, {3}));
  CHECK_FALSE(contains_vector(g4, {1}));

  // 2N ∪ (2+N0) collapses to 2+N0
  SemigroupDescription g2 = theorem2_description(2);
  auto got = enumerate_description(g2, 6);
  std::vector<DegreeVector> expect = {{2}, {3}, {4}, {5}, {6}};
  CHECK(got == expect);

  CHECK_THROWS_AS(theorem2_description(0), Error);
}

TEST_CASE("membership agrees with enumeration") {
  for (int g : {2, 3, 4, 5}) {
    SemigroupDescription S = theorem2_description(g);
    auto members = enumerate_description(S, 12);
    for (const auto& v : members) CHECK(contains_vector(S, v));
  }
  SemigroupDescription c30 = table1_description(SurfaceKind::cone, 3, 0);
  auto members = enumerate_description(c30, 12);
  for (const auto& v : members) CHECK(contains_vector(c30, v));
  CHECK(std::count(members.begin(), members.end(), DegreeVector{1, 1, 1}) == 1);
}

TEST_CASE("descriptions are closed under addition at bound 10") {
  std::vector<SemigroupDescription> all = {
      table1_description(SurfaceKind::ellipsoid, 3, 3),
      table1_description(SurfaceKind::cone, 3, 0),
      table1_description(SurfaceKind::hyperboloid, 1, 0),
      theorem2_description(3), theorem2_description(4)};
  for (const auto& S : all) {
    auto members = enumerate_description(S, 10);
    for (const auto& u : members)
      for (const auto& v : members) {
        DegreeVector w(u.size());
        int s = 0;
        for (size_t i = 0; i < u.size(); ++i) {
          w[i] = u[i] + v[i];
          s += w[i];
        }
        if (s <= 10) CHECK(contains_vector(S, w));
      }
  }
}

TEST_CASE("closure of a single non-special vector is its cone") {
  RealizationLedger L = ledger3({{{1, 2, 1}, true}});
  auto got = closure_up_to_bound(L, 8);
  SemigroupDescription cone;
  cone.r = 3;
  cone.cones.push_back({1, 2, 1});
  CHECK(compare_up_to_bound(cone, got, 8).equal());
}

TEST_CASE("closure without non-special entries only sums") {
  RealizationLedger L = ledger3({{{1, 1, 1}, false}});
  auto got = closure_up_to_bound(L, 8);
  std::vector<DegreeVector> expect = {{1, 1, 1}, {2, 2, 2}};
  CHECK(got == expect);
}

TEST_CASE("planned cone ledger reproduces its row at bound 8") {
  RealizationLedger L = ledger3({{{1, 1, 1}, false},
                                 {{1, 2, 1}, true},
                                 {{2, 2, 1}, true},
                                 {{1, 2, 2}, true}});
  auto got = closure_up_to_bound(L, 8);
  SemigroupDescription row = table1_description(SurfaceKind::cone, 3, 0);
  ComparisonReport rep = compare_up_to_bound(row, got, 8);
  CHECK(rep.equal());

  // dropping the cone generator leaves a visible hole
  RealizationLedger L2 = ledger3({{{1, 1, 1}, false},
                                  {{2, 2, 1}, true},
                                  {{1, 2, 2}, true}});
  ComparisonReport rep2 = compare_up_to_bound(row, closure_up_to_bound(L2, 8), 8);
  CHECK_FALSE(rep2.equal());
  CHECK(std::count(rep2.only_in_description.begin(), rep2.only_in_description.end(),
                   DegreeVector{1, 2, 1}) == 1);
}

TEST_CASE("comparison lists the low vectors missing from a shifted cone") {
  SemigroupDescription all3 = table1_description(SurfaceKind::hyperboloid, 3, 0);
  SemigroupDescription e33 = table1_description(SurfaceKind::ellipsoid, 3, 3);
  ComparisonReport rep = compare_up_to_bound(all3, enumerate_description(e33, 4), 4);
  for (DegreeVector v : {DegreeVector{1, 1, 1}, DegreeVector{1, 1, 2},
                         DegreeVector{2, 1, 1}})
    CHECK(std::count(rep.only_in_description.begin(), rep.only_in_description.end(),
                     v) == 1);
  CHECK(rep.only_in_set.empty());
}

TEST_CASE("hyperelliptic ledgers reproduce the theorem at bound 10") {
  RealizationLedger g3;
  g3.r = 2;
  g3.entries = {{{1, 1}, "proj", false}, {{2, 2}, "pencil", true}};
  CHECK(compare_up_to_bound(theorem2_description(3), closure_up_to_bound(g3, 10), 10)
            .equal());

  RealizationLedger g4;
  g4.r = 1;
  g4.entries = {{{2}, "proj", false}, {{5}, "pencil", true}};
  CHECK(compare_up_to_bound(theorem2_description(4), closure_up_to_bound(g4, 10), 10)
            .equal());

  RealizationLedger g2;
  g2.r = 1;
  g2.entries = {{{2}, "proj", false}, {{3}, "pencil", true}};
  CHECK(compare_up_to_bound(theorem2_description(2), closure_up_to_bound(g2, 10), 10)
            .equal());

  RealizationLedger g5;
  g5.r = 2;
  g5.entries = {{{1, 1}, "proj", false}, {{3, 3}, "pencil", true}};
  CHECK(compare_up_to_bound(theorem2_description(5), closure_up_to_bound(g5, 10), 10)
            .equal());
}
