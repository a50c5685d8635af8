#pragma once

#include <string>
#include <vector>

#include "sepsemi/morphisms.hpp"
#include "sepsemi/quadric.hpp"

namespace sepsemi {

// ──────────────────────────────────────────────────────────────────────────
// Symbolic degree-vector semigroups: finite unions of isolated vectors,
// shifted cones v + N0^r, and rays k*v (k >= 1). All comparisons are bounded
// enumerations; the library never claims unbounded equality.
// ──────────────────────────────────────────────────────────────────────────

struct SemigroupDescription {
  int r = 0;
  std::vector<DegreeVector> finite;  // isolated members
  std::vector<DegreeVector> cones;   // apex + N0^r
  std::vector<DegreeVector> rays;    // {k*v : k >= 1}
};

/** Expected semigroup for a genus-4 curve of topology (r, l) on the surface. */
SemigroupDescription table1_description(SurfaceKind kind, int r, int l);

/** Expected semigroup for a non-maximal hyperelliptic curve of genus g. */
SemigroupDescription theorem2_description(int g);

bool contains_vector(const SemigroupDescription& S, const DegreeVector& v);

/** All members with entry sum <= bound, sorted lexicographically. */
std::vector<DegreeVector> enumerate_description(const SemigroupDescription& S,
                                                int bound);

struct LedgerEntry {
  DegreeVector d;
  std::string certificate_id;
  bool non_special = false;  // set only with a rank-4 speciality certificate
};

struct RealizationLedger {
  int r = 0;
  std::vector<LedgerEntry> entries;
};

/**
 * Smallest set containing the ledger vectors, closed under addition, and
 * containing v + N0^r for every non-special entry v; truncated to entry sum
 * <= bound. Sorted lexicographically.
 */
std::vector<DegreeVector> closure_up_to_bound(const RealizationLedger& ledger,
                                              int bound);

struct ComparisonReport {
  std::vector<DegreeVector> only_in_description;
  std::vector<DegreeVector> only_in_set;
  bool equal() const {
    return only_in_description.empty() && only_in_set.empty();
  }
};

ComparisonReport compare_up_to_bound(const SemigroupDescription& S,
                                     const std::vector<DegreeVector>& T, int bound);

}  // namespace sepsemi
