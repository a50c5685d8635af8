#pragma once

#include <complex>
#include <vector>

#include "sepsemi/forms.hpp"

namespace sepsemi {

/**
 * All complex roots of a polynomial, via the companion-matrix eigenvalues
 * followed by one Newton step against the original coefficients. Intended
 * for the degrees this project produces (<= 12 after deflation).
 * Throws invalid_input on the zero polynomial and non_convergence when the
 * polish step diverges.
 */
std::vector<cplx> univariate_roots(const RPoly& p);
std::vector<cplx> univariate_roots(const CPoly& p);

struct RootPartition {
  std::vector<double> real;                    // one entry per real root
  std::vector<std::pair<cplx, cplx>> pairs;    // conjugate pairs, Im > 0 first
  double max_residual_im = 0.0;                // largest |Im| among roots kept real
};

/**
 * Split roots of a REAL polynomial into real roots and conjugate pairs.
 * A root is real when |Im| < tol_im * (1 + |root|). Throws when the leftover
 * imaginary roots cannot be matched into conjugate pairs at that tolerance.
 */
RootPartition partition_roots(const std::vector<cplx>& roots, double tol_im = 1e-7);

}  // namespace sepsemi
