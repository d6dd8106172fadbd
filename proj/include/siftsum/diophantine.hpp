#pragma once

#include <cstdint>
#include <vector>

#include "siftsum/angle.hpp"

namespace siftsum {

struct Convergent {
  uint64_t a = 0;
  uint64_t q = 1;
};

struct ContinuedFraction {
  std::vector<uint64_t> quotients;     // [a0; a1, a2, ...], a0 = 0
  std::vector<Convergent> convergents; // same length, lowest terms
};

/// Partial quotients and convergents of alpha.  Rational angles terminate
/// exactly; fixed-point angles stop before the 2^-128 truncation can distort
/// a quotient (denominators stay below 2^48, so |alpha - a/q| ~ 1/q^2 is
/// still at least 2^-32 above the input precision).
ContinuedFraction continued_fraction(const Angle& alpha, int max_terms = 64);

struct ApproxResult {
  uint64_t a = 0;
  uint64_t q = 1;
  double err = 0;      // |alpha - a/q|
  double quality = 0;  // q^2 * err, < 1
};

/// Last convergent with q <= Q; satisfies |alpha - a/q| < 1/(qQ).
ApproxResult best_approximation(const Angle& alpha, uint64_t Q);

/// sum_{n <= X} min(Y, 1/||alpha n||), with min(Y, 1/0) = Y.
double vinogradov_sum(const Angle& alpha, double X, double Y);
double vinogradov_sum_serial(const Angle& alpha, double X, double Y);
double vinogradov_bound_rhs(double X, double Y, double q);

}  // namespace siftsum
