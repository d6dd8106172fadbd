#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "siftsum/angle.hpp"
#include "siftsum/report.hpp"
#include "siftsum/sieve.hpp"

namespace siftsum {

enum class Window { Full, Dyadic };  // [1, N] or (N/2, N]

struct SumResult {
  std::complex<double> value;
  uint64_t n_limit = 0;
  Angle angle = Angle::rational(0, 1);
  Window window = Window::Full;
  uint64_t terms = 0;     // nonzero summands
  double err_bound = 0;   // accumulated rounding bound, <= terms * 2^-44
};

/// S = sum over members n of the window of e(n^2 alpha).  Deterministic: the
/// fixed chunk grid and pairwise combination give bit-identical values for
/// every worker count.  Throws DomainError if N exceeds the sequence limit
/// and InvariantViolation if |S| exceeds the term count.
SumResult eval_S(const SievedSequence& seq, const Angle& alpha, uint64_t N,
                 Window window = Window::Full);

/// Single-accumulator serial reference for eval_S.
SumResult eval_S_serial(const SievedSequence& seq, const Angle& alpha,
                        uint64_t N, Window window = Window::Full);

struct HAverage {
  double total = 0;                // sum_{h <= H} |S(h alpha; N)|
  std::vector<double> abs_values;  // |S(h alpha; N)|, h = 1..H
};

HAverage eval_S_h_avg(const SievedSequence& seq, const Angle& alpha,
                      uint64_t H, uint64_t N, Window window = Window::Full);

/// (N/sqrt(log N)) * N^eps * (q^-1/4 + N^-1/2 q^1/4 + N^-1/8).
double theorem1_rhs(double N, double q, double eps);
/// (N/sqrt(log N)) * H (Nq)^eps * (q^-1/4 + N^-1/8 + H^-1/4 N^-1/2 q^1/4).
double theorem2_rhs(double N, double q, double H, double eps);

enum class TheoremKind { One, Two };

/// One BoundReport per (N[, H]) with (a, q) = best_approximation(alpha, N).
std::vector<BoundReport> run_theorem_experiment(
    TheoremKind kind, const SievedSequence& seq, const Angle& alpha,
    const std::vector<uint64_t>& N_list, const std::vector<uint64_t>& H_list,
    double eps);

}  // namespace siftsum
