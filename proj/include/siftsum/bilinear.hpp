#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "siftsum/angle.hpp"
#include "siftsum/sieve.hpp"

namespace siftsum {

/// Bounded coefficient sequence on an integer window [lo, hi].  Values read
/// outside the window are 0.  Every stored value must satisfy
/// |value| <= sup_bound + 1e-12.
class CoeffSeq {
 public:
  CoeffSeq(int64_t lo, int64_t hi, double sup_bound);
  static CoeffSeq constant(int64_t lo, int64_t hi, std::complex<double> c);

  void set(int64_t i, std::complex<double> v);
  std::complex<double> at(int64_t i) const {
    if (i < lo_ || i > hi_) return {0, 0};
    if (constant_) return const_value_;
    return values_[static_cast<size_t>(i - lo_)];
  }
  double sup_bound() const { return sup_bound_; }
  int64_t lo() const { return lo_; }
  int64_t hi() const { return hi_; }

 private:
  int64_t lo_;
  int64_t hi_;
  double sup_bound_;
  bool constant_ = false;
  std::complex<double> const_value_{0, 0};
  std::vector<std::complex<double>> values_;
};

struct DecompositionParams {
  uint64_t N = 0;
  uint64_t M = 2;
  uint64_t M0 = 2;
  double z = 2;
  double Z = 2;
  void validate() const;  // max(2, z) <= Z <= N and 2 <= M0 <= M
};

/// Exact sieve identity, both sides:
///   lhs = sum over n coprime to the class primes below z of u_n,
///   rhs = sum over squarefree divisors d of their product of
///         mu(d) * sum_{n = 0 mod d} u_n.
/// Throws CapError when more than 20 primes lie below z in the class.
std::pair<std::complex<double>, std::complex<double>> legendre_identity_check(
    const CoeffSeq& u, double z, PrimeClass cls);

struct DecompositionTerms {
  std::complex<double> s1{0, 0}, s2{0, 0}, s3{0, 0};
  double t1 = 0, t2 = 0, t3 = 0;  // trivial bounds (term counts x sup bounds)
};

/// The three window-restricted sum shapes of the sieve decomposition, over
/// (N/2, N] with the 1 mod 4 congruence, at a single coefficient slice:
///   s1: sum_{d < M, d | P(z)} mu(d) sum_{n = 0 (d)} e(alpha n^2)
///   s2: sum_{z <= p <= sqrt(N), p = 3 (4)} sum_m rho(m) e(alpha (mp)^2)
///   s3: sum_{M0 <= l <= M0 z, k l >= M} a_l b_k e(alpha (kl)^2)
DecompositionTerms eval_decomposition_terms(const DecompositionParams& params,
                                            const Angle& alpha,
                                            const CoeffSeq& rho,
                                            const CoeffSeq& alpha_l,
                                            const CoeffSeq& beta_k);

struct DecompositionCoeffs {
  CoeffSeq rho, alpha_l, beta_k;
};
/// rho = 1, alpha_l = mu(l) [l | P(z)], beta_k = 1.
DecompositionCoeffs default_decomposition_coeffs(const DecompositionParams& p);

/// w0 = (1 - e(n/2))/2 and w1 = (e(n/4) - e(3n/4))/(2i): the odd indicator
/// and the nonprincipal character mod 4, exactly.
std::pair<std::complex<double>, std::complex<double>> char4_expansion(int64_t n);

enum class Congruence { None, ProductOneMod4 };

/// sum_{V < m <= V'} a_m sum_{W < n <= W', N/2 < mn <= N [, mn = 1 (4)]}
/// e(alpha (mn)^2), with V' = min(2V, N), W' = min(2W, N).
std::complex<double> type_I_sum(const CoeffSeq& a, const Angle& alpha,
                                uint64_t V, uint64_t W, uint64_t N,
                                Congruence cong);

struct HAbsSum {
  double total = 0;
  std::vector<double> abs_values;
  std::vector<uint64_t> h_values;
};

HAbsSum type_I_sum_h_avg(const CoeffSeq& a, const Angle& alpha, uint64_t V,
                         uint64_t W, uint64_t N, uint64_t H, Congruence cong);

double linear_rhs(double N, double V, double q, double eps = 0);
double hlinear_rhs(double N, double V, double q, double H, double eps = 0);

struct TypeIIResult {
  std::vector<uint64_t> h_values;  // [H, 2H); degenerates to {1} at H = 1
  std::vector<std::complex<double>> values;
  double abs_total = 0;
};

/// Bilinear sums with the mn = 1 (4) congruence always applied, per h in the
/// dyadic window [H, 2H) (the single-sum case is H = 1).
TypeIIResult type_II_sum(const CoeffSeq& a, const CoeffSeq& b,
                         const Angle& alpha, uint64_t V, uint64_t W, uint64_t N,
                         uint64_t H);

double bilinear_rhs_1(double N, double W, double H, double q, double eps = 0);
double bilinear_rhs_2(double N, double W, double H, double q, double eps = 0);
double bilinear_rhs_3(double N, double W, double H, double q, double eps = 0);
double bilinear_rhs_min(double N, double W, double H, double q, double eps = 0);
double bilinear1_rhs(double N, double W, double q, double eps = 0);

/// Which of the three bilinear bounds is known smallest: 3 when W >= V and
/// H <= (N/W)^(2/3), else 2 when W >= V, else 1.
int choose_bilinear_bound(double V, double W, double H, double N);

/// |sum_{lo < n <= hi} e(f(n))|^2 evaluated directly, and re-expanded over
/// the difference variable k.  Range length capped at 10^4.
std::pair<double, double> weyl_difference_check(
    const std::function<double(int64_t)>& f, int64_t lo, int64_t hi);

struct KernelResult {
  double estimate = 0;
  bool indicator = false;
  double err_allowance = 0;
};

/// Smoothed window indicator: integral over [-T, T] of
/// e^(i beta t) (sin(xt) - sin(xt/2)) / (pi t) dt by adaptive Simpson on
/// dyadic segments (abs tolerance 1e-8), against the exact [x/2 < beta <= x].
/// beta must stay 1e-6 * x away from both breakpoints.
KernelResult fourier_cutoff_kernel(double x, double T, double beta);

/// integral over [-T, T] of |(sin(xt) - sin(xt/2)) / (pi t)| dt.
double kernel_l1(double x, double T);

}  // namespace siftsum
