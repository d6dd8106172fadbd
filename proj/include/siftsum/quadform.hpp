#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "siftsum/angle.hpp"
#include "siftsum/report.hpp"

namespace siftsum {

enum class CountMethod { Bruteforce, Hashed };

struct FormCountResult {
  uint64_t count = 0;
  std::map<std::string, double> box;
  bool coprimality = false;
  CountMethod method = CountMethod::Bruteforce;
};

/// Solutions of a x^2 + b y^2 = c with 1 <= x, y <= P.  abc must be nonzero.
/// Hashed: enumerate x, decide y by exact integer square root.
FormCountResult count_binary(int64_t a, int64_t b, int64_t c, int64_t P,
                             CountMethod method = CountMethod::Hashed);

/// Solutions of h1 m1^2 - h2 m2^2 = j with H < h_i <= 2H, V < m_i <= 2V.
/// j = 0 is allowed (diagonal diagnostics).
FormCountResult count_R(int64_t j, int64_t H, int64_t V,
                        CountMethod method = CountMethod::Hashed);

/// Solutions of h1 m1^2 + h2 m2^2 = h3 m3^2 + h4 m4^2 with h in [-H,H]^4,
/// m in [-P,P]^4, and gcd(m1..m4) = 1 when coprime is set.  The hashed route
/// resolves coprimality by Moebius inversion over the common divisor of the
/// m_i, with the all-zero m-tuple (gcd 0) removed explicitly: it satisfies
/// the equation for every h-tuple and would otherwise enter once per d.
FormCountResult count_M3(int64_t H, int64_t P, bool coprime,
                         CountMethod method = CountMethod::Hashed);

/// H^3 P^2 + H^5 P^(2/3) + (HP)^(2+eps).
double m3_bound_rhs(double H, double P, double eps);

struct BhbBound {
  double delta_q = 0;    // h1 h2 h3 h4
  double norm_q = 0;     // max h_i
  double delta_bad = 0;  // product of p^e || delta_q with e >= 2
  double rhs = 0;
  bool hypothesis_ok = false;  // delta_bad^20 <= P
};

/// Bound components for the fixed-coefficient quaternary count:
/// delta_bad^(1/4) (||Q||^4/dQ)^(5/8) (P^2/dQ^(1/4) + P^(4/3))
///   log(2P) log(2 dQ) delta_bad^eps.
BhbBound bhb_bound_rhs(int64_t h1, int64_t h2, int64_t h3, int64_t h4, double P,
                       double eps);

/// LHS = sum_{j != 0} R(j; H)^2 over the dyadic windows h in (H, 2H],
/// m in (V, 2V] with V = N/(2W); RHS = H^3 (N/W)^(2+eps) + H^5 (N/W)^(2/3).
BoundReport bound4_check(uint64_t N, uint64_t W, uint64_t H, double eps);

}  // namespace siftsum
