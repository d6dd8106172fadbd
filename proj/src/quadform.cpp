#include "siftsum/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "siftsum/parallel.hpp"
#include "siftsum/sieve.hpp"

namespace siftsum {

namespace {

int64_t isqrt_i64(int64_t n) {
  return n < 0 ? -1 : static_cast<int64_t>(isqrt_u64(static_cast<uint64_t>(n)));
}

// multiset of h*m^2 over the dyadic windows (H, 2H], (V, 2V]
std::unordered_map<int64_t, int64_t> hm2_counts(int64_t h_lo, int64_t h_hi,
                                                int64_t m_lo, int64_t m_hi) {
  std::unordered_map<int64_t, int64_t> counts;
  for (int64_t h = h_lo; h <= h_hi; ++h)
    for (int64_t m = m_lo; m <= m_hi; ++m) ++counts[h * m * m];
  return counts;
}

uint64_t m3_count_hashed_nocop(int64_t H, int64_t P) {
  std::unordered_map<int64_t, int64_t> counts;
  for (int64_t h1 = -H; h1 <= H; ++h1)
    for (int64_t m1 = -P; m1 <= P; ++m1) {
      int64_t v1 = h1 * m1 * m1;
      for (int64_t h2 = -H; h2 <= H; ++h2)
        for (int64_t m2 = -P; m2 <= P; ++m2) ++counts[v1 + h2 * m2 * m2];
    }
  uint64_t total = 0;
  for (const auto& [v, c] : counts)
    total += static_cast<uint64_t>(c) * static_cast<uint64_t>(c);
  return total;
}

uint64_t m3_count_brute(int64_t H, int64_t P, bool coprime) {
  const int64_t hs = 2 * H + 1;
  uint64_t total = 0;
  const int nthreads = thread_count();
#pragma omp parallel for schedule(dynamic) reduction(+ : total) num_threads(nthreads)
  for (int64_t m1 = -P; m1 <= P; ++m1) {
    for (int64_t m2 = -P; m2 <= P; ++m2)
      for (int64_t m3 = -P; m3 <= P; ++m3)
        for (int64_t m4 = -P; m4 <= P; ++m4) {
          if (coprime) {
            int64_t g = std::gcd(std::gcd(std::abs(m1), std::abs(m2)),
                                 std::gcd(std::abs(m3), std::abs(m4)));
            if (g != 1) continue;
          }
          const int64_t s1 = m1 * m1, s2 = m2 * m2, s3 = m3 * m3, s4 = m4 * m4;
          // enumerate (h1, h2, h3), solve h4 * s4 = h1 s1 + h2 s2 - h3 s3
          for (int64_t h1 = -H; h1 <= H; ++h1)
            for (int64_t h2 = -H; h2 <= H; ++h2) {
              const int64_t v = h1 * s1 + h2 * s2;
              for (int64_t h3 = -H; h3 <= H; ++h3) {
                const int64_t r = v - h3 * s3;
                if (s4 == 0) {
                  if (r == 0) total += static_cast<uint64_t>(hs);
                } else if (r % s4 == 0) {
                  const int64_t h4 = r / s4;
                  if (h4 >= -H && h4 <= H) ++total;
                }
              }
            }
        }
  }
  return total;
}

}  // namespace

FormCountResult count_binary(int64_t a, int64_t b, int64_t c, int64_t P,
                             CountMethod method) {
  if (a == 0 || b == 0 || c == 0)
    throw DomainError("count_binary: coefficients must be nonzero");
  if (P < 1) throw DomainError("count_binary: P must be positive");
  if (static_cast<double>(std::abs(a)) * P * P +
          static_cast<double>(std::abs(b)) * P * P >
      0x1p62)
    throw DomainError("count_binary: |a|P^2 + |b|P^2 out of range");
  FormCountResult out;
  out.method = method;
  out.box = {{"a", static_cast<double>(a)},
             {"b", static_cast<double>(b)},
             {"c", static_cast<double>(c)},
             {"P", static_cast<double>(P)}};
  uint64_t count = 0;
  if (method == CountMethod::Bruteforce) {
    for (int64_t x = 1; x <= P; ++x)
      for (int64_t y = 1; y <= P; ++y)
        if (a * x * x + b * y * y == c) ++count;
  } else {
    for (int64_t x = 1; x <= P; ++x) {
      int64_t r = c - a * x * x;
      if (r % b != 0) continue;
      int64_t ysq = r / b;
      if (ysq < 1) continue;
      int64_t y = isqrt_i64(ysq);
      if (y * y == ysq && y >= 1 && y <= P) ++count;
    }
  }
  out.count = count;
  return out;
}

FormCountResult count_R(int64_t j, int64_t H, int64_t V, CountMethod method) {
  if (H < 1 || V < 1) throw DomainError("count_R: H, V must be positive");
  if (8.0 * static_cast<double>(H) * static_cast<double>(V) *
          static_cast<double>(V) >
      0x1p62)
    throw DomainError("count_R: 2H (2V)^2 out of range");
  FormCountResult out;
  out.method = method;
  out.box = {{"j", static_cast<double>(j)},
             {"H", static_cast<double>(H)},
             {"V", static_cast<double>(V)}};
  uint64_t count = 0;
  if (method == CountMethod::Bruteforce) {
    for (int64_t h1 = H + 1; h1 <= 2 * H; ++h1)
      for (int64_t m1 = V + 1; m1 <= 2 * V; ++m1)
        for (int64_t h2 = H + 1; h2 <= 2 * H; ++h2)
          for (int64_t m2 = V + 1; m2 <= 2 * V; ++m2)
            if (h1 * m1 * m1 - h2 * m2 * m2 == j) ++count;
  } else {
    auto counts = hm2_counts(H + 1, 2 * H, V + 1, 2 * V);
    for (const auto& [v, c] : counts) {
      auto it = counts.find(v - j);
      if (it != counts.end())
        count += static_cast<uint64_t>(c) * static_cast<uint64_t>(it->second);
    }
  }
  out.count = count;
  return out;
}

FormCountResult count_M3(int64_t H, int64_t P, bool coprime, CountMethod method) {
  if (H < 0 || P < 0) throw DomainError("count_M3: H, P must be nonnegative");
  if (H * P > 10000) throw CapError("count_M3: desk cap H*P <= 1e4 exceeded");
  FormCountResult out;
  out.method = method;
  out.coprimality = coprime;
  out.box = {{"H", static_cast<double>(H)}, {"P", static_cast<double>(P)}};
  if (method == CountMethod::Bruteforce) {
    out.count = m3_count_brute(H, P, coprime);
    return out;
  }
  if (!coprime) {
    out.count = m3_count_hashed_nocop(H, P);
    return out;
  }
  // Moebius over the common divisor d of the m_i; scaling m = d m' cancels
  // d^2 from both sides, leaving the same count in the box P/d.  The all-zero
  // m-tuple (gcd 0, equation always satisfied) enters every d term, so its
  // (2H+1)^4 h-tuples times the Mertens sum are removed at the end.
  std::vector<int8_t> mu = moebius_upto(static_cast<uint64_t>(std::max<int64_t>(P, 1)));
  __int128 total = 0;
  int64_t mertens = 0;
  for (int64_t d = 1; d <= std::max<int64_t>(P, 1); ++d) {
    if (d > P && P > 0) break;
    if (mu[static_cast<size_t>(d)] == 0) continue;
    mertens += mu[static_cast<size_t>(d)];
    total += static_cast<__int128>(mu[static_cast<size_t>(d)]) *
             static_cast<__int128>(m3_count_hashed_nocop(H, P / d));
  }
  const int64_t hs = 2 * H + 1;
  total -= static_cast<__int128>(mertens) * hs * hs * hs * hs;
  out.count = static_cast<uint64_t>(total);
  return out;
}

double m3_bound_rhs(double H, double P, double eps) {
  return H * H * H * P * P + std::pow(H, 5) * std::pow(P, 2.0 / 3.0) +
         std::pow(H * P, 2.0 + eps);
}

BhbBound bhb_bound_rhs(int64_t h1, int64_t h2, int64_t h3, int64_t h4, double P,
                       double eps) {
  for (int64_t h : {h1, h2, h3, h4})
    if (h < 1) throw DomainError("bhb_bound_rhs: coefficients must be positive");
  // merge prime factorizations of the four coefficients
  std::map<uint64_t, int> exponents;
  for (int64_t h : {h1, h2, h3, h4}) {
    uint64_t v = static_cast<uint64_t>(h);
    for (uint64_t p = 2; p * p <= v; ++p)
      while (v % p == 0) {
        ++exponents[p];
        v /= p;
      }
    if (v > 1) ++exponents[v];
  }
  BhbBound out;
  out.delta_q = static_cast<double>(h1) * h2 * h3 * h4;
  out.norm_q = static_cast<double>(std::max({h1, h2, h3, h4}));
  out.delta_bad = 1;
  for (const auto& [p, e] : exponents)
    if (e >= 2) out.delta_bad *= std::pow(static_cast<double>(p), e);
  out.rhs = std::pow(out.delta_bad, 0.25) *
            std::pow(std::pow(out.norm_q, 4) / out.delta_q, 0.625) *
            (P * P / std::pow(out.delta_q, 0.25) + std::pow(P, 4.0 / 3.0)) *
            std::log(2 * P) * std::log(2 * out.delta_q) *
            std::pow(out.delta_bad, eps);
  out.hypothesis_ok = 20 * std::log(out.delta_bad) <= std::log(P);
  return out;
}

BoundReport bound4_check(uint64_t N, uint64_t W, uint64_t H, double eps) {
  if (W == 0 || H == 0) throw DomainError("bound4_check: W, H must be positive");
  const double V = static_cast<double>(N) / (2.0 * static_cast<double>(W));
  const int64_t m_lo = static_cast<int64_t>(std::floor(V)) + 1;
  const int64_t m_hi = static_cast<int64_t>(std::floor(2 * V));
  const int64_t h_lo = static_cast<int64_t>(H) + 1;
  const int64_t h_hi = 2 * static_cast<int64_t>(H);
  double lhs = 0;
  if (m_hi >= m_lo) {
    size_t pairs = static_cast<size_t>(h_hi - h_lo + 1) *
                   static_cast<size_t>(m_hi - m_lo + 1);
    if (pairs > 200000) throw CapError("bound4_check: window too large");
    auto counts = hm2_counts(h_lo, h_hi, m_lo, m_hi);
    std::unordered_map<int64_t, int64_t> r;
    for (const auto& [v1, c1] : counts)
      for (const auto& [v2, c2] : counts) r[v1 - v2] += c1 * c2;
    for (const auto& [j, rj] : r)
      if (j != 0) lhs += static_cast<double>(rj) * static_cast<double>(rj);
  }
  const double ratio_base = static_cast<double>(N) / static_cast<double>(W);
  const double rhs = std::pow(static_cast<double>(H), 3) * std::pow(ratio_base, 2 + eps) +
                     std::pow(static_cast<double>(H), 5) * std::pow(ratio_base, 2.0 / 3.0);
  return make_report("bound4", lhs, rhs,
                     {{"N", static_cast<double>(N)},
                      {"W", static_cast<double>(W)},
                      {"H", static_cast<double>(H)},
                      {"eps", eps}});
}

}  // namespace siftsum
