#include "siftsum/diophantine.hpp"

#include <cmath>

#include "siftsum/parallel.hpp"

namespace siftsum {

namespace {

// Denominator cap for fixed-point expansions: with q < 2^48 the convergent
// scale 1/q^2 > 2^-96 sits a factor 2^32 above the 2^-128 input truncation.
constexpr uint64_t kDenomCap = uint64_t{1} << 48;

// |frac * q - a * 2^128| / 2^128 via 192-bit intermediates.
double fixed_point_abs_err_times_q(u128 frac, uint64_t q, uint64_t a) {
  uint64_t f_lo = static_cast<uint64_t>(frac);
  uint64_t f_hi = static_cast<uint64_t>(frac >> 64);
  u128 p1 = static_cast<u128>(f_lo) * q;
  u128 mid = static_cast<u128>(f_hi) * q + (p1 >> 64);
  uint64_t t0 = static_cast<uint64_t>(p1);
  uint64_t t1 = static_cast<uint64_t>(mid);
  uint64_t t2 = static_cast<uint64_t>(mid >> 64);
  // |(t2,t1,t0) - (a,0,0)| limbwise
  uint64_t d0, d1, d2;
  if (t2 >= a) {
    d0 = t0;
    d1 = t1;
    d2 = t2 - a;
  } else {
    u128 low = (static_cast<u128>(t1) << 64) | t0;
    u128 neg_low = static_cast<u128>(0) - low;
    d0 = static_cast<uint64_t>(neg_low);
    d1 = static_cast<uint64_t>(neg_low >> 64);
    d2 = a - t2 - (low != 0 ? 1 : 0);
  }
  double mag = std::ldexp(static_cast<double>(d2), 128) +
               std::ldexp(static_cast<double>(d1), 64) + static_cast<double>(d0);
  return mag * 0x1p-128;
}

}  // namespace

ContinuedFraction continued_fraction(const Angle& alpha, int max_terms) {
  if (max_terms > 64) max_terms = 64;
  if (max_terms < 1) max_terms = 1;
  ContinuedFraction cf;
  cf.quotients.push_back(0);
  cf.convergents.push_back({0, 1});
  uint64_t h_prev = 1, h = 0, k_prev = 0, k = 1;

  if (alpha.is_rational()) {
    uint64_t p = alpha.numerator(), r = alpha.denominator();
    while (p != 0 && static_cast<int>(cf.quotients.size()) < max_terms) {
      uint64_t quot = r / p, rem = r % p;
      uint64_t h_new = quot * h + h_prev;
      uint64_t k_new = quot * k + k_prev;
      cf.quotients.push_back(quot);
      cf.convergents.push_back({h_new, k_new});
      h_prev = h;
      h = h_new;
      k_prev = k;
      k = k_new;
      r = p;
      p = rem;
    }
    return cf;
  }

  u128 p = alpha.frac_bits();
  if (p == 0) return cf;
  // first step divides 2^128 by p without forming 2^128
  u128 all_ones = ~static_cast<u128>(0);
  u128 quot = all_ones / p;
  u128 rem = all_ones % p + 1;
  if (rem == p) {
    quot += 1;
    rem = 0;
  }
  u128 r = p;
  p = rem;
  for (;;) {
    if (quot > kDenomCap) break;
    u128 k_new128 = quot * k + k_prev;
    if (k_new128 > kDenomCap) break;
    uint64_t q64 = static_cast<uint64_t>(quot);
    uint64_t h_new = q64 * h + h_prev;
    uint64_t k_new = static_cast<uint64_t>(k_new128);
    cf.quotients.push_back(q64);
    cf.convergents.push_back({h_new, k_new});
    h_prev = h;
    h = h_new;
    k_prev = k;
    k = k_new;
    if (p == 0 || static_cast<int>(cf.quotients.size()) >= max_terms) break;
    quot = r / p;
    rem = r % p;
    r = p;
    p = rem;
  }
  return cf;
}

ApproxResult best_approximation(const Angle& alpha, uint64_t Q) {
  if (Q < 1) throw DomainError("best_approximation: Q must be positive");
  ContinuedFraction cf = continued_fraction(alpha, 64);
  Convergent best = cf.convergents.front();
  for (const Convergent& c : cf.convergents)
    if (c.q <= Q) best = c;
  ApproxResult out;
  out.a = best.a;
  out.q = best.q;
  if (alpha.is_rational()) {
    u128 lhs = static_cast<u128>(alpha.numerator()) * best.q;
    u128 rhs = static_cast<u128>(best.a) * alpha.denominator();
    u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    out.err = static_cast<double>(diff) /
              (static_cast<double>(alpha.denominator()) * static_cast<double>(best.q));
  } else {
    out.err = fixed_point_abs_err_times_q(alpha.frac_bits(), best.q, best.a) /
              static_cast<double>(best.q);
  }
  out.quality = static_cast<double>(best.q) * static_cast<double>(best.q) * out.err;
  return out;
}

namespace {

template <class TermFn>
double vinogradov_generic(double X, TermFn&& term) {
  int64_t limit = static_cast<int64_t>(std::floor(X));
  RealSum total = chunked_reduce<RealSum>(
      1, limit, RealSum{}, [&](int64_t a, int64_t b) {
        KahanSum acc;
        term(a, b, acc);
        return RealSum{acc.value()};
      });
  return total.v;
}

}  // namespace

double vinogradov_sum(const Angle& alpha, double X, double Y) {
  if (alpha.is_rational()) {
    const uint64_t q = alpha.denominator();
    const uint64_t a = alpha.numerator();
    return vinogradov_generic(X, [&](int64_t lo, int64_t hi, KahanSum& acc) {
      uint64_t r = mulmod_u64(a, static_cast<uint64_t>(lo) % q, q);
      for (int64_t n = lo; n <= hi; ++n) {
        uint64_t m = std::min(r, q - r);
        acc.add(m == 0 ? Y
                       : std::min(Y, static_cast<double>(q) / static_cast<double>(m)));
        r += a;
        if (r >= q) r -= q;
      }
    });
  }
  const u128 frac = alpha.frac_bits();
  return vinogradov_generic(X, [&](int64_t lo, int64_t hi, KahanSum& acc) {
    u128 fr = frac * static_cast<u128>(lo);
    for (int64_t n = lo; n <= hi; ++n) {
      if (fr == 0) {
        acc.add(Y);
      } else {
        u128 m = fr;
        u128 neg = static_cast<u128>(0) - fr;
        if (neg < m) m = neg;
        double dist = static_cast<double>(m) * 0x1p-128;
        acc.add(dist == 0 ? Y : std::min(Y, 1.0 / dist));
      }
      fr += frac;
    }
  });
}

double vinogradov_sum_serial(const Angle& alpha, double X, double Y) {
  int64_t limit = static_cast<int64_t>(std::floor(X));
  KahanSum acc;
  for (int64_t n = 1; n <= limit; ++n) {
    double dist;
    if (alpha.is_rational()) {
      uint64_t q = alpha.denominator();
      uint64_t r = mulmod_u64(alpha.numerator(), static_cast<uint64_t>(n) % q, q);
      uint64_t m = std::min(r, q - r);
      dist = static_cast<double>(m) / static_cast<double>(q);
    } else {
      u128 fr = alpha.frac_bits() * static_cast<u128>(n);
      u128 m = std::min(fr, static_cast<u128>(0) - fr);
      if (fr == 0) m = 0;
      dist = static_cast<double>(m) * 0x1p-128;
    }
    acc.add(dist == 0 ? Y : std::min(Y, 1.0 / dist));
  }
  return acc.value();
}

double vinogradov_bound_rhs(double X, double Y, double q) {
  return X * Y / q + (X + q) * std::log(2 * q);
}

}  // namespace siftsum
