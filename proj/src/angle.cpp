#include "siftsum/angle.hpp"

#include <cmath>
#include <numeric>

namespace siftsum {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Angle Angle::rational(int64_t a, int64_t q) {
  if (q <= 0) throw DomainError("rational angle: q must be positive");
  int64_t r = a % q;
  if (r < 0) r += q;
  uint64_t g = std::gcd(static_cast<uint64_t>(r), static_cast<uint64_t>(q));
  Angle out;
  out.kind_ = Kind::Rational;
  out.a_ = static_cast<uint64_t>(r) / g;
  out.q_ = static_cast<uint64_t>(q) / g;
  return out;
}

Angle Angle::fixed_point(u128 frac) {
  Angle out;
  out.kind_ = Kind::FixedPoint;
  out.frac_ = frac;
  out.a_ = 0;
  out.q_ = 1;
  return out;
}

Angle Angle::scaled(uint64_t h) const {
  if (kind_ == Kind::Rational) {
    uint64_t hm = q_ == 1 ? 0 : h % q_;
    uint64_t a = mulmod_u64(a_, hm, q_);
    return rational(static_cast<int64_t>(a), static_cast<int64_t>(q_));
  }
  return fixed_point(frac_ * static_cast<u128>(h));  // wraps mod 2^128
}

Angle Angle::negated() const {
  if (kind_ == Kind::Rational) {
    if (a_ == 0) return *this;
    return rational(static_cast<int64_t>(q_ - a_), static_cast<int64_t>(q_));
  }
  if (frac_ == 0) return *this;
  return fixed_point(static_cast<u128>(0) - frac_);
}

double Angle::value() const {
  if (kind_ == Kind::Rational)
    return static_cast<double>(a_) / static_cast<double>(q_);
  return static_cast<double>(frac_) * 0x1p-128;
}

Angle reduce_rational(int64_t a, int64_t q) { return Angle::rational(a, q); }

uint64_t mulmod_u64(uint64_t x, uint64_t y, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(x) * y % m);
}

uint64_t frac_nsq_numerator(const Angle& alpha, uint64_t n) {
  if (!alpha.is_rational())
    throw DomainError("frac_nsq_numerator: rational angle required");
  uint64_t q = alpha.denominator();
  uint64_t nr = n % q;
  uint64_t nsq = mulmod_u64(nr, nr, q);
  return mulmod_u64(nsq, alpha.numerator(), q);
}

double frac_nsq(const Angle& alpha, uint64_t n) {
  if (alpha.is_rational()) {
    uint64_t r = frac_nsq_numerator(alpha, n);
    return static_cast<double>(r) / static_cast<double>(alpha.denominator());
  }
  u128 nsq = static_cast<u128>(n) * n;
  u128 prod = nsq * alpha.frac_bits();  // wraps mod 2^128
  return static_cast<double>(static_cast<uint64_t>(prod >> 64)) * 0x1p-64;
}

namespace {

// cos/sin of 2*pi*f for f in [0, 1/4); both components are >= 0 there.
inline Phase phase_first_quadrant(double f) {
  double t = kTwoPi * f;
  return {std::cos(t), std::sin(t)};
}

// f in [0, 1/2]; quadrant index chosen so the remainder is exact
// (f - 1/4 is exact by Sterbenz for f in [1/4, 1/2]).
inline Phase phase_lower_half(double f, bool second_quadrant) {
  if (second_quadrant) {
    Phase p = phase_first_quadrant(f - 0.25);
    return {-p.im + 0.0, p.re};
  }
  return phase_first_quadrant(f);
}

}  // namespace

Phase unit_phase(uint64_t r, uint64_t q) {
  // reflect r > q/2 so that e(1 - x) is the exact conjugate of e(x)
  if (static_cast<u128>(r) * 2 > q) {
    Phase p = unit_phase(q - r, q);
    return {p.re, -p.im + 0.0};
  }
  if (r * 2 == q) return {-1.0, 0.0};
  double f = static_cast<double>(r) / static_cast<double>(q);
  return phase_lower_half(f, static_cast<u128>(r) * 4 >= q);
}

Phase unit_phase(u128 frac) {
  constexpr u128 kHalf = static_cast<u128>(1) << 127;
  if (frac > kHalf) {
    Phase p = unit_phase(static_cast<u128>(0) - frac);
    return {p.re, -p.im + 0.0};
  }
  if (frac == kHalf) return {-1.0, 0.0};
  constexpr u128 kQuarter = static_cast<u128>(1) << 126;
  if (frac >= kQuarter) {
    double rem = static_cast<double>(frac - kQuarter) * 0x1p-128;
    Phase p = phase_first_quadrant(rem);
    return {-p.im + 0.0, p.re};
  }
  return phase_first_quadrant(static_cast<double>(frac) * 0x1p-128);
}

Phase unit_phase(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // guards floor rounding at tiny negative x
  if (f > 0.5) {
    Phase p = unit_phase(1.0 - f);  // exact subtraction for f in [1/2, 1]
    return {p.re, -p.im + 0.0};
  }
  if (f == 0.5) return {-1.0, 0.0};
  return phase_lower_half(f, f >= 0.25);
}

Phase phase_nsq(const Angle& alpha, uint64_t n) {
  if (alpha.is_rational())
    return unit_phase(frac_nsq_numerator(alpha, n), alpha.denominator());
  u128 nsq = static_cast<u128>(n) * n;
  return unit_phase(nsq * alpha.frac_bits());
}

double nearest_int_distance(double x) { return std::fabs(x - std::nearbyint(x)); }

Angle sqrt2_angle() {
  return Angle::fixed_point((static_cast<u128>(0x6a09e667f3bcc908ULL) << 64) |
                            0xb2fb1366ea957d3eULL);
}

Angle golden_angle() {
  return Angle::fixed_point((static_cast<u128>(0x9e3779b97f4a7c15ULL) << 64) |
                            0xf39cc0605cedc834ULL);
}

}  // namespace siftsum
