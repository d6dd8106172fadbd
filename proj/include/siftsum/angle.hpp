#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace siftsum {

using u128 = unsigned __int128;

using DomainError = std::domain_error;

struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point e(x) = exp(2*pi*i*x) on the unit circle.
struct Phase {
  double re = 1.0;
  double im = 0.0;
  std::complex<double> cx() const { return {re, im}; }
};

/// An angle in [0,1): either an exact reduced rational a/q, or a fixed-point
/// value frac/2^128.  Fixed-point angles built from decimal strings carry the
/// input precision of the string (at most 36 digits) plus the 2^-128
/// truncation; derived phases for multiplier n^2 carry error <= n^2 * 2^-128.
class Angle {
 public:
  enum class Kind { Rational, FixedPoint };

  static Angle rational(int64_t a, int64_t q);
  static Angle fixed_point(u128 frac);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::Rational; }

  // Rational accessors: 0 <= a < q, gcd(a,q) = 1.
  uint64_t numerator() const { return a_; }
  uint64_t denominator() const { return q_; }
  u128 frac_bits() const { return frac_; }

  Angle scaled(uint64_t h) const;  // h*alpha mod 1
  Angle negated() const;           // -alpha mod 1
  double value() const;

  bool operator==(const Angle&) const = default;

 private:
  Angle() = default;
  Kind kind_ = Kind::Rational;
  uint64_t a_ = 0;
  uint64_t q_ = 1;
  u128 frac_ = 0;
};

/// Reduced rational angle a/q normalized into [0,1).  q must be positive.
Angle reduce_rational(int64_t a, int64_t q);

/// {n^2 * alpha} for a rational angle, as the exact numerator r in [0, q).
uint64_t frac_nsq_numerator(const Angle& alpha, uint64_t n);

/// {n^2 * alpha} in [0,1).  Rational angles: exactly (n^2 a mod q)/q up to the
/// final division.  Fixed-point angles: top-64-bit truncation of
/// (n^2 * frac) mod 2^128, error <= n^2 * 2^-128 + 2^-64.  Requires n <= 2^63.
double frac_nsq(const Angle& alpha, uint64_t n);

/// e(r/q) with exact reflection symmetries: quarter angles are exact and
/// unit_phase(q-r, q) is the bitwise conjugate of unit_phase(r, q).
Phase unit_phase(uint64_t r, uint64_t q);
/// e(frac/2^128), same reflection scheme.
Phase unit_phase(u128 frac);
/// e(x) for arbitrary real x (reduced mod 1 in floating point).
Phase unit_phase(double x);

/// e(n^2 * alpha).
Phase phase_nsq(const Angle& alpha, uint64_t n);

/// Distance from x to the nearest integer, in [0, 1/2].
double nearest_int_distance(double x);

uint64_t mulmod_u64(uint64_t x, uint64_t y, uint64_t m);

// Fractional parts of sqrt(2) and of the golden ratio, truncated to 128 bits.
Angle sqrt2_angle();
Angle golden_angle();

}  // namespace siftsum
