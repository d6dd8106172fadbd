#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siftsum/angle.hpp"

namespace siftsum {

enum class SeqKind { Gaussian, Loeschian, Both };
enum class PrimeClass { Mod4Is3, Mod3Is2, All };

/// Primes p < z (strict) in a residue class, ascending.
struct PrimeProduct {
  double z = 0;
  PrimeClass residue_class = PrimeClass::All;
  std::vector<uint64_t> primes;
};

PrimeProduct prime_product(double z, PrimeClass cls);

/// All primes p < limit, ascending.
std::vector<uint64_t> primes_below(uint64_t limit);
std::vector<int8_t> moebius_upto(uint64_t n);
uint64_t isqrt_u64(uint64_t n);

struct SieveRecipe {
  SeqKind kind = SeqKind::Gaussian;
  std::optional<double> z;  // set for the truncated Gaussian sieve
};

/// Membership bitmap over 1..limit plus the recipe that produced it.
class SievedSequence {
 public:
  SievedSequence(uint64_t limit, SieveRecipe recipe);

  uint64_t limit() const { return limit_; }
  const SieveRecipe& recipe() const { return recipe_; }

  bool contains(uint64_t n) const {
    return (words_[(n - 1) >> 6] >> ((n - 1) & 63)) & 1;
  }
  void set(uint64_t n) { words_[(n - 1) >> 6] |= uint64_t{1} << ((n - 1) & 63); }
  void reset(uint64_t n) {
    words_[(n - 1) >> 6] &= ~(uint64_t{1} << ((n - 1) & 63));
  }

  uint64_t popcount() const;
  uint64_t count_upto(uint64_t n) const;  // members <= n
  std::vector<uint64_t> members() const;

  std::vector<uint64_t>& words() { return words_; }
  const std::vector<uint64_t>& words() const { return words_; }

 private:
  uint64_t limit_;
  SieveRecipe recipe_;
  std::vector<uint64_t> words_;
};

/// True iff n is odd and n = u^2 + v^2 with u,v >= 0 coprime (gcd(u,0) = u).
/// O(sqrt(n)) scan; n = 0 is a domain error.
bool is_primitive_gaussian_oracle(uint64_t n);

/// True iff n = u^2 + uv + v^2 with integer u,v (any sign) coprime.
bool is_primitive_loeschian_oracle(uint64_t n);

// OpenMP-parallel segmented sieves (segments are written disjointly).
SievedSequence sieve_gaussian(uint64_t N);
SievedSequence sieve_gaussian_truncated(uint64_t N, double z);
SievedSequence sieve_loeschian(uint64_t N);
SievedSequence sieve_both(uint64_t N);

// Serial reference implementations on an independent code path, kept for
// tests and the benchmark.
SievedSequence sieve_gaussian_serial(uint64_t N);
SievedSequence sieve_gaussian_truncated_serial(uint64_t N, double z);
SievedSequence sieve_loeschian_serial(uint64_t N);

/// Binary bitmap file: 8-byte little-endian bit count, then packed bits,
/// LSB-first (bit k of byte i is membership of n = 8i + k + 1).
void write_bitmap(const SievedSequence& seq, const std::string& path);

}  // namespace siftsum
