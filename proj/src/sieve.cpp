#include "siftsum/sieve.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "siftsum/parallel.hpp"

namespace siftsum {

namespace {

constexpr uint64_t kSegmentBits = uint64_t{1} << 20;  // multiple of 64

bool in_class(uint64_t p, PrimeClass cls) {
  switch (cls) {
    case PrimeClass::Mod4Is3: return p % 4 == 3;
    case PrimeClass::Mod3Is2: return p % 3 == 2;
    case PrimeClass::All: return true;
  }
  return false;
}

}  // namespace

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<uint64_t> primes_below(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit <= 2) return out;
  uint64_t n = limit - 1;  // sieve [2, n]
  std::vector<uint8_t> comp(n + 1, 0);
  for (uint64_t p = 2; p * p <= n; ++p)
    if (!comp[p])
      for (uint64_t m = p * p; m <= n; m += p) comp[m] = 1;
  for (uint64_t p = 2; p <= n; ++p)
    if (!comp[p]) out.push_back(p);
  return out;
}

std::vector<int8_t> moebius_upto(uint64_t n) {
  std::vector<int8_t> mu(n + 1, 1);
  std::vector<uint8_t> comp(n + 1, 0);
  std::vector<uint64_t> primes;
  if (n >= 1) mu[0] = 0;
  for (uint64_t i = 2; i <= n; ++i) {
    if (!comp[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (uint64_t p : primes) {
      if (i * p > n) break;
      comp[i * p] = 1;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = static_cast<int8_t>(-mu[i]);
    }
  }
  return mu;
}

PrimeProduct prime_product(double z, PrimeClass cls) {
  if (z < 0) throw DomainError("prime_product: z must be nonnegative");
  PrimeProduct out;
  out.z = z;
  out.residue_class = cls;
  uint64_t limit = z <= 1 ? 0 : static_cast<uint64_t>(std::ceil(z));
  for (uint64_t p : primes_below(limit))
    if (static_cast<double>(p) < z && in_class(p, cls)) out.primes.push_back(p);
  return out;
}

SievedSequence::SievedSequence(uint64_t limit, SieveRecipe recipe)
    : limit_(limit), recipe_(recipe), words_((limit + 63) / 64, 0) {
  if (limit == 0) throw DomainError("SievedSequence: limit must be positive");
}

uint64_t SievedSequence::popcount() const {
  uint64_t total = 0;
  for (uint64_t w : words_) total += static_cast<uint64_t>(std::popcount(w));
  return total;
}

uint64_t SievedSequence::count_upto(uint64_t n) const {
  if (n == 0) return 0;
  if (n > limit_) n = limit_;
  uint64_t full = (n) / 64;  // words fully below bit index n
  uint64_t total = 0;
  for (uint64_t i = 0; i < full; ++i)
    total += static_cast<uint64_t>(std::popcount(words_[i]));
  uint64_t rem = n % 64;
  if (rem)
    total += static_cast<uint64_t>(
        std::popcount(words_[full] & ((uint64_t{1} << rem) - 1)));
  return total;
}

std::vector<uint64_t> SievedSequence::members() const {
  std::vector<uint64_t> out;
  out.reserve(popcount());
  for (uint64_t n = 1; n <= limit_; ++n)
    if (contains(n)) out.push_back(n);
  return out;
}

bool is_primitive_gaussian_oracle(uint64_t n) {
  if (n == 0) throw DomainError("is_primitive_gaussian_oracle: n = 0");
  if (n % 2 == 0) return false;
  uint64_t r = isqrt_u64(n);
  for (uint64_t u = 0; u <= r; ++u) {
    uint64_t rest = n - u * u;
    uint64_t v = isqrt_u64(rest);
    if (v * v != rest) continue;
    if (std::gcd(u, v) == 1) return true;
  }
  return false;
}

bool is_primitive_loeschian_oracle(uint64_t n) {
  if (n == 0) throw DomainError("is_primitive_loeschian_oracle: n = 0");
  int64_t c = static_cast<int64_t>(2 * isqrt_u64(n)) + 1;
  for (int64_t u = -c; u <= c; ++u) {
    __int128 disc = static_cast<__int128>(4) * n - static_cast<__int128>(3) * u * u;
    if (disc < 0) continue;
    uint64_t s = isqrt_u64(static_cast<uint64_t>(disc));
    if (static_cast<__int128>(s) * s != disc) continue;
    for (int sign : {1, -1}) {
      int64_t t = -u + sign * static_cast<int64_t>(s);
      if (t % 2 != 0) continue;
      int64_t v = t / 2;
      uint64_t au = static_cast<uint64_t>(u < 0 ? -u : u);
      uint64_t av = static_cast<uint64_t>(v < 0 ? -v : v);
      if (au == 0 && av == 0) continue;
      if (std::gcd(au, av) == 1) return true;
    }
  }
  return false;
}

namespace {

constexpr uint64_t kOneMod4Pattern = 0x1111111111111111ULL;  // bits 0,4,8,...

void trim_tail(SievedSequence& seq) {
  uint64_t N = seq.limit();
  uint64_t rem = N % 64;
  if (rem) seq.words().back() &= (uint64_t{1} << rem) - 1;
}

// Gaussian sieve core: fill the n = 1 mod 4 pattern, then clear multiples of
// each sieving prime (all odd, class 3 mod 4) within each segment.  Segments
// are aligned to words, so parallel workers write disjoint ranges.
void gaussian_mark_segments(SievedSequence& seq,
                            const std::vector<uint64_t>& sieve_primes,
                            bool parallel) {
  uint64_t N = seq.limit();
  auto& words = seq.words();
  const int64_t nseg =
      static_cast<int64_t>((N + kSegmentBits - 1) / kSegmentBits);
  const int nthreads = parallel ? thread_count() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int64_t s = 0; s < nseg; ++s) {
    const uint64_t lo = static_cast<uint64_t>(s) * kSegmentBits + 1;
    const uint64_t hi = std::min(N, (static_cast<uint64_t>(s) + 1) * kSegmentBits);
    for (uint64_t w = (lo - 1) / 64; w <= (hi - 1) / 64; ++w)
      words[w] = kOneMod4Pattern;
    for (uint64_t p : sieve_primes) {
      uint64_t m = ((lo + p - 1) / p) * p;
      while (m <= hi && m % 4 != 1) m += p;  // p odd: at most 3 steps
      for (; m <= hi; m += 4 * p) seq.reset(m);
    }
  }
  trim_tail(seq);
}

// Loeschian sieve core.  A segment keeps the residual cofactor of every n
// after dividing out all primes <= sqrt(N); n is excluded when some prime
// factor is 2 mod 3 (small ones are seen directly, a large one survives as
// the residual) or when 9 | n.
void loeschian_mark_segments(SievedSequence& seq,
                             const std::vector<uint64_t>& base_primes,
                             bool parallel) {
  uint64_t N = seq.limit();
  const int64_t nseg =
      static_cast<int64_t>((N + kSegmentBits - 1) / kSegmentBits);
  const int nthreads = parallel ? thread_count() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int64_t s = 0; s < nseg; ++s) {
    const uint64_t lo = static_cast<uint64_t>(s) * kSegmentBits + 1;
    const uint64_t hi = std::min(N, (static_cast<uint64_t>(s) + 1) * kSegmentBits);
    const uint64_t len = hi - lo + 1;
    std::vector<uint64_t> rem(len);
    std::vector<uint8_t> bad(len, 0);
    for (uint64_t i = 0; i < len; ++i) rem[i] = lo + i;
    for (uint64_t p : base_primes) {
      if (p * p > hi) break;
      const bool is_bad_class = (p % 3 == 2);
      for (uint64_t m = ((lo + p - 1) / p) * p; m <= hi; m += p) {
        uint64_t i = m - lo;
        if (is_bad_class) {
          bad[i] = 1;
        } else {
          while (rem[i] % p == 0) rem[i] /= p;
        }
      }
    }
    for (uint64_t m = ((lo + 8) / 9) * 9; m <= hi; m += 9) bad[m - lo] = 1;
    for (uint64_t i = 0; i < len; ++i) {
      if (!bad[i] && rem[i] > 1 && rem[i] % 3 == 2) bad[i] = 1;
      if (!bad[i]) seq.set(lo + i);
    }
  }
}

}  // namespace

SievedSequence sieve_gaussian(uint64_t N) {
  SievedSequence seq(N, {SeqKind::Gaussian, std::nullopt});
  std::vector<uint64_t> ps;
  for (uint64_t p : primes_below(isqrt_u64(N) + 1))
    if (p % 4 == 3) ps.push_back(p);
  gaussian_mark_segments(seq, ps, /*parallel=*/true);
  return seq;
}

SievedSequence sieve_gaussian_truncated(uint64_t N, double z) {
  if (z < 2 || z > std::sqrt(static_cast<double>(N)) + 1)
    throw DomainError("sieve_gaussian_truncated: need 2 <= z <= sqrt(N)+1");
  SievedSequence seq(N, {SeqKind::Gaussian, z});
  gaussian_mark_segments(seq, prime_product(z, PrimeClass::Mod4Is3).primes,
                         /*parallel=*/true);
  return seq;
}

SievedSequence sieve_loeschian(uint64_t N) {
  SievedSequence seq(N, {SeqKind::Loeschian, std::nullopt});
  loeschian_mark_segments(seq, primes_below(isqrt_u64(N) + 1),
                          /*parallel=*/true);
  return seq;
}

SievedSequence sieve_both(uint64_t N) {
  SievedSequence g = sieve_gaussian(N);
  SievedSequence l = sieve_loeschian(N);
  SievedSequence out(N, {SeqKind::Both, std::nullopt});
  for (size_t i = 0; i < out.words().size(); ++i)
    out.words()[i] = g.words()[i] & l.words()[i];
  return out;
}

SievedSequence sieve_gaussian_serial(uint64_t N) {
  SievedSequence seq(N, {SeqKind::Gaussian, std::nullopt});
  std::vector<uint8_t> bad(N + 1, 0);
  for (uint64_t p : primes_below(isqrt_u64(N) + 1))
    if (p % 4 == 3)
      for (uint64_t m = p; m <= N; m += p) bad[m] = 1;
  for (uint64_t n = 1; n <= N; n += 4)
    if (!bad[n]) seq.set(n);
  return seq;
}

SievedSequence sieve_gaussian_truncated_serial(uint64_t N, double z) {
  if (z < 2 || z > std::sqrt(static_cast<double>(N)) + 1)
    throw DomainError("sieve_gaussian_truncated: need 2 <= z <= sqrt(N)+1");
  SievedSequence seq(N, {SeqKind::Gaussian, z});
  std::vector<uint8_t> bad(N + 1, 0);
  for (uint64_t p : prime_product(z, PrimeClass::Mod4Is3).primes)
    for (uint64_t m = p; m <= N; m += p) bad[m] = 1;
  for (uint64_t n = 1; n <= N; n += 4)
    if (!bad[n]) seq.set(n);
  return seq;
}

SievedSequence sieve_loeschian_serial(uint64_t N) {
  SievedSequence seq(N, {SeqKind::Loeschian, std::nullopt});
  std::vector<uint64_t> rem(N + 1);
  std::vector<uint8_t> bad(N + 1, 0);
  std::iota(rem.begin(), rem.end(), uint64_t{0});
  for (uint64_t p : primes_below(isqrt_u64(N) + 1)) {
    for (uint64_t m = p; m <= N; m += p) {
      if (p % 3 == 2) {
        bad[m] = 1;
      } else {
        while (rem[m] % p == 0) rem[m] /= p;
      }
    }
  }
  for (uint64_t m = 9; m <= N; m += 9) bad[m] = 1;
  for (uint64_t n = 1; n <= N; ++n)
    if (!bad[n] && !(rem[n] > 1 && rem[n] % 3 == 2)) seq.set(n);
  return seq;
}

void write_bitmap(const SievedSequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open for writing: " + path);
  uint64_t n = seq.limit();
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>(n >> (8 * i));
  out.write(reinterpret_cast<const char*>(header), 8);
  uint64_t nbytes = (n + 7) / 8;
  const auto& words = seq.words();
  for (uint64_t i = 0; i < nbytes; ++i) {
    unsigned char b = static_cast<unsigned char>((words[i / 8] >> (8 * (i % 8))) & 0xff);
    out.write(reinterpret_cast<const char*>(&b), 1);
  }
  if (!out) throw IOError("write failed: " + path);
}

}  // namespace siftsum
