#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace siftsum {

/// Worker-count policy.  0 restores the default (SIFTSUM_THREADS environment
/// variable if set, otherwise the OpenMP default).
void set_thread_count(int n);
/// The count parallel regions will actually use.
int thread_count();

/// Compensated (Kahan) accumulator.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

inline constexpr int64_t kReduceChunk = 1 << 16;

namespace detail {
inline int64_t chunk_index(int64_t n) {
  int64_t v = n - 1;
  return v >= 0 ? v / kReduceChunk : -((-v + kReduceChunk - 1) / kReduceChunk);
}
}  // namespace detail

/// Deterministic parallel reduction over the integer range [lo, hi].  The
/// range is cut along a fixed chunk grid anchored at multiples of
/// kReduceChunk, each chunk is evaluated serially by fn(a, b) -> T, and chunk
/// values are combined with operator+ by a pairwise tree in index order.  The
/// result is bit-identical for every worker count.
template <class T, class ChunkFn>
T chunked_reduce(int64_t lo, int64_t hi, T zero, ChunkFn&& fn) {
  if (lo > hi) return zero;
  const int64_t c0 = detail::chunk_index(lo);
  const int64_t c1 = detail::chunk_index(hi);
  const int64_t m = c1 - c0 + 1;
  std::vector<T> part(static_cast<size_t>(m), zero);
  const int nthreads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int64_t c = 0; c < m; ++c) {
    const int64_t a = std::max(lo, (c0 + c) * kReduceChunk + 1);
    const int64_t b = std::min(hi, (c0 + c + 1) * kReduceChunk);
    part[static_cast<size_t>(c)] = fn(a, b);
  }
  for (int64_t step = 1; step < m; step *= 2)
    for (int64_t i = 0; i + step < m; i += 2 * step)
      part[static_cast<size_t>(i)] =
          part[static_cast<size_t>(i)] + part[static_cast<size_t>(i + step)];
  return part[0];
}

/// Chunk partial for complex sums that also counts nonzero summands.
struct ComplexTerms {
  double re = 0.0;
  double im = 0.0;
  int64_t terms = 0;
  ComplexTerms operator+(const ComplexTerms& o) const {
    return {re + o.re, im + o.im, terms + o.terms};
  }
};

struct RealSum {
  double v = 0.0;
  RealSum operator+(const RealSum& o) const { return {v + o.v}; }
};

}  // namespace siftsum
