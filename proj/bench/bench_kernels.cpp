// Compares the serial reference implementations against the OpenMP kernels.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "siftsum/diophantine.hpp"
#include "siftsum/expsum.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/quadform.hpp"
#include "siftsum/sieve.hpp"

using namespace siftsum;

namespace {

template <class F>
double time_of(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* name, double serial_s, double parallel_s, bool same) {
  std::printf("%-28s %10.3f s %10.3f s %8.2fx   %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, same ? "values match" : "VALUES DIFFER");
}

}  // namespace

int main() {
  std::printf("kernel benchmark, %d worker threads\n", thread_count());
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const uint64_t N = 20000000;
    SievedSequence serial = sieve_gaussian_serial(1);
    SievedSequence parallel = sieve_gaussian(1);
    double ts = time_of([&] { serial = sieve_gaussian_serial(N); });
    double tp = time_of([&] { parallel = sieve_gaussian(N); });
    row("sieve_gaussian 2e7", ts, tp, serial.words() == parallel.words());
  }

  {
    const uint64_t N = 5000000;
    SievedSequence serial = sieve_loeschian_serial(1);
    SievedSequence parallel = sieve_loeschian(1);
    double ts = time_of([&] { serial = sieve_loeschian_serial(N); });
    double tp = time_of([&] { parallel = sieve_loeschian(N); });
    row("sieve_loeschian 5e6", ts, tp, serial.words() == parallel.words());
  }

  {
    const uint64_t N = 4000000;
    SievedSequence seq = sieve_gaussian(N);
    SumResult rs{}, rp{};
    double ts = time_of([&] { rs = eval_S_serial(seq, golden_angle(), N); });
    double tp = time_of([&] { rp = eval_S(seq, golden_angle(), N); });
    bool close = std::abs(rs.value - rp.value) <= rs.err_bound + rp.err_bound;
    row("eval_S golden 4e6", ts, tp, close);
  }

  {
    const double X = 20000000;
    double vs = 0, vp = 0;
    double ts = time_of([&] { vs = vinogradov_sum_serial(sqrt2_angle(), X, 1e4); });
    double tp = time_of([&] { vp = vinogradov_sum(sqrt2_angle(), X, 1e4); });
    row("vinogradov_sum 2e7", ts, tp, std::fabs(vs - vp) <= 1e-6 * vs);
  }

  {
    uint64_t cs = 0, cp = 0;
    double ts = 0, tp = 0;
    {
      set_thread_count(1);
      ts = time_of([&] {
        cs = count_M3(8, 8, true, CountMethod::Bruteforce).count;
      });
      set_thread_count(0);
      tp = time_of([&] {
        cp = count_M3(8, 8, true, CountMethod::Bruteforce).count;
      });
    }
    row("count_M3 brute 8,8", ts, tp, cs == cp);
  }

  return 0;
}
