// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "siftsum/bilinear.hpp"
#include "siftsum/diophantine.hpp"
#include "siftsum/expsum.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/quadform.hpp"
#include "siftsum/report.hpp"
#include "siftsum/sieve.hpp"
#include "siftsum/suite.hpp"

using namespace siftsum;

namespace {

// Regression pins, calibrated once on the standard grids below and asserted
// as regressions thereafter.
constexpr double kVinoRatioPin = 1.40;       // criterion 6, measured max 1.3621
constexpr double kKernelL1Pin = 0.50;        // criterion 8, measured max 0.4553
constexpr double kTheorem1TrendPin = 0.025;  // criterion 9, measured max 0.0236
constexpr double kTheorem2RatioPin = 0.012;  // criterion 10, measured 0.0105

int g_failures = 0;

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

void report(int index, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %-46s [%6.2f s]%s%s\n", pass ? "PASS" : "FAIL",
              index, name.c_str(), seconds, detail.empty() ? "" : "  ",
              detail.c_str());
  if (!pass) ++g_failures;
}

void run(int index, const std::string& name, double time_limit,
         const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && seconds >= time_limit) {
    pass = false;
    detail += " (over the " + std::to_string(static_cast<int>(time_limit)) +
              " s budget)";
  }
  report(index, name, pass, seconds, detail);
}

char fmt_buf[256];

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  std::snprintf(fmt_buf, sizeof fmt_buf, f, a, b, c);
  return fmt_buf;
}

// 25 deterministic test angles: the two quadratic irrationals, convergents of
// both, and rationals adjacent to those convergents (a/q + 1/q^3).
std::vector<Angle> vino_grid_angles() {
  std::vector<Angle> out = {sqrt2_angle(), golden_angle()};
  std::vector<std::pair<int64_t, int64_t>> convergents = {
      {2, 5},  {5, 12}, {12, 29}, {29, 70}, {70, 169}, {169, 408},
      {1, 2},  {2, 3},  {3, 5},   {5, 8},   {8, 13},   {13, 21},  {21, 34}};
  for (auto [a, q] : convergents) out.push_back(reduce_rational(a, q));
  for (size_t i = 0; i < 10; ++i) {
    auto [a, q] = convergents[i];
    out.push_back(reduce_rational(a * q * q + 1, q * q * q));
  }
  return out;
}

std::vector<BoundReport> exact_phase_rows(const SievedSequence& g, uint64_t N) {
  double B = static_cast<double>(g.count_upto(N));
  SumResult half = eval_S(g, reduce_rational(1, 2), N);
  SumResult quarter = eval_S(g, reduce_rational(1, 4), N);
  std::vector<BoundReport> rows;
  rows.push_back(make_report("phase-half", std::abs(half.value + B), 1e-6,
                             {{"N", static_cast<double>(N)}}));
  rows.push_back(make_report("phase-quarter",
                             std::abs(quarter.value - std::complex<double>{0, B}),
                             1e-6, {{"N", static_cast<double>(N)}}));
  return rows;
}

std::vector<BoundReport> golden_trend_rows(const SievedSequence& g) {
  std::vector<BoundReport> rows =
      run_theorem_experiment(TheoremKind::One, g, golden_angle(),
                             {10000, 100000, 1000000}, {}, 0);
  // raw component fingerprints make the determinism check bit-sensitive
  for (uint64_t N : {10000ull, 100000ull, 1000000ull}) {
    SumResult s = eval_S(g, golden_angle(), N);
    rows.push_back(make_report("sum-re", s.value.real(), 1.0,
                               {{"N", static_cast<double>(N)}}));
    rows.push_back(make_report("sum-im", s.value.imag(), 1.0,
                               {{"N", static_cast<double>(N)}}));
  }
  sort_reports(rows);
  return rows;
}

std::vector<BoundReport> theorem2_rows(const SievedSequence& g) {
  return run_theorem_experiment(TheoremKind::Two, g, sqrt2_angle(), {100000},
                                {16}, 0);
}

}  // namespace

int main() {
  std::printf("siftsum acceptance suite (version %s, %d worker threads)\n",
              kVersion, thread_count());

  run(1, "sieve-oracle equivalence to 1e5", 10, [](std::string& detail) {
    const uint64_t N = 100000;
    SievedSequence g = sieve_gaussian(N);
    SievedSequence l = sieve_loeschian(N);
    long long mismatches = 0;
#pragma omp parallel for schedule(dynamic, 1024) reduction(+ : mismatches)
    for (int64_t n = 1; n <= static_cast<int64_t>(N); ++n) {
      if (g.contains(n) != is_primitive_gaussian_oracle(n)) ++mismatches;
      if (l.contains(n) != is_primitive_loeschian_oracle(n)) ++mismatches;
    }
    detail = fmt("mismatches %.0f of 2e5", static_cast<double>(mismatches));
    return mismatches == 0;
  });

  run(2, "exact phase identities at N = 1e6", 5, [](std::string& detail) {
    SievedSequence g = sieve_gaussian(1000000);
    auto rows = exact_phase_rows(g, 1000000);
    detail = fmt("|S(1/2)+B| = %.3g, |S(1/4)-iB| = %.3g", rows[0].lhs, rows[1].lhs);
    return rows[0].lhs <= 1e-6 && rows[1].lhs <= 1e-6;
  });

  run(3, "legendre identity on 100 seeded sequences", 5, [](std::string& detail) {
    std::mt19937_64 rng(1001);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
      CoeffSeq u(1, 1000, 1.0);
      for (int64_t i = 1; i <= 1000; ++i) {
        double r = u01(rng), th = 2 * M_PI * u01(rng);
        u.set(i, {r * std::cos(th), r * std::sin(th)});
      }
      double z = 2 + 28 * u01(rng);
      PrimeClass cls = rep % 3 == 0   ? PrimeClass::Mod4Is3
                       : rep % 3 == 1 ? PrimeClass::Mod3Is2
                                      : PrimeClass::All;
      auto [lhs, rhs] = legendre_identity_check(u, z, cls);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    detail = fmt("max |lhs-rhs| = %.3g", worst);
    return worst <= 1e-10;
  });

  run(4, "weyl differencing on 100 seeded phases", 5, [](std::string& detail) {
    std::mt19937_64 rng(1002);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
      double a = u01(rng), b = u01(rng), c = u01(rng);
      auto f = [a, b, c](int64_t n) {
        double x = static_cast<double>(n);
        return a * x * x + b * x + c;
      };
      int64_t lo = static_cast<int64_t>(rng() % 100);
      int64_t len = 2 + static_cast<int64_t>(rng() % 999);
      auto [direct, expanded] = weyl_difference_check(f, lo, lo + len);
      worst = std::max(worst,
                       std::fabs(direct - expanded) / std::max(1.0, direct));
    }
    detail = fmt("max rel |direct-expanded| = %.3g", worst);
    return worst <= 1e-10;
  });

  run(5, "character expansion mod 4", 0, [](std::string& detail) {
    double worst = 0;
    for (int64_t m = -8; m <= 8; ++m) {
      auto [w0m, w1m] = char4_expansion(m);
      double e0 = (((m % 2) + 2) % 2 == 1) ? 1.0 : 0.0;
      int64_t r4 = ((m % 4) + 4) % 4;
      double e1 = r4 == 1 ? 1.0 : (r4 == 3 ? -1.0 : 0.0);
      worst = std::max({worst, std::abs(w0m - e0), std::abs(w1m - e1)});
      for (int64_t n = -8; n <= 8; ++n) {
        auto [w0n, w1n] = char4_expansion(n);
        std::complex<double> recon = (w0m * w0n + w1m * w1n) / 2.0;
        double expect = (((m * n) % 4 + 4) % 4 == 1) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(recon - expect));
      }
    }
    detail = fmt("max deviation = %.3g", worst);
    return worst <= 1e-12;
  });

  run(6, "vinogradov ratio over the 200-instance grid", 30,
      [](std::string& detail) {
        double worst = 0;
        int instances = 0;
        for (const Angle& alpha : vino_grid_angles()) {
          for (double X : {1e3, 1e4, 1e5, 1e6}) {
            for (double Y : {10.0, X}) {
              ApproxResult ap =
                  best_approximation(alpha, static_cast<uint64_t>(X));
              double lhs = vinogradov_sum(alpha, X, Y);
              double rhs = vinogradov_bound_rhs(X, Y, static_cast<double>(ap.q));
              worst = std::max(worst, lhs / rhs);
              ++instances;
            }
          }
        }
        detail = fmt("max ratio %.4f over %.0f instances (pin %.2f)", worst,
                     instances, kVinoRatioPin);
        return instances == 200 && worst <= kVinoRatioPin;
      });

  run(7, "quadform counters: hashed = bruteforce", 60, [](std::string& detail) {
    std::mt19937_64 rng(1003);
    int bad = 0;
    for (int rep = 0; rep < 50; ++rep) {  // binary forms, P <= 200
      int64_t a = static_cast<int64_t>(rng() % 9) - 4;
      int64_t b = static_cast<int64_t>(rng() % 9) - 4;
      int64_t c = static_cast<int64_t>(rng() % 4001) - 2000;
      int64_t P = 1 + static_cast<int64_t>(rng() % 200);
      if (a == 0) a = 2;
      if (b == 0) b = -3;
      if (c == 0) c = 7;
      if (count_binary(a, b, c, P, CountMethod::Bruteforce).count !=
          count_binary(a, b, c, P, CountMethod::Hashed).count)
        ++bad;
    }
    for (int rep = 0; rep < 50; ++rep) {  // difference forms, H, V <= 50
      int64_t H = 1 + static_cast<int64_t>(rng() % 50);
      int64_t V = 1 + static_cast<int64_t>(rng() % 50);
      int64_t j = static_cast<int64_t>(rng() % 20001) - 10000;
      if (count_R(j, H, V, CountMethod::Bruteforce).count !=
          count_R(j, H, V, CountMethod::Hashed).count)
        ++bad;
    }
    for (int rep = 0; rep < 50; ++rep) {  // quaternary, H, P <= 8
      int64_t H = static_cast<int64_t>(rng() % 9);
      int64_t P = static_cast<int64_t>(rng() % 9);
      bool coprime = rep % 2;
      uint64_t brute = count_M3(H, P, coprime, CountMethod::Bruteforce).count;
      uint64_t hashed = count_M3(H, P, coprime, CountMethod::Hashed).count;
      if (brute != hashed) ++bad;
      if (coprime) {
        // Moebius identity with the all-zero-m correction, exactly
        std::vector<int8_t> mu = moebius_upto(static_cast<uint64_t>(std::max<int64_t>(P, 1)));
        __int128 expect = 0;
        int64_t mertens = 0;
        for (int64_t d = 1; d <= std::max<int64_t>(P, 1) && (P == 0 || d <= P); ++d) {
          if (!mu[static_cast<size_t>(d)]) continue;
          mertens += mu[static_cast<size_t>(d)];
          expect += static_cast<__int128>(mu[static_cast<size_t>(d)]) *
                    static_cast<__int128>(
                        count_M3(H, P / d, false, CountMethod::Hashed).count);
        }
        int64_t hs = 2 * H + 1;
        expect -= static_cast<__int128>(mertens) * hs * hs * hs * hs;
        if (static_cast<__int128>(hashed) != expect) ++bad;
      }
    }
    detail = fmt("%.0f mismatches over 150 instances", static_cast<double>(bad));
    return bad == 0;
  });

  run(8, "fourier kernel window + L1 mass", 30, [](std::string& detail) {
    double worst_gap = 0, worst_l1 = 0;
    int points = 0;
    for (double x : {0.5, 2.0}) {
      for (double T : {100.0, 1000.0}) {
        for (double mult : {0.3, 0.6, 0.75, 0.9, 1.8}) {
          KernelResult k = fourier_cutoff_kernel(x, T, mult * x);
          double gap = std::fabs(k.estimate - (k.indicator ? 1.0 : 0.0));
          if (gap > k.err_allowance) worst_gap = std::max(worst_gap, gap);
          ++points;
        }
        double l1 = kernel_l1(x, T);
        worst_l1 =
            std::max(worst_l1, l1 / (x + std::log(std::max(1.0, T))));
      }
    }
    detail = fmt("%.0f grid points, max l1 constant %.4f (pin %.2f)",
                 static_cast<double>(points), worst_l1, kKernelL1Pin);
    return points == 20 && worst_gap == 0 && worst_l1 <= kKernelL1Pin;
  });

  // criteria 9-11 share the 1e6 sieve
  SievedSequence g6 = sieve_gaussian(1000000);

  run(9, "theorem-1 trend at alpha = golden", 0, [&](std::string& detail) {
    auto rows = golden_trend_rows(g6);
    double max_ratio = 0;
    bool triangle = true;
    for (const auto& r : rows) {
      if (r.lemma_id != "theorem1") continue;
      max_ratio = std::max(max_ratio, r.ratio);
      uint64_t N = static_cast<uint64_t>(r.params.at("N"));
      if (r.lhs > static_cast<double>(g6.count_upto(N)) + 1e-9) triangle = false;
    }
    detail = fmt("max normalized ratio %.4f (pin %.2f)", max_ratio,
                 kTheorem1TrendPin);
    return triangle && max_ratio <= kTheorem1TrendPin;
  });

  run(10, "theorem-2 consistency at alpha = sqrt2", 60, [&](std::string& detail) {
    const uint64_t N = 100000, H = 16;
    double B = static_cast<double>(g6.count_upto(N));
    HAverage avg = eval_S_h_avg(g6, sqrt2_angle(), H, N);
    auto rows = theorem2_rows(g6);
    double ratio = rows.empty() ? 1e18 : rows[0].ratio;
    detail = fmt("sum %.4f <= H*B = %.0f, ratio %.4f", avg.total,
                 static_cast<double>(H) * B, ratio);
    return avg.total <= static_cast<double>(H) * B + 1e-9 &&
           ratio <= kTheorem2RatioPin;
  });

  run(11, "byte-identical reports at 1, 4, 8 threads", 0,
      [&](std::string& detail) {
        std::vector<std::string> csv, json;
        size_t nrows = 0;
        for (int threads : {1, 4, 8}) {
          set_thread_count(threads);
          std::vector<BoundReport> rows = exact_phase_rows(g6, 1000000);
          auto trend = golden_trend_rows(g6);
          rows.insert(rows.end(), trend.begin(), trend.end());
          auto t2 = theorem2_rows(g6);
          rows.insert(rows.end(), t2.begin(), t2.end());
          nrows = rows.size();
          csv.push_back(reports_to_csv(rows));
          json.push_back(reports_to_json(rows));
        }
        set_thread_count(0);
        bool same = csv[0] == csv[1] && csv[1] == csv[2] && json[0] == json[1] &&
                    json[1] == json[2];
        detail = fmt("%.0f report rows compared per thread count",
                     static_cast<double>(nrows));
        return same;
      });

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
