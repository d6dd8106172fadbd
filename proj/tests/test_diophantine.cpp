#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "siftsum/diophantine.hpp"
#include "siftsum/parallel.hpp"

using namespace siftsum;

TEST_CASE("continued fraction of 7/16") {
  ContinuedFraction cf = continued_fraction(reduce_rational(7, 16));
  CHECK(cf.quotients == std::vector<uint64_t>{0, 2, 3, 2});
  REQUIRE(cf.convergents.size() == 4);
  CHECK(cf.convergents[0].a == 0);
  CHECK(cf.convergents[0].q == 1);
  CHECK(cf.convergents[1].a == 1);
  CHECK(cf.convergents[1].q == 2);
  CHECK(cf.convergents[2].a == 3);
  CHECK(cf.convergents[2].q == 7);
  CHECK(cf.convergents[3].a == 7);
  CHECK(cf.convergents[3].q == 16);
}

TEST_CASE("continued fraction of 0") {
  ContinuedFraction cf = continued_fraction(reduce_rational(0, 1));
  CHECK(cf.quotients == std::vector<uint64_t>{0});
  REQUIRE(cf.convergents.size() == 1);
  CHECK(cf.convergents[0].a == 0);
  CHECK(cf.convergents[0].q == 1);
}

TEST_CASE("continued fraction of sqrt(2) - 1 is [0; 2, 2, 2, ...]") {
  ContinuedFraction cf = continued_fraction(sqrt2_angle(), 12);
  REQUIRE(cf.quotients.size() >= 8);
  for (size_t i = 1; i < cf.quotients.size(); ++i) CHECK(cf.quotients[i] == 2);
  // convergent denominators 1, 2, 5, 12, 29, 70, ...
  CHECK(cf.convergents[2].a == 2);
  CHECK(cf.convergents[2].q == 5);
  CHECK(cf.convergents[3].a == 5);
  CHECK(cf.convergents[3].q == 12);
  CHECK(cf.convergents[4].a == 12);
  CHECK(cf.convergents[4].q == 29);
}

TEST_CASE("convergents are reduced with strictly increasing q") {
  for (Angle alpha : {reduce_rational(355, 1130), golden_angle(), sqrt2_angle()}) {
    ContinuedFraction cf = continued_fraction(alpha);
    for (size_t i = 0; i < cf.convergents.size(); ++i) {
      CHECK(std::gcd(cf.convergents[i].a, cf.convergents[i].q) == 1);
      if (i > 1) CHECK(cf.convergents[i].q > cf.convergents[i - 1].q);
    }
  }
}

TEST_CASE("best_approximation examples") {
  ApproxResult r = best_approximation(sqrt2_angle(), 10);
  CHECK(r.a == 2);
  CHECK(r.q == 5);
  CHECK(r.err == doctest::Approx(0.0142135623730951).epsilon(1e-10));
  CHECK(r.quality < 1.0);

  ApproxResult exact = best_approximation(reduce_rational(1, 3), 100);
  CHECK(exact.a == 1);
  CHECK(exact.q == 3);
  CHECK(exact.err == 0.0);

  ApproxResult g = best_approximation(golden_angle(), 50);
  CHECK(g.a == 21);
  CHECK(g.q == 34);
}

TEST_CASE("Dirichlet inequality |alpha - a/q| < 1/(qQ)") {
  for (Angle alpha : {sqrt2_angle(), golden_angle(), reduce_rational(113, 355)}) {
    for (uint64_t Q : {10ull, 100ull, 10000ull, 1000000ull}) {
      ApproxResult r = best_approximation(alpha, Q);
      CHECK(r.q <= Q);
      CHECK(r.err < 1.0 / (static_cast<double>(r.q) * static_cast<double>(Q)) +
                        1e-18);
      CHECK(r.quality < 1.0);
    }
  }
}

TEST_CASE("vinogradov_sum worked examples") {
  // alpha = 1/2, X = 4, Y = 10: terms 2, 10, 2, 10
  CHECK(vinogradov_sum(reduce_rational(1, 2), 4, 10) == doctest::Approx(24.0));
  // alpha = 0: every term capped at Y
  CHECK(vinogradov_sum(reduce_rational(0, 1), 3, 7) == doctest::Approx(21.0));
  // alpha = 1/3, X = 3, Y = 100: 3 + 3 + 100
  CHECK(vinogradov_sum(reduce_rational(1, 3), 3, 100) == doctest::Approx(106.0));
}

TEST_CASE("vinogradov_sum parallel determinism and serial agreement") {
  Angle alpha = sqrt2_angle();
  set_thread_count(1);
  double one = vinogradov_sum(alpha, 200000, 50);
  set_thread_count(7);
  double seven = vinogradov_sum(alpha, 200000, 50);
  set_thread_count(0);
  CHECK(one == seven);  // bit-identical
  double ref = vinogradov_sum_serial(alpha, 200000, 50);
  CHECK(one == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("vinogradov_bound_rhs formula") {
  double v = vinogradov_bound_rhs(4, 10, 2);
  CHECK(v == doctest::Approx(40.0 / 2 + 6 * std::log(4.0)).epsilon(1e-15));
}

TEST_CASE("bound ratio stays under the pinned constant on a small grid") {
  // subset of the acceptance grid
  for (Angle alpha : {sqrt2_angle(), golden_angle(), reduce_rational(5, 12)}) {
    for (double X : {1000.0, 10000.0}) {
      for (double Y : {10.0, X}) {
        ApproxResult ap = best_approximation(alpha, static_cast<uint64_t>(X));
        double lhs = vinogradov_sum(alpha, X, Y);
        double rhs = vinogradov_bound_rhs(X, Y, static_cast<double>(ap.q));
        CHECK(lhs / rhs <= 2.0);  // the full-grid constant is pinned in acceptance
      }
    }
  }
}
