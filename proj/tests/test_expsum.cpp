#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "siftsum/diophantine.hpp"
#include "siftsum/expsum.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/sieve.hpp"

using namespace siftsum;

TEST_CASE("S(0; N) counts the members") {
  SievedSequence g = sieve_gaussian(10);
  SumResult s = eval_S(g, reduce_rational(0, 1), 10);
  CHECK(s.value.real() == 2.0);
  CHECK(s.value.imag() == 0.0);
  CHECK(s.terms == 2);
}

TEST_CASE("exact phases at 1/2 and 1/4: parity and n^2 = 1 mod 8") {
  SievedSequence g = sieve_gaussian(10000);
  double B = static_cast<double>(g.popcount());

  SumResult half = eval_S(g, reduce_rational(1, 2), 10000);
  CHECK(half.value.real() == -B);
  CHECK(half.value.imag() == 0.0);

  SumResult quarter = eval_S(g, reduce_rational(1, 4), 10000);
  CHECK(quarter.value.real() == 0.0);
  CHECK(quarter.value.imag() == B);

  SumResult threeq = eval_S(g, reduce_rational(3, 4), 10000);
  CHECK(threeq.value.real() == 0.0);
  CHECK(threeq.value.imag() == -B);
}

TEST_CASE("every member contributes an exact axis phase at quarter angles") {
  // per-member exactness makes the closed forms hold for every N <= 1e5
  SievedSequence g = sieve_gaussian(100000);
  Angle zero = reduce_rational(0, 1);
  Angle half = reduce_rational(1, 2);
  Angle quarter = reduce_rational(1, 4);
  Angle threeq = reduce_rational(3, 4);
  for (uint64_t n : g.members()) {
    Phase p0 = phase_nsq(zero, n);
    REQUIRE(p0.re == 1.0);
    REQUIRE(p0.im == 0.0);
    Phase ph = phase_nsq(half, n);
    REQUIRE(ph.re == -1.0);
    REQUIRE(ph.im == 0.0);
    Phase pq = phase_nsq(quarter, n);
    REQUIRE(pq.re == 0.0);
    REQUIRE(pq.im == 1.0);
    Phase p3 = phase_nsq(threeq, n);
    REQUIRE(p3.re == 0.0);
    REQUIRE(p3.im == -1.0);
  }
}

TEST_CASE("dyadic window") {
  SievedSequence g = sieve_gaussian(100);
  SumResult s = eval_S(g, reduce_rational(0, 1), 100, Window::Dyadic);
  CHECK(s.terms == g.popcount() - g.count_upto(50));
  CHECK(s.value.real() == static_cast<double>(s.terms));
}

TEST_CASE("window errors") {
  SievedSequence g = sieve_gaussian(100);
  CHECK_THROWS_AS(eval_S(g, reduce_rational(0, 1), 101), DomainError);
}

TEST_CASE("h-averaged sums") {
  SievedSequence g10 = sieve_gaussian(10);
  HAverage a = eval_S_h_avg(g10, reduce_rational(0, 1), 5, 10);
  CHECK(a.total == doctest::Approx(10.0));  // 5 * B(10)

  SievedSequence g100 = sieve_gaussian(100);
  HAverage b = eval_S_h_avg(g100, reduce_rational(1, 2), 2, 100);
  CHECK(b.total == doctest::Approx(30.0));  // |-B| + |B| with B(100) = 15

  HAverage c = eval_S_h_avg(g100, reduce_rational(1, 4), 4, 100);
  CHECK(c.total == doctest::Approx(60.0));  // each |S| equals B(100)
  for (double v : c.abs_values) CHECK(v == doctest::Approx(15.0));
}

TEST_CASE("conjugation and periodicity") {
  SievedSequence g = sieve_gaussian(1000);
  Angle alpha = reduce_rational(3, 8);
  SumResult s = eval_S(g, alpha, 1000);
  SumResult sneg = eval_S(g, alpha.negated(), 1000);
  CHECK(sneg.value.real() == s.value.real());  // bitwise
  CHECK(sneg.value.imag() == -s.value.imag());

  CHECK(reduce_rational(3 + 8, 8) == alpha);  // alpha + 1 reduces to alpha
}

TEST_CASE("|S| never exceeds the term count") {
  SievedSequence g = sieve_gaussian(20000);
  for (Angle alpha : {reduce_rational(1, 7), reduce_rational(355, 1130),
                      sqrt2_angle(), golden_angle()}) {
    SumResult s = eval_S(g, alpha, 20000);
    CHECK(std::abs(s.value) <= static_cast<double>(s.terms) + 1e-9);
    CHECK(s.err_bound <= static_cast<double>(s.terms) * 0x1p-44);
  }
}

TEST_CASE("bit-determinism across worker counts") {
  SievedSequence g = sieve_gaussian(100000);
  Angle alpha = golden_angle();
  set_thread_count(1);
  SumResult one = eval_S(g, alpha, 100000);
  set_thread_count(4);
  SumResult four = eval_S(g, alpha, 100000);
  set_thread_count(8);
  SumResult eight = eval_S(g, alpha, 100000);
  set_thread_count(0);
  CHECK(one.value.real() == four.value.real());
  CHECK(one.value.imag() == four.value.imag());
  CHECK(one.value.real() == eight.value.real());
  CHECK(one.value.imag() == eight.value.imag());
}

TEST_CASE("serial reference agrees within the error bound") {
  SievedSequence g = sieve_gaussian(50000);
  for (Angle alpha : {reduce_rational(17, 123), sqrt2_angle()}) {
    SumResult p = eval_S(g, alpha, 50000);
    SumResult s = eval_S_serial(g, alpha, 50000);
    CHECK(std::abs(p.value - s.value) <= p.err_bound + s.err_bound);
    CHECK(p.terms == s.terms);
  }
}

TEST_CASE("theorem RHS evaluators") {
  // pinned: (1e4/sqrt(log 1e4)) * (0.1 + 0.1 + 10^(-1/2))
  CHECK(theorem1_rhs(1e4, 1e4, 0) ==
        doctest::Approx(1700.9968914487866).epsilon(1e-12));
  // q = 1 term alone reaches N/sqrt(log N)
  for (double N : {100.0, 1e6}) {
    CHECK(theorem1_rhs(N, 1, 0) >= N / std::sqrt(std::log(N)));
    CHECK(theorem2_rhs(N, 7, 1, 0) ==
          doctest::Approx(theorem1_rhs(N, 7, 0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theorem1_rhs(1, 1, 0), DomainError);
}

TEST_CASE("theorem experiment rows") {
  SievedSequence g = sieve_gaussian(100);
  Angle zero = reduce_rational(0, 1);
  auto rows = run_theorem_experiment(TheoremKind::One, g, zero, {10}, {}, 0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lhs == doctest::Approx(2.0));
  CHECK(rows[0].params.at("q") == 1.0);
  CHECK(rows[0].ratio <= 1.0);

  auto empty = run_theorem_experiment(TheoremKind::One, g, zero, {}, {}, 0);
  CHECK(empty.empty());

  auto thm2 = run_theorem_experiment(TheoremKind::Two, g, golden_angle(), {100},
                                     {2, 4}, 0);
  REQUIRE(thm2.size() == 2);
  CHECK(thm2[0].params.at("H") == 2.0);
  CHECK(thm2[1].params.at("H") == 4.0);
}

TEST_CASE("golden-direction normalized size decays") {
  SievedSequence g = sieve_gaussian(100000);
  Angle alpha = golden_angle();
  auto norm = [&](uint64_t N) {
    SumResult s = eval_S(g, alpha, N);
    return std::abs(s.value) * std::sqrt(std::log(static_cast<double>(N))) /
           static_cast<double>(N);
  };
  double r4 = norm(10000), r5 = norm(100000);
  CHECK(r5 <= 1.1 * r4);
}
