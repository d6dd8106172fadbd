#include "siftsum/expsum.hpp"

#include <cmath>

#include "siftsum/diophantine.hpp"
#include "siftsum/parallel.hpp"

namespace siftsum {

namespace {

// Per-term phase error: the libm sin/cos pair after the exact reduction is
// good to a few ulp; fixed-point angles add 2pi * (2^-64 + N^2 * 2^-128).
double per_term_err(const Angle& alpha, uint64_t N) {
  double base = 0x1p-50;
  if (!alpha.is_rational()) {
    double nsq = static_cast<double>(N) * static_cast<double>(N);
    base += 6.2831853071795865 * (0x1p-64 + nsq * 0x1p-128);
  }
  return base + 0x1p-51;  // compensated-summation slack
}

int64_t window_lo(uint64_t N, Window w) {
  return w == Window::Dyadic ? static_cast<int64_t>(N / 2) + 1 : 1;
}

SumResult finish(const Angle& alpha, uint64_t N, Window window,
                 ComplexTerms acc) {
  SumResult out;
  out.value = {acc.re, acc.im};
  out.n_limit = N;
  out.angle = alpha;
  out.window = window;
  out.terms = static_cast<uint64_t>(acc.terms);
  out.err_bound = static_cast<double>(acc.terms) * per_term_err(alpha, N);
  double bound = static_cast<double>(out.terms) * (1 + 0x1p-40) + 0x1p-30;
  if (std::abs(out.value) > bound)
    throw InvariantViolation("eval_S: |S| exceeds the term count");
  return out;
}

}  // namespace

SumResult eval_S(const SievedSequence& seq, const Angle& alpha, uint64_t N,
                 Window window) {
  if (N > seq.limit()) throw DomainError("eval_S: N exceeds sequence limit");
  if (N == 0) throw DomainError("eval_S: N must be positive");
  const int64_t lo = window_lo(N, window);
  ComplexTerms acc = chunked_reduce<ComplexTerms>(
      lo, static_cast<int64_t>(N), ComplexTerms{},
      [&](int64_t a, int64_t b) {
        KahanSum re, im;
        int64_t terms = 0;
        if (alpha.is_rational()) {
          const uint64_t q = alpha.denominator();
          for (int64_t n = a; n <= b; ++n) {
            if (!seq.contains(static_cast<uint64_t>(n))) continue;
            Phase p =
                unit_phase(frac_nsq_numerator(alpha, static_cast<uint64_t>(n)), q);
            re.add(p.re);
            im.add(p.im);
            ++terms;
          }
        } else {
          const u128 frac = alpha.frac_bits();
          for (int64_t n = a; n <= b; ++n) {
            if (!seq.contains(static_cast<uint64_t>(n))) continue;
            u128 nsq = static_cast<u128>(n) * static_cast<u128>(n);
            Phase p = unit_phase(nsq * frac);
            re.add(p.re);
            im.add(p.im);
            ++terms;
          }
        }
        return ComplexTerms{re.value(), im.value(), terms};
      });
  return finish(alpha, N, window, acc);
}

SumResult eval_S_serial(const SievedSequence& seq, const Angle& alpha,
                        uint64_t N, Window window) {
  if (N > seq.limit()) throw DomainError("eval_S: N exceeds sequence limit");
  if (N == 0) throw DomainError("eval_S: N must be positive");
  KahanSum re, im;
  int64_t terms = 0;
  for (int64_t n = window_lo(N, window); n <= static_cast<int64_t>(N); ++n) {
    if (!seq.contains(static_cast<uint64_t>(n))) continue;
    Phase p = phase_nsq(alpha, static_cast<uint64_t>(n));
    re.add(p.re);
    im.add(p.im);
    ++terms;
  }
  return finish(alpha, N, window, ComplexTerms{re.value(), im.value(), terms});
}

HAverage eval_S_h_avg(const SievedSequence& seq, const Angle& alpha,
                      uint64_t H, uint64_t N, Window window) {
  if (H < 1) throw DomainError("eval_S_h_avg: H must be positive");
  HAverage out;
  out.abs_values.reserve(H);
  KahanSum total;
  for (uint64_t h = 1; h <= H; ++h) {
    SumResult s = eval_S(seq, alpha.scaled(h), N, window);
    double av = std::abs(s.value);
    out.abs_values.push_back(av);
    total.add(av);
  }
  out.total = total.value();
  return out;
}

double theorem1_rhs(double N, double q, double eps) {
  if (N <= 1) throw DomainError("theorem1_rhs: N must exceed 1");
  double factor = std::pow(q, -0.25) + std::pow(N, -0.5) * std::pow(q, 0.25) +
                  std::pow(N, -0.125);
  return N / std::sqrt(std::log(N)) * std::pow(N, eps) * factor;
}

double theorem2_rhs(double N, double q, double H, double eps) {
  if (N <= 1) throw DomainError("theorem2_rhs: N must exceed 1");
  double factor = std::pow(q, -0.25) + std::pow(N, -0.125) +
                  std::pow(H, -0.25) * std::pow(N, -0.5) * std::pow(q, 0.25);
  return N / std::sqrt(std::log(N)) * H * std::pow(N * q, eps) * factor;
}

std::vector<BoundReport> run_theorem_experiment(
    TheoremKind kind, const SievedSequence& seq, const Angle& alpha,
    const std::vector<uint64_t>& N_list, const std::vector<uint64_t>& H_list,
    double eps) {
  std::vector<BoundReport> rows;
  for (uint64_t N : N_list) {
    ApproxResult ap = best_approximation(alpha, N);  // q <= N, inside 1/q^2
    double q = static_cast<double>(ap.q);
    double Nd = static_cast<double>(N);
    if (kind == TheoremKind::One) {
      double lhs = std::abs(eval_S(seq, alpha, N).value);
      rows.push_back(make_report("theorem1", lhs, theorem1_rhs(Nd, q, eps),
                                 {{"N", Nd}, {"q", q}, {"eps", eps}}));
    } else {
      for (uint64_t H : H_list) {
        double lhs = eval_S_h_avg(seq, alpha, H, N).total;
        rows.push_back(make_report(
            "theorem2", lhs, theorem2_rhs(Nd, q, static_cast<double>(H), eps),
            {{"N", Nd}, {"q", q}, {"H", static_cast<double>(H)}, {"eps", eps}}));
      }
    }
  }
  sort_reports(rows);
  return rows;
}

}  // namespace siftsum
