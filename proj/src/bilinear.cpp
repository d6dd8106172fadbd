#include "siftsum/bilinear.hpp"

#include <algorithm>
#include <cmath>

#include "siftsum/parallel.hpp"

namespace siftsum {

CoeffSeq::CoeffSeq(int64_t lo, int64_t hi, double sup_bound)
    : lo_(lo), hi_(hi), sup_bound_(sup_bound) {
  if (hi < lo) throw DomainError("CoeffSeq: empty window");
  values_.assign(static_cast<size_t>(hi - lo + 1), {0, 0});
}

CoeffSeq CoeffSeq::constant(int64_t lo, int64_t hi, std::complex<double> c) {
  CoeffSeq s(lo, hi, std::abs(c));
  s.values_.clear();
  s.values_.shrink_to_fit();
  s.constant_ = true;
  s.const_value_ = c;
  return s;
}

void CoeffSeq::set(int64_t i, std::complex<double> v) {
  if (constant_) throw InvariantViolation("CoeffSeq: constant sequence");
  if (i < lo_ || i > hi_) throw DomainError("CoeffSeq: index outside window");
  if (std::abs(v) > sup_bound_ + 1e-12)
    throw InvariantViolation("CoeffSeq: value exceeds sup bound");
  values_[static_cast<size_t>(i - lo_)] = v;
}

void DecompositionParams::validate() const {
  if (!(std::max(2.0, z) <= Z && Z <= static_cast<double>(N)))
    throw DomainError("DecompositionParams: need max(2,z) <= Z <= N");
  if (!(2 <= M0 && M0 <= M))
    throw DomainError("DecompositionParams: need 2 <= M0 <= M");
}

std::pair<std::complex<double>, std::complex<double>> legendre_identity_check(
    const CoeffSeq& u, double z, PrimeClass cls) {
  const std::vector<uint64_t> primes = prime_product(z, cls).primes;
  if (primes.size() > 20)
    throw CapError("legendre_identity_check: more than 20 sieving primes");

  std::complex<double> lhs{0, 0};
  for (int64_t n = std::max<int64_t>(1, u.lo()); n <= u.hi(); ++n) {
    bool coprime = true;
    for (uint64_t p : primes)
      if (static_cast<uint64_t>(n) % p == 0) {
        coprime = false;
        break;
      }
    if (coprime) lhs += u.at(n);
  }

  std::complex<double> rhs{0, 0};
  const uint64_t hi = static_cast<uint64_t>(std::max<int64_t>(u.hi(), 0));
  const size_t k = primes.size();
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
    uint64_t d = 1;
    bool overflow = false;
    int bits = 0;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) {
        ++bits;
        if (d > hi / primes[i]) {
          overflow = true;  // divisor exceeds the window, empty inner sum
          break;
        }
        d *= primes[i];
      }
    if (overflow) continue;
    std::complex<double> inner{0, 0};
    int64_t start = std::max<int64_t>(1, u.lo());
    int64_t first = (start + static_cast<int64_t>(d) - 1) /
                    static_cast<int64_t>(d) * static_cast<int64_t>(d);
    for (int64_t n = first; n <= u.hi(); n += static_cast<int64_t>(d))
      inner += u.at(n);
    rhs += (bits % 2 == 0 ? 1.0 : -1.0) * inner;
  }
  return {lhs, rhs};
}

namespace {

// Enumerate squarefree products d < cap of the given primes; visit(d, mu(d)).
void for_each_divisor(const std::vector<uint64_t>& primes, uint64_t cap,
                      size_t idx, uint64_t d, int mu,
                      const std::function<void(uint64_t, int)>& visit) {
  visit(d, mu);
  for (size_t i = idx; i < primes.size(); ++i) {
    if (d > (cap - 1) / primes[i]) continue;  // d * p >= cap
    for_each_divisor(primes, cap, i + 1, d * primes[i], -mu, visit);
  }
}

// first value >= lo congruent to target mod 4, stepping by `step` (odd step)
int64_t align_mod4(int64_t lo, int64_t step, int64_t target) {
  int64_t v = lo;
  while (((v % 4) + 4) % 4 != target) v += step;
  return v;
}

}  // namespace

DecompositionTerms eval_decomposition_terms(const DecompositionParams& params,
                                            const Angle& alpha,
                                            const CoeffSeq& rho,
                                            const CoeffSeq& alpha_l,
                                            const CoeffSeq& beta_k) {
  params.validate();
  DecompositionTerms out;
  const int64_t N = static_cast<int64_t>(params.N);
  const int64_t half = N / 2;  // window is (N/2, N]

  // s1: squarefree d | P_{4;3}(z) below M; inner n = 0 (d), n = 1 (4).
  {
    std::vector<uint64_t> primes =
        prime_product(params.z, PrimeClass::Mod4Is3).primes;
    if (primes.size() > 20) throw CapError("eval_decomposition_terms: divisor cap");
    KahanSum re, im, triv;
    for_each_divisor(primes, params.M, 0, 1, 1, [&](uint64_t d, int mu) {
      int64_t dd = static_cast<int64_t>(d);
      int64_t first = (half / dd + 1) * dd;  // smallest multiple > N/2
      first = align_mod4(first, dd, 1);
      for (int64_t n = first; n <= N; n += 4 * dd) {
        Phase p = phase_nsq(alpha, static_cast<uint64_t>(n));
        re.add(mu * p.re);
        im.add(mu * p.im);
        triv.add(1.0);
      }
    });
    out.s1 = {re.value(), im.value()};
    out.t1 = triv.value();
  }

  // s2: z <= p <= sqrt(N) in the 3 mod 4 class, N/2 < mp <= N, mp = 1 (4).
  {
    KahanSum re, im, triv;
    uint64_t root = isqrt_u64(params.N);
    for (uint64_t p : primes_below(root + 1)) {
      if (p % 4 != 3 || static_cast<double>(p) < params.z) continue;
      int64_t pp = static_cast<int64_t>(p);
      int64_t m_lo = half / pp + 1;
      int64_t m_hi = N / pp;
      // mp = 1 (4) with p = 3 (4) forces m = 3 (4)
      for (int64_t m = align_mod4(m_lo, 1, 3); m <= m_hi; m += 4) {
        std::complex<double> c = rho.at(m);
        if (c == std::complex<double>{0, 0}) continue;
        Phase ph = phase_nsq(alpha, static_cast<uint64_t>(m * pp));
        std::complex<double> term = c * ph.cx();
        re.add(term.real());
        im.add(term.imag());
        triv.add(std::abs(c));
      }
    }
    out.s2 = {re.value(), im.value()};
    out.t2 = triv.value();
  }

  // s3: M0 <= l <= M0 z, k l >= M, window and congruence as above.
  {
    KahanSum re, im, triv;
    int64_t l_hi = static_cast<int64_t>(static_cast<double>(params.M0) * params.z);
    for (int64_t l = static_cast<int64_t>(params.M0); l <= l_hi; ++l) {
      std::complex<double> al = alpha_l.at(l);
      if (al == std::complex<double>{0, 0}) continue;
      if (l % 2 == 0) continue;  // kl = 1 (4) needs odd l
      int64_t k_lo = std::max((static_cast<int64_t>(params.M) + l - 1) / l,
                              half / l + 1);
      int64_t k_hi = N / l;
      for (int64_t k = align_mod4(k_lo, 1, ((l % 4) + 4) % 4); k <= k_hi; k += 4) {
        std::complex<double> bk = beta_k.at(k);
        if (bk == std::complex<double>{0, 0}) continue;
        Phase ph = phase_nsq(alpha, static_cast<uint64_t>(k * l));
        std::complex<double> term = al * bk * ph.cx();
        re.add(term.real());
        im.add(term.imag());
        triv.add(std::abs(al * bk));
      }
    }
    out.s3 = {re.value(), im.value()};
    out.t3 = triv.value();
  }
  return out;
}

DecompositionCoeffs default_decomposition_coeffs(const DecompositionParams& p) {
  p.validate();
  int64_t N = static_cast<int64_t>(p.N);
  CoeffSeq rho = CoeffSeq::constant(1, N, {1, 0});
  int64_t l_hi = std::max<int64_t>(static_cast<int64_t>(p.M0),
                                   static_cast<int64_t>(p.M0 * p.z));
  CoeffSeq alpha_l(static_cast<int64_t>(p.M0), l_hi, 1.0);
  std::vector<uint64_t> primes = prime_product(p.z, PrimeClass::Mod4Is3).primes;
  for (int64_t l = alpha_l.lo(); l <= alpha_l.hi(); ++l) {
    uint64_t rem = static_cast<uint64_t>(l);
    int mu = 1;
    for (uint64_t q : primes) {
      if (rem % q == 0) {
        rem /= q;
        mu = -mu;
        if (rem % q == 0) {
          mu = 0;  // not squarefree
          break;
        }
      }
    }
    if (mu != 0 && rem == 1) alpha_l.set(l, {static_cast<double>(mu), 0});
  }
  CoeffSeq beta_k = CoeffSeq::constant(1, N, {1, 0});
  return {std::move(rho), std::move(alpha_l), std::move(beta_k)};
}

std::pair<std::complex<double>, std::complex<double>> char4_expansion(int64_t n) {
  uint64_t r2 = static_cast<uint64_t>(((n % 2) + 2) % 2);
  uint64_t r4 = static_cast<uint64_t>(((n % 4) + 4) % 4);
  std::complex<double> e_half = unit_phase(r2, 2).cx();
  std::complex<double> e_q = unit_phase(r4, 4).cx();
  std::complex<double> e_3q = unit_phase(3 * r4 % 4, 4).cx();
  std::complex<double> w0 = (1.0 - e_half) / 2.0;
  std::complex<double> w1 = (e_q - e_3q) / std::complex<double>(0, 2);
  return {w0, w1};
}

namespace {

struct InnerRange {
  int64_t first = 1;
  int64_t last = 0;
  int64_t step = 1;
};

// n-range for fixed m: W < n <= W', N/2 < mn <= N, optionally mn = 1 (4).
// Empty (last < first) when m is even under the congruence.
InnerRange inner_range(int64_t m, int64_t W, int64_t Wp, int64_t N, bool cong) {
  InnerRange r;
  int64_t lo = std::max(W, N / 2 / m) + 1;
  int64_t hi = std::min(Wp, N / m);
  if (cong) {
    if (m % 2 == 0) {
      r.first = 1;
      r.last = 0;
      return r;
    }
    lo = align_mod4(lo, 1, ((m % 4) + 4) % 4);
    r.step = 4;
  }
  r.first = lo;
  r.last = hi;
  return r;
}

std::complex<double> bilinear_core(const CoeffSeq& a, const CoeffSeq* b,
                                   const Angle& alpha, uint64_t V, uint64_t W,
                                   uint64_t N, bool cong) {
  const int64_t Vp = static_cast<int64_t>(std::min(2 * V, N));
  const int64_t Wp = static_cast<int64_t>(std::min(2 * W, N));
  ComplexTerms acc = chunked_reduce<ComplexTerms>(
      static_cast<int64_t>(V) + 1, Vp, ComplexTerms{},
      [&](int64_t m0, int64_t m1) {
        KahanSum re, im;
        for (int64_t m = m0; m <= m1; ++m) {
          std::complex<double> am = a.at(m);
          if (am == std::complex<double>{0, 0}) continue;
          InnerRange r = inner_range(m, static_cast<int64_t>(W), Wp,
                                     static_cast<int64_t>(N), cong);
          for (int64_t n = r.first; n <= r.last; n += r.step) {
            std::complex<double> bn = b ? b->at(n) : std::complex<double>{1, 0};
            if (bn == std::complex<double>{0, 0}) continue;
            Phase ph = phase_nsq(alpha, static_cast<uint64_t>(m * n));
            std::complex<double> term = am * bn * ph.cx();
            re.add(term.real());
            im.add(term.imag());
          }
        }
        return ComplexTerms{re.value(), im.value(), 0};
      });
  return {acc.re, acc.im};
}

}  // namespace

std::complex<double> type_I_sum(const CoeffSeq& a, const Angle& alpha,
                                uint64_t V, uint64_t W, uint64_t N,
                                Congruence cong) {
  if (V > N || W > N) throw DomainError("type_I_sum: need V, W <= N");
  return bilinear_core(a, nullptr, alpha, V, W, N,
                       cong == Congruence::ProductOneMod4);
}

HAbsSum type_I_sum_h_avg(const CoeffSeq& a, const Angle& alpha, uint64_t V,
                         uint64_t W, uint64_t N, uint64_t H, Congruence cong) {
  if (H < 1) throw DomainError("type_I_sum_h_avg: H must be positive");
  HAbsSum out;
  KahanSum total;
  for (uint64_t h = 1; h <= H; ++h) {
    std::complex<double> v = type_I_sum(a, alpha.scaled(h), V, W, N, cong);
    out.h_values.push_back(h);
    out.abs_values.push_back(std::abs(v));
    total.add(std::abs(v));
  }
  out.total = total.value();
  return out;
}

double linear_rhs(double N, double V, double q, double eps) {
  return std::pow(N * q, eps) *
         (N * std::sqrt(V) / std::sqrt(q) + std::sqrt(N) * V + std::sqrt(V * q));
}

double hlinear_rhs(double N, double V, double q, double H, double eps) {
  return std::pow(N * q, eps) * (H * N * std::sqrt(V) / std::sqrt(q) +
                                 H * std::sqrt(N) * V + std::sqrt(H * V * q));
}

TypeIIResult type_II_sum(const CoeffSeq& a, const CoeffSeq& b,
                         const Angle& alpha, uint64_t V, uint64_t W, uint64_t N,
                         uint64_t H) {
  if (V > N || W > N) throw DomainError("type_II_sum: need V, W <= N");
  if (H < 1) throw DomainError("type_II_sum: H must be positive");
  TypeIIResult out;
  uint64_t h_lo = H, h_hi = H == 1 ? 1 : 2 * H - 1;
  KahanSum total;
  for (uint64_t h = h_lo; h <= h_hi; ++h) {
    std::complex<double> v =
        bilinear_core(a, &b, alpha.scaled(h), V, W, N, /*cong=*/true);
    out.h_values.push_back(h);
    out.values.push_back(v);
    total.add(std::abs(v));
  }
  out.abs_total = total.value();
  return out;
}

double bilinear_rhs_1(double N, double W, double H, double q, double eps) {
  return std::pow(N * q, eps) *
         (H * N * std::pow(q, -0.25) + H * N / std::sqrt(W) +
          H * std::pow(N, 0.75) * std::pow(W, 0.25) +
          std::pow(H, 0.75) * std::sqrt(N) * std::pow(q, 0.25));
}

double bilinear_rhs_2(double N, double W, double H, double q, double eps) {
  return std::pow(N * q, eps) *
         (H * N * std::pow(q, -0.25) + H * std::sqrt(N * W) +
          H * N * std::pow(W, -0.25) +
          std::pow(H, 0.75) * std::sqrt(N) * std::pow(q, 0.25));
}

double bilinear_rhs_3(double N, double W, double H, double q, double eps) {
  double core = H * N * std::pow(q, -0.25) +
                std::pow(H, 0.75) * std::sqrt(N * W) +
                H * N * std::pow(W, -0.25) +
                std::pow(H, 0.75) * std::sqrt(N) * std::pow(q, 0.25);
  return std::pow(N * q, eps) * core *
         (1 + std::sqrt(H) * std::cbrt(W) / std::cbrt(N));
}

double bilinear_rhs_min(double N, double W, double H, double q, double eps) {
  return std::min({bilinear_rhs_1(N, W, H, q, eps), bilinear_rhs_2(N, W, H, q, eps),
                   bilinear_rhs_3(N, W, H, q, eps)});
}

double bilinear1_rhs(double N, double W, double q, double eps) {
  return std::pow(N * q, eps) *
         (N * std::pow(q, -0.25) + std::sqrt(N * W) + N * std::pow(W, -0.25) +
          std::sqrt(N) * std::pow(q, 0.25));
}

int choose_bilinear_bound(double V, double W, double H, double N) {
  if (W >= V && H <= std::pow(N / W, 2.0 / 3.0)) return 3;
  if (W >= V) return 2;
  return 1;
}

std::pair<double, double> weyl_difference_check(
    const std::function<double(int64_t)>& f, int64_t lo, int64_t hi) {
  if (hi - lo > 10000) throw DomainError("weyl_difference_check: range too long");
  if (hi <= lo) return {0.0, 0.0};
  const int64_t L = hi - lo;

  // Reduce each phase mod 1 once (exact: f - floor(f) is a same-magnitude
  // subtraction) so both routes see identical values; differences of numbers
  // in [0,1) then stay below one rounding of the result.
  std::vector<double> y(static_cast<size_t>(L));
  for (int64_t n = lo + 1; n <= hi; ++n) {
    double v = f(n);
    y[static_cast<size_t>(n - lo - 1)] = v - std::floor(v);
  }

  KahanSum re, im;
  for (double v : y) {
    Phase p = unit_phase(v);
    re.add(p.re);
    im.add(p.im);
  }
  double direct = re.value() * re.value() + im.value() * im.value();

  KahanSum exp_re;
  for (int64_t k = -(L - 1); k <= L - 1; ++k) {
    int64_t i0 = std::max<int64_t>(0, -k);
    int64_t i1 = std::min(L - 1, L - 1 - k);
    for (int64_t i = i0; i <= i1; ++i) {
      Phase p = unit_phase(y[static_cast<size_t>(i + k)] -
                           y[static_cast<size_t>(i)]);
      exp_re.add(p.re);
    }
  }
  return {direct, exp_re.value()};
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm),
                              tol, depth);
}

// Integrate f over [0, T] split at dyadic points 1, 2, 4, ...
double integrate_dyadic(const std::function<double(double)>& f, double T,
                        double tol, int depth) {
  std::vector<std::pair<double, double>> segs;
  double a = 0, b = std::min(1.0, T);
  segs.push_back({a, b});
  while (b < T) {
    a = b;
    b = std::min(2 * b, T);
    segs.push_back({a, b});
  }
  double seg_tol = tol / static_cast<double>(segs.size());
  double total = 0;
  for (auto [s, e] : segs) total += adaptive_simpson(f, s, e, seg_tol, depth);
  return total;
}

// calibrated on the acceptance grid (max observed constant times headroom)
constexpr double kKernelErrConstant = 2.6;

}  // namespace

KernelResult fourier_cutoff_kernel(double x, double T, double beta) {
  if (!(x > 0) || !(T > 0)) throw DomainError("fourier_cutoff_kernel: x, T > 0");
  double gap = std::min(std::fabs(beta - x), std::fabs(beta - x / 2));
  if (gap < 1e-6 * x)
    throw DomainError("fourier_cutoff_kernel: beta too close to a breakpoint");

  auto integrand = [x, beta](double t) {
    // 2 cos(beta t) (sin(xt) - sin(xt/2)) / (pi t), even fold of e^(i beta t)
    if (t == 0) return 2.0 * x / (2 * M_PI);
    return 2.0 * std::cos(beta * t) * (std::sin(x * t) - std::sin(x * t / 2)) /
           (M_PI * t);
  };
  KernelResult out;
  out.estimate = integrate_dyadic(integrand, T, 1e-8, 48);
  out.indicator = (x / 2 < beta && beta <= x);
  out.err_allowance = kKernelErrConstant / (T * gap);
  return out;
}

double kernel_l1(double x, double T) {
  if (!(x > 0) || !(T > 0)) throw DomainError("kernel_l1: x, T > 0");
  auto integrand = [x](double t) {
    if (t == 0) return 2.0 * x / (2 * M_PI);
    return 2.0 * std::fabs(std::sin(x * t) - std::sin(x * t / 2)) / (M_PI * t);
  };
  return integrate_dyadic(integrand, T, 1e-6, 40);
}

}  // namespace siftsum
