// siftsum: sifted-sequence exponential sums, bound experiments and reports.
#include <complex>
#include <random>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "siftsum/bilinear.hpp"
#include "siftsum/diophantine.hpp"
#include "siftsum/expsum.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/quadform.hpp"
#include "siftsum/sieve.hpp"
#include "siftsum/suite.hpp"

using namespace siftsum;

namespace {

uint64_t parse_count(const std::string& s) {
  // plain integers and scientific shorthand (1e6)
  double v = std::stod(s);
  if (v < 0 || v > 1.8e18 || v != std::floor(v))
    throw CLI::ValidationError("expected a nonnegative integer: " + s);
  return static_cast<uint64_t>(v);
}

std::vector<uint64_t> parse_count_list(const std::string& s) {
  std::vector<uint64_t> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    if (comma > pos) out.push_back(parse_count(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

SievedSequence build_sequence(const std::string& kind, uint64_t limit,
                              double z) {
  if (kind == "gaussian")
    return z > 0 ? sieve_gaussian_truncated(limit, z) : sieve_gaussian(limit);
  if (kind == "loeschian") {
    if (z > 0) throw CLI::ValidationError("--z applies to the gaussian sieve only");
    return sieve_loeschian(limit);
  }
  if (kind == "both") {
    if (z > 0) throw CLI::ValidationError("--z applies to the gaussian sieve only");
    return sieve_both(limit);
  }
  throw CLI::ValidationError("unknown kind: " + kind);
}

std::map<std::string, double> parse_kv_params(const std::string& s) {
  std::map<std::string, double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = s.substr(pos, comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("expected k=v in --params: " + item);
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    pos = comma + 1;
  }
  return out;
}

double need(const std::map<std::string, double>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw CLI::ValidationError("missing parameter: " + key);
  return it->second;
}

double get_or(const std::map<std::string, double>& params, const std::string& key,
              double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IOError("cannot open for writing: " + out_path);
  out << text;
  if (!out) throw IOError("write failed: " + out_path);
}

CoeffSeq seeded_unimodular(int64_t lo, int64_t hi, uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoeffSeq s(lo, hi, 1.0);
  for (int64_t i = lo; i <= hi; ++i) {
    Phase p = unit_phase(static_cast<double>(rng() >> 11) * 0x1p-53);
    s.set(i, {p.re, p.im});
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sifted-sequence exponential sums and bound experiments"};
  app.require_subcommand(1);
  // global flags (--out, --threads, ...) may follow the subcommand name
  app.fallthrough();

  int threads = 0;
  uint64_t seed = 1;
  std::string out_path;
  std::string format;  // per-subcommand default when empty
  app.add_option("--threads", threads, "worker threads (0 = auto)");
  app.add_option("--seed", seed, "seed for generated coefficient sequences");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv|json where applicable")
      ->check(CLI::IsMember({"csv", "json"}));

  // sieve
  auto* sieve = app.add_subcommand("sieve", "construct a sifted sequence");
  std::string sieve_kind = "gaussian";
  std::string sieve_limit;
  double sieve_z = 0;
  sieve->add_option("--kind", sieve_kind, "gaussian|loeschian|both")->required();
  sieve->add_option("--limit", sieve_limit, "bitmap length N")->required();
  sieve->add_option("--z", sieve_z, "truncated gaussian sieve threshold");

  // sum
  auto* sum = app.add_subcommand("sum", "evaluate S(alpha; N)");
  std::string sum_kind = "gaussian";
  std::string sum_alpha, sum_N, sum_window = "full";
  sum->add_option("--kind", sum_kind, "gaussian|loeschian|both");
  sum->add_option("--alpha", sum_alpha, "rat:a/q | dec:0.414 | quad:sqrt2|golden")
      ->required();
  sum->add_option("--N", sum_N, "summation limit")->required();
  sum->add_option("--window", sum_window, "full|dyadic");

  // approx
  auto* approx = app.add_subcommand("approx", "best rational approximation");
  std::string approx_alpha, approx_Q;
  approx->add_option("--alpha", approx_alpha, "angle spec")->required();
  approx->add_option("--Q", approx_Q, "denominator bound")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "theorem bound-ratio experiment");
  int verify_theorem = 1;
  std::string verify_alpha, verify_N_list;
  uint64_t verify_H = 16;
  double verify_eps = 0;
  verify->add_option("--theorem", verify_theorem, "1|2")
      ->check(CLI::IsMember({1, 2}));
  verify->add_option("--alpha", verify_alpha, "angle spec")->required();
  verify->add_option("--N-list", verify_N_list, "comma-separated, e.g. 1e4,1e5")
      ->required();
  verify->add_option("--H", verify_H, "h-average length (theorem 2)");
  verify->add_option("--eps", verify_eps, "epsilon in the RHS");

  // decompose
  auto* decompose = app.add_subcommand("decompose", "sieve decomposition terms");
  std::string dec_alpha, dec_N;
  uint64_t dec_M = 0, dec_M0 = 0;
  double dec_z = 0, dec_Z = 0;
  decompose->add_option("--alpha", dec_alpha, "angle spec")->required();
  decompose->add_option("--N", dec_N, "window limit")->required();
  decompose->add_option("--M", dec_M, "divisor cutoff")->required();
  decompose->add_option("--z", dec_z, "sieve threshold")->required();
  decompose->add_option("--M0", dec_M0, "l-window start (default M)");
  decompose->add_option("--Z", dec_Z, "large sieve threshold (default sqrt(N))");

  // lemma
  auto* lemma = app.add_subcommand("lemma", "single bound-report row");
  std::string lemma_id, lemma_params, lemma_alpha = "quad:sqrt2";
  lemma->add_option("--id", lemma_id, "linear|hlinear|bilinear1|hbilinear|vino|kernel")
      ->required();
  lemma->add_option("--params", lemma_params, "k=v,... (N,V,W,H,eps,x,T,beta,X,Y)");
  lemma->add_option("--alpha", lemma_alpha, "angle spec");

  // quadform
  auto* quadform = app.add_subcommand("quadform", "quadratic form counters");
  std::string qf_op, qf_params;
  quadform->add_option("--op", qf_op, "binary|R|M3|bound4|bhb")->required();
  quadform->add_option("--params", qf_params, "k=v,...");

  // suite
  auto* suite = app.add_subcommand("suite", "experiment suites with reports");
  std::string suite_name_opt = "all", suite_N_list, suite_H_list;
  std::vector<std::string> suite_alphas;
  double suite_eps = 0;
  suite->add_option("--suite", suite_name_opt, "theorem1|theorem2|lemmas|quadforms|all");
  suite->add_option("--alpha", suite_alphas, "angle specs (repeatable)");
  suite->add_option("--N-list", suite_N_list, "comma-separated");
  suite->add_option("--H-list", suite_H_list, "comma-separated");
  suite->add_option("--eps", suite_eps, "epsilon in RHS evaluators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1
  }

  try {
    set_thread_count(threads);

    if (sieve->parsed()) {
      if (format == "json")
        throw CLI::ValidationError("sieve emits a binary bitmap or --format csv");
      SievedSequence seq =
          build_sequence(sieve_kind, parse_count(sieve_limit), sieve_z);
      // --out alone gets the binary bitmap; csv lists one member per line
      if (format == "csv" || out_path.empty()) {
        std::string text;
        for (uint64_t n : seq.members()) text += std::to_string(n) + "\n";
        emit(text, out_path);
      } else {
        write_bitmap(seq, out_path);
      }
      return 0;
    }

    if (sum->parsed()) {
      uint64_t N = parse_count(sum_N);
      SievedSequence seq = build_sequence(sum_kind, N, 0);
      Window w = sum_window == "dyadic" ? Window::Dyadic : Window::Full;
      SumResult s = eval_S(seq, parse_alpha_spec(sum_alpha), N, w);
      char line[160];
      std::snprintf(line, sizeof line, "re,im,abs,terms\n%.17g,%.17g,%.17g,%llu\n",
                    s.value.real(), s.value.imag(), std::abs(s.value),
                    static_cast<unsigned long long>(s.terms));
      emit(line, out_path);
      return 0;
    }

    if (approx->parsed()) {
      ApproxResult r =
          best_approximation(parse_alpha_spec(approx_alpha), parse_count(approx_Q));
      char line[160];
      std::snprintf(line, sizeof line, "a,q,err,quality\n%llu,%llu,%.17g,%.17g\n",
                    static_cast<unsigned long long>(r.a),
                    static_cast<unsigned long long>(r.q), r.err, r.quality);
      emit(line, out_path);
      return 0;
    }

    if (verify->parsed()) {
      std::vector<uint64_t> Ns = parse_count_list(verify_N_list);
      if (Ns.empty()) throw CLI::ValidationError("--N-list is empty");
      uint64_t max_n = *std::max_element(Ns.begin(), Ns.end());
      SievedSequence seq = sieve_gaussian(max_n);
      auto rows = run_theorem_experiment(
          verify_theorem == 1 ? TheoremKind::One : TheoremKind::Two, seq,
          parse_alpha_spec(verify_alpha), Ns, {verify_H}, verify_eps);
      // default schema is the JSON row array
      emit(format == "csv" ? reports_to_csv(rows) : reports_to_json(rows) + "\n",
           out_path);
      return 0;
    }

    if (decompose->parsed()) {
      uint64_t N = parse_count(dec_N);
      DecompositionParams p;
      p.N = N;
      p.M = dec_M;
      p.M0 = dec_M0 ? dec_M0 : dec_M;
      p.z = dec_z;
      p.Z = dec_Z > 0 ? dec_Z : std::max(2.0, std::sqrt(static_cast<double>(N)));
      DecompositionCoeffs c = default_decomposition_coeffs(p);
      DecompositionTerms t = eval_decomposition_terms(
          p, parse_alpha_spec(dec_alpha), c.rho, c.alpha_l, c.beta_k);
      char buf[512];
      std::snprintf(buf, sizeof buf,
                    "term,re,im,abs,trivial\n"
                    "S1,%.17g,%.17g,%.17g,%.17g\n"
                    "S2,%.17g,%.17g,%.17g,%.17g\n"
                    "S3,%.17g,%.17g,%.17g,%.17g\n",
                    t.s1.real(), t.s1.imag(), std::abs(t.s1), t.t1, t.s2.real(),
                    t.s2.imag(), std::abs(t.s2), t.t2, t.s3.real(), t.s3.imag(),
                    std::abs(t.s3), t.t3);
      emit(buf, out_path);
      return 0;
    }

    if (lemma->parsed()) {
      auto kv = parse_kv_params(lemma_params);
      Angle alpha = parse_alpha_spec(lemma_alpha);
      std::vector<BoundReport> rows;
      double eps = get_or(kv, "eps", 0);
      if (lemma_id == "vino") {
        double X = need(kv, "X"), Y = need(kv, "Y");
        double q = static_cast<double>(
            best_approximation(alpha, static_cast<uint64_t>(X)).q);
        rows.push_back(make_report("vino", vinogradov_sum(alpha, X, Y),
                                   vinogradov_bound_rhs(X, Y, q),
                                   {{"N", X}, {"V", Y}, {"q", q}}));
      } else if (lemma_id == "kernel") {
        double x = need(kv, "x"), T = need(kv, "T"), beta = need(kv, "beta");
        KernelResult k = fourier_cutoff_kernel(x, T, beta);
        rows.push_back(make_report("kernel",
                                   std::fabs(k.estimate - (k.indicator ? 1 : 0)),
                                   k.err_allowance,
                                   {{"V", x}, {"N", T}, {"W", beta}}));
      } else {
        uint64_t N = static_cast<uint64_t>(need(kv, "N"));
        uint64_t V = static_cast<uint64_t>(need(kv, "V"));
        uint64_t W = static_cast<uint64_t>(need(kv, "W"));
        uint64_t H = static_cast<uint64_t>(get_or(kv, "H", 4));
        double q = static_cast<double>(best_approximation(alpha, N).q);
        CoeffSeq a = seeded_unimodular(static_cast<int64_t>(V) + 1,
                                       static_cast<int64_t>(2 * V), seed);
        CoeffSeq b = seeded_unimodular(static_cast<int64_t>(W) + 1,
                                       static_cast<int64_t>(2 * W), seed + 1);
        std::map<std::string, double> params = {
            {"N", static_cast<double>(N)}, {"V", static_cast<double>(V)},
            {"W", static_cast<double>(W)}, {"q", q},  {"eps", eps}};
        if (lemma_id == "linear") {
          double lhs = std::abs(type_I_sum(a, alpha, V, W, N, Congruence::None));
          rows.push_back(make_report("linear", lhs,
                                     linear_rhs(static_cast<double>(N),
                                                static_cast<double>(V), q, eps),
                                     params));
        } else if (lemma_id == "hlinear") {
          params["H"] = static_cast<double>(H);
          HAbsSum s = type_I_sum_h_avg(a, alpha, V, W, N, H,
                                       Congruence::ProductOneMod4);
          rows.push_back(make_report(
              "hlinear", s.total,
              hlinear_rhs(static_cast<double>(N), static_cast<double>(V), q,
                          static_cast<double>(H), eps),
              params));
        } else if (lemma_id == "bilinear1") {
          TypeIIResult r = type_II_sum(a, b, alpha, V, W, N, 1);
          rows.push_back(make_report(
              "bilinear1", r.abs_total,
              bilinear1_rhs(static_cast<double>(N), static_cast<double>(W), q, eps),
              params));
        } else if (lemma_id == "hbilinear") {
          params["H"] = static_cast<double>(H);
          TypeIIResult r = type_II_sum(a, b, alpha, V, W, N, H);
          rows.push_back(make_report(
              "hbilinear", r.abs_total,
              bilinear_rhs_min(static_cast<double>(N), static_cast<double>(W),
                               static_cast<double>(H), q, eps),
              params));
        } else {
          throw CLI::ValidationError("unknown lemma id: " + lemma_id);
        }
      }
      emit(format == "json" ? reports_to_json(rows) + "\n" : reports_to_csv(rows),
           out_path);
      return 0;
    }

    if (quadform->parsed()) {
      auto kv = parse_kv_params(qf_params);
      std::string text;
      if (qf_op == "binary") {
        FormCountResult r = count_binary(
            static_cast<int64_t>(need(kv, "a")), static_cast<int64_t>(need(kv, "b")),
            static_cast<int64_t>(need(kv, "c")), static_cast<int64_t>(need(kv, "P")));
        text = "op,count\nbinary," + std::to_string(r.count) + "\n";
      } else if (qf_op == "R") {
        FormCountResult r = count_R(static_cast<int64_t>(need(kv, "j")),
                                    static_cast<int64_t>(need(kv, "H")),
                                    static_cast<int64_t>(need(kv, "V")));
        text = "op,count\nR," + std::to_string(r.count) + "\n";
      } else if (qf_op == "M3") {
        FormCountResult r = count_M3(static_cast<int64_t>(need(kv, "H")),
                                     static_cast<int64_t>(need(kv, "P")),
                                     get_or(kv, "coprime", 1) != 0);
        text = "op,count\nM3," + std::to_string(r.count) + "\n";
      } else if (qf_op == "bound4") {
        BoundReport r = bound4_check(static_cast<uint64_t>(need(kv, "N")),
                                     static_cast<uint64_t>(need(kv, "W")),
                                     static_cast<uint64_t>(need(kv, "H")),
                                     get_or(kv, "eps", 0));
        text = reports_to_csv({r});
      } else if (qf_op == "bhb") {
        BhbBound b = bhb_bound_rhs(static_cast<int64_t>(need(kv, "h1")),
                                   static_cast<int64_t>(need(kv, "h2")),
                                   static_cast<int64_t>(need(kv, "h3")),
                                   static_cast<int64_t>(need(kv, "h4")),
                                   need(kv, "P"), get_or(kv, "eps", 0));
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "delta_q,norm_q,delta_bad,rhs,hypothesis_ok\n"
                      "%.17g,%.17g,%.17g,%.17g,%d\n",
                      b.delta_q, b.norm_q, b.delta_bad, b.rhs,
                      b.hypothesis_ok ? 1 : 0);
        text = buf;
      } else {
        throw CLI::ValidationError("unknown quadform op: " + qf_op);
      }
      emit(text, out_path);
      return 0;
    }

    if (suite->parsed()) {
      ExperimentConfig cfg;
      cfg.suite = parse_suite(suite_name_opt);
      cfg.alpha_specs = suite_alphas;
      cfg.N_list = parse_count_list(suite_N_list);
      cfg.H_list = parse_count_list(suite_H_list);
      cfg.eps = suite_eps;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.out_path = out_path.empty() ? "report" : out_path;
      SuiteResult result = run_suite(cfg);
      write_suite_report(result, cfg.out_path);
      std::fprintf(stderr, "%zu rows, %d invariant violations\n",
                   result.rows.size(), result.violations);
      return result.violations > 0 ? 2 : 0;
    }
  } catch (const InvariantViolation& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return 2;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
