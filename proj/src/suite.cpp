#include "siftsum/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "siftsum/bilinear.hpp"
#include "siftsum/diophantine.hpp"
#include "siftsum/expsum.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/quadform.hpp"
#include "siftsum/sieve.hpp"

namespace siftsum {

SuiteKind parse_suite(const std::string& name) {
  if (name == "theorem1") return SuiteKind::Theorem1;
  if (name == "theorem2") return SuiteKind::Theorem2;
  if (name == "lemmas") return SuiteKind::Lemmas;
  if (name == "quadforms") return SuiteKind::Quadforms;
  if (name == "all") return SuiteKind::All;
  throw std::invalid_argument("unknown suite: " + name);
}

std::string suite_name(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Theorem1: return "theorem1";
    case SuiteKind::Theorem2: return "theorem2";
    case SuiteKind::Lemmas: return "lemmas";
    case SuiteKind::Quadforms: return "quadforms";
    case SuiteKind::All: return "all";
  }
  return "all";
}

namespace {

// exact binary long division of 0.(digits) by 10^k, 128 bits out
u128 decimal_digits_to_frac128(const std::string& digits) {
  u128 num = 0;
  u128 den = 1;
  int used = 0;
  for (char ch : digits) {
    if (used >= 36) break;  // 10^36 < 2^120 keeps the doubling below 2^128
    num = num * 10 + static_cast<unsigned>(ch - '0');
    den *= 10;
    ++used;
  }
  u128 frac = 0;
  for (int bit = 127; bit >= 0; --bit) {
    num *= 2;
    if (num >= den) {
      num -= den;
      frac |= static_cast<u128>(1) << bit;
    }
  }
  return frac;
}

}  // namespace

Angle parse_alpha_spec(const std::string& spec) {
  auto fail = [&]() -> Angle {
    throw std::invalid_argument("bad alpha spec: " + spec);
  };
  if (spec.rfind("rat:", 0) == 0) {
    const std::string body = spec.substr(4);
    size_t slash = body.find('/');
    if (slash == std::string::npos) return fail();
    try {
      int64_t a = std::stoll(body.substr(0, slash));
      int64_t q = std::stoll(body.substr(slash + 1));
      if (q <= 0) return fail();
      return Angle::rational(a, q);
    } catch (const std::logic_error&) {
      return fail();
    }
  }
  if (spec.rfind("dec:", 0) == 0) {
    std::string body = spec.substr(4);
    if (body.empty()) return fail();
    size_t dot = body.find('.');
    std::string int_part = dot == std::string::npos ? body : body.substr(0, dot);
    std::string frac_part = dot == std::string::npos ? "" : body.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return fail();
    for (char ch : int_part)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return fail();
    for (char ch : frac_part)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return fail();
    return Angle::fixed_point(decimal_digits_to_frac128(frac_part));
  }
  if (spec == "quad:sqrt2") return sqrt2_angle();
  if (spec == "quad:golden") return golden_angle();
  return fail();
}

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

CoeffSeq seeded_unimodular(int64_t lo, int64_t hi, std::mt19937_64& rng) {
  CoeffSeq s(lo, hi, 1.0);
  for (int64_t i = lo; i <= hi; ++i) {
    Phase p = unit_phase(u01(rng));
    s.set(i, {p.re, p.im});
  }
  return s;
}

void append_theorem_rows(std::vector<BoundReport>& rows,
                         const ExperimentConfig& cfg, TheoremKind kind) {
  if (cfg.alpha_specs.empty())
    throw std::invalid_argument("suite: alpha spec list is empty");
  if (cfg.N_list.empty()) throw std::invalid_argument("suite: N list is empty");
  if (kind == TheoremKind::Two && cfg.H_list.empty())
    throw std::invalid_argument("suite: H list is empty");
  uint64_t max_n = *std::max_element(cfg.N_list.begin(), cfg.N_list.end());
  SievedSequence seq = sieve_gaussian(max_n);
  for (const std::string& spec : cfg.alpha_specs) {
    Angle alpha = parse_alpha_spec(spec);
    auto batch =
        run_theorem_experiment(kind, seq, alpha, cfg.N_list, cfg.H_list, cfg.eps);
    rows.insert(rows.end(), batch.begin(), batch.end());
  }
}

void append_lemma_rows(std::vector<BoundReport>& rows,
                       const ExperimentConfig& cfg, int* violations) {
  if (cfg.alpha_specs.empty())
    throw std::invalid_argument("suite: alpha spec list is empty");
  std::mt19937_64 rng(cfg.seed);
  const uint64_t N = 10000, V = 100, W = 25, H = 4;
  CoeffSeq a = seeded_unimodular(static_cast<int64_t>(V) + 1, 2 * V, rng);
  CoeffSeq b = seeded_unimodular(static_cast<int64_t>(W) + 1,
                                 static_cast<int64_t>(std::min(2 * W, N)), rng);
  for (const std::string& spec : cfg.alpha_specs) {
    Angle alpha = parse_alpha_spec(spec);
    double q = static_cast<double>(best_approximation(alpha, N).q);
    try {
      {
        double lhs = vinogradov_sum(alpha, static_cast<double>(N), 1000.0);
        rows.push_back(make_report(
            "vino", lhs, vinogradov_bound_rhs(static_cast<double>(N), 1000.0, q),
            {{"N", static_cast<double>(N)}, {"V", 1000.0}, {"q", q}}));
      }
      {
        double lhs = std::abs(type_I_sum(a, alpha, V, W, N, Congruence::None));
        rows.push_back(make_report(
            "linear", lhs,
            linear_rhs(static_cast<double>(N), static_cast<double>(V), q, cfg.eps),
            {{"N", static_cast<double>(N)},
             {"V", static_cast<double>(V)},
             {"W", static_cast<double>(W)},
             {"q", q},
             {"eps", cfg.eps}}));
      }
      {
        HAbsSum lhs = type_I_sum_h_avg(a, alpha, V, W, N, H,
                                       Congruence::ProductOneMod4);
        rows.push_back(make_report(
            "hlinear", lhs.total,
            hlinear_rhs(static_cast<double>(N), static_cast<double>(V), q,
                        static_cast<double>(H), cfg.eps),
            {{"N", static_cast<double>(N)},
             {"V", static_cast<double>(V)},
             {"W", static_cast<double>(W)},
             {"H", static_cast<double>(H)},
             {"q", q},
             {"eps", cfg.eps}}));
      }
      {
        TypeIIResult r = type_II_sum(a, b, alpha, V, W, N, 1);
        rows.push_back(make_report(
            "bilinear1", r.abs_total,
            bilinear1_rhs(static_cast<double>(N), static_cast<double>(W), q, cfg.eps),
            {{"N", static_cast<double>(N)},
             {"V", static_cast<double>(V)},
             {"W", static_cast<double>(W)},
             {"q", q},
             {"eps", cfg.eps}}));
      }
      {
        TypeIIResult r = type_II_sum(a, b, alpha, V, W, N, H);
        rows.push_back(make_report(
            "hbilinear", r.abs_total,
            bilinear_rhs_min(static_cast<double>(N), static_cast<double>(W),
                             static_cast<double>(H), q, cfg.eps),
            {{"N", static_cast<double>(N)},
             {"V", static_cast<double>(V)},
             {"W", static_cast<double>(W)},
             {"H", static_cast<double>(H)},
             {"q", q},
             {"eps", cfg.eps}}));
      }
    } catch (const InvariantViolation&) {
      ++*violations;
    }
  }
  // kernel rows are angle-independent
  for (double x : {1.0, 5.0}) {
    for (double T : {100.0, 1000.0}) {
      double beta = 0.75 * x;
      try {
        KernelResult k = fourier_cutoff_kernel(x, T, beta);
        rows.push_back(make_report(
            "kernel", std::fabs(k.estimate - (k.indicator ? 1.0 : 0.0)),
            k.err_allowance, {{"V", x}, {"N", T}, {"W", beta}}));
      } catch (const InvariantViolation&) {
        ++*violations;
      }
    }
  }
}

void append_quadform_rows(std::vector<BoundReport>& rows,
                          const ExperimentConfig& cfg, int* violations) {
  try {
    rows.push_back(bound4_check(1000, 100, 2, cfg.eps));
    rows.push_back(bound4_check(1000, 100, 4, cfg.eps));
    for (int64_t HP : {4, 6}) {
      FormCountResult c = count_M3(HP, HP, /*coprime=*/true, CountMethod::Hashed);
      rows.push_back(make_report(
          "m3", static_cast<double>(c.count),
          m3_bound_rhs(static_cast<double>(HP), static_cast<double>(HP), cfg.eps),
          {{"H", static_cast<double>(HP)},
           {"V", static_cast<double>(HP)},
           {"eps", cfg.eps}}));
    }
  } catch (const InvariantViolation&) {
    ++*violations;
  }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["suite"] = suite_name(cfg.suite);
  j["alpha_specs"] = cfg.alpha_specs;
  j["N_list"] = cfg.N_list;
  j["H_list"] = cfg.H_list;
  j["eps"] = cfg.eps;
  j["seed"] = cfg.seed;
  j["out_path"] = cfg.out_path;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace

SuiteResult run_suite(const ExperimentConfig& config) {
  set_thread_count(config.threads);
  SuiteResult result;
  const SuiteKind kind = config.suite;
  if (kind == SuiteKind::Theorem1 || kind == SuiteKind::All)
    append_theorem_rows(result.rows, config, TheoremKind::One);
  if (kind == SuiteKind::Theorem2 || kind == SuiteKind::All)
    append_theorem_rows(result.rows, config, TheoremKind::Two);
  if (kind == SuiteKind::Lemmas || kind == SuiteKind::All)
    append_lemma_rows(result.rows, config, &result.violations);
  if (kind == SuiteKind::Quadforms || kind == SuiteKind::All)
    append_quadform_rows(result.rows, config, &result.violations);
  sort_reports(result.rows);

  nlohmann::json report;
  report["meta"] = {{"version", kVersion},
                    {"seed", config.seed},
                    {"threads", thread_count()},
                    {"config", config_to_json(config)}};
  report["rows"] = nlohmann::json::parse(reports_to_json(result.rows));
  result.json_text = report.dump(2);
  result.csv_text = reports_to_csv(result.rows);
  return result;
}

void write_suite_report(const SuiteResult& result, const std::string& out_path) {
  std::string base = out_path;
  if (base.size() >= 5 && base.substr(base.size() - 5) == ".json")
    base = base.substr(0, base.size() - 5);
  for (const auto& [path, text] :
       {std::pair{base + ".json", result.json_text},
        std::pair{base + ".csv", result.csv_text}}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IOError("write failed: " + path);
  }
}

ExperimentConfig config_from_json(const std::string& report_json) {
  nlohmann::json j = nlohmann::json::parse(report_json);
  const nlohmann::json& c = j.at("meta").at("config");
  ExperimentConfig cfg;
  cfg.suite = parse_suite(c.at("suite").get<std::string>());
  cfg.alpha_specs = c.at("alpha_specs").get<std::vector<std::string>>();
  cfg.N_list = c.at("N_list").get<std::vector<uint64_t>>();
  cfg.H_list = c.at("H_list").get<std::vector<uint64_t>>();
  cfg.eps = c.at("eps").get<double>();
  cfg.seed = c.at("seed").get<uint64_t>();
  cfg.out_path = c.at("out_path").get<std::string>();
  cfg.threads = c.at("threads").get<int>();
  return cfg;
}

}  // namespace siftsum
