#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "siftsum/parallel.hpp"
#include "siftsum/suite.hpp"

using namespace siftsum;

namespace {

// |f^2 + c1 * f * 2^128 - c0 * 2^256| / 2^256 as limbs, for checking the
// minimal polynomial of a 128-bit fixed-point constant x = f / 2^128:
// x^2 + c1 x - c0 = 0.  Returns the absolute value scaled by 2^-256 exactly
// enough to compare against 2^-120.
long double poly_abs(u128 f, unsigned c1, unsigned c0) {
  // limbs base 2^64: f = fh * 2^64 + fl
  uint64_t fl = static_cast<uint64_t>(f);
  uint64_t fh = static_cast<uint64_t>(f >> 64);
  // f^2 = fh^2 * 2^128 + 2 fh fl * 2^64 + fl^2 as limbs v0..v3
  u128 ll = static_cast<u128>(fl) * fl;
  u128 hl = static_cast<u128>(fh) * fl;
  u128 hh = static_cast<u128>(fh) * fh;
  uint64_t v[4] = {0, 0, 0, 0};
  auto add_at = [&](int idx, uint64_t x) {
    for (int i = idx; i < 4 && x; ++i) {
      uint64_t old = v[i];
      v[i] = old + x;
      x = v[i] < old ? 1 : 0;
    }
  };
  add_at(0, static_cast<uint64_t>(ll));
  add_at(1, static_cast<uint64_t>(ll >> 64));
  add_at(1, static_cast<uint64_t>(hl));
  add_at(2, static_cast<uint64_t>(hl >> 64));
  add_at(1, static_cast<uint64_t>(hl));
  add_at(2, static_cast<uint64_t>(hl >> 64));
  add_at(2, static_cast<uint64_t>(hh));
  add_at(3, static_cast<uint64_t>(hh >> 64));
  // + c1 * f * 2^128
  u128 c1f_lo = static_cast<u128>(fl) * c1;
  u128 c1f_hi = static_cast<u128>(fh) * c1;
  add_at(2, static_cast<uint64_t>(c1f_lo));
  add_at(3, static_cast<uint64_t>(c1f_lo >> 64));
  add_at(3, static_cast<uint64_t>(c1f_hi));
  // - c0 * 2^256: the total is known to sit just below or above c0 * 2^256,
  // so compare against it through the top limbs.
  long double total = 0;
  for (int i = 3; i >= 0; --i) total = total * 0x1p64L + static_cast<long double>(v[i]);
  long double target = static_cast<long double>(c0) * 0x1p128L * 0x1p128L;
  long double diff = total - target;
  return diff < 0 ? (-diff) * 0x1p-128L * 0x1p-128L : diff * 0x1p-128L * 0x1p-128L;
}

}  // namespace

TEST_CASE("alpha spec parsing") {
  Angle r = parse_alpha_spec("rat:3/8");
  CHECK(r.is_rational());
  CHECK(r.numerator() == 3);
  CHECK(r.denominator() == 8);

  Angle quarter = parse_alpha_spec("dec:0.25");
  CHECK_FALSE(quarter.is_rational());
  CHECK(quarter.frac_bits() == static_cast<u128>(1) << 126);

  Angle d = parse_alpha_spec("dec:0.4142135623730950488");
  CHECK(d.value() == doctest::Approx(0.41421356237309504).epsilon(1e-15));

  CHECK_THROWS_AS(parse_alpha_spec("rat:1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("rat:5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("dec:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("quad:pi"), std::invalid_argument);
  CHECK_THROWS_AS(parse_alpha_spec("nonsense"), std::invalid_argument);
}

TEST_CASE("quad constants satisfy their minimal polynomials to 2^-120") {
  // golden: x^2 + x - 1 = 0; sqrt2 fraction: x^2 + 2x - 1 = 0
  Angle golden = parse_alpha_spec("quad:golden");
  CHECK(poly_abs(golden.frac_bits(), 1, 1) <= 0x1p-120L);
  Angle s2 = parse_alpha_spec("quad:sqrt2");
  CHECK(poly_abs(s2.frac_bits(), 2, 1) <= 0x1p-120L);
}

TEST_CASE("suite: theorem1 single row at alpha = 0") {
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Theorem1;
  cfg.alpha_specs = {"rat:0/1"};
  cfg.N_list = {10};
  SuiteResult r = run_suite(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].lemma_id == "theorem1");
  CHECK(r.rows[0].lhs == doctest::Approx(2.0));  // B(10)
  CHECK(r.violations == 0);
}

TEST_CASE("suite: empty lists are usage errors") {
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Theorem1;
  cfg.alpha_specs = {"rat:0/1"};
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  cfg.N_list = {10};
  cfg.alpha_specs.clear();
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  cfg.suite = SuiteKind::Theorem2;
  cfg.alpha_specs = {"rat:0/1"};
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);  // H list empty
}

TEST_CASE("suite rows are sorted and reports parse back") {
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Theorem2;
  cfg.alpha_specs = {"quad:sqrt2", "rat:1/7"};
  cfg.N_list = {200, 100};
  cfg.H_list = {4, 2};
  cfg.seed = 9;
  SuiteResult r = run_suite(cfg);
  REQUIRE(r.rows.size() == 8);
  for (size_t i = 1; i < r.rows.size(); ++i) {
    const auto &a = r.rows[i - 1], &b = r.rows[i];
    auto key = [](const BoundReport& x) {
      return std::tuple{x.lemma_id, x.params.at("N"), x.params.at("q"),
                        x.params.at("H")};
    };
    CHECK(key(a) <= key(b));
  }
  ExperimentConfig round = config_from_json(r.json_text);
  CHECK(round == cfg);

  nlohmann::json j = nlohmann::json::parse(r.json_text);
  CHECK(j.at("meta").at("version").get<std::string>() == kVersion);
  CHECK(j.at("rows").size() == 8);
}

TEST_CASE("suite report bodies are thread-count independent") {
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Lemmas;
  cfg.alpha_specs = {"quad:golden"};
  cfg.seed = 4;
  cfg.threads = 1;
  SuiteResult one = run_suite(cfg);
  cfg.threads = 8;
  SuiteResult eight = run_suite(cfg);
  set_thread_count(0);
  CHECK(one.csv_text == eight.csv_text);
  CHECK(reports_to_json(one.rows) == reports_to_json(eight.rows));
  CHECK(one.json_text != eight.json_text);  // meta.threads differs
}

TEST_CASE("suite writes the JSON report and its CSV twin") {
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Quadforms;
  cfg.out_path = "suite_test_report.json";
  SuiteResult r = run_suite(cfg);
  write_suite_report(r, cfg.out_path);
  std::ifstream jf("suite_test_report.json");
  REQUIRE(jf.good());
  nlohmann::json parsed;
  jf >> parsed;
  CHECK(parsed.contains("rows"));
  std::ifstream cf("suite_test_report.csv");
  REQUIRE(cf.good());
  std::string header;
  std::getline(cf, header);
  CHECK(header == "lemma_id,N,q,H,V,W,z,M,eps,lhs,rhs,ratio");
  std::remove("suite_test_report.json");
  std::remove("suite_test_report.csv");
}

TEST_CASE("write_suite_report raises IOError on unwritable paths") {
  SuiteResult r;
  CHECK_THROWS_AS(write_suite_report(r, "/nonexistent-dir/report.json"), IOError);
}

TEST_CASE("lemma ratios on the standard grid stay under their pins") {
  // calibrated once on this grid (seed 1), asserted as regressions
  const std::map<std::string, double> pins = {
      {"linear", 0.006},    {"hlinear", 0.002}, {"bilinear1", 0.003},
      {"hbilinear", 0.003}, {"vino", 1.10},     {"kernel", 0.26}};
  ExperimentConfig cfg;
  cfg.suite = SuiteKind::Lemmas;
  cfg.alpha_specs = {"quad:golden", "quad:sqrt2", "rat:5/12"};
  cfg.seed = 1;
  SuiteResult r = run_suite(cfg);
  CHECK(r.violations == 0);
  REQUIRE(!r.rows.empty());
  for (const BoundReport& row : r.rows) {
    CAPTURE(row.lemma_id);
    REQUIRE(pins.count(row.lemma_id) == 1);
    CHECK(row.ratio <= pins.at(row.lemma_id));
  }
}

TEST_CASE("SIFTSUM_THREADS is the fallback worker count") {
  set_thread_count(0);
  setenv("SIFTSUM_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  unsetenv("SIFTSUM_THREADS");
  set_thread_count(2);
  CHECK(thread_count() == 2);
  set_thread_count(0);
}
