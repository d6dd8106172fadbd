#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siftsum/angle.hpp"
#include "siftsum/report.hpp"

namespace siftsum {

inline constexpr const char* kVersion = "0.1.0";

enum class SuiteKind { Theorem1, Theorem2, Lemmas, Quadforms, All };

SuiteKind parse_suite(const std::string& name);  // throws invalid_argument
std::string suite_name(SuiteKind kind);

struct ExperimentConfig {
  SuiteKind suite = SuiteKind::All;
  std::vector<std::string> alpha_specs;
  std::vector<uint64_t> N_list;
  std::vector<uint64_t> H_list;
  double eps = 0;
  uint64_t seed = 1;
  std::string out_path = "report";
  int threads = 0;  // 0 = auto

  bool operator==(const ExperimentConfig&) const = default;
};

/// Angle from "rat:a/q", "dec:0.414...", "quad:sqrt2" or "quad:golden".
/// Decimal specs keep at most 36 fractional digits (exactly converted to the
/// 128-bit fixed-point representation).  Throws std::invalid_argument.
Angle parse_alpha_spec(const std::string& spec);

struct SuiteResult {
  std::vector<BoundReport> rows;
  std::string json_text;  // full report: meta + rows
  std::string csv_text;
  int violations = 0;
};

/// Runs the configured experiment suite.  Throws std::invalid_argument on an
/// unusable config (usage error); invariant violations during row evaluation
/// are counted, not thrown.
SuiteResult run_suite(const ExperimentConfig& config);

/// Writes the JSON report and its CSV twin next to it.
void write_suite_report(const SuiteResult& result, const std::string& out_path);

/// Round-trip of the config embedded in report meta.
ExperimentConfig config_from_json(const std::string& report_json);

}  // namespace siftsum
