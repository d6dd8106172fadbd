#include "siftsum/report.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "siftsum/angle.hpp"

namespace siftsum {

namespace {

const char* const kCsvColumns[] = {"N", "q", "H", "V", "W", "z", "M", "eps"};

double param_or(const BoundReport& r, const char* key, double dflt) {
  auto it = r.params.find(key);
  return it == r.params.end() ? dflt : it->second;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BoundReport make_report(std::string lemma_id, double lhs, double rhs,
                        std::map<std::string, double> params) {
  if (!(rhs > 0)) throw InvariantViolation("BoundReport: rhs must be positive");
  BoundReport r;
  r.lemma_id = std::move(lemma_id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.params = std::move(params);
  return r;
}

void sort_reports(std::vector<BoundReport>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BoundReport& a, const BoundReport& b) {
                     if (a.lemma_id != b.lemma_id) return a.lemma_id < b.lemma_id;
                     for (const char* key : {"N", "q", "H"}) {
                       double x = param_or(a, key, 0), y = param_or(b, key, 0);
                       if (x != y) return x < y;
                     }
                     return false;
                   });
}

std::string reports_to_csv(const std::vector<BoundReport>& rows) {
  std::string out = "lemma_id";
  for (const char* c : kCsvColumns) {
    out += ',';
    out += c;
  }
  out += ",lhs,rhs,ratio\n";
  for (const auto& r : rows) {
    out += r.lemma_id;
    for (const char* c : kCsvColumns) {
      out += ',';
      auto it = r.params.find(c);
      if (it != r.params.end()) out += fmt_double(it->second);
    }
    out += ',' + fmt_double(r.lhs) + ',' + fmt_double(r.rhs) + ',' +
           fmt_double(r.ratio) + '\n';
  }
  return out;
}

std::string reports_to_json(const std::vector<BoundReport>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["lemma_id"] = r.lemma_id;
    row["lhs"] = r.lhs;
    row["rhs"] = r.rhs;
    row["ratio"] = r.ratio;
    row["params"] = r.params;
    arr.push_back(std::move(row));
  }
  return arr.dump(2);
}

}  // namespace siftsum
