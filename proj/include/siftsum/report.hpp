#pragma once

#include <map>
#include <string>
#include <vector>

namespace siftsum {

/// One measured lemma/theorem instance: exact LHS against the evaluated RHS
/// expression.  The ratio is the stand-in for the unknown absolute constant.
struct BoundReport {
  std::string lemma_id;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::map<std::string, double> params;  // keys among N,q,H,V,W,z,M,eps
};

BoundReport make_report(std::string lemma_id, double lhs, double rhs,
                        std::map<std::string, double> params);

/// Stable order for diffable output: (lemma_id, N, q, H).
void sort_reports(std::vector<BoundReport>& rows);

std::string reports_to_csv(const std::vector<BoundReport>& rows);
std::string reports_to_json(const std::vector<BoundReport>& rows);

}  // namespace siftsum
