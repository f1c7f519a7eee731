#pragma once

#include <string>
#include <vector>

namespace rif {

struct CriterionResult {
  int id = 0;
  std::string title;
  std::size_t instances = 0, required = 0;
  double seconds = 0, limit_seconds = 0;
  std::vector<std::string> failures;  // one line per failed check, capped
  std::size_t failure_count = 0;

  bool passed() const { return failure_count == 0 && instances >= required && seconds < limit_seconds; }
};

// Criteria are numbered 1..9.
constexpr int kCriteria = 9;
CriterionResult run_criterion(int id);
// "criterion 3 PASS  localization well-definedness  instances=24/20  time=1.2s/60s", plus the first failure.
std::string format_criterion(const CriterionResult& r);

}  // namespace rif
