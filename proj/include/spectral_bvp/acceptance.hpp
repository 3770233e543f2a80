#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sbvp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool counted = true;  // supplementary lines do not affect the verdict
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned seed = 20240611;
  std::vector<int> only;  // empty runs every criterion
};

int acceptance_count();
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});
// One line per result, without timings so that the output is reproducible.
std::string format_result(const CriterionResult& r);

}  // namespace sbvp
