#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bvn {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the acceptance criteria at their stated sample sizes. Deterministic in
// the seed; progress lines go to `progress` when given.
std::vector<CriterionResult> run_acceptance(uint64_t seed, std::ostream* progress = nullptr);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace bvn
